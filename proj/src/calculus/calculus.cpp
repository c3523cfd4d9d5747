#include "jpit/calculus.hpp"

#include <algorithm>
#include <optional>

#include "jpit/errors.hpp"

namespace jpit {
namespace {

std::vector<std::pair<NodeId, std::uint64_t>> as_powprod(const Gate& g) {
  std::vector<std::pair<NodeId, std::uint64_t>> fs;
  if (auto* m = std::get_if<Mul>(&g)) {
    for (NodeId ch : m->children) {
      auto it = std::find_if(fs.begin(), fs.end(), [&](auto& f) { return f.first == ch; });
      if (it != fs.end()) {
        ++it->second;
      } else {
        fs.emplace_back(ch, 1);
      }
    }
  } else {
    fs = std::get<PowProd>(g).factors;
  }
  return fs;
}

}  // namespace

Circuit derive_circuit(const Circuit& src, std::size_t var) {
  if (var >= src.nvars()) {
    throw ArityError("derivative variable x" + std::to_string(var + 1) + " outside 1.." +
                     std::to_string(src.nvars()));
  }
  const Circuit c = compact(src);
  Circuit out(c.field(), c.nvars());
  out.import(c);  // node i of c is node i of out
  const std::size_t n = c.node_count();
  std::vector<std::optional<NodeId>> d(n);  // nullopt: derivative is zero
  std::optional<NodeId> one;
  auto one_node = [&]() {
    if (!one) one = out.constant(1);
    return *one;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const Gate& g = c.node(static_cast<NodeId>(i));
    if (auto* in = std::get_if<Input>(&g)) {
      if (in->var == var) d[i] = one_node();
    } else if (std::holds_alternative<Const>(g)) {
      // zero
    } else if (auto* l = std::get_if<Leaf>(&g)) {
      SparsePoly dp = l->poly.partial(var);
      if (!dp.is_zero()) d[i] = out.leaf(std::move(dp));
    } else if (auto* a = std::get_if<Add>(&g)) {
      std::vector<NodeId> terms;
      for (NodeId ch : a->children) {
        if (d[ch]) terms.push_back(*d[ch]);
      }
      if (!terms.empty()) d[i] = terms.size() == 1 ? terms[0] : out.add(std::move(terms));
    } else {
      // d(prod h_k^e_k) = sum_k e_k h_k^(e_k-1) dh_k prod_{l != k} h_l^e_l
      auto fs = as_powprod(g);
      std::vector<NodeId> terms;
      for (std::size_t k = 0; k < fs.size(); ++k) {
        if (!d[fs[k].first]) continue;
        std::vector<std::pair<NodeId, std::uint64_t>> rest;
        for (std::size_t l = 0; l < fs.size(); ++l) {
          std::uint64_t e = l == k ? fs[l].second - 1 : fs[l].second;
          if (e > 0) rest.emplace_back(fs[l].first, e);
        }
        std::vector<NodeId> factors;
        if (fs[k].second > 1) factors.push_back(out.constant(fs[k].second));
        if (!rest.empty()) factors.push_back(out.powprod(std::move(rest)));
        factors.push_back(*d[fs[k].first]);
        terms.push_back(factors.size() == 1 ? factors[0] : out.mul(std::move(factors)));
      }
      if (!terms.empty()) d[i] = terms.size() == 1 ? terms[0] : out.add(std::move(terms));
    }
  }
  NodeId r = d[c.root()] ? *d[c.root()] : out.constant(0);
  out.set_root(r);
  return compact(out);
}

Matrix JacobianMatrix::evaluate(std::span<const std::uint64_t> point) const {
  Matrix m(rows.size(), std::vector<std::uint64_t>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) m[i][j] = eval_circuit(entries[i][j], point);
  }
  return m;
}

std::uint64_t JacobianMatrix::minor_degree_bound() const {
  std::uint64_t total = 0;
  for (const auto& row : entries) {
    std::uint64_t best = 0;
    for (const auto& e : row) best = std::max(best, analyze(e).syntactic_degree);
    total += best;
  }
  return total;
}

JacobianMatrix jacobian(const std::vector<Circuit>& fs, const std::vector<std::size_t>& cols) {
  if (fs.empty()) throw PreconditionError("jacobian of an empty set");
  if (cols.empty()) throw PreconditionError("jacobian with no columns");
  for (const auto& f : fs) {
    if (f.field() != fs[0].field()) throw FieldMismatch("jacobian rows over different fields");
    if (f.nvars() != fs[0].nvars()) throw ArityError("jacobian rows over different variables");
  }
  JacobianMatrix J{fs, cols, {}};
  for (const auto& f : fs) {
    std::vector<Circuit> row;
    for (std::size_t v : cols) row.push_back(derive_circuit(f, v));
    J.entries.push_back(std::move(row));
  }
  return J;
}

JacobianMatrix jacobian(const std::vector<Circuit>& fs) {
  if (fs.empty()) throw PreconditionError("jacobian of an empty set");
  std::vector<std::size_t> cols(fs[0].nvars());
  for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
  return jacobian(fs, cols);
}

namespace {

void check_confidence(const PrimeField& f, std::uint64_t degree, std::size_t dim) {
  unsigned __int128 need = static_cast<unsigned __int128>(std::max<std::uint64_t>(degree, 1)) *
                           std::max<std::size_t>(dim, 1);
  if (f.modulus() <= need) {
    throw PreconditionError("modulus " + std::to_string(f.modulus()) +
                            " too small for rank confidence (need > " +
                            std::to_string(static_cast<std::uint64_t>(need)) + ")");
  }
}

std::vector<std::uint64_t> trial_point(const Rng& rng, std::size_t t, const PrimeField& f,
                                       std::size_t n) {
  Rng r = rng.split(t);
  return r.field_point(f, n);
}

Matrix select_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
  Matrix out;
  for (std::size_t r : rows) out.push_back(m[r]);
  return out;
}

}  // namespace

std::size_t prob_rank(const JacobianMatrix& J, const Rng& rng, std::size_t trials) {
  if (trials < 1) throw PreconditionError("prob_rank needs at least one trial");
  const PrimeField& f = J.rows[0].field();
  check_confidence(f, J.minor_degree_bound(), std::max(J.row_count(), J.col_count()));
  std::size_t best = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    auto pt = trial_point(rng, t, f, J.rows[0].nvars());
    best = std::max(best, matrix_rank(f, J.evaluate(pt)));
  }
  return best;
}

TrdegReport trdeg(const std::vector<Circuit>& fs, const Rng& rng, std::size_t trials) {
  if (trials < 1) throw PreconditionError("trdeg needs at least one trial");
  if (fs.empty()) throw PreconditionError("trdeg of an empty set");
  const PrimeField& f = fs[0].field();
  const std::size_t n = fs[0].nvars();
  TrdegReport rep;
  rep.trials = trials;
  rep.seed = rng.seed();
  rep.modulus = f.modulus();
  if (n == 0) {
    rep.points.assign(trials, {});
    return rep;
  }

  // The Jacobian criterion needs char > d^r; r <= min(m, n).
  std::uint64_t d = 1;
  for (const auto& c : fs) d = std::max(d, analyze(c).syntactic_degree);
  unsigned __int128 bound = 1;
  for (std::size_t i = 0; i < std::min(fs.size(), n); ++i) {
    bound *= d;
    if (bound >= f.modulus()) {
      throw PreconditionError("modulus " + std::to_string(f.modulus()) +
                              " does not exceed d^r for d = " + std::to_string(d));
    }
  }

  JacobianMatrix J = jacobian(fs);
  check_confidence(f, J.minor_degree_bound(), std::max(J.row_count(), J.col_count()));
  std::vector<Matrix> vals;
  for (std::size_t t = 0; t < trials; ++t) {
    rep.points.push_back(trial_point(rng, t, f, n));
    vals.push_back(J.evaluate(rep.points.back()));
  }
  auto rank_of = [&](const std::vector<std::size_t>& rows) {
    std::size_t best = 0;
    for (const auto& m : vals) best = std::max(best, matrix_rank(f, select_rows(m, rows)));
    return best;
  };
  for (std::size_t i = 0; i < fs.size(); ++i) {
    auto cand = rep.basis;
    cand.push_back(i);
    if (rank_of(cand) > rep.basis.size()) rep.basis = std::move(cand);
  }
  rep.trdeg = rep.basis.size();
  if (rep.trdeg == 0) return rep;
  for (std::size_t t = 0; t < trials; ++t) {
    Matrix sub = select_rows(vals[t], rep.basis);
    if (matrix_rank(f, sub) == rep.trdeg) {
      rep.witness_point = t;
      rep.witness_cols = greedy_row_basis(f, transpose(sub));
      break;
    }
  }
  return rep;
}

TrdegReport trdeg(const std::vector<SparsePoly>& fs, const Rng& rng, std::size_t trials) {
  std::vector<Circuit> cs;
  for (const auto& p : fs) cs.push_back(Circuit::from_poly(p));
  return trdeg(cs, rng, trials);
}

nlohmann::json to_json(const TrdegReport& r) {
  auto one_based = [](const std::vector<std::size_t>& v) {
    std::vector<std::size_t> out;
    for (auto x : v) out.push_back(x + 1);
    return out;
  };
  return {{"trdeg", r.trdeg},
          {"basis", one_based(r.basis)},
          {"witness_cols", one_based(r.witness_cols)},
          {"trials", r.trials},
          {"seed", r.seed},
          {"modulus", r.modulus},
          {"points", r.points},
          {"witness_point", r.witness_point}};
}

bool is_faithful(const Homomorphism& phi, const std::vector<Circuit>& fs, const Rng& rng,
                 std::size_t trials) {
  if (fs.empty()) return true;
  if (phi.source_nvars != fs[0].nvars()) throw ArityError("map arity differs from circuits");
  std::vector<Circuit> images;
  for (const auto& c : fs) images.push_back(apply_hom(phi, c));
  std::size_t before = trdeg(fs, rng, trials).trdeg;
  std::size_t after = phi.target_nvars == 0 ? 0 : trdeg(images, rng.split(1000), trials).trdeg;
  return before == after;
}

bool preserves_jacobian_rank(const Homomorphism& phi, const std::vector<Circuit>& fs,
                             const Rng& rng, std::size_t trials) {
  if (fs.empty()) return true;
  if (phi.source_nvars != fs[0].nvars()) throw ArityError("map arity differs from circuits");
  const PrimeField& f = fs[0].field();
  JacobianMatrix J = jacobian(fs);
  std::size_t full = prob_rank(J, rng, trials);
  std::size_t after = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    auto a = trial_point(rng.split(2000), t, f, phi.target_nvars);
    auto b = phi.evaluate(a);
    after = std::max(after, matrix_rank(f, J.evaluate(b)));
  }
  return after == full;
}

}  // namespace jpit
