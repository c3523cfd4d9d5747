#include "jpit/gens.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "jpit/errors.hpp"

namespace jpit {
namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s < a ? UINT64_MAX : s;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  if (p > UINT64_MAX) throw CapExceeded(what, "more than 2^64");
  return static_cast<std::uint64_t>(p);
}

std::string big_str(const BigInt& v) { return v.str(); }

std::uint64_t clamp_u64(const BigInt& v) {
  return v > BigInt(UINT64_MAX) ? UINT64_MAX : v.convert_to<std::uint64_t>();
}

bool exceeds_modulus(const PrimeField& f, const BigInt& v) { return v >= BigInt(f.modulus()); }

// s^e compared against the modulus without building huge powers.
bool power_reaches(const PrimeField& f, std::uint64_t s, const BigInt& e) {
  if (s <= 1) return exceeds_modulus(f, BigInt(s));
  if (e >= 64) return true;
  return exceeds_modulus(f, boost::multiprecision::pow(BigInt(s), e.convert_to<unsigned>()));
}

}  // namespace

// ---------------------------------------------------------------- params

void GeneratorParams::validate() const {
  if (n < 1 || s < 1 || d < 1 || r < 1 || k < 1) {
    throw PreconditionError("generator bounds n, s, d, r, k must be >= 1");
  }
  if (D < 2) throw PreconditionError("depth must be >= 2");
  if (cap < 1) throw PreconditionError("stream cap must be >= 1");
}

nlohmann::json to_json(const GeneratorParams& p) {
  return {{"n", p.n},         {"s", p.s},          {"d", p.d},
          {"m", p.m},         {"r", p.r},          {"k", p.k},
          {"D", p.D},         {"c_degree", p.c_degree}, {"degree", p.degree},
          {"p_max", p.p_max}, {"cap", p.cap}, {"truncate", p.truncate}};
}

GeneratorParams generator_params_from_json(const nlohmann::json& j) {
  GeneratorParams p;
  p.n = j.value("n", p.n);
  p.s = j.value("s", p.s);
  p.d = j.value("d", p.d);
  p.m = j.value("m", p.m);
  p.r = j.value("r", p.r);
  p.k = j.value("k", p.k);
  p.D = j.value("D", p.D);
  p.c_degree = j.value("c_degree", p.c_degree);
  p.degree = j.value("degree", p.degree);
  p.p_max = j.value("p_max", p.p_max);
  p.cap = j.value("cap", p.cap);
  p.truncate = j.value("truncate", p.truncate);
  return p;
}

RecursionSchedule recursion_params(std::size_t k, std::size_t D, const BigInt& cap) {
  if (k < 1) throw PreconditionError("recursion needs k >= 1");
  if (D < 3) throw PreconditionError("recursion needs D >= 3");
  if (D > 12) throw PreconditionError("recursion depth above 12 not supported");
  RecursionSchedule s;
  s.k = k;
  s.D = D;
  if (D >= 4) {
    RecursionLevel cur{2, BigInt(2 * k), 0};
    s.levels.push_back(cur);
    for (std::size_t l = 2; l + 2 < D; ++l) {
      BigInt next = BigInt(cur.c + 1) * (BigInt(1) << (cur.c + 1)) * BigInt(k) * cur.r * cur.r;
      cur = {l + 1, next, cur.c + 1};
      s.levels.push_back(cur);
    }
    s.R = s.levels.back().r;
  } else {
    s.R = BigInt(2 * k);
  }
  s.bound = boost::multiprecision::pow(BigInt(2 * k), static_cast<unsigned>(2 * D * (1u << D)));
  if (s.R > s.bound) throw std::logic_error("recursion exceeded its closed-form bound");
  if (s.R > cap) throw CapExceeded("recursion parameter R", big_str(s.R));
  return s;
}

// ---------------------------------------------------------------- lattice

Lattice::Lattice(std::size_t dim, std::vector<std::vector<std::uint64_t>> weights,
                 std::vector<std::uint64_t> budgets)
    : dim_(dim), w_(std::move(weights)), b_(std::move(budgets)) {
  if (w_.size() != b_.size()) throw ArityError("lattice weights and budgets differ in count");
  for (const auto& row : w_) {
    if (row.size() != dim_) throw ArityError("lattice weight row of wrong length");
  }
  for (std::size_t j = 0; j < dim_; ++j) {
    bool bounded = false;
    for (const auto& row : w_) bounded = bounded || row[j] > 0;
    if (!bounded) throw PreconditionError("lattice coordinate " + std::to_string(j) + " unbounded");
  }
  active_.assign(dim_ + 1, std::vector<bool>(w_.size(), false));
  for (std::size_t j = dim_; j-- > 0;) {
    for (std::size_t k = 0; k < w_.size(); ++k) active_[j][k] = active_[j + 1][k] || w_[k][j] > 0;
  }
}

Lattice Lattice::box(const std::vector<std::uint64_t>& bounds) {
  std::vector<std::vector<std::uint64_t>> w(bounds.size(), std::vector<std::uint64_t>(bounds.size()));
  for (std::size_t i = 0; i < bounds.size(); ++i) w[i][i] = 1;
  return Lattice(bounds.size(), std::move(w), bounds);
}

bool Lattice::contains(std::span<const std::uint64_t> a) const {
  if (a.size() != dim_) return false;
  for (std::size_t k = 0; k < w_.size(); ++k) {
    unsigned __int128 s = 0;
    for (std::size_t j = 0; j < dim_; ++j) s += static_cast<unsigned __int128>(w_[k][j]) * a[j];
    if (s > b_[k]) return false;
  }
  return true;
}

std::uint64_t Lattice::coord_limit(std::size_t j, const std::vector<std::uint64_t>& budgets) const {
  std::uint64_t lim = UINT64_MAX;
  for (std::size_t k = 0; k < w_.size(); ++k) {
    if (w_[k][j] > 0) lim = std::min(lim, budgets[k] / w_[k][j]);
  }
  return lim;
}

std::uint64_t Lattice::max_coordinate() const {
  std::uint64_t best = 0;
  for (std::size_t j = 0; j < dim_; ++j) best = std::max(best, coord_limit(j, b_));
  return best;
}

std::uint64_t Lattice::count(std::size_t j, std::vector<std::uint64_t> budgets) const {
  if (j == dim_) return 1;
  std::uint64_t lim = coord_limit(j, budgets);
  if (j + 1 == dim_) return std::min(sat_add(lim, 1), ceiling_);
  for (std::size_t k = 0; k < w_.size(); ++k) {
    if (!active_[j][k]) budgets[k] = 0;
  }
  std::vector<std::uint64_t> key = budgets;
  key.push_back(j);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> rest = budgets;
  for (std::uint64_t a = 0; a <= lim; ++a) {
    total = sat_add(total, count(j + 1, rest));
    if (total >= ceiling_) {
      total = ceiling_;
      break;
    }
    for (std::size_t k = 0; k < w_.size(); ++k) rest[k] -= std::min(rest[k], w_[k][j]);
  }
  memo_.emplace(std::move(key), total);
  return total;
}

void Lattice::set_ceiling(std::uint64_t ceiling) const {
  if (ceiling == ceiling_) return;
  memo_.clear();
  ceiling_ = ceiling;
}

std::uint64_t Lattice::size() const {
  set_ceiling(UINT64_MAX);
  return count(0, b_);
}

std::uint64_t Lattice::size_up_to(std::uint64_t limit) const {
  if (ceiling_ <= limit) set_ceiling(sat_add(limit, 1));
  return std::min(count(0, b_), sat_add(limit, 1));
}

std::vector<std::uint64_t> Lattice::at(std::uint64_t index) const {
  // Counts capped at the ceiling still order correctly against index.
  if (index >= size_up_to(index)) throw ArityError("lattice index out of range");
  std::vector<std::uint64_t> a(dim_, 0);
  std::vector<std::uint64_t> budgets = b_;
  for (std::size_t j = 0; j < dim_; ++j) {
    std::uint64_t lim = coord_limit(j, budgets);
    for (std::uint64_t v = 0; v <= lim; ++v) {
      std::uint64_t c = count(j + 1, budgets);
      if (index < c) {
        a[j] = v;
        break;
      }
      index -= c;
      for (std::size_t k = 0; k < w_.size(); ++k) budgets[k] -= w_[k][j];
    }
  }
  return a;
}

bool Lattice::next(std::vector<std::uint64_t>& a) const {
  // Increment the last coordinate that can grow, zeroing the ones after it.
  std::vector<std::uint64_t> used(w_.size(), 0);
  for (std::size_t k = 0; k < w_.size(); ++k) {
    for (std::size_t j = 0; j < dim_; ++j) used[k] += w_[k][j] * a[j];
  }
  for (std::size_t j = dim_; j-- > 0;) {
    bool fits = true;
    for (std::size_t k = 0; k < w_.size() && fits; ++k) fits = used[k] + w_[k][j] <= b_[k];
    if (fits) {
      ++a[j];
      return true;
    }
    for (std::size_t k = 0; k < w_.size(); ++k) used[k] -= w_[k][j] * a[j];
    a[j] = 0;
  }
  return false;
}

nlohmann::json Lattice::to_json() const {
  return {{"dim", dim_}, {"weights", w_}, {"budgets", b_}};
}

// ---------------------------------------------------------------- stream

nlohmann::json provenance_json(const Point& p) {
  return {{"block", p.block},
          {"candidate", p.candidate},
          {"lattice_index", p.lattice_index},
          {"lattice", p.lattice},
          {"shift", p.shift}};
}

HittingSetStream::HittingSetStream(const PrimeField& field, std::size_t n,
                                   std::vector<StreamBlock> blocks, MapFactory maps,
                                   bool shift_closed, nlohmann::json descriptor, std::uint64_t cap,
                                   bool truncate)
    : field_(field),
      n_(n),
      blocks_(std::move(blocks)),
      maps_(std::move(maps)),
      shift_(shift_closed),
      descriptor_(std::move(descriptor)) {
  BigInt total = 0;
  for (const auto& b : blocks_) {
    offsets_.push_back(static_cast<std::uint64_t>(std::min<BigInt>(total, BigInt(UINT64_MAX))));
    if (b.lattice->max_coordinate() >= field_.modulus()) {
      throw PreconditionError("grid coordinate " + std::to_string(b.lattice->max_coordinate()) +
                              " does not fit below the modulus");
    }
    total += b.lattice->size_up_to(cap);
    if (total > cap) break;
  }
  if (shift_) total *= (n_ + 1);
  bool truncated = false;
  if (total > cap) {
    if (!truncate) {
      throw CapExceeded("hitting-set stream size " + std::to_string(cap), "more than " + std::to_string(cap));
    }
    blocks_.resize(offsets_.size());
    total = cap;
    truncated = true;
  }
  size_ = static_cast<std::uint64_t>(total);
  descriptor_["truncated"] = truncated;
  descriptor_["declared_size"] = size_;
  descriptor_["shift_closure"] = shift_;
  descriptor_["blocks"] = blocks_.size();
  descriptor_["field"] = field_.modulus();
}

Point HittingSetStream::at(std::uint64_t index) const {
  if (index >= size_) throw ArityError("stream index out of range");
  Point p;
  std::uint64_t base = index;
  if (shift_) {
    p.shift = index % (n_ + 1);
    base = index / (n_ + 1);
  }
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), base);
  p.block = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  const StreamBlock& b = blocks_[p.block];
  p.candidate = b.candidate;
  p.lattice_index = base - offsets_[p.block];
  p.lattice = b.lattice->at(p.lattice_index);
  p.coords = maps_(b.candidate).evaluate(p.lattice);
  if (p.shift > 0) p.coords[p.shift - 1] = field_.add(p.coords[p.shift - 1], 1);
  return p;
}

void HittingSetStream::Cursor::load_block(std::size_t b) {
  const StreamBlock& blk = s_->blocks_[b];
  map_.emplace(s_->maps_(blk.candidate));
  if (map_->target_nvars != blk.lattice->dim() || map_->source_nvars != s_->n_) {
    throw ArityError("stream block map does not match its grid");
  }
  block_ = b;
  lattice_.assign(blk.lattice->dim(), 0);
  lattice_index_ = 0;
  base_ = map_->evaluate(lattice_);
}

bool HittingSetStream::Cursor::next(Point& out) {
  if (done_ || index_ >= s_->size_) {
    done_ = true;
    return false;
  }
  if (!started_) {
    started_ = true;
    if (s_->blocks_.empty()) {
      done_ = true;
      return false;
    }
    load_block(0);
    shift_ = 0;
  } else if (s_->shift_ && shift_ < s_->n_) {
    ++shift_;
  } else {
    shift_ = 0;
    if (s_->blocks_[block_].lattice->next(lattice_)) {
      ++lattice_index_;
      base_ = map_->evaluate(lattice_);
    } else if (block_ + 1 < s_->blocks_.size()) {
      load_block(block_ + 1);
    } else {
      done_ = true;
      return false;
    }
  }
  out.coords = base_;
  if (shift_ > 0) out.coords[shift_ - 1] = s_->field_.add(out.coords[shift_ - 1], 1);
  out.block = block_;
  out.candidate = s_->blocks_[block_].candidate;
  out.lattice_index = lattice_index_;
  out.lattice = lattice_;
  out.shift = shift_;
  ++index_;
  return true;
}

HittingSetStream dlsz_grid(const PrimeField& field, const std::vector<std::uint64_t>& bounds,
                           std::uint64_t cap) {
  const std::size_t n = bounds.size();
  auto lat = std::make_shared<const Lattice>(Lattice::box(bounds));
  nlohmann::json desc = {{"generator", "dlsz_grid"}, {"degree_bounds", bounds}};
  return HittingSetStream(field, n, {{0, lat}}, [field, n](std::uint64_t) { return identity_map(field, n); },
                          false, std::move(desc), cap);
}

std::vector<std::vector<std::uint64_t>> shift_closure(
    const PrimeField& field, const std::vector<std::vector<std::uint64_t>>& H, std::size_t n) {
  std::vector<std::vector<std::uint64_t>> out;
  std::set<std::vector<std::uint64_t>> seen;
  auto push = [&](std::vector<std::uint64_t> p) {
    if (seen.insert(p).second) out.push_back(std::move(p));
  };
  for (const auto& a : H) {
    if (a.size() != n) throw ArityError("shift closure point of wrong length");
    push(a);
    for (std::size_t i = 0; i < n; ++i) {
      auto b = a;
      b[i] = field.add(b[i], 1);
      push(std::move(b));
    }
  }
  return out;
}

// ---------------------------------------------------------------- P_max

std::uint64_t kronecker_p_max_pairs(const BigInt& pairs, long double log_x, std::uint64_t cap) {
  long double target = pairs.convert_to<long double>() * log_x;
  if (!(target > 0)) return 2;
  // psi(N) < 1.04 N
  if (!std::isfinite(target) || target / 1.04L > static_cast<long double>(cap)) {
    throw CapExceeded("Kronecker modulus range " + std::to_string(cap),
                      "psi(N) > " + std::to_string(static_cast<double>(target)));
  }
  const auto limit = static_cast<std::size_t>(target * 1.25L) + 256;
  std::vector<std::uint32_t> spf(limit + 1, 0);
  long double psi = 0;
  for (std::size_t N = 2; N <= limit; ++N) {
    if (spf[N] == 0) {
      for (std::size_t j = N; j <= limit; j += N) {
        if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(N);
      }
    }
    std::size_t q = spf[N], m = N;
    while (m % q == 0) m /= q;
    if (m == 1) psi += std::log(static_cast<long double>(q));
    if (psi > target) {
      if (N > cap) throw CapExceeded("Kronecker modulus range " + std::to_string(cap), std::to_string(N));
      return N;
    }
  }
  throw std::logic_error("psi search ran past its limit");
}

std::uint64_t kronecker_p_max(const BigInt& sparsity, std::uint64_t base, std::size_t n,
                              std::uint64_t sets, std::uint64_t cap) {
  if (base < 2) throw PreconditionError("kronecker base must be at least 2");
  BigInt pairs = sparsity > 1 ? BigInt(sets) * sparsity * (sparsity - 1) / 2 : BigInt(0);
  long double log_x = static_cast<long double>(n + 1) * std::log(static_cast<long double>(base));
  return kronecker_p_max_pairs(pairs, log_x, cap);
}

// ---------------------------------------------------------------- generators

namespace {

// Reduced variables: `lead` leading ones (z_1.. or u), then per level t and
// y_1..y_{ys[l]}, the order faithful_compose produces. Every monomial of an
// image of x_i obeys each row below with weight <= budget / delta, so the
// image of any polynomial of degree <= delta lies in the lattice.
Lattice reduced_lattice(std::size_t n, std::size_t lead, bool lead_is_u, const std::vector<std::size_t>& ys,
                        std::uint64_t E, std::uint64_t delta) {
  E = std::max<std::uint64_t>(E, 1);
  std::size_t dim = lead;
  std::vector<std::size_t> t_pos;
  std::vector<std::pair<std::size_t, std::size_t>> y_range;
  for (std::size_t y : ys) {
    t_pos.push_back(dim);
    y_range.emplace_back(dim + 1, dim + 1 + y);
    dim += 1 + y;
  }
  std::vector<std::vector<std::uint64_t>> W;
  std::vector<std::uint64_t> B;

  // degree in the y's, u counted as 1/E
  std::vector<std::uint64_t> row(dim, 0);
  for (std::size_t i = 0; i < lead; ++i) row[i] = lead_is_u ? 1 : E;
  for (auto [a, b] : y_range) {
    for (std::size_t j = a; j < b; ++j) row[j] = E;
  }
  W.push_back(row);
  B.push_back(checked_mul(delta, E, "grid budget"));

  if (!ys.empty()) {
    std::vector<std::uint64_t> q;
    std::uint64_t L = 1;
    for (std::size_t y : ys) {
      q.push_back(checked_mul(n, y, "grid budget"));
      L = std::lcm(L, q.back());
    }
    // sum_l deg_{t_l} / q_l + deg_u / E <= delta
    row.assign(dim, 0);
    if (lead_is_u) row[0] = L;
    for (std::size_t l = 0; l < ys.size(); ++l) row[t_pos[l]] = checked_mul(E, L / q[l], "grid budget");
    W.push_back(row);
    B.push_back(checked_mul(checked_mul(delta, L, "grid budget"), E, "grid budget"));

    // per level: deg_{t_l} / q_l + (other levels' y) + deg_u / E <= delta
    if (ys.size() > 1) {
      for (std::size_t l = 0; l < ys.size(); ++l) {
        row.assign(dim, 0);
        if (lead_is_u) row[0] = q[l];
        row[t_pos[l]] = E;
        for (std::size_t o = 0; o < ys.size(); ++o) {
          if (o == l) continue;
          for (std::size_t j = y_range[o].first; j < y_range[o].second; ++j) row[j] = q[l] * E;
        }
        W.push_back(row);
        B.push_back(checked_mul(checked_mul(delta, q[l], "grid budget"), E, "grid budget"));
      }
    }
  }
  return Lattice(dim, std::move(W), std::move(B));
}

std::uint64_t reduce_base(const BigInt& base, std::uint64_t p) {
  auto b = static_cast<std::uint64_t>(base % p);
  return b < 2 ? b + p : b;
}

std::uint64_t max_kronecker_exponent(const BigInt& base, std::uint64_t p, std::size_t n) {
  auto b = static_cast<std::uint64_t>(base % p);
  unsigned __int128 e = 1;
  std::uint64_t best = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    e = e * b % p;
    best = std::max(best, static_cast<std::uint64_t>(e));
  }
  return best;
}

struct KroneckerPlan {
  BigInt base;
  std::uint64_t p_max;
  std::vector<std::size_t> ys;  // y count per level, outermost composition last
  std::vector<std::string> tags;
  std::uint64_t delta;
  bool shift;
};

// A truncated stream never reaches past cap blocks, so the modulus range can
// stop there when the full count is out of reach.
template <class F>
std::uint64_t default_p_max(const GeneratorParams& P, F&& compute) {
  try {
    return compute();
  } catch (const CapExceeded&) {
    if (!P.truncate) throw;
    return sat_add(P.cap, 1);
  }
}

HittingSetStream kronecker_stream(const PrimeField& field, const GeneratorParams& P,
                                  const KroneckerPlan& plan, nlohmann::json desc) {
  if (plan.p_max < 2) throw PreconditionError("Kronecker modulus range must reach 2");
  std::uint64_t p_last = plan.p_max;
  if (plan.p_max - 1 > P.cap) {
    if (!P.truncate) {
      throw CapExceeded("hitting-set stream size " + std::to_string(P.cap),
                        "at least " + std::to_string(plan.p_max - 1));
    }
    p_last = P.cap + 1;
  }
  std::map<std::uint64_t, std::shared_ptr<const Lattice>> by_e;
  std::vector<StreamBlock> blocks;
  std::uint64_t seen = 0;  // points so far, truncated streams only
  for (std::uint64_t p = 2; p <= p_last; ++p) {
    std::uint64_t E = std::max<std::uint64_t>(max_kronecker_exponent(plan.base, p, P.n), 1);
    auto& lat = by_e[E];
    if (!lat) lat = std::make_shared<const Lattice>(reduced_lattice(P.n, 1, true, plan.ys, E, plan.delta));
    blocks.push_back({p, lat});
    if (P.truncate) {
      seen = sat_add(seen, lat->size_up_to(P.cap));
      if (seen > P.cap) break;
    }
  }
  const std::size_t n = P.n;
  const BigInt base = plan.base;
  auto ys = plan.ys;
  auto tags = plan.tags;
  MapFactory maps = [field, n, base, ys, tags](std::uint64_t p) {
    Homomorphism h = kronecker_map(field, n, reduce_base(base, p), p);
    for (std::size_t l = 0; l < ys.size(); ++l) h = faithful_compose(h, ys[l], tags[l]);
    return h;
  };
  desc["variables"] = maps(2).target_names;
  desc["kronecker_base"] = big_str(plan.base);
  desc["p_range"] = {2, plan.p_max};
  desc["degree"] = plan.delta;
  return HittingSetStream(field, n, std::move(blocks), std::move(maps), plan.shift, std::move(desc),
                          P.cap, P.truncate);
}

}  // namespace

HittingSetStream gen_theorem1(const PrimeField& field, const GeneratorParams& P) {
  P.validate();
  const std::size_t r = std::min({P.r, P.top_fanin(), P.n});
  const std::uint64_t cdeg = P.c_degree ? P.c_degree : P.s;
  const std::uint64_t delta = checked_mul(cdeg, P.d, "degree bound");
  if (power_reaches(field, P.d, BigInt(r))) {
    throw PreconditionError("modulus " + std::to_string(field.modulus()) + " does not exceed d^r");
  }
  const BigInt N = BigInt(P.d) * r * P.n * (r + 1) * (r + 1);
  if (exceeds_modulus(field, N)) throw PreconditionError("candidate pool does not fit in the field");
  if (N > P.cap && !P.truncate) {
    throw CapExceeded("hitting-set stream size " + std::to_string(P.cap), "at least " + big_str(N));
  }
  auto lat = std::make_shared<const Lattice>(reduced_lattice(P.n, r + 1, false, {r}, 1, delta));
  std::vector<StreamBlock> blocks;
  const std::uint64_t last = N > P.cap ? P.cap : static_cast<std::uint64_t>(N);
  for (std::uint64_t b = 1; b <= last; ++b) blocks.push_back({b, lat});
  const std::size_t n = P.n;
  MapFactory maps = [field, n, r](std::uint64_t b) {
    Homomorphism psi = vandermonde_map(field, n, r + 1, b);
    for (std::size_t j = 0; j < psi.target_names.size(); ++j) {
      psi.target_names[j] = "z" + std::to_string(j + 1);
    }
    return faithful_compose(psi, r);
  };
  nlohmann::json desc = {{"generator", "theorem1"},
                         {"params", to_json(P)},
                         {"r_used", r},
                         {"candidates", static_cast<std::uint64_t>(N)},
                         {"degree", delta},
                         {"variables", maps(1).target_names}};
  return HittingSetStream(field, n, std::move(blocks), std::move(maps), false, std::move(desc), P.cap,
                          P.truncate);
}

HittingSetStream gen_theorem2(const PrimeField& field, const GeneratorParams& P) {
  P.validate();
  if (P.D <= 3) {
    // sparse leaves (D = 2) or one product layer: Kronecker and a grid
    const std::uint64_t delta = P.degree ? P.degree : P.s;
    BigInt R = BigInt(2 * P.k);
    KroneckerPlan plan{BigInt(P.s) * R + 1, P.p_max, {}, {}, delta, false};
    if (plan.p_max == 0) {
      if (power_reaches(field, P.s, R)) throw PreconditionError("modulus does not exceed s^R");
      plan.p_max = default_p_max(P, [&] {
        return kronecker_p_max(boost::multiprecision::pow(BigInt(P.s), R.convert_to<unsigned>()),
                               clamp_u64(plan.base), P.n, P.s, P.cap);
      });
    }
    nlohmann::json desc = {{"generator", "theorem2"}, {"params", to_json(P)}, {"levels", nlohmann::json::array()}};
    return kronecker_stream(field, P, plan, std::move(desc));
  }
  RecursionSchedule sched = recursion_params(P.k, P.D);
  if (power_reaches(field, P.s, sched.R)) {
    throw PreconditionError("modulus " + std::to_string(field.modulus()) + " does not exceed s^R, R = " +
                            big_str(sched.R));
  }
  const std::size_t m = P.top_fanin();
  const bool shift = m > 2 * P.k;
  KroneckerPlan plan;
  plan.base = BigInt(P.s) * sched.R + 1;
  plan.delta = P.degree ? P.degree : P.s;
  plan.shift = shift;
  nlohmann::json levels = nlohmann::json::array();
  // innermost composition is the deepest level
  for (auto it = sched.levels.rbegin(); it != sched.levels.rend(); ++it) {
    BigInt y = std::min<BigInt>(it->r, BigInt(P.n));
    if (it->level == 2 && !shift) y = std::min<BigInt>(y, BigInt(m));
    plan.ys.push_back(y.convert_to<std::size_t>());
    plan.tags.push_back("_" + std::to_string(it->level));
    levels.push_back({{"level", it->level},
                      {"r", big_str(it->r)},
                      {"c", it->c},
                      {"y_count", plan.ys.back()},
                      {"t", "t" + plan.tags.back()}});
  }
  if (P.p_max) {
    plan.p_max = P.p_max;
  } else {
    BigInt S = boost::multiprecision::pow(BigInt(P.s), sched.R.convert_to<unsigned>());
    plan.p_max = default_p_max(P, [&] { return kronecker_p_max(S, clamp_u64(plan.base), P.n, P.s, P.cap); });
  }
  nlohmann::json desc = {{"generator", "theorem2"},
                         {"params", to_json(P)},
                         {"R", big_str(sched.R)},
                         {"levels", levels}};
  return kronecker_stream(field, P, plan, std::move(desc));
}

HittingSetStream gen_theorem3(const PrimeField& field, const GeneratorParams& P) {
  P.validate();
  if (power_reaches(field, P.s, BigInt(2 * P.k))) {
    throw PreconditionError("modulus " + std::to_string(field.modulus()) + " does not exceed s^(2k)");
  }
  const std::size_t m = P.top_fanin();
  const bool shift = m > 2 * P.k;
  KroneckerPlan plan;
  plan.base = BigInt(P.s) * P.k + 1;
  plan.delta = P.degree ? P.degree : P.s;
  plan.shift = shift;
  plan.ys = {shift ? std::min(2 * P.k, P.n) : std::min(m, P.n)};
  plan.tags = {""};
  if (P.p_max) {
    plan.p_max = P.p_max;
  } else {
    BigInt S = boost::multiprecision::pow(BigInt(P.s), static_cast<unsigned>(P.k * P.k));
    plan.p_max = default_p_max(P, [&] { return kronecker_p_max(S, clamp_u64(plan.base), P.n, P.s, P.cap); });
  }
  nlohmann::json desc = {{"generator", "theorem3"}, {"params", to_json(P)}, {"r_used", plan.ys[0]}};
  return kronecker_stream(field, P, plan, std::move(desc));
}

HittingSetStream make_generator(int theorem, const PrimeField& field, const GeneratorParams& params) {
  switch (theorem) {
    case 1: return gen_theorem1(field, params);
    case 2: return gen_theorem2(field, params);
    case 3: return gen_theorem3(field, params);
    default: throw PreconditionError("theorem must be 1, 2 or 3");
  }
}

// ---------------------------------------------------------------- points

Point instantiate_point(const std::vector<Homomorphism>& chain,
                        std::span<const std::uint64_t> assignment) {
  if (chain.empty()) throw ArityError("empty homomorphism chain");
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (chain[i].target_nvars != chain[i + 1].source_nvars) {
      throw ArityError("homomorphism chain arities do not line up at link " + std::to_string(i + 1));
    }
  }
  if (assignment.size() != chain.back().target_nvars) {
    throw ArityError("assignment of length " + std::to_string(assignment.size()) + " for " +
                     std::to_string(chain.back().target_nvars) + " reduced variables");
  }
  Point p;
  p.lattice.assign(assignment.begin(), assignment.end());
  std::vector<std::uint64_t> vals = p.lattice;
  for (std::size_t i = chain.size(); i-- > 0;) vals = chain[i].evaluate(vals);
  p.coords = std::move(vals);
  return p;
}

BlackboxResult blackbox_test(const PointOracle& oracle, const HittingSetStream& stream) {
  BlackboxResult res;
  auto cur = stream.cursor();
  Point p;
  while (cur.next(p)) {
    ++res.points_checked;
    std::uint64_t v = oracle(p.coords);
    if (v != 0) {
      res.all_zero = false;
      res.witness_index = cur.index() - 1;
      res.value = v;
      res.witness = std::move(p);
      return res;
    }
  }
  return res;
}

void write_stream_jsonl(std::ostream& os, const HittingSetStream& stream, const nlohmann::json& header,
                        std::uint64_t limit) {
  os << header.dump() << '\n';
  auto cur = stream.cursor();
  Point p;
  std::uint64_t i = 0;
  while ((limit == 0 || i < limit) && cur.next(p)) {
    nlohmann::json line = {{"index", i}, {"point", p.coords}, {"provenance", provenance_json(p)}};
    os << line.dump() << '\n';
    ++i;
  }
}

}  // namespace jpit
