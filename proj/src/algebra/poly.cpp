#include "jpit/poly.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "jpit/errors.hpp"

namespace jpit {

Monomial::Monomial(std::vector<std::uint32_t> exps) : exps_(std::move(exps)) {
  for (auto e : exps_) degree_ += e;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r(*this);
  for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] += o.exps_[i];
  r.degree_ += o.degree_;
  return r;
}

bool graded_before(const Monomial& a, const Monomial& b) {
  if (a.degree_ != b.degree_) return a.degree_ > b.degree_;
  return a.exps_ > b.exps_;
}

std::size_t Monomial::hash() const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (auto e : exps_) {
    h ^= e + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

SparsePoly SparsePoly::constant(const PrimeField& field, std::size_t nvars,
                                std::uint64_t value) {
  SparsePoly p(field, nvars);
  value %= field.modulus();
  if (value != 0) p.terms_.push_back({Monomial(nvars), value});
  return p;
}

SparsePoly SparsePoly::variable(const PrimeField& field, std::size_t nvars,
                                std::size_t var) {
  if (var >= nvars) {
    throw ArityError("variable index " + std::to_string(var) +
                     " out of range for " + std::to_string(nvars) +
                     " variables");
  }
  std::vector<std::uint32_t> e(nvars, 0);
  e[var] = 1;
  SparsePoly p(field, nvars);
  p.terms_.push_back({Monomial(std::move(e)), 1});
  return p;
}

SparsePoly SparsePoly::from_terms(const PrimeField& field, std::size_t nvars,
                                  std::vector<Term> terms) {
  for (const auto& t : terms) {
    if (t.monomial.nvars() != nvars) {
      throw ArityError("monomial arity does not match polynomial arity");
    }
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    return graded_before(a.monomial, b.monomial);
  });
  SparsePoly p(field, nvars);
  for (auto& t : terms) {
    std::uint64_t c = t.coeff % field.modulus();
    if (!p.terms_.empty() && p.terms_.back().monomial == t.monomial) {
      p.terms_.back().coeff = field.add(p.terms_.back().coeff, c);
    } else {
      p.terms_.push_back({std::move(t.monomial), c});
    }
  }
  std::erase_if(p.terms_, [](const Term& t) { return t.coeff == 0; });
  return p;
}

bool SparsePoly::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 && terms_[0].monomial.total_degree() == 0);
}

std::uint64_t SparsePoly::constant_term() const {
  if (!terms_.empty() && terms_.back().monomial.total_degree() == 0) {
    return terms_.back().coeff;
  }
  return 0;
}

std::uint64_t SparsePoly::total_degree() const {
  return terms_.empty() ? 0 : terms_.front().monomial.total_degree();
}

std::uint64_t SparsePoly::degree_in(std::size_t var) const {
  if (var >= nvars_) throw ArityError("variable index out of range");
  std::uint64_t d = 0;
  for (const auto& t : terms_) d = std::max<std::uint64_t>(d, t.monomial[var]);
  return d;
}

std::uint64_t SparsePoly::coefficient(const Monomial& m) const {
  for (const auto& t : terms_) {
    if (t.monomial == m) return t.coeff;
  }
  return 0;
}

void SparsePoly::check_compatible(const SparsePoly& o) const {
  if (field_ != o.field_) {
    throw FieldMismatch("polynomials over different fields");
  }
  if (nvars_ != o.nvars_) {
    throw ArityError("polynomials over " + std::to_string(nvars_) + " and " +
                     std::to_string(o.nvars_) + " variables");
  }
}

SparsePoly SparsePoly::operator+(const SparsePoly& o) const {
  check_compatible(o);
  SparsePoly r(field_, nvars_);
  r.terms_.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() ||
        (i < terms_.size() &&
         graded_before(terms_[i].monomial, o.terms_[j].monomial))) {
      r.terms_.push_back(terms_[i++]);
    } else if (i == terms_.size() ||
               graded_before(o.terms_[j].monomial, terms_[i].monomial)) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      std::uint64_t c = field_.add(terms_[i].coeff, o.terms_[j].coeff);
      if (c != 0) r.terms_.push_back({terms_[i].monomial, c});
      ++i;
      ++j;
    }
  }
  return r;
}

SparsePoly SparsePoly::operator-() const {
  SparsePoly r(*this);
  for (auto& t : r.terms_) t.coeff = field_.neg(t.coeff);
  return r;
}

SparsePoly SparsePoly::operator-(const SparsePoly& o) const {
  return *this + (-o);
}

SparsePoly SparsePoly::scale(std::uint64_t c) const {
  c %= field_.modulus();
  SparsePoly r(field_, nvars_);
  if (c == 0) return r;
  r.terms_ = terms_;
  for (auto& t : r.terms_) t.coeff = field_.mul(t.coeff, c);
  return r;
}

SparsePoly SparsePoly::mul(const SparsePoly& o, std::size_t cap) const {
  check_compatible(o);
  SparsePoly r(field_, nvars_);
  if (is_zero() || o.is_zero()) return r;
  if (o.is_constant()) return scale(o.constant_term());
  if (is_constant()) return o.scale(constant_term());
  std::unordered_map<Monomial, std::uint64_t, MonomialHash> acc;
  acc.reserve(std::min<std::size_t>(terms_.size() * o.terms_.size(),
                                    std::size_t{1} << 20));
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      auto [it, inserted] = acc.try_emplace(a.monomial * b.monomial, 0);
      it->second = field_.add(it->second, field_.mul(a.coeff, b.coeff));
      if (inserted && acc.size() > cap) {
        throw CapExceeded("polynomial product sparsity",
                          "> " + std::to_string(cap) + " terms");
      }
    }
  }
  std::vector<Term> terms;
  terms.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) terms.push_back({m, c});
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    return graded_before(a.monomial, b.monomial);
  });
  r.terms_ = std::move(terms);
  return r;
}

SparsePoly SparsePoly::pow(std::uint64_t e, std::size_t cap) const {
  SparsePoly result = constant(field_, nvars_, 1);
  if (e == 0) return result;
  if (is_zero()) return *this;
  if (terms_.size() == 1) {
    // Monomial power in closed form.
    std::vector<std::uint32_t> ex(terms_[0].monomial.exponents());
    for (auto& x : ex) {
      if (x != 0 && e > std::numeric_limits<std::uint32_t>::max() / x) {
        throw CapExceeded("monomial exponent", std::to_string(x) + " * " +
                                                   std::to_string(e));
      }
      x = static_cast<std::uint32_t>(x * e);
    }
    SparsePoly r(field_, nvars_);
    r.terms_.push_back(
        {Monomial(std::move(ex)), field_.pow(terms_[0].coeff, e)});
    return r;
  }
  SparsePoly base = *this;
  while (true) {
    if (e & 1) result = result.mul(base, cap);
    e >>= 1;
    if (e == 0) break;
    base = base.mul(base, cap);
  }
  return result;
}

SparsePoly SparsePoly::partial(std::size_t var) const {
  if (var >= nvars_) {
    throw ArityError("derivative variable " + std::to_string(var) +
                     " out of range");
  }
  std::vector<Term> terms;
  for (const auto& t : terms_) {
    std::uint32_t e = t.monomial[var];
    if (e == 0) continue;
    std::vector<std::uint32_t> ex(t.monomial.exponents());
    ex[var] = e - 1;
    std::uint64_t c = field_.mul(t.coeff, field_.from_uint(e));
    terms.push_back({Monomial(std::move(ex)), c});
  }
  // Distinct monomials stay distinct after lowering one exponent, but the
  // graded order may shift, so renormalize.
  return from_terms(field_, nvars_, std::move(terms));
}

std::uint64_t SparsePoly::evaluate(std::span<const std::uint64_t> point) const {
  if (point.size() != nvars_) {
    throw ArityError("point of length " + std::to_string(point.size()) +
                     " for " + std::to_string(nvars_) + " variables");
  }
  std::uint64_t sum = 0;
  for (const auto& t : terms_) {
    std::uint64_t v = t.coeff;
    const auto& ex = t.monomial.exponents();
    for (std::size_t i = 0; i < ex.size() && v != 0; ++i) {
      if (ex[i] == 1) {
        v = field_.mul(v, point[i]);
      } else if (ex[i] > 1) {
        v = field_.mul(v, field_.pow(point[i], ex[i]));
      }
    }
    sum = field_.add(sum, v);
  }
  return sum;
}

FieldElement SparsePoly::evaluate(const std::vector<FieldElement>& point) const {
  std::vector<std::uint64_t> raw;
  raw.reserve(point.size());
  for (const auto& e : point) {
    if (e.field() != field_) throw FieldMismatch("evaluation point field");
    raw.push_back(e.value());
  }
  return field_.element(evaluate(raw));
}

SparsePoly SparsePoly::substitute(std::span<const SparsePoly> images,
                                  std::size_t cap) const {
  if (images.size() != nvars_) {
    throw ArityError("substitution supplies " + std::to_string(images.size()) +
                     " images for " + std::to_string(nvars_) + " variables");
  }
  if (images.empty()) return *this;
  const std::size_t target = images[0].nvars();
  for (const auto& img : images) {
    if (img.field_ != field_) throw FieldMismatch("substitution image field");
    if (img.nvars() != target) {
      throw ArityError("substitution images disagree on target arity");
    }
  }
  std::map<std::pair<std::size_t, std::uint32_t>, SparsePoly> powers;
  auto power = [&](std::size_t var, std::uint32_t e) -> const SparsePoly& {
    auto key = std::make_pair(var, e);
    auto it = powers.find(key);
    if (it == powers.end()) {
      it = powers.emplace(key, images[var].pow(e, cap)).first;
    }
    return it->second;
  };
  SparsePoly result(field_, target);
  for (const auto& t : terms_) {
    SparsePoly term = constant(field_, target, t.coeff);
    for (std::size_t i = 0; i < nvars_ && !term.is_zero(); ++i) {
      if (t.monomial[i] > 0) term = term.mul(power(i, t.monomial[i]), cap);
    }
    result = result + term;
    if (result.sparsity() > cap) {
      throw CapExceeded("substitution sparsity",
                        "> " + std::to_string(cap) + " terms");
    }
  }
  return result;
}

SparsePoly SparsePoly::extend(std::size_t new_nvars, std::size_t offset) const {
  if (offset + nvars_ > new_nvars) {
    throw ArityError("cannot embed into a smaller variable set");
  }
  SparsePoly r(field_, new_nvars);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    std::vector<std::uint32_t> ex(new_nvars, 0);
    for (std::size_t i = 0; i < nvars_; ++i) ex[offset + i] = t.monomial[i];
    r.terms_.push_back({Monomial(std::move(ex)), t.coeff});
  }
  // Embedding preserves the graded order only when offset == 0.
  if (offset != 0) return from_terms(field_, new_nvars, std::move(r.terms_));
  return r;
}

std::string SparsePoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    std::int64_t c = field_.to_signed(t.coeff);
    bool negative = c < 0;
    std::uint64_t mag = negative ? static_cast<std::uint64_t>(-(c + 1)) + 1
                                 : static_cast<std::uint64_t>(c);
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (mag != 1 || t.monomial.total_degree() == 0) {
      os << mag;
      wrote = true;
    }
    for (std::size_t i = 0; i < nvars_; ++i) {
      std::uint32_t e = t.monomial[i];
      if (e == 0) continue;
      if (wrote) os << "*";
      os << "x" << (i + 1);
      if (e > 1) os << "^" << e;
      wrote = true;
    }
  }
  return os.str();
}

bool operator==(const SparsePoly& a, const SparsePoly& b) {
  if (a.field_ != b.field_ || a.nvars_ != b.nvars_ ||
      a.terms_.size() != b.terms_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].coeff != b.terms_[i].coeff ||
        !(a.terms_[i].monomial == b.terms_[i].monomial)) {
      return false;
    }
  }
  return true;
}

SparsePoly poly_mul(const SparsePoly& a, const SparsePoly& b) { return a * b; }

FieldElement poly_eval(const SparsePoly& p,
                       const std::vector<FieldElement>& point) {
  return p.evaluate(point);
}

SparsePoly poly_partial(const SparsePoly& p, std::size_t var) {
  return p.partial(var);
}

}  // namespace jpit
