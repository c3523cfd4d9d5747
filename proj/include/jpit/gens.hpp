#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "jpit/field.hpp"
#include "jpit/homo.hpp"
#include "json.hpp"

namespace jpit {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t kDefaultStreamCap = 10'000'000;

struct GeneratorParams {
  std::size_t n = 1;  // variables
  std::uint64_t s = 1;  // size bound
  std::uint64_t d = 1;  // degree of each product T_i (theorem 1)
  std::size_t m = 0;  // number of T_i / top fanin bound; 0 means s
  std::size_t r = 1;  // trdeg bound (theorem 1)
  std::size_t k = 1;  // occur / trdeg parameter
  std::size_t D = 4;  // depth (theorem 2)
  std::uint64_t c_degree = 0;  // degree of C in the T_i (theorem 1); 0 means s
  std::uint64_t degree = 0;  // degree of the tested polynomial (theorems 2, 3); 0 means s
  std::uint64_t p_max = 0;  // last Kronecker modulus; 0 means the default count
  std::uint64_t cap = kDefaultStreamCap;
  // Keep the first `cap` points of a larger stream instead of failing. The
  // result is no longer a hitting set for the class.
  bool truncate = false;

  std::size_t top_fanin() const { return m == 0 ? static_cast<std::size_t>(s) : m; }
  void validate() const;
};

nlohmann::json to_json(const GeneratorParams& p);
GeneratorParams generator_params_from_json(const nlohmann::json& j);

struct RecursionLevel {
  std::size_t level = 2;
  BigInt r;
  std::uint64_t c = 0;
};

struct RecursionSchedule {
  std::size_t k = 1;
  std::size_t D = 3;
  std::vector<RecursionLevel> levels;  // l = 2..D-2; empty for D = 3
  BigInt R;
  BigInt bound;  // (2k)^(2D 2^D)
};

// r_2 = 2k, c_2 = 0, r_{l+1} = (c_l+1) 2^(c_l+1) k r_l^2. For D = 3 there are
// no levels and R = 2k.
RecursionSchedule recursion_params(std::size_t k, std::size_t D,
                                   const BigInt& cap = BigInt(1) << 64);

// Down-closed set {a in N^dim : W a <= b}, every coordinate bounded by some
// row of W. Points are ordered lexicographically, coordinate 0 most
// significant. A nonzero polynomial whose support lies in the set is nonzero
// at one of its points (coordinates read as field elements 0, 1, 2, ...).
// Counting is memoized internally; not safe to share across threads.
class Lattice {
 public:
  Lattice(std::size_t dim, std::vector<std::vector<std::uint64_t>> weights,
          std::vector<std::uint64_t> budgets);
  // Coordinate i in 0..bounds[i].
  static Lattice box(const std::vector<std::uint64_t>& bounds);

  std::size_t dim() const { return dim_; }
  const std::vector<std::vector<std::uint64_t>>& weights() const { return w_; }
  const std::vector<std::uint64_t>& budgets() const { return b_; }
  bool contains(std::span<const std::uint64_t> a) const;
  std::uint64_t max_coordinate() const;
  // Exact count, saturating at 2^64 - 1.
  std::uint64_t size() const;
  // min(size(), limit + 1), without enumerating beyond the limit.
  std::uint64_t size_up_to(std::uint64_t limit) const;
  std::vector<std::uint64_t> at(std::uint64_t index) const;
  // Lexicographic successor in place; false once exhausted.
  bool next(std::vector<std::uint64_t>& a) const;
  nlohmann::json to_json() const;

 private:
  std::uint64_t count(std::size_t j, std::vector<std::uint64_t> budgets) const;
  std::uint64_t coord_limit(std::size_t j, const std::vector<std::uint64_t>& budgets) const;
  void set_ceiling(std::uint64_t ceiling) const;

  std::size_t dim_;
  std::vector<std::vector<std::uint64_t>> w_;
  std::vector<std::uint64_t> b_;
  std::vector<std::vector<bool>> active_;  // active_[j][k]: row k touches j..dim-1
  mutable std::map<std::vector<std::uint64_t>, std::uint64_t> memo_;  // counts capped at ceiling_
  mutable std::uint64_t ceiling_ = UINT64_MAX;
};

struct Point {
  std::vector<std::uint64_t> coords;
  std::size_t block = 0;
  std::uint64_t candidate = 0;  // b (theorem 1) or p (theorems 2, 3)
  std::uint64_t lattice_index = 0;
  std::vector<std::uint64_t> lattice;  // assignment to the reduced variables
  std::size_t shift = 0;  // 0 none, i means +e_i (1-based)
};

nlohmann::json provenance_json(const Point& p);

using MapFactory = std::function<Homomorphism(std::uint64_t candidate)>;

struct StreamBlock {
  std::uint64_t candidate = 0;
  std::shared_ptr<const Lattice> lattice;
};

class HittingSetStream {
 public:
  HittingSetStream(const PrimeField& field, std::size_t n, std::vector<StreamBlock> blocks,
                   MapFactory maps, bool shift_closed, nlohmann::json descriptor,
                   std::uint64_t cap = kDefaultStreamCap, bool truncate = false);

  const PrimeField& field() const { return field_; }
  std::size_t nvars() const { return n_; }
  std::uint64_t declared_size() const { return size_; }
  bool shift_closed() const { return shift_; }
  std::size_t block_count() const { return blocks_.size(); }
  const StreamBlock& block(std::size_t i) const { return blocks_[i]; }
  Homomorphism block_map(std::size_t i) const { return maps_(blocks_[i].candidate); }
  // Generator descriptor: theorem, params, derived sizes, variable layout.
  const nlohmann::json& descriptor() const { return descriptor_; }

  // Point #index, computed independently of the others.
  Point at(std::uint64_t index) const;

  class Cursor {
   public:
    explicit Cursor(const HittingSetStream& s) : s_(&s) {}
    bool next(Point& out);
    std::uint64_t index() const { return index_; }

   private:
    void load_block(std::size_t b);
    const HittingSetStream* s_;
    std::uint64_t index_ = 0;
    std::size_t block_ = 0;
    bool started_ = false;
    bool done_ = false;
    std::optional<Homomorphism> map_;
    std::vector<std::uint64_t> lattice_;
    std::uint64_t lattice_index_ = 0;
    std::vector<std::uint64_t> base_;
    std::size_t shift_ = 0;
  };
  Cursor cursor() const { return Cursor(*this); }

 private:
  PrimeField field_;
  std::size_t n_;
  std::vector<StreamBlock> blocks_;
  std::vector<std::uint64_t> offsets_;  // unshifted start index of each block
  MapFactory maps_;
  bool shift_;
  nlohmann::json descriptor_;
  std::uint64_t size_ = 0;
};

// Cartesian grid, coordinate i over 0..degree_bounds[i].
HittingSetStream dlsz_grid(const PrimeField& field, const std::vector<std::uint64_t>& degree_bounds,
                           std::uint64_t cap = kDefaultStreamCap);

// H together with every unit shift a + e_i, duplicates dropped, first
// occurrence order kept.
std::vector<std::vector<std::uint64_t>> shift_closure(
    const PrimeField& field, const std::vector<std::vector<std::uint64_t>>& H, std::size_t n);

// Smallest N with psi(N) > pairs * log_x (Chebyshev psi): some modulus in
// 2..N divides none of `pairs` nonzero integers below e^log_x.
std::uint64_t kronecker_p_max_pairs(const BigInt& pairs, long double log_x,
                              std::uint64_t cap = kDefaultStreamCap);
// Same for `sets` polynomials of sparsity <= S and per-variable degree < base
// in n variables.
std::uint64_t kronecker_p_max(const BigInt& sparsity, std::uint64_t base, std::size_t n,
                              std::uint64_t sets = 1, std::uint64_t cap = kDefaultStreamCap);

HittingSetStream gen_theorem1(const PrimeField& field, const GeneratorParams& params);
HittingSetStream gen_theorem2(const PrimeField& field, const GeneratorParams& params);
HittingSetStream gen_theorem3(const PrimeField& field, const GeneratorParams& params);
HittingSetStream make_generator(int theorem, const PrimeField& field, const GeneratorParams& params);

// chain[0] acts on the original variables, chain[i+1] on the targets of
// chain[i]; `assignment` is a point of the last target space.
Point instantiate_point(const std::vector<Homomorphism>& chain,
                        std::span<const std::uint64_t> assignment);

using PointOracle = std::function<std::uint64_t(std::span<const std::uint64_t>)>;

struct BlackboxResult {
  bool all_zero = true;
  std::optional<Point> witness;
  std::uint64_t witness_index = 0;
  std::uint64_t value = 0;  // oracle value at the witness
  std::uint64_t points_checked = 0;
};

BlackboxResult blackbox_test(const PointOracle& oracle, const HittingSetStream& stream);

// Header line, then one JSON object per point; `limit` 0 means all.
void write_stream_jsonl(std::ostream& os, const HittingSetStream& stream,
                        const nlohmann::json& header, std::uint64_t limit = 0);

}  // namespace jpit
