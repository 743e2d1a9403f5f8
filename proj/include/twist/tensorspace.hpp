#pragma once

#include "twist/linalg.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tw {

// A lattice degree: a point of Z^k (signed) or Z_+^k (unsigned).
struct MultiIndex {
  std::vector<long> coords;
  bool is_signed = false;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<long> c, bool signed_lattice = false);

  static MultiIndex zero(std::size_t k, bool signed_lattice = false);
  static MultiIndex unit(std::size_t k, std::size_t i, bool signed_lattice = false);

  std::size_t rank() const { return coords.size(); }
  long total() const;
  MultiIndex operator+(const MultiIndex& o) const;
  MultiIndex operator-(const MultiIndex& o) const;
  bool operator==(const MultiIndex& o) const { return coords == o.coords; }
  bool operator<(const MultiIndex& o) const { return coords < o.coords; }
  std::string str() const;
};

// Fibers E_i = C^{d_i} and the unitary flips t_ij : E_i (x) E_j -> E_j (x) E_i.
// Only flips with i < j are stored; t_ji is the inverse (adjoint) of t_ij.
class FiberSpec {
 public:
  FiberSpec() = default;
  explicit FiberSpec(std::vector<int> dims);

  std::size_t rank() const { return dims_.size(); }
  int dim(std::size_t i) const { return dims_.at(i); }
  const std::vector<int>& dims() const { return dims_; }

  // Sets t_ij (and thereby t_ji). Throws on i == j or a shape mismatch.
  void set_flip(std::size_t i, std::size_t j, const Mat& t);
  // Coordinate swap e_a (x) e_b -> e_b (x) e_a for every pair.
  static FiberSpec swaps(std::vector<int> dims);

  Mat flip(std::size_t i, std::size_t j) const;
  bool has_flip(std::size_t i, std::size_t j) const;

 private:
  std::vector<int> dims_;
  std::map<std::pair<std::size_t, std::size_t>, Mat> flips_;
};

// Permutation of tensor slots: out slot s holds in slot perm[s].
Mat slot_permutation(const std::vector<int>& in_dims, const std::vector<int>& perm);

// I_{pre} (x) m (x) I_{post}.
Mat embed(long pre, const Mat& m, long post);

// t_ij^{(n)} : E_i (x) E_j^n -> E_j^n (x) E_i.
Mat flip_iterated(const FiberSpec& spec, std::size_t i, std::size_t j, int n);

// t_ij^{(m,n)} : E_i^m (x) E_j^n -> E_j^n (x) E_i^m.
Mat flip_block(const FiberSpec& spec, std::size_t i, std::size_t j, int m, int n);

struct HexagonCell {
  std::size_t i, j, l;
  int n;
  double deviation;
};

struct HexagonReport {
  std::vector<HexagonCell> cells;
  double max_deviation = 0.0;
  bool pass = true;
  std::optional<HexagonCell> first_violation;
};

// Checks the n-level braid identity for every ordered triple of distinct
// indices and every 1 <= n <= bound.
HexagonReport check_hexagon(const FiberSpec& spec, int bound = 3, double tol = 1e-12);

}  // namespace tw
