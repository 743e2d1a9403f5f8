#pragma once

#include "twist/linalg.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace tw {

using Degree = std::vector<long>;

// Integer affine function n -> coeffs . n + constant of a lattice degree.
struct Affine {
  std::vector<long> coeffs;
  long constant = 0;

  static Affine fixed(std::size_t rank, long c);
  static Affine coord(std::size_t rank, std::size_t c, long scale = 1, long offset = 0);

  long eval(const Degree& n) const;
  bool is_constant() const;
  // The function n -> this(n + s).
  Affine shifted(const Degree& s) const;
  bool operator==(const Affine& o) const { return coeffs == o.coeffs && constant == o.constant; }
};

// One named matrix raised to an affine power of the degree.
struct Factor {
  std::string name;
  Mat m;
  Affine exp;
};

// n_coord >= bound (lower) or n_coord < bound (upper), tested on the input degree.
struct Guard {
  std::size_t coord = 0;
  long bound = 0;
  bool lower = true;

  bool holds(const Degree& n) const { return lower ? n[coord] >= bound : n[coord] < bound; }
  bool operator==(const Guard& o) const {
    return coord == o.coord && bound == o.bound && lower == o.lower;
  }
  bool operator<(const Guard& o) const {
    if (coord != o.coord) return coord < o.coord;
    if (lower != o.lower) return lower < o.lower;
    return bound < o.bound;
  }
};

// coeff * F_1^{e_1(n)} ... F_r^{e_r(n)} applied at degree n, landing at n + offset.
struct Term {
  Degree offset;
  std::vector<Guard> guards;
  cplx coeff{1.0, 0.0};
  std::vector<Factor> factors;

  bool applies(const Degree& n) const;
  Mat block(const Degree& n, long fiber) const;
  bool same_shape(const Term& o) const;
};

struct GradedSpace {
  std::size_t rank = 0;
  long fiber = 1;
  bool is_signed = false;

  bool admits(const Degree& n) const;
  bool operator==(const GradedSpace& o) const {
    return rank == o.rank && fiber == o.fiber && is_signed == o.is_signed;
  }
};

// A finitely supported family of vectors in the graded space, stored as one
// fiber x cols block per degree. Each column is an independent vector.
struct Graded {
  long rows = 1;
  long cols = 1;
  std::map<Degree, Mat> blocks;

  Graded() = default;
  Graded(long r, long c) : rows(r), cols(c) {}

  void accumulate(const Degree& n, const Mat& b);
  Graded& operator+=(const Graded& o);
  Graded& operator-=(const Graded& o);
  Graded& operator*=(cplx c);
  // Squared Euclidean norm of every column.
  Eigen::VectorXd column_norms2() const;
  // Keeps columns [start, start + count).
  Graded columns(long start, long count) const;
};

class LatticeOperator {
 public:
  LatticeOperator() = default;
  LatticeOperator(GradedSpace space, std::vector<Term> terms);

  const GradedSpace& space() const { return space_; }
  const std::vector<Term>& terms() const { return terms_; }

  static LatticeOperator zero(const GradedSpace& s);
  static LatticeOperator identity(const GradedSpace& s);
  // Degree-preserving constant block.
  static LatticeOperator constant(const GradedSpace& s, const Mat& m, const std::string& name);
  // A single term with the given offset and ordered factors.
  static LatticeOperator monomial(const GradedSpace& s, Degree offset, std::vector<Factor> factors,
                                  cplx coeff = 1.0, std::vector<Guard> guards = {});

 private:
  GradedSpace space_;
  std::vector<Term> terms_;
};

// A dense operator is the rank-0 lattice operator with one constant term.
LatticeOperator dense(const Mat& m, const std::string& name);

Graded apply(const LatticeOperator& op, const Graded& v);
LatticeOperator adjoint(const LatticeOperator& op);
LatticeOperator compose(const LatticeOperator& a, const LatticeOperator& b);
LatticeOperator add(const LatticeOperator& a, const LatticeOperator& b);
LatticeOperator scale(cplx c, const LatticeOperator& a);
LatticeOperator power(const LatticeOperator& a, long e);
LatticeOperator operator*(const LatticeOperator& a, const LatticeOperator& b);
LatticeOperator operator+(const LatticeOperator& a, const LatticeOperator& b);
LatticeOperator operator-(const LatticeOperator& a, const LatticeOperator& b);

// Block-diagonal sum a (+) b on fiber d_a + d_b; ranks and signedness must agree.
LatticeOperator direct_sum(const LatticeOperator& a, const LatticeOperator& b);
// Re-indexes the coordinates of op into a space of rank new_rank; coordinate c
// of op becomes coordinate coord_map[c]. Unused coordinates are inert.
LatticeOperator embed_rank(const LatticeOperator& op, std::size_t new_rank,
                           const std::vector<std::size_t>& coord_map);

// Degrees of the window: [0,N]^r unsigned, [-N,N]^r signed.
std::vector<Degree> window_degrees(const GradedSpace& s, long N);
// Standard basis of the window, one column per (degree, fiber index) in
// degree-major order.
Graded window_basis(const GradedSpace& s, long N);

struct WindowReport {
  bool pass = true;
  double worst = 0.0;
  Degree degree;     // input degree of the worst basis vector
  long fiber_index = 0;
  long column = -1;
};

using LinMap = std::function<Graded(const Graded&)>;

WindowReport compare_maps(const LinMap& a, const LinMap& b, const GradedSpace& s, long N,
                          double tol);
WindowReport equal_on_window(const LatticeOperator& a, const LatticeOperator& b, long N,
                             double tol = 1e-12);

std::string degree_str(const Degree& n);

}  // namespace tw
