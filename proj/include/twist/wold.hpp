#pragma once

#include "twist/representation.hpp"

#include <map>
#include <string>
#include <vector>

namespace tw {

using IndexSet = std::vector<std::size_t>;

// Per-degree orthonormal bases of a subspace, valid on the window.
struct GradedSubspace {
  GradedSpace space;
  long window = 0;
  std::map<Degree, Mat> basis;
  std::vector<std::string> warnings;

  long dim_at(const Degree& n) const;
  long total_dim() const;
  // All basis vectors as one multi-column vector, degree-major.
  Graded as_columns() const;
  // Sum of dimensions by total degree |n|_1.
  std::map<long, long> dims_by_total_degree() const;
};

// Diagonal degree blocks <delta_n, f delta_n> of a map on the window, with the
// largest off-diagonal mass seen.
struct DegreeBlocks {
  std::map<Degree, Mat> blocks;
  double off_degree = 0.0;
};

DegreeBlocks degree_blocks(const LinMap& f, const GradedSpace& s, long N);

inline constexpr double kRankTol = 1e-8;

LinMap proj_wandering(const TwistedTuple& t, std::size_t i);
LinMap proj_joint_wandering(const TwistedTuple& t, const IndexSet& A);
// Truncated series sum_{n <= L} T~^{(n)}(I (x) P_W)T~^{(n)*}.
LinMap proj_H1(const TwistedTuple& t, std::size_t i, long L);
// T~^{(L)} T~^{(L)*}.
LinMap proj_H2(const TwistedTuple& t, std::size_t i, long L);
// prod_{i in A} P_{H_i^1} prod_{j not in A} P_{H_j^2}.
LinMap proj_summand(const TwistedTuple& t, const IndexSet& A, long L);
// Series length used for a window: enough to exhaust every degree reachable
// from the window in one step.
long series_length(const GradedSpace& s, long N);

GradedSubspace wandering(const TwistedTuple& t, std::size_t i, long N);
GradedSubspace joint_wandering(const TwistedTuple& t, const IndexSet& A, long N, double tol = 1e-10);
// Intersection over t <= M of the ranges of T~_{A^c}^{(t,..,t)}(I (x) P_{W_A})T~^*.
// M < 0 selects N + 2, one step past the last degree the window can lose.
GradedSubspace d_space(const TwistedTuple& t, const IndexSet& A, long N, long M = -1);

struct SummandResult {
  IndexSet A;
  GradedSubspace generated;  // span of T~_A^{(n)}(I (x) D_A)
  GradedSubspace projected;  // range of the product of H^1/H^2 projections
  double route_gap = 0.0;    // largest per-degree projector difference
  bool routes_agree = true;
};

SummandResult summand(const TwistedTuple& t, const IndexSet& A, long N);

struct ExistenceReport {
  bool exists = true;
  double worst = 0.0;
  std::size_t i = 0, j = 0, alpha = 0;
  Degree degree;
  std::string witness;
};

ExistenceReport check_existence(const TwistedTuple& t, long N, double tol);

struct DecompositionReport {
  bool pass = true;
  std::map<IndexSet, GradedSubspace> summands;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
};

DecompositionReport verify_decomposition(const TwistedTuple& t, long N, double tol);

std::vector<IndexSet> all_subsets(std::size_t k);
IndexSet complement(const IndexSet& A, std::size_t k);
std::string set_str(const IndexSet& A);

}  // namespace tw
