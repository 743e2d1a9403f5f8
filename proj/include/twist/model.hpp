#pragma once

#include "twist/representation.hpp"
#include "twist/wold.hpp"

#include <map>
#include <utility>
#include <vector>

namespace tw {

// Core data of a Fock model over one-dimensional fibers: the core space
// C^dim, the coisometric parts W_l (l not in A), twists U_ij and scalar
// flips c_ij (t_ij on C (x) C), and the algebra representation on the core.
struct FockCore {
  std::size_t k = 0;
  IndexSet A;
  long dim = 1;
  std::vector<Mat> W;
  std::map<std::pair<std::size_t, std::size_t>, Mat> U;
  std::map<std::pair<std::size_t, std::size_t>, cplx> flips;
  AlgebraKind algebra_kind = AlgebraKind::Scalar;
  long algebra_n = 1;
  std::vector<Mat> sigma;  // one matrix per algebra basis element
  std::vector<Mat> alpha;  // automorphism actions, may be empty

  Mat twist(std::size_t i, std::size_t j) const;
  cplx flip(std::size_t i, std::size_t j) const;
  void set_twist(std::size_t i, std::size_t j, const Mat& u);
  void set_flip(std::size_t i, std::size_t j, cplx c);
};

struct FockModel {
  IndexSet A;
  FockCore core;
  TwistedTuple tuple;
  // Set by pi_A: the D_A basis inside the original space, one column per core
  // basis vector.
  Graded core_basis;
  GradedSubspace D;
  std::vector<std::string> notes;
};

// The model operators on l^2(Z_+^{|A|}) (x) C^dim:
//   M_{i_j}: delta_n h -> delta_{n+e_j} prod_{r<j} (c_{i_j i_r} U_{i_j i_r})^{n_r} h
//   M_l:     delta_n h -> delta_n W_l prod_r (c_{l i_r} U_{l i_r})^{n_r} h   (l not in A)
// with sigma and U acting as I (x) sigma, I (x) U.
FockModel build_model_operators(const FockCore& core, bool check_core = true);

// Relation checks of the core (sigma, {W_l}) over the coordinates outside A.
CheckReport check_core(const FockCore& core, double tol = 1e-10);

// Transports the restriction of t to H_A onto its Fock model. Fibers must be
// one-dimensional.
FockModel pi_A(const TwistedTuple& t, const IndexSet& A, long N);

// Images T~_A^{(n)}(1 (x) b_c) of the core basis for n in [0, bound]^{|A|}.
std::map<Degree, Graded> pi_table(const TwistedTuple& t, const FockModel& fm, long bound);

struct EquivalenceReport {
  CheckReport gram;
  CheckReport ops;
  CheckReport sigma;
  CheckReport twists;
  bool pass = true;
  std::vector<std::string> notes;
};

EquivalenceReport verify_equivalence(const TwistedTuple& t, const FockModel& fm, long N, double tol);

// (I (x) B^*) op (I (x) B) for a unitary core basis change B.
LatticeOperator conjugate_core(const LatticeOperator& op, const Mat& B);

}  // namespace tw
