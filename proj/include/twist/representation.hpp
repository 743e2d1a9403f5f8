#pragma once

#include "twist/lattice.hpp"
#include "twist/tensorspace.hpp"
#include "twist/tensorvec.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tw {

enum class AlgebraKind { Scalar, Diagonal, Matrix };

const char* to_string(AlgebraKind kind);

// The coefficient algebra C, C^m or M_d with a representation sigma given on
// the algebra basis (coordinate idempotents e_c, or matrix units E_ab indexed
// a*d + b). Automorphisms, when present, are linear maps on basis
// coordinates: alpha_i(sum x_c e_c) = sum (alpha[i] x)_c e_c.
struct AlgebraSpec {
  AlgebraKind kind = AlgebraKind::Scalar;
  long n = 1;
  std::vector<LatticeOperator> sigma;
  std::vector<Mat> alpha;

  long basis_size() const;
  // Coordinates of e_a e_b and of e_a^*.
  Vec product(long a, long b) const;
  Vec star(long a) const;

  static AlgebraSpec scalar(const GradedSpace& s);
  // alpha(e_c) for the automorphism a -> a o pi^{-1} given by its coordinate
  // action a'_x = a_{perm[x]}.
  static Mat coordinate_action(const std::vector<long>& perm);
  // alpha(a) = u a u^*.
  static Mat conjugation_action(const Mat& u);
};

LatticeOperator sigma_of(const AlgebraSpec& alg, const Vec& coords);

// A candidate (doubly) twisted representation, stored through its S-family:
// S[i][a] = T~_i(e^i_a (x) .). Twists U_ij are stored for i < j; U_ji is the
// adjoint.
class TwistedTuple {
 public:
  TwistedTuple() = default;
  TwistedTuple(FiberSpec fibers, GradedSpace space, std::vector<std::vector<LatticeOperator>> S);

  std::size_t rank() const { return S_.size(); }
  const FiberSpec& fibers() const { return fibers_; }
  const GradedSpace& space() const { return space_; }
  const LatticeOperator& S(std::size_t i, std::size_t a) const { return S_.at(i).at(a); }
  const LatticeOperator& S_adj(std::size_t i, std::size_t a) const { return S_adj_.at(i).at(a); }
  const std::vector<std::vector<LatticeOperator>>& family() const { return S_; }

  void set_twist(std::size_t i, std::size_t j, const LatticeOperator& u);
  LatticeOperator twist(std::size_t i, std::size_t j) const;
  bool has_twist(std::size_t i, std::size_t j) const;

  AlgebraSpec algebra;
  std::string label;

 private:
  FiberSpec fibers_;
  GradedSpace space_;
  std::vector<std::vector<LatticeOperator>> S_;
  std::vector<std::vector<LatticeOperator>> S_adj_;
  std::map<std::pair<std::size_t, std::size_t>, LatticeOperator> U_;
};

struct CheckReport {
  CheckReport() = default;
  explicit CheckReport(std::string n) : name(std::move(n)) {}

  std::string name;
  bool pass = true;
  double worst = 0.0;
  std::string where;  // first violation, empty when passing
  std::vector<std::string> notes;

  void absorb(const CheckReport& sub);
  void record(double dev, double tol, const std::string& location);
};

// ---- tensor pipelines -------------------------------------------------------

// T~_i on the last slot (which must be i).
TensorVec Tt(const TwistedTuple& t, const TensorVec& v, std::size_t i);
// (I (x) T~_i^*): appends an E_i slot at the end.
TensorVec Tt_adj(const TwistedTuple& t, const TensorVec& v, std::size_t i);
TensorVec Tt_pow(const TwistedTuple& t, const TensorVec& v, std::size_t i, int n);
TensorVec Tt_pow_adj(const TwistedTuple& t, const TensorVec& v, std::size_t i, int n);
// T~_A^{(n)} with A sorted ascending: consumes i_p first and i_1 last.
TensorVec TA(const TwistedTuple& t, const TensorVec& v, const std::vector<std::size_t>& A,
             const std::vector<int>& n);
TensorVec TA_adj(const TwistedTuple& t, const TensorVec& v, const std::vector<std::size_t>& A,
                 const std::vector<int>& n);
// I (x) U_ij^e, e >= 0.
TensorVec U_pow(const TwistedTuple& t, const TensorVec& v, std::size_t i, std::size_t j, int e);

// Single-space helpers: v -> sum_a S^i_a S^i_a^* v and v -> (I - that) v.
Graded range_proj(const TwistedTuple& t, std::size_t i, const Graded& v);
Graded wandering_proj(const TwistedTuple& t, std::size_t i, const Graded& v);

// ---- relation checks --------------------------------------------------------

CheckReport check_isometric(const TwistedTuple& t, long N, double tol);
CheckReport check_coisometric(const TwistedTuple& t, long N, double tol);
CheckReport check_coisometric(const TwistedTuple& t, std::size_t i, long N, double tol);
// Twisted relation for every ordered pair plus the twist-family axioms:
// U unitary, pairwise commuting, commuting with every S^l_a and with sigma.
CheckReport check_twisted(const TwistedTuple& t, long N, double tol);
CheckReport check_twist_family(const TwistedTuple& t, long N, double tol);
CheckReport check_doubly_twisted(const TwistedTuple& t, long N, double tol);
CheckReport check_covariance_automorphic(const TwistedTuple& t, long N, double tol);
// sigma(e_a e_b) = sigma(e_a) sigma(e_b) and sigma(e_a^*) = sigma(e_a)^*.
CheckReport check_sigma_homomorphism(const AlgebraSpec& alg, const GradedSpace& s, long N, double tol);
// Window compression of I - sum_a S^i_a S^i_a^* is positive semidefinite.
CheckReport check_row_contraction(const TwistedTuple& t, long N, double tol);

// Packages an S-family with flips and twists after the row-contraction test.
TwistedTuple induce_from_S(std::vector<std::vector<LatticeOperator>> S, const FiberSpec& fibers,
                           const std::map<std::pair<std::size_t, std::size_t>, LatticeOperator>& twists,
                           const AlgebraSpec& algebra, long N = 8, double tol = 1e-10);

// Dense matrix of the compression of a linear map to the window.
Mat window_matrix(const LinMap& f, const GradedSpace& s, long N);

}  // namespace tw
