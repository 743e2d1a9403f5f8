#pragma once

#include "twist/wold.hpp"

namespace tw {

// Range bounds for the identity checks. Each identity is verified for every
// admissible index pair or subset and every exponent up to its bound.
struct LemmaBounds {
  int dtr = 3;           // p, q
  int simplify = 2;      // each m_i
  int intertwining = 3;  // n
  int commutation = 3;   // n, m for the single-coordinate identities
  int multi = 2;         // entries of multi-indices over a subset
};

// T_i^{(p)*} T_j^{(q)} = (I (x) T_j^{(q)})(t_ji^{(q,p)} (x) U_ji^{qp})(I (x) T_i^{(p)*}).
CheckReport lemma_dtr(const TwistedTuple& t, long N, double tol, int bound);
// prod_{i in A} T_i^{(m_i)}(I (x) P_{W_i})T_i^{(m_i)*} = T_A^{(m)}(I (x) P_{W_A})T_A^{(m)*}, with
// P_{W_A} computed as the projection onto the intersection of the W_i.
CheckReport lemma_simplify(const TwistedTuple& t, long N, double tol, int bound);
// Ran T_A^{(m,..,m)} equals the intersection of the Ran T_i^{(m)}, i in A.
CheckReport lemma_twisted_intersection(const TwistedTuple& t, long N, double tol, int bound);
// U_ij T_m^{(n)} = T_m^{(n)}(I (x) U_ij), U_ij P_m^{(n)} = P_m^{(n)} U_ij and
// (t_ij (x) U_ij)(I (x) P_m^{(n)}) = (I (x) P_m^{(n)})(t_ij (x) U_ij).
CheckReport lemma_u_intertwining(const TwistedTuple& t, long N, double tol, int bound);
// U_ij^n T_l^{(m)} = T_l^{(m)}(I (x) U_ij^n).
CheckReport lemma_u_power_past_T(const TwistedTuple& t, long N, double tol, int bound);
// (t_ij^{(n)} (x) U_ij^n)(I (x) T_l^{(m)}) = (I (x) T_l^{(m)})(t_ij^{(n)} (x) I (x) U_ij^n).
CheckReport lemma_flip_twist_past_T(const TwistedTuple& t, long N, double tol, int bound);
// The same with T_A^{(q)} in place of T_l^{(m)}.
CheckReport lemma_flip_twist_past_TA(const TwistedTuple& t, long N, double tol, int bound, int multi);
// T_i(I (x) T_j^{(n)}) = T_j^{(n)}(I (x) T_i)(t_ij^{(n)} (x) U_ij^n).
CheckReport lemma_T_past_T_power(const TwistedTuple& t, long N, double tol, int bound);
// T_{i_j}(I (x) T_A^{(n)}) = T_A^{(n+e_j)} D_{j-1} .. D_1 for every sorted index set.
CheckReport lemma_T_past_TA(const TwistedTuple& t, long N, double tol, int multi);
// T_l(I (x) T_A^{(n)}) = T_A^{(n)}(I (x) T_l) D_p .. D_1 for l outside A.
CheckReport lemma_Tl_past_TA(const TwistedTuple& t, long N, double tol, int multi);
// W_A and D_A are invariant under sigma, every U_ij, and T_j, T_j^* for j outside A.
CheckReport lemma_reducing_kernels(const TwistedTuple& t, long N, double tol);

std::vector<CheckReport> check_lemmas(const TwistedTuple& t, long N, double tol, const LemmaBounds& b = {});

// Orthogonal projection onto the intersection of the ranges of degree-diagonal
// projections, formed degree by degree from the null space of the stacked I - P_k.
LinMap intersection_projection(std::vector<LinMap> projections, const GradedSpace& s);

}  // namespace tw
