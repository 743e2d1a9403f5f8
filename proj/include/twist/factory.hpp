#pragma once

#include "twist/model.hpp"

#include <cstdint>
#include <optional>

namespace tw {

enum class ExampleId { C3Permutation, M2Hardy, FockModel, ScalarSFamily, Polydisc, BilateralCounterexample };

const char* to_string(ExampleId id);

// Unitaries on C^3 with the cyclic automorphisms of the diagonal algebra C^3.
TwistedTuple make_c3_permutation();

// S_i = U_i (x) V_i on C^2 (x) (H^2(D^2) (+) H^2(D^2)); fiber index u*2 + copy.
TwistedTuple make_m2_hardy(cplx lambda);

struct FockParams {
  std::size_t k = 2;
  IndexSet A;
  long dim = 2;
  std::uint64_t seed = 1;
  bool trivial_twists = false;
  bool random_flips = true;
  bool diagonal_algebra = false;
  // Overrides the sampled flips, keyed by (i, j) with i < j.
  std::optional<std::map<std::pair<std::size_t, std::size_t>, cplx>> flips;
};

// Commuting core unitaries, simultaneously diagonal in a random unitary basis.
FockCore sample_fock_core(const FockParams& p);
FockModel make_fock_model(const FockParams& p);

// Fock models of equal rank k summed over the lattice Z_+^k; a model over a
// smaller A is made inert along the missing coordinates. Flips must agree.
TwistedTuple make_fock_direct_sum(const FockModel& a, const FockModel& b);

// S^i_a = coeffs[i][a] M_i over the untwisted-flip Fock model with A = I_k,
// with coordinate-swap flips on C^d.
TwistedTuple make_scalar_S_family(const FockModel& base, const std::vector<std::vector<cplx>>& coeffs);

TwistedTuple make_polydisc(std::size_t n);
TwistedTuple make_bilateral_counterexample();
// Unilateral shift (+) bilateral shift folded onto Z_+ with fiber slots
// (unilateral, bilateral n >= 0, bilateral n < 0).
TwistedTuple make_unilateral_bilateral();
// V_1 V_2 = z V_2 V_1 on l^2(Z_+^2).
TwistedTuple make_doubly_noncommuting(cplx z);

Mat random_unitary(long n, std::uint64_t seed);

}  // namespace tw
