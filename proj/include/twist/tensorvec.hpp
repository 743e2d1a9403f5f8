#pragma once

#include "twist/lattice.hpp"
#include "twist/tensorspace.hpp"

#include <functional>

namespace tw {

// An element of E_{s_1} (x) ... (x) E_{s_p} (x) H, stored as one Graded per
// tensor basis index (row-major over the slots, left slot slowest).
struct TensorVec {
  std::vector<std::size_t> slots;
  std::vector<Graded> comp;
};

long tensor_dim(const FiberSpec& fibers, const std::vector<std::size_t>& slots);

// Applies m : E_{slots[pos..pos+count)} -> E_{out_slots} on those slots.
TensorVec apply_slots(const FiberSpec& fibers, const Mat& m, const TensorVec& v, std::size_t pos,
                      std::size_t count, const std::vector<std::size_t>& out_slots);
// I (x) op on the Hilbert space part.
TensorVec apply_H(const LatticeOperator& op, const TensorVec& v);
// t_ij^{(m,n)} on slots [pos, pos + m + n), which must read i^m j^n.
TensorVec apply_flip(const FiberSpec& fibers, const TensorVec& v, std::size_t pos, std::size_t i,
                     std::size_t j, int m, int n);

TensorVec& operator+=(TensorVec& a, const TensorVec& b);
TensorVec& operator-=(TensorVec& a, const TensorVec& b);

using TMap = std::function<TensorVec(const TensorVec&)>;

struct TensorReport {
  bool pass = true;
  double worst = 0.0;
  Degree degree;
  long tensor_index = 0;  // row-major index into the input slots
  long fiber_index = 0;
  bool located = false;
};

// Compares a and b on every basis vector e_a (x) delta_n (x) f with n in the
// window of s.
TensorReport compare_tensor_maps(const TMap& a, const TMap& b, const FiberSpec& fibers,
                                 const std::vector<std::size_t>& in_slots, const GradedSpace& s,
                                 long N, double tol);

// Row-major digits of a tensor index over the given slots.
std::vector<long> tensor_digits(const FiberSpec& fibers, const std::vector<std::size_t>& slots,
                                long index);

}  // namespace tw
