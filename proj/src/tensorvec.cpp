#include "twist/tensorvec.hpp"

#include "twist/errors.hpp"

namespace tw {

long tensor_dim(const FiberSpec& fibers, const std::vector<std::size_t>& slots) {
  long d = 1;
  for (auto s : slots) d *= fibers.dim(s);
  return d;
}

TensorVec apply_slots(const FiberSpec& fibers, const Mat& m, const TensorVec& v, std::size_t pos,
                      std::size_t count, const std::vector<std::size_t>& out_slots) {
  if (pos + count > v.slots.size()) throw Error(ErrorKind::ShapeMismatch, "apply_slots: slot range");
  const std::vector<std::size_t> pre_s(v.slots.begin(), v.slots.begin() + static_cast<long>(pos));
  const std::vector<std::size_t> mid_s(v.slots.begin() + static_cast<long>(pos),
                                       v.slots.begin() + static_cast<long>(pos + count));
  const std::vector<std::size_t> post_s(v.slots.begin() + static_cast<long>(pos + count), v.slots.end());
  const long pre = tensor_dim(fibers, pre_s), in = tensor_dim(fibers, mid_s);
  const long out = tensor_dim(fibers, out_slots), post = tensor_dim(fibers, post_s);
  if (m.rows() != out || m.cols() != in) throw Error(ErrorKind::ShapeMismatch, "apply_slots: matrix shape");
  TensorVec r;
  r.slots = pre_s;
  r.slots.insert(r.slots.end(), out_slots.begin(), out_slots.end());
  r.slots.insert(r.slots.end(), post_s.begin(), post_s.end());
  const Graded& proto = v.comp.front();
  r.comp.assign(static_cast<std::size_t>(pre * out * post), Graded(proto.rows, proto.cols));
  for (long a = 0; a < pre; ++a)
    for (long o = 0; o < out; ++o)
      for (long p = 0; p < post; ++p) {
        Graded& dst = r.comp[static_cast<std::size_t>((a * out + o) * post + p)];
        for (long x = 0; x < in; ++x) {
          const cplx c = m(o, x);
          if (c == cplx(0.0, 0.0)) continue;
          const Graded& src = v.comp[static_cast<std::size_t>((a * in + x) * post + p)];
          for (const auto& [n, b] : src.blocks) dst.accumulate(n, c * b);
        }
      }
  return r;
}

TensorVec apply_H(const LatticeOperator& op, const TensorVec& v) {
  TensorVec r;
  r.slots = v.slots;
  r.comp.reserve(v.comp.size());
  for (const auto& g : v.comp) r.comp.push_back(apply(op, g));
  return r;
}

TensorVec apply_flip(const FiberSpec& fibers, const TensorVec& v, std::size_t pos, std::size_t i,
                     std::size_t j, int m, int n) {
  for (int k = 0; k < m + n; ++k) {
    const std::size_t want = k < m ? i : j;
    if (v.slots.at(pos + static_cast<std::size_t>(k)) != want)
      throw Error(ErrorKind::ShapeMismatch, "apply_flip: slot pattern");
  }
  std::vector<std::size_t> out(static_cast<std::size_t>(n), j);
  out.insert(out.end(), static_cast<std::size_t>(m), i);
  return apply_slots(fibers, flip_block(fibers, i, j, m, n), v, pos, static_cast<std::size_t>(m + n), out);
}

TensorVec& operator+=(TensorVec& a, const TensorVec& b) {
  if (a.slots != b.slots) throw Error(ErrorKind::ShapeMismatch, "tensor add: slots");
  for (std::size_t c = 0; c < a.comp.size(); ++c) a.comp[c] += b.comp[c];
  return a;
}

TensorVec& operator-=(TensorVec& a, const TensorVec& b) {
  if (a.slots != b.slots) throw Error(ErrorKind::ShapeMismatch, "tensor subtract: slots");
  for (std::size_t c = 0; c < a.comp.size(); ++c) a.comp[c] -= b.comp[c];
  return a;
}

TensorReport compare_tensor_maps(const TMap& a, const TMap& b, const FiberSpec& fibers,
                                 const std::vector<std::size_t>& in_slots, const GradedSpace& s,
                                 long N, double tol) {
  const long dimE = tensor_dim(fibers, in_slots);
  const long cols = dimE * s.fiber;
  TensorReport rep;
  for (const auto& n : window_degrees(s, N)) {
    TensorVec v;
    v.slots = in_slots;
    for (long e = 0; e < dimE; ++e) {
      Graded g(s.fiber, cols);
      Mat blk = Mat::Zero(s.fiber, cols);
      blk.middleCols(e * s.fiber, s.fiber).setIdentity();
      g.blocks.emplace(n, std::move(blk));
      v.comp.push_back(std::move(g));
    }
    TensorVec d = a(v);
    const TensorVec rhs = b(v);
    d -= rhs;
    Eigen::VectorXd n2 = Eigen::VectorXd::Zero(cols);
    for (const auto& g : d.comp) n2 += g.column_norms2();
    for (long c = 0; c < cols; ++c) {
      const double dev = std::sqrt(n2(c));
      if (dev > rep.worst || !rep.located) {
        rep.worst = dev;
        rep.degree = n;
        rep.tensor_index = c / s.fiber;
        rep.fiber_index = c % s.fiber;
        rep.located = true;
      }
    }
  }
  rep.pass = rep.worst <= tol;
  return rep;
}

std::vector<long> tensor_digits(const FiberSpec& fibers, const std::vector<std::size_t>& slots,
                                long index) {
  std::vector<long> d(slots.size());
  for (std::size_t k = slots.size(); k-- > 0;) {
    d[k] = index % fibers.dim(slots[k]);
    index /= fibers.dim(slots[k]);
  }
  return d;
}

}  // namespace tw
