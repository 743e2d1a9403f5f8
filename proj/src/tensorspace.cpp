#include "twist/tensorspace.hpp"

#include "twist/errors.hpp"

#include <sstream>

namespace tw {

namespace {

long ipow(long base, int e) {
  long r = 1;
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

}  // namespace

MultiIndex::MultiIndex(std::vector<long> c, bool signed_lattice)
    : coords(std::move(c)), is_signed(signed_lattice) {
  if (!is_signed)
    for (long x : coords)
      if (x < 0) throw Error(ErrorKind::InvalidInput, "negative coordinate in unsigned multi-index");
}

MultiIndex MultiIndex::zero(std::size_t k, bool signed_lattice) {
  return MultiIndex(std::vector<long>(k, 0), signed_lattice);
}

MultiIndex MultiIndex::unit(std::size_t k, std::size_t i, bool signed_lattice) {
  std::vector<long> c(k, 0);
  c.at(i) = 1;
  return MultiIndex(std::move(c), signed_lattice);
}

long MultiIndex::total() const {
  long s = 0;
  for (long x : coords) s += x;
  return s;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  if (o.rank() != rank()) throw Error(ErrorKind::ShapeMismatch, "multi-index rank");
  std::vector<long> c(coords);
  for (std::size_t t = 0; t < c.size(); ++t) c[t] += o.coords[t];
  return MultiIndex(std::move(c), is_signed || o.is_signed);
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const {
  if (o.rank() != rank()) throw Error(ErrorKind::ShapeMismatch, "multi-index rank");
  std::vector<long> c(coords);
  for (std::size_t t = 0; t < c.size(); ++t) c[t] -= o.coords[t];
  return MultiIndex(std::move(c), true);
}

std::string MultiIndex::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t t = 0; t < coords.size(); ++t) os << (t ? "," : "") << coords[t];
  os << ')';
  return os.str();
}

FiberSpec::FiberSpec(std::vector<int> dims) : dims_(std::move(dims)) {
  for (int d : dims_)
    if (d < 1) throw Error(ErrorKind::InvalidInput, "fiber dimension must be positive");
}

void FiberSpec::set_flip(std::size_t i, std::size_t j, const Mat& t) {
  if (i == j) throw Error(ErrorKind::InvalidPair, "flip requires i != j");
  if (i >= rank() || j >= rank()) throw Error(ErrorKind::InvalidInput, "flip index out of range");
  const long n = static_cast<long>(dims_[i]) * dims_[j];
  if (t.rows() != n || t.cols() != n) throw Error(ErrorKind::ShapeMismatch, "flip matrix size");
  if (i < j)
    flips_[{i, j}] = t;
  else
    flips_[{j, i}] = t.adjoint();
}

FiberSpec FiberSpec::swaps(std::vector<int> dims) {
  FiberSpec spec(std::move(dims));
  for (std::size_t i = 0; i < spec.rank(); ++i)
    for (std::size_t j = i + 1; j < spec.rank(); ++j)
      spec.set_flip(i, j, slot_permutation({spec.dim(i), spec.dim(j)}, {1, 0}));
  return spec;
}

bool FiberSpec::has_flip(std::size_t i, std::size_t j) const {
  if (i == j) return false;
  return flips_.count({std::min(i, j), std::max(i, j)}) > 0;
}

Mat FiberSpec::flip(std::size_t i, std::size_t j) const {
  if (i == j) throw Error(ErrorKind::InvalidPair, "flip requires i != j");
  auto it = flips_.find({std::min(i, j), std::max(i, j)});
  if (it == flips_.end()) {
    // Unset flips default to the coordinate swap.
    return slot_permutation({dim(i), dim(j)}, {1, 0});
  }
  return i < j ? it->second : Mat(it->second.adjoint());
}

Mat slot_permutation(const std::vector<int>& in_dims, const std::vector<int>& perm) {
  const std::size_t s = in_dims.size();
  if (perm.size() != s) throw Error(ErrorKind::ShapeMismatch, "permutation length");
  long total = 1;
  for (int d : in_dims) total *= d;
  std::vector<int> out_dims(s);
  for (std::size_t t = 0; t < s; ++t) out_dims[t] = in_dims.at(static_cast<std::size_t>(perm[t]));
  Mat p = Mat::Zero(total, total);
  std::vector<int> digit(s, 0);
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    for (std::size_t t = s; t-- > 0;) {
      digit[t] = static_cast<int>(rem % in_dims[t]);
      rem /= in_dims[t];
    }
    long out = 0;
    for (std::size_t t = 0; t < s; ++t) out = out * out_dims[t] + digit[static_cast<std::size_t>(perm[t])];
    p(out, idx) = 1.0;
  }
  return p;
}

Mat embed(long pre, const Mat& m, long post) {
  return kron(kron(identity(pre), m), identity(post));
}

Mat flip_iterated(const FiberSpec& spec, std::size_t i, std::size_t j, int n) {
  if (i == j) throw Error(ErrorKind::InvalidPair, "flip_iterated requires i != j");
  if (n < 0) throw Error(ErrorKind::InvalidInput, "negative iteration count");
  const long di = spec.dim(i), dj = spec.dim(j);
  if (n == 0) return identity(di);
  const Mat t = spec.flip(i, j);
  Mat result = identity(di * ipow(dj, n));
  // Factor k is I_{E_j^{n-k}} (x) t (x) I_{E_j^{k-1}}; k = n acts first.
  for (int k = n; k >= 1; --k) result = embed(ipow(dj, n - k), t, ipow(dj, k - 1)) * result;
  return result;
}

Mat flip_block(const FiberSpec& spec, std::size_t i, std::size_t j, int m, int n) {
  if (i == j) throw Error(ErrorKind::InvalidPair, "flip_block requires i != j");
  if (m < 0 || n < 0) throw Error(ErrorKind::InvalidInput, "negative block size");
  const long di = spec.dim(i), dj = spec.dim(j);
  const long total = ipow(di, m) * ipow(dj, n);
  if (m == 0 || n == 0) return identity(total);
  const Mat tn = flip_iterated(spec, i, j, n);
  Mat result = identity(total);
  // Factor k is I_{E_i^{k-1}} (x) t^{(n)} (x) I_{E_i^{m-k}}; k = m acts first.
  for (int k = m; k >= 1; --k) result = embed(ipow(di, k - 1), tn, ipow(di, m - k)) * result;
  return result;
}

HexagonReport check_hexagon(const FiberSpec& spec, int bound, double tol) {
  HexagonReport rep;
  const std::size_t k = spec.rank();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l < k; ++l) {
        if (i == j || j == l || i == l) continue;
        const long di = spec.dim(i), dj = spec.dim(j), dl = spec.dim(l);
        const Mat tij = spec.flip(i, j);
        for (int n = 1; n <= bound; ++n) {
          const long dln = ipow(dl, n);
          const Mat til = flip_iterated(spec, i, l, n);
          const Mat tjl = flip_iterated(spec, j, l, n);
          const Mat lhs = embed(dln, tij, 1) * embed(1, til, dj) * embed(di, tjl, 1);
          const Mat rhs = embed(1, tjl, di) * embed(dj, til, 1) * embed(1, tij, dln);
          HexagonCell cell{i, j, l, n, max_abs(lhs - rhs)};
          rep.cells.push_back(cell);
          if (cell.deviation > rep.max_deviation) rep.max_deviation = cell.deviation;
          if (cell.deviation > tol && !rep.first_violation) {
            rep.first_violation = cell;
            rep.pass = false;
          }
        }
      }
  return rep;
}

}  // namespace tw
