#include "twist/representation.hpp"

#include "twist/errors.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

namespace tw {

const char* to_string(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::Scalar: return "scalar";
    case AlgebraKind::Diagonal: return "diagonal";
    case AlgebraKind::Matrix: return "matrix";
  }
  return "scalar";
}

long AlgebraSpec::basis_size() const {
  switch (kind) {
    case AlgebraKind::Scalar: return 1;
    case AlgebraKind::Diagonal: return n;
    case AlgebraKind::Matrix: return n * n;
  }
  return 1;
}

Vec AlgebraSpec::product(long a, long b) const {
  Vec out = Vec::Zero(basis_size());
  switch (kind) {
    case AlgebraKind::Scalar: out(0) = 1.0; break;
    case AlgebraKind::Diagonal:
      if (a == b) out(a) = 1.0;
      break;
    case AlgebraKind::Matrix: {
      const long p = a / n, q = a % n, r = b / n, s = b % n;
      if (q == r) out(p * n + s) = 1.0;
      break;
    }
  }
  return out;
}

Vec AlgebraSpec::star(long a) const {
  Vec out = Vec::Zero(basis_size());
  if (kind == AlgebraKind::Matrix)
    out((a % n) * n + a / n) = 1.0;
  else
    out(a) = 1.0;
  return out;
}

AlgebraSpec AlgebraSpec::scalar(const GradedSpace& s) {
  AlgebraSpec a;
  a.sigma.push_back(LatticeOperator::identity(s));
  return a;
}

Mat AlgebraSpec::coordinate_action(const std::vector<long>& perm) {
  const long m = static_cast<long>(perm.size());
  Mat a = Mat::Zero(m, m);
  for (long x = 0; x < m; ++x) a(x, perm[static_cast<std::size_t>(x)]) = 1.0;
  return a;
}

Mat AlgebraSpec::conjugation_action(const Mat& u) { return kron(u, u.conjugate()); }

LatticeOperator sigma_of(const AlgebraSpec& alg, const Vec& coords) {
  if (coords.size() != static_cast<long>(alg.sigma.size()))
    throw Error(ErrorKind::ShapeMismatch, "sigma_of: coordinate length");
  LatticeOperator out = LatticeOperator::zero(alg.sigma.front().space());
  for (long c = 0; c < coords.size(); ++c)
    if (coords(c) != cplx(0.0, 0.0)) out = add(out, scale(coords(c), alg.sigma[static_cast<std::size_t>(c)]));
  return out;
}

TwistedTuple::TwistedTuple(FiberSpec fibers, GradedSpace space, std::vector<std::vector<LatticeOperator>> S)
    : fibers_(std::move(fibers)), space_(space), S_(std::move(S)) {
  if (S_.size() != fibers_.rank()) throw Error(ErrorKind::ShapeMismatch, "S-family rank vs fibers");
  for (std::size_t i = 0; i < S_.size(); ++i) {
    if (static_cast<long>(S_[i].size()) != fibers_.dim(i))
      throw Error(ErrorKind::ShapeMismatch, "S-family size vs fiber dimension");
    std::vector<LatticeOperator> adj;
    for (const auto& op : S_[i]) {
      if (!(op.space() == space_)) throw Error(ErrorKind::ShapeMismatch, "S operator space");
      adj.push_back(adjoint(op));
    }
    S_adj_.push_back(std::move(adj));
  }
  algebra = AlgebraSpec::scalar(space_);
}

void TwistedTuple::set_twist(std::size_t i, std::size_t j, const LatticeOperator& u) {
  if (i == j) throw Error(ErrorKind::InvalidPair, "twist requires i != j");
  if (i >= rank() || j >= rank()) throw Error(ErrorKind::InvalidInput, "twist index out of range");
  if (!(u.space() == space_)) throw Error(ErrorKind::ShapeMismatch, "twist space");
  if (i < j)
    U_[{i, j}] = u;
  else
    U_[{j, i}] = adjoint(u);
}

LatticeOperator TwistedTuple::twist(std::size_t i, std::size_t j) const {
  if (i == j) throw Error(ErrorKind::InvalidPair, "twist requires i != j");
  auto it = U_.find({std::min(i, j), std::max(i, j)});
  if (it == U_.end()) return LatticeOperator::identity(space_);
  return i < j ? it->second : adjoint(it->second);
}

bool TwistedTuple::has_twist(std::size_t i, std::size_t j) const {
  return U_.count({std::min(i, j), std::max(i, j)}) > 0;
}

void CheckReport::record(double dev, double tol, const std::string& location) {
  if (dev > worst) worst = dev;
  if (dev > tol && pass) {
    pass = false;
    where = location;
  }
}

void CheckReport::absorb(const CheckReport& sub) {
  if (sub.worst > worst) worst = sub.worst;
  if (!sub.pass && pass) {
    pass = false;
    where = sub.name + (sub.where.empty() ? "" : " at " + sub.where);
  }
  notes.insert(notes.end(), sub.notes.begin(), sub.notes.end());
}

TensorVec Tt(const TwistedTuple& t, const TensorVec& v, std::size_t i) {
  if (v.slots.empty() || v.slots.back() != i) throw Error(ErrorKind::ShapeMismatch, "Tt: last slot is not E_i");
  const long d = t.fibers().dim(i);
  TensorVec r;
  r.slots.assign(v.slots.begin(), v.slots.end() - 1);
  const std::size_t outer = v.comp.size() / static_cast<std::size_t>(d);
  const Graded& proto = v.comp.front();
  r.comp.assign(outer, Graded(proto.rows, proto.cols));
  for (std::size_t a = 0; a < outer; ++a)
    for (long al = 0; al < d; ++al)
      r.comp[a] += apply(t.S(i, static_cast<std::size_t>(al)), v.comp[a * static_cast<std::size_t>(d) + static_cast<std::size_t>(al)]);
  return r;
}

TensorVec Tt_adj(const TwistedTuple& t, const TensorVec& v, std::size_t i) {
  const long d = t.fibers().dim(i);
  TensorVec r;
  r.slots = v.slots;
  r.slots.push_back(i);
  r.comp.reserve(v.comp.size() * static_cast<std::size_t>(d));
  for (const auto& g : v.comp)
    for (long al = 0; al < d; ++al) r.comp.push_back(apply(t.S_adj(i, static_cast<std::size_t>(al)), g));
  return r;
}

TensorVec Tt_pow(const TwistedTuple& t, const TensorVec& v, std::size_t i, int n) {
  TensorVec r = v;
  for (int k = 0; k < n; ++k) r = Tt(t, r, i);
  return r;
}

TensorVec Tt_pow_adj(const TwistedTuple& t, const TensorVec& v, std::size_t i, int n) {
  TensorVec r = v;
  for (int k = 0; k < n; ++k) r = Tt_adj(t, r, i);
  return r;
}

TensorVec TA(const TwistedTuple& t, const TensorVec& v, const std::vector<std::size_t>& A,
             const std::vector<int>& n) {
  if (A.size() != n.size()) throw Error(ErrorKind::ShapeMismatch, "TA: |A| vs multi-index");
  TensorVec r = v;
  for (std::size_t p = A.size(); p-- > 0;) r = Tt_pow(t, r, A[p], n[p]);
  return r;
}

TensorVec TA_adj(const TwistedTuple& t, const TensorVec& v, const std::vector<std::size_t>& A,
                 const std::vector<int>& n) {
  if (A.size() != n.size()) throw Error(ErrorKind::ShapeMismatch, "TA_adj: |A| vs multi-index");
  TensorVec r = v;
  for (std::size_t p = 0; p < A.size(); ++p) r = Tt_pow_adj(t, r, A[p], n[p]);
  return r;
}

TensorVec U_pow(const TwistedTuple& t, const TensorVec& v, std::size_t i, std::size_t j, int e) {
  if (e < 0) throw Error(ErrorKind::InvalidInput, "U_pow: negative exponent");
  if (e == 0) return v;
  const LatticeOperator u = t.twist(i, j);
  TensorVec r = v;
  for (int k = 0; k < e; ++k) r = apply_H(u, r);
  return r;
}

Graded range_proj(const TwistedTuple& t, std::size_t i, const Graded& v) {
  Graded out(v.rows, v.cols);
  for (long a = 0; a < t.fibers().dim(i); ++a)
    out += apply(t.S(i, static_cast<std::size_t>(a)), apply(t.S_adj(i, static_cast<std::size_t>(a)), v));
  return out;
}

Graded wandering_proj(const TwistedTuple& t, std::size_t i, const Graded& v) {
  Graded out = v;
  out -= range_proj(t, i, v);
  return out;
}

namespace {

std::string locate(const TensorReport& r, const FiberSpec& f, const std::vector<std::size_t>& slots,
                   const std::string& head) {
  std::ostringstream os;
  os << head;
  const auto digits = tensor_digits(f, slots, r.tensor_index);
  for (std::size_t k = 0; k < digits.size(); ++k) os << (k == 0 ? ", basis=(" : ",") << digits[k];
  if (!digits.empty()) os << ")";
  os << ", degree=" << degree_str(r.degree) << ", fiber=" << r.fiber_index;
  return os.str();
}

std::string locate(const WindowReport& r, const std::string& head) {
  return head + ", degree=" + degree_str(r.degree) + ", fiber=" + std::to_string(r.fiber_index);
}

Graded ident(const Graded& v) { return v; }

}  // namespace

CheckReport check_isometric(const TwistedTuple& t, long N, double tol) {
  CheckReport rep{"isometric"};
  for (std::size_t i = 0; i < t.rank(); ++i) {
    const std::vector<std::size_t> slots{i};
    auto lhs = [&](const TensorVec& v) { return Tt_adj(t, Tt(t, v, i), i); };
    auto rhs = [](const TensorVec& v) { return v; };
    const auto r = compare_tensor_maps(lhs, rhs, t.fibers(), slots, t.space(), N, tol);
    rep.record(r.worst, tol, locate(r, t.fibers(), slots, "i=" + std::to_string(i)));
  }
  return rep;
}

CheckReport check_coisometric(const TwistedTuple& t, std::size_t i, long N, double tol) {
  CheckReport rep{"coisometric"};
  const auto r = compare_maps([&](const Graded& v) { return range_proj(t, i, v); }, ident, t.space(), N, tol);
  rep.record(r.worst, tol, locate(r, "i=" + std::to_string(i)));
  return rep;
}

CheckReport check_coisometric(const TwistedTuple& t, long N, double tol) {
  CheckReport rep{"coisometric"};
  for (std::size_t i = 0; i < t.rank(); ++i) rep.absorb(check_coisometric(t, i, N, tol));
  return rep;
}

CheckReport check_twist_family(const TwistedTuple& t, long N, double tol) {
  CheckReport rep{"twist-family"};
  const std::size_t k = t.rank();
  const GradedSpace& s = t.space();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  for (auto [i, j] : pairs) {
    const LatticeOperator u = t.twist(i, j);
    const LatticeOperator ua = adjoint(u);
    const std::string tag = "U(" + std::to_string(i) + "," + std::to_string(j) + ")";
    auto r1 = compare_maps([&](const Graded& v) { return apply(ua, apply(u, v)); }, ident, s, N, tol);
    rep.record(r1.worst, tol, locate(r1, tag + " not isometric"));
    auto r2 = compare_maps([&](const Graded& v) { return apply(u, apply(ua, v)); }, ident, s, N, tol);
    rep.record(r2.worst, tol, locate(r2, tag + " not coisometric"));
    for (auto [p, q] : pairs) {
      if (std::make_pair(p, q) <= std::make_pair(i, j)) continue;
      const LatticeOperator w = t.twist(p, q);
      auto r = compare_maps([&](const Graded& v) { return apply(u, apply(w, v)); },
                            [&](const Graded& v) { return apply(w, apply(u, v)); }, s, N, tol);
      rep.record(r.worst, tol, locate(r, tag + " vs U(" + std::to_string(p) + "," + std::to_string(q) + ")"));
    }
    for (std::size_t l = 0; l < k; ++l)
      for (long a = 0; a < t.fibers().dim(l); ++a) {
        const LatticeOperator& S = t.S(l, static_cast<std::size_t>(a));
        auto r = compare_maps([&](const Graded& v) { return apply(u, apply(S, v)); },
                              [&](const Graded& v) { return apply(S, apply(u, v)); }, s, N, tol);
        rep.record(r.worst, tol,
                   locate(r, tag + " vs S(" + std::to_string(l) + "," + std::to_string(a) + ")"));
      }
    for (std::size_t c = 0; c < t.algebra.sigma.size(); ++c) {
      const LatticeOperator& sg = t.algebra.sigma[c];
      auto r = compare_maps([&](const Graded& v) { return apply(u, apply(sg, v)); },
                            [&](const Graded& v) { return apply(sg, apply(u, v)); }, s, N, tol);
      rep.record(r.worst, tol, locate(r, tag + " vs sigma(" + std::to_string(c) + ")"));
    }
  }
  return rep;
}

CheckReport check_twisted(const TwistedTuple& t, long N, double tol) {
  CheckReport rep{"twisted"};
  for (std::size_t i = 0; i < t.rank(); ++i)
    for (std::size_t j = 0; j < t.rank(); ++j) {
      if (i == j) continue;
      const std::vector<std::size_t> slots{i, j};
      auto lhs = [&](const TensorVec& v) { return Tt(t, Tt(t, v, j), i); };
      auto rhs = [&](const TensorVec& v) {
        return Tt(t, Tt(t, apply_flip(t.fibers(), U_pow(t, v, i, j, 1), 0, i, j, 1, 1), i), j);
      };
      const auto r = compare_tensor_maps(lhs, rhs, t.fibers(), slots, t.space(), N, tol);
      rep.record(r.worst, tol,
                 locate(r, t.fibers(), slots, "i=" + std::to_string(i) + ", j=" + std::to_string(j)));
    }
  CheckReport fam = check_twist_family(t, N, tol);
  rep.absorb(fam);
  return rep;
}

CheckReport check_doubly_twisted(const TwistedTuple& t, long N, double tol) {
  CheckReport rep{"doubly-twisted"};
  for (std::size_t i = 0; i < t.rank(); ++i)
    for (std::size_t j = 0; j < t.rank(); ++j) {
      if (i == j) continue;
      const std::vector<std::size_t> slots{i};
      auto lhs = [&](const TensorVec& v) { return Tt_adj(t, Tt(t, v, i), j); };
      auto rhs = [&](const TensorVec& v) {
        return Tt(t, apply_flip(t.fibers(), U_pow(t, Tt_adj(t, v, j), i, j, 1), 0, i, j, 1, 1), i);
      };
      const auto r = compare_tensor_maps(lhs, rhs, t.fibers(), slots, t.space(), N, tol);
      rep.record(r.worst, tol,
                 locate(r, t.fibers(), slots, "i=" + std::to_string(i) + ", j=" + std::to_string(j)));
    }
  return rep;
}

CheckReport check_covariance_automorphic(const TwistedTuple& t, long N, double tol) {
  CheckReport rep{"covariance"};
  const AlgebraSpec& alg = t.algebra;
  if (alg.kind == AlgebraKind::Scalar || alg.alpha.size() != t.rank())
    throw Error(ErrorKind::Precondition, "covariance check needs a non-scalar algebra with automorphisms");
  for (std::size_t i = 0; i < t.rank(); ++i)
    if (t.fibers().dim(i) != 1) throw Error(ErrorKind::Precondition, "automorphic tuples carry one S_i per coordinate");
  for (std::size_t i = 0; i < t.rank(); ++i) {
    const LatticeOperator& S = t.S(i, 0);
    for (long c = 0; c < alg.basis_size(); ++c) {
      const LatticeOperator& lhs_s = alg.sigma[static_cast<std::size_t>(c)];
      const LatticeOperator rhs_s = sigma_of(alg, alg.alpha[i].col(c));
      auto r = compare_maps([&](const Graded& v) { return apply(lhs_s, apply(S, v)); },
                            [&](const Graded& v) { return apply(S, apply(rhs_s, v)); }, t.space(), N, tol);
      rep.record(r.worst, tol, locate(r, "a=" + std::to_string(c) + ", i=" + std::to_string(i)));
    }
  }
  return rep;
}

CheckReport check_sigma_homomorphism(const AlgebraSpec& alg, const GradedSpace& s, long N, double tol) {
  CheckReport rep{"sigma-homomorphism"};
  const long m = alg.basis_size();
  for (long a = 0; a < m; ++a) {
    const LatticeOperator& sa = alg.sigma[static_cast<std::size_t>(a)];
    for (long b = 0; b < m; ++b) {
      const LatticeOperator& sb = alg.sigma[static_cast<std::size_t>(b)];
      const LatticeOperator sab = sigma_of(alg, alg.product(a, b));
      auto r = compare_maps([&](const Graded& v) { return apply(sa, apply(sb, v)); },
                            [&](const Graded& v) { return apply(sab, v); }, s, N, tol);
      rep.record(r.worst, tol, locate(r, "product a=" + std::to_string(a) + ", b=" + std::to_string(b)));
    }
    const LatticeOperator sa_adj = adjoint(sa);
    const LatticeOperator sstar = sigma_of(alg, alg.star(a));
    auto r = compare_maps([&](const Graded& v) { return apply(sa_adj, v); },
                          [&](const Graded& v) { return apply(sstar, v); }, s, N, tol);
    rep.record(r.worst, tol, locate(r, "star a=" + std::to_string(a)));
  }
  return rep;
}

Mat window_matrix(const LinMap& f, const GradedSpace& s, long N) {
  const auto degs = window_degrees(s, N);
  std::map<Degree, long> row_of;
  for (std::size_t k = 0; k < degs.size(); ++k) row_of[degs[k]] = static_cast<long>(k) * s.fiber;
  const long dim = static_cast<long>(degs.size()) * s.fiber;
  Mat out = Mat::Zero(dim, dim);
  for (const auto& n : degs) {
    Graded basis(s.fiber, s.fiber);
    basis.blocks.emplace(n, Mat::Identity(s.fiber, s.fiber));
    const Graded img = f(basis);
    for (const auto& [m, b] : img.blocks) {
      auto it = row_of.find(m);
      if (it == row_of.end()) continue;
      out.block(it->second, row_of[n], s.fiber, s.fiber) = b;
    }
  }
  return out;
}

CheckReport check_row_contraction(const TwistedTuple& t, long N, double tol) {
  CheckReport rep{"row-contraction"};
  for (std::size_t i = 0; i < t.rank(); ++i) {
    const Mat g = window_matrix([&](const Graded& v) { return wandering_proj(t, i, v); }, t.space(), N);
    const Mat h = 0.5 * (g + g.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().size() ? es.eigenvalues().minCoeff() : 0.0;
    rep.record(lo < 0 ? -lo : 0.0, tol, "i=" + std::to_string(i) + ", min eigenvalue " + std::to_string(lo));
  }
  rep.notes.push_back("row contraction on the window is a necessary condition only");
  return rep;
}

TwistedTuple induce_from_S(std::vector<std::vector<LatticeOperator>> S, const FiberSpec& fibers,
                           const std::map<std::pair<std::size_t, std::size_t>, LatticeOperator>& twists,
                           const AlgebraSpec& algebra, long N, double tol) {
  if (S.empty() || S.front().empty()) throw Error(ErrorKind::InvalidInput, "induce_from_S: empty family");
  const GradedSpace space = S.front().front().space();
  TwistedTuple t(fibers, space, std::move(S));
  t.algebra = algebra;
  for (const auto& [ij, u] : twists) t.set_twist(ij.first, ij.second, u);
  const CheckReport rc = check_row_contraction(t, N, tol);
  if (!rc.pass) throw Error(ErrorKind::Precondition, "row-contraction violated: " + rc.where);
  return t;
}

}  // namespace tw
