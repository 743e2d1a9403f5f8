#include "twist/wold.hpp"

#include "twist/errors.hpp"

#include <algorithm>
#include <sstream>

namespace tw {

long GradedSubspace::dim_at(const Degree& n) const {
  auto it = basis.find(n);
  return it == basis.end() ? 0 : it->second.cols();
}

long GradedSubspace::total_dim() const {
  long d = 0;
  for (const auto& kv : basis) d += kv.second.cols();
  return d;
}

Graded GradedSubspace::as_columns() const {
  const long total = total_dim();
  Graded g(space.fiber, total);
  long col = 0;
  for (const auto& [n, b] : basis) {
    if (b.cols() == 0) continue;
    Mat blk = Mat::Zero(space.fiber, total);
    blk.middleCols(col, b.cols()) = b;
    g.blocks.emplace(n, std::move(blk));
    col += b.cols();
  }
  return g;
}

std::map<long, long> GradedSubspace::dims_by_total_degree() const {
  std::map<long, long> out;
  for (const auto& [n, b] : basis) {
    long s = 0;
    for (long x : n) s += x;
    out[s] += b.cols();
  }
  return out;
}

DegreeBlocks degree_blocks(const LinMap& f, const GradedSpace& s, long N) {
  DegreeBlocks out;
  for (const auto& n : window_degrees(s, N)) {
    Graded basis(s.fiber, s.fiber);
    basis.blocks.emplace(n, Mat::Identity(s.fiber, s.fiber));
    const Graded img = f(basis);
    Mat blk = Mat::Zero(s.fiber, s.fiber);
    for (const auto& [m, b] : img.blocks) {
      if (m == n)
        blk = b;
      else
        out.off_degree = std::max(out.off_degree, max_abs(b));
    }
    out.blocks.emplace(n, std::move(blk));
  }
  return out;
}

std::vector<IndexSet> all_subsets(std::size_t k) {
  std::vector<IndexSet> out;
  for (unsigned long mask = 0; mask < (1ul << k); ++mask) {
    IndexSet A;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (1ul << i)) A.push_back(i);
    out.push_back(A);
  }
  return out;
}

IndexSet complement(const IndexSet& A, std::size_t k) {
  IndexSet out;
  for (std::size_t i = 0; i < k; ++i)
    if (std::find(A.begin(), A.end(), i) == A.end()) out.push_back(i);
  return out;
}

std::string set_str(const IndexSet& A) {
  std::ostringstream os;
  os << '{';
  for (std::size_t p = 0; p < A.size(); ++p) os << (p ? "," : "") << A[p];
  os << '}';
  return os.str();
}

namespace {

// sum over fiber words w of length L of S_w X S_w^*, written recursively.
Graded word_sandwich(const TwistedTuple& t, std::size_t i, long L, const LinMap& inner, const Graded& v) {
  if (L == 0) return inner(v);
  Graded out(v.rows, v.cols);
  for (long a = 0; a < t.fibers().dim(i); ++a) {
    const auto al = static_cast<std::size_t>(a);
    out += apply(t.S(i, al), word_sandwich(t, i, L - 1, inner, apply(t.S_adj(i, al), v)));
  }
  return out;
}

Graded h1_series(const TwistedTuple& t, std::size_t i, long L, const Graded& v) {
  // Q_L = P_W + sum_a S_a Q_{L-1} S_a^*.
  Graded out = wandering_proj(t, i, v);
  if (L == 0) return out;
  for (long a = 0; a < t.fibers().dim(i); ++a) {
    const auto al = static_cast<std::size_t>(a);
    out += apply(t.S(i, al), h1_series(t, i, L - 1, apply(t.S_adj(i, al), v)));
  }
  return out;
}

Graded identity_map(const Graded& v) { return v; }

Mat orthonormal_span(const Mat& m) { return column_span(m, kRankTol); }

}  // namespace

LinMap proj_wandering(const TwistedTuple& t, std::size_t i) {
  return [&t, i](const Graded& v) { return wandering_proj(t, i, v); };
}

LinMap proj_joint_wandering(const TwistedTuple& t, const IndexSet& A) {
  return [&t, A](const Graded& v) {
    Graded r = v;
    for (auto i : A) r = wandering_proj(t, i, r);
    return r;
  };
}

LinMap proj_H1(const TwistedTuple& t, std::size_t i, long L) {
  return [&t, i, L](const Graded& v) { return h1_series(t, i, L, v); };
}

LinMap proj_H2(const TwistedTuple& t, std::size_t i, long L) {
  return [&t, i, L](const Graded& v) { return word_sandwich(t, i, L, identity_map, v); };
}

LinMap proj_summand(const TwistedTuple& t, const IndexSet& A, long L) {
  return [&t, A, L](const Graded& v) {
    Graded r = v;
    for (std::size_t i = 0; i < t.rank(); ++i) {
      const bool in_A = std::find(A.begin(), A.end(), i) != A.end();
      r = in_A ? h1_series(t, i, L, r) : word_sandwich(t, i, L, identity_map, r);
    }
    return r;
  };
}

long series_length(const GradedSpace& s, long N) { return static_cast<long>(s.rank) * N + 2; }

namespace {

GradedSubspace from_projection(const LinMap& P, const GradedSpace& s, long N, const std::string& what) {
  GradedSubspace out{s, N, {}, {}};
  const DegreeBlocks db = degree_blocks(P, s, N);
  if (db.off_degree > kRankTol)
    out.warnings.push_back(what + ": projection moves degrees (off-degree mass " + std::to_string(db.off_degree) + ")");
  for (const auto& [n, b] : db.blocks) out.basis.emplace(n, range_basis(b, kRankTol));
  return out;
}

}  // namespace

GradedSubspace wandering(const TwistedTuple& t, std::size_t i, long N) {
  GradedSubspace w = from_projection(proj_wandering(t, i), t.space(), N, "wandering");
  const CheckReport iso = check_isometric(t, N, 1e-10);
  if (!iso.pass) w.warnings.push_back("input is not isometric on the window: " + iso.where);
  return w;
}

GradedSubspace joint_wandering(const TwistedTuple& t, const IndexSet& A, long N, double tol) {
  for (std::size_t p = 0; p < A.size(); ++p)
    for (std::size_t q = p + 1; q < A.size(); ++q) {
      const auto r = compare_maps(
          [&](const Graded& v) { return wandering_proj(t, A[p], wandering_proj(t, A[q], v)); },
          [&](const Graded& v) { return wandering_proj(t, A[q], wandering_proj(t, A[p], v)); }, t.space(), N, tol);
      if (!r.pass)
        throw Error(ErrorKind::InvalidInput, "wandering projections " + std::to_string(A[p]) + "," +
                                                 std::to_string(A[q]) + " do not commute at degree " +
                                                 degree_str(r.degree));
    }
  return from_projection(proj_joint_wandering(t, A), t.space(), N, "joint wandering");
}

GradedSubspace d_space(const TwistedTuple& t, const IndexSet& A, long N, long M) {
  if (M < 0) M = N + 2;
  const GradedSpace& s = t.space();
  const IndexSet Ac = complement(A, t.rank());
  const LinMap pw = proj_joint_wandering(t, A);
  GradedSubspace out{s, N, {}, {}};
  if (Ac.empty()) {
    GradedSubspace w = from_projection(pw, s, N, "D_A");
    return w;
  }
  std::vector<DegreeBlocks> stack;
  double off = 0.0;
  for (long k = 0; k <= M; ++k) {
    const std::vector<int> n(Ac.size(), static_cast<int>(k));
    LinMap Bt = [&, n](const Graded& v) {
      TensorVec tv;
      tv.comp.push_back(v);
      TensorVec up = TA_adj(t, tv, Ac, n);
      for (auto& g : up.comp) g = pw(g);
      TensorVec back = TA(t, up, Ac, n);
      return back.comp.front();
    };
    stack.push_back(degree_blocks(Bt, s, N));
    off = std::max(off, stack.back().off_degree);
  }
  if (off > kRankTol) out.warnings.push_back("D_A: range projections move degrees");
  long unstable = 0;
  for (const auto& n : window_degrees(s, N)) {
    auto null_of = [&](std::size_t upto) {
      Mat big(static_cast<long>(upto) * s.fiber, s.fiber);
      for (std::size_t k = 0; k < upto; ++k)
        big.middleRows(static_cast<long>(k) * s.fiber, s.fiber) =
            Mat::Identity(s.fiber, s.fiber) - stack[k].blocks.at(n);
      return null_basis(big, kRankTol);
    };
    const Mat full = null_of(stack.size());
    if (stack.size() > 1 && null_of(stack.size() - 1).cols() != full.cols()) ++unstable;
    out.basis.emplace(n, full);
  }
  if (unstable > 0)
    out.warnings.push_back("D_A not stabilized by M=" + std::to_string(M) + " at " + std::to_string(unstable) +
                           " degree(s)");
  return out;
}

SummandResult summand(const TwistedTuple& t, const IndexSet& A, long N) {
  SummandResult res;
  res.A = A;
  const GradedSpace& s = t.space();
  const GradedSubspace D = d_space(t, A, N);
  std::map<Degree, Mat> collected;
  if (D.total_dim() > 0) {
    const Graded dcols = D.as_columns();
    GradedSpace box{A.size(), 1, false};
    for (const auto& nd : window_degrees(box, N)) {
      std::vector<int> n(nd.begin(), nd.end());
      std::vector<std::size_t> slots;
      for (std::size_t p = 0; p < A.size(); ++p) slots.insert(slots.end(), static_cast<std::size_t>(n[p]), A[p]);
      const long dimE = tensor_dim(t.fibers(), slots);
      const long r = dcols.cols;
      TensorVec in;
      in.slots = slots;
      for (long e = 0; e < dimE; ++e) {
        Graded g(s.fiber, dimE * r);
        for (const auto& [deg, b] : dcols.blocks) {
          Mat blk = Mat::Zero(s.fiber, dimE * r);
          blk.middleCols(e * r, r) = b;
          g.blocks.emplace(deg, std::move(blk));
        }
        in.comp.push_back(std::move(g));
      }
      const Graded img = TA(t, in, A, n).comp.front();
      for (const auto& [deg, b] : img.blocks) {
        if (!s.admits(deg)) continue;
        bool inside = true;
        for (long x : deg) inside = inside && std::abs(x) <= N;
        if (!inside || max_abs(b) <= kRankTol) continue;
        auto it = collected.find(deg);
        if (it == collected.end())
          collected.emplace(deg, b);
        else {
          Mat joined(s.fiber, it->second.cols() + b.cols());
          joined << it->second, b;
          it->second = orthonormal_span(joined);
        }
      }
    }
  }
  res.generated = GradedSubspace{s, N, {}, D.warnings};
  for (const auto& n : window_degrees(s, N)) {
    auto it = collected.find(n);
    res.generated.basis.emplace(n, it == collected.end() ? Mat(s.fiber, 0) : orthonormal_span(it->second));
  }
  const long L = series_length(s, N);
  res.projected = from_projection(proj_summand(t, A, L), s, N, "H_A projection");
  for (const auto& n : window_degrees(s, N)) {
    const Mat& g = res.generated.basis.at(n);
    const Mat& p = res.projected.basis.at(n);
    const Mat diff = g * g.adjoint() - p * p.adjoint();
    res.route_gap = std::max(res.route_gap, max_abs(diff));
  }
  res.routes_agree = res.route_gap <= kRankTol;
  return res;
}

ExistenceReport check_existence(const TwistedTuple& t, long N, double tol) {
  ExistenceReport rep;
  const GradedSpace& s = t.space();
  const long L = series_length(s, N);
  bool located = false;
  for (std::size_t i = 0; i < t.rank(); ++i) {
    const LinMap P = proj_H1(t, i, L);
    for (std::size_t j = 0; j < t.rank(); ++j)
      for (long a = 0; a < t.fibers().dim(j); ++a) {
        const LatticeOperator& S = t.S(j, static_cast<std::size_t>(a));
        const auto r = compare_maps([&](const Graded& v) { return P(apply(S, v)); },
                                    [&](const Graded& v) { return apply(S, P(v)); }, s, N, tol);
        if (r.worst > rep.worst || !located) {
          rep.worst = r.worst;
          rep.i = i;
          rep.j = j;
          rep.alpha = static_cast<std::size_t>(a);
          rep.degree = r.degree;
          located = true;
        }
      }
  }
  rep.exists = rep.worst <= tol;
  std::ostringstream os;
  os << "P_H1[" << rep.i << "] vs S[" << rep.j << "][" << rep.alpha << "] at degree " << degree_str(rep.degree)
     << ": deviation " << rep.worst;
  rep.witness = os.str();
  return rep;
}

DecompositionReport verify_decomposition(const TwistedTuple& t, long N, double tol) {
  DecompositionReport rep;
  const GradedSpace& s = t.space();
  const ExistenceReport ex = check_existence(t, N, tol);
  if (!ex.exists) {
    rep.pass = false;
    rep.failures.push_back("no Wold decomposition: " + ex.witness);
    return rep;
  }
  long reach = 0;
  for (const auto& row : t.family())
    for (const auto& op : row)
      for (const auto& term : op.terms())
        for (long x : term.offset) reach = std::max(reach, std::abs(x));
  const long inner = N - reach;
  auto interior = [&](const Degree& n) {
    for (long x : n)
      if (std::abs(x) > inner) return false;
    return true;
  };
  const long L = series_length(s, N);
  for (const auto& A : all_subsets(t.rank())) {
    SummandResult sr = summand(t, A, N);
    if (!sr.routes_agree)
      rep.notes.push_back("summand " + set_str(A) + ": generating and projection routes differ by " +
                          std::to_string(sr.route_gap));
    for (const auto& w : sr.generated.warnings) rep.notes.push_back(set_str(A) + ": " + w);
    rep.summands.emplace(A, sr.generated);
  }
  // (a) dimensions add up.
  for (const auto& n : window_degrees(s, N)) {
    if (!interior(n)) continue;
    long total = 0;
    for (const auto& [A, sub] : rep.summands) total += sub.dim_at(n);
    if (total != s.fiber) {
      rep.pass = false;
      rep.failures.push_back("dimension count " + std::to_string(total) + " != " + std::to_string(s.fiber) +
                             " at degree " + degree_str(n));
    }
  }
  // (b) pairwise orthogonal.
  for (auto a = rep.summands.begin(); a != rep.summands.end(); ++a)
    for (auto b = std::next(a); b != rep.summands.end(); ++b)
      for (const auto& [n, ba] : a->second.basis) {
        const Mat& bb = b->second.basis.at(n);
        if (ba.cols() == 0 || bb.cols() == 0) continue;
        const double ov = max_abs(ba.adjoint() * bb);
        if (ov > 1e-8) {
          rep.pass = false;
          rep.failures.push_back("summands " + set_str(a->first) + " and " + set_str(b->first) +
                                 " overlap at degree " + degree_str(n));
        }
      }
  // (c) shift part exhausted by the wandering space on A, coisometric on A^c.
  for (const auto& [A, sub] : rep.summands) {
    GradedSubspace in{s, N, {}, {}};
    for (const auto& [n, b] : sub.basis)
      if (interior(n)) in.basis.emplace(n, b);
    if (in.total_dim() == 0) continue;
    const Graded cols = in.as_columns();
    for (std::size_t i = 0; i < t.rank(); ++i) {
      const bool in_A = std::find(A.begin(), A.end(), i) != A.end();
      Graded img = in_A ? proj_H2(t, i, L)(cols) : range_proj(t, i, cols);
      if (!in_A) img -= cols;
      const double dev = std::sqrt(img.column_norms2().maxCoeff());
      if (dev > 1e-8) {
        rep.pass = false;
        rep.failures.push_back("summand " + set_str(A) + ": coordinate " + std::to_string(i) +
                               (in_A ? " has a unitary part" : " is not coisometric"));
      }
    }
  }
  return rep;
}

}  // namespace tw
