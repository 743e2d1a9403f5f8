#include "twist/lemmas.hpp"

#include "twist/errors.hpp"

#include <memory>
#include <sstream>

namespace tw {

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

std::string ints(std::initializer_list<std::pair<const char*, long>> kv) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : kv) {
    os << (first ? "" : ", ") << k << "=" << v;
    first = false;
  }
  return os.str();
}

std::string multi_str(const std::vector<int>& n) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < n.size(); ++k) os << (k ? "," : "") << n[k];
  os << ")";
  return os.str();
}

// Every multi-index in [0, bound]^p.
std::vector<std::vector<int>> multi_indices(std::size_t p, int bound) {
  std::vector<std::vector<int>> out;
  std::vector<int> n(p, 0);
  while (true) {
    out.push_back(n);
    std::size_t k = 0;
    while (k < p && n[k] == bound) n[k++] = 0;
    if (k == p) break;
    ++n[k];
  }
  return out;
}

std::vector<std::size_t> repeat(std::size_t i, int n) { return std::vector<std::size_t>(static_cast<std::size_t>(n), i); }

std::vector<std::size_t> pattern(const IndexSet& A, const std::vector<int>& n) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < A.size(); ++r)
    for (int c = 0; c < n[r]; ++c) out.push_back(A[r]);
  return out;
}

TensorVec on_H(const LinMap& f, const TensorVec& v) {
  TensorVec r;
  r.slots = v.slots;
  for (const auto& g : v.comp) r.comp.push_back(f(g));
  return r;
}

// v -> T~^{(n)} T~^{(n)*} v on the Hilbert part.
TensorVec range_pow(const TwistedTuple& t, const TensorVec& v, std::size_t m, int n) {
  return Tt_pow(t, Tt_pow_adj(t, v, m, n), m, n);
}

Graded as_graded(const TensorVec& v) { return v.comp.at(0); }

TensorVec as_tensor(const Graded& g) {
  TensorVec v;
  v.comp.push_back(g);
  return v;
}

// D_r for r = 1..upto applied in order to a vector whose slots read
// [x, i_1^{n_1}, ...]: walks x past each block and applies U_{x i_r}^{n_r}.
TensorVec walk_past(const TwistedTuple& t, TensorVec v, std::size_t x, const IndexSet& A,
                    const std::vector<int>& n, std::size_t upto) {
  std::size_t pos = 0;
  for (std::size_t r = 0; r < upto; ++r) {
    if (n[r] > 0) {
      v = apply_flip(t.fibers(), v, pos, x, A[r], 1, n[r]);
      v = U_pow(t, v, x, A[r], n[r]);
    }
    pos += static_cast<std::size_t>(n[r]);
  }
  return v;
}

std::vector<IndexSet> nonempty_subsets(std::size_t k) {
  std::vector<IndexSet> out;
  for (auto& A : all_subsets(k))
    if (!A.empty()) out.push_back(A);
  return out;
}

double span_residual(const Mat& basis, const Mat& b) {
  if (basis.cols() == 0) return b.cols() ? b.colwise().norm().maxCoeff() : 0.0;
  const Mat r = b - basis * (basis.adjoint() * b);
  return r.cols() ? r.colwise().norm().maxCoeff() : 0.0;
}

long op_reach(const LatticeOperator& op) {
  long r = 0;
  for (const auto& term : op.terms())
    for (long o : term.offset) r = std::max(r, std::abs(o));
  return r;
}

// Largest distance of op(V) from V over input degrees whose image stays in
// the window.
double invariance_residual(const LatticeOperator& op, const GradedSubspace& V, long N, std::string& where) {
  const long margin = op_reach(op);
  double worst = 0.0;
  for (const auto& [n, b] : V.basis) {
    if (b.cols() == 0) continue;
    bool inside = true;
    for (long c : n)
      if (std::abs(c) > N - margin) inside = false;
    if (!inside) continue;
    Graded g(V.space.fiber, b.cols());
    g.blocks.emplace(n, b);
    const Graded img = apply(op, g);
    for (const auto& [m, blk] : img.blocks) {
      auto it = V.basis.find(m);
      const double r = span_residual(it == V.basis.end() ? Mat(blk.rows(), 0) : it->second, blk);
      if (r > worst) {
        worst = r;
        where = "degree=" + degree_str(n);
      }
    }
  }
  return worst;
}

}  // namespace

LinMap intersection_projection(std::vector<LinMap> projections, const GradedSpace& s) {
  auto cache = std::make_shared<std::map<Degree, Mat>>();
  auto block = [cache, projections = std::move(projections), s](const Degree& n) -> const Mat& {
    auto it = cache->find(n);
    if (it != cache->end()) return it->second;
    const long d = s.fiber;
    Mat stacked(d * static_cast<long>(projections.size()), d);
    for (std::size_t k = 0; k < projections.size(); ++k) {
      Graded e(d, d);
      e.blocks.emplace(n, Mat::Identity(d, d));
      const Graded img = projections[k](e);
      Mat q = Mat::Zero(d, d);
      for (const auto& [m, b] : img.blocks) {
        if (m == n)
          q = b;
        else if (max_abs(b) > kRankTol)
          throw Error(ErrorKind::Precondition, "intersection_projection: projection moves degree " + degree_str(n));
      }
      stacked.middleRows(static_cast<long>(k) * d, d) = Mat::Identity(d, d) - q;
    }
    const Mat B = projections.empty() ? Mat::Identity(d, d) : null_basis(stacked, kRankTol);
    return cache->emplace(n, B * B.adjoint()).first->second;
  };
  return [block](const Graded& v) {
    Graded out(v.rows, v.cols);
    for (const auto& [n, b] : v.blocks) out.accumulate(n, block(n) * b);
    return out;
  };
}

CheckReport lemma_dtr(const TwistedTuple& t, long N, double tol, int bound) {
  CheckReport rep{"dtr"};
  const std::size_t k = t.rank();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      for (int p = 1; p <= bound; ++p)
        for (int q = 1; q <= bound; ++q) {
          const auto slots = repeat(j, q);
          auto lhs = [&](const TensorVec& v) { return Tt_pow_adj(t, Tt_pow(t, v, j, q), i, p); };
          auto rhs = [&](const TensorVec& v) {
            TensorVec w = apply_flip(t.fibers(), Tt_pow_adj(t, v, i, p), 0, j, i, q, p);
            return Tt_pow(t, U_pow(t, w, j, i, q * p), j, q);
          };
          const auto r = compare_tensor_maps(lhs, rhs, t.fibers(), slots, t.space(), N, tol);
          rep.record(r.worst, tol, locate(r, t.fibers(), slots, ints({{"i", i}, {"j", j}, {"p", p}, {"q", q}})));
        }
    }
  return rep;
}

CheckReport lemma_simplify(const TwistedTuple& t, long N, double tol, int bound) {
  CheckReport rep{"simplify"};
  for (const auto& A : nonempty_subsets(t.rank())) {
    std::vector<LinMap> ps;
    for (std::size_t i : A) ps.push_back(proj_wandering(t, i));
    const LinMap PWA = intersection_projection(ps, t.space());
    for (const auto& m : multi_indices(A.size(), bound)) {
      auto lhs = [&](const Graded& g) {
        TensorVec v = as_tensor(g);
        for (std::size_t r = A.size(); r-- > 0;) {
          const std::size_t i = A[r];
          v = Tt_pow(t, on_H([&](const Graded& x) { return wandering_proj(t, i, x); }, Tt_pow_adj(t, v, i, m[r])), i, m[r]);
        }
        return as_graded(v);
      };
      auto rhs = [&](const Graded& g) { return as_graded(TA(t, on_H(PWA, TA_adj(t, as_tensor(g), A, m)), A, m)); };
      const auto r = compare_maps(lhs, rhs, t.space(), N, tol);
      rep.record(r.worst, tol, locate(r, "A=" + set_str(A) + ", m=" + multi_str(m)));
    }
  }
  return rep;
}

CheckReport lemma_twisted_intersection(const TwistedTuple& t, long N, double tol, int bound) {
  CheckReport rep{"twisted-intersection"};
  for (const auto& A : nonempty_subsets(t.rank())) {
    if (A.size() < 2) continue;
    for (int M = 1; M <= bound; ++M) {
      std::vector<LinMap> ps;
      for (std::size_t i : A)
        ps.push_back([&t, i, M](const Graded& g) { return as_graded(range_pow(t, as_tensor(g), i, M)); });
      const LinMap rhs = intersection_projection(ps, t.space());
      const std::vector<int> m(A.size(), M);
      auto lhs = [&](const Graded& g) { return as_graded(TA(t, TA_adj(t, as_tensor(g), A, m), A, m)); };
      const auto r = compare_maps(lhs, rhs, t.space(), N, tol);
      rep.record(r.worst, tol, locate(r, "A=" + set_str(A) + ", m=" + std::to_string(M)));
    }
  }
  return rep;
}

CheckReport lemma_u_intertwining(const TwistedTuple& t, long N, double tol, int bound) {
  CheckReport rep{"u-intertwining"};
  const std::size_t k = t.rank();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      for (std::size_t m = 0; m < k; ++m)
        for (int n = 1; n <= bound; ++n) {
          const std::string head = ints({{"i", i}, {"j", j}, {"m", m}, {"n", n}});
          {
            const auto slots = repeat(m, n);
            auto lhs = [&](const TensorVec& v) { return U_pow(t, Tt_pow(t, v, m, n), i, j, 1); };
            auto rhs = [&](const TensorVec& v) { return Tt_pow(t, U_pow(t, v, i, j, 1), m, n); };
            const auto r = compare_tensor_maps(lhs, rhs, t.fibers(), slots, t.space(), N, tol);
            rep.record(r.worst, tol, locate(r, t.fibers(), slots, "U T: " + head));
          }
          {
            const std::vector<std::size_t> slots;
            auto lhs = [&](const TensorVec& v) { return U_pow(t, range_pow(t, v, m, n), i, j, 1); };
            auto rhs = [&](const TensorVec& v) { return range_pow(t, U_pow(t, v, i, j, 1), m, n); };
            const auto r = compare_tensor_maps(lhs, rhs, t.fibers(), slots, t.space(), N, tol);
            rep.record(r.worst, tol, locate(r, t.fibers(), slots, "U P: " + head));
          }
          {
            const std::vector<std::size_t> slots{i, j};
            auto flipU = [&](const TensorVec& v) { return U_pow(t, apply_flip(t.fibers(), v, 0, i, j, 1, 1), i, j, 1); };
            auto lhs = [&](const TensorVec& v) { return flipU(range_pow(t, v, m, n)); };
            auto rhs = [&](const TensorVec& v) { return range_pow(t, flipU(v), m, n); };
            const auto r = compare_tensor_maps(lhs, rhs, t.fibers(), slots, t.space(), N, tol);
            rep.record(r.worst, tol, locate(r, t.fibers(), slots, "tU P: " + head));
          }
        }
    }
  return rep;
}

CheckReport lemma_u_power_past_T(const TwistedTuple& t, long N, double tol, int bound) {
  CheckReport rep{"u-power-past-T"};
  const std::size_t k = t.rank();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      for (std::size_t l = 0; l < k; ++l)
        for (int n = 1; n <= bound; ++n)
          for (int m = 1; m <= bound; ++m) {
            const auto slots = repeat(l, m);
            auto lhs = [&](const TensorVec& v) { return U_pow(t, Tt_pow(t, v, l, m), i, j, n); };
            auto rhs = [&](const TensorVec& v) { return Tt_pow(t, U_pow(t, v, i, j, n), l, m); };
            const auto r = compare_tensor_maps(lhs, rhs, t.fibers(), slots, t.space(), N, tol);
            rep.record(r.worst, tol,
                       locate(r, t.fibers(), slots, ints({{"i", i}, {"j", j}, {"l", l}, {"n", n}, {"m", m}})));
          }
    }
  return rep;
}

CheckReport lemma_flip_twist_past_T(const TwistedTuple& t, long N, double tol, int bound) {
  CheckReport rep{"flip-twist-past-T"};
  const std::size_t k = t.rank();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      for (std::size_t l = 0; l < k; ++l)
        for (int n = 1; n <= bound; ++n)
          for (int m = 1; m <= bound; ++m) {
            std::vector<std::size_t> slots{i};
            for (int c = 0; c < n; ++c) slots.push_back(j);
            for (int c = 0; c < m; ++c) slots.push_back(l);
            auto tu = [&](const TensorVec& v) { return U_pow(t, apply_flip(t.fibers(), v, 0, i, j, 1, n), i, j, n); };
            auto lhs = [&](const TensorVec& v) { return tu(Tt_pow(t, v, l, m)); };
            auto rhs = [&](const TensorVec& v) { return Tt_pow(t, tu(v), l, m); };
            const auto r = compare_tensor_maps(lhs, rhs, t.fibers(), slots, t.space(), N, tol);
            rep.record(r.worst, tol,
                       locate(r, t.fibers(), slots, ints({{"i", i}, {"j", j}, {"l", l}, {"n", n}, {"m", m}})));
          }
    }
  return rep;
}

CheckReport lemma_flip_twist_past_TA(const TwistedTuple& t, long N, double tol, int bound, int multi) {
  CheckReport rep{"flip-twist-past-TA"};
  const std::size_t k = t.rank();
  for (const auto& A : nonempty_subsets(k))
    for (const auto& q : multi_indices(A.size(), multi))
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
          if (i == j) continue;
          for (int n = 1; n <= bound; ++n) {
            std::vector<std::size_t> slots{i};
            for (int c = 0; c < n; ++c) slots.push_back(j);
            for (std::size_t s : pattern(A, q)) slots.push_back(s);
            auto tu = [&](const TensorVec& v) { return U_pow(t, apply_flip(t.fibers(), v, 0, i, j, 1, n), i, j, n); };
            auto lhs = [&](const TensorVec& v) { return tu(TA(t, v, A, q)); };
            auto rhs = [&](const TensorVec& v) { return TA(t, tu(v), A, q); };
            const auto r = compare_tensor_maps(lhs, rhs, t.fibers(), slots, t.space(), N, tol);
            rep.record(r.worst, tol,
                       locate(r, t.fibers(), slots,
                              "A=" + set_str(A) + ", q=" + multi_str(q) + ", " + ints({{"i", i}, {"j", j}, {"n", n}})));
          }
        }
  return rep;
}

CheckReport lemma_T_past_T_power(const TwistedTuple& t, long N, double tol, int bound) {
  CheckReport rep{"T-past-T-power"};
  const std::size_t k = t.rank();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      for (int n = 1; n <= bound; ++n) {
        std::vector<std::size_t> slots{i};
        for (int c = 0; c < n; ++c) slots.push_back(j);
        auto lhs = [&](const TensorVec& v) { return Tt(t, Tt_pow(t, v, j, n), i); };
        auto rhs = [&](const TensorVec& v) {
          return Tt_pow(t, Tt(t, U_pow(t, apply_flip(t.fibers(), v, 0, i, j, 1, n), i, j, n), i), j, n);
        };
        const auto r = compare_tensor_maps(lhs, rhs, t.fibers(), slots, t.space(), N, tol);
        rep.record(r.worst, tol, locate(r, t.fibers(), slots, ints({{"i", i}, {"j", j}, {"n", n}})));
      }
    }
  return rep;
}

CheckReport lemma_T_past_TA(const TwistedTuple& t, long N, double tol, int multi) {
  CheckReport rep{"T-past-TA"};
  for (const auto& A : nonempty_subsets(t.rank()))
    for (const auto& n : multi_indices(A.size(), multi))
      for (std::size_t jj = 0; jj < A.size(); ++jj) {
        const std::size_t x = A[jj];
        std::vector<std::size_t> slots{x};
        for (std::size_t s : pattern(A, n)) slots.push_back(s);
        std::vector<int> n1 = n;
        ++n1[jj];
        auto lhs = [&](const TensorVec& v) { return Tt(t, TA(t, v, A, n), x); };
        auto rhs = [&](const TensorVec& v) { return TA(t, walk_past(t, v, x, A, n, jj), A, n1); };
        const auto r = compare_tensor_maps(lhs, rhs, t.fibers(), slots, t.space(), N, tol);
        rep.record(r.worst, tol,
                   locate(r, t.fibers(), slots, "A=" + set_str(A) + ", n=" + multi_str(n) + ", j=" + std::to_string(jj)));
      }
  return rep;
}

CheckReport lemma_Tl_past_TA(const TwistedTuple& t, long N, double tol, int multi) {
  CheckReport rep{"Tl-past-TA"};
  for (const auto& A : nonempty_subsets(t.rank()))
    for (std::size_t l : complement(A, t.rank()))
      for (const auto& n : multi_indices(A.size(), multi)) {
        std::vector<std::size_t> slots{l};
        for (std::size_t s : pattern(A, n)) slots.push_back(s);
        auto lhs = [&](const TensorVec& v) { return Tt(t, TA(t, v, A, n), l); };
        auto rhs = [&](const TensorVec& v) { return TA(t, Tt(t, walk_past(t, v, l, A, n, A.size()), l), A, n); };
        const auto r = compare_tensor_maps(lhs, rhs, t.fibers(), slots, t.space(), N, tol);
        rep.record(r.worst, tol,
                   locate(r, t.fibers(), slots, "A=" + set_str(A) + ", l=" + std::to_string(l) + ", n=" + multi_str(n)));
      }
  return rep;
}

CheckReport lemma_reducing_kernels(const TwistedTuple& t, long N, double tol) {
  CheckReport rep{"reducing-kernels"};
  const std::size_t k = t.rank();
  for (const auto& A : all_subsets(k)) {
    std::vector<std::pair<std::string, LatticeOperator>> ops;
    for (std::size_t c = 0; c < t.algebra.sigma.size(); ++c) ops.emplace_back("sigma" + std::to_string(c), t.algebra.sigma[c]);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (i != j && t.has_twist(i, j)) ops.emplace_back("U" + std::to_string(i) + std::to_string(j), t.twist(i, j));
    for (std::size_t j : complement(A, k))
      for (long a = 0; a < t.fibers().dim(j); ++a) {
        const auto ua = static_cast<std::size_t>(a);
        ops.emplace_back("S" + std::to_string(j) + "_" + std::to_string(a), t.S(j, ua));
        ops.emplace_back("S" + std::to_string(j) + "_" + std::to_string(a) + "*", t.S_adj(j, ua));
      }
    const GradedSubspace W = joint_wandering(t, A, N);
    const GradedSubspace D = d_space(t, A, N);
    for (const auto& [name, op] : ops) {
      std::string where;
      rep.record(invariance_residual(op, W, N, where), tol, "W_" + set_str(A) + ", " + name + ", " + where);
      rep.record(invariance_residual(op, D, N, where), tol, "D_" + set_str(A) + ", " + name + ", " + where);
    }
  }
  return rep;
}

std::vector<CheckReport> check_lemmas(const TwistedTuple& t, long N, double tol, const LemmaBounds& b) {
  return {lemma_dtr(t, N, tol, b.dtr),
          lemma_simplify(t, N, tol, b.simplify),
          lemma_twisted_intersection(t, N, tol, b.multi),
          lemma_u_intertwining(t, N, tol, b.intertwining),
          lemma_u_power_past_T(t, N, tol, b.commutation),
          lemma_flip_twist_past_T(t, N, tol, b.commutation),
          lemma_flip_twist_past_TA(t, N, tol, b.commutation, b.multi),
          lemma_T_past_T_power(t, N, tol, b.commutation),
          lemma_T_past_TA(t, N, tol, b.multi),
          lemma_Tl_past_TA(t, N, tol, b.multi),
          lemma_reducing_kernels(t, N, tol)};
}

}  // namespace tw
