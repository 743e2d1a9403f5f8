#include "twist/extension.hpp"

#include "twist/errors.hpp"

#include <algorithm>
#include <functional>

namespace tw {

long reach(const LatticeOperator& op) {
  long r = 0;
  for (const auto& t : op.terms())
    for (long x : t.offset) r = std::max(r, std::abs(x));
  return r;
}

LatticeOperator signed_continuation(const LatticeOperator& op, bool keep_unsigned_drops) {
  const GradedSpace& s = op.space();
  const GradedSpace ss{s.rank, s.fiber, true};
  std::vector<Term> terms = op.terms();
  if (keep_unsigned_drops && !s.is_signed)
    for (auto& t : terms)
      for (std::size_t c = 0; c < s.rank; ++c)
        if (t.offset[c] < 0) t.guards.push_back(Guard{c, -t.offset[c], true});
  return LatticeOperator(ss, std::move(terms));
}

namespace {

using LevelOp = std::function<LatticeOperator(std::size_t i, long m)>;

std::string pair_tag(std::size_t i, std::size_t j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

// I_m: the degrees n with n_c >= -m s_c, where copy m of H lives.
LatticeOperator level_region(const GradedSpace& ss, const Degree& s, long m) {
  if (m < 0) return LatticeOperator::zero(ss);
  std::vector<Guard> g;
  for (std::size_t c = 0; c < ss.rank; ++c) g.push_back(Guard{c, -m * s[c], true});
  return LatticeOperator::monomial(ss, Degree(ss.rank, 0), {}, 1.0, g);
}

struct Assembly {
  GradedSpace ss;
  Degree s;
  long levels;
  std::vector<LatticeOperator> up;    // Phi_c^m
  std::vector<LatticeOperator> down;  // Phi_c^{*m}
  std::vector<LatticeOperator> band;  // I_m - I_{m-1}

  Assembly(const LatticeOperator& phi, long M) : ss{phi.space().rank, phi.space().fiber, true}, levels(M) {
    const LatticeOperator phic = signed_continuation(phi, true);
    s = phi.terms().front().offset;
    up.push_back(LatticeOperator::identity(ss));
    for (long m = 1; m <= M; ++m) up.push_back(compose(phic, up.back()));
    for (const auto& u : up) down.push_back(adjoint(u));
    for (long m = 0; m <= M; ++m) band.push_back(level_region(ss, s, m) - level_region(ss, s, m - 1));
  }

  // sum_m Phi^{*m} cont(X_m) Phi^m (I_m - I_{m-1}).
  LatticeOperator operator()(const std::function<LatticeOperator(long)>& level) const {
    LatticeOperator out = LatticeOperator::zero(ss);
    for (long m = 0; m <= levels; ++m) {
      const auto mu = static_cast<std::size_t>(m);
      out = add(out, compose(compose(down[mu], compose(signed_continuation(level(m), true), up[mu])), band[mu]));
    }
    return out;
  }
};

long auto_levels(const TwistedTuple& t, const Degree& s, long N) {
  long r = 0;
  for (const auto& fam : t.family())
    for (const auto& op : fam) r = std::max(r, reach(op));
  long smin = 0;
  for (long x : s)
    if (x > 0) smin = smin == 0 ? x : std::min(smin, x);
  if (smin == 0) return 0;
  return (N + 3 * r + 1 + smin - 1) / smin + 1;
}

// Packs assembled and continued operators into two tuples over Z^r.
ExtensionResult assemble(const TwistedTuple& t, const LatticeOperator& phi, long M, const LevelOp& level,
                         const std::function<LatticeOperator(std::size_t)>& continued) {
  ExtensionResult res;
  res.base_space = t.space();
  res.levels = M;
  const Assembly asmb(phi, M);
  res.phi_offset = asmb.s;
  std::vector<std::vector<LatticeOperator>> ext(t.rank()), cont(t.rank());
  for (std::size_t i = 0; i < t.rank(); ++i) {
    ext[i].push_back(asmb([&](long m) { return level(i, m); }));
    cont[i].push_back(continued(i));
  }
  res.extended = TwistedTuple(t.fibers(), asmb.ss, std::move(ext));
  res.continuation = TwistedTuple(t.fibers(), asmb.ss, std::move(cont));
  for (std::size_t i = 0; i < t.rank(); ++i)
    for (std::size_t j = i + 1; j < t.rank(); ++j) {
      if (!t.has_twist(i, j)) continue;
      const LatticeOperator u = t.twist(i, j);
      res.extended.set_twist(i, j, asmb([&](long) { return u; }));
      res.continuation.set_twist(i, j, signed_continuation(u, false));
    }
  AlgebraSpec ext_alg = t.algebra, cont_alg = t.algebra;
  ext_alg.sigma.clear();
  cont_alg.sigma.clear();
  for (const auto& sg : t.algebra.sigma) {
    ext_alg.sigma.push_back(asmb([&](long) { return sg; }));
    cont_alg.sigma.push_back(signed_continuation(sg, false));
  }
  res.extended.algebra = ext_alg;
  res.continuation.algebra = cont_alg;
  res.extended.label = t.label + " extended";
  res.continuation.label = t.label + " continued";
  return res;
}

void require_isometric_tuple(const TwistedTuple& t, long N) {
  for (std::size_t i = 0; i < t.rank(); ++i)
    if (t.fibers().dim(i) != 1) throw Error(ErrorKind::Precondition, "extension handles one-dimensional fibers only");
  for (const auto& rep : {check_isometric(t, N, 1e-10), check_twisted(t, N, 1e-10), check_doubly_twisted(t, N, 1e-10)})
    if (!rep.pass) throw Error(ErrorKind::Precondition, rep.name + " fails: " + rep.where);
}

cplx scalar_flip(const TwistedTuple& t, std::size_t i, std::size_t j) { return t.fibers().flip(i, j)(0, 0); }

}  // namespace

ExtensionResult extend_doubly_twisted_isometries(const TwistedTuple& t, long N, const ExtensionOptions& opt) {
  require_isometric_tuple(t, N);
  IndexSet B;
  for (std::size_t i = 0; i < t.rank(); ++i)
    if (!check_coisometric(t, i, N, 1e-10).pass) B.push_back(i);
  const GradedSpace& s = t.space();
  if (B.empty()) {
    ExtensionResult res;
    res.extended = t;
    res.continuation = t;
    res.base_space = s;
    res.phi_offset.assign(s.rank, 0);
    res.log.push_back("every coordinate is coisometric on the window; the tuple is its own extension");
    return res;
  }
  LatticeOperator phi = t.S(B.front(), 0);
  for (std::size_t b = 1; b < B.size(); ++b) phi = compose(phi, t.S(B[b], 0));
  if (phi.terms().size() != 1)
    throw Error(ErrorKind::Precondition, "Phi = prod of the shift-type coordinates is not a single lattice term");
  for (long x : phi.terms().front().offset)
    if (x < 0) throw Error(ErrorKind::Precondition, "Phi lowers a lattice coordinate");
  // Z_i = prod_{j in B, j != i} c_ji U_ji, the commutator of Phi past V_i.
  std::vector<LatticeOperator> Z;
  for (std::size_t i = 0; i < t.rank(); ++i) {
    LatticeOperator z = LatticeOperator::identity(s);
    for (auto j : B)
      if (j != i) z = compose(z, scale(scalar_flip(t, j, i), t.twist(j, i)));
    Z.push_back(z);
  }
  const long M = opt.levels >= 0 ? opt.levels : auto_levels(t, phi.terms().front().offset, N);
  ExtensionResult res = assemble(
      t, phi, M, [&](std::size_t i, long m) { return compose(power(Z[i], opt.z_exponent_scale * m), t.S(i, 0)); },
      [&](std::size_t i) { return signed_continuation(t.S(i, 0), false); });
  res.phi_coords = B;
  res.log.push_back("Phi = product over coordinates " + set_str(B) + ", offset " + degree_str(res.phi_offset));
  res.log.push_back("levels m = 0.." + std::to_string(M));
  if (opt.z_exponent_scale != 1)
    res.log.push_back("Z_i exponent scaled by " + std::to_string(opt.z_exponent_scale));
  return res;
}

ExtensionResult extend_commutative_lattice(const FockModel& fm, long N, long level_checks,
                                           const ExtensionOptions& opt) {
  const FockCore& core = fm.core;
  if (core.algebra_kind == AlgebraKind::Matrix || !core.alpha.empty())
    throw Error(ErrorKind::Precondition, "the commutative lattice extension needs a commutative algebra");
  const TwistedTuple& t = fm.tuple;
  const std::size_t p = fm.A.size();
  const GradedSpace& s = t.space();
  if (p == 0) {
    ExtensionResult res;
    res.extended = t;
    res.continuation = t;
    res.base_space = s;
    res.log.push_back("A is empty; the model is unitary");
    return res;
  }
  // phi = S_A (x) I, the untwisted shift along (1,..,1).
  const LatticeOperator phi = LatticeOperator::monomial(s, Degree(p, 1), {});
  // X_{i_j} = prod_{r<j} conj(c_{i_j i_r}) U_{i_r i_j};  Y_l = prod_r conj(c_{l i_r}) U_{i_r l}.
  std::vector<Mat> Z(core.k, Mat::Identity(core.dim, core.dim));
  for (std::size_t i = 0; i < core.k; ++i) {
    auto pos = std::find(fm.A.begin(), fm.A.end(), i);
    const std::size_t upto = pos == fm.A.end() ? p : static_cast<std::size_t>(pos - fm.A.begin());
    for (std::size_t r = 0; r < upto; ++r) Z[i] *= std::conj(core.flip(i, fm.A[r])) * core.twist(fm.A[r], i);
  }
  auto level = [&](std::size_t i, long m) {
    const Mat zm = mat_pow(Z[i], opt.z_exponent_scale * m);
    return compose(t.S(i, 0), LatticeOperator::constant(s, zm, "Z" + std::to_string(i) + "^" + std::to_string(m)));
  };
  ExtensionResult res;
  const long M = opt.levels >= 0 ? opt.levels : auto_levels(t, Degree(p, 1), N);
  res = assemble(t, phi, M, level, [&](std::size_t i) { return signed_continuation(t.S(i, 0), false); });
  res.phi_coords = fm.A;
  res.log.push_back("phi = untwisted shift along (1,..,1) over A = " + set_str(fm.A));
  res.log.push_back("levels m = 0.." + std::to_string(M));
  res.has_level_checks = true;
  // phi_{n,m} M_{m,i} = M_{n,i} phi_{n,m}, and M_{n,i}M_{n,i}^* phi_{n,m} = phi_{n,m} for n > m.
  std::vector<LatticeOperator> phipow{LatticeOperator::identity(s)};
  for (long d = 1; d <= level_checks; ++d) phipow.push_back(compose(phi, phipow.back()));
  const double tol = 1e-10;
  for (long m = 0; m <= level_checks; ++m)
    for (long n = m; n <= level_checks; ++n) {
      const LatticeOperator& pnm = phipow[static_cast<std::size_t>(n - m)];
      for (std::size_t i = 0; i < core.k; ++i) {
        const LatticeOperator Mm = level(i, m), Mn = level(i, n);
        const std::string tag = "i=" + std::to_string(i) + ", m=" + std::to_string(m) + ", n=" + std::to_string(n);
        auto r = equal_on_window(compose(pnm, Mm), compose(Mn, pnm), N, tol);
        res.intertwining.record(r.worst, tol, tag + " at degree " + degree_str(r.degree));
        if (n > m) {
          auto c = equal_on_window(compose(compose(Mn, adjoint(Mn)), pnm), pnm, N, tol);
          res.coisometry_hypothesis.record(c.worst, tol, tag + " at degree " + degree_str(c.degree));
        }
      }
    }
  return res;
}

ExtensionReport verify_extension(const ExtensionResult& res, const TwistedTuple& original, long N, double tol) {
  ExtensionReport rep;
  const TwistedTuple& e = res.extended;
  const GradedSpace& base = res.base_space;
  auto restrict_check = [&](const LatticeOperator& ext, const LatticeOperator& orig, const std::string& tag) {
    auto r = compare_maps([&](const Graded& v) { return apply(ext, v); },
                          [&](const Graded& v) { return apply(orig, v); }, base, N, tol);
    rep.restriction.record(r.worst, tol, tag + " at degree " + degree_str(r.degree));
  };
  for (std::size_t i = 0; i < original.rank(); ++i) restrict_check(e.S(i, 0), original.S(i, 0), "T" + std::to_string(i));
  for (std::size_t i = 0; i < original.rank(); ++i)
    for (std::size_t j = i + 1; j < original.rank(); ++j)
      restrict_check(e.twist(i, j), original.twist(i, j), "U" + pair_tag(i, j));
  for (std::size_t c = 0; c < original.algebra.sigma.size(); ++c)
    restrict_check(e.algebra.sigma[c], original.algebra.sigma[c], "sigma" + std::to_string(c));

  rep.unitary.absorb(check_isometric(e, N, tol));
  rep.unitary.absorb(check_coisometric(e, N, tol));
  rep.twisted = check_twisted(e, N, tol);
  rep.doubly_twisted = check_doubly_twisted(e, N, tol);
  rep.relations.absorb(rep.twisted);
  rep.relations.absorb(rep.doubly_twisted);
  rep.sigma.absorb(check_sigma_homomorphism(e.algebra, e.space(), N, tol));

  for (std::size_t i = 0; i < e.rank(); ++i) {
    auto r = equal_on_window(e.S(i, 0), res.continuation.S(i, 0), N, tol);
    rep.continuation.record(r.worst, tol, "T" + std::to_string(i) + " at degree " + degree_str(r.degree));
  }

  // Every coordinate of Phi must move, and the levels must reach the window corner.
  if (!res.phi_coords.empty()) {
    long smin = -1;
    for (long x : res.phi_offset) smin = smin < 0 ? x : std::min(smin, x);
    if (smin <= 0) {
      rep.minimality.record(1.0, tol, "Phi offset " + degree_str(res.phi_offset) + " leaves a coordinate fixed");
      rep.notes.push_back("non-coisometric limit: the copies never cover negative degrees in some coordinate");
    } else if (res.levels * smin < N) {
      rep.minimality.record(1.0, tol, "levels " + std::to_string(res.levels) + " do not reach degree -" + std::to_string(N));
      rep.notes.push_back("undetermined at window " + std::to_string(N));
    }
  }
  rep.implication_holds = !(rep.unitary.pass && rep.twisted.pass) || rep.doubly_twisted.pass;
  rep.pass = rep.restriction.pass && rep.unitary.pass && rep.relations.pass && rep.sigma.pass &&
             rep.continuation.pass && rep.minimality.pass;
  return rep;
}

}  // namespace tw
