#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracle.hpp"
#include "twist/errors.hpp"
#include "twist/extension.hpp"
#include "twist/factory.hpp"

using namespace tw;

namespace {

Graded delta(const GradedSpace& s, const Degree& n, const Mat& h) {
  Graded g(s.fiber, h.cols());
  g.blocks.emplace(n, h);
  return g;
}

void expect_monomial(const LatticeOperator& op, const Degree& n, const Degree& to, const Mat& block, const Mat& h) {
  const Graded out = apply(op, delta(op.space(), n, h));
  REQUIRE(out.blocks.size() == 1);
  CHECK(out.blocks.begin()->first == to);
  CHECK(oracle::max_abs(out.blocks.begin()->second - block * h) < 1e-12);
}

FockModel fock(std::size_t k, IndexSet A, long dim, std::uint64_t seed) {
  FockParams p;
  p.k = k;
  p.A = std::move(A);
  p.dim = dim;
  p.seed = seed;
  return make_fock_model(p);
}

}  // namespace

TEST_CASE("unilateral shift extends to the bilateral shift") {
  const TwistedTuple uni = make_polydisc(1);
  const long N = 8;
  const ExtensionResult res = extend_doubly_twisted_isometries(uni, N);
  CHECK(res.extended.space().is_signed);
  for (long n = -N; n <= N; ++n) expect_monomial(res.extended.S(0, 0), {n}, {n + 1}, identity(1), Mat::Ones(1, 1));
  const ExtensionReport rep = verify_extension(res, uni, N, 1e-10);
  CHECK(rep.pass);
  CHECK(rep.restriction.worst == 0.0);
  CHECK(rep.unitary.worst == 0.0);
}

TEST_CASE("polydisc(2) extends to the bilateral bishift") {
  const TwistedTuple bi = make_polydisc(2);
  const long N = 6;
  const ExtensionResult res = extend_doubly_twisted_isometries(bi, N);
  for (long a = -N; a <= N; ++a)
    for (long b = -N; b <= N; ++b) {
      expect_monomial(res.extended.S(0, 0), {a, b}, {a + 1, b}, identity(1), Mat::Ones(1, 1));
      expect_monomial(res.extended.S(1, 0), {a, b}, {a, b + 1}, identity(1), Mat::Ones(1, 1));
    }
  const ExtensionReport rep = verify_extension(res, bi, N, 1e-10);
  CHECK(rep.pass);
  for (const CheckReport* c : {&rep.restriction, &rep.unitary, &rep.twisted, &rep.doubly_twisted, &rep.sigma,
                               &rep.continuation, &rep.minimality})
    CHECK_MESSAGE(c->pass, c->name);
}

TEST_CASE("the doubly non-commuting pair keeps its scalar twist") {
  const cplx z(0, 1);
  const TwistedTuple d = make_doubly_noncommuting(z);
  const long N = 6;
  const ExtensionResult res = extend_doubly_twisted_isometries(d, N);
  const ExtensionReport rep = verify_extension(res, d, N, 1e-10);
  CHECK(rep.pass);
  CHECK(rep.doubly_twisted.pass);
  const LatticeOperator u = res.extended.twist(0, 1);
  CHECK(equal_on_window(u, LatticeOperator::constant(u.space(), Mat::Constant(1, 1, z), "z"), N, 1e-14).pass);
  // V_2 picks up conj(z)^{n_1} on negative degrees as well.
  for (long a = -N; a <= N; ++a)
    expect_monomial(res.extended.S(1, 0), {a, -2}, {a, -1}, Mat::Constant(1, 1, std::pow(std::conj(z), a)), Mat::Ones(1, 1));
}

TEST_CASE("commutative lattice extension: one coordinate, no twists") {
  const FockModel fm = fock(1, {0}, 1, 3);
  const long N = 6;
  const ExtensionResult res = extend_commutative_lattice(fm, N);
  for (long n = -N; n <= N; ++n) expect_monomial(res.extended.S(0, 0), {n}, {n + 1}, identity(1), Mat::Ones(1, 1));
  CHECK(verify_extension(res, fm.tuple, N, 1e-10).pass);
}

TEST_CASE("commutative lattice extension: nontrivial U_12 on C^2") {
  FockCore core;
  core.k = 2;
  core.A = {0, 1};
  core.dim = 2;
  core.W = {identity(2), identity(2)};
  Mat u = Mat::Zero(2, 2);
  u(0, 0) = std::polar(1.0, 0.9);
  u(1, 1) = std::polar(1.0, -0.3);
  core.set_twist(0, 1, u);
  const FockModel fm = build_model_operators(core);
  const long N = 6;
  const ExtensionResult res = extend_commutative_lattice(fm, N);
  std::mt19937_64 rng(4);
  for (long a = -N; a <= N; ++a)
    for (long b = -N; b <= N; b += 3) {
      const Mat h = oracle::random_matrix(2, 1, rng);
      const Mat expected = a >= 0 ? oracle::matpow(u.adjoint(), a) : oracle::matpow(u, -a);
      expect_monomial(res.extended.S(1, 0), {a, b}, {a, b + 1}, expected, h);
    }
  const ExtensionReport rep = verify_extension(res, fm.tuple, N, 1e-10);
  CHECK(rep.pass);
  REQUIRE(res.has_level_checks);
  CHECK(res.intertwining.pass);
  CHECK(res.coisometry_hypothesis.pass);
}

TEST_CASE("a fully coisometric coordinate is unchanged by the extension") {
  const FockModel fm = fock(2, {0}, 2, 31);
  const long N = 5;
  const ExtensionResult res = extend_doubly_twisted_isometries(fm.tuple, N);
  const LatticeOperator& W = res.extended.S(1, 0);
  const LatticeOperator cont = signed_continuation(fm.tuple.S(1, 0), false);
  CHECK(equal_on_window(W, cont, N, 1e-12).pass);
  CHECK(verify_extension(res, fm.tuple, N, 1e-10).pass);
}

TEST_CASE("both extension routes agree on Fock models over commutative algebras") {
  for (const IndexSet& A : {IndexSet{0}, IndexSet{1}, IndexSet{0, 1}}) {
    const FockModel fm = fock(2, A, 2, 5);
    const long N = 6;
    const ExtensionResult a = extend_doubly_twisted_isometries(fm.tuple, N);
    const ExtensionResult b = extend_commutative_lattice(fm, N);
    CHECK(verify_extension(a, fm.tuple, N, 1e-10).pass);
    CHECK(verify_extension(b, fm.tuple, N, 1e-10).pass);
    CHECK(b.intertwining.pass);
  }
}

TEST_CASE("a corrupted Z exponent breaks only the relations") {
  const TwistedTuple d = make_doubly_noncommuting(cplx(0, 1));
  ExtensionOptions opt;
  opt.z_exponent_scale = 2;
  const long N = 6;
  const ExtensionResult res = extend_doubly_twisted_isometries(d, N, opt);
  const ExtensionReport rep = verify_extension(res, d, N, 1e-10);
  CHECK(rep.restriction.pass);
  CHECK(rep.unitary.pass);
  CHECK_FALSE(rep.twisted.pass);
  CHECK_FALSE(rep.pass);
  CHECK(rep.implication_holds);
}

TEST_CASE("preconditions") {
  const LatticeOperator half = scale(0.5, LatticeOperator::monomial(GradedSpace{1, 1, false}, {1}, {}));
  const TwistedTuple contraction(FiberSpec({1}), half.space(), {{half}});
  CHECK_THROWS_AS(extend_doubly_twisted_isometries(contraction, 4), Error);
  try {
    extend_doubly_twisted_isometries(make_m2_hardy(std::polar(1.0, 1.0)), 4);
    FAIL("expected a precondition failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
  const TwistedTuple m2 = make_m2_hardy(std::polar(1.0, 1.0));
  const FockModel pm = pi_A(m2, {0, 1}, 3);
  CHECK_THROWS_AS(extend_commutative_lattice(pm, 3), Error);
}

TEST_CASE("unitary and twisted imply doubly twisted across the corpus") {
  std::vector<std::pair<TwistedTuple, ExtensionResult>> runs;
  const long N = 5;
  for (const TwistedTuple& t : {make_polydisc(1), make_polydisc(2), make_doubly_noncommuting(cplx(0, 1)),
                                make_doubly_noncommuting(std::polar(1.0, 2.0))})
    runs.emplace_back(t, extend_doubly_twisted_isometries(t, N));
  ExtensionOptions bad;
  bad.z_exponent_scale = 3;
  runs.emplace_back(make_doubly_noncommuting(cplx(0, 1)), extend_doubly_twisted_isometries(make_doubly_noncommuting(cplx(0, 1)), N, bad));
  for (const IndexSet& A : {IndexSet{0}, IndexSet{0, 1}}) {
    const FockModel fm = fock(2, A, 2, 77);
    runs.emplace_back(fm.tuple, extend_commutative_lattice(fm, N));
  }
  for (const auto& [t, res] : runs) {
    const ExtensionReport rep = verify_extension(res, t, N, 1e-10);
    CHECK(rep.implication_holds);
    CHECK((!(rep.unitary.pass && rep.twisted.pass) || rep.doubly_twisted.pass));
  }
}

TEST_CASE("signed continuation and reach") {
  const TwistedTuple t = make_unilateral_bilateral();
  CHECK(reach(t.S(0, 0)) == 1);
  const LatticeOperator c = signed_continuation(t.S(0, 0), false);
  CHECK(c.space().is_signed);
  CHECK(c.terms().size() == t.S(0, 0).terms().size());
  // The backward shift drops delta_0 on Z_+; the guarded continuation keeps that.
  const LatticeOperator back = LatticeOperator::monomial(GradedSpace{1, 1, false}, {-1}, {});
  const LatticeOperator kept = signed_continuation(back, true);
  const LatticeOperator free = signed_continuation(back, false);
  CHECK(apply(kept, delta(kept.space(), {0}, Mat::Ones(1, 1))).blocks.empty());
  expect_monomial(free, {0}, {-1}, identity(1), Mat::Ones(1, 1));
  expect_monomial(kept, {3}, {2}, identity(1), Mat::Ones(1, 1));
}
