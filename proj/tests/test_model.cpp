#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracle.hpp"
#include "twist/errors.hpp"
#include "twist/factory.hpp"

using namespace tw;

namespace {

Graded delta(const GradedSpace& s, const Degree& n, const Mat& h) {
  Graded g(s.fiber, h.cols());
  g.blocks.emplace(n, h);
  return g;
}

Mat core_change(const FockModel& pm) { return pm.core_basis.blocks.at(Degree(pm.tuple.space().rank, 0)); }

// The same tuple with every exponent of coordinate i's operator doubled.
TwistedTuple doubled_exponents(const TwistedTuple& t, std::size_t i) {
  std::vector<std::vector<LatticeOperator>> S = t.family();
  std::vector<Term> terms = S[i][0].terms();
  for (auto& term : terms)
    for (auto& f : term.factors) {
      for (auto& c : f.exp.coeffs) c *= 2;
      f.exp.constant *= 2;
    }
  S[i][0] = LatticeOperator(t.space(), terms);
  TwistedTuple out(t.fibers(), t.space(), S);
  for (std::size_t a = 0; a < t.rank(); ++a)
    for (std::size_t b = a + 1; b < t.rank(); ++b)
      if (t.has_twist(a, b)) out.set_twist(a, b, t.twist(a, b));
  out.algebra = t.algebra;
  return out;
}

}  // namespace

TEST_CASE("A = I_k with C and trivial twists is the untwisted multishift") {
  FockParams p;
  p.k = 2;
  p.A = {0, 1};
  p.dim = 1;
  p.trivial_twists = true;
  p.random_flips = false;
  const FockModel fm = make_fock_model(p);
  for (long a = 0; a <= 4; ++a)
    for (long b = 0; b <= 4; ++b)
      for (std::size_t i = 0; i < 2; ++i) {
        const Graded out = apply(fm.tuple.S(i, 0), delta(fm.tuple.space(), {a, b}, Mat::Ones(1, 1)));
        REQUIRE(out.blocks.size() == 1);
        CHECK(out.blocks.begin()->first == (i == 0 ? Degree{a + 1, b} : Degree{a, b + 1}));
        CHECK(std::abs(out.blocks.begin()->second(0, 0) - 1.0) == 0.0);
      }
}

TEST_CASE("k = 2, A = {0}: the coisometric coordinate is W_2 times the twist power") {
  FockCore core;
  core.k = 2;
  core.A = {0};
  core.dim = 1;
  const cplx w = std::polar(1.0, 0.4), lambda = std::polar(1.0, 1.1);
  core.W = {identity(1), Mat::Constant(1, 1, w)};
  core.set_twist(0, 1, Mat::Constant(1, 1, lambda));
  const FockModel fm = build_model_operators(core);
  CHECK(check_twisted(fm.tuple, 6, 1e-12).pass);
  CHECK(check_doubly_twisted(fm.tuple, 6, 1e-12).pass);
  for (long n = 0; n <= 5; ++n) {
    const Graded out = apply(fm.tuple.S(1, 0), delta(fm.tuple.space(), {n}, Mat::Ones(1, 1)));
    REQUIRE(out.blocks.size() == 1);
    CHECK(out.blocks.begin()->first == Degree{n});
    // U_21 = conj(lambda).
    CHECK(std::abs(out.blocks.begin()->second(0, 0) - w * std::pow(std::conj(lambda), n)) < 1e-14);
  }
}

TEST_CASE("k = 2, A = I_2 with a nontrivial twist on C^2") {
  FockCore core;
  core.k = 2;
  core.A = {0, 1};
  core.dim = 2;
  core.W = {identity(2), identity(2)};
  Mat u = Mat::Zero(2, 2);
  u(0, 0) = cplx(0, 1);
  u(1, 1) = cplx(0, -1);
  core.set_twist(0, 1, u);
  const FockModel fm = build_model_operators(core);
  CHECK(check_core(core).pass);
  CHECK(check_twisted(fm.tuple, 6, 1e-12).pass);
  CHECK(check_doubly_twisted(fm.tuple, 6, 1e-12).pass);
  std::mt19937_64 rng(5);
  for (long a = 0; a <= 3; ++a) {
    const Mat h = oracle::random_matrix(2, 1, rng);
    const Graded out = apply(fm.tuple.S(1, 0), delta(fm.tuple.space(), {a, 2}, h));
    CHECK(out.blocks.begin()->first == Degree{a, 3});
    CHECK(oracle::max_abs(out.blocks.begin()->second - oracle::matpow(u.adjoint(), a) * h) < 1e-14);
  }
}

TEST_CASE("check_core catches a twist that does not commute with W") {
  FockCore core;
  core.k = 2;
  core.A = {0};
  core.dim = 2;
  Mat sx = Mat::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  Mat sz = Mat::Identity(2, 2);
  sz(1, 1) = -1.0;
  core.W = {identity(2), sx};
  core.set_twist(0, 1, sz);
  CHECK_FALSE(check_core(core).pass);
  CHECK_THROWS_AS(build_model_operators(core), Error);
}

TEST_CASE("sampled cores pass check_core") {
  for (std::size_t k : {2, 3})
    for (const auto& A : all_subsets(k)) {
      FockParams p;
      p.k = k;
      p.A = A;
      p.seed = 50 + A.size();
      CHECK(check_core(sample_fock_core(p)).pass);
    }
}

TEST_CASE("pi_A of the unilateral shift is the unilateral shift") {
  const TwistedTuple uni = make_polydisc(1);
  const FockModel pm = pi_A(uni, {0}, 8);
  CHECK(pm.core.dim == 1);
  CHECK(equal_on_window(pm.tuple.S(0, 0), uni.S(0, 0), 8, 1e-12).pass);
}

TEST_CASE("pi_A round-trips every Fock fixture up to the core basis change") {
  for (std::size_t k : {2, 3})
    for (const auto& A : all_subsets(k)) {
      FockParams p;
      p.k = k;
      p.A = A;
      p.seed = 7;
      const FockModel fm = make_fock_model(p);
      const long N = k == 2 ? 6 : 4;
      const FockModel pm = pi_A(fm.tuple, A, N);
      const Mat B = core_change(pm);
      CHECK(is_unitary(B, 1e-10));
      for (std::size_t i = 0; i < k; ++i)
        CHECK(equal_on_window(pm.tuple.S(i, 0), conjugate_core(fm.tuple.S(i, 0), B), N, 1e-10).pass);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
          CHECK(equal_on_window(pm.tuple.twist(i, j), conjugate_core(fm.tuple.twist(i, j), B), N, 1e-10).pass);
    }
}

TEST_CASE("transported sigma is block diagonal per degree") {
  FockParams p;
  p.k = 2;
  p.A = {0};
  p.dim = 4;
  p.seed = 9;
  p.diagonal_algebra = true;
  const FockModel fm = make_fock_model(p);
  const FockModel pm = pi_A(fm.tuple, {0}, 5);
  REQUIRE(pm.tuple.algebra.sigma.size() == 2);
  const Mat B = core_change(pm);
  for (std::size_t c = 0; c < 2; ++c) {
    for (const auto& term : pm.tuple.algebra.sigma[c].terms())
      for (long o : term.offset) CHECK(o == 0);
    CHECK(equal_on_window(pm.tuple.algebra.sigma[c], conjugate_core(fm.tuple.algebra.sigma[c], B), 5, 1e-10).pass);
  }
}

TEST_CASE("verify_equivalence on factory instances") {
  FockParams p;
  p.k = 2;
  p.A = {1};
  p.seed = 21;
  const FockModel fm = make_fock_model(p);
  const FockModel pm = pi_A(fm.tuple, {1}, 5);
  const EquivalenceReport eq = verify_equivalence(fm.tuple, pm, 5, 1e-10);
  CHECK(eq.pass);

  const TwistedTuple m2 = make_m2_hardy(std::polar(1.0, 3.141592653589793 / 3));
  const FockModel mm = pi_A(m2, {0, 1}, 3);
  CHECK(mm.core.dim == 4);
  CHECK(verify_equivalence(m2, mm, 3, 1e-10).pass);
}

TEST_CASE("a corrupted twist exponent fails first where n_{i_1} = 1") {
  FockParams p;
  p.k = 2;
  p.A = {0, 1};
  p.seed = 23;
  const FockModel fm = make_fock_model(p);
  FockModel bad = pi_A(fm.tuple, {0, 1}, 4);
  bad.tuple = doubled_exponents(bad.tuple, 1);
  CHECK(verify_equivalence(fm.tuple, bad, 0, 1e-10).pass);
  const EquivalenceReport eq = verify_equivalence(fm.tuple, bad, 1, 1e-10);
  CHECK_FALSE(eq.pass);
  CHECK_FALSE(eq.ops.pass);
}

TEST_CASE("a unitary has no shift part to model") {
  const TwistedTuple bil(FiberSpec({1}), GradedSpace{1, 1, true},
                         {{LatticeOperator::monomial(GradedSpace{1, 1, true}, {1}, {})}});
  try {
    pi_A(bil, {0}, 4);
    FAIL("expected a degenerate summand");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Degenerate);
  }
  // An empty model for H_{0} = 0 compares vacuously.
  FockModel empty;
  empty.A = {0};
  const EquivalenceReport eq = verify_equivalence(bil, empty, 4, 1e-10);
  CHECK(eq.pass);
  REQUIRE(eq.notes.size() == 1);
  CHECK(eq.notes.front().find("zero") != std::string::npos);
}
