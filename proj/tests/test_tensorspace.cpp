#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracle.hpp"
#include "twist/errors.hpp"
#include "twist/factory.hpp"
#include "twist/tensorspace.hpp"

#include <numeric>

using namespace tw;

namespace {

Mat dense_of(const LatticeOperator& op) { return op.terms().at(0).block({}, op.space().fiber); }

FiberSpec random_flips(std::vector<int> dims, std::uint64_t seed) {
  FiberSpec f(dims);
  for (std::size_t i = 0; i < dims.size(); ++i)
    for (std::size_t j = i + 1; j < dims.size(); ++j) f.set_flip(i, j, random_unitary(dims[i] * dims[j], seed + 10 * i + j));
  return f;
}

}  // namespace

TEST_CASE("kron of identities and scalars") {
  CHECK(max_abs(kron(identity(2), identity(3)) - identity(6)) == 0.0);
  Mat x(2, 2);
  x << 0, 1, 1, 0;
  CHECK(max_abs(kron(x, identity(1)) - x) == 0.0);
}

TEST_CASE("kron of the C^3 permutations matches the index map (a,b) -> (a+1, b+2)") {
  const TwistedTuple t = make_c3_permutation();
  const Mat k = kron(dense_of(t.S(0, 0)), dense_of(t.S(1, 0)));
  const Mat expected = oracle::permutation(9, [](long c) {
    const long a = c / 3, b = c % 3;
    return ((a + 1) % 3) * 3 + (b + 2) % 3;
  });
  CHECK(max_abs(k - expected) == 0.0);
}

TEST_CASE("kron agrees with the entrywise definition on random blocks") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat a = oracle::random_matrix(2 + trial % 2, 3, rng);
    const Mat b = oracle::random_matrix(2, 1 + trial % 3, rng);
    CHECK(max_abs(kron(a, b) - oracle::kron(a, b)) == 0.0);
  }
  const Mat a = oracle::random_matrix(2, 2, rng), b = oracle::random_matrix(3, 3, rng), c = oracle::random_matrix(2, 2, rng);
  CHECK(max_abs(kron_all({a, b, c}) - oracle::kron(oracle::kron(a, b), c)) < 1e-13);
}

TEST_CASE("MultiIndex arithmetic") {
  const MultiIndex a({1, 2, 0});
  const MultiIndex e = MultiIndex::unit(3, 2);
  CHECK((a + e).coords == std::vector<long>{1, 2, 1});
  CHECK(a.total() == 3);
  CHECK((a + e - e) == a);
  CHECK(MultiIndex::zero(2).str() == "(0,0)");
}

TEST_CASE("flip_iterated base cases") {
  const FiberSpec f = random_flips({2, 3}, 5);
  CHECK(max_abs(flip_iterated(f, 0, 1, 0) - identity(2)) == 0.0);
  CHECK(max_abs(flip_iterated(f, 0, 1, 1) - f.flip(0, 1)) == 0.0);
  CHECK_THROWS_AS(flip_iterated(f, 1, 1, 2), Error);
}

TEST_CASE("flip_iterated with swaps moves the first slot past n slots") {
  const FiberSpec f = FiberSpec::swaps({2, 2});
  const Mat t2 = flip_iterated(f, 0, 1, 2);
  CHECK(max_abs(t2 - oracle::slot_move({2, 2, 2}, {1, 2, 0})) == 0.0);
  const Mat t = f.flip(0, 1);
  CHECK(max_abs(t2 - oracle::kron(identity(2), t) * oracle::kron(t, identity(2))) == 0.0);
  for (int n = 0; n <= 3; ++n) {
    const FiberSpec g = FiberSpec::swaps({2, 1});
    std::vector<long> dims{2};
    std::vector<std::size_t> perm;
    for (int c = 0; c < n; ++c) {
      dims.push_back(1);
      perm.push_back(static_cast<std::size_t>(c + 1));
    }
    perm.push_back(0);
    CHECK(max_abs(flip_iterated(g, 0, 1, n) - oracle::slot_move(dims, perm)) == 0.0);
  }
}

TEST_CASE("flip_iterated satisfies its recursion for random flips") {
  for (const std::vector<int>& dims : {std::vector<int>{1, 2}, {2, 2}, {2, 1}}) {
    const FiberSpec f = random_flips(dims, 11);
    const long dj = dims[1];
    for (int n = 0; n < 3; ++n) {
      const long djn = static_cast<long>(std::pow(dj, n));
      const Mat next = oracle::kron(identity(djn), f.flip(0, 1)) * oracle::kron(flip_iterated(f, 0, 1, n), identity(dj));
      CHECK(max_abs(flip_iterated(f, 0, 1, n + 1) - next) < 1e-13);
    }
  }
}

TEST_CASE("flip_block: collapse, identity, unitarity and inverse") {
  const FiberSpec f = random_flips({2, 2}, 21);
  for (int n = 0; n <= 3; ++n) CHECK(max_abs(flip_block(f, 0, 1, 1, n) - flip_iterated(f, 0, 1, n)) < 1e-14);
  for (int m = 0; m <= 3; ++m) CHECK(max_abs(flip_block(f, 0, 1, m, 0) - identity(static_cast<long>(std::pow(2, m)))) == 0.0);
  for (int m = 0; m <= 2; ++m)
    for (int n = 0; n <= 2; ++n) {
      const Mat x = flip_block(f, 0, 1, m, n);
      CHECK(is_unitary(x, 1e-12));
      CHECK(max_abs(flip_block(f, 1, 0, n, m) * x - identity(x.rows())) < 1e-12);
    }
  const FiberSpec ones({1, 1});
  CHECK(max_abs(flip_block(ones, 0, 1, 2, 2) - identity(1)) == 0.0);
}

TEST_CASE("scalar flips: t^{(m,n)} is c^{mn}") {
  FiberSpec f({1, 1});
  const cplx c = std::polar(1.0, 0.7);
  f.set_flip(0, 1, Mat::Constant(1, 1, c));
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n) CHECK(std::abs(flip_block(f, 0, 1, m, n)(0, 0) - std::pow(c, m * n)) < 1e-14);
}

TEST_CASE("hexagon holds for coordinate swaps on every dimension pattern") {
  for (int a = 1; a <= 2; ++a)
    for (int b = 1; b <= 2; ++b)
      for (int c = 1; c <= 2; ++c) {
        const HexagonReport r = check_hexagon(FiberSpec::swaps({a, b, c}), 3, 1e-14);
        CHECK(r.pass);
        CHECK(r.max_deviation == 0.0);
        CHECK(r.cells.size() == 6 * 3);
      }
}

TEST_CASE("hexagon with unimodular scalar flips") {
  // With one-dimensional fibers both sides expand to c_ij c_il^n c_jl^n, so
  // the identity holds for every choice of phases.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ang(0, 6.283185307179586);
  for (int trial = 0; trial < 10; ++trial) {
    FiberSpec f({1, 1, 1});
    const cplx c01 = std::polar(1.0, ang(rng)), c02 = std::polar(1.0, ang(rng)), c12 = std::polar(1.0, ang(rng));
    f.set_flip(0, 1, Mat::Constant(1, 1, c01));
    f.set_flip(0, 2, Mat::Constant(1, 1, c02));
    f.set_flip(1, 2, Mat::Constant(1, 1, c12));
    for (int n = 1; n <= 3; ++n) {
      const cplx lhs = c01 * std::pow(c02, n) * std::pow(c12, n);
      const cplx rhs = std::pow(c12, n) * std::pow(c02, n) * c01;
      CHECK(std::abs(lhs - rhs) < 1e-14);
    }
    const HexagonReport r = check_hexagon(f, 3, 1e-14);
    CHECK(r.pass);
    CHECK(r.max_deviation <= 1e-14);
  }
}

TEST_CASE("a corrupted flip breaks the hexagon and is located") {
  // Coordinate 0 carries sigma_x in both of its flips; the family braids
  // because the two local factors commute. Flipping one sign of the second
  // factor makes them anticommute.
  const Mat swap = FiberSpec::swaps({2, 2}).flip(0, 1);
  Mat sx = Mat::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  FiberSpec good = FiberSpec::swaps({2, 2, 2});
  good.set_flip(0, 1, swap * oracle::kron(sx, identity(2)));
  good.set_flip(0, 2, swap * oracle::kron(sx, identity(2)));
  const HexagonReport ok = check_hexagon(good, 3, 1e-14);
  CHECK(ok.pass);
  CHECK(ok.max_deviation == 0.0);

  Mat sx_bad = sx;
  sx_bad(1, 0) = -1.0;
  FiberSpec bad = good;
  bad.set_flip(0, 2, swap * oracle::kron(sx_bad, identity(2)));
  const HexagonReport r = check_hexagon(bad, 3, 1e-12);
  CHECK_FALSE(r.pass);
  REQUIRE(r.first_violation.has_value());
  CHECK(r.first_violation->deviation > 0.5);
  const auto& v = *r.first_violation;
  CHECK(v.i != v.j);
  CHECK(v.n >= 1);
}

TEST_CASE("flips reject i == j and wrong shapes") {
  FiberSpec f({2, 3});
  CHECK_THROWS_AS(f.set_flip(0, 0, identity(4)), Error);
  CHECK_THROWS_AS(f.set_flip(0, 1, identity(5)), Error);
  CHECK_THROWS_AS(f.flip(1, 1), Error);
}

TEST_CASE("t_ji is the inverse of t_ij") {
  const FiberSpec f = random_flips({2, 3}, 31);
  CHECK(max_abs(f.flip(1, 0) * f.flip(0, 1) - identity(6)) < 1e-13);
}
