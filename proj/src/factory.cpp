#include "twist/factory.hpp"

#include "twist/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace tw {

const char* to_string(ExampleId id) {
  switch (id) {
    case ExampleId::C3Permutation: return "c3_permutation";
    case ExampleId::M2Hardy: return "m2_hardy";
    case ExampleId::FockModel: return "fock_model";
    case ExampleId::ScalarSFamily: return "scalar_S_family";
    case ExampleId::Polydisc: return "polydisc";
    case ExampleId::BilateralCounterexample: return "bilateral_counterexample";
  }
  return "?";
}

namespace {

Degree unit(std::size_t r, std::size_t i) {
  Degree d(r, 0);
  d[i] = 1;
  return d;
}

LatticeOperator shift(const GradedSpace& s, std::size_t i) {
  return LatticeOperator::monomial(s, unit(s.rank, i), {});
}

Mat mat3(std::initializer_list<std::initializer_list<double>> rows) {
  Mat m(3, 3);
  long r = 0;
  for (const auto& row : rows) {
    long c = 0;
    for (double x : row) m(r, c++) = x;
    ++r;
  }
  return m;
}

cplx phase(double theta) { return std::polar(1.0, theta); }

}  // namespace

Mat random_unitary(long n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Mat z(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) z(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the result is Haar distributed.
  for (long j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

TwistedTuple make_c3_permutation() {
  const GradedSpace s{0, 3, false};
  const Mat S1 = mat3({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
  const Mat S2 = mat3({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  TwistedTuple t(FiberSpec({1, 1}), s, {{dense(S1, "S1")}, {dense(S2, "S2")}});
  t.set_twist(0, 1, LatticeOperator::identity(s));
  t.algebra.kind = AlgebraKind::Diagonal;
  t.algebra.n = 3;
  t.algebra.sigma.clear();
  for (long c = 0; c < 3; ++c) {
    Mat e = Mat::Zero(3, 3);
    e(c, c) = 1.0;
    t.algebra.sigma.push_back(dense(e, "e" + std::to_string(c)));
  }
  t.algebra.alpha = {AlgebraSpec::coordinate_action({1, 2, 0}), AlgebraSpec::coordinate_action({2, 0, 1})};
  t.label = "c3_permutation";
  return t;
}

TwistedTuple make_m2_hardy(cplx lambda) {
  if (std::abs(std::abs(lambda) - 1.0) > 1e-12) throw Error(ErrorKind::InvalidInput, "m2_hardy needs |lambda| = 1");
  const GradedSpace s{2, 4, false};
  Mat U1 = Mat::Zero(2, 2), U2 = Mat::Zero(2, 2);
  U1(0, 0) = 1.0;
  U1(1, 1) = -1.0;
  U2(0, 1) = U2(1, 0) = 1.0;
  Mat P0 = Mat::Zero(2, 2), P1 = Mat::Zero(2, 2);
  P0(0, 0) = P1(1, 1) = 1.0;
  auto D = [&](cplx on0, cplx on1) {
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = on0;
    d(1, 1) = on1;
    return kron(identity(2), d);
  };
  const Mat I2 = identity(2);
  // Copy 0: V_1 = M_z (x) I, V_2 = D[lambda] (x) M_z. Copy 1 swaps the roles.
  LatticeOperator S1(s, {Term{unit(2, 0), {}, 1.0, {Factor{"U1P0", kron(U1, P0), Affine::fixed(2, 1)}}},
                         Term{unit(2, 1), {}, 1.0,
                              {Factor{"U1P1", kron(U1, P1), Affine::fixed(2, 1)},
                               Factor{"Dl1", D(1.0, lambda), Affine::coord(2, 0)}}}});
  LatticeOperator S2(s, {Term{unit(2, 1), {}, 1.0,
                              {Factor{"U2P0", kron(U2, P0), Affine::fixed(2, 1)},
                               Factor{"Dl0", D(lambda, 1.0), Affine::coord(2, 0)}}},
                         Term{unit(2, 0), {}, 1.0, {Factor{"U2P1", kron(U2, P1), Affine::fixed(2, 1)}}}});
  TwistedTuple t(FiberSpec({1, 1}), s, {{S1}, {S2}});
  // W (x) U with W = -I and U = diag(conj(lambda), lambda) over the copies.
  t.set_twist(0, 1, LatticeOperator::constant(s, -D(std::conj(lambda), lambda), "WU"));
  t.algebra.kind = AlgebraKind::Matrix;
  t.algebra.n = 2;
  t.algebra.sigma.clear();
  for (long a = 0; a < 2; ++a)
    for (long b = 0; b < 2; ++b) {
      Mat e = Mat::Zero(2, 2);
      e(a, b) = 1.0;
      t.algebra.sigma.push_back(
          LatticeOperator::constant(s, kron(e, I2), "E" + std::to_string(a) + std::to_string(b)));
    }
  t.algebra.alpha = {AlgebraSpec::conjugation_action(U1), AlgebraSpec::conjugation_action(U2)};
  t.label = "m2_hardy";
  return t;
}

FockCore sample_fock_core(const FockParams& p) {
  for (auto i : p.A)
    if (i >= p.k) throw Error(ErrorKind::InvalidInput, "A is not a subset of I_k");
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const Mat Q = random_unitary(p.dim, rng());
  auto diagonal_unitary = [&] {
    Eigen::VectorXcd ph(p.dim);
    for (long x = 0; x < p.dim; ++x) ph(x) = phase(angle(rng));
    return Mat(Q * ph.asDiagonal() * Q.adjoint());
  };
  FockCore core;
  core.k = p.k;
  core.A = p.A;
  std::sort(core.A.begin(), core.A.end());
  core.dim = p.dim;
  const IndexSet Ac = complement(core.A, p.k);
  core.W.assign(p.k, identity(p.dim));
  for (auto l : Ac) core.W[l] = diagonal_unitary();
  for (std::size_t i = 0; i < p.k; ++i)
    for (std::size_t j = i + 1; j < p.k; ++j) {
      cplx c = p.random_flips ? phase(angle(rng)) : cplx(1.0);
      if (p.flips) {
        auto it = p.flips->find({i, j});
        c = it == p.flips->end() ? cplx(1.0) : it->second;
      }
      core.set_flip(i, j, c);
    }
  auto in_Ac = [&](std::size_t i) { return std::find(Ac.begin(), Ac.end(), i) != Ac.end(); };
  for (std::size_t i = 0; i < p.k; ++i)
    for (std::size_t j = i + 1; j < p.k; ++j) {
      // Commuting unitary W's force c_ij U_ij = I between coisometric coordinates.
      if (in_Ac(i) && in_Ac(j))
        core.set_twist(i, j, std::conj(core.flip(i, j)) * identity(p.dim));
      else if (!p.trivial_twists)
        core.set_twist(i, j, diagonal_unitary());
    }
  if (p.diagonal_algebra) {
    core.algebra_kind = AlgebraKind::Diagonal;
    core.algebra_n = 2;
    for (long c = 0; c < 2; ++c) {
      Eigen::VectorXcd mask = Eigen::VectorXcd::Zero(p.dim);
      for (long x = 0; x < p.dim; ++x)
        if ((x < p.dim / 2) == (c == 0)) mask(x) = 1.0;
      core.sigma.push_back(Q * mask.asDiagonal() * Q.adjoint());
    }
  }
  return core;
}

FockModel make_fock_model(const FockParams& p) { return build_model_operators(sample_fock_core(p), true); }

TwistedTuple make_fock_direct_sum(const FockModel& a, const FockModel& b) {
  const std::size_t k = a.core.k;
  if (b.core.k != k) throw Error(ErrorKind::ShapeMismatch, "direct sum needs equal k");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (std::abs(a.core.flip(i, j) - b.core.flip(i, j)) > 1e-14)
        throw Error(ErrorKind::Precondition, "direct sum needs equal flips");
  auto lift = [k](const FockModel& fm, const LatticeOperator& op) {
    return embed_rank(op, k, std::vector<std::size_t>(fm.A.begin(), fm.A.end()));
  };
  std::vector<std::vector<LatticeOperator>> S(k);
  for (std::size_t i = 0; i < k; ++i)
    S[i].push_back(direct_sum(lift(a, a.tuple.S(i, 0)), lift(b, b.tuple.S(i, 0))));
  const GradedSpace space = S.front().front().space();
  TwistedTuple t(a.tuple.fibers(), space, std::move(S));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      t.set_twist(i, j, direct_sum(lift(a, a.tuple.twist(i, j)), lift(b, b.tuple.twist(i, j))));
  if (a.tuple.algebra.kind != b.tuple.algebra.kind || a.tuple.algebra.n != b.tuple.algebra.n)
    throw Error(ErrorKind::ShapeMismatch, "direct sum needs the same algebra");
  t.algebra.kind = a.tuple.algebra.kind;
  t.algebra.n = a.tuple.algebra.n;
  t.algebra.sigma.clear();
  for (std::size_t c = 0; c < a.tuple.algebra.sigma.size(); ++c)
    t.algebra.sigma.push_back(
        direct_sum(lift(a, a.tuple.algebra.sigma[c]), lift(b, b.tuple.algebra.sigma[c])));
  t.label = a.tuple.label + "+" + b.tuple.label;
  return t;
}

TwistedTuple make_scalar_S_family(const FockModel& base, const std::vector<std::vector<cplx>>& coeffs) {
  const std::size_t k = base.core.k;
  if (base.A.size() != k) throw Error(ErrorKind::Precondition, "scalar S-family needs A = I_k");
  if (coeffs.size() != k) throw Error(ErrorKind::ShapeMismatch, "one coefficient row per coordinate");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (std::abs(base.core.flip(i, j) - 1.0) > 1e-14)
        throw Error(ErrorKind::Precondition, "scalar S-family needs trivial model flips");
  std::vector<int> dims;
  std::vector<std::vector<LatticeOperator>> S(k);
  for (std::size_t i = 0; i < k; ++i) {
    dims.push_back(static_cast<int>(coeffs[i].size()));
    for (cplx a : coeffs[i]) S[i].push_back(scale(a, base.tuple.S(i, 0)));
  }
  std::map<std::pair<std::size_t, std::size_t>, LatticeOperator> twists;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) twists.emplace(std::make_pair(i, j), base.tuple.twist(i, j));
  TwistedTuple t = induce_from_S(std::move(S), FiberSpec::swaps(dims), twists, base.tuple.algebra);
  t.label = "scalar_S_family";
  return t;
}

TwistedTuple make_polydisc(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "polydisc needs n >= 1");
  const GradedSpace s{n, 1, false};
  std::vector<std::vector<LatticeOperator>> S(n);
  for (std::size_t i = 0; i < n; ++i) S[i].push_back(shift(s, i));
  TwistedTuple t(FiberSpec(std::vector<int>(n, 1)), s, std::move(S));
  t.algebra = AlgebraSpec::scalar(s);
  t.label = "polydisc(" + std::to_string(n) + ")";
  return t;
}

TwistedTuple make_bilateral_counterexample() {
  const GradedSpace s{1, 1, true};
  const LatticeOperator V1 = shift(s, 0);
  const LatticeOperator V2(s, {Term{{0}, {Guard{0, 0, false}}, 1.0, {}}, Term{{1}, {Guard{0, 0, true}}, 1.0, {}}});
  TwistedTuple t(FiberSpec({1, 1}), s, {{V1}, {V2}});
  t.algebra = AlgebraSpec::scalar(s);
  t.label = "bilateral_counterexample";
  return t;
}

TwistedTuple make_unilateral_bilateral() {
  const GradedSpace s{1, 3, false};
  Mat up = Mat::Zero(3, 3), down = Mat::Zero(3, 3), turn = Mat::Zero(3, 3);
  up(0, 0) = up(1, 1) = 1.0;
  down(2, 2) = 1.0;
  turn(1, 2) = 1.0;
  const LatticeOperator V(s, {Term{{1}, {}, 1.0, {Factor{"up", up, Affine::fixed(1, 1)}}},
                              Term{{-1}, {}, 1.0, {Factor{"down", down, Affine::fixed(1, 1)}}},
                              Term{{0}, {Guard{0, 1, false}}, 1.0, {Factor{"turn", turn, Affine::fixed(1, 1)}}}});
  TwistedTuple t(FiberSpec({1}), s, {{V}});
  t.algebra = AlgebraSpec::scalar(s);
  t.label = "unilateral+bilateral";
  return t;
}

TwistedTuple make_doubly_noncommuting(cplx z) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12) throw Error(ErrorKind::InvalidInput, "z must be unimodular");
  const GradedSpace s{2, 1, false};
  const LatticeOperator V2 = LatticeOperator::monomial(
      s, unit(2, 1), {Factor{"zbar", Mat::Constant(1, 1, std::conj(z)), Affine::coord(2, 0)}});
  TwistedTuple t(FiberSpec({1, 1}), s, {{shift(s, 0)}, {V2}});
  t.set_twist(0, 1, LatticeOperator::constant(s, Mat::Constant(1, 1, z), "z"));
  t.algebra = AlgebraSpec::scalar(s);
  t.label = "doubly_noncommuting";
  return t;
}

}  // namespace tw
