#include "twist/model.hpp"

#include "twist/errors.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace tw {

Mat FockCore::twist(std::size_t i, std::size_t j) const {
  if (i == j) throw Error(ErrorKind::InvalidPair, "twist requires i != j");
  auto it = U.find({std::min(i, j), std::max(i, j)});
  if (it == U.end()) return Mat::Identity(dim, dim);
  return i < j ? it->second : Mat(it->second.adjoint());
}

cplx FockCore::flip(std::size_t i, std::size_t j) const {
  if (i == j) throw Error(ErrorKind::InvalidPair, "flip requires i != j");
  auto it = flips.find({std::min(i, j), std::max(i, j)});
  if (it == flips.end()) return 1.0;
  return i < j ? it->second : std::conj(it->second);
}

void FockCore::set_twist(std::size_t i, std::size_t j, const Mat& u) {
  if (i == j) throw Error(ErrorKind::InvalidPair, "twist requires i != j");
  U[{std::min(i, j), std::max(i, j)}] = i < j ? u : Mat(u.adjoint());
}

void FockCore::set_flip(std::size_t i, std::size_t j, cplx c) {
  if (i == j) throw Error(ErrorKind::InvalidPair, "flip requires i != j");
  flips[{std::min(i, j), std::max(i, j)}] = i < j ? c : std::conj(c);
}

namespace {

std::string pair_name(const char* head, std::size_t i, std::size_t j) {
  return std::string(head) + "[" + std::to_string(i) + "," + std::to_string(j) + "]";
}

FiberSpec scalar_fibers(const FockCore& core) {
  FiberSpec f(std::vector<int>(core.k, 1));
  for (std::size_t i = 0; i < core.k; ++i)
    for (std::size_t j = i + 1; j < core.k; ++j) f.set_flip(i, j, Mat::Constant(1, 1, core.flip(i, j)));
  return f;
}

// sum over degrees of a_blk^* b_blk.
Mat inner(const Graded& a, const Graded& b) {
  Mat g = Mat::Zero(a.cols, b.cols);
  for (const auto& [n, ba] : a.blocks) {
    auto it = b.blocks.find(n);
    if (it != b.blocks.end()) g += ba.adjoint() * it->second;
  }
  return g;
}

// Graded x (cols r) times an r x c coefficient matrix.
Graded times(const Graded& x, const Mat& m) {
  Graded out(x.rows, m.cols());
  for (const auto& [n, b] : x.blocks) out.blocks.emplace(n, b * m);
  return out;
}

bool moves_sigma(const FockCore& core) {
  if (core.alpha.empty()) return false;
  for (auto i : core.A) {
    const Mat& a = core.alpha.at(i);
    if (max_abs(a - Mat::Identity(a.rows(), a.cols())) > 0.0) return true;
  }
  return false;
}

// At model degree n the vector S_{i_1}^{n_1}..S_{i_p}^{n_p}h carries
// sigma(alpha_{i_p}^{n_p}..alpha_{i_1}^{n_1}(a)) on h. The actions along A commute, so
// in a joint eigenbasis Q each basis element splits into m terms whose degree
// dependence is a product of scalar powers.
std::vector<LatticeOperator> graded_sigma(const FockCore& core, const GradedSpace& space) {
  const long m = static_cast<long>(core.sigma.size());
  const std::size_t p = core.A.size();
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> coef(0.5, 1.5);
  Mat mix = Mat::Zero(m, m);
  for (auto i : core.A) mix += coef(rng) * core.alpha.at(i);
  Eigen::ComplexEigenSolver<Mat> es(mix);
  const Mat Q = es.eigenvectors();
  const Mat Qi = Q.inverse();
  std::vector<Eigen::VectorXcd> mu;
  for (auto i : core.A) {
    const Mat D = Qi * core.alpha.at(i) * Q;
    Mat off = D;
    off.diagonal().setZero();
    if (max_abs(off) > 1e-10)
      throw Error(ErrorKind::Precondition, "automorphism actions along A are not jointly diagonalizable");
    mu.push_back(D.diagonal());
  }
  std::vector<LatticeOperator> out;
  for (long c = 0; c < m; ++c) {
    std::vector<Term> terms;
    for (long j = 0; j < m; ++j) {
      Mat blk = Mat::Zero(core.dim, core.dim);
      for (long x = 0; x < m; ++x) blk += Q(x, j) * Qi(j, c) * core.sigma[static_cast<std::size_t>(x)];
      if (max_abs(blk) < 1e-15) continue;
      Term t;
      t.offset.assign(p, 0);
      t.factors.push_back(Factor{"sigma" + std::to_string(c) + "/" + std::to_string(j), blk, Affine::fixed(p, 1)});
      for (std::size_t r = 0; r < p; ++r)
        t.factors.push_back(Factor{"mu" + std::to_string(r) + "/" + std::to_string(j),
                                   mu[r](j) * Mat::Identity(core.dim, core.dim), Affine::coord(p, r)});
      terms.push_back(std::move(t));
    }
    out.emplace_back(space, std::move(terms));
  }
  return out;
}

}  // namespace

CheckReport check_core(const FockCore& core, double tol) {
  CheckReport rep("core");
  const IndexSet Ac = complement(core.A, core.k);
  const long d = core.dim;
  auto need = [&](double dev, const std::string& what) { rep.record(dev, tol, what); };
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < core.k; ++i)
    for (std::size_t j = i + 1; j < core.k; ++j) pairs.emplace_back(i, j);
  for (auto [i, j] : pairs) {
    const Mat u = core.twist(i, j);
    need(max_abs(u.adjoint() * u - Mat::Identity(d, d)) + max_abs(u * u.adjoint() - Mat::Identity(d, d)),
         pair_name("U", i, j) + " unitary");
    need(std::abs(std::abs(core.flip(i, j)) - 1.0), pair_name("flip", i, j) + " unimodular");
    for (auto [p, q] : pairs) {
      const Mat w = core.twist(p, q);
      need(max_abs(u * w - w * u), pair_name("U", i, j) + " commutes with " + pair_name("U", p, q));
    }
    for (auto l : Ac) need(max_abs(u * core.W[l] - core.W[l] * u), pair_name("U", i, j) + " commutes with W");
    for (const auto& s : core.sigma) need(max_abs(u * s - s * u), pair_name("U", i, j) + " commutes with sigma");
  }
  if (Ac.empty()) return rep;
  std::vector<std::vector<LatticeOperator>> S;
  for (auto l : Ac) S.push_back({dense(core.W.at(l), "W" + std::to_string(l))});
  FiberSpec f(std::vector<int>(Ac.size(), 1));
  for (std::size_t p = 0; p < Ac.size(); ++p)
    for (std::size_t q = p + 1; q < Ac.size(); ++q) f.set_flip(p, q, Mat::Constant(1, 1, core.flip(Ac[p], Ac[q])));
  TwistedTuple t(f, GradedSpace{0, d, false}, S);
  for (std::size_t p = 0; p < Ac.size(); ++p)
    for (std::size_t q = p + 1; q < Ac.size(); ++q)
      t.set_twist(p, q, dense(core.twist(Ac[p], Ac[q]), pair_name("U", Ac[p], Ac[q])));
  t.algebra.kind = core.algebra_kind;
  t.algebra.n = core.algebra_n;
  t.algebra.sigma.clear();
  for (std::size_t c = 0; c < core.sigma.size(); ++c) t.algebra.sigma.push_back(dense(core.sigma[c], "sigma"));
  if (t.algebra.sigma.empty()) t.algebra.sigma.push_back(dense(Mat::Identity(d, d), "sigma"));
  rep.absorb(check_twisted(t, 0, tol));
  rep.absorb(check_doubly_twisted(t, 0, tol));
  rep.absorb(check_coisometric(t, 0, tol));
  if (!core.alpha.empty() && core.algebra_kind != AlgebraKind::Scalar) {
    for (std::size_t p = 0; p < Ac.size(); ++p) t.algebra.alpha.push_back(core.alpha.at(Ac[p]));
    rep.absorb(check_covariance_automorphic(t, 0, tol));
  }
  return rep;
}

FockModel build_model_operators(const FockCore& core_in, bool verify_core) {
  FockCore core = core_in;
  std::sort(core.A.begin(), core.A.end());
  if (core.W.size() < core.k) core.W.resize(core.k, Mat::Identity(core.dim, core.dim));
  if (verify_core) {
    const CheckReport rc = check_core(core);
    if (!rc.pass) throw Error(ErrorKind::Precondition, "core fails its relation checks: " + rc.where);
  }
  const std::size_t p = core.A.size();
  const GradedSpace space{p, core.dim, false};
  std::vector<std::vector<LatticeOperator>> S(core.k);
  auto twist_factor = [&](std::size_t i, std::size_t r) {
    return Factor{pair_name("cU", i, core.A[r]), core.flip(i, core.A[r]) * core.twist(i, core.A[r]),
                  Affine::coord(p, r)};
  };
  for (std::size_t i = 0; i < core.k; ++i) {
    auto pos = std::find(core.A.begin(), core.A.end(), i);
    std::vector<Factor> fs;
    Degree offset(p, 0);
    if (pos != core.A.end()) {
      const auto j = static_cast<std::size_t>(pos - core.A.begin());
      offset[j] = 1;
      for (std::size_t r = 0; r < j; ++r) fs.push_back(twist_factor(i, r));
    } else {
      fs.push_back(Factor{"W" + std::to_string(i), core.W[i], Affine::fixed(p, 1)});
      for (std::size_t r = 0; r < p; ++r) fs.push_back(twist_factor(i, r));
    }
    S[i].push_back(LatticeOperator::monomial(space, offset, fs));
  }
  FockModel fm;
  fm.A = core.A;
  fm.tuple = TwistedTuple(scalar_fibers(core), space, std::move(S));
  for (std::size_t i = 0; i < core.k; ++i)
    for (std::size_t j = i + 1; j < core.k; ++j)
      fm.tuple.set_twist(i, j, LatticeOperator::constant(space, core.twist(i, j), pair_name("U", i, j)));
  AlgebraSpec alg;
  alg.kind = core.algebra_kind;
  alg.n = core.algebra_n;
  alg.alpha = core.alpha;
  if (core.sigma.empty())
    alg.sigma.push_back(LatticeOperator::identity(space));
  else if (!moves_sigma(core))
    for (std::size_t c = 0; c < core.sigma.size(); ++c)
      alg.sigma.push_back(LatticeOperator::constant(space, core.sigma[c], "sigma" + std::to_string(c)));
  else
    alg.sigma = graded_sigma(core, space);
  fm.tuple.algebra = alg;
  fm.tuple.label = "fock_model" + set_str(core.A);
  fm.core = std::move(core);
  return fm;
}

FockModel pi_A(const TwistedTuple& t, const IndexSet& A_in, long N) {
  IndexSet A = A_in;
  std::sort(A.begin(), A.end());
  for (std::size_t i = 0; i < t.rank(); ++i)
    if (t.fibers().dim(i) != 1) throw Error(ErrorKind::Precondition, "pi_A handles one-dimensional fibers only");
  GradedSubspace D = d_space(t, A, N);
  if (D.total_dim() == 0) throw Error(ErrorKind::Degenerate, "H_A is zero on the window for A=" + set_str(A));
  const Graded B = D.as_columns();
  const long r = B.cols;
  FockCore core;
  core.k = t.rank();
  core.A = A;
  core.dim = r;
  core.W.assign(t.rank(), Mat::Identity(r, r));
  std::vector<std::string> notes;
  auto restrict_to_D = [&](const LatticeOperator& op, const std::string& what) {
    const Graded img = apply(op, B);
    const Mat m = inner(B, img);
    Graded resid = img;
    resid -= times(B, m);
    const double leak = std::sqrt(resid.column_norms2().maxCoeff());
    if (leak > 1e-8) notes.push_back(what + " does not preserve D_A (leak " + std::to_string(leak) + ")");
    return m;
  };
  const IndexSet Ac = complement(A, t.rank());
  for (auto l : Ac) core.W[l] = restrict_to_D(t.S(l, 0), "S" + std::to_string(l));
  for (std::size_t i = 0; i < t.rank(); ++i)
    for (std::size_t j = i + 1; j < t.rank(); ++j) {
      core.set_twist(i, j, restrict_to_D(t.twist(i, j), pair_name("U", i, j)));
      core.set_flip(i, j, t.fibers().flip(i, j)(0, 0));
    }
  core.algebra_kind = t.algebra.kind;
  core.algebra_n = t.algebra.n;
  core.alpha = t.algebra.alpha;
  for (std::size_t c = 0; c < t.algebra.sigma.size(); ++c)
    core.sigma.push_back(restrict_to_D(t.algebra.sigma[c], "sigma" + std::to_string(c)));
  FockModel fm = build_model_operators(core, false);
  fm.core_basis = B;
  fm.D = std::move(D);
  fm.notes = std::move(notes);
  return fm;
}

std::map<Degree, Graded> pi_table(const TwistedTuple& t, const FockModel& fm, long bound) {
  std::map<Degree, Graded> table;
  const GradedSpace box{fm.A.size(), 1, false};
  for (const auto& n : window_degrees(box, bound)) {
    Graded x = fm.core_basis;
    for (std::size_t p = fm.A.size(); p-- > 0;)
      for (long e = 0; e < n[p]; ++e) x = apply(t.S(fm.A[p], 0), x);
    table.emplace(n, std::move(x));
  }
  return table;
}

namespace {

void compare_transport(const LatticeOperator& orig, const LatticeOperator& model,
                       const std::map<Degree, Graded>& table, const GradedSpace& box, long N, long r,
                       double tol, const std::string& tag, CheckReport& rep) {
  for (const auto& n : window_degrees(box, N)) {
    Graded lhs = apply(orig, table.at(n));
    Graded unit(r, r);
    unit.blocks.emplace(n, Mat::Identity(r, r));
    const Graded out = apply(model, unit);
    for (const auto& [m, blk] : out.blocks) {
      auto it = table.find(m);
      if (it == table.end()) throw Error(ErrorKind::Precondition, "pi table too short at " + degree_str(m));
      lhs -= times(it->second, blk);
    }
    const double dev = lhs.cols ? std::sqrt(lhs.column_norms2().maxCoeff()) : 0.0;
    rep.record(dev, tol, tag + ", model degree " + degree_str(n));
  }
}

}  // namespace

EquivalenceReport verify_equivalence(const TwistedTuple& t, const FockModel& fm, long N, double tol) {
  EquivalenceReport rep;
  rep.gram = CheckReport("pi-isometry");
  rep.ops = CheckReport("operators");
  rep.sigma = CheckReport("sigma");
  rep.twists = CheckReport("twists");
  const long r = fm.core.dim;
  if (r == 0 || fm.core_basis.cols == 0 || fm.core_basis.blocks.empty()) {
    rep.notes.push_back("H_A is zero on the window; nothing to compare");
    return rep;
  }
  const GradedSpace box{fm.A.size(), 1, false};
  const auto table = pi_table(t, fm, N + 1);
  // Gram matrix of all images with |n| in the window, accumulated per degree.
  const auto degs = window_degrees(box, N);
  std::map<Degree, std::vector<std::pair<std::size_t, const Mat*>>> by_degree;
  for (std::size_t a = 0; a < degs.size(); ++a)
    for (const auto& [m, blk] : table.at(degs[a]).blocks) by_degree[m].emplace_back(a, &blk);
  const long T = static_cast<long>(degs.size()) * r;
  Mat gram = Mat::Zero(T, T);
  for (const auto& [m, list] : by_degree)
    for (const auto& [a, ba] : list)
      for (const auto& [b, bb] : list)
        gram.block(static_cast<long>(a) * r, static_cast<long>(b) * r, r, r) += ba->adjoint() * (*bb);
  const Mat gd = gram - Mat::Identity(T, T);
  Eigen::Index ri = 0, ci = 0;
  const double gdev = gd.size() ? gd.cwiseAbs().maxCoeff(&ri, &ci) : 0.0;
  rep.gram.record(gdev, tol, "model degrees " + degree_str(degs[static_cast<std::size_t>(ri / r)]) + " and " +
                                 degree_str(degs[static_cast<std::size_t>(ci / r)]));
  for (std::size_t i = 0; i < t.rank(); ++i)
    compare_transport(t.S(i, 0), fm.tuple.S(i, 0), table, box, N, r, tol, "S" + std::to_string(i), rep.ops);
  for (std::size_t c = 0; c < t.algebra.sigma.size() && c < fm.tuple.algebra.sigma.size(); ++c)
    compare_transport(t.algebra.sigma[c], fm.tuple.algebra.sigma[c], table, box, N, r, tol,
                      "sigma" + std::to_string(c), rep.sigma);
  for (std::size_t i = 0; i < t.rank(); ++i)
    for (std::size_t j = i + 1; j < t.rank(); ++j)
      compare_transport(t.twist(i, j), fm.tuple.twist(i, j), table, box, N, r, tol, pair_name("U", i, j), rep.twists);
  rep.pass = rep.gram.pass && rep.ops.pass && rep.sigma.pass && rep.twists.pass;
  rep.notes = fm.notes;
  return rep;
}

LatticeOperator conjugate_core(const LatticeOperator& op, const Mat& B) {
  const GradedSpace& s = op.space();
  return compose(compose(LatticeOperator::constant(s, B.adjoint(), "B*"), op), LatticeOperator::constant(s, B, "B"));
}

}  // namespace tw
