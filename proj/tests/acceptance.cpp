// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria.

#include "oracle.hpp"
#include "twist/extension.hpp"
#include "twist/factory.hpp"
#include "twist/lemmas.hpp"
#include "twist/tensorspace.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace tw;

namespace {

constexpr double kBraidTol = 1e-14;
constexpr double kRelationTol = 1e-10;
constexpr double kLemmaTol = 1e-10;
constexpr double kRankTol = 1e-8;
constexpr double kModelTol = 1e-10;
constexpr double kExtensionTol = 1e-10;

constexpr double kBraidBudget = 5.0;
constexpr double kRelationBudget = 60.0;
constexpr double kLemmaBudget = 120.0;
constexpr double kExtensionBudget = 60.0;

constexpr long kRelationWindow = 8;
constexpr long kExtensionWindow = 6;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

struct Fixture {
  std::string name;
  TwistedTuple tuple;
};

FockParams fock_params(std::size_t k, const IndexSet& A) {
  FockParams p;
  p.k = k;
  p.A = A;
  p.seed = 1000 + 10 * k + A.size();
  return p;
}

std::vector<Fixture> relation_fixtures() {
  std::vector<Fixture> out{{"c3_permutation", make_c3_permutation()},
                           {"m2_hardy", make_m2_hardy(std::polar(1.0, std::numbers::pi / 3))}};
  for (std::size_t k : {2, 3})
    for (const auto& A : all_subsets(k))
      out.push_back({"fock k=" + std::to_string(k) + " A=" + set_str(A), make_fock_model(fock_params(k, A)).tuple});
  for (std::size_t n : {1, 2, 3}) out.push_back({"polydisc(" + std::to_string(n) + ")", make_polydisc(n)});
  return out;
}

std::vector<Fixture> doubly_twisted_fixtures() {
  std::vector<Fixture> out = relation_fixtures();
  out.push_back({"doubly_noncommuting(i)", make_doubly_noncommuting(cplx(0, 1))});
  out.push_back({"unilateral+bilateral", make_unilateral_bilateral()});
  return out;
}

// Smaller windows where the lattice rank makes window 8 needlessly slow.
long lemma_window(const TwistedTuple& t) {
  if (t.space().rank == 0) return 0;
  return t.space().rank >= 3 || t.space().fiber >= 4 ? 3 : 4;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// ---- 1 ----------------------------------------------------------------------

void braid(Outcome& o) {
  double worst = 0.0;
  std::size_t cells = 0;
  for (int d0 : {1, 2})
    for (int d1 : {1, 2})
      for (int d2 : {1, 2}) {
        const FiberSpec spec({d0, d1, d2});
        const HexagonReport rep = check_hexagon(spec, 3, kBraidTol);
        worst = std::max(worst, rep.max_deviation);
        cells += rep.cells.size();
        o.require(rep.pass, "hexagon dims " + std::to_string(d0) + std::to_string(d1) + std::to_string(d2));
        // The iterated flip of swaps is the slot move (0, 1..n) -> (1..n, 0).
        for (std::size_t i = 0; i < 3; ++i)
          for (std::size_t j = 0; j < 3; ++j) {
            if (i == j) continue;
            for (int n = 1; n <= 3; ++n) {
              std::vector<long> in{spec.dim(i)};
              std::vector<std::size_t> perm;
              for (int r = 0; r < n; ++r) {
                in.push_back(spec.dim(j));
                perm.push_back(static_cast<std::size_t>(r + 1));
              }
              perm.push_back(0);
              const double dev = oracle::max_abs(flip_iterated(spec, i, j, n) - oracle::slot_move(in, perm));
              o.require(dev == 0.0, "flip_iterated vs slot move");
            }
          }
      }
  o.require(worst <= kBraidTol, "max deviation " + fmt(worst));
  o.detail << cells << " cells over d in {1,2}^3, n <= 3, max deviation " << fmt(worst);
}

// ---- 2 ----------------------------------------------------------------------

void relations(Outcome& o) {
  std::size_t count = 0;
  for (const auto& f : relation_fixtures()) {
    const long N = f.tuple.space().rank == 0 ? 0 : kRelationWindow;
    std::vector<CheckReport> reps{check_isometric(f.tuple, N, kRelationTol), check_twisted(f.tuple, N, kRelationTol),
                                  check_doubly_twisted(f.tuple, N, kRelationTol),
                                  check_sigma_homomorphism(f.tuple.algebra, f.tuple.space(), N, kRelationTol)};
    if (!f.tuple.algebra.alpha.empty()) reps.push_back(check_covariance_automorphic(f.tuple, N, kRelationTol));
    for (const auto& r : reps) o.require(r.pass, f.name + " " + r.name + " at " + r.where + " worst " + fmt(r.worst));
    ++count;
  }
  o.detail << count << " fixtures, window " << kRelationWindow;
}

// ---- 3 ----------------------------------------------------------------------

void lemmas(Outcome& o) {
  double worst = 0.0;
  std::size_t count = 0;
  const LemmaBounds bounds{3, 2, 3, 3, 2};
  for (const auto& f : doubly_twisted_fixtures()) {
    for (const auto& r : check_lemmas(f.tuple, lemma_window(f.tuple), kLemmaTol, bounds)) {
      o.require(r.pass, f.name + " " + r.name + " at " + r.where);
      worst = std::max(worst, r.worst);
      ++count;
    }
  }
  o.detail << count << " identity checks, worst " << fmt(worst);
}

// ---- 4 ----------------------------------------------------------------------

void wold(Outcome& o) {
  {
    const long N = 6;
    const DecompositionReport dec = verify_decomposition(make_polydisc(2), N, kRankTol);
    o.require(dec.pass, "polydisc(2) decomposition");
    const auto dims = dec.summands.at({0, 1}).dims_by_total_degree();
    for (long t = 0; t <= 2 * N; ++t)
      o.require(dims.at(t) == oracle::lattice_points(2, N, t), "polydisc(2) total degree " + std::to_string(t));
    for (const IndexSet& A : {IndexSet{}, IndexSet{0}, IndexSet{1}})
      o.require(dec.summands.at(A).total_dim() == 0, "polydisc(2) summand " + set_str(A));
  }
  {
    FockParams p = fock_params(2, {0});
    p.dim = 2;
    const FockModel a = make_fock_model(p);
    FockParams q = fock_params(2, {0, 1});
    q.dim = 1;
    q.flips = std::map<std::pair<std::size_t, std::size_t>, cplx>{{{0, 1}, a.core.flip(0, 1)}};
    const FockModel b = make_fock_model(q);
    const long N = 4;
    const TwistedTuple sum = make_fock_direct_sum(a, b);
    const DecompositionReport dec = verify_decomposition(sum, N, kRankTol);
    o.require(dec.pass, "direct sum decomposition");
    for (const auto& n : window_degrees(sum.space(), N)) {
      o.require(dec.summands.at({0}).dim_at(n) == a.core.dim, "direct sum H_{0} at " + degree_str(n));
      o.require(dec.summands.at({0, 1}).dim_at(n) == b.core.dim, "direct sum H_{0,1} at " + degree_str(n));
      o.require(dec.summands.at({}).dim_at(n) == 0 && dec.summands.at({1}).dim_at(n) == 0, "direct sum empty summands");
    }
  }
  {
    const long N = 6;
    const DecompositionReport dec = verify_decomposition(make_unilateral_bilateral(), N, kRankTol);
    o.require(dec.pass, "unilateral+bilateral decomposition");
    Mat shift_slot = Mat::Zero(3, 3);
    shift_slot(0, 0) = 1.0;
    for (long n = 0; n <= N; ++n) {
      const auto proj = [&](const IndexSet& A) {
        const auto& basis = dec.summands.at(A).basis;
        auto it = basis.find({n});
        return it == basis.end() ? Mat(Mat::Zero(3, 3)) : Mat(it->second * it->second.adjoint());
      };
      o.require(oracle::max_abs(proj({0}) - shift_slot) < kRankTol, "shift part at " + std::to_string(n));
      o.require(oracle::max_abs(proj({}) - (identity(3) - shift_slot)) < kRankTol, "unitary part at " + std::to_string(n));
    }
  }
  o.detail << "polydisc(2) lattice counts, Fock direct sum block dims, classical Wold split";
}

// ---- 5 ----------------------------------------------------------------------

void existence(Outcome& o) {
  std::size_t count = 0;
  for (const auto& f : doubly_twisted_fixtures()) {
    const long N = f.tuple.space().rank == 0 ? 0 : lemma_window(f.tuple);
    o.require(check_existence(f.tuple, N, kRankTol).exists, f.name);
    ++count;
  }
  // Dense oracle on l^2({-L..L}): commutator of V_1 with the unitary part of V_2.
  const long L = 8;
  const long dim = 2 * L + 1;
  Mat V1 = Mat::Zero(dim, dim), V2 = Mat::Zero(dim, dim);
  for (long k = -L; k < L; ++k) V1(oracle::at(k + 1, L), oracle::at(k, L)) = 1.0;
  for (long k = -L; k <= L; ++k) {
    if (k < 0) V2(oracle::at(k, L), oracle::at(k, L)) = 1.0;
    if (k >= 0 && k < L) V2(oracle::at(k + 1, L), oracle::at(k, L)) = 1.0;
  }
  const Mat PW = identity(dim) - V2 * V2.adjoint();
  Mat Pshift = Mat::Zero(dim, dim), Vm = identity(dim);
  for (long m = 0; m <= L; ++m) {
    Pshift += Vm * PW * Vm.adjoint();
    Vm = V2 * Vm;
  }
  const Mat Pu = identity(dim) - Pshift;
  const Mat comm = V1 * Pu - Pu * V1;
  double oracle_worst = 0.0;
  long oracle_col = 0;
  for (long k = -6; k <= 6; ++k)
    if (comm.col(oracle::at(k, L)).norm() > oracle_worst + 1e-12) {
      oracle_worst = comm.col(oracle::at(k, L)).norm();
      oracle_col = k;
    }

  const ExistenceReport ex = check_existence(make_bilateral_counterexample(), 6, kRankTol);
  o.require(!ex.exists, "bilateral counterexample reported as decomposable");
  o.require(ex.degree == Degree{oracle_col}, "witness degree " + degree_str(ex.degree));
  o.require(std::abs(ex.worst - oracle_worst) < kRankTol, "witness size " + fmt(ex.worst) + " vs " + fmt(oracle_worst));
  o.require(std::abs(std::abs(comm(oracle::at(0, L), oracle::at(-1, L))) - 1.0) < kRankTol, "oracle V_1 f_{-1} = f_0");
  o.detail << "true on " << count << " fixtures; bilateral: " << ex.witness;
}

// ---- 6 ----------------------------------------------------------------------

void model_roundtrip(Outcome& o) {
  double worst = 0.0;
  std::size_t count = 0;
  for (std::size_t k : {2, 3})
    for (const auto& A : all_subsets(k)) {
      const FockModel fm = make_fock_model(fock_params(k, A));
      const long N = k == 2 ? 6 : 4;
      const FockModel pm = pi_A(fm.tuple, A, N);
      const Mat B = pm.core_basis.blocks.at(Degree(pm.tuple.space().rank, 0));
      const std::string tag = "k=" + std::to_string(k) + " A=" + set_str(A);
      o.require(is_unitary(B, kModelTol), tag + " basis change not unitary");
      for (std::size_t i = 0; i < k; ++i) {
        const WindowReport r = equal_on_window(pm.tuple.S(i, 0), conjugate_core(fm.tuple.S(i, 0), B), N, kModelTol);
        worst = std::max(worst, r.worst);
        o.require(r.pass, tag + " S" + std::to_string(i));
        for (std::size_t j = i + 1; j < k; ++j) {
          const WindowReport u = equal_on_window(pm.tuple.twist(i, j), conjugate_core(fm.tuple.twist(i, j), B), N, kModelTol);
          worst = std::max(worst, u.worst);
          o.require(u.pass, tag + " U" + std::to_string(i) + std::to_string(j));
        }
      }
      ++count;
    }
  o.detail << count << " Fock fixtures, worst " << fmt(worst);
}

// ---- 7, 8 -------------------------------------------------------------------

struct ExtensionRun {
  std::string name;
  ExtensionReport report;
};

std::vector<ExtensionRun> extension_corpus;

void extension(Outcome& o) {
  const long N = kExtensionWindow;
  auto record = [&](const std::string& name, const ExtensionResult& res, const TwistedTuple& t) {
    extension_corpus.push_back({name, verify_extension(res, t, N, kExtensionTol)});
    return extension_corpus.back().report;
  };

  const TwistedTuple uni = make_polydisc(1);
  const ExtensionResult ra = extend_doubly_twisted_isometries(uni, N);
  const ExtensionReport a = record("unilateral", ra, uni);
  o.require(a.pass && a.restriction.worst == 0.0 && a.unitary.worst == 0.0, "(a) unilateral");
  for (long n = -N; n <= N; ++n) {
    Graded e(1, 1);
    e.blocks.emplace(Degree{n}, Mat::Ones(1, 1));
    const Graded out = apply(ra.extended.S(0, 0), e);
    o.require(out.blocks.size() == 1 && out.blocks.begin()->first == Degree{n + 1} &&
                  out.blocks.begin()->second(0, 0) == cplx(1.0),
              "(a) bilateral shift at " + std::to_string(n));
  }

  const TwistedTuple bi = make_polydisc(2);
  const ExtensionReport b = record("polydisc(2)", extend_doubly_twisted_isometries(bi, N), bi);
  o.require(b.pass, "(b) polydisc(2)");

  const cplx z(0, 1);
  const TwistedTuple dn = make_doubly_noncommuting(z);
  const ExtensionResult rc = extend_doubly_twisted_isometries(dn, N);
  const ExtensionReport c = record("doubly_noncommuting(i)", rc, dn);
  o.require(c.pass && c.doubly_twisted.pass, "(c) doubly twisted");
  const LatticeOperator zs = LatticeOperator::constant(rc.extended.space(), Mat::Constant(1, 1, z), "z");
  o.require(equal_on_window(rc.extended.twist(0, 1), zs, N, kExtensionTol).pass, "(c) twist is z");

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
  const ExtensionResult rd = extend_commutative_lattice(fm, N, 3);
  const ExtensionReport d = record("commutative lattice, nontrivial U_12", rd, fm.tuple);
  o.require(rd.has_level_checks && rd.intertwining.pass, "(d) level intertwinings");
  o.require(rd.coisometry_hypothesis.pass, "(d) coisometry hypothesis");
  o.require(d.unitary.pass && d.pass, "(d) unitary on window");

  // The remaining corpus for the implication meta-check.
  for (std::size_t k : {2, 3})
    for (const auto& A : all_subsets(k)) {
      if (A.empty()) continue;
      FockParams p = fock_params(k, A);
      p.diagonal_algebra = k == 2;
      const FockModel f = make_fock_model(p);
      const long M = k == 2 ? N : 3;
      const std::string tag = "fock k=" + std::to_string(k) + " A=" + set_str(A);
      extension_corpus.push_back({tag + " general", verify_extension(extend_doubly_twisted_isometries(f.tuple, M), f.tuple, M, kExtensionTol)});
      extension_corpus.push_back({tag + " lattice", verify_extension(extend_commutative_lattice(f, M), f.tuple, M, kExtensionTol)});
    }
  extension_corpus.push_back({"doubly_noncommuting(e^{2i})", verify_extension(extend_doubly_twisted_isometries(make_doubly_noncommuting(std::polar(1.0, 2.0)), N),
                                                                                make_doubly_noncommuting(std::polar(1.0, 2.0)), N, kExtensionTol)});
  for (long scale : {0, 2, 3}) {
    ExtensionOptions bad;
    bad.z_exponent_scale = scale;
    extension_corpus.push_back({"corrupted Z scale " + std::to_string(scale),
                                verify_extension(extend_doubly_twisted_isometries(dn, N, bad), dn, N, kExtensionTol)});
  }
  o.detail << "(a) (b) (c) (d) on window " << N;
}

void implication(Outcome& o) {
  std::size_t premise = 0;
  for (const auto& run : extension_corpus) {
    const ExtensionReport& r = run.report;
    const bool expected = !(r.unitary.pass && r.twisted.pass) || r.doubly_twisted.pass;
    o.require(expected, run.name);
    o.require(r.implication_holds == expected, run.name + " flag disagrees");
    premise += r.unitary.pass && r.twisted.pass;
  }
  o.require(!extension_corpus.empty(), "empty extension corpus");
  o.detail << extension_corpus.size() << " runs, " << premise << " with unitary and twisted, all doubly twisted";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds, 0 for none
    std::function<void(Outcome&)> body;
  };
  const std::vector<Criterion> criteria{{1, "braid", kBraidBudget, braid},
                                        {2, "relations", kRelationBudget, relations},
                                        {3, "lemmas", kLemmaBudget, lemmas},
                                        {4, "wold", 0.0, wold},
                                        {5, "existence", 0.0, existence},
                                        {6, "model roundtrip", 0.0, model_roundtrip},
                                        {7, "extension", kExtensionBudget, extension},
                                        {8, "implication", 0.0, implication}};
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget > 0.0) o.require(secs < c.budget, "over budget");
    std::printf("criterion %d %-16s %s  %.2fs%s  %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", secs,
                c.budget > 0.0 ? (" (budget " + fmt(c.budget) + "s)").c_str() : "", o.detail.str().c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed;
}
