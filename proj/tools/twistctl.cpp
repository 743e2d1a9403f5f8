// twistctl: verify, decompose, model and extend twisted tuples given as spec files.
#include "twist/errors.hpp"
#include "twist/factory.hpp"
#include "twist/serialize.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

using namespace tw;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInput = 2;

struct Common {
  std::string file;
  bool from_stdin = false;
  long window = 8;
  double tol = -1.0;
  bool as_json = false;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool input = true) {
  if (input) {
    cmd->add_option("file", c.file, "operator spec file");
    cmd->add_flag("--stdin", c.from_stdin, "read the spec from standard input");
  }
  cmd->add_option("--window", c.window, "lattice window N")->check(CLI::NonNegativeNumber);
  cmd->add_option("--tol", c.tol, "tolerance (default 1e-12 dense, 1e-10 lattice)");
  cmd->add_flag("--json", c.as_json, "print the structured report instead of the summary");
}

SpecFile load(const Common& c) {
  std::string text;
  if (c.from_stdin) {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    if (c.file.empty()) throw Error(ErrorKind::InvalidInput, "no spec file given (use a path or --stdin)");
    std::ifstream in(c.file);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + c.file);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  return parse_spec(text);
}

double tolerance(const Common& c, const TwistedTuple& t) {
  if (c.tol > 0) return c.tol;
  return t.space().rank == 0 ? 1e-12 : 1e-10;
}

long window_of(const Common& c, const SpecFile& s, const CLI::App* cmd) {
  if (cmd->count("--window") == 0 && s.window) return *s.window;
  return c.window;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  out << text;
}

json envelope(const char* command, bool pass) {
  return {{"report_version", kReportVersion}, {"command", command}, {"pass", pass}};
}

void print_check(const CheckReport& r) {
  std::printf("  %-22s %s  worst=%.3e%s%s\n", r.name.c_str(), r.pass ? "pass" : "FAIL", r.worst,
              r.where.empty() ? "" : "  at ", r.where.c_str());
  for (const auto& n : r.notes) std::printf("    note: %s\n", n.c_str());
}

int cmd_verify(const Common& c, const CLI::App* cmd, const std::vector<std::string>& only) {
  const SpecFile s = load(c);
  const TwistedTuple& t = s.tuple;
  const long N = window_of(c, s, cmd);
  const double tol = tolerance(c, t);
  auto wanted = [&](const std::string& name) {
    return only.empty() || std::find(only.begin(), only.end(), name) != only.end();
  };
  std::vector<CheckReport> reps;
  if (wanted("isometric")) reps.push_back(check_isometric(t, N, tol));
  if (wanted("twisted")) reps.push_back(check_twisted(t, N, tol));
  if (wanted("doubly-twisted")) reps.push_back(check_doubly_twisted(t, N, tol));
  if (t.algebra.kind != AlgebraKind::Scalar) {
    if (wanted("sigma-homomorphism")) reps.push_back(check_sigma_homomorphism(t.algebra, t.space(), N, tol));
    if (t.algebra.alpha.size() == t.rank() && wanted("covariance"))
      reps.push_back(check_covariance_automorphic(t, N, tol));
  }
  if (wanted("coisometric") && !only.empty()) reps.push_back(check_coisometric(t, N, tol));
  bool pass = true;
  for (const auto& r : reps) pass = pass && r.pass;
  if (c.as_json) {
    json j = envelope("verify", pass);
    j["window"] = N;
    j["tol"] = tol;
    j["checks"] = json::array();
    for (const auto& r : reps) j["checks"].push_back(report_json(r));
    std::cout << canonical(j);
  } else {
    std::printf("verify %s (window %ld, tol %.1e)\n", t.label.c_str(), N, tol);
    for (const auto& r : reps) print_check(r);
    std::printf("%s\n", pass ? "all checks pass" : "verification failed");
  }
  return pass ? kPass : kFail;
}

int cmd_wold(const Common& c, const CLI::App* cmd, bool emit_bases) {
  const SpecFile s = load(c);
  const TwistedTuple& t = s.tuple;
  const long N = window_of(c, s, cmd);
  const double tol = tolerance(c, t);
  const ExistenceReport ex = check_existence(t, N, tol);
  json j = envelope("wold", ex.exists);
  j["window"] = N;
  j["existence"] = report_json(ex);
  if (!ex.exists) {
    if (c.as_json)
      std::cout << canonical(j);
    else
      std::printf("existence: false\nwitness: %s\n", ex.witness.c_str());
    return kFail;
  }
  const DecompositionReport dec = verify_decomposition(t, N, tol);
  j["pass"] = dec.pass;
  j["failures"] = dec.failures;
  j["notes"] = dec.notes;
  json summands = json::object();
  for (const auto& [A, sub] : dec.summands) {
    json e;
    json dims = json::object();
    for (const auto& [deg, d] : sub.dims_by_total_degree()) dims[std::to_string(deg)] = d;
    e["dims_by_total_degree"] = dims;
    e["total"] = sub.total_dim();
    e["warnings"] = sub.warnings;
    if (emit_bases) e["bases"] = bases_json(sub);
    summands[set_str(A)] = e;
  }
  j["summands"] = summands;
  if (c.as_json) {
    std::cout << canonical(j);
  } else {
    std::printf("existence: true\nwold decomposition of %s (window %ld)\n", t.label.c_str(), N);
    for (const auto& [A, sub] : dec.summands) {
      std::printf("  H_%-10s total %-5ld by |n|:", set_str(A).c_str(), sub.total_dim());
      for (const auto& [deg, d] : sub.dims_by_total_degree()) std::printf(" %ld:%ld", deg, d);
      std::printf("\n");
    }
    for (const auto& f : dec.failures) std::printf("  FAIL %s\n", f.c_str());
    for (const auto& n : dec.notes) std::printf("  note: %s\n", n.c_str());
    if (emit_bases) std::cout << canonical(summands);
  }
  return dec.pass ? kPass : kFail;
}

int cmd_model(const Common& c, const CLI::App* cmd, std::vector<std::size_t> subset) {
  const SpecFile s = load(c);
  const TwistedTuple& t = s.tuple;
  const long N = window_of(c, s, cmd);
  const double tol = tolerance(c, t);
  if (cmd->count("--subset") == 0 && s.subset) subset = *s.subset;
  std::sort(subset.begin(), subset.end());
  FockModel fm;
  try {
    fm = pi_A(t, subset, N);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Degenerate) throw;
    if (c.as_json) {
      json j = envelope("model", false);
      j["error"] = e.what();
      std::cout << canonical(j);
    } else {
      std::printf("model for A=%s: %s\n", set_str(subset).c_str(), e.what());
    }
    return kFail;
  }
  const EquivalenceReport eq = verify_equivalence(t, fm, N, tol);
  const json model = to_json(SpecFile{fm.tuple, subset, N});
  if (!c.out.empty()) write_file(c.out, canonical(model));
  if (c.as_json) {
    json j = envelope("model", eq.pass);
    j["subset"] = subset;
    j["core_dim"] = fm.core.dim;
    j["equivalence"] = report_json(eq);
    if (c.out.empty()) j["model"] = model;
    std::cout << canonical(j);
  } else {
    std::printf("model for A=%s: core dimension %ld\n", set_str(subset).c_str(), fm.core.dim);
    for (const CheckReport* r : {&eq.gram, &eq.ops, &eq.sigma, &eq.twists}) print_check(*r);
    for (const auto& n : eq.notes) std::printf("  note: %s\n", n.c_str());
    if (!c.out.empty()) std::printf("model spec written to %s\n", c.out.c_str());
  }
  return eq.pass ? kPass : kFail;
}

int cmd_extend(const Common& c, const CLI::App* cmd) {
  const SpecFile s = load(c);
  const TwistedTuple& t = s.tuple;
  const long N = window_of(c, s, cmd);
  const double tol = tolerance(c, t);
  ExtensionResult res;
  try {
    res = extend_doubly_twisted_isometries(t, N);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Precondition) throw;
    if (c.as_json) {
      json j = envelope("extend", false);
      j["error"] = e.what();
      std::cout << canonical(j);
    } else {
      std::printf("extension precondition failed: %s\n", e.what());
    }
    return kFail;
  }
  const ExtensionReport rep = verify_extension(res, t, N, tol);
  const json ext = to_json(SpecFile{res.extended, std::nullopt, N});
  if (!c.out.empty()) write_file(c.out, canonical(ext));
  if (c.as_json) {
    json j = envelope("extend", rep.pass);
    j["levels"] = res.levels;
    j["phi_coords"] = res.phi_coords;
    j["phi_offset"] = res.phi_offset;
    j["log"] = res.log;
    j["extension"] = report_json(rep);
    if (c.out.empty()) j["extended"] = ext;
    std::cout << canonical(j);
  } else {
    std::printf("extension of %s (%ld levels, Phi offset %s)\n", t.label.c_str(), res.levels,
                degree_str(res.phi_offset).c_str());
    for (const CheckReport* r : {&rep.restriction, &rep.unitary, &rep.twisted, &rep.doubly_twisted, &rep.sigma,
                                 &rep.continuation, &rep.minimality})
      print_check(*r);
    std::printf("  implication (unitary and twisted => doubly twisted): %s\n", rep.implication_holds ? "holds" : "VIOLATED");
    for (const auto& n : rep.notes) std::printf("  note: %s\n", n.c_str());
    if (!c.out.empty()) std::printf("extension spec written to %s\n", c.out.c_str());
  }
  return rep.pass ? kPass : kFail;
}

int cmd_braid(const Common& c, int bound, const std::vector<int>& dims) {
  FiberSpec fibers;
  if (!dims.empty())
    fibers = FiberSpec::swaps(dims);
  else
    fibers = load(c).tuple.fibers();
  if (fibers.rank() < 3) throw Error(ErrorKind::InvalidInput, "the braid check needs at least three coordinates");
  const double tol = c.tol > 0 ? c.tol : 1e-12;
  const HexagonReport r = check_hexagon(fibers, bound, tol);
  if (c.as_json) {
    json j = envelope("braid", r.pass);
    j["n"] = bound;
    j["tol"] = tol;
    j["hexagon"] = report_json(r);
    std::cout << canonical(j);
  } else {
    std::printf("braid identity, %zu triples x n <= %d: max deviation %.3e  %s\n", r.cells.size() / bound, bound,
                r.max_deviation, r.pass ? "pass" : "FAIL");
    if (r.first_violation)
      std::printf("  first violation at (i,j,l)=(%zu,%zu,%zu), n=%d\n", r.first_violation->i, r.first_violation->j,
                  r.first_violation->l, r.first_violation->n);
  }
  return r.pass ? kPass : kFail;
}

struct MakeArgs {
  std::string example;
  std::uint64_t seed = 1;
  std::size_t k = 2;
  std::vector<std::size_t> subset;
  std::size_t n = 2;
  double angle = 1.0 / 3.0;  // in units of pi
};

int cmd_make(const MakeArgs& m, const Common& c) {
  const cplx unit_root = std::polar(1.0, m.angle * 3.14159265358979323846);
  TwistedTuple t;
  std::optional<IndexSet> subset;
  if (m.example == "c3_permutation") {
    t = make_c3_permutation();
  } else if (m.example == "m2_hardy") {
    t = make_m2_hardy(unit_root);
  } else if (m.example == "fock_model") {
    FockParams p;
    p.k = m.k;
    p.A = m.subset;
    std::sort(p.A.begin(), p.A.end());
    p.seed = m.seed;
    t = make_fock_model(p).tuple;
    subset = p.A;
  } else if (m.example == "polydisc") {
    t = make_polydisc(m.n);
  } else if (m.example == "bilateral_counterexample") {
    t = make_bilateral_counterexample();
  } else if (m.example == "unilateral_bilateral") {
    t = make_unilateral_bilateral();
  } else if (m.example == "doubly_noncommuting") {
    t = make_doubly_noncommuting(unit_root);
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown example \"" + m.example + "\"");
  }
  const std::string text = canonical(to_json(SpecFile{t, subset, std::nullopt}));
  if (c.out.empty())
    std::cout << text;
  else
    write_file(c.out, text);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twistctl: verification and constructions for doubly twisted tuples"};
  app.require_subcommand(1);

  Common verify_c, wold_c, model_c, extend_c, braid_c, make_c;
  std::vector<std::string> only;
  bool emit_bases = false;
  std::vector<std::size_t> subset;
  int braid_n = 3;
  std::vector<int> braid_dims;
  MakeArgs make_args;

  auto* verify = app.add_subcommand("verify", "run the relation checks");
  add_common(verify, verify_c);
  verify->add_option("--checks", only, "restrict to these checks")->delimiter(',');

  auto* wold = app.add_subcommand("wold", "existence test and Wold decomposition");
  add_common(wold, wold_c);
  wold->add_flag("--emit-bases", emit_bases, "include per-degree bases of every summand");

  auto* model = app.add_subcommand("model", "transport a summand to its Fock model");
  add_common(model, model_c);
  model->add_option("--subset", subset, "the subset A")->delimiter(',');
  model->add_option("--out", model_c.out, "write the model spec here");

  auto* extend = app.add_subcommand("extend", "build the unitary extension");
  add_common(extend, extend_c);
  extend->add_option("--out", extend_c.out, "write the extension spec here");

  auto* braid = app.add_subcommand("braid", "braid identity of the iterated flips");
  add_common(braid, braid_c);
  braid->add_option("--n", braid_n, "largest level")->check(CLI::PositiveNumber);
  braid->add_option("--dims", braid_dims, "use coordinate swaps on these fiber dimensions")->delimiter(',');

  auto* make = app.add_subcommand("make", "emit a fixture spec");
  make->add_option("example", make_args.example, "fixture name")
      ->required()
      ->check(CLI::IsMember({"c3_permutation", "m2_hardy", "fock_model", "polydisc", "bilateral_counterexample",
                             "unilateral_bilateral", "doubly_noncommuting"}));
  make->add_option("--seed", make_args.seed, "seed for sampled cores");
  make->add_option("--k", make_args.k, "rank of a Fock model");
  make->add_option("--subset", make_args.subset, "A for a Fock model")->delimiter(',');
  make->add_option("--n", make_args.n, "polydisc rank");
  make->add_option("--angle", make_args.angle, "lambda or z = exp(i pi angle)");
  make->add_option("--out", make_c.out, "write the spec here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInput;
  }

  try {
    if (*verify) return cmd_verify(verify_c, verify, only);
    if (*wold) return cmd_wold(wold_c, wold, emit_bases);
    if (*model) return cmd_model(model_c, model, subset);
    if (*extend) return cmd_extend(extend_c, extend);
    if (*braid) return cmd_braid(braid_c, braid_n, braid_dims);
    if (*make) return cmd_make(make_args, make_c);
  } catch (const Error& e) {
    std::fprintf(stderr, "twistctl: %s\n", e.what());
    switch (e.kind()) {
      case ErrorKind::Precondition:
      case ErrorKind::Degenerate:
        return kFail;
      default:
        return kInput;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "twistctl: %s\n", e.what());
    return kInput;
  }
  return kInput;
}
