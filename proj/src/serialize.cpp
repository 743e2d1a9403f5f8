#include "twist/serialize.hpp"

#include "twist/errors.hpp"

namespace tw {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::Schema, (path.empty() ? "/" : path) + ": " + msg);
}

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(path, std::string("missing key \"") + key + "\"");
  return *it;
}

long as_long(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<long>();
}

std::size_t as_index(const json& j, const std::string& path, std::size_t bound) {
  const long v = as_long(j, path);
  if (v < 0 || static_cast<std::size_t>(v) >= bound) schema(path, "index out of range");
  return static_cast<std::size_t>(v);
}

std::vector<long> long_list(const json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array");
  std::vector<long> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(as_long(j[k], path + "/" + std::to_string(k)));
  return out;
}

const char* backend_name(const GradedSpace& s) {
  if (s.rank == 0) return "dense";
  return s.is_signed ? "lattice-signed" : "lattice-unsigned";
}

// Collects the named matrices of a tuple, disambiguating clashing names.
class MatrixTable {
 public:
  std::string add(std::string name, const Mat& m) {
    if (name.empty()) name = "m";
    std::string key = name;
    for (int n = 2;; ++n) {
      auto it = mats_.find(key);
      if (it == mats_.end()) {
        mats_.emplace(key, m);
        return key;
      }
      if (it->second.rows() == m.rows() && it->second.cols() == m.cols() && it->second == m) return key;
      key = name + "~" + std::to_string(n);
    }
  }
  json dump() const {
    json out = json::object();
    for (const auto& [k, m] : mats_) out[k] = mat_json(m);
    return out;
  }

 private:
  std::map<std::string, Mat> mats_;
};

json op_json(const LatticeOperator& op, MatrixTable& mats) {
  json terms = json::array();
  for (const auto& term : op.terms()) {
    json jt;
    jt["offset"] = term.offset;
    jt["coeff"] = cplx_json(term.coeff);
    json guards = json::array();
    for (const auto& g : term.guards) guards.push_back({{"coord", g.coord}, {"bound", g.bound}, {"lower", g.lower}});
    jt["guards"] = guards;
    json factors = json::array();
    for (const auto& f : term.factors)
      factors.push_back(
          {{"name", mats.add(f.name, f.m)}, {"exponent", {{"coeffs", f.exp.coeffs}, {"const", f.exp.constant}}}});
    jt["factors"] = factors;
    terms.push_back(jt);
  }
  return {{"terms", terms}};
}

LatticeOperator op_from_json(const json& j, const GradedSpace& s, const std::map<std::string, Mat>& mats,
                             const std::string& path) {
  auto lookup = [&](const json& name, const std::string& p) -> std::pair<std::string, Mat> {
    if (!name.is_string()) schema(p, "expected a matrix name");
    auto it = mats.find(name.get<std::string>());
    if (it == mats.end()) schema(p, "undeclared matrix \"" + name.get<std::string>() + "\"");
    return *it;
  };
  if (j.is_object() && j.contains("matrix")) {
    const auto [name, m] = lookup(j["matrix"], path + "/matrix");
    if (m.rows() != s.fiber || m.cols() != s.fiber) schema(path + "/matrix", "matrix does not match the fiber");
    return LatticeOperator::constant(s, m, name);
  }
  const json& jterms = field(j, "terms", path);
  if (!jterms.is_array()) schema(path + "/terms", "expected an array");
  std::vector<Term> terms;
  for (std::size_t k = 0; k < jterms.size(); ++k) {
    const std::string tp = path + "/terms/" + std::to_string(k);
    const json& jt = jterms[k];
    Term term;
    term.offset = long_list(field(jt, "offset", tp), tp + "/offset");
    if (term.offset.size() != s.rank) schema(tp + "/offset", "offset length differs from the lattice rank");
    if (jt.contains("coeff")) term.coeff = cplx_from_json(jt["coeff"], tp + "/coeff");
    if (jt.contains("guards")) {
      const json& jg = jt["guards"];
      if (!jg.is_array()) schema(tp + "/guards", "expected an array");
      for (std::size_t g = 0; g < jg.size(); ++g) {
        const std::string gp = tp + "/guards/" + std::to_string(g);
        Guard guard;
        guard.coord = as_index(field(jg[g], "coord", gp), gp + "/coord", s.rank);
        guard.bound = as_long(field(jg[g], "bound", gp), gp + "/bound");
        const json& lower = field(jg[g], "lower", gp);
        if (!lower.is_boolean()) schema(gp + "/lower", "expected a boolean");
        guard.lower = lower.get<bool>();
        term.guards.push_back(guard);
      }
    }
    const json& jf = field(jt, "factors", tp);
    if (!jf.is_array()) schema(tp + "/factors", "expected an array");
    for (std::size_t f = 0; f < jf.size(); ++f) {
      const std::string fp = tp + "/factors/" + std::to_string(f);
      auto [name, m] = lookup(field(jf[f], "name", fp), fp + "/name");
      if (m.rows() != s.fiber || m.cols() != s.fiber) schema(fp + "/name", "matrix does not match the fiber");
      Factor factor{name, m, Affine::fixed(s.rank, 1)};
      if (jf[f].contains("exponent")) {
        const json& je = jf[f]["exponent"];
        const std::string ep = fp + "/exponent";
        factor.exp.coeffs = long_list(field(je, "coeffs", ep), ep + "/coeffs");
        if (factor.exp.coeffs.size() != s.rank) schema(ep + "/coeffs", "length differs from the lattice rank");
        factor.exp.constant = as_long(field(je, "const", ep), ep + "/const");
      }
      term.factors.push_back(std::move(factor));
    }
    terms.push_back(std::move(term));
  }
  return LatticeOperator(s, std::move(terms));
}

const char* kind_name(AlgebraKind k) {
  switch (k) {
    case AlgebraKind::Scalar: return "scalar";
    case AlgebraKind::Diagonal: return "diagonal";
    case AlgebraKind::Matrix: return "matrix";
  }
  return "scalar";
}

}  // namespace

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    schema(path, "expected a complex number [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json mat_json(const Mat& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(cplx_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Mat mat_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema(path, "expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) schema(path + "/0", "expected a non-empty row");
  Mat m(static_cast<long>(j.size()), static_cast<long>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rp = path + "/" + std::to_string(r);
    if (!j[r].is_array() || j[r].size() != cols) schema(rp, "ragged row");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<long>(r), static_cast<long>(c)) = cplx_from_json(j[r][c], rp + "/" + std::to_string(c));
  }
  return m;
}

json to_json(const TwistedTuple& t) { return to_json(SpecFile{t, std::nullopt, std::nullopt}); }

json to_json(const SpecFile& spec) {
  const TwistedTuple& t = spec.tuple;
  const GradedSpace& s = t.space();
  MatrixTable mats;
  json j;
  j["format"] = "twisted-tuple";
  j["version"] = kSpecVersion;
  j["label"] = t.label;
  j["rank"] = t.rank();
  j["backend"] = backend_name(s);
  j["lattice_rank"] = s.rank;
  j["fiber"] = s.fiber;
  j["fiber_dims"] = t.fibers().dims();
  json ops = json::object();
  json S = json::array();
  for (std::size_t i = 0; i < t.rank(); ++i) {
    json row = json::array();
    for (long a = 0; a < t.fibers().dim(i); ++a) {
      const std::string name = "S" + std::to_string(i) + "_" + std::to_string(a);
      ops[name] = op_json(t.S(i, static_cast<std::size_t>(a)), mats);
      row.push_back(name);
    }
    S.push_back(row);
  }
  j["S"] = S;
  json twists = json::array();
  json flips = json::array();
  for (std::size_t i = 0; i < t.rank(); ++i)
    for (std::size_t l = i + 1; l < t.rank(); ++l) {
      if (t.has_twist(i, l)) {
        const std::string name = "U" + std::to_string(i) + "_" + std::to_string(l);
        ops[name] = op_json(t.twist(i, l), mats);
        twists.push_back({{"i", i}, {"j", l}, {"op", name}});
      }
      if (t.fibers().has_flip(i, l))
        flips.push_back({{"i", i}, {"j", l}, {"matrix", mats.add("t" + std::to_string(i) + "_" + std::to_string(l),
                                                                  t.fibers().flip(i, l))}});
    }
  j["twists"] = twists;
  j["flips"] = flips;
  json alg;
  alg["kind"] = kind_name(t.algebra.kind);
  alg["n"] = t.algebra.n;
  json sigma = json::array();
  for (std::size_t c = 0; c < t.algebra.sigma.size(); ++c) {
    const std::string name = "sigma" + std::to_string(c);
    ops[name] = op_json(t.algebra.sigma[c], mats);
    sigma.push_back(name);
  }
  alg["sigma"] = sigma;
  json alpha = json::array();
  for (std::size_t i = 0; i < t.algebra.alpha.size(); ++i) alpha.push_back(mats.add("alpha" + std::to_string(i), t.algebra.alpha[i]));
  alg["alpha"] = alpha;
  j["algebra"] = alg;
  j["operators"] = ops;
  j["matrices"] = mats.dump();
  if (spec.subset) j["subset"] = *spec.subset;
  if (spec.window) j["window"] = *spec.window;
  return j;
}

SpecFile spec_from_json(const json& j) {
  if (!j.is_object()) schema("", "expected an object");
  const json& jf = field(j, "format", "");
  if (!jf.is_string() || jf.get<std::string>() != "twisted-tuple") schema("/format", "expected \"twisted-tuple\"");
  if (as_long(field(j, "version", ""), "/version") != kSpecVersion) schema("/version", "unsupported version");
  const long k = as_long(field(j, "rank", ""), "/rank");
  if (k < 0) schema("/rank", "negative rank");
  const json& jb = field(j, "backend", "");
  if (!jb.is_string()) schema("/backend", "expected a string");
  const std::string backend = jb.get<std::string>();
  GradedSpace s;
  s.fiber = as_long(field(j, "fiber", ""), "/fiber");
  if (s.fiber < 1) schema("/fiber", "fiber dimension must be positive");
  if (backend == "dense") {
    s.rank = 0;
  } else if (backend == "lattice-unsigned" || backend == "lattice-signed") {
    const long r = as_long(field(j, "lattice_rank", ""), "/lattice_rank");
    if (r < 1) schema("/lattice_rank", "lattice backends need rank >= 1");
    s.rank = static_cast<std::size_t>(r);
    s.is_signed = backend == "lattice-signed";
  } else {
    schema("/backend", "unknown backend \"" + backend + "\"");
  }
  const std::vector<long> dims_l = long_list(field(j, "fiber_dims", ""), "/fiber_dims");
  if (dims_l.size() != static_cast<std::size_t>(k)) schema("/fiber_dims", "length differs from rank");
  std::vector<int> dims;
  for (long d : dims_l) {
    if (d < 1) schema("/fiber_dims", "fiber dimensions must be positive");
    dims.push_back(static_cast<int>(d));
  }
  std::map<std::string, Mat> mats;
  if (j.contains("matrices")) {
    const json& jm = j["matrices"];
    if (!jm.is_object()) schema("/matrices", "expected an object");
    for (const auto& [name, m] : jm.items()) mats.emplace(name, mat_from_json(m, "/matrices/" + name));
  }
  const json empty_ops = json::object();
  const json& jops = j.contains("operators") ? j["operators"] : empty_ops;
  if (!jops.is_object()) schema("/operators", "expected an object");
  auto op_named = [&](const json& name, const std::string& p) {
    if (!name.is_string()) schema(p, "expected an operator name");
    const std::string n = name.get<std::string>();
    if (!jops.contains(n)) schema(p, "undeclared operator \"" + n + "\"");
    return op_from_json(jops[n], s, mats, "/operators/" + n);
  };

  FiberSpec fibers(dims);
  if (j.contains("flips")) {
    const json& jf = j["flips"];
    if (!jf.is_array()) schema("/flips", "expected an array");
    for (std::size_t f = 0; f < jf.size(); ++f) {
      const std::string fp = "/flips/" + std::to_string(f);
      const std::size_t i = as_index(field(jf[f], "i", fp), fp + "/i", static_cast<std::size_t>(k));
      const std::size_t l = as_index(field(jf[f], "j", fp), fp + "/j", static_cast<std::size_t>(k));
      const json& name = field(jf[f], "matrix", fp);
      if (!name.is_string() || !mats.count(name.get<std::string>())) schema(fp + "/matrix", "undeclared matrix");
      try {
        fibers.set_flip(i, l, mats.at(name.get<std::string>()));
      } catch (const Error& e) {
        schema(fp, e.what());
      }
    }
  }

  const json& jS = field(j, "S", "");
  if (!jS.is_array() || jS.size() != static_cast<std::size_t>(k)) schema("/S", "expected one row per coordinate");
  std::vector<std::vector<LatticeOperator>> S;
  for (std::size_t i = 0; i < jS.size(); ++i) {
    const std::string rp = "/S/" + std::to_string(i);
    if (!jS[i].is_array() || jS[i].size() != static_cast<std::size_t>(dims[i]))
      schema(rp, "expected one operator per fiber basis vector");
    std::vector<LatticeOperator> row;
    for (std::size_t a = 0; a < jS[i].size(); ++a) row.push_back(op_named(jS[i][a], rp + "/" + std::to_string(a)));
    S.push_back(std::move(row));
  }
  SpecFile out;
  out.tuple = TwistedTuple(fibers, s, std::move(S));
  if (j.contains("label") && j["label"].is_string()) out.tuple.label = j["label"].get<std::string>();

  if (j.contains("twists")) {
    const json& jt = j["twists"];
    if (!jt.is_array()) schema("/twists", "expected an array");
    for (std::size_t f = 0; f < jt.size(); ++f) {
      const std::string tp = "/twists/" + std::to_string(f);
      const std::size_t i = as_index(field(jt[f], "i", tp), tp + "/i", static_cast<std::size_t>(k));
      const std::size_t l = as_index(field(jt[f], "j", tp), tp + "/j", static_cast<std::size_t>(k));
      if (i == l) schema(tp, "twist requires i != j");
      out.tuple.set_twist(i, l, op_named(field(jt[f], "op", tp), tp + "/op"));
    }
  }

  if (j.contains("algebra")) {
    const json& ja = j["algebra"];
    const json& jk = field(ja, "kind", "/algebra");
    const std::string kind = jk.is_string() ? jk.get<std::string>() : "";
    AlgebraSpec& alg = out.tuple.algebra;
    if (kind == "scalar")
      alg.kind = AlgebraKind::Scalar;
    else if (kind == "diagonal")
      alg.kind = AlgebraKind::Diagonal;
    else if (kind == "matrix")
      alg.kind = AlgebraKind::Matrix;
    else
      schema("/algebra/kind", "expected scalar, diagonal or matrix");
    alg.n = ja.contains("n") ? as_long(ja["n"], "/algebra/n") : 1;
    if (alg.n < 1) schema("/algebra/n", "must be positive");
    alg.sigma.clear();
    const json& js = field(ja, "sigma", "/algebra");
    if (!js.is_array()) schema("/algebra/sigma", "expected an array");
    for (std::size_t c = 0; c < js.size(); ++c) alg.sigma.push_back(op_named(js[c], "/algebra/sigma/" + std::to_string(c)));
    if (static_cast<long>(alg.sigma.size()) != alg.basis_size())
      schema("/algebra/sigma", "expected one operator per algebra basis element");
    alg.alpha.clear();
    if (ja.contains("alpha")) {
      const json& jal = ja["alpha"];
      if (!jal.is_array()) schema("/algebra/alpha", "expected an array");
      for (std::size_t i = 0; i < jal.size(); ++i) {
        const std::string ap = "/algebra/alpha/" + std::to_string(i);
        if (!jal[i].is_string() || !mats.count(jal[i].get<std::string>())) schema(ap, "undeclared matrix");
        const Mat& m = mats.at(jal[i].get<std::string>());
        if (m.rows() != alg.basis_size() || m.cols() != alg.basis_size()) schema(ap, "automorphism has the wrong size");
        alg.alpha.push_back(m);
      }
    }
  }
  if (j.contains("subset")) {
    IndexSet A;
    for (long v : long_list(j["subset"], "/subset")) {
      if (v < 0 || v >= k) schema("/subset", "index out of range");
      A.push_back(static_cast<std::size_t>(v));
    }
    out.subset = A;
  }
  if (j.contains("window")) out.window = as_long(j["window"], "/window");
  return out;
}

SpecFile parse_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Schema, std::string("parse error: ") + e.what());
  }
  return spec_from_json(j);
}

std::string canonical(const json& j) { return j.dump(2) + "\n"; }

json report_json(const CheckReport& r) {
  return {{"name", r.name}, {"pass", r.pass}, {"worst", r.worst}, {"where", r.where}, {"notes", r.notes}};
}

json report_json(const WindowReport& r) {
  return {{"pass", r.pass}, {"worst", r.worst}, {"degree", r.degree}, {"fiber_index", r.fiber_index}};
}

json report_json(const HexagonReport& r) {
  json cells = json::array();
  for (const auto& c : r.cells) cells.push_back({{"i", c.i}, {"j", c.j}, {"l", c.l}, {"n", c.n}, {"deviation", c.deviation}});
  json out = {{"pass", r.pass}, {"max_deviation", r.max_deviation}, {"cells", cells}};
  if (r.first_violation)
    out["first_violation"] = {{"i", r.first_violation->i}, {"j", r.first_violation->j}, {"l", r.first_violation->l}, {"n", r.first_violation->n}};
  return out;
}

json report_json(const ExistenceReport& r) {
  json out = {{"exists", r.exists}, {"worst", r.worst}};
  if (!r.exists)
    out["witness"] = {{"i", r.i}, {"j", r.j}, {"alpha", r.alpha}, {"degree", r.degree}, {"text", r.witness}};
  return out;
}

json report_json(const EquivalenceReport& r) {
  return {{"pass", r.pass},
          {"checks", json::array({report_json(r.gram), report_json(r.ops), report_json(r.sigma), report_json(r.twists)})},
          {"notes", r.notes}};
}

json report_json(const ExtensionReport& r) {
  json checks = json::array();
  for (const CheckReport* c : {&r.restriction, &r.unitary, &r.relations, &r.twisted, &r.doubly_twisted, &r.sigma,
                               &r.continuation, &r.minimality})
    checks.push_back(report_json(*c));
  return {{"pass", r.pass}, {"implication_holds", r.implication_holds}, {"checks", checks}, {"notes", r.notes}};
}

json bases_json(const GradedSubspace& s) {
  json out = json::object();
  for (const auto& [n, b] : s.basis)
    if (b.cols() > 0) out[degree_str(n)] = mat_json(b);
  return out;
}

}  // namespace tw
