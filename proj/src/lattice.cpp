#include "twist/lattice.hpp"

#include "twist/errors.hpp"

#include <algorithm>
#include <sstream>

namespace tw {

Affine Affine::fixed(std::size_t rank, long c) { return Affine{std::vector<long>(rank, 0), c}; }

Affine Affine::coord(std::size_t rank, std::size_t c, long scale, long offset) {
  Affine a = fixed(rank, offset);
  a.coeffs.at(c) = scale;
  return a;
}

long Affine::eval(const Degree& n) const {
  long v = constant;
  for (std::size_t c = 0; c < coeffs.size(); ++c) v += coeffs[c] * n[c];
  return v;
}

bool Affine::is_constant() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](long x) { return x == 0; });
}

Affine Affine::shifted(const Degree& s) const {
  Affine a = *this;
  a.constant = eval(s);
  return a;
}

bool Term::applies(const Degree& n) const {
  return std::all_of(guards.begin(), guards.end(), [&](const Guard& g) { return g.holds(n); });
}

Mat Term::block(const Degree& n, long fiber) const {
  Mat b = Mat::Identity(fiber, fiber);
  for (const auto& f : factors) {
    const long e = f.exp.eval(n);
    if (e == 1)
      b = b * f.m;
    else if (e != 0)
      b = b * mat_pow(f.m, e);
  }
  return coeff * b;
}

bool Term::same_shape(const Term& o) const {
  if (offset != o.offset || guards != o.guards || factors.size() != o.factors.size()) return false;
  for (std::size_t k = 0; k < factors.size(); ++k)
    if (factors[k].name != o.factors[k].name || !(factors[k].exp == o.factors[k].exp)) return false;
  return true;
}

bool GradedSpace::admits(const Degree& n) const {
  if (n.size() != rank) return false;
  if (is_signed) return true;
  return std::all_of(n.begin(), n.end(), [](long x) { return x >= 0; });
}

void Graded::accumulate(const Degree& n, const Mat& b) {
  auto it = blocks.find(n);
  if (it == blocks.end())
    blocks.emplace(n, b);
  else
    it->second += b;
}

Graded& Graded::operator+=(const Graded& o) {
  if (o.rows != rows || o.cols != cols) throw Error(ErrorKind::ShapeMismatch, "graded add");
  for (const auto& [n, b] : o.blocks) accumulate(n, b);
  return *this;
}

Graded& Graded::operator-=(const Graded& o) {
  if (o.rows != rows || o.cols != cols) throw Error(ErrorKind::ShapeMismatch, "graded subtract");
  for (const auto& [n, b] : o.blocks) accumulate(n, -b);
  return *this;
}

Graded& Graded::operator*=(cplx c) {
  for (auto& kv : blocks) kv.second *= c;
  return *this;
}

Eigen::VectorXd Graded::column_norms2() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(cols);
  for (const auto& kv : blocks) out += kv.second.cwiseAbs2().colwise().sum().transpose();
  return out;
}

Graded Graded::columns(long start, long count) const {
  Graded g(rows, count);
  for (const auto& [n, b] : blocks) g.blocks.emplace(n, b.middleCols(start, count));
  return g;
}

namespace {

std::string toggle_star(const std::string& name) {
  if (!name.empty() && name.back() == '*') return name.substr(0, name.size() - 1);
  return name + "*";
}

// Sorts guards, keeps the tightest bound per (coord, direction) and drops
// lower guards implied by the unsigned lattice. Returns false when the guard
// set can never hold.
bool normalize_guards(std::vector<Guard>& guards, bool is_signed) {
  std::map<std::pair<std::size_t, bool>, long> tight;
  for (const auto& g : guards) {
    auto key = std::make_pair(g.coord, g.lower);
    auto it = tight.find(key);
    if (it == tight.end())
      tight[key] = g.bound;
    else
      it->second = g.lower ? std::max(it->second, g.bound) : std::min(it->second, g.bound);
  }
  guards.clear();
  for (const auto& [key, bound] : tight) {
    if (key.second && !is_signed && bound <= 0) continue;
    guards.push_back(Guard{key.first, bound, key.second});
  }
  for (const auto& lo : guards) {
    if (!lo.lower) continue;
    for (const auto& hi : guards)
      if (!hi.lower && hi.coord == lo.coord && hi.bound <= lo.bound) return false;
  }
  for (const auto& hi : guards)
    if (!hi.lower && !is_signed && hi.bound <= 0) return false;
  std::sort(guards.begin(), guards.end());
  return true;
}

// Folds runs of constant-exponent factors into a single constant factor.
std::vector<Factor> fold_constants(std::vector<Factor> fs, std::size_t rank) {
  std::vector<Factor> out;
  for (auto& f : fs) {
    if (f.exp.is_constant() && f.exp.constant == 0) continue;
    if (f.exp.is_constant() && !out.empty() && out.back().exp.is_constant()) {
      Factor& prev = out.back();
      const Mat lhs = prev.exp.constant == 1 ? prev.m : mat_pow(prev.m, prev.exp.constant);
      const Mat rhs = f.exp.constant == 1 ? f.m : mat_pow(f.m, f.exp.constant);
      prev.m = lhs * rhs;
      prev.name = "(" + prev.name + (prev.exp.constant == 1 ? "" : "^" + std::to_string(prev.exp.constant)) +
                  ")(" + f.name + (f.exp.constant == 1 ? "" : "^" + std::to_string(f.exp.constant)) + ")";
      prev.exp = Affine::fixed(rank, 1);
      continue;
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Term> merge_terms(std::vector<Term> terms, bool is_signed) {
  std::vector<Term> out;
  for (auto& t : terms) {
    if (!normalize_guards(t.guards, is_signed)) continue;
    if (t.coeff == cplx(0.0, 0.0)) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const Term& o) { return o.same_shape(t); });
    if (it == out.end())
      out.push_back(std::move(t));
    else
      it->coeff += t.coeff;
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const Term& t) { return t.coeff == cplx(0.0, 0.0); }),
            out.end());
  return out;
}

void check_same(const GradedSpace& a, const GradedSpace& b, const char* what) {
  if (!(a == b)) throw Error(ErrorKind::ShapeMismatch, std::string(what) + ": space mismatch");
}

}  // namespace

LatticeOperator::LatticeOperator(GradedSpace space, std::vector<Term> terms) : space_(space) {
  for (const auto& t : terms) {
    if (t.offset.size() != space_.rank) throw Error(ErrorKind::ShapeMismatch, "term offset rank");
    for (const auto& f : t.factors)
      if (f.m.rows() != space_.fiber || f.m.cols() != space_.fiber || f.exp.coeffs.size() != space_.rank)
        throw Error(ErrorKind::ShapeMismatch, "factor '" + f.name + "' shape");
    for (const auto& g : t.guards)
      if (g.coord >= space_.rank) throw Error(ErrorKind::ShapeMismatch, "guard coordinate");
  }
  terms_ = merge_terms(std::move(terms), space_.is_signed);
}

LatticeOperator LatticeOperator::zero(const GradedSpace& s) { return LatticeOperator(s, {}); }

LatticeOperator LatticeOperator::identity(const GradedSpace& s) {
  Term t;
  t.offset.assign(s.rank, 0);
  return LatticeOperator(s, {t});
}

LatticeOperator LatticeOperator::constant(const GradedSpace& s, const Mat& m, const std::string& name) {
  return monomial(s, Degree(s.rank, 0), {Factor{name, m, Affine::fixed(s.rank, 1)}});
}

LatticeOperator LatticeOperator::monomial(const GradedSpace& s, Degree offset, std::vector<Factor> factors,
                                          cplx coeff, std::vector<Guard> guards) {
  Term t;
  t.offset = std::move(offset);
  t.factors = fold_constants(std::move(factors), s.rank);
  t.coeff = coeff;
  t.guards = std::move(guards);
  return LatticeOperator(s, {t});
}

LatticeOperator dense(const Mat& m, const std::string& name) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::ShapeMismatch, "dense operator must be square");
  return LatticeOperator::constant(GradedSpace{0, m.rows(), false}, m, name);
}

Graded apply(const LatticeOperator& op, const Graded& v) {
  const GradedSpace& s = op.space();
  if (v.rows != s.fiber) throw Error(ErrorKind::ShapeMismatch, "apply: fiber mismatch");
  Graded out(v.rows, v.cols);
  Degree target(s.rank);
  for (const auto& t : op.terms()) {
    for (const auto& [n, b] : v.blocks) {
      if (n.size() != s.rank) throw Error(ErrorKind::ShapeMismatch, "apply: degree rank");
      if (!t.applies(n)) continue;
      for (std::size_t c = 0; c < s.rank; ++c) target[c] = n[c] + t.offset[c];
      if (!s.admits(target)) continue;
      out.accumulate(target, t.block(n, s.fiber) * b);
    }
  }
  return out;
}

LatticeOperator adjoint(const LatticeOperator& op) {
  const GradedSpace& s = op.space();
  std::vector<Term> terms;
  for (const auto& t : op.terms()) {
    Term a;
    a.offset.resize(s.rank);
    for (std::size_t c = 0; c < s.rank; ++c) a.offset[c] = -t.offset[c];
    a.coeff = std::conj(t.coeff);
    // Input degree n' of the adjoint corresponds to input n' - s of the original.
    Degree back(a.offset);
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it)
      a.factors.push_back(Factor{toggle_star(it->name), it->m.adjoint(), it->exp.shifted(back)});
    for (const auto& g : t.guards) a.guards.push_back(Guard{g.coord, g.bound + t.offset[g.coord], g.lower});
    // On an unsigned lattice the original input n' - s must itself be a valid degree.
    if (!s.is_signed)
      for (std::size_t c = 0; c < s.rank; ++c)
        if (t.offset[c] > 0) a.guards.push_back(Guard{c, t.offset[c], true});
    terms.push_back(std::move(a));
  }
  return LatticeOperator(s, std::move(terms));
}

LatticeOperator compose(const LatticeOperator& a, const LatticeOperator& b) {
  check_same(a.space(), b.space(), "compose");
  const GradedSpace& s = a.space();
  std::vector<Term> terms;
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) {
      Term t;
      t.offset.resize(s.rank);
      for (std::size_t c = 0; c < s.rank; ++c) t.offset[c] = ta.offset[c] + tb.offset[c];
      t.coeff = ta.coeff * tb.coeff;
      t.guards = tb.guards;
      for (const auto& g : ta.guards) t.guards.push_back(Guard{g.coord, g.bound - tb.offset[g.coord], g.lower});
      if (!s.is_signed)
        for (std::size_t c = 0; c < s.rank; ++c)
          if (tb.offset[c] < 0) t.guards.push_back(Guard{c, -tb.offset[c], true});
      std::vector<Factor> fs;
      for (const auto& f : ta.factors) fs.push_back(Factor{f.name, f.m, f.exp.shifted(tb.offset)});
      for (const auto& f : tb.factors) fs.push_back(f);
      t.factors = fold_constants(std::move(fs), s.rank);
      terms.push_back(std::move(t));
    }
  return LatticeOperator(s, std::move(terms));
}

LatticeOperator add(const LatticeOperator& a, const LatticeOperator& b) {
  check_same(a.space(), b.space(), "add");
  std::vector<Term> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return LatticeOperator(a.space(), std::move(terms));
}

LatticeOperator scale(cplx c, const LatticeOperator& a) {
  std::vector<Term> terms = a.terms();
  for (auto& t : terms) t.coeff *= c;
  return LatticeOperator(a.space(), std::move(terms));
}

LatticeOperator power(const LatticeOperator& a, long e) {
  if (e < 0) throw Error(ErrorKind::InvalidInput, "operator power must be non-negative");
  LatticeOperator r = LatticeOperator::identity(a.space());
  for (long k = 0; k < e; ++k) r = compose(r, a);
  return r;
}

LatticeOperator operator*(const LatticeOperator& a, const LatticeOperator& b) { return compose(a, b); }
LatticeOperator operator+(const LatticeOperator& a, const LatticeOperator& b) { return add(a, b); }
LatticeOperator operator-(const LatticeOperator& a, const LatticeOperator& b) {
  return add(a, scale(-1.0, b));
}

LatticeOperator direct_sum(const LatticeOperator& a, const LatticeOperator& b) {
  const GradedSpace& sa = a.space();
  const GradedSpace& sb = b.space();
  if (sa.rank != sb.rank || sa.is_signed != sb.is_signed)
    throw Error(ErrorKind::ShapeMismatch, "direct_sum: lattice mismatch");
  const long da = sa.fiber, db = sb.fiber;
  GradedSpace s{sa.rank, da + db, sa.is_signed};
  auto pad = [&](const Term& t, bool first) {
    Term o = t;
    for (auto& f : o.factors) {
      Mat m = Mat::Identity(da + db, da + db);
      if (first)
        m.topLeftCorner(da, da) = f.m;
      else
        m.bottomRightCorner(db, db) = f.m;
      f.m = m;
      f.name = first ? f.name + "(+)I" : "I(+)" + f.name;
    }
    Mat p = Mat::Zero(da + db, da + db);
    if (first)
      p.topLeftCorner(da, da).setIdentity();
    else
      p.bottomRightCorner(db, db).setIdentity();
    o.factors.push_back(Factor{first ? "P_left" : "P_right", p, Affine::fixed(s.rank, 1)});
    o.factors = fold_constants(std::move(o.factors), s.rank);
    return o;
  };
  std::vector<Term> terms;
  for (const auto& t : a.terms()) terms.push_back(pad(t, true));
  for (const auto& t : b.terms()) terms.push_back(pad(t, false));
  return LatticeOperator(s, std::move(terms));
}

LatticeOperator embed_rank(const LatticeOperator& op, std::size_t new_rank,
                           const std::vector<std::size_t>& coord_map) {
  const GradedSpace& s0 = op.space();
  if (coord_map.size() != s0.rank) throw Error(ErrorKind::ShapeMismatch, "embed_rank: map length");
  GradedSpace s{new_rank, s0.fiber, s0.is_signed};
  std::vector<Term> terms;
  for (const auto& t : op.terms()) {
    Term o;
    o.offset.assign(new_rank, 0);
    o.coeff = t.coeff;
    for (std::size_t c = 0; c < s0.rank; ++c) o.offset.at(coord_map[c]) = t.offset[c];
    for (const auto& g : t.guards) o.guards.push_back(Guard{coord_map[g.coord], g.bound, g.lower});
    for (const auto& f : t.factors) {
      Affine e = Affine::fixed(new_rank, f.exp.constant);
      for (std::size_t c = 0; c < s0.rank; ++c) e.coeffs[coord_map[c]] = f.exp.coeffs[c];
      o.factors.push_back(Factor{f.name, f.m, e});
    }
    terms.push_back(std::move(o));
  }
  return LatticeOperator(s, std::move(terms));
}

std::vector<Degree> window_degrees(const GradedSpace& s, long N) {
  const long lo = s.is_signed ? -N : 0;
  std::vector<Degree> out;
  Degree n(s.rank, lo);
  while (true) {
    out.push_back(n);
    std::size_t c = s.rank;
    while (c > 0) {
      --c;
      if (n[c] < N) {
        ++n[c];
        break;
      }
      n[c] = lo;
      if (c == 0) return out;
    }
    if (s.rank == 0) return out;
  }
}

Graded window_basis(const GradedSpace& s, long N) {
  const auto degs = window_degrees(s, N);
  const long total = static_cast<long>(degs.size()) * s.fiber;
  Graded g(s.fiber, total);
  long col = 0;
  for (const auto& n : degs) {
    Mat b = Mat::Zero(s.fiber, total);
    b.middleCols(col, s.fiber).setIdentity();
    g.blocks.emplace(n, std::move(b));
    col += s.fiber;
  }
  return g;
}

WindowReport compare_maps(const LinMap& a, const LinMap& b, const GradedSpace& s, long N, double tol) {
  WindowReport rep;
  // One degree at a time keeps every block narrow: each chunk carries only
  // the fiber columns of a single input degree.
  for (const auto& n : window_degrees(s, N)) {
    Graded basis(s.fiber, s.fiber);
    basis.blocks.emplace(n, Mat::Identity(s.fiber, s.fiber));
    Graded diff = a(basis);
    diff -= b(basis);
    const Eigen::VectorXd n2 = diff.column_norms2();
    for (long c = 0; c < n2.size(); ++c) {
      const double dev = std::sqrt(n2(c));
      if (dev > rep.worst || rep.column < 0) {
        rep.worst = dev;
        rep.degree = n;
        rep.fiber_index = c;
        rep.column = c;
      }
    }
  }
  rep.pass = rep.worst <= tol;
  return rep;
}

WindowReport equal_on_window(const LatticeOperator& a, const LatticeOperator& b, long N, double tol) {
  check_same(a.space(), b.space(), "equal_on_window");
  return compare_maps([&](const Graded& v) { return apply(a, v); },
                      [&](const Graded& v) { return apply(b, v); }, a.space(), N, tol);
}

std::string degree_str(const Degree& n) {
  std::ostringstream os;
  os << '(';
  for (std::size_t c = 0; c < n.size(); ++c) os << (c ? "," : "") << n[c];
  os << ')';
  return os.str();
}

}  // namespace tw
