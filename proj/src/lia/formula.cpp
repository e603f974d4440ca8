#include "loopwatch/lia/formula.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_map>

namespace lw::lia {

namespace {

struct Interner {
  std::mutex mu;
  std::vector<std::string> names;
  std::unordered_map<std::string, VarId> ids;
};

Interner& interner() {
  static Interner it;
  return it;
}

}  // namespace

VarId intern(const std::string& name) {
  auto& it = interner();
  std::lock_guard<std::mutex> lock(it.mu);
  auto pos = it.ids.find(name);
  if (pos != it.ids.end()) return pos->second;
  VarId id = static_cast<VarId>(it.names.size());
  it.names.push_back(name);
  it.ids.emplace(name, id);
  return id;
}

const std::string& var_name(VarId v) {
  auto& it = interner();
  std::lock_guard<std::mutex> lock(it.mu);
  return it.names.at(static_cast<size_t>(v));
}

VarId fresh_var(const std::string& prefix) {
  auto& it = interner();
  std::lock_guard<std::mutex> lock(it.mu);
  for (int n = 0;; ++n) {
    std::string cand = prefix + (n == 0 ? "" : "$" + std::to_string(n));
    if (!it.ids.count(cand)) {
      VarId id = static_cast<VarId>(it.names.size());
      it.names.push_back(cand);
      it.ids.emplace(cand, id);
      return id;
    }
  }
}

LinExpr LinExpr::var(VarId v, Int coeff) {
  LinExpr e;
  if (coeff != 0) e.terms.emplace_back(v, std::move(coeff));
  return e;
}

Int LinExpr::coeff_of(VarId v) const {
  for (const auto& [w, c] : terms)
    if (w == v) return c;
  return 0;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  std::vector<std::pair<VarId, Int>> merged;
  merged.reserve(terms.size() + o.terms.size());
  size_t i = 0, j = 0;
  while (i < terms.size() || j < o.terms.size()) {
    if (j == o.terms.size() || (i < terms.size() && terms[i].first < o.terms[j].first)) {
      merged.push_back(terms[i++]);
    } else if (i == terms.size() || o.terms[j].first < terms[i].first) {
      merged.push_back(o.terms[j++]);
    } else {
      Int c = terms[i].second + o.terms[j].second;
      if (c != 0) merged.emplace_back(terms[i].first, std::move(c));
      ++i, ++j;
    }
  }
  terms = std::move(merged);
  k0 += o.k0;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  LinExpr neg = o;
  neg *= Int(-1);
  return *this += neg;
}

LinExpr& LinExpr::operator*=(const Int& c) {
  if (c == 0) {
    terms.clear();
    k0 = 0;
    return *this;
  }
  for (auto& [v, cv] : terms) cv *= c;
  k0 *= c;
  return *this;
}

LinExpr LinExpr::substitute(const std::map<VarId, LinExpr>& m) const {
  LinExpr out{k0};
  for (const auto& [v, c] : terms) {
    auto pos = m.find(v);
    if (pos == m.end()) {
      out += LinExpr::var(v, c);
    } else {
      LinExpr sub = pos->second;
      sub *= c;
      out += sub;
    }
  }
  return out;
}

Int LinExpr::eval(const std::map<VarId, Int>& env) const {
  Int acc = k0;
  for (const auto& [v, c] : terms) {
    auto pos = env.find(v);
    if (pos == env.end())
      throw std::runtime_error("LinExpr::eval: unassigned variable " + var_name(v));
    acc += c * pos->second;
  }
  return acc;
}

std::string LinExpr::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : terms) {
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    Int a = abs(c);
    if (a != 1) os << a.get_str() << "*";
    os << var_name(v);
    first = false;
  }
  if (first) {
    os << k0.get_str();
  } else if (k0 != 0) {
    Int a = abs(k0);
    os << (k0 > 0 ? " + " : " - ") << a.get_str();
  }
  return os.str();
}

namespace {

NodePtr mk(Node n) { return std::make_shared<const Node>(std::move(n)); }

NodePtr true_node() {
  static NodePtr n = mk(Node{.kind = Kind::True});
  return n;
}
NodePtr false_node() {
  static NodePtr n = mk(Node{.kind = Kind::False});
  return n;
}

}  // namespace

NodePtr Formula::ftrue_node() { return true_node(); }

Formula ftrue() { return Formula(true_node()); }
Formula ffalse() { return Formula(false_node()); }

Formula make_atom(LinExpr e, Rel rel) {
  if (e.is_const()) {
    bool v = rel == Rel::Le ? e.k0 <= 0 : rel == Rel::Eq ? e.k0 == 0 : e.k0 != 0;
    return v ? ftrue() : ffalse();
  }
  // Normalize by the gcd of the variable coefficients.
  Int g = 0;
  for (const auto& [v, c] : e.terms) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g > 1) {
    if (rel == Rel::Le) {
      // g*t + k0 <= 0  <=>  t <= floor(-k0/g)  <=>  t + ceil(k0/g) <= 0
      for (auto& [v, c] : e.terms) c /= g;
      Int q;
      mpz_cdiv_q(q.get_mpz_t(), e.k0.get_mpz_t(), g.get_mpz_t());
      e.k0 = q;
    } else {
      if (e.k0 % g != 0) return rel == Rel::Eq ? ffalse() : ftrue();
      for (auto& [v, c] : e.terms) c /= g;
      e.k0 /= g;
    }
  }
  // Canonical sign for Eq/Ne: leading coefficient positive.
  if (rel != Rel::Le && e.terms.front().second < 0) e *= Int(-1);
  Node n{.kind = Kind::Atom, .rel = rel};
  n.expr = std::move(e);
  return Formula(mk(std::move(n)));
}

Formula le(LinExpr e) { return make_atom(std::move(e), Rel::Le); }
Formula lt(LinExpr e) {
  e.k0 += 1;
  return make_atom(std::move(e), Rel::Le);
}
Formula eq(LinExpr e) { return make_atom(std::move(e), Rel::Eq); }
Formula ne(LinExpr e) { return make_atom(std::move(e), Rel::Ne); }
Formula ge(LinExpr e) { return le(-std::move(e)); }
Formula gt(LinExpr e) { return lt(-std::move(e)); }

Formula divides(Int d, LinExpr e) {
  if (d < 0) d = -d;
  if (d == 0) throw std::runtime_error("divides: zero divisor");
  if (d == 1) return ftrue();
  // Reduce coefficients into [0, d).
  bool all_zero = true;
  for (auto& [v, c] : e.terms) {
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
    if (c != 0) all_zero = false;
  }
  mpz_fdiv_r(e.k0.get_mpz_t(), e.k0.get_mpz_t(), d.get_mpz_t());
  if (all_zero) return e.k0 == 0 ? ftrue() : ffalse();
  e.terms.erase(std::remove_if(e.terms.begin(), e.terms.end(),
                               [](const auto& t) { return t.second == 0; }),
                e.terms.end());
  Node n{.kind = Kind::Div};
  n.divisor = std::move(d);
  n.expr = std::move(e);
  return Formula(mk(std::move(n)));
}

Formula fnot(const Formula& f) {
  switch (f.kind()) {
    case Kind::True:
      return ffalse();
    case Kind::False:
      return ftrue();
    case Kind::Atom: {
      const Node& n = f.node();
      switch (n.rel) {
        case Rel::Le: {
          LinExpr e = n.expr;
          e *= Int(-1);
          e.k0 += 1;  // !(e <= 0) <=> -e + 1 <= 0
          return make_atom(std::move(e), Rel::Le);
        }
        case Rel::Eq:
          return make_atom(n.expr, Rel::Ne);
        case Rel::Ne:
          return make_atom(n.expr, Rel::Eq);
      }
      break;
    }
    case Kind::Not:
      return Formula(f.node().kids[0]);
    default:
      break;
  }
  Node n{.kind = Kind::Not};
  n.kids = {f.ptr()};
  return Formula(mk(std::move(n)));
}

namespace {

Formula nary(Kind kind, std::vector<Formula> fs) {
  const bool is_and = kind == Kind::And;
  std::vector<NodePtr> kids;
  for (auto& f : fs) {
    if (is_and ? f.is_true() : f.is_false()) continue;
    if (is_and ? f.is_false() : f.is_true()) return is_and ? ffalse() : ftrue();
    if (f.kind() == kind) {
      for (const auto& k : f.node().kids) kids.push_back(k);
    } else {
      kids.push_back(f.ptr());
    }
  }
  if (kids.empty()) return is_and ? ftrue() : ffalse();
  if (kids.size() == 1) return Formula(kids[0]);
  Node n{.kind = kind};
  n.kids = std::move(kids);
  return Formula(mk(std::move(n)));
}

}  // namespace

Formula fand(std::vector<Formula> fs) { return nary(Kind::And, std::move(fs)); }
Formula fand(const Formula& a, const Formula& b) { return fand(std::vector<Formula>{a, b}); }
Formula for_(std::vector<Formula> fs) { return nary(Kind::Or, std::move(fs)); }
Formula for_(const Formula& a, const Formula& b) { return for_(std::vector<Formula>{a, b}); }

Formula exists(VarId v, const Formula& f) {
  if (f.is_true() || f.is_false() || !f.mentions(v)) return f;
  Node n{.kind = Kind::Exists, .bound = v};
  n.kids = {f.ptr()};
  return Formula(mk(std::move(n)));
}

Formula forall(VarId v, const Formula& f) {
  if (f.is_true() || f.is_false() || !f.mentions(v)) return f;
  Node n{.kind = Kind::Forall, .bound = v};
  n.kids = {f.ptr()};
  return Formula(mk(std::move(n)));
}

size_t Formula::node_count() const {
  size_t n = 1;
  for (const auto& k : p_->kids) n += Formula(k).node_count();
  return n;
}

namespace {

void collect_free(const Node& n, std::set<VarId>& bound, std::set<VarId>& out) {
  switch (n.kind) {
    case Kind::Atom:
    case Kind::Div:
      for (const auto& [v, c] : n.expr.terms)
        if (!bound.count(v)) out.insert(v);
      break;
    case Kind::Exists:
    case Kind::Forall: {
      bool inserted = bound.insert(n.bound).second;
      collect_free(*n.kids[0], bound, out);
      if (inserted) bound.erase(n.bound);
      break;
    }
    default:
      for (const auto& k : n.kids) collect_free(*k, bound, out);
  }
}

}  // namespace

std::vector<VarId> Formula::free_vars() const {
  std::set<VarId> bound, out;
  collect_free(*p_, bound, out);
  return {out.begin(), out.end()};
}

bool Formula::mentions(VarId v) const {
  auto fv = free_vars();
  return std::binary_search(fv.begin(), fv.end(), v);
}

namespace {

int cmp_int(const Int& a, const Int& b) { return cmp(a, b); }

int cmp_expr(const LinExpr& a, const LinExpr& b) {
  if (a.terms.size() != b.terms.size()) return a.terms.size() < b.terms.size() ? -1 : 1;
  for (size_t i = 0; i < a.terms.size(); ++i) {
    if (a.terms[i].first != b.terms[i].first)
      return a.terms[i].first < b.terms[i].first ? -1 : 1;
    if (int c = cmp_int(a.terms[i].second, b.terms[i].second)) return c;
  }
  return cmp_int(a.k0, b.k0);
}

int cmp_node(const Node& a, const Node& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case Kind::True:
    case Kind::False:
      return 0;
    case Kind::Atom:
      if (a.rel != b.rel) return a.rel < b.rel ? -1 : 1;
      return cmp_expr(a.expr, b.expr);
    case Kind::Div:
      if (int c = cmp_int(a.divisor, b.divisor)) return c;
      return cmp_expr(a.expr, b.expr);
    case Kind::Exists:
    case Kind::Forall:
      if (a.bound != b.bound) return a.bound < b.bound ? -1 : 1;
      return cmp_node(*a.kids[0], *b.kids[0]);
    default: {
      if (a.kids.size() != b.kids.size()) return a.kids.size() < b.kids.size() ? -1 : 1;
      for (size_t i = 0; i < a.kids.size(); ++i)
        if (int c = cmp_node(*a.kids[i], *b.kids[i])) return c;
      return 0;
    }
  }
}

}  // namespace

int Formula::compare(const Formula& a, const Formula& b) {
  return cmp_node(a.node(), b.node());
}

namespace {

Formula substitute_impl(const Formula& f, const std::map<VarId, LinExpr>& m) {
  const Node& n = f.node();
  switch (n.kind) {
    case Kind::True:
    case Kind::False:
      return f;
    case Kind::Atom:
      return make_atom(n.expr.substitute(m), n.rel);
    case Kind::Div:
      return divides(n.divisor, n.expr.substitute(m));
    case Kind::Not:
      return fnot(substitute_impl(Formula(n.kids[0]), m));
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      kids.reserve(n.kids.size());
      for (const auto& k : n.kids) kids.push_back(substitute_impl(Formula(k), m));
      return n.kind == Kind::And ? fand(std::move(kids)) : for_(std::move(kids));
    }
    case Kind::Exists:
    case Kind::Forall: {
      std::map<VarId, LinExpr> inner = m;
      inner.erase(n.bound);
      // Rename the binder if any substituted expression mentions it.
      VarId bound = n.bound;
      Formula body(n.kids[0]);
      bool capture = false;
      for (const auto& [v, e] : inner)
        if (e.mentions(bound)) capture = true;
      if (capture) {
        VarId nb = fresh_var(var_name(bound));
        std::map<VarId, LinExpr> ren{{bound, LinExpr::var(nb)}};
        body = substitute_impl(body, ren);
        bound = nb;
      }
      Formula sub = substitute_impl(body, inner);
      return n.kind == Kind::Exists ? exists(bound, sub) : forall(bound, sub);
    }
  }
  throw std::logic_error("substitute: bad node");
}

}  // namespace

Formula substitute(const Formula& f, const std::map<VarId, LinExpr>& m) {
  if (m.empty()) return f;
  return substitute_impl(f, m);
}

bool eval_qf(const Formula& f, const std::map<VarId, Int>& env) {
  const Node& n = f.node();
  switch (n.kind) {
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Atom: {
      Int v = n.expr.eval(env);
      return n.rel == Rel::Le ? v <= 0 : n.rel == Rel::Eq ? v == 0 : v != 0;
    }
    case Kind::Div: {
      Int v = n.expr.eval(env);
      return v % n.divisor == 0;
    }
    case Kind::Not:
      return !eval_qf(Formula(n.kids[0]), env);
    case Kind::And:
      for (const auto& k : n.kids)
        if (!eval_qf(Formula(k), env)) return false;
      return true;
    case Kind::Or:
      for (const auto& k : n.kids)
        if (eval_qf(Formula(k), env)) return true;
      return false;
    default:
      throw std::runtime_error("eval_qf: quantifier present");
  }
}

bool eval(const Formula& f, const std::map<VarId, Int>& env) {
  Formula g = eliminate_all(f);
  return eval_qf(g, env);
}

Formula nnf(const Formula& f) {
  const Node& n = f.node();
  switch (n.kind) {
    case Kind::True:
    case Kind::False:
    case Kind::Atom:
    case Kind::Div:
      return f;
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : n.kids) kids.push_back(nnf(Formula(k)));
      return n.kind == Kind::And ? fand(std::move(kids)) : for_(std::move(kids));
    }
    case Kind::Exists:
      return exists(n.bound, nnf(Formula(n.kids[0])));
    case Kind::Forall:
      return forall(n.bound, nnf(Formula(n.kids[0])));
    case Kind::Not: {
      const Node& c = *n.kids[0];
      switch (c.kind) {
        case Kind::True:
          return ffalse();
        case Kind::False:
          return ftrue();
        case Kind::Atom:
          return fnot(Formula(n.kids[0]));  // folds into the flipped atom
        case Kind::Div:
          return f;  // canonical negative literal
        case Kind::Not:
          return nnf(Formula(c.kids[0]));
        case Kind::And:
        case Kind::Or: {
          std::vector<Formula> kids;
          for (const auto& k : c.kids) kids.push_back(nnf(fnot(Formula(k))));
          return c.kind == Kind::And ? for_(std::move(kids)) : fand(std::move(kids));
        }
        case Kind::Exists:
          return forall(c.bound, nnf(fnot(Formula(c.kids[0]))));
        case Kind::Forall:
          return exists(c.bound, nnf(fnot(Formula(c.kids[0]))));
      }
    }
  }
  throw std::logic_error("nnf: bad node");
}

Formula wrap_encoding(VarId wrapped, const LinExpr& e, int bits, bool is_signed) {
  Int width = Int(1) << bits;
  LinExpr w = LinExpr::var(wrapped);
  Formula lo = ge(w - LinExpr(type_min(bits, is_signed)));
  Formula hi = le(w - LinExpr(type_max(bits, is_signed)));
  Formula congruent = divides(width, e - w);
  return fand({lo, hi, congruent});
}

Int type_min(int bits, bool is_signed) {
  if (!is_signed) return 0;
  return -(Int(1) << (bits - 1));
}

Int type_max(int bits, bool is_signed) {
  if (!is_signed) return (Int(1) << bits) - 1;
  return (Int(1) << (bits - 1)) - 1;
}

}  // namespace lw::lia
