#include <algorithm>

#include "loopwatch/lia/formula.hpp"

// Cooper's decision procedure for Presburger arithmetic. Literals are kept
// in NNF with negation only over divisibility atoms; equalities and
// disequalities mentioning the eliminated variable are expanded into
// inequalities before the main construction.

namespace lw::lia {

namespace {

struct Counter {
  size_t used = 0;
  size_t cap = 0;
  void charge(size_t n) {
    used += n;
    if (cap && used > cap)
      throw BudgetExceeded("formula node budget exceeded (cap " +
                           std::to_string(cap) + ")");
  }
};

Int lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// Rewrites Eq/Ne atoms mentioning v into Le forms; keeps NNF shape.
Formula expand_eq_ne(const Formula& f, VarId v) {
  const Node& n = f.node();
  switch (n.kind) {
    case Kind::Atom: {
      if (!n.expr.mentions(v) || n.rel == Rel::Le) return f;
      if (n.rel == Rel::Eq) return fand(le(n.expr), le(-n.expr));
      LinExpr a = n.expr;
      a.k0 += 1;  // e + 1 <= 0  <=>  e < 0
      LinExpr b = -n.expr;
      b.k0 += 1;
      return for_(make_atom(std::move(a), Rel::Le), make_atom(std::move(b), Rel::Le));
    }
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : n.kids) kids.push_back(expand_eq_ne(Formula(k), v));
      return n.kind == Kind::And ? fand(std::move(kids)) : for_(std::move(kids));
    }
    default:
      return f;  // True/False/Div/Not(Div); quantifiers are gone by now
  }
}

// Multiplies every literal mentioning v so its v-coefficient is +/-m, then
// renames the scaled variable m*v to u (coefficient +/-1).
Formula scale_to_unit(const Formula& f, VarId v, const Int& m, VarId u) {
  const Node& n = f.node();
  switch (n.kind) {
    case Kind::Atom: {
      Int c = n.expr.coeff_of(v);
      if (c == 0) return f;
      Int lambda = m / abs(c);
      LinExpr e = n.expr;
      e *= lambda;  // positive multiplier keeps Le orientation
      LinExpr rest = e - LinExpr::var(v, e.coeff_of(v));
      Int sign = c > 0 ? 1 : -1;
      LinExpr out = rest + LinExpr::var(u, sign);
      Node nn{.kind = Kind::Atom, .rel = n.rel};
      nn.expr = std::move(out);
      return Formula(std::make_shared<const Node>(std::move(nn)));
    }
    case Kind::Div: {
      Int c = n.expr.coeff_of(v);
      if (c == 0) return f;
      LinExpr e = n.expr;
      Int d = n.divisor;
      if (c < 0) {
        e *= Int(-1);  // d | e  <=>  d | -e
        c = -c;
      }
      Int lambda = m / c;
      e *= lambda;
      d *= lambda;
      LinExpr rest = e - LinExpr::var(v, m);
      LinExpr out = rest + LinExpr::var(u, 1);
      Node nn{.kind = Kind::Div};
      nn.divisor = std::move(d);
      nn.expr = std::move(out);
      return Formula(std::make_shared<const Node>(std::move(nn)));
    }
    case Kind::Not:
      return fnot(scale_to_unit(Formula(n.kids[0]), v, m, u));
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : n.kids) kids.push_back(scale_to_unit(Formula(k), v, m, u));
      return n.kind == Kind::And ? fand(std::move(kids)) : for_(std::move(kids));
    }
    default:
      return f;
  }
}

// phi[u := e] for a variable u occurring with coefficients +/-1.
Formula subst_unit(const Formula& f, VarId u, const LinExpr& e) {
  const Node& n = f.node();
  switch (n.kind) {
    case Kind::Atom:
    case Kind::Div: {
      Int c = n.expr.coeff_of(u);
      if (c == 0) return f;
      LinExpr rest = n.expr - LinExpr::var(u, c);
      LinExpr scaled = e;
      scaled *= c;
      LinExpr out = rest + scaled;
      if (n.kind == Kind::Atom) return make_atom(std::move(out), n.rel);
      return divides(n.divisor, std::move(out));
    }
    case Kind::Not:
      return fnot(subst_unit(Formula(n.kids[0]), u, e));
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : n.kids) kids.push_back(subst_unit(Formula(k), u, e));
      return n.kind == Kind::And ? fand(std::move(kids)) : for_(std::move(kids));
    }
    default:
      return f;
  }
}

// Virtual substitution at -infinity (lower version): lower bounds (t < u)
// become false, upper bounds (u < t) become true; divisibility keeps u.
// The upper version (+infinity) flips the roles.
Formula subst_infinity(const Formula& f, VarId u, bool minus_inf) {
  const Node& n = f.node();
  switch (n.kind) {
    case Kind::Atom: {
      Int c = n.expr.coeff_of(u);
      if (c == 0) return f;
      // c = -1: lower bound (r <= u); c = +1: upper bound (u <= -r).
      bool is_lower = c < 0;
      return (is_lower == minus_inf) ? ffalse() : ftrue();
    }
    case Kind::Div:
      return f;
    case Kind::Not:
      return fnot(subst_infinity(Formula(n.kids[0]), u, minus_inf));
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : n.kids)
        kids.push_back(subst_infinity(Formula(k), u, minus_inf));
      return n.kind == Kind::And ? fand(std::move(kids)) : for_(std::move(kids));
    }
    default:
      return f;
  }
}

struct Literals {
  std::vector<LinExpr> lower;  // terms t with literal (t < u)
  std::vector<LinExpr> upper;  // terms t with literal (u < t)
  Int delta = 1;               // lcm of divisors of u-divisibility literals
};

void collect(const Formula& f, VarId u, Literals& out) {
  const Node& n = f.node();
  switch (n.kind) {
    case Kind::Atom: {
      Int c = n.expr.coeff_of(u);
      if (c == 0) return;
      LinExpr rest = n.expr - LinExpr::var(u, c);
      if (c < 0) {
        // -u + r <= 0  <=>  (r - 1) < u
        rest.k0 -= 1;
        out.lower.push_back(std::move(rest));
      } else {
        // u + r <= 0  <=>  u < (-r + 1)
        LinExpr t = -rest;
        t.k0 += 1;
        out.upper.push_back(std::move(t));
      }
      return;
    }
    case Kind::Div:
      if (n.expr.mentions(u)) out.delta = lcm(out.delta, n.divisor);
      return;
    default:
      for (const auto& k : n.kids) collect(Formula(k), u, out);
  }
}

void sort_dedupe(std::vector<LinExpr>& v) {
  auto less = [](const LinExpr& a, const LinExpr& b) {
    if (a.terms.size() != b.terms.size()) return a.terms.size() < b.terms.size();
    for (size_t i = 0; i < a.terms.size(); ++i) {
      if (a.terms[i].first != b.terms[i].first)
        return a.terms[i].first < b.terms[i].first;
      if (a.terms[i].second != b.terms[i].second)
        return a.terms[i].second < b.terms[i].second;
    }
    return a.k0 < b.k0;
  };
  std::sort(v.begin(), v.end(), less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

Formula eliminate_exists_qf(Formula f, VarId v, Counter& budget);

// Bottom-up elimination of every quantifier.
Formula eliminate_all_impl(const Formula& f, Counter& budget) {
  const Node& n = f.node();
  switch (n.kind) {
    case Kind::Exists: {
      Formula body = eliminate_all_impl(Formula(n.kids[0]), budget);
      return eliminate_exists_qf(std::move(body), n.bound, budget);
    }
    case Kind::Forall: {
      Formula body = eliminate_all_impl(Formula(n.kids[0]), budget);
      Formula neg = nnf(fnot(body));
      return simplify(fnot(eliminate_exists_qf(std::move(neg), n.bound, budget)));
    }
    case Kind::Not: {
      Formula c = eliminate_all_impl(Formula(n.kids[0]), budget);
      return fnot(c);
    }
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : n.kids) kids.push_back(eliminate_all_impl(Formula(k), budget));
      return n.kind == Kind::And ? fand(std::move(kids)) : for_(std::move(kids));
    }
    default:
      return f;
  }
}

// Tries exists-elimination through a toplevel equality conjunct a*v + r = 0:
// exists v. phi  <=>  (|a| divides r) and phi[v := -r/a].
std::optional<Formula> equality_shortcut(const Formula& f, VarId v, Counter& budget) {
  if (f.kind() != Kind::And && f.kind() != Kind::Atom) return std::nullopt;
  std::vector<NodePtr> conj;
  if (f.kind() == Kind::And)
    conj = f.node().kids;
  else
    conj = {f.ptr()};
  int best = -1;
  Int best_abs;
  for (size_t i = 0; i < conj.size(); ++i) {
    const Node& n = *conj[i];
    if (n.kind != Kind::Atom || n.rel != Rel::Eq) continue;
    Int c = n.expr.coeff_of(v);
    if (c == 0) continue;
    Int a = abs(c);
    if (best < 0 || a < best_abs) {
      best = static_cast<int>(i);
      best_abs = a;
    }
  }
  if (best < 0) return std::nullopt;
  const Node& eqn = *conj[static_cast<size_t>(best)];
  Int a = eqn.expr.coeff_of(v);
  LinExpr r = eqn.expr - LinExpr::var(v, a);
  Int sign = a > 0 ? 1 : -1;
  Int aa = abs(a);

  // Rewrite an atom c*v + s ~ 0 by multiplying with |a| and replacing
  // |a|*c*v with -c*sign(a)*r.
  auto rewrite = [&](auto&& self, const Formula& g) -> Formula {
    const Node& n = g.node();
    switch (n.kind) {
      case Kind::Atom:
      case Kind::Div: {
        Int c = n.expr.coeff_of(v);
        if (c == 0) return g;
        LinExpr rest = n.expr - LinExpr::var(v, c);
        rest *= aa;
        LinExpr rep = r;
        rep *= -c * sign;
        LinExpr out = rest + rep;
        if (n.kind == Kind::Atom) return make_atom(std::move(out), n.rel);
        return divides(n.divisor * aa, std::move(out));
      }
      case Kind::Not:
        return fnot(self(self, Formula(n.kids[0])));
      case Kind::And:
      case Kind::Or: {
        std::vector<Formula> kids;
        for (const auto& k : n.kids) kids.push_back(self(self, Formula(k)));
        return n.kind == Kind::And ? fand(std::move(kids)) : for_(std::move(kids));
      }
      default:
        return g;
    }
  };
  std::vector<Formula> out;
  out.push_back(divides(aa, r));
  for (size_t i = 0; i < conj.size(); ++i) {
    if (static_cast<int>(i) == best) continue;
    out.push_back(rewrite(rewrite, Formula(conj[i])));
  }
  Formula res = simplify(fand(std::move(out)));
  budget.charge(res.node_count());
  return res;
}

Formula eliminate_exists_qf(Formula f, VarId v, Counter& budget) {
  f = simplify(f);
  if (!f.mentions(v)) return f;
  if (auto sc = equality_shortcut(f, v, budget)) return *sc;

  f = expand_eq_ne(f, v);

  // m = lcm of |coefficients| of v.
  Int m = 1;
  {
    auto scan = [&](auto&& self, const Node& n) -> void {
      if (n.kind == Kind::Atom || n.kind == Kind::Div) {
        Int c = n.expr.coeff_of(v);
        if (c != 0) m = lcm(m, abs(c));
        return;
      }
      for (const auto& k : n.kids) self(self, *k);
    };
    scan(scan, f.node());
  }

  VarId u = fresh_var("$u");
  Formula g = scale_to_unit(f, v, m, u);
  g = fand(g, divides(m, LinExpr::var(u)));

  Literals lits;
  collect(g, u, lits);
  sort_dedupe(lits.lower);
  sort_dedupe(lits.upper);

  bool use_lower = lits.lower.size() <= lits.upper.size();
  const std::vector<LinExpr>& bset = use_lower ? lits.lower : lits.upper;
  const Int& delta = lits.delta;

  // Feasibility pre-check before materializing the disjunction.
  {
    Int projected = delta * Int(static_cast<long>(bset.size()) + 1) *
                    Int(static_cast<long>(g.node_count()));
    if (budget.cap && projected > Int(static_cast<unsigned long>(budget.cap)))
      throw BudgetExceeded("quantifier elimination disjunction too large (delta " +
                           delta.get_str() + ")");
  }

  std::vector<Formula> disjuncts;
  Formula finf = simplify(subst_infinity(g, u, use_lower));
  for (Int j = 1; j <= delta; ++j) {
    if (!finf.is_false()) {
      Formula d = simplify(subst_unit(finf, u, LinExpr(j)));
      budget.charge(d.node_count());
      if (d.is_true()) return ftrue();
      if (!d.is_false()) disjuncts.push_back(std::move(d));
    }
    for (const auto& b : bset) {
      LinExpr e = b;
      if (use_lower)
        e.k0 += j;
      else
        e.k0 -= j;
      Formula d = simplify(subst_unit(g, u, e));
      budget.charge(d.node_count());
      if (d.is_true()) return ftrue();
      if (!d.is_false()) disjuncts.push_back(std::move(d));
    }
  }
  return simplify(for_(std::move(disjuncts)));
}

}  // namespace

Formula eliminate_exists(const Formula& f, VarId v, const EliminationBudget& b) {
  Counter c{.used = 0, .cap = b.node_cap};
  Formula qf = eliminate_all_impl(nnf(f), c);
  return eliminate_exists_qf(std::move(qf), v, c);
}

Formula eliminate_forall(const Formula& f, VarId v, const EliminationBudget& b) {
  Counter c{.used = 0, .cap = b.node_cap};
  Formula qf = eliminate_all_impl(nnf(f), c);
  Formula neg = nnf(fnot(qf));
  return simplify(fnot(eliminate_exists_qf(std::move(neg), v, c)));
}

Formula eliminate_all(const Formula& f, const EliminationBudget& b) {
  Counter c{.used = 0, .cap = b.node_cap};
  return simplify(eliminate_all_impl(nnf(f), c));
}

}  // namespace lw::lia
