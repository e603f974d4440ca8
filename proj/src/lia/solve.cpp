#include <algorithm>

#include "loopwatch/lia/formula.hpp"

namespace lw::lia {

namespace {

// Complete single-variable solver for a quantifier-free formula whose only
// free variable is v. Solutions of such a formula are unions of intervals
// intersected with residue classes, so scanning one divisor period beyond
// the extreme atom boundaries is exhaustive.
std::optional<Int> solve_single(const Formula& f, VarId v) {
  std::vector<Int> boundaries;
  Int delta = 1;
  auto scan = [&](auto&& self, const Node& n) -> void {
    switch (n.kind) {
      case Kind::Atom: {
        Int c = n.expr.coeff_of(v);
        if (c == 0) return;
        Int r = n.expr.k0;  // single-var formula: no other terms
        for (const auto& [w, cw] : n.expr.terms)
          if (w != v) throw std::logic_error("solve_single: extra variable");
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), Int(-r).get_mpz_t(), c.get_mpz_t());
        boundaries.push_back(q);
        mpz_cdiv_q(q.get_mpz_t(), Int(-r).get_mpz_t(), c.get_mpz_t());
        boundaries.push_back(q);
        return;
      }
      case Kind::Div: {
        if (n.expr.mentions(v)) {
          Int l;
          mpz_lcm(l.get_mpz_t(), delta.get_mpz_t(), n.divisor.get_mpz_t());
          delta = l;
        }
        return;
      }
      default:
        for (const auto& k : n.kids) self(self, *k);
    }
  };
  scan(scan, f.node());

  std::sort(boundaries.begin(), boundaries.end());
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end()), boundaries.end());

  std::map<VarId, Int> env;
  auto ok = [&](const Int& x) {
    env[v] = x;
    return eval_qf(f, env);
  };

  // Fast pass: solutions cluster within one divisor period of an atom
  // boundary (or of 0 when only divisibility atoms remain).
  Int L = delta < 4096 ? delta : Int(4096);
  std::vector<Int> anchors = boundaries;
  if (anchors.empty()) anchors.push_back(0);
  for (const Int& b : anchors)
    if (ok(b)) return b;
  for (Int t = 1; t <= L; ++t)
    for (const Int& b : anchors) {
      if (ok(b + t)) return b + t;
      if (ok(b - t)) return b - t;
    }

  // Definitive pass: exhaustive scan of the complete window when feasible.
  Int lo, hi;
  if (boundaries.empty()) {
    lo = 0;
    hi = delta - 1;
  } else {
    lo = boundaries.front() - delta;
    hi = boundaries.back() + delta;
  }
  if (hi - lo > 2000000)
    throw BudgetExceeded("is_sat: satisfiability window too large");
  for (Int x = lo; x <= hi; ++x)
    if (ok(x)) return x;
  return std::nullopt;
}

}  // namespace

SatResult is_sat(const Formula& f, const EliminationBudget& budget) {
  Formula g = simplify(eliminate_all(f, budget));
  std::vector<VarId> vars = g.free_vars();
  if (vars.empty()) return {.sat = !g.is_false(), .model = {}};

  // h[i] keeps vars[0..i] free.
  std::vector<Formula> h(vars.size());
  h[vars.size() - 1] = g;
  for (size_t i = vars.size() - 1; i > 0; --i)
    h[i - 1] = eliminate_exists(h[i], vars[i], budget);

  Model model;
  for (size_t i = 0; i < vars.size(); ++i) {
    Formula cur = h[i];
    if (i > 0) {
      std::map<VarId, LinExpr> m;
      for (size_t j = 0; j < i; ++j) m.emplace(vars[j], LinExpr(model.values[vars[j]]));
      cur = simplify(substitute(cur, m));
    }
    auto x = solve_single(cur, vars[i]);
    if (!x) {
      if (i == 0) return {.sat = false, .model = {}};
      throw std::logic_error("is_sat: back-substitution lost a model");
    }
    model.values[vars[i]] = *x;
  }
  if (!eval_qf(g, model.values))
    throw std::logic_error("is_sat: model failed verification");
  return {.sat = true, .model = std::move(model)};
}

bool equivalent_on(const Formula& f, const Formula& g, const Box& box) {
  Formula fq = simplify(eliminate_all(f));
  Formula gq = simplify(eliminate_all(g));

  std::vector<VarId> vars;
  {
    std::vector<VarId> fv = fq.free_vars(), gv = gq.free_vars();
    vars = fv;
    for (VarId v : gv)
      if (!std::binary_search(fv.begin(), fv.end(), v)) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
  }
  Int points = 1;
  for (VarId v : vars) {
    auto pos = box.find(v);
    if (pos == box.end())
      throw std::runtime_error("equivalent_on: no bounds for " + var_name(v));
    if (pos->second.second < pos->second.first) return true;  // empty box
    points *= pos->second.second - pos->second.first + 1;
  }
  if (points > 10000000)
    throw BoxTooLarge("equivalent_on: box has " + points.get_str() + " points");

  std::map<VarId, Int> env;
  for (VarId v : vars) env[v] = box.at(v).first;
  while (true) {
    if (eval_qf(fq, env) != eval_qf(gq, env)) return false;
    size_t i = 0;
    for (; i < vars.size(); ++i) {
      VarId v = vars[i];
      if (env[v] < box.at(v).second) {
        env[v] += 1;
        break;
      }
      env[v] = box.at(v).first;
    }
    if (i == vars.size()) break;
  }
  return true;
}

}  // namespace lw::lia
