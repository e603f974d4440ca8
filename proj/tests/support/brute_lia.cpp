#include "support/brute_lia.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace lw::test {

using namespace lw::lia;

namespace {

struct Scan {
  std::vector<Int> boundaries;
  Int delta = 1;
};

// Boundary points and divisor period of v in f, with all other variables
// already substituted from env. Atoms mentioning an unassigned variable other
// than v are a logic error here (nested quantifiers are handled outside-in,
// so deeper bound variables never co-occur unassigned).
void collect(const Node& n, VarId v, const std::map<VarId, Int>& env, Scan& out) {
  switch (n.kind) {
    case Kind::Atom: {
      Int c = n.expr.coeff_of(v);
      if (c == 0) return;
      Int r = n.expr.k0;
      for (const auto& [w, cw] : n.expr.terms) {
        if (w == v) continue;
        r += cw * env.at(w);
      }
      // Flip point of c*v + r ~ 0.
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), Int(-r).get_mpz_t(), c.get_mpz_t());
      out.boundaries.push_back(q);
      out.boundaries.push_back(q + 1);
      return;
    }
    case Kind::Div: {
      if (n.expr.coeff_of(v) != 0) {
        Int l;
        mpz_lcm(l.get_mpz_t(), out.delta.get_mpz_t(), n.divisor.get_mpz_t());
        out.delta = l;
      }
      return;
    }
    case Kind::Exists:
    case Kind::Forall:
      if (n.bound == v) return;  // shadowed
      collect(*n.kids[0], v, env, out);
      return;
    default:
      for (const auto& k : n.kids) collect(*k, v, env, out);
  }
}

bool eval_rec(const Node& n, std::map<VarId, Int>& env, long scan_cap);

bool quantifier(const Node& n, std::map<VarId, Int>& env, long scan_cap) {
  const bool is_exists = n.kind == Kind::Exists;
  VarId v = n.bound;
  Scan scan;
  collect(*n.kids[0], v, env, scan);

  Int lo, hi;
  if (scan.boundaries.empty()) {
    lo = 0;
    hi = scan.delta - 1;
  } else {
    auto [mn, mx] = std::minmax_element(scan.boundaries.begin(), scan.boundaries.end());
    lo = *mn - scan.delta;
    hi = *mx + scan.delta;
  }
  if (hi - lo + 1 > scan_cap)
    throw std::runtime_error("brute_eval: quantifier scan too large");

  auto saved = env.find(v) != env.end() ? std::optional<Int>(env[v]) : std::nullopt;
  bool result = !is_exists;
  for (Int x = lo; x <= hi; ++x) {
    env[v] = x;
    bool b = eval_rec(*n.kids[0], env, scan_cap);
    if (is_exists && b) {
      result = true;
      break;
    }
    if (!is_exists && !b) {
      result = false;
      break;
    }
  }
  if (saved)
    env[v] = *saved;
  else
    env.erase(v);
  return result;
}

bool eval_rec(const Node& n, std::map<VarId, Int>& env, long scan_cap) {
  switch (n.kind) {
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Atom: {
      Int acc = n.expr.k0;
      for (const auto& [w, c] : n.expr.terms) acc += c * env.at(w);
      return n.rel == Rel::Le ? acc <= 0 : n.rel == Rel::Eq ? acc == 0 : acc != 0;
    }
    case Kind::Div: {
      Int acc = n.expr.k0;
      for (const auto& [w, c] : n.expr.terms) acc += c * env.at(w);
      return acc % n.divisor == 0;
    }
    case Kind::Not:
      return !eval_rec(*n.kids[0], env, scan_cap);
    case Kind::And:
      for (const auto& k : n.kids)
        if (!eval_rec(*k, env, scan_cap)) return false;
      return true;
    case Kind::Or:
      for (const auto& k : n.kids)
        if (eval_rec(*k, env, scan_cap)) return true;
      return false;
    case Kind::Exists:
    case Kind::Forall:
      return quantifier(n, env, scan_cap);
  }
  throw std::logic_error("brute_eval: bad node");
}

}  // namespace

bool brute_eval(const Formula& f, const std::map<VarId, Int>& env, long scan_cap) {
  std::map<VarId, Int> e = env;
  return eval_rec(f.node(), e, scan_cap);
}

}  // namespace lw::test
