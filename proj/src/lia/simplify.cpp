#include <algorithm>
#include <map>

#include "loopwatch/lia/formula.hpp"

namespace lw::lia {

namespace {

// Key for grouping Le atoms with the same variable part.
std::string term_key(const LinExpr& e) {
  std::string k;
  for (const auto& [v, c] : e.terms) {
    k += std::to_string(v);
    k += ':';
    k += c.get_str();
    k += ',';
  }
  return k;
}

Formula simp(const Formula& f);

Formula simp_and(const std::vector<NodePtr>& kids_in) {
  std::vector<Formula> kids;
  for (const auto& k : kids_in) {
    Formula s = simp(Formula(k));
    if (s.is_false()) return ffalse();
    if (s.is_true()) continue;
    if (s.kind() == Kind::And) {
      for (const auto& kk : s.node().kids) kids.push_back(Formula(kk));
    } else {
      kids.push_back(s);
    }
  }
  // For Le atoms with an identical variable part keep only the tightest
  // constant: t + k0 <= 0 subsumes t + k0' <= 0 when k0 >= k0'.
  std::map<std::string, Int> best_le;
  for (const auto& k : kids) {
    if (k.kind() == Kind::Atom && k.node().rel == Rel::Le) {
      std::string key = term_key(k.node().expr);
      auto pos = best_le.find(key);
      if (pos == best_le.end() || k.node().expr.k0 > pos->second)
        best_le[key] = k.node().expr.k0;
    }
  }
  std::vector<Formula> out;
  for (const auto& k : kids) {
    if (k.kind() == Kind::Atom && k.node().rel == Rel::Le) {
      if (k.node().expr.k0 != best_le[term_key(k.node().expr)]) continue;
    }
    out.push_back(k);
  }
  // Contradicting opposite bounds: t + a <= 0 and -t + b <= 0 with a + b > 0
  // squeeze t into an empty interval.
  for (const auto& [key, a] : best_le) {
    // Reconstruct the negated key by scanning atoms (cheap at these sizes).
    for (const auto& k : out) {
      if (k.kind() != Kind::Atom || k.node().rel != Rel::Le) continue;
      if (term_key(k.node().expr) != key) continue;
      LinExpr neg = k.node().expr;
      neg *= Int(-1);
      neg.k0 = 0;
      auto pos = best_le.find(term_key(neg));
      if (pos != best_le.end() && a + pos->second > 0) return ffalse();
      break;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Formula& a, const Formula& b) { return Formula::compare(a, b) < 0; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Formula& a, const Formula& b) { return a == b; }),
            out.end());
  return fand(std::move(out));
}

Formula simp_or(const std::vector<NodePtr>& kids_in) {
  std::vector<Formula> kids;
  for (const auto& k : kids_in) {
    Formula s = simp(Formula(k));
    if (s.is_true()) return ftrue();
    if (s.is_false()) continue;
    if (s.kind() == Kind::Or) {
      for (const auto& kk : s.node().kids) kids.push_back(Formula(kk));
    } else {
      kids.push_back(s);
    }
  }
  std::sort(kids.begin(), kids.end(),
            [](const Formula& a, const Formula& b) { return Formula::compare(a, b) < 0; });
  kids.erase(std::unique(kids.begin(), kids.end(),
                         [](const Formula& a, const Formula& b) { return a == b; }),
             kids.end());
  // a <= x (Le) and its complement present => true.
  for (const auto& k : kids) {
    if (k.kind() == Kind::Atom) {
      Formula neg = fnot(k);
      if (std::binary_search(kids.begin(), kids.end(), neg,
                             [](const Formula& a, const Formula& b) {
                               return Formula::compare(a, b) < 0;
                             }))
        return ftrue();
    }
  }
  return for_(std::move(kids));
}

Formula simp(const Formula& f) {
  const Node& n = f.node();
  switch (n.kind) {
    case Kind::True:
    case Kind::False:
      return f;
    case Kind::Atom:
      return make_atom(n.expr, n.rel);  // re-normalize
    case Kind::Div:
      return divides(n.divisor, n.expr);
    case Kind::Not: {
      Formula c = simp(Formula(n.kids[0]));
      return fnot(c);
    }
    case Kind::And:
      return simp_and(n.kids);
    case Kind::Or:
      return simp_or(n.kids);
    case Kind::Exists: {
      Formula c = simp(Formula(n.kids[0]));
      return exists(n.bound, c);
    }
    case Kind::Forall: {
      Formula c = simp(Formula(n.kids[0]));
      return forall(n.bound, c);
    }
  }
  throw std::logic_error("simplify: bad node");
}

}  // namespace

Formula simplify(const Formula& f) { return simp(nnf(f)); }

}  // namespace lw::lia
