#include <cctype>
#include <sstream>

#include "loopwatch/lia/formula.hpp"

// Prefix textual form for debug dumps and golden tests, e.g.
//   (and (<= i 49) (>= i 49))   (exists k (< (+ i k) 50))   (div 3 (+ x 1))

namespace lw::lia {

namespace {

void print_term(std::ostream& os, const LinExpr& e, bool with_const) {
  std::vector<std::string> parts;
  for (const auto& [v, c] : e.terms) {
    if (c == 1)
      parts.push_back(var_name(v));
    else
      parts.push_back("(* " + c.get_str() + " " + var_name(v) + ")");
  }
  if (with_const && e.k0 != 0) parts.push_back(e.k0.get_str());
  if (parts.empty()) {
    os << "0";
  } else if (parts.size() == 1) {
    os << parts[0];
  } else {
    os << "(+";
    for (const auto& p : parts) os << " " << p;
    os << ")";
  }
}

void print_node(std::ostream& os, const Node& n) {
  switch (n.kind) {
    case Kind::True:
      os << "true";
      return;
    case Kind::False:
      os << "false";
      return;
    case Kind::Atom: {
      const char* op = n.rel == Rel::Le ? "<=" : n.rel == Rel::Eq ? "=" : "!=";
      os << "(" << op << " ";
      print_term(os, n.expr, false);
      os << " " << Int(-n.expr.k0).get_str() << ")";
      return;
    }
    case Kind::Div:
      os << "(div " << n.divisor.get_str() << " ";
      print_term(os, n.expr, true);
      os << ")";
      return;
    case Kind::Not:
      os << "(not ";
      print_node(os, *n.kids[0]);
      os << ")";
      return;
    case Kind::And:
    case Kind::Or:
      os << (n.kind == Kind::And ? "(and" : "(or");
      for (const auto& k : n.kids) {
        os << " ";
        print_node(os, *k);
      }
      os << ")";
      return;
    case Kind::Exists:
    case Kind::Forall:
      os << (n.kind == Kind::Exists ? "(exists " : "(forall ") << var_name(n.bound)
         << " ";
      print_node(os, *n.kids[0]);
      os << ")";
      return;
  }
}

struct Parser {
  const std::string& s;
  size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("formula parse error at offset " + std::to_string(pos) +
                             ": " + msg);
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::string token() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
           s[pos] != '(' && s[pos] != ')')
      ++pos;
    if (start == pos) fail("expected token");
    return s.substr(start, pos - start);
  }

  bool is_int(const std::string& t) {
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  }

  LinExpr term() {
    skip_ws();
    if (eat('(')) {
      std::string op = token();
      LinExpr out;
      if (op == "+") {
        while (!eat(')')) out += term();
      } else if (op == "-") {
        LinExpr first = term();
        if (eat(')')) return -first;
        out = first;
        while (!eat(')')) out -= term();
      } else if (op == "*") {
        std::string c = token();
        if (!is_int(c)) fail("(* c t) needs an integer coefficient");
        LinExpr t = term();
        t *= Int(c);
        if (!eat(')')) fail("expected )");
        return t;
      } else {
        fail("unknown term operator " + op);
      }
      return out;
    }
    std::string t = token();
    if (is_int(t)) return LinExpr(Int(t));
    return LinExpr::var(intern(t));
  }

  Formula formula() {
    skip_ws();
    if (!eat('(')) {
      std::string t = token();
      if (t == "true") return ftrue();
      if (t == "false") return ffalse();
      fail("expected formula");
    }
    std::string op = token();
    if (op == "and" || op == "or") {
      std::vector<Formula> kids;
      while (!eat(')')) kids.push_back(formula());
      return op == "and" ? fand(std::move(kids)) : for_(std::move(kids));
    }
    if (op == "not") {
      Formula f = formula();
      if (!eat(')')) fail("expected )");
      return fnot(f);
    }
    if (op == "exists" || op == "forall") {
      std::string v = token();
      Formula f = formula();
      if (!eat(')')) fail("expected )");
      return op == "exists" ? exists(intern(v), f) : forall(intern(v), f);
    }
    if (op == "div") {
      std::string d = token();
      if (!is_int(d)) fail("(div d t) needs an integer divisor");
      LinExpr e = term();
      if (!eat(')')) fail("expected )");
      return divides(Int(d), std::move(e));
    }
    LinExpr a = term();
    LinExpr b = term();
    if (!eat(')')) fail("expected )");
    LinExpr e = a - b;
    if (op == "<=") return le(std::move(e));
    if (op == "<") return lt(std::move(e));
    if (op == ">=") return ge(std::move(e));
    if (op == ">") return gt(std::move(e));
    if (op == "=") return eq(std::move(e));
    if (op == "!=") return ne(std::move(e));
    fail("unknown relation " + op);
  }
};

}  // namespace

std::string Formula::str() const {
  std::ostringstream os;
  print_node(os, node());
  return os.str();
}

Formula parse_formula(const std::string& text) {
  Parser p(text);
  Formula f = p.formula();
  p.skip_ws();
  if (p.pos != text.size())
    throw std::runtime_error("formula parse error: trailing input");
  return f;
}

}  // namespace lw::lia
