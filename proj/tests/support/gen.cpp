#include "support/gen.hpp"

#include <algorithm>
#include <sstream>

namespace lw::test {

using namespace lw::lia;

namespace {

struct FormulaGen {
  Rng& rng;
  std::vector<VarId> free_vars;
  std::vector<VarId> quantified;  // variables currently in quantifier scope

  LinExpr atom_expr() {
    // At most one quantified variable per atom (see header).
    LinExpr e(Int(rng.range(-8, 8)));
    int nfree = static_cast<int>(rng.range(0, 2));
    for (int i = 0; i < nfree && !free_vars.empty(); ++i) {
      VarId v = free_vars[static_cast<size_t>(rng.range(0, static_cast<long>(free_vars.size()) - 1))];
      Int c(rng.range(-8, 8));
      if (c == 0) c = 1;
      e += LinExpr::var(v, c);
    }
    bool used_quant = false;
    if (!quantified.empty() && rng.chance(70)) {
      VarId v = quantified[static_cast<size_t>(
          rng.range(0, static_cast<long>(quantified.size()) - 1))];
      Int c(rng.range(-8, 8));
      if (c == 0) c = 1;
      e += LinExpr::var(v, c);
      used_quant = true;
    }
    if (e.is_const() && !free_vars.empty() && !used_quant) {
      e += LinExpr::var(free_vars[0], Int(1));
    }
    return e;
  }

  Formula atom() {
    switch (rng.range(0, 5)) {
      case 0:
        return le(atom_expr());
      case 1:
        return lt(atom_expr());
      case 2:
        return ge(atom_expr());
      case 3:
        return eq(atom_expr());
      case 4:
        return ne(atom_expr());
      default:
        return divides(Int(rng.range(1, 6)), atom_expr());
    }
  }

  Formula tree(int depth) {
    if (depth == 0 || rng.chance(45)) return atom();
    switch (rng.range(0, 3)) {
      case 0: {
        std::vector<Formula> kids;
        int n = static_cast<int>(rng.range(2, 3));
        for (int i = 0; i < n; ++i) kids.push_back(tree(depth - 1));
        return fand(std::move(kids));
      }
      case 1: {
        std::vector<Formula> kids;
        int n = static_cast<int>(rng.range(2, 3));
        for (int i = 0; i < n; ++i) kids.push_back(tree(depth - 1));
        return for_(std::move(kids));
      }
      default:
        return fnot(tree(depth - 1));
    }
  }
};

}  // namespace

namespace {

struct ProgGen {
  Rng& rng;
  std::ostringstream out;
  struct Var {
    std::string name;
    std::string type;
    bool is_bool;
  };
  std::vector<Var> vars;
  std::string array_name;  // empty when no array
  int array_size = 0;
  int stmt_budget = 24;
  int indent = 0;

  void pad() {
    for (int i = 0; i < indent; ++i) out << "  ";
  }

  const Var& pick_int_var() {
    for (int tries = 0; tries < 16; ++tries) {
      const Var& v = vars[static_cast<size_t>(rng.range(0, static_cast<long>(vars.size()) - 1))];
      if (!v.is_bool) return v;
    }
    return vars[0];
  }

  std::string literal_for(const Var& v) {
    switch (rng.range(0, 4)) {
      case 0: return std::to_string(rng.range(0, 9));
      case 1: return std::to_string(rng.range(10, 99));
      case 2: return v.type == "u8" || v.type == "i8" ? std::to_string(rng.range(100, 255))
                                                      : std::to_string(rng.range(100, 999));
      default: return std::to_string(rng.range(0, 20));
    }
  }

  // Integer expression over variables of v's exact type and literals.
  std::string int_expr(const Var& v, int depth) {
    auto leaf = [&]() -> std::string {
      if (rng.chance(55)) {
        // same-typed variable when available
        for (int tries = 0; tries < 8; ++tries) {
          const Var& w = vars[static_cast<size_t>(rng.range(0, static_cast<long>(vars.size()) - 1))];
          if (!w.is_bool && w.type == v.type) return w.name;
        }
      }
      return literal_for(v);
    };
    if (depth == 0 || rng.chance(50)) return leaf();
    static const char* ops[] = {"+", "-", "*", "/", "%", "&", "|", "^", "<<", ">>"};
    int oi = static_cast<int>(rng.range(0, 9));
    std::string a = int_expr(v, depth - 1);
    std::string b;
    if (oi == 3 || oi == 4) {
      b = std::to_string(rng.range(1, 9));  // avoid the trivial constant /0
    } else if (oi == 8 || oi == 9) {
      b = std::to_string(rng.range(0, 7));
    } else {
      b = int_expr(v, depth - 1);
    }
    return "(" + a + " " + ops[oi] + " " + b + ")";
  }

  std::string condition(int depth) {
    if (depth > 0 && rng.chance(20)) {
      return "(" + condition(depth - 1) + (rng.chance(50) ? " && " : " || ") +
             condition(depth - 1) + ")";
    }
    if (rng.chance(10)) {
      for (const Var& v : vars)
        if (v.is_bool) return rng.chance(50) ? v.name : "!(" + v.name + ")";
    }
    const Var& v = pick_int_var();
    static const char* cmps[] = {"<", "<=", ">", ">=", "==", "!="};
    std::string rhs = rng.chance(65) ? literal_for(v) : int_expr(v, 1);
    return "(" + v.name + " " + cmps[rng.range(0, 5)] + " " + rhs + ")";
  }

  void assign_stmt() {
    const Var& v = pick_int_var();
    pad();
    if (rng.chance(12)) {
      out << v.name << " = nondet();\n";
    } else {
      out << v.name << " = " << int_expr(v, 2) << ";\n";
    }
  }

  void array_stmt() {
    pad();
    const Var& v = pick_int_var();
    std::string idx = rng.chance(70)
                          ? "(" + v.name + " % " + std::to_string(array_size) + ")"
                          : std::to_string(rng.range(0, array_size - 1));
    if (rng.chance(50)) {
      out << array_name << "[" << idx << "] = " << int_expr(pick_int_var(), 1) << ";\n";
    } else {
      const Var& t = pick_int_var();
      if (t.type == "i32")
        out << t.name << " = " << array_name << "[" << idx << "];\n";
      else
        out << array_name << "[" << idx << "] = " << literal_for(t) << ";\n";
    }
  }

  void while_stmt(int depth) {
    const Var& v = pick_int_var();
    long kind = rng.range(0, 3);
    pad();
    if (kind == 0) {
      // bounded counter
      std::string bound = std::to_string(rng.range(5, 60));
      out << "while (" << v.name << " < " << bound << ") {\n";
      ++indent;
      body(depth, 2);
      pad();
      out << v.name << " = " << v.name << " + " << rng.range(1, 3) << ";\n";
      --indent;
      pad();
      out << "}\n";
    } else if (kind == 1) {
      // may wrap or skip the bound
      out << "while (" << v.name << " != " << literal_for(v) << ") {\n";
      ++indent;
      pad();
      out << v.name << " = " << v.name << " + " << rng.range(1, 4) << ";\n";
      --indent;
      pad();
      out << "}\n";
    } else if (kind == 2) {
      // possibly frozen counter (non-termination sample)
      const Var& w = pick_int_var();
      out << "while (" << v.name << " < " << rng.range(5, 40) << ") {\n";
      ++indent;
      pad();
      out << w.name << " = " << w.name << " + 1;\n";
      if (rng.chance(60)) {
        pad();
        out << v.name << " = " << v.name << " + 1;\n";
      }
      --indent;
      pad();
      out << "}\n";
    } else {
      // nondet-driven
      out << "while (" << condition(0) << ") {\n";
      ++indent;
      pad();
      out << v.name << " = nondet();\n";
      if (rng.chance(50)) body(depth, 1);
      --indent;
      pad();
      out << "}\n";
    }
  }

  void stmt(int depth, bool in_loop) {
    if (stmt_budget <= 0) return;
    --stmt_budget;
    long r = rng.range(1, 100);
    if (r <= 40) {
      assign_stmt();
    } else if (r <= 50 && !array_name.empty()) {
      array_stmt();
    } else if (r <= 65 && depth > 0) {
      pad();
      out << "if (" << condition(1) << ") {\n";
      ++indent;
      body(depth - 1, 2);
      --indent;
      pad();
      out << "}";
      if (rng.chance(50)) {
        out << " else {\n";
        ++indent;
        body(depth - 1, 1);
        --indent;
        pad();
        out << "}";
      }
      out << "\n";
    } else if (r <= 80 && depth > 0) {
      while_stmt(depth - 1);
    } else if (r <= 85 && in_loop) {
      pad();
      out << "break;\n";
    } else if (r <= 90) {
      pad();
      out << "skip;\n";
    } else {
      assign_stmt();
    }
  }

  void body(int depth, int count) {
    for (int i = 0; i < count; ++i) stmt(depth, indent > 0);
  }

  std::string run() {
    static const char* types[] = {"i8", "i16", "i32", "i64", "u8", "u16", "u32", "u64"};
    int nvars = static_cast<int>(rng.range(2, 4));
    for (int i = 0; i < nvars; ++i) {
      Var v;
      v.name = std::string(1, static_cast<char>('a' + i));
      v.type = types[rng.range(0, 7)];
      v.is_bool = false;
      vars.push_back(v);
      out << v.type << " " << v.name << ";\n";
    }
    if (rng.chance(25)) {
      Var v{"flag", "bool", true};
      vars.push_back(v);
      out << "bool flag;\n";
    }
    if (rng.chance(30)) {
      array_name = "arr";
      array_size = static_cast<int>(rng.range(2, 6));
      out << "i32 arr[" << array_size << "];\n";
    }
    // seed some inputs
    for (int i = 0; i < nvars; ++i) {
      if (rng.chance(55)) out << vars[static_cast<size_t>(i)].name << " = nondet();\n";
    }
    if (!vars.empty() && vars.back().is_bool)
      out << "flag = " << condition(0) << ";\n";
    int top = static_cast<int>(rng.range(3, 7));
    body(3, top);
    return out.str();
  }
};

}  // namespace

std::string random_program(Rng& rng) {
  ProgGen g{rng, {}, {}, "", 0, 24, 0};
  return g.run();
}

RandomFormula random_formula(Rng& rng) {
  static const char* kFree[] = {"x", "y", "z"};
  static const char* kQuant[] = {"k", "q"};

  FormulaGen gen{rng, {}, {}};
  int nfree = static_cast<int>(rng.range(0, 3));
  int nquant = static_cast<int>(rng.range(1, 2));
  if (nquant == 2) nfree = std::min(nfree, 1);  // keeps the oracle fast
  for (int i = 0; i < nfree; ++i) gen.free_vars.push_back(intern(kFree[i]));

  RandomFormula out;
  out.free_vars = gen.free_vars;
  out.quantifiers = nquant;

  // Innermost quantifier is generated last; build the body inner-out.
  std::vector<std::pair<VarId, bool>> quants;  // (var, is_exists)
  for (int i = 0; i < nquant; ++i)
    quants.emplace_back(intern(kQuant[i]), rng.chance(60));

  for (auto& [v, is_ex] : quants) gen.quantified.push_back(v);

  Formula body = gen.tree(2);
  // Wrap innermost-first: quantified.back() is innermost.
  for (auto it = quants.rbegin(); it != quants.rend(); ++it) {
    body = it->second ? exists(it->first, body) : forall(it->first, body);
    gen.quantified.pop_back();
    // Atoms outside this scope must not use the bound variable; the
    // generator only samples from `quantified`, so popping is enough.
  }
  out.f = body;
  return out;
}

}  // namespace lw::test
