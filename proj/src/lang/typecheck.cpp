#include <set>

#include "loopwatch/lang/ast.hpp"

namespace lw::lang {

namespace {

[[noreturn]] void err(const Span& sp, const std::string& msg) {
  throw TypeError(Diagnostic{Diagnostic::Kind::Type, msg, sp.line, sp.col});
}

bool all_literal(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
    case Expr::Kind::BoolLit:
      return true;
    case Expr::Kind::Var:
    case Expr::Kind::Index:
      return false;
    case Expr::Kind::Unary:
      return all_literal(*e.lhs);
    case Expr::Kind::Binary:
      return all_literal(*e.lhs) && all_literal(*e.rhs);
  }
  return false;
}

struct Checker {
  const Program& p;

  const Decl& lookup(const std::string& name, const Span& sp) {
    const Decl* d = p.find_decl(name);
    if (!d) err(sp, "use of undeclared identifier '" + name + "'");
    return *d;
  }

  // Infers and annotates the type of e. `expect` anchors untyped integer
  // literals; it is a request, not a constraint on non-literal operands.
  Scalar infer(const Expr& e, std::optional<Scalar> expect) {
    switch (e.kind) {
      case Expr::Kind::IntLit: {
        Scalar t = (expect && !is_bool(*expect)) ? *expect : Scalar::I64;
        e.type = t;
        return t;
      }
      case Expr::Kind::BoolLit:
        e.type = Scalar::Bool;
        return Scalar::Bool;
      case Expr::Kind::Var: {
        const Decl& d = lookup(e.name, e.span);
        if (d.array_size) err(e.span, "array '" + e.name + "' used as a scalar");
        e.type = d.type;
        return d.type;
      }
      case Expr::Kind::Index: {
        const Decl& d = lookup(e.name, e.span);
        if (!d.array_size) err(e.span, "indexing scalar '" + e.name + "'");
        Scalar it = infer(*e.index, Scalar::I64);
        if (is_bool(it)) err(e.index->span, "array index must be an integer");
        e.type = d.type;
        return d.type;
      }
      case Expr::Kind::Unary: {
        if (e.un == UnOp::LogNot) {
          Scalar t = infer(*e.lhs, Scalar::Bool);
          if (!is_bool(t)) err(e.span, "'!' needs a bool operand");
          e.type = Scalar::Bool;
          return Scalar::Bool;
        }
        Scalar t = infer(*e.lhs, expect && !is_bool(*expect) ? expect : std::nullopt);
        if (is_bool(t)) err(e.span, "arithmetic on bool");
        e.type = t;
        return t;
      }
      case Expr::Kind::Binary: {
        bool logical = e.bin == BinOp::LogAnd || e.bin == BinOp::LogOr;
        bool comparison = e.bin == BinOp::Lt || e.bin == BinOp::Le ||
                          e.bin == BinOp::Gt || e.bin == BinOp::Ge ||
                          e.bin == BinOp::EqEq || e.bin == BinOp::NeEq;
        if (logical) {
          Scalar a = infer(*e.lhs, Scalar::Bool);
          Scalar b = infer(*e.rhs, Scalar::Bool);
          if (!is_bool(a) || !is_bool(b)) err(e.span, "'&&'/'||' need bool operands");
          e.type = Scalar::Bool;
          return Scalar::Bool;
        }
        // Integer operands; an all-literal side adapts to the other side.
        std::optional<Scalar> anchor;
        bool lhs_lit = all_literal(*e.lhs), rhs_lit = all_literal(*e.rhs);
        std::optional<Scalar> operand_expect =
            comparison ? std::nullopt
                       : (expect && !is_bool(*expect) ? expect : std::nullopt);
        if (!lhs_lit) anchor = infer(*e.lhs, operand_expect);
        if (!rhs_lit) {
          Scalar rt = infer(*e.rhs, anchor ? anchor : operand_expect);
          if (!anchor) anchor = rt;
        }
        if (comparison && e.bin != BinOp::EqEq && e.bin != BinOp::NeEq) {
          // fall through; bool operands rejected below
        }
        if (anchor && is_bool(*anchor)) {
          if (e.bin == BinOp::EqEq || e.bin == BinOp::NeEq) {
            Scalar a = infer(*e.lhs, Scalar::Bool);
            Scalar b = infer(*e.rhs, Scalar::Bool);
            if (!is_bool(a) || !is_bool(b))
              err(e.span, "'=='/'!=' on mixed bool and integer");
            e.type = Scalar::Bool;
            return Scalar::Bool;
          }
          err(e.span, "arithmetic/comparison on bool");
        }
        if (!anchor) anchor = operand_expect ? *operand_expect : Scalar::I64;
        if (lhs_lit) infer(*e.lhs, anchor);
        if (rhs_lit) infer(*e.rhs, anchor);
        Scalar lt = e.lhs->type, rt = e.rhs->type;
        if (is_bool(lt) || is_bool(rt)) err(e.span, "arithmetic/comparison on bool");
        bool shift = e.bin == BinOp::Shl || e.bin == BinOp::Shr;
        if (!shift && lt != rt)
          err(e.span, std::string("operand types differ: ") + scalar_name(lt) + " vs " +
                          scalar_name(rt));
        e.type = comparison ? Scalar::Bool : lt;
        return e.type;
      }
    }
    err(e.span, "malformed expression");
  }

  void check_stmts(const std::vector<StmtPtr>& stmts, int loop_depth) {
    for (const auto& sp : stmts) {
      const Stmt& s = *sp;
      switch (s.kind) {
        case Stmt::Kind::Skip:
          break;
        case Stmt::Kind::Break:
          if (loop_depth == 0) err(s.span, "'break' outside a loop");
          break;
        case Stmt::Kind::Assign: {
          const Decl& d = lookup(s.name, s.span);
          if (d.array_size) err(s.span, "assigning whole array '" + s.name + "'");
          Scalar vt = infer(*s.value, d.type);
          if (is_bool(d.type) != is_bool(vt))
            err(s.span, "assignment mixes bool and integer");
          if (!is_bool(d.type) && vt != d.type)
            err(s.span, std::string("cannot assign ") + scalar_name(vt) + " to " +
                            scalar_name(d.type));
          break;
        }
        case Stmt::Kind::IndexAssign: {
          const Decl& d = lookup(s.name, s.span);
          if (!d.array_size) err(s.span, "indexing scalar '" + s.name + "'");
          Scalar it = infer(*s.index, Scalar::I64);
          if (is_bool(it)) err(s.index->span, "array index must be an integer");
          Scalar vt = infer(*s.value, d.type);
          if (vt != d.type)
            err(s.span, std::string("cannot store ") + scalar_name(vt) + " into " +
                            scalar_name(d.type) + " array");
          break;
        }
        case Stmt::Kind::Nondet: {
          const Decl& d = lookup(s.name, s.span);
          if (d.array_size) err(s.span, "nondet() into array '" + s.name + "'");
          break;
        }
        case Stmt::Kind::If: {
          Scalar ct = infer(*s.cond, Scalar::Bool);
          if (!is_bool(ct)) err(s.cond->span, "if condition must be bool");
          check_stmts(s.body, loop_depth);
          check_stmts(s.else_body, loop_depth);
          break;
        }
        case Stmt::Kind::While: {
          Scalar ct = infer(*s.cond, Scalar::Bool);
          if (!is_bool(ct)) err(s.cond->span, "while condition must be bool");
          check_stmts(s.body, loop_depth + 1);
          break;
        }
      }
    }
  }
};

}  // namespace

void typecheck(Program& p) {
  std::set<std::string> seen;
  for (const auto& d : p.decls) {
    if (!seen.insert(d.name).second)
      err(d.span, "duplicate declaration of '" + d.name + "'");
    if (d.array_size && is_bool(d.type)) err(d.span, "bool arrays are not supported");
  }
  Checker ck{p};
  ck.check_stmts(p.stmts, 0);
}

}  // namespace lw::lang
