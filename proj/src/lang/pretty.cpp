#include <sstream>

#include "loopwatch/lang/ast.hpp"

namespace lw::lang {

namespace {

const char* binop_text(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Shl: return "<<";
    case BinOp::Shr: return ">>";
    case BinOp::BitAnd: return "&";
    case BinOp::BitOr: return "|";
    case BinOp::BitXor: return "^";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::EqEq: return "==";
    case BinOp::NeEq: return "!=";
    case BinOp::LogAnd: return "&&";
    case BinOp::LogOr: return "||";
  }
  return "?";
}

void print_expr(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
      os << e.lit;
      return;
    case Expr::Kind::BoolLit:
      os << (e.bool_lit ? "true" : "false");
      return;
    case Expr::Kind::Var:
      os << e.name;
      return;
    case Expr::Kind::Index:
      os << e.name << "[";
      print_expr(os, *e.index);
      os << "]";
      return;
    case Expr::Kind::Unary:
      os << (e.un == UnOp::Neg ? "-" : e.un == UnOp::BitNot ? "~" : "!") << "(";
      print_expr(os, *e.lhs);
      os << ")";
      return;
    case Expr::Kind::Binary:
      os << "(";
      print_expr(os, *e.lhs);
      os << " " << binop_text(e.bin) << " ";
      print_expr(os, *e.rhs);
      os << ")";
      return;
  }
}

void print_stmts(std::ostream& os, const std::vector<StmtPtr>& stmts, int indent) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  for (const auto& sp : stmts) {
    const Stmt& s = *sp;
    os << pad;
    switch (s.kind) {
      case Stmt::Kind::Skip:
        os << "skip;\n";
        break;
      case Stmt::Kind::Break:
        os << "break;\n";
        break;
      case Stmt::Kind::Assign:
        os << s.name << " = ";
        print_expr(os, *s.value);
        os << ";\n";
        break;
      case Stmt::Kind::IndexAssign:
        os << s.name << "[";
        print_expr(os, *s.index);
        os << "] = ";
        print_expr(os, *s.value);
        os << ";\n";
        break;
      case Stmt::Kind::Nondet:
        os << s.name << " = nondet();\n";
        break;
      case Stmt::Kind::If:
        os << "if (";
        print_expr(os, *s.cond);
        os << ") {\n";
        print_stmts(os, s.body, indent + 1);
        os << pad << "}";
        if (!s.else_body.empty()) {
          os << " else {\n";
          print_stmts(os, s.else_body, indent + 1);
          os << pad << "}";
        }
        os << "\n";
        break;
      case Stmt::Kind::While:
        os << "while (";
        print_expr(os, *s.cond);
        os << ") {\n";
        print_stmts(os, s.body, indent + 1);
        os << pad << "}\n";
        break;
    }
  }
}

}  // namespace

std::string pretty_print(const Program& p) {
  std::ostringstream os;
  for (const auto& d : p.decls) {
    os << scalar_name(d.type) << " " << d.name;
    if (d.array_size) os << "[" << *d.array_size << "]";
    os << ";\n";
  }
  print_stmts(os, p.stmts, 0);
  return os.str();
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::IntLit:
      return a.lit == b.lit;
    case Expr::Kind::BoolLit:
      return a.bool_lit == b.bool_lit;
    case Expr::Kind::Var:
      return a.name == b.name;
    case Expr::Kind::Index:
      return a.name == b.name && expr_equal(*a.index, *b.index);
    case Expr::Kind::Unary:
      return a.un == b.un && expr_equal(*a.lhs, *b.lhs);
    case Expr::Kind::Binary:
      return a.bin == b.bin && expr_equal(*a.lhs, *b.lhs) && expr_equal(*a.rhs, *b.rhs);
  }
  return false;
}

bool stmt_equal(const Stmt& a, const Stmt& b);

bool stmts_equal(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!stmt_equal(*a[i], *b[i])) return false;
  return true;
}

bool stmt_equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Stmt::Kind::Skip:
    case Stmt::Kind::Break:
      return true;
    case Stmt::Kind::Assign:
      return a.name == b.name && expr_equal(*a.value, *b.value);
    case Stmt::Kind::IndexAssign:
      return a.name == b.name && expr_equal(*a.index, *b.index) &&
             expr_equal(*a.value, *b.value);
    case Stmt::Kind::Nondet:
      return a.name == b.name;
    case Stmt::Kind::If:
      return expr_equal(*a.cond, *b.cond) && stmts_equal(a.body, b.body) &&
             stmts_equal(a.else_body, b.else_body);
    case Stmt::Kind::While:
      return expr_equal(*a.cond, *b.cond) && stmts_equal(a.body, b.body);
  }
  return false;
}

bool ast_equal(const Program& a, const Program& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (size_t i = 0; i < a.decls.size(); ++i) {
    const Decl &da = a.decls[i], &db = b.decls[i];
    if (da.name != db.name || da.type != db.type || da.array_size != db.array_size)
      return false;
  }
  return stmts_equal(a.stmts, b.stmts);
}

}  // namespace lw::lang
