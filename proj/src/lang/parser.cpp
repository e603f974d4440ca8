#include "loopwatch/lang/lexer.hpp"

namespace lw::lang {

namespace {

// Binding powers, loosest first.
int binop_prec(BinOp op) {
  switch (op) {
    case BinOp::LogOr: return 1;
    case BinOp::LogAnd: return 2;
    case BinOp::BitOr: return 3;
    case BinOp::BitXor: return 4;
    case BinOp::BitAnd: return 5;
    case BinOp::EqEq:
    case BinOp::NeEq: return 6;
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 7;
    case BinOp::Shl:
    case BinOp::Shr: return 8;
    case BinOp::Add:
    case BinOp::Sub: return 9;
    case BinOp::Mul:
    case BinOp::Div:
    case BinOp::Mod: return 10;
  }
  return 0;
}

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;

  const Token& peek(size_t off = 0) const {
    return toks[std::min(pos + off, toks.size() - 1)];
  }

  [[noreturn]] void fail(const std::string& expected) {
    const Token& t = peek();
    throw SyntaxError(Diagnostic{
        Diagnostic::Kind::Syntax,
        "expected " + expected + ", got '" +
            (t.kind == Tok::Eof ? "<eof>" : t.text.empty() ? "punctuation" : t.text) + "'",
        t.span.line, t.span.col});
  }

  bool at(Tok k) const { return peek().kind == k; }

  Token eat(Tok k, const std::string& what) {
    if (!at(k)) fail(what);
    return toks[pos++];
  }

  bool maybe(Tok k) {
    if (at(k)) {
      ++pos;
      return true;
    }
    return false;
  }

  std::optional<BinOp> peek_binop() const {
    switch (peek().kind) {
      case Tok::Plus: return BinOp::Add;
      case Tok::Minus: return BinOp::Sub;
      case Tok::Star: return BinOp::Mul;
      case Tok::Slash: return BinOp::Div;
      case Tok::Percent: return BinOp::Mod;
      case Tok::Shl: return BinOp::Shl;
      case Tok::Shr: return BinOp::Shr;
      case Tok::Amp: return BinOp::BitAnd;
      case Tok::Pipe: return BinOp::BitOr;
      case Tok::Caret: return BinOp::BitXor;
      case Tok::Lt: return BinOp::Lt;
      case Tok::Le: return BinOp::Le;
      case Tok::Gt: return BinOp::Gt;
      case Tok::Ge: return BinOp::Ge;
      case Tok::EqEq: return BinOp::EqEq;
      case Tok::NeEq: return BinOp::NeEq;
      case Tok::AndAnd: return BinOp::LogAnd;
      case Tok::OrOr: return BinOp::LogOr;
      default: return std::nullopt;
    }
  }

  ExprPtr primary() {
    const Token& t = peek();
    if (maybe(Tok::LParen)) {
      ExprPtr e = expr(0);
      eat(Tok::RParen, "')'");
      return e;
    }
    if (at(Tok::Int)) {
      Token lit = toks[pos++];
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::IntLit;
      e->lit = lit.value;
      e->span = lit.span;
      return e;
    }
    if (at(Tok::KwTrue) || at(Tok::KwFalse)) {
      Token lit = toks[pos++];
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::BoolLit;
      e->bool_lit = lit.kind == Tok::KwTrue;
      e->span = lit.span;
      return e;
    }
    if (at(Tok::Ident)) {
      Token id = toks[pos++];
      if (maybe(Tok::LBracket)) {
        ExprPtr idx = expr(0);
        Token close = eat(Tok::RBracket, "']'");
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::Index;
        e->name = id.text;
        e->index = idx;
        e->span = Span{id.span.begin, close.span.end, id.span.line, id.span.col};
        return e;
      }
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Var;
      e->name = id.text;
      e->span = id.span;
      return e;
    }
    if (at(Tok::Minus) || at(Tok::Tilde) || at(Tok::Bang)) {
      Token op = toks[pos++];
      ExprPtr sub = unary_operand();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Unary;
      e->un = op.kind == Tok::Minus ? UnOp::Neg
              : op.kind == Tok::Tilde ? UnOp::BitNot
                                      : UnOp::LogNot;
      e->lhs = sub;
      e->span = Span{op.span.begin, sub->span.end, op.span.line, op.span.col};
      return e;
    }
    (void)t;
    fail("expression");
  }

  ExprPtr unary_operand() { return primary(); }

  ExprPtr expr(int min_prec) {
    ExprPtr lhs = primary();
    while (true) {
      auto op = peek_binop();
      if (!op || binop_prec(*op) < min_prec) break;
      ++pos;
      ExprPtr rhs = expr(binop_prec(*op) + 1);
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Binary;
      e->bin = *op;
      e->lhs = lhs;
      e->rhs = rhs;
      e->span = Span{lhs->span.begin, rhs->span.end, lhs->span.line, lhs->span.col};
      lhs = e;
    }
    return lhs;
  }

  std::vector<StmtPtr> block() {
    eat(Tok::LBrace, "'{'");
    std::vector<StmtPtr> out;
    while (!at(Tok::RBrace)) out.push_back(stmt());
    eat(Tok::RBrace, "'}'");
    return out;
  }

  StmtPtr stmt() {
    const Token& t = peek();
    auto s = std::make_shared<Stmt>();
    if (maybe(Tok::KwSkip)) {
      Token semi = eat(Tok::Semi, "';'");
      s->kind = Stmt::Kind::Skip;
      s->span = Span{t.span.begin, semi.span.end, t.span.line, t.span.col};
      return s;
    }
    if (maybe(Tok::KwBreak)) {
      Token semi = eat(Tok::Semi, "';'");
      s->kind = Stmt::Kind::Break;
      s->span = Span{t.span.begin, semi.span.end, t.span.line, t.span.col};
      return s;
    }
    if (maybe(Tok::KwIf)) {
      eat(Tok::LParen, "'('");
      s->cond = expr(0);
      eat(Tok::RParen, "')'");
      s->kind = Stmt::Kind::If;
      s->body = block();
      uint32_t end = toks[pos - 1].span.end;
      if (maybe(Tok::KwElse)) {
        s->else_body = block();
        end = toks[pos - 1].span.end;
      }
      s->span = Span{t.span.begin, end, t.span.line, t.span.col};
      return s;
    }
    if (maybe(Tok::KwWhile)) {
      eat(Tok::LParen, "'('");
      s->cond = expr(0);
      eat(Tok::RParen, "')'");
      s->kind = Stmt::Kind::While;
      s->body = block();
      s->span = Span{t.span.begin, toks[pos - 1].span.end, t.span.line, t.span.col};
      return s;
    }
    if (at(Tok::Ident)) {
      Token id = toks[pos++];
      s->name = id.text;
      if (maybe(Tok::LBracket)) {
        s->index = expr(0);
        eat(Tok::RBracket, "']'");
        eat(Tok::Assign, "'='");
        s->value = expr(0);
        s->kind = Stmt::Kind::IndexAssign;
      } else {
        eat(Tok::Assign, "'='");
        if (at(Tok::KwNondet)) {
          ++pos;
          eat(Tok::LParen, "'('");
          eat(Tok::RParen, "')'");
          s->kind = Stmt::Kind::Nondet;
        } else {
          s->value = expr(0);
          s->kind = Stmt::Kind::Assign;
        }
      }
      Token semi = eat(Tok::Semi, "';'");
      s->span = Span{t.span.begin, semi.span.end, t.span.line, t.span.col};
      return s;
    }
    fail("statement");
  }

  Program program(std::string source) {
    Program p;
    p.source = std::move(source);
    while (at(Tok::Type)) {
      Token ty = toks[pos++];
      Token id = eat(Tok::Ident, "identifier");
      Decl d;
      d.name = id.text;
      d.type = ty.type;
      if (maybe(Tok::LBracket)) {
        Token n = eat(Tok::Int, "array size");
        if (n.value == 0 || n.value > 65536)
          throw SyntaxError(Diagnostic{Diagnostic::Kind::Syntax,
                                       "array size must be in [1, 65536]",
                                       n.span.line, n.span.col});
        d.array_size = static_cast<uint32_t>(n.value);
        eat(Tok::RBracket, "']'");
      }
      Token semi = eat(Tok::Semi, "';'");
      d.span = Span{ty.span.begin, semi.span.end, ty.span.line, ty.span.col};
      p.decls.push_back(std::move(d));
    }
    while (!at(Tok::Eof)) p.stmts.push_back(stmt());
    return p;
  }
};

}  // namespace

Program parse(const std::string& source) {
  Parser ps{lex(source)};
  Program p = ps.program(source);
  typecheck(p);
  return p;
}

}  // namespace lw::lang
