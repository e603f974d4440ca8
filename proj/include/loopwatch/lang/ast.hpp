#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// AST for the .wl while-language. Fixed-width two's complement integers with
// wraparound, fixed-size integer arrays, nondet() input reads.

namespace lw::lang {

enum class Scalar : uint8_t { I8, I16, I32, I64, U8, U16, U32, U64, Bool };

int bits_of(Scalar t);
bool is_signed(Scalar t);
bool is_bool(Scalar t);
const char* scalar_name(Scalar t);

struct Span {
  uint32_t begin = 0;  // byte offsets into the source
  uint32_t end = 0;
  uint32_t line = 1;  // 1-based position of begin
  uint32_t col = 1;
};

struct Decl {
  std::string name;
  Scalar type = Scalar::I32;
  std::optional<uint32_t> array_size;  // set for array declarations
  Span span;
};

enum class BinOp : uint8_t {
  Add, Sub, Mul, Div, Mod, Shl, Shr, BitAnd, BitOr, BitXor,
  Lt, Le, Gt, Ge, EqEq, NeEq, LogAnd, LogOr,
};

enum class UnOp : uint8_t { Neg, BitNot, LogNot };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind : uint8_t { IntLit, BoolLit, Var, Index, Unary, Binary } kind;
  Span span;
  // IntLit
  uint64_t lit = 0;      // raw magnitude as written
  bool bool_lit = false; // BoolLit
  // Var / Index
  std::string name;
  ExprPtr index;  // Index
  // Unary / Binary
  UnOp un = UnOp::Neg;
  BinOp bin = BinOp::Add;
  ExprPtr lhs, rhs;
  // Filled by the type checker.
  mutable Scalar type = Scalar::I32;
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
  enum class Kind : uint8_t { Assign, IndexAssign, Nondet, If, While, Break, Skip } kind;
  Span span;
  std::string name;   // Assign / IndexAssign / Nondet target
  ExprPtr index;      // IndexAssign
  ExprPtr value;      // Assign / IndexAssign
  ExprPtr cond;       // If / While
  std::vector<StmtPtr> body;       // If-then / While
  std::vector<StmtPtr> else_body;  // If-else
};

struct Program {
  std::vector<Decl> decls;
  std::vector<StmtPtr> stmts;
  std::string source;

  const Decl* find_decl(const std::string& name) const {
    for (const auto& d : decls)
      if (d.name == name) return &d;
    return nullptr;
  }
};

struct Diagnostic {
  enum class Kind : uint8_t { Syntax, Type } kind;
  std::string message;
  uint32_t line = 0;
  uint32_t col = 0;
  std::string str() const;
};

struct SyntaxError : std::runtime_error {
  Diagnostic diag;
  explicit SyntaxError(Diagnostic d) : std::runtime_error(d.str()), diag(std::move(d)) {}
};

struct TypeError : std::runtime_error {
  Diagnostic diag;
  explicit TypeError(Diagnostic d) : std::runtime_error(d.str()), diag(std::move(d)) {}
};

// Parses and type checks; throws SyntaxError / TypeError.
Program parse(const std::string& source);

// Type checks a freshly parsed program; annotates Expr::type. parse() calls
// this; exposed for hand-built ASTs in tests.
void typecheck(Program& p);

std::string pretty_print(const Program& p);

// Structural equality ignoring spans and type annotations.
bool ast_equal(const Program& a, const Program& b);
bool expr_equal(const Expr& a, const Expr& b);

}  // namespace lw::lang
