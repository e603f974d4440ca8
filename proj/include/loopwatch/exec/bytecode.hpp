#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "loopwatch/lang/cfg.hpp"

// Flat postfix code for expression evaluation with short-circuit jumps.
// Values are kept canonical: unsigned types in [0, 2^w), signed types
// sign-extended into int64_t.

namespace lw::exec {

using lang::Scalar;

int64_t normalize(uint64_t raw, Scalar type);

struct RuntimeErrorInfo {
  enum class Kind : uint8_t { DivByZero, ModByZero, OobIndex, TapeExhausted } kind;
  lang::Span span;
  const char* what() const {
    switch (kind) {
      case Kind::DivByZero: return "division by zero";
      case Kind::ModByZero: return "modulo by zero";
      case Kind::OobIndex: return "array index out of bounds";
      case Kind::TapeExhausted: return "input tape exhausted";
    }
    return "?";
  }
};

struct Op {
  enum class Code : uint8_t {
    PushLit, PushVar, PushElem, Unary, Binary, JumpFalsePeek, JumpTruePeek, Pop,
  } code;
  int64_t lit = 0;
  lang::VarIdx var = -1;
  Scalar type = Scalar::I64;  // operation width for Unary/Binary/PushElem index wrap
  lang::UnOp un = lang::UnOp::Neg;
  lang::BinOp bin = lang::BinOp::Add;
  int jump = 0;  // absolute target for jumps
  lang::Span span;
};

struct Code {
  std::vector<Op> ops;
};

Code compile_expr(const lang::CFG& cfg, const lang::Expr& e);

struct Store {
  std::vector<int64_t> scalars;                // per VarIdx
  std::vector<std::vector<int64_t>> arrays;    // per VarIdx, empty for scalars

  static Store zeros(const lang::CFG& cfg);
  bool operator==(const Store& o) const = default;
};

// Evaluates compiled code against a store. Returns the result value or a
// runtime error. `scratch` avoids reallocation in hot loops.
std::optional<int64_t> eval_code(const Code& code, const Store& store,
                                 std::vector<int64_t>& scratch,
                                 std::optional<RuntimeErrorInfo>& err);

}  // namespace lw::exec
