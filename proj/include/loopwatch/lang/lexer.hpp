#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loopwatch/lang/ast.hpp"

namespace lw::lang {

enum class Tok : uint8_t {
  Ident, Int, Type, KwIf, KwElse, KwWhile, KwBreak, KwSkip, KwNondet, KwTrue, KwFalse,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket, Semi, Assign,
  Plus, Minus, Star, Slash, Percent, Shl, Shr, Amp, Pipe, Caret, Tilde, Bang,
  Lt, Le, Gt, Ge, EqEq, NeEq, AndAnd, OrOr, Eof,
};

struct Token {
  Tok kind;
  std::string text;
  uint64_t value = 0;  // Int
  Scalar type = Scalar::I32;  // Type
  Span span;
};

std::vector<Token> lex(const std::string& source);  // throws SyntaxError

}  // namespace lw::lang
