#include "loopwatch/lang/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace lw::lang {

std::string Diagnostic::str() const {
  return std::string(kind == Kind::Syntax ? "syntax error" : "type error") + " at " +
         std::to_string(line) + ":" + std::to_string(col) + ": " + message;
}

int bits_of(Scalar t) {
  switch (t) {
    case Scalar::I8:
    case Scalar::U8:
      return 8;
    case Scalar::I16:
    case Scalar::U16:
      return 16;
    case Scalar::I32:
    case Scalar::U32:
      return 32;
    case Scalar::I64:
    case Scalar::U64:
      return 64;
    case Scalar::Bool:
      return 1;
  }
  return 0;
}

bool is_signed(Scalar t) {
  switch (t) {
    case Scalar::I8:
    case Scalar::I16:
    case Scalar::I32:
    case Scalar::I64:
      return true;
    default:
      return false;
  }
}

bool is_bool(Scalar t) { return t == Scalar::Bool; }

const char* scalar_name(Scalar t) {
  switch (t) {
    case Scalar::I8: return "i8";
    case Scalar::I16: return "i16";
    case Scalar::I32: return "i32";
    case Scalar::I64: return "i64";
    case Scalar::U8: return "u8";
    case Scalar::U16: return "u16";
    case Scalar::U32: return "u32";
    case Scalar::U64: return "u64";
    case Scalar::Bool: return "bool";
  }
  return "?";
}

namespace {

const std::unordered_map<std::string, Scalar>& type_names() {
  static const std::unordered_map<std::string, Scalar> m = {
      {"i8", Scalar::I8},   {"i16", Scalar::I16}, {"i32", Scalar::I32},
      {"i64", Scalar::I64}, {"u8", Scalar::U8},   {"u16", Scalar::U16},
      {"u32", Scalar::U32}, {"u64", Scalar::U64}, {"bool", Scalar::Bool},
  };
  return m;
}

struct Lexer {
  const std::string& s;
  size_t pos = 0;
  uint32_t line = 1, col = 1;
  std::vector<Token> out;

  explicit Lexer(const std::string& src) : s(src) {}

  [[noreturn]] void fail(const std::string& msg) {
    throw SyntaxError(Diagnostic{Diagnostic::Kind::Syntax, msg, line, col});
  }

  char peek(size_t off = 0) const { return pos + off < s.size() ? s[pos + off] : '\0'; }

  char advance() {
    char c = s[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  void push(Tok kind, const Span& sp, std::string text = "") {
    Token t{kind, std::move(text), 0, Scalar::I32, sp};
    out.push_back(std::move(t));
  }

  void run() {
    while (pos < s.size()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        while (pos < s.size() && peek() != '\n') advance();
        continue;
      }
      Span sp{static_cast<uint32_t>(pos), 0, line, col};
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
          word += advance();
        sp.end = static_cast<uint32_t>(pos);
        auto ty = type_names().find(word);
        if (ty != type_names().end()) {
          Token t{Tok::Type, word, 0, ty->second, sp};
          out.push_back(std::move(t));
        } else if (word == "if") {
          push(Tok::KwIf, sp, word);
        } else if (word == "else") {
          push(Tok::KwElse, sp, word);
        } else if (word == "while") {
          push(Tok::KwWhile, sp, word);
        } else if (word == "break") {
          push(Tok::KwBreak, sp, word);
        } else if (word == "skip") {
          push(Tok::KwSkip, sp, word);
        } else if (word == "nondet") {
          push(Tok::KwNondet, sp, word);
        } else if (word == "true") {
          push(Tok::KwTrue, sp, word);
        } else if (word == "false") {
          push(Tok::KwFalse, sp, word);
        } else {
          push(Tok::Ident, sp, word);
        }
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        uint64_t v = 0;
        std::string text;
        if (c == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
          text += advance();
          text += advance();
          if (!std::isxdigit(static_cast<unsigned char>(peek()))) fail("expected hex digit");
          while (std::isxdigit(static_cast<unsigned char>(peek()))) {
            char d = advance();
            text += d;
            uint64_t digit = std::isdigit(static_cast<unsigned char>(d))
                                 ? static_cast<uint64_t>(d - '0')
                                 : static_cast<uint64_t>(std::tolower(d) - 'a' + 10);
            if (v > (UINT64_MAX - digit) / 16) fail("integer literal overflows 64 bits");
            v = v * 16 + digit;
          }
        } else {
          while (std::isdigit(static_cast<unsigned char>(peek()))) {
            char d = advance();
            text += d;
            uint64_t digit = static_cast<uint64_t>(d - '0');
            if (v > (UINT64_MAX - digit) / 10) fail("integer literal overflows 64 bits");
            v = v * 10 + digit;
          }
        }
        sp.end = static_cast<uint32_t>(pos);
        Token t{Tok::Int, std::move(text), v, Scalar::I32, sp};
        out.push_back(std::move(t));
        continue;
      }
      auto two = [&](char a, char b) { return c == a && peek(1) == b; };
      Tok kind;
      int len = 2;
      if (two('<', '<')) kind = Tok::Shl;
      else if (two('>', '>')) kind = Tok::Shr;
      else if (two('<', '=')) kind = Tok::Le;
      else if (two('>', '=')) kind = Tok::Ge;
      else if (two('=', '=')) kind = Tok::EqEq;
      else if (two('!', '=')) kind = Tok::NeEq;
      else if (two('&', '&')) kind = Tok::AndAnd;
      else if (two('|', '|')) kind = Tok::OrOr;
      else {
        len = 1;
        switch (c) {
          case '(': kind = Tok::LParen; break;
          case ')': kind = Tok::RParen; break;
          case '{': kind = Tok::LBrace; break;
          case '}': kind = Tok::RBrace; break;
          case '[': kind = Tok::LBracket; break;
          case ']': kind = Tok::RBracket; break;
          case ';': kind = Tok::Semi; break;
          case '=': kind = Tok::Assign; break;
          case '+': kind = Tok::Plus; break;
          case '-': kind = Tok::Minus; break;
          case '*': kind = Tok::Star; break;
          case '/': kind = Tok::Slash; break;
          case '%': kind = Tok::Percent; break;
          case '&': kind = Tok::Amp; break;
          case '|': kind = Tok::Pipe; break;
          case '^': kind = Tok::Caret; break;
          case '~': kind = Tok::Tilde; break;
          case '!': kind = Tok::Bang; break;
          case '<': kind = Tok::Lt; break;
          case '>': kind = Tok::Gt; break;
          default:
            fail(std::string("unexpected character '") + c + "'");
        }
      }
      for (int i = 0; i < len; ++i) advance();
      sp.end = static_cast<uint32_t>(pos);
      push(kind, sp);
    }
    Span sp{static_cast<uint32_t>(pos), static_cast<uint32_t>(pos), line, col};
    push(Tok::Eof, sp);
  }
};

}  // namespace

std::vector<Token> lex(const std::string& source) {
  Lexer lx(source);
  lx.run();
  return std::move(lx.out);
}

}  // namespace lw::lang
