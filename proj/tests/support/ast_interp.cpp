#include "support/ast_interp.hpp"

#include <stdexcept>

namespace lw::test {

using namespace lw::lang;

namespace {

struct Abort {
  std::string what;
};
struct BudgetHit {};
struct BreakHit {};

struct Interp {
  const Program& prog;
  const std::vector<int64_t>& tape;
  size_t tape_pos = 0;
  uint64_t steps = 0, tests = 0;
  uint64_t max_steps, max_tests;
  AstStore store;

  Interp(const Program& p, const std::vector<int64_t>& t, uint64_t ms, uint64_t mt)
      : prog(p), tape(t), max_steps(ms), max_tests(mt) {
    for (const auto& d : p.decls) {
      if (d.array_size)
        store.arrays[d.name] = std::vector<int64_t>(*d.array_size, 0);
      else
        store.scalars[d.name] = 0;
    }
  }

  static int64_t wrap(uint64_t raw, Scalar t) {
    if (t == Scalar::Bool) return static_cast<int64_t>(raw & 1);
    int bits = bits_of(t);
    if (bits == 64) return static_cast<int64_t>(raw);
    uint64_t mask = (uint64_t(1) << bits) - 1;
    uint64_t v = raw & mask;
    if (is_signed(t) && (v >> (bits - 1)))
      return static_cast<int64_t>(v | ~mask);
    return static_cast<int64_t>(v);
  }

  int64_t eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit:
        return wrap(e.lit, e.type);
      case Expr::Kind::BoolLit:
        return e.bool_lit ? 1 : 0;
      case Expr::Kind::Var:
        return store.scalars.at(e.name);
      case Expr::Kind::Index: {
        int64_t i = eval(*e.index);
        const auto& arr = store.arrays.at(e.name);
        if (i < 0 || static_cast<uint64_t>(i) >= arr.size())
          throw Abort{"array index out of bounds"};
        return arr[static_cast<size_t>(i)];
      }
      case Expr::Kind::Unary: {
        if (e.un == UnOp::LogNot) return eval(*e.lhs) == 0 ? 1 : 0;
        int64_t v = eval(*e.lhs);
        uint64_t raw = static_cast<uint64_t>(v);
        return wrap(e.un == UnOp::Neg ? ~raw + 1 : ~raw, e.type);
      }
      case Expr::Kind::Binary: {
        if (e.bin == BinOp::LogAnd) {
          if (eval(*e.lhs) == 0) return 0;
          return eval(*e.rhs);
        }
        if (e.bin == BinOp::LogOr) {
          if (eval(*e.lhs) != 0) return 1;
          return eval(*e.rhs);
        }
        int64_t a = eval(*e.lhs);
        int64_t b = eval(*e.rhs);
        Scalar t = e.lhs->type;
        uint64_t ua = static_cast<uint64_t>(a), ub = static_cast<uint64_t>(b);
        bool sgn = is_signed(t);
        bool wide_unsigned = !sgn && bits_of(t) == 64;
        switch (e.bin) {
          case BinOp::Add: return wrap(ua + ub, t);
          case BinOp::Sub: return wrap(ua - ub, t);
          case BinOp::Mul: return wrap(ua * ub, t);
          case BinOp::Div:
            if (b == 0) throw Abort{"division by zero"};
            if (!sgn) return wrap(ua / ub, t);
            if (a == INT64_MIN && b == -1) return wrap(ua, t);
            return wrap(static_cast<uint64_t>(a / b), t);
          case BinOp::Mod:
            if (b == 0) throw Abort{"modulo by zero"};
            if (!sgn) return wrap(ua % ub, t);
            if (a == INT64_MIN && b == -1) return 0;
            return wrap(static_cast<uint64_t>(a % b), t);
          case BinOp::Shl:
            return wrap(ua << (ub & static_cast<uint64_t>(bits_of(t) - 1)), t);
          case BinOp::Shr: {
            unsigned sh = static_cast<unsigned>(ub & static_cast<uint64_t>(bits_of(t) - 1));
            return sgn ? wrap(static_cast<uint64_t>(a >> sh), t) : wrap(ua >> sh, t);
          }
          case BinOp::BitAnd: return wrap(ua & ub, t);
          case BinOp::BitOr: return wrap(ua | ub, t);
          case BinOp::BitXor: return wrap(ua ^ ub, t);
          case BinOp::Lt: return wide_unsigned ? ua < ub : a < b;
          case BinOp::Le: return wide_unsigned ? ua <= ub : a <= b;
          case BinOp::Gt: return wide_unsigned ? ua > ub : a > b;
          case BinOp::Ge: return wide_unsigned ? ua >= ub : a >= b;
          case BinOp::EqEq: return a == b;
          case BinOp::NeEq: return a != b;
          default:
            throw std::logic_error("ast_interp: bad binop");
        }
      }
    }
    throw std::logic_error("ast_interp: bad expr");
  }

  void step() {
    if (++steps > max_steps) throw BudgetHit{};
  }

  void exec(const std::vector<StmtPtr>& stmts) {
    for (const auto& sp : stmts) {
      const Stmt& s = *sp;
      switch (s.kind) {
        case Stmt::Kind::Skip:
          step();
          break;
        case Stmt::Kind::Break:
          step();
          throw BreakHit{};
        case Stmt::Kind::Assign: {
          step();
          int64_t v = eval(*s.value);
          const Decl* d = prog.find_decl(s.name);
          store.scalars[s.name] = wrap(static_cast<uint64_t>(v), d->type);
          break;
        }
        case Stmt::Kind::IndexAssign: {
          step();
          int64_t i = eval(*s.index);
          int64_t v = eval(*s.value);
          auto& arr = store.arrays.at(s.name);
          if (i < 0 || static_cast<uint64_t>(i) >= arr.size())
            throw Abort{"array index out of bounds"};
          const Decl* d = prog.find_decl(s.name);
          arr[static_cast<size_t>(i)] = wrap(static_cast<uint64_t>(v), d->type);
          break;
        }
        case Stmt::Kind::Nondet: {
          step();
          int64_t raw = tape_pos < tape.size() ? tape[tape_pos++] : (++tape_pos, 0);
          const Decl* d = prog.find_decl(s.name);
          store.scalars[s.name] = wrap(static_cast<uint64_t>(raw), d->type);
          break;
        }
        case Stmt::Kind::If: {
          if (eval(*s.cond) != 0)
            exec(s.body);
          else
            exec(s.else_body);
          break;
        }
        case Stmt::Kind::While: {
          while (true) {
            if (++tests > max_tests) throw BudgetHit{};
            if (eval(*s.cond) == 0) break;
            try {
              exec(s.body);
            } catch (const BreakHit&) {
              break;
            }
          }
          break;
        }
      }
    }
  }
};

}  // namespace

AstResult ast_run(const Program& p, const std::vector<int64_t>& tape,
                  uint64_t max_steps, uint64_t max_loop_tests) {
  Interp in(p, tape, max_steps, max_loop_tests);
  AstResult out;
  try {
    in.exec(p.stmts);
    out.stop = AstResult::Stop::Terminated;
  } catch (const Abort& a) {
    out.stop = AstResult::Stop::RuntimeError;
    out.error = a.what;
  } catch (const BudgetHit&) {
    out.stop = AstResult::Stop::Budget;
  }
  out.steps = in.steps;
  out.store = std::move(in.store);
  return out;
}

}  // namespace lw::test
