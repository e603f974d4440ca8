#include "loopwatch/exec/bytecode.hpp"

namespace lw::exec {

using lang::BinOp;
using lang::Expr;
using lang::UnOp;

int64_t normalize(uint64_t raw, Scalar type) {
  int bits = lang::bits_of(type);
  if (type == Scalar::Bool) return static_cast<int64_t>(raw & 1);
  if (bits == 64) return static_cast<int64_t>(raw);  // canonical u64 is the bit pattern
  uint64_t mask = (uint64_t(1) << bits) - 1;
  uint64_t v = raw & mask;
  if (lang::is_signed(type)) {
    uint64_t sign = uint64_t(1) << (bits - 1);
    if (v & sign) return static_cast<int64_t>(v | ~mask);
  }
  return static_cast<int64_t>(v);
}

namespace {

struct Compiler {
  const lang::CFG& cfg;
  Code out;

  void expr(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit: {
        Op op{Op::Code::PushLit};
        op.lit = normalize(e.lit, e.type);
        op.span = e.span;
        out.ops.push_back(op);
        return;
      }
      case Expr::Kind::BoolLit: {
        Op op{Op::Code::PushLit};
        op.lit = e.bool_lit ? 1 : 0;
        op.span = e.span;
        out.ops.push_back(op);
        return;
      }
      case Expr::Kind::Var: {
        Op op{Op::Code::PushVar};
        op.var = cfg.var_index(e.name);
        op.span = e.span;
        out.ops.push_back(op);
        return;
      }
      case Expr::Kind::Index: {
        expr(*e.index);
        Op op{Op::Code::PushElem};
        op.var = cfg.var_index(e.name);
        op.span = e.span;
        out.ops.push_back(op);
        return;
      }
      case Expr::Kind::Unary: {
        expr(*e.lhs);
        Op op{Op::Code::Unary};
        op.un = e.un;
        op.type = e.type;
        op.span = e.span;
        out.ops.push_back(op);
        return;
      }
      case Expr::Kind::Binary: {
        if (e.bin == BinOp::LogAnd || e.bin == BinOp::LogOr) {
          expr(*e.lhs);
          Op jmp{e.bin == BinOp::LogAnd ? Op::Code::JumpFalsePeek
                                        : Op::Code::JumpTruePeek};
          jmp.span = e.span;
          size_t at = out.ops.size();
          out.ops.push_back(jmp);
          Op pop{Op::Code::Pop};
          pop.span = e.span;
          out.ops.push_back(pop);
          expr(*e.rhs);
          out.ops[at].jump = static_cast<int>(out.ops.size());
          return;
        }
        expr(*e.lhs);
        expr(*e.rhs);
        Op op{Op::Code::Binary};
        op.bin = e.bin;
        op.type = e.lhs->type;  // operand width drives wrapping and compares
        op.span = e.span;
        out.ops.push_back(op);
        return;
      }
    }
  }
};

}  // namespace

Code compile_expr(const lang::CFG& cfg, const Expr& e) {
  Compiler c{cfg, {}};
  c.expr(e);
  return std::move(c.out);
}

Store Store::zeros(const lang::CFG& cfg) {
  Store s;
  s.scalars.assign(cfg.vars.size(), 0);
  s.arrays.resize(cfg.vars.size());
  for (size_t i = 0; i < cfg.vars.size(); ++i)
    if (cfg.vars[i].array_size) s.arrays[i].assign(*cfg.vars[i].array_size, 0);
  return s;
}

std::optional<int64_t> eval_code(const Code& code, const Store& store,
                                 std::vector<int64_t>& stack,
                                 std::optional<RuntimeErrorInfo>& err) {
  stack.clear();
  size_t pc = 0;
  const size_t n = code.ops.size();
  while (pc < n) {
    const Op& op = code.ops[pc];
    switch (op.code) {
      case Op::Code::PushLit:
        stack.push_back(op.lit);
        ++pc;
        break;
      case Op::Code::PushVar:
        stack.push_back(store.scalars[static_cast<size_t>(op.var)]);
        ++pc;
        break;
      case Op::Code::PushElem: {
        int64_t idx = stack.back();
        stack.pop_back();
        const auto& arr = store.arrays[static_cast<size_t>(op.var)];
        if (idx < 0 || static_cast<uint64_t>(idx) >= arr.size()) {
          err = RuntimeErrorInfo{RuntimeErrorInfo::Kind::OobIndex, op.span};
          return std::nullopt;
        }
        stack.push_back(arr[static_cast<size_t>(idx)]);
        ++pc;
        break;
      }
      case Op::Code::Unary: {
        int64_t v = stack.back();
        stack.pop_back();
        switch (op.un) {
          case UnOp::Neg:
            stack.push_back(normalize(~static_cast<uint64_t>(v) + 1, op.type));
            break;
          case UnOp::BitNot:
            stack.push_back(normalize(~static_cast<uint64_t>(v), op.type));
            break;
          case UnOp::LogNot:
            stack.push_back(v == 0 ? 1 : 0);
            break;
        }
        ++pc;
        break;
      }
      case Op::Code::Binary: {
        int64_t b = stack.back();
        stack.pop_back();
        int64_t a = stack.back();
        stack.pop_back();
        uint64_t ua = static_cast<uint64_t>(a), ub = static_cast<uint64_t>(b);
        int bits = lang::bits_of(op.type);
        bool sgn = lang::is_signed(op.type);
        int64_t r = 0;
        switch (op.bin) {
          case BinOp::Add: r = normalize(ua + ub, op.type); break;
          case BinOp::Sub: r = normalize(ua - ub, op.type); break;
          case BinOp::Mul: r = normalize(ua * ub, op.type); break;
          case BinOp::Div: {
            if (b == 0) {
              err = RuntimeErrorInfo{RuntimeErrorInfo::Kind::DivByZero, op.span};
              return std::nullopt;
            }
            if (sgn) {
              // type_min / -1 wraps back to type_min at every width
              int64_t q = (a == INT64_MIN && b == -1) ? a : a / b;
              r = normalize(static_cast<uint64_t>(q), op.type);
            } else {
              r = normalize(ua / ub, op.type);
            }
            break;
          }
          case BinOp::Mod: {
            if (b == 0) {
              err = RuntimeErrorInfo{RuntimeErrorInfo::Kind::ModByZero, op.span};
              return std::nullopt;
            }
            if (sgn) {
              int64_t m = (a == INT64_MIN && b == -1) ? 0 : a % b;
              r = normalize(static_cast<uint64_t>(m), op.type);
            } else {
              r = normalize(ua % ub, op.type);
            }
            break;
          }
          case BinOp::Shl: {
            unsigned sh = static_cast<unsigned>(ub & static_cast<uint64_t>(bits - 1));
            r = normalize(ua << sh, op.type);
            break;
          }
          case BinOp::Shr: {
            unsigned sh = static_cast<unsigned>(ub & static_cast<uint64_t>(bits - 1));
            if (sgn) {
              r = normalize(static_cast<uint64_t>(a >> sh), op.type);
            } else {
              r = normalize(ua >> sh, op.type);
            }
            break;
          }
          case BinOp::BitAnd: r = normalize(ua & ub, op.type); break;
          case BinOp::BitOr: r = normalize(ua | ub, op.type); break;
          case BinOp::BitXor: r = normalize(ua ^ ub, op.type); break;
          case BinOp::Lt: r = sgn || bits < 64 ? a < b : ua < ub; break;
          case BinOp::Le: r = sgn || bits < 64 ? a <= b : ua <= ub; break;
          case BinOp::Gt: r = sgn || bits < 64 ? a > b : ua > ub; break;
          case BinOp::Ge: r = sgn || bits < 64 ? a >= b : ua >= ub; break;
          case BinOp::EqEq: r = a == b; break;
          case BinOp::NeEq: r = a != b; break;
          case BinOp::LogAnd:
          case BinOp::LogOr:
            break;  // compiled to jumps
        }
        stack.push_back(r);
        ++pc;
        break;
      }
      case Op::Code::JumpFalsePeek:
        pc = stack.back() == 0 ? static_cast<size_t>(op.jump) : pc + 1;
        break;
      case Op::Code::JumpTruePeek:
        pc = stack.back() != 0 ? static_cast<size_t>(op.jump) : pc + 1;
        break;
      case Op::Code::Pop:
        stack.pop_back();
        ++pc;
        break;
    }
  }
  return stack.back();
}

}  // namespace lw::exec
