#include <algorithm>
#include <sstream>

#include "loopwatch/lang/cfg.hpp"

namespace lw::lang {

std::string EdgeCond::str() const {
  if (is_true()) return "true";
  std::ostringstream os;
  if (negated) os << "!(";
  // Reuse the pretty printer through a tiny shim.
  Program tmp;
  auto s = std::make_shared<Stmt>();
  s->kind = Stmt::Kind::While;
  s->cond = expr;
  tmp.stmts.push_back(s);
  std::string w = pretty_print(tmp);
  // "while (COND) {\n}\n"
  size_t a = w.find('(');
  size_t b = w.rfind(") {");
  os << w.substr(a + 1, b - a - 1);
  if (negated) os << ")";
  return os.str();
}

namespace {

struct Builder {
  const Program& prog;
  CFG cfg;
  BlockId cur;

  explicit Builder(const Program& p) : prog(p) {
    for (const auto& d : p.decls)
      cfg.vars.push_back(VarInfo{d.name, d.type, d.array_size});
    cur = new_block();
    cfg.entry = cur;
  }

  BlockId new_block() {
    Block b;
    b.id = static_cast<BlockId>(cfg.blocks.size());
    cfg.blocks.push_back(std::move(b));
    return static_cast<BlockId>(cfg.blocks.size() - 1);
  }

  void add_edge(BlockId from, EdgeCond cond, BlockId to) {
    int idx = static_cast<int>(cfg.edges.size());
    cfg.edges.push_back(Edge{from, std::move(cond), to});
    cfg.blocks[static_cast<size_t>(from)].out_edges.push_back(idx);
    cfg.blocks[static_cast<size_t>(to)].in_edges.push_back(idx);
  }

  // Lowers statements into the current block; returns the block where
  // control continues (or -1 when control cannot fall through, i.e. after
  // break).
  BlockId lower(const std::vector<StmtPtr>& stmts, BlockId block,
                BlockId break_target) {
    for (const auto& sp : stmts) {
      if (block < 0) return block;  // unreachable tail after break
      const Stmt& s = *sp;
      switch (s.kind) {
        case Stmt::Kind::Skip: {
          Instr in{Instr::Kind::Nop, -1, nullptr, nullptr, s.span};
          cfg.blocks[static_cast<size_t>(block)].instrs.push_back(std::move(in));
          break;
        }
        case Stmt::Kind::Assign: {
          Instr in{Instr::Kind::Assign, cfg.var_index(s.name), nullptr, s.value, s.span};
          cfg.blocks[static_cast<size_t>(block)].instrs.push_back(std::move(in));
          break;
        }
        case Stmt::Kind::IndexAssign: {
          Instr in{Instr::Kind::IndexAssign, cfg.var_index(s.name), s.index, s.value,
                   s.span};
          cfg.blocks[static_cast<size_t>(block)].instrs.push_back(std::move(in));
          break;
        }
        case Stmt::Kind::Nondet: {
          Instr in{Instr::Kind::Nondet, cfg.var_index(s.name), nullptr, nullptr, s.span};
          cfg.blocks[static_cast<size_t>(block)].instrs.push_back(std::move(in));
          break;
        }
        case Stmt::Kind::Break: {
          Instr in{Instr::Kind::Nop, -1, nullptr, nullptr, s.span};
          cfg.blocks[static_cast<size_t>(block)].instrs.push_back(std::move(in));
          add_edge(block, EdgeCond{}, break_target);
          block = -1;
          break;
        }
        case Stmt::Kind::If: {
          BlockId then_b = new_block();
          BlockId else_b = s.else_body.empty() ? -1 : new_block();
          BlockId join = new_block();
          add_edge(block, EdgeCond{s.cond, false}, then_b);
          add_edge(block, EdgeCond{s.cond, true}, else_b >= 0 ? else_b : join);
          BlockId after_then = lower(s.body, then_b, break_target);
          if (after_then >= 0) add_edge(after_then, EdgeCond{}, join);
          if (else_b >= 0) {
            BlockId after_else = lower(s.else_body, else_b, break_target);
            if (after_else >= 0) add_edge(after_else, EdgeCond{}, join);
          }
          block = join;
          break;
        }
        case Stmt::Kind::While: {
          BlockId header = new_block();
          BlockId body = new_block();
          BlockId after = new_block();
          add_edge(block, EdgeCond{}, header);
          add_edge(header, EdgeCond{s.cond, false}, body);
          add_edge(header, EdgeCond{s.cond, true}, after);
          BlockId body_end = lower(s.body, body, after);
          if (body_end >= 0) add_edge(body_end, EdgeCond{}, header);
          block = after;
          break;
        }
      }
    }
    return block;
  }

  // Folds edges guarded by literal booleans: a statically false edge is
  // dropped, a statically true one becomes unconditional. while(true) then
  // has no exit edge and its never-taken branch gets pruned below.
  void fold_literal_edges() {
    for (auto& e : cfg.edges) {
      if (!e.cond.expr || e.cond.expr->kind != Expr::Kind::BoolLit) continue;
      bool taken = e.cond.negated ? !e.cond.expr->bool_lit : e.cond.expr->bool_lit;
      if (taken) {
        e.cond = EdgeCond{};
      } else {
        e.from = -1;  // dropped
      }
    }
  }

  // Drops blocks unreachable from entry (introduced by statements after
  // break and by while(true) exits).
  void prune_unreachable() {
    fold_literal_edges();
    std::vector<bool> reach(cfg.blocks.size(), false);
    std::vector<BlockId> stack{cfg.entry};
    reach[static_cast<size_t>(cfg.entry)] = true;
    while (!stack.empty()) {
      BlockId b = stack.back();
      stack.pop_back();
      for (int ei : cfg.blocks[static_cast<size_t>(b)].out_edges) {
        const Edge& e = cfg.edges[static_cast<size_t>(ei)];
        if (e.from < 0) continue;
        BlockId to = e.to;
        if (!reach[static_cast<size_t>(to)]) {
          reach[static_cast<size_t>(to)] = true;
          stack.push_back(to);
        }
      }
    }
    // Remap ids.
    std::vector<BlockId> remap(cfg.blocks.size(), -1);
    CFG out;
    out.vars = cfg.vars;
    for (const auto& b : cfg.blocks) {
      if (!reach[static_cast<size_t>(b.id)]) continue;
      remap[static_cast<size_t>(b.id)] = static_cast<BlockId>(out.blocks.size());
      Block nb;
      nb.id = remap[static_cast<size_t>(b.id)];
      nb.instrs = b.instrs;
      out.blocks.push_back(std::move(nb));
    }
    for (const auto& b : cfg.blocks) {
      if (!reach[static_cast<size_t>(b.id)]) continue;
      for (int ei : b.out_edges) {
        const Edge& e = cfg.edges[static_cast<size_t>(ei)];
        if (e.from < 0) continue;
        if (!reach[static_cast<size_t>(e.to)]) continue;
        int idx = static_cast<int>(out.edges.size());
        out.edges.push_back(Edge{remap[static_cast<size_t>(e.from)], e.cond,
                                 remap[static_cast<size_t>(e.to)]});
        out.blocks[static_cast<size_t>(remap[static_cast<size_t>(e.from)])]
            .out_edges.push_back(idx);
        out.blocks[static_cast<size_t>(remap[static_cast<size_t>(e.to)])]
            .in_edges.push_back(idx);
      }
    }
    out.entry = remap[static_cast<size_t>(cfg.entry)];
    cfg = std::move(out);
  }
};

}  // namespace

CFG build_cfg(const Program& program) {
  Builder b(program);
  b.lower(program.stmts, b.cur, -1);
  b.prune_unreachable();
  CFG cfg = std::move(b.cfg);
  // Populate header/exit sets from the natural loops.
  for (const Loop& l : extract_loops(cfg)) {
    for (BlockId h : l.headers)
      if (!cfg.is_header(h)) cfg.header_blocks.push_back(h);
    for (BlockId e : l.exits) {
      bool seen = false;
      for (BlockId x : cfg.exit_blocks) seen = seen || x == e;
      if (!seen) cfg.exit_blocks.push_back(e);
    }
  }
  std::sort(cfg.header_blocks.begin(), cfg.header_blocks.end());
  std::sort(cfg.exit_blocks.begin(), cfg.exit_blocks.end());
  return cfg;
}

}  // namespace lw::lang
