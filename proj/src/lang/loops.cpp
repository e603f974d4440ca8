#include <algorithm>
#include <map>
#include <set>

#include "loopwatch/lang/cfg.hpp"

namespace lw::lang {

namespace {

// Reverse postorder over the forward CFG.
std::vector<BlockId> rpo(const CFG& cfg) {
  std::vector<bool> seen(cfg.blocks.size(), false);
  std::vector<BlockId> post;
  std::vector<std::pair<BlockId, size_t>> stack;
  stack.emplace_back(cfg.entry, 0);
  seen[static_cast<size_t>(cfg.entry)] = true;
  while (!stack.empty()) {
    auto& [b, i] = stack.back();
    const Block& blk = cfg.blocks[static_cast<size_t>(b)];
    if (i < blk.out_edges.size()) {
      BlockId to = cfg.edges[static_cast<size_t>(blk.out_edges[i++])].to;
      if (!seen[static_cast<size_t>(to)]) {
        seen[static_cast<size_t>(to)] = true;
        stack.emplace_back(to, 0);
      }
    } else {
      post.push_back(b);
      stack.pop_back();
    }
  }
  std::reverse(post.begin(), post.end());
  return post;
}

}  // namespace

std::vector<BlockId> dominators(const CFG& cfg) {
  // Cooper-Harvey-Kennedy iterative algorithm over RPO.
  std::vector<BlockId> order = rpo(cfg);
  std::vector<int> rpo_index(cfg.blocks.size(), -1);
  for (size_t i = 0; i < order.size(); ++i)
    rpo_index[static_cast<size_t>(order[i])] = static_cast<int>(i);

  std::vector<BlockId> idom(cfg.blocks.size(), -1);
  idom[static_cast<size_t>(cfg.entry)] = cfg.entry;

  auto intersect = [&](BlockId a, BlockId b) {
    while (a != b) {
      while (rpo_index[static_cast<size_t>(a)] > rpo_index[static_cast<size_t>(b)])
        a = idom[static_cast<size_t>(a)];
      while (rpo_index[static_cast<size_t>(b)] > rpo_index[static_cast<size_t>(a)])
        b = idom[static_cast<size_t>(b)];
    }
    return a;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (BlockId b : order) {
      if (b == cfg.entry) continue;
      BlockId new_idom = -1;
      for (int ei : cfg.blocks[static_cast<size_t>(b)].in_edges) {
        BlockId p = cfg.edges[static_cast<size_t>(ei)].from;
        if (p < 0 || idom[static_cast<size_t>(p)] < 0) continue;
        new_idom = new_idom < 0 ? p : intersect(new_idom, p);
      }
      if (new_idom >= 0 && idom[static_cast<size_t>(b)] != new_idom) {
        idom[static_cast<size_t>(b)] = new_idom;
        changed = true;
      }
    }
  }
  return idom;
}

namespace {

bool dominates(const std::vector<BlockId>& idom, BlockId a, BlockId b) {
  // Walks the dominator tree upward from b.
  while (true) {
    if (a == b) return true;
    BlockId up = idom[static_cast<size_t>(b)];
    if (up == b || up < 0) return false;
    b = up;
  }
}

bool expr_uses_array(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Index:
      return true;
    case Expr::Kind::Unary:
      return expr_uses_array(*e.lhs);
    case Expr::Kind::Binary:
      return expr_uses_array(*e.lhs) || expr_uses_array(*e.rhs);
    default:
      return false;
  }
}

// x := x + c, x := x - c, or x := c with c made of literals only.
bool is_counter_assignment(const CFG& cfg, const Instr& in) {
  if (in.kind != Instr::Kind::Assign) return false;
  const Expr& e = *in.value;
  auto is_const = [](const Expr& x) {
    return x.kind == Expr::Kind::IntLit ||
           (x.kind == Expr::Kind::Unary && x.un == UnOp::Neg &&
            x.lhs->kind == Expr::Kind::IntLit);
  };
  if (is_const(e)) return true;
  if (e.kind == Expr::Kind::Binary && (e.bin == BinOp::Add || e.bin == BinOp::Sub)) {
    const std::string& tname = cfg.vars[static_cast<size_t>(in.target)].name;
    return e.lhs->kind == Expr::Kind::Var && e.lhs->name == tname && is_const(*e.rhs);
  }
  return false;
}

// A single comparison (possibly negated at the edge) between linear integer
// terms built from +, -, * by literals, and scalar variables.
bool linear_term(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
      return true;
    case Expr::Kind::Var:
      return !is_bool(e.type);
    case Expr::Kind::Unary:
      return e.un == UnOp::Neg && linear_term(*e.lhs);
    case Expr::Kind::Binary:
      switch (e.bin) {
        case BinOp::Add:
        case BinOp::Sub:
          return linear_term(*e.lhs) && linear_term(*e.rhs);
        case BinOp::Mul: {
          auto constant = [](const Expr& x) {
            return x.kind == Expr::Kind::IntLit ||
                   (x.kind == Expr::Kind::Unary && x.un == UnOp::Neg &&
                    x.lhs->kind == Expr::Kind::IntLit);
          };
          return (constant(*e.lhs) && linear_term(*e.rhs)) ||
                 (constant(*e.rhs) && linear_term(*e.lhs));
        }
        default:
          return false;
      }
    default:
      return false;
  }
}

bool linear_comparison(const Expr& e) {
  if (e.kind != Expr::Kind::Binary) return false;
  switch (e.bin) {
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge:
    case BinOp::EqEq:
    case BinOp::NeEq:
      return !is_bool(e.lhs->type) && linear_term(*e.lhs) && linear_term(*e.rhs);
    default:
      return false;
  }
}

}  // namespace

std::vector<Loop> extract_loops(const CFG& cfg) {
  std::vector<BlockId> idom = dominators(cfg);

  // Retreating edges must be back edges (target dominates source).
  std::vector<std::pair<BlockId, BlockId>> back_edges;  // (tail, header)
  {
    std::vector<int> rpo_index(cfg.blocks.size(), -1);
    std::vector<BlockId> order = rpo(cfg);
    for (size_t i = 0; i < order.size(); ++i)
      rpo_index[static_cast<size_t>(order[i])] = static_cast<int>(i);
    for (const Edge& e : cfg.edges) {
      if (e.from < 0) continue;
      if (rpo_index[static_cast<size_t>(e.to)] <= rpo_index[static_cast<size_t>(e.from)]) {
        if (!dominates(idom, e.to, e.from))
          throw IrreducibleCFG("retreating edge " + std::to_string(e.from) + "->" +
                               std::to_string(e.to) + " into a non-dominator");
        back_edges.emplace_back(e.from, e.to);
      }
    }
  }

  // Natural loop of each back edge; loops sharing a header are merged.
  std::map<BlockId, std::set<BlockId>> regions;  // header -> blocks
  for (auto [tail, header] : back_edges) {
    std::set<BlockId>& region = regions[header];
    region.insert(header);
    std::vector<BlockId> stack;
    if (!region.count(tail)) {
      region.insert(tail);
      stack.push_back(tail);
    }
    while (!stack.empty()) {
      BlockId b = stack.back();
      stack.pop_back();
      for (int ei : cfg.blocks[static_cast<size_t>(b)].in_edges) {
        BlockId p = cfg.edges[static_cast<size_t>(ei)].from;
        if (p < 0 || region.count(p)) continue;
        region.insert(p);
        stack.push_back(p);
      }
    }
  }

  std::vector<Loop> loops;
  for (const auto& [header, region] : regions) {
    Loop l;
    l.header = header;
    l.region.assign(region.begin(), region.end());
    loops.push_back(std::move(l));
  }
  // Innermost first: smaller regions first, header id breaks ties.
  std::sort(loops.begin(), loops.end(), [](const Loop& a, const Loop& b) {
    if (a.region.size() != b.region.size()) return a.region.size() < b.region.size();
    return a.header < b.header;
  });
  for (size_t i = 0; i < loops.size(); ++i) loops[i].id = static_cast<int>(i);

  // Headers (own + nested), exits, exit conditions.
  for (Loop& l : loops) {
    l.headers.push_back(l.header);
    for (const Loop& other : loops) {
      if (other.header == l.header) continue;
      if (l.contains(other.header)) l.headers.push_back(other.header);
    }
    std::sort(l.headers.begin(), l.headers.end());
    for (const Edge& e : cfg.edges) {
      if (e.from < 0) continue;
      if (l.contains(e.from) && !l.contains(e.to)) {
        bool seen = false;
        for (BlockId x : l.exits) seen = seen || x == e.to;
        if (!seen) l.exits.push_back(e.to);
        l.exit_conds.push_back(e.cond);
      }
    }
    std::sort(l.exits.begin(), l.exits.end());
    Classification c = classify_loop(cfg, l);
    l.cls = c.cls;
    l.nonlinear_reasons = c.reasons;
  }
  return loops;
}

Classification classify_loop(const CFG& cfg, const Loop& loop) {
  std::vector<std::string> reasons;
  for (BlockId h : loop.headers)
    if (h != loop.header) {
      reasons.push_back("nested loop at block " + std::to_string(h));
      break;
    }
  for (BlockId b : loop.region) {
    const Block& blk = cfg.blocks[static_cast<size_t>(b)];
    for (const Instr& in : blk.instrs) {
      switch (in.kind) {
        case Instr::Kind::Nop:
          break;
        case Instr::Kind::Nondet:
          reasons.push_back("nondet() in loop body");
          break;
        case Instr::Kind::IndexAssign:
          reasons.push_back("array store in loop body");
          break;
        case Instr::Kind::Assign:
          if (expr_uses_array(*in.value)) {
            reasons.push_back("array load in loop body");
          } else if (!is_counter_assignment(cfg, in)) {
            reasons.push_back("assignment to '" +
                              cfg.vars[static_cast<size_t>(in.target)].name +
                              "' is not x := x +/- c or x := c");
          }
          break;
      }
    }
    for (int ei : blk.out_edges) {
      const Edge& e = cfg.edges[static_cast<size_t>(ei)];
      if (e.from < 0) continue;
      if (e.cond.is_true()) continue;
      if (expr_uses_array(*e.cond.expr)) {
        reasons.push_back("array access in branch condition");
      } else if (!linear_comparison(*e.cond.expr)) {
        reasons.push_back("branch condition is not a linear comparison");
      }
    }
  }
  std::sort(reasons.begin(), reasons.end());
  reasons.erase(std::unique(reasons.begin(), reasons.end()), reasons.end());
  if (reasons.empty()) return {LoopClass::Linear, {}};
  return {LoopClass::NonLinear, std::move(reasons)};
}

}  // namespace lw::lang
