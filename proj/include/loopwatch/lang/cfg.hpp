#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loopwatch/lang/ast.hpp"

// Control flow graph per the classic (X, B, E, B_h, B_e) shape: blocks hold
// straight-line assignments, branch conditions live on edges.

namespace lw::lang {

using BlockId = int32_t;
using VarIdx = int32_t;  // index into CFG::vars (declaration order)

struct VarInfo {
  std::string name;
  Scalar type = Scalar::I32;
  std::optional<uint32_t> array_size;
};

struct Instr {
  enum class Kind : uint8_t { Assign, IndexAssign, Nondet, Nop } kind;
  VarIdx target = -1;
  ExprPtr index;  // IndexAssign
  ExprPtr value;  // Assign / IndexAssign
  Span span;
};

// Edge condition: either literal true, or an expression with a polarity.
// The negated form keeps if/else lowering exhaustive and mutually exclusive.
struct EdgeCond {
  ExprPtr expr;  // null means `true`
  bool negated = false;

  bool is_true() const { return expr == nullptr; }
  std::string str() const;
};

struct Edge {
  BlockId from = -1;
  EdgeCond cond;
  BlockId to = -1;
};

struct Block {
  BlockId id = -1;
  std::vector<Instr> instrs;
  std::vector<int> out_edges;  // indices into CFG::edges, evaluation order
  std::vector<int> in_edges;
};

struct CFG {
  std::vector<VarInfo> vars;
  std::vector<Block> blocks;
  std::vector<Edge> edges;
  BlockId entry = 0;
  std::vector<BlockId> header_blocks;  // B_h, all loop headers
  std::vector<BlockId> exit_blocks;    // B_e, all loop exit targets

  VarIdx var_index(const std::string& name) const {
    for (size_t i = 0; i < vars.size(); ++i)
      if (vars[i].name == name) return static_cast<VarIdx>(i);
    return -1;
  }
  bool is_header(BlockId b) const {
    for (BlockId h : header_blocks)
      if (h == b) return true;
    return false;
  }
};

CFG build_cfg(const Program& program);

enum class LoopClass : uint8_t { Linear, NonLinear };

struct Loop {
  int id = 0;
  BlockId header = -1;              // the natural loop's own header
  std::vector<BlockId> headers;     // header plus nested subloop headers
  std::vector<BlockId> region;      // natural loop blocks, sorted
  std::vector<BlockId> exits;       // blocks outside the region targeted from it
  std::vector<EdgeCond> exit_conds; // conditions on region-leaving edges
  LoopClass cls = LoopClass::NonLinear;
  std::vector<std::string> nonlinear_reasons;

  bool contains(BlockId b) const {
    for (BlockId r : region)
      if (r == b) return true;
    return false;
  }
};

struct IrreducibleCFG : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Natural loops from back edges, innermost-first. Throws IrreducibleCFG if a
// retreating edge's target does not dominate its source (unreachable for
// programs lowered from this language; reachable for hand-built graphs).
std::vector<Loop> extract_loops(const CFG& cfg);

// Immediate dominators for every reachable block (entry maps to itself).
std::vector<BlockId> dominators(const CFG& cfg);

struct Classification {
  LoopClass cls;
  std::vector<std::string> reasons;  // violations when NonLinear
};

Classification classify_loop(const CFG& cfg, const Loop& loop);

}  // namespace lw::lang
