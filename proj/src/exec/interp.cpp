#include "loopwatch/exec/interp.hpp"

namespace lw::exec {

using lang::BlockId;
using lang::Instr;

Machine::Machine(const lang::CFG& cfg) : cfg_(&cfg) {
  std::vector<lang::Loop> loops = lang::extract_loops(cfg);
  blocks_.resize(cfg.blocks.size());
  for (const auto& b : cfg.blocks) {
    CompiledBlock& cb = blocks_[static_cast<size_t>(b.id)];
    cb.is_header = cfg.is_header(b.id);
    for (const Instr& in : b.instrs) {
      CompiledInstr ci;
      ci.kind = in.kind;
      ci.target = in.target;
      ci.span = in.span;
      if (in.target >= 0) ci.type = cfg.vars[static_cast<size_t>(in.target)].type;
      if (in.index) ci.index = compile_expr(cfg, *in.index);
      if (in.value) ci.value = compile_expr(cfg, *in.value);
      cb.instrs.push_back(std::move(ci));
    }
    for (int ei : b.out_edges) {
      const lang::Edge& e = cfg.edges[static_cast<size_t>(ei)];
      if (e.from < 0) continue;
      CompiledEdge ce;
      ce.to = e.to;
      ce.edge_index = ei;
      ce.negated = e.cond.negated;
      if (!e.cond.is_true()) ce.cond = compile_expr(cfg, *e.cond.expr);
      for (const lang::Loop& l : loops) {
        if (l.header == e.to && !l.contains(e.from)) ce.activates_loop = true;
      }
      cb.out.push_back(std::move(ce));
    }
  }
}

RawResult Machine::run_from(BlockId start, Store& store, InputTape& tape,
                            const RunOptions& opts) const {
  RawResult res;
  std::vector<int64_t> scratch;
  std::vector<uint64_t> header_visit_count(blocks_.size(), 0);
  BlockId block = start;
  bool first = true;

  while (true) {
    const CompiledBlock& cb = blocks_[static_cast<size_t>(block)];
    if (opts.block_trace && opts.block_trace->size() < opts.block_trace_cap)
      opts.block_trace->push_back(block);

    if (cb.is_header) {
      // Entering the run at a header counts as activating its loop.
      if (first && opts.hook) opts.hook->on_loop_entry(block);
      ++res.header_visits;
      if (res.header_visits > opts.limits.max_header_visits) {
        res.stop = StopKind::Budget;
        return res;
      }
      uint64_t visit = header_visit_count[static_cast<size_t>(block)]++;
      if (opts.hook && !opts.hook->on_header(block, visit, store)) {
        res.stop = StopKind::HookStop;
        return res;
      }
    }
    first = false;

    for (const CompiledInstr& in : cb.instrs) {
      ++res.steps;
      if (res.steps > opts.limits.max_steps) {
        res.stop = StopKind::Budget;
        return res;
      }
      switch (in.kind) {
        case Instr::Kind::Nop:
          break;
        case Instr::Kind::Assign: {
          std::optional<RuntimeErrorInfo> err;
          auto v = eval_code(in.value, store, scratch, err);
          if (!v) {
            res.stop = StopKind::RuntimeError;
            res.error = err;
            return res;
          }
          store.scalars[static_cast<size_t>(in.target)] =
              normalize(static_cast<uint64_t>(*v), in.type);
          break;
        }
        case Instr::Kind::IndexAssign: {
          std::optional<RuntimeErrorInfo> err;
          auto idx = eval_code(in.index, store, scratch, err);
          if (!idx) {
            res.stop = StopKind::RuntimeError;
            res.error = err;
            return res;
          }
          auto v = eval_code(in.value, store, scratch, err);
          if (!v) {
            res.stop = StopKind::RuntimeError;
            res.error = err;
            return res;
          }
          auto& arr = store.arrays[static_cast<size_t>(in.target)];
          if (*idx < 0 || static_cast<uint64_t>(*idx) >= arr.size()) {
            res.stop = StopKind::RuntimeError;
            res.error = RuntimeErrorInfo{RuntimeErrorInfo::Kind::OobIndex, in.span};
            return res;
          }
          arr[static_cast<size_t>(*idx)] = normalize(static_cast<uint64_t>(*v), in.type);
          break;
        }
        case Instr::Kind::Nondet: {
          auto raw = tape.read();
          if (!raw) {
            res.stop = StopKind::RuntimeError;
            res.error = RuntimeErrorInfo{RuntimeErrorInfo::Kind::TapeExhausted, in.span};
            return res;
          }
          store.scalars[static_cast<size_t>(in.target)] =
              normalize(static_cast<uint64_t>(*raw), in.type);
          break;
        }
      }
    }

    if (cb.out.empty()) {
      res.stop = StopKind::Terminated;
      return res;
    }
    bool moved = false;
    for (const CompiledEdge& e : cb.out) {
      bool taken = true;
      if (!e.cond.ops.empty()) {
        std::optional<RuntimeErrorInfo> err;
        auto v = eval_code(e.cond, store, scratch, err);
        if (!v) {
          res.stop = StopKind::RuntimeError;
          res.error = err;
          return res;
        }
        taken = e.negated ? *v == 0 : *v != 0;
      }
      if (taken) {
        if (opts.edge_hits && e.edge_index >= 0)
          (*opts.edge_hits)[static_cast<size_t>(e.edge_index)] = 1;
        if (e.activates_loop && opts.hook) opts.hook->on_loop_entry(e.to);
        block = e.to;
        moved = true;
        break;
      }
    }
    if (!moved) {
      // Outgoing conditions are exhaustive by construction; a fully pruned
      // branch set (while(true) with no statements after) terminates.
      res.stop = StopKind::Terminated;
      return res;
    }
  }
}

}  // namespace lw::exec
