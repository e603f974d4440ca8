#pragma once

#include <functional>
#include <memory>

#include "loopwatch/exec/bytecode.hpp"

namespace lw::exec {

struct InputTape {
  std::vector<int64_t> values;
  bool error_on_exhaustion = false;  // default: nondet() past the end reads 0
  size_t pos = 0;

  // Reads the next raw value (no width coercion; the machine normalizes).
  std::optional<int64_t> read() {
    if (pos < values.size()) return values[pos++];
    if (error_on_exhaustion) return std::nullopt;
    ++pos;
    return 0;
  }
};

struct StepLimits {
  uint64_t max_steps = 1000000;
  // Guards statement-free cycles such as `while (x < y) { }`.
  uint64_t max_header_visits = 1000000;
};

enum class StopKind : uint8_t { Terminated, Budget, RuntimeError, HookStop };

struct RawResult {
  StopKind stop = StopKind::Terminated;
  uint64_t steps = 0;
  uint64_t header_visits = 0;  // total over all headers
  std::optional<RuntimeErrorInfo> error;
};

// Per-header-visit callback. Returning false stops the run with HookStop.
// `visit` counts this header's visits within the run, starting at 0.
struct HeaderHook {
  virtual ~HeaderHook() = default;
  virtual bool on_header(lang::BlockId header, uint64_t visit, const Store& store) = 0;
  // Called when an edge entering `header` from outside any loop region that
  // owns it is taken; used to reset per-activation monitor state.
  virtual void on_loop_entry(lang::BlockId header) {}
};

struct RunOptions {
  StepLimits limits;
  HeaderHook* hook = nullptr;
  std::vector<uint8_t>* edge_hits = nullptr;     // sized to edge count when set
  std::vector<lang::BlockId>* block_trace = nullptr;  // appended when set
  size_t block_trace_cap = 1 << 20;
};

// Compiled CFG executor. Owns per-block instruction code and per-edge
// condition code; the CFG must outlive the machine.
class Machine {
 public:
  explicit Machine(const lang::CFG& cfg);

  const lang::CFG& cfg() const { return *cfg_; }

  RawResult run(Store& store, InputTape& tape, const RunOptions& opts) const {
    return run_from(cfg_->entry, store, tape, opts);
  }
  RawResult run_from(lang::BlockId start, Store& store, InputTape& tape,
                     const RunOptions& opts) const;

 private:
  struct CompiledInstr {
    lang::Instr::Kind kind;
    lang::VarIdx target = -1;
    Scalar type = Scalar::I64;
    Code index;
    Code value;
    lang::Span span;
  };
  struct CompiledEdge {
    Code cond;  // empty means `true`
    bool negated = false;
    lang::BlockId to = -1;
    int edge_index = -1;
    bool activates_loop = false;  // enters to's loop region from outside
  };
  struct CompiledBlock {
    std::vector<CompiledInstr> instrs;
    std::vector<CompiledEdge> out;
    bool is_header = false;
  };

  const lang::CFG* cfg_;
  std::vector<CompiledBlock> blocks_;
};

}  // namespace lw::exec
