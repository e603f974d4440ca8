#pragma once

// Reference AST-walking interpreter, written directly from the language
// definition and kept independent of the CFG execution path it is used to
// check. Step counting matches the machine: one step per executed
// assignment, nondet read, skip, or break.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loopwatch/lang/ast.hpp"

namespace lw::test {

struct AstStore {
  std::map<std::string, int64_t> scalars;
  std::map<std::string, std::vector<int64_t>> arrays;
};

struct AstResult {
  enum class Stop : uint8_t { Terminated, Budget, RuntimeError } stop;
  uint64_t steps = 0;
  std::string error;  // non-empty for RuntimeError
  AstStore store;
};

AstResult ast_run(const lw::lang::Program& p, const std::vector<int64_t>& tape,
                  uint64_t max_steps, uint64_t max_loop_tests = UINT64_MAX);

}  // namespace lw::test
