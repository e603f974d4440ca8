#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "loopwatch/lia/formula.hpp"

namespace lw::test {

// Deterministic utility RNG. All draws go through explicit modulo so the
// stream is identical across platforms.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(uint64_t seed) : eng(seed) {}
  uint64_t next() { return eng(); }
  // Uniform in [lo, hi] inclusive.
  long range(long lo, long hi) {
    return lo + static_cast<long>(next() % static_cast<uint64_t>(hi - lo + 1));
  }
  bool chance(int percent) { return range(1, 100) <= percent; }
};

struct RandomFormula {
  lw::lia::Formula f;
  std::vector<lw::lia::VarId> free_vars;
  int quantifiers = 0;
};

// Random quantified LIA formula per the engine test family: up to 3 free
// variables, up to 2 quantifiers, coefficients in [-8, 8], divisors in
// [1, 6]. Atoms never mention two quantified variables at once so the
// windowed brute-force oracle stays exact.
RandomFormula random_formula(Rng& rng);

// Random while-language program source (bounded sizes, always parses and
// typechecks). Mixes terminating and non-terminating loop shapes.
std::string random_program(Rng& rng);

}  // namespace lw::test
