#pragma once

// Independent brute-force semantics for quantified LIA formulas, used as the
// oracle against the elimination engine. Quantifiers are decided by exact
// enumeration: inequality atoms fix their truth outside the window spanned by
// their boundary points, and divisibility atoms are periodic, so scanning the
// boundary window plus one period of tail on each side is exhaustive.

#include <map>

#include "loopwatch/lia/formula.hpp"

namespace lw::test {

// Exact truth value of f under env; every free variable of f must be
// assigned. Throws if a quantifier scan exceeds `scan_cap` points.
bool brute_eval(const lw::lia::Formula& f,
                const std::map<lw::lia::VarId, lw::lia::Int>& env,
                long scan_cap = 2000000);

}  // namespace lw::test
