#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

// Quantified linear integer arithmetic over arbitrary-precision integers.
// Atoms are "e <= 0", "e = 0", "e != 0" and divisibility "d | e" with d >= 1.

namespace lw::lia {

using Int = mpz_class;

using VarId = int32_t;

// Process-wide variable interner. Thread-safe; ids are stable for the
// lifetime of the process.
VarId intern(const std::string& name);
const std::string& var_name(VarId v);
// A fresh variable whose name starts with `prefix` and is not interned yet.
VarId fresh_var(const std::string& prefix);

// Sum of coeff*var terms plus a constant. Terms are sorted by VarId and
// coefficients are nonzero.
struct LinExpr {
  std::vector<std::pair<VarId, Int>> terms;
  Int k0 = 0;

  LinExpr() = default;
  explicit LinExpr(Int c) : k0(std::move(c)) {}
  static LinExpr var(VarId v, Int coeff = 1);

  Int coeff_of(VarId v) const;
  bool is_const() const { return terms.empty(); }
  bool mentions(VarId v) const { return coeff_of(v) != 0; }

  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(const Int& c);
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, const Int& c) { return a *= c; }
  friend LinExpr operator-(LinExpr a) { return a *= Int(-1); }
  friend bool operator==(const LinExpr& a, const LinExpr& b) {
    return a.k0 == b.k0 && a.terms == b.terms;
  }

  // Replaces each mapped variable by its expression.
  LinExpr substitute(const std::map<VarId, LinExpr>& m) const;
  Int eval(const std::map<VarId, Int>& env) const;
  std::string str() const;
};

enum class Rel : uint8_t { Le, Eq, Ne };  // e <= 0, e = 0, e != 0

struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class Kind : uint8_t { True, False, Atom, Div, Not, And, Or, Exists, Forall };

struct Node {
  Kind kind;
  // Atom / Div payload
  Rel rel = Rel::Le;
  Int divisor;   // Div only, >= 1
  LinExpr expr;  // Atom, Div
  // Not / quantifiers / connectives
  VarId bound = -1;  // Exists, Forall
  std::vector<NodePtr> kids;
};

class Formula {
 public:
  Formula() : p_(ftrue_node()) {}
  explicit Formula(NodePtr p) : p_(std::move(p)) {}

  const Node& node() const { return *p_; }
  NodePtr ptr() const { return p_; }
  Kind kind() const { return p_->kind; }

  bool is_true() const { return p_->kind == Kind::True; }
  bool is_false() const { return p_->kind == Kind::False; }

  size_t node_count() const;
  std::vector<VarId> free_vars() const;
  bool mentions(VarId v) const;
  std::string str() const;

  // Structural comparison (used for dedupe and canonical ordering).
  static int compare(const Formula& a, const Formula& b);
  friend bool operator==(const Formula& a, const Formula& b) {
    return compare(a, b) == 0;
  }

 private:
  static NodePtr ftrue_node();
  NodePtr p_;
};

// --- constructors (lightly normalizing) ---
Formula ftrue();
Formula ffalse();
Formula make_atom(LinExpr e, Rel rel);  // gcd-normalized; folds ground atoms
// Convenience inequality builders over integers.
Formula le(LinExpr e);                   // e <= 0
Formula lt(LinExpr e);                   // e < 0
Formula eq(LinExpr e);                   // e = 0
Formula ne(LinExpr e);                   // e != 0
Formula ge(LinExpr e);                   // e >= 0
Formula gt(LinExpr e);                   // e > 0
Formula divides(Int d, LinExpr e);       // d | e  (d >= 1 after normalization)
Formula fnot(const Formula& f);
Formula fand(std::vector<Formula> fs);
Formula fand(const Formula& a, const Formula& b);
Formula for_(std::vector<Formula> fs);
Formula for_(const Formula& a, const Formula& b);
Formula exists(VarId v, const Formula& f);
Formula forall(VarId v, const Formula& f);

struct NonLinearSubstitution : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Capture-avoiding simultaneous substitution of linear expressions.
Formula substitute(const Formula& f, const std::map<VarId, LinExpr>& m);

// Quantifier-free evaluation. Throws if a quantifier or unassigned free
// variable is hit.
bool eval_qf(const Formula& f, const std::map<VarId, Int>& env);

// Evaluation with quantifiers (eliminates them first); used by
// equivalent_on when handed quantified formulas.
bool eval(const Formula& f, const std::map<VarId, Int>& env);

// Negation normal form: Not appears only directly over Div atoms.
Formula nnf(const Formula& f);

Formula simplify(const Formula& f);

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EliminationBudget {
  size_t node_cap = 1000000;
};

// Cooper's method. Result is quantifier-free in v and equivalent over Z.
Formula eliminate_exists(const Formula& f, VarId v,
                         const EliminationBudget& budget = {});
Formula eliminate_forall(const Formula& f, VarId v,
                         const EliminationBudget& budget = {});
// Eliminates every quantifier bottom-up.
Formula eliminate_all(const Formula& f, const EliminationBudget& budget = {});

struct Model {
  std::map<VarId, Int> values;
};

struct SatResult {
  bool sat = false;
  Model model;  // verified by evaluation when sat
};

SatResult is_sat(const Formula& f, const EliminationBudget& budget = {});

struct BoxTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Box = std::map<VarId, std::pair<Int, Int>>;  // inclusive intervals

// Exhaustive agreement check of f and g on every assignment in the box.
bool equivalent_on(const Formula& f, const Formula& g, const Box& box);

// Parses the prefix textual form produced by Formula::str.
Formula parse_formula(const std::string& text);

// Encodes w = wrap(e) for a width-w two's complement or unsigned integer:
// range(w) && width | (e - w). The caller eliminates `wrapped` later like
// any introduced variable.
Formula wrap_encoding(VarId wrapped, const LinExpr& e, int bits, bool is_signed);

Int type_min(int bits, bool is_signed);
Int type_max(int bits, bool is_signed);

}  // namespace lw::lia
