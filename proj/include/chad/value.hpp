#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chad/ops.hpp"
#include "chad/syntax.hpp"

namespace chad {

struct Value;
struct LinValue;
using ValuePtr = std::shared_ptr<const Value>;
using LinPtr = std::shared_ptr<const LinValue>;

struct EnvNode {
  std::string name;
  ValuePtr v;
  std::shared_ptr<const EnvNode> next;
};

struct Env {
  std::shared_ptr<const EnvNode> vars;
  LinPtr lin;  // the unique linear identifier, present in linear evaluation

  Env extend(const std::string& name, ValuePtr v) const {
    Env e = *this;
    e.vars = std::make_shared<EnvNode>(EnvNode{name, std::move(v), vars});
    return e;
  }
  Env with_lin(LinPtr l) const {
    Env e = *this;
    e.lin = std::move(l);
    return e;
  }
  const ValuePtr* find(const std::string& name) const {
    for (const EnvNode* n = vars.get(); n; n = n->next.get())
      if (n->name == name) return &n->v;
    return nullptr;
  }
};

// Coinductive value: a one-step unrolling, memoized. The nu type is kept on
// the cell so the functorial action knows where the recursive positions are.
struct CodataCell {
  TypePtr nu;
  std::function<ValuePtr()> force_once;
  mutable std::optional<ValuePtr> memo;
};

struct Value {
  enum class Tag { RealVec, Unit, Pair, Inj, Roll, Closure, LinClosure, Codata };
  Tag tag;
  Vec vec;                                  // RealVec
  std::string label;                        // Inj constructor
  ValuePtr a, b;                            // Pair; Inj/Roll payload in a
  TypePtr ty;                               // Roll: its mu type
  std::string binder;                       // Closure
  TermPtr body;                             // Closure / LinClosure
  Env env;                                  // Closure / LinClosure
  std::shared_ptr<const CodataCell> codata; // Codata
};

ValuePtr v_real(Vec xs);
ValuePtr v_unit();
ValuePtr v_pair(ValuePtr a, ValuePtr b);
ValuePtr v_inj(std::string label, ValuePtr payload);
ValuePtr v_roll(TypePtr mu, ValuePtr payload);
ValuePtr v_closure(std::string binder, TermPtr body, Env env);
ValuePtr v_linclosure(TermPtr body, Env env);
ValuePtr v_codata(TypePtr nu, std::function<ValuePtr()> force);

// Lazy linear codata cell.
struct LinThunk {
  TypePtr nu;  // the linear nu type when known (may be null for meta-driven cells)
  std::function<LinPtr()> force_once;
  mutable std::optional<LinPtr> memo;
};

struct LinValue {
  enum class Tag {
    Vec,
    Unit,
    Pair,
    SumAt,    // lifted linear sum, one live branch (1-based index)
    Tuple,    // biproduct linear sum
    Power,    // function from points to linear values
    Copow,    // sequence of (point, linear value) pairs
    Roll,     // linear mu
    Codata,   // linear nu, lazy
    ZeroAny,  // the zero of any linear type
  };
  Tag tag;
  Vec vec;
  LinPtr a, b;
  int index = 0;                                       // SumAt
  std::vector<LinPtr> items;                           // Tuple
  std::function<LinPtr(const ValuePtr&)> power;        // Power
  std::vector<std::pair<ValuePtr, LinPtr>> pairs;      // Copow
  TypePtr ty;                                          // Roll: its linear mu type
  std::shared_ptr<const LinThunk> thunk;               // Codata
};

LinPtr l_vec(Vec xs);
LinPtr l_unit();
LinPtr l_pair(LinPtr a, LinPtr b);
LinPtr l_sum_at(int index, LinPtr payload);
LinPtr l_tuple(std::vector<LinPtr> items);
LinPtr l_power(std::function<LinPtr(const ValuePtr&)> f);
LinPtr l_copow(std::vector<std::pair<ValuePtr, LinPtr>> pairs);
LinPtr l_roll(TypePtr lmu, LinPtr payload);
LinPtr l_codata(TypePtr lnu, std::function<LinPtr()> force);
LinPtr l_zero();

bool is_zero(const LinPtr& l);

// Commutative monoid structure of the linear layer. Addition is structural;
// copowers concatenate; lifted sums with distinct live branches signal
// MismatchedBranch.
LinPtr lin_add(const LinPtr& a, const LinPtr& b);

// The zero at a given linear type, shaped when the type demands it.
LinPtr lin_zero_of(const TypePtr& linty);

LinPtr force_lin(const LinPtr& codata);     // one-step force of a linear nu value
ValuePtr force_codata(const ValuePtr& v);   // one-step force of a cartesian nu value

std::string print_value(const ValuePtr& v);
std::string print_lin_value(const LinPtr& v);

}  // namespace chad
