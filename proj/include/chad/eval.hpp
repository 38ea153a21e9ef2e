#pragma once

#include <map>
#include <unordered_map>

#include "chad/value.hpp"

namespace chad {

struct EvalConfig {
  bool lsum_biproduct = false;  // false: lifted sum (default), true: biproduct
  long max_steps = 50'000'000;  // totality guard
  std::unordered_map<const Term*, long>* counts = nullptr;  // sharing instrumentation
};

using MetaPtr = std::shared_ptr<const LinRecMeta>;

class Evaluator {
 public:
  explicit Evaluator(EvalConfig cfg = {}) : cfg_(cfg) {}

  ValuePtr eval(const Env& env, const TermPtr& t);
  LinPtr eval_lin(const Env& env, const TermPtr& t);

  ValuePtr apply(const ValuePtr& f, const ValuePtr& arg);
  LinPtr apply_lin(const ValuePtr& linclosure, const LinPtr& arg);
  LinPtr apply_power(const LinPtr& power, const ValuePtr& arg);

  // Functorial action of a parameterized type on values; `actions` maps hole
  // names to per-position rewrites together with their output types.
  struct Action {
    std::function<ValuePtr(const ValuePtr&)> fn;
    TypePtr out;
  };
  ValuePtr fmap_value(const TypePtr& ty, const std::map<std::string, Action>& actions,
                      const ValuePtr& v);

  // Zip of a primal-shaped value against a linear value over the same
  // parameterized type; hole positions invoke the action. The primal may be
  // null (generic recursion), in which case the linear structure leads.
  using HoleZip = std::function<LinPtr(const ValuePtr&, const LinPtr&)>;
  LinPtr zip_hole(const TypePtr& ty, const std::map<std::string, HoleZip>& actions,
                  const ValuePtr& primal, const LinPtr& lin);

  const EvalConfig& config() const { return cfg_; }

 private:
  EvalConfig cfg_;
  long steps_ = 0;

  void tick(const TermPtr& t);

  ValuePtr eval_fold(const Env& env, const TermPtr& t);
  ValuePtr eval_gen(const Env& env, const TermPtr& t);
  LinPtr eval_lin_fold(const Env& env, const TermPtr& t);
  LinPtr eval_lin_gen(const Env& env, const TermPtr& t);

  // primal-directed recursions for transformer-emitted linear fold/gen;
  // these realize the fibres that the dependent types carried before erasure
  ValuePtr primal_fold(const MetaPtr& m, const ValuePtr& muval, const ValuePtr& helper);
  ValuePtr one_level(const MetaPtr& m, const ValuePtr& muval, const ValuePtr& helper);
  LinPtr jvp_fold(const MetaPtr& m, const ValuePtr& muval, const ValuePtr& helper,
                  const LinPtr& tangent);
  LinPtr vjp_fold(const MetaPtr& m, const ValuePtr& muval, const ValuePtr& helper,
                  const LinPtr& seed);
  LinPtr jvp_gen(const MetaPtr& m, const ValuePtr& seed_primal, const ValuePtr& helper,
                 const LinPtr& seed_tan);
  LinPtr vjp_gen(const MetaPtr& m, const ValuePtr& seed_primal, const ValuePtr& helper,
                 const LinPtr& observed);
};

// Convenience entry points.
ValuePtr eval(const Env& env, const TermPtr& t, EvalConfig cfg = {});
LinPtr eval_lin(const Env& env, const TermPtr& t, EvalConfig cfg = {});

}  // namespace chad
