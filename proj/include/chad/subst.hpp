#pragma once

#include <set>
#include <string>

#include "chad/syntax.hpp"

namespace chad {

std::set<std::string> free_type_vars(const TypePtr& t);
std::set<std::string> free_term_vars(const TermPtr& t);

// Capture-avoiding substitution of a type for a type variable.
TypePtr subst_type(const TypePtr& ty, const std::string& var, const TypePtr& replacement);

// Capture-avoiding substitution of a term for a term variable.
TermPtr subst_term(const TermPtr& t, const std::string& var, const TermPtr& replacement);

// Functorial action of a parameterized type ty (hole `hole`) on the term
// `action` with input variable `binder`: produces a term with free variable
// `binder` implementing ty[hole |-> binder |- action]. `action_out` is the
// action's result type, used to compute the annotations of emitted
// injections, rolls and gens.
TermPtr fmap_type(const TypePtr& ty, const std::string& hole, const std::string& binder,
                  const TermPtr& action, const TypePtr& action_out);

// Functorial action of a parameterized linear type on a linear term: the
// resulting term rewires the unique linear identifier v. The dependent
// language dispatches the case clause on a cartesian scrutinee; after erasure
// the linear sum value carries its own branch, so LSum maps through LCase.
TermPtr lin_fmap(const TypePtr& lty, const std::string& hole, const TermPtr& action,
                 const TypePtr& action_out);

// Replace free occurrences of the unique linear identifier v.
TermPtr subst_linvar(const TermPtr& t, const TermPtr& replacement);

}  // namespace chad
