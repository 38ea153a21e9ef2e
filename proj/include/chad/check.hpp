#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chad/syntax.hpp"

namespace chad {

// The source language has exactly one kind; the target adds linear types.
enum class Kind { CartType, LinType };

using KindCtx = std::vector<std::string>;
using TypeCtx = std::vector<std::pair<std::string, TypePtr>>;

// Fig. 7: kinding for the source language. Rejects linear constructors and
// function types with free type variables.
Kind kind_check(const KindCtx& delta, const TypePtr& ty);

// Target kinding. Type variables kind at both; returns the kind the type
// lands in (CartType for the cartesian layer, LinType for the linear layer).
Kind kind_check_target(const KindCtx& delta, const TypePtr& ty);

// Fig. 8: typing for the source language (fold/gen algebras see only their
// binder). Lam/Inj/Roll/Gen/Fold are annotation-directed.
TypePtr type_check(const KindCtx& delta, const TypeCtx& gamma, const TermPtr& t);

// Erased Figs. 13-14. With `lin` null this is the cartesian judgment; with
// `lin` set it is the linear judgment with the unique identifier v : *lin.
// `expected` propagates bidirectional information (Zero and friends have no
// synthesizable type); pass null to synthesize.
TypePtr type_check_target(const KindCtx& delta, const TypeCtx& gamma, const TypePtr& lin,
                          const TermPtr& t, const TypePtr& expected = nullptr);

// The coarse-graining translation on types: dependent case-distinction types
// become linear sums; everything in the erased image is left alone.
TypePtr erase_type(const TypePtr& ty);

}  // namespace chad
