#pragma once

#include "chad/eval.hpp"

namespace chad {

// A data-typed value presented in the normal form: a component of the
// coproduct (identified by the path of variant choices met in traversal
// order) together with its Euclidean coordinates.
struct FlatPoint {
  std::vector<int> path;  // 1-based constructor choices
  Vec coords;
};

bool is_data_type(const TypePtr& ty);  // built from R^n, Unit, *, variants, mu

FlatPoint flatten(const TypePtr& ty, const ValuePtr& v);
ValuePtr unflatten(const TypePtr& ty, const FlatPoint& fp);

// Coordinates of a (co)tangent value, guided by the primal it sits over.
// Linear mu values are walked structurally; linear nu values (reverse-mode
// cotangents of inductive data) are forced to the primal's depth.
Vec lin_coords(const TypePtr& ty, const ValuePtr& primal, const LinPtr& lin);

// The inverse: build a (co)tangent value over `primal` from coordinates.
// Reverse polarity puts nu-shaped cells at inductive positions; `biproduct`
// selects the linear-sum representation to match the evaluation strategy.
LinPtr lin_from_coords(const TypePtr& ty, const ValuePtr& primal, const Vec& coords,
                       bool reverse_mode, bool biproduct = false);

}  // namespace chad
