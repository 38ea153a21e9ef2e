#pragma once

#include <utility>

#include "chad/check.hpp"
#include "chad/syntax.hpp"

namespace chad {

struct FwdTypePair {
  TypePtr primal;   // cartesian
  TypePtr tangent;  // linear
};

struct RevTypePair {
  TypePtr primal;
  TypePtr cotangent;
};

struct CtxTranslation {
  TypeCtx primal_ctx;
  TypePtr linear;  // left-nested tuple of the per-variable (co)tangent types
};

FwdTypePair fwd_type(const TypePtr& src);
RevTypePair rev_type(const TypePtr& src);
CtxTranslation fwd_ctx(const TypeCtx& gamma);
CtxTranslation rev_ctx(const TypeCtx& gamma);

// Efficient transformations: the output pairs the primal with the linear
// (co)tangent map and shares subcomputations through lets.
TermPtr fwd_transform(const TypeCtx& gamma, const TermPtr& t);
TermPtr rev_transform(const TypeCtx& gamma, const TermPtr& t);

// Transformations without sharing between primal and (co)tangent halves.
// The second component is a linear term over the context (co)tangent.
std::pair<TermPtr, TermPtr> fwd_transform_split(const TypeCtx& gamma, const TermPtr& t);
std::pair<TermPtr, TermPtr> rev_transform_split(const TypeCtx& gamma, const TermPtr& t);

// Types the efficient transforms are stated at.
TypePtr fwd_result_type(const TypeCtx& gamma, const TypePtr& result);  // Dt1 * (DG2 -o Dt2)
TypePtr rev_result_type(const TypeCtx& gamma, const TypePtr& result);  // Dt1 * (Dt2 -o DG2)

}  // namespace chad
