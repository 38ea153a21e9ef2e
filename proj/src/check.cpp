#include "chad/check.hpp"

#include <algorithm>
#include <set>

#include "chad/errors.hpp"
#include "chad/ops.hpp"
#include "chad/printer.hpp"
#include "chad/subst.hpp"

namespace chad {

const char* err_name(Err e) {
  switch (e) {
    case Err::UnboundTypeVar: return "UnboundTypeVar";
    case Err::OpenFunctionType: return "OpenFunctionType";
    case Err::IllKinded: return "IllKinded";
    case Err::UnboundVar: return "UnboundVar";
    case Err::TypeMismatch: return "TypeMismatch";
    case Err::ArityMismatch: return "ArityMismatch";
    case Err::NonExhaustiveMatch: return "NonExhaustiveMatch";
    case Err::UnknownOp: return "UnknownOp";
    case Err::LinearVarMisuse: return "LinearVarMisuse";
    case Err::NotLinearType: return "NotLinearType";
    case Err::MissingPrimitiveDerivative: return "MissingPrimitiveDerivative";
    case Err::MismatchedBranch: return "MismatchedBranch";
    case Err::NotADataType: return "NotADataType";
    case Err::ShapeMismatch: return "ShapeMismatch";
    case Err::ComponentCrossed: return "ComponentCrossed";
    case Err::SyntaxError: return "SyntaxError";
    case Err::Internal: return "Internal";
  }
  return "Error";
}

namespace {

bool in_ctx(const KindCtx& d, const std::string& n) {
  return std::find(d.begin(), d.end(), n) != d.end();
}

std::optional<TypePtr> lookup(const TypeCtx& g, const std::string& n) {
  for (auto it = g.rbegin(); it != g.rend(); ++it)
    if (it->first == n) return it->second;
  return std::nullopt;
}

void expect_equal(const TypePtr& found, const TypePtr& want, const std::string& where) {
  if (!type_equal(found, want))
    fail(Err::TypeMismatch,
         where + ": expected " + print_type(want) + ", found " + print_type(found));
}

int real_width(const TypePtr& t, const std::string& where) {
  if (t->tag != TypeTag::Real) fail(Err::TypeMismatch, where + ": expected a real array");
  return t->width;
}

}  // namespace

Kind kind_check(const KindCtx& delta, const TypePtr& ty) {
  switch (ty->tag) {
    case TypeTag::TVar:
      if (!in_ctx(delta, ty->name)) fail(Err::UnboundTypeVar, ty->name);
      return Kind::CartType;
    case TypeTag::Real:
      if (ty->width < 0) fail(Err::IllKinded, "negative width");
      return Kind::CartType;
    case TypeTag::Unit:
      return Kind::CartType;
    case TypeTag::Prod:
      kind_check(delta, ty->a);
      kind_check(delta, ty->b);
      return Kind::CartType;
    case TypeTag::Arrow: {
      auto fv = free_type_vars(ty);
      if (!fv.empty()) {
        for (const auto& v : fv)
          if (!in_ctx(delta, v)) fail(Err::UnboundTypeVar, v);
        fail(Err::OpenFunctionType, "function type with free type variables: " + print_type(ty));
      }
      kind_check({}, ty->a);
      kind_check({}, ty->b);
      return Kind::CartType;
    }
    case TypeTag::Variant: {
      if (ty->ctors.empty()) fail(Err::IllKinded, "empty variant");
      std::set<std::string> seen;
      for (const auto& c : ty->ctors) {
        if (!seen.insert(c.first).second)
          fail(Err::IllKinded, "duplicate constructor " + c.first);
        kind_check(delta, c.second);
      }
      return Kind::CartType;
    }
    case TypeTag::Mu:
    case TypeTag::Nu: {
      KindCtx d2 = delta;
      d2.push_back(ty->name);
      kind_check(d2, ty->a);
      return Kind::CartType;
    }
    default:
      fail(Err::IllKinded, "linear type in the source language: " + print_type(ty));
  }
}

Kind kind_check_target(const KindCtx& delta, const TypePtr& ty) {
  switch (ty->tag) {
    case TypeTag::TVar:
      if (!in_ctx(delta, ty->name)) fail(Err::UnboundTypeVar, ty->name);
      return Kind::CartType;  // usable at both kinds; callers treat TVar as wild
    case TypeTag::Real:
    case TypeTag::Unit:
      return Kind::CartType;
    case TypeTag::LReal:
    case TypeTag::LUnit:
      return Kind::LinType;
    case TypeTag::Prod:
      kind_check_target(delta, ty->a);
      kind_check_target(delta, ty->b);
      return Kind::CartType;
    case TypeTag::LProd:
      kind_check_target(delta, ty->a);
      kind_check_target(delta, ty->b);
      return Kind::LinType;
    case TypeTag::Arrow:
      kind_check_target(delta, ty->a);
      kind_check_target(delta, ty->b);
      return Kind::CartType;
    case TypeTag::Power:
    case TypeTag::Copower:
      kind_check_target(delta, ty->a);
      kind_check_target(delta, ty->b);
      return Kind::LinType;
    case TypeTag::LinArrow:
      kind_check_target(delta, ty->a);
      kind_check_target(delta, ty->b);
      return Kind::CartType;  // -o is itself a cartesian type
    case TypeTag::Variant: {
      if (ty->ctors.empty()) fail(Err::IllKinded, "empty variant");
      for (const auto& c : ty->ctors) kind_check_target(delta, c.second);
      return Kind::CartType;
    }
    case TypeTag::CaseType:
      fail(Err::IllKinded, "dependent case type survives only as erase_type input");
    case TypeTag::LSum: {
      if (ty->alts.empty()) fail(Err::IllKinded, "empty linear sum");
      for (const auto& a : ty->alts) kind_check_target(delta, a);
      return Kind::LinType;
    }
    case TypeTag::Mu:
    case TypeTag::Nu: {
      KindCtx d2 = delta;
      d2.push_back(ty->name);
      kind_check_target(d2, ty->a);
      return Kind::CartType;
    }
    case TypeTag::LMu:
    case TypeTag::LNu: {
      KindCtx d2 = delta;
      d2.push_back(ty->name);
      kind_check_target(d2, ty->a);
      return Kind::LinType;
    }
  }
  fail(Err::Internal, "unreachable kind");
}

TypePtr type_check(const KindCtx& delta, const TypeCtx& gamma, const TermPtr& t) {
  switch (t->tag) {
    case TermTag::Var: {
      auto ty = lookup(gamma, t->name);
      if (!ty) fail(Err::UnboundVar, t->name);
      return *ty;
    }
    case TermTag::Let: {
      auto ty = type_check(delta, gamma, t->t0);
      TypeCtx g2 = gamma;
      g2.emplace_back(t->name, ty);
      return type_check(delta, g2, t->t1);
    }
    case TermTag::PrimOp: {
      std::vector<int> widths;
      for (const auto& a : t->args)
        widths.push_back(real_width(type_check(delta, gamma, a), "argument of " + t->name));
      return ty_real(op_sig(t->name, widths).result_width);
    }
    case TermTag::RealLit:
      return ty_real(static_cast<int>(t->lit.size()));
    case TermTag::UnitVal:
      return ty_unit();
    case TermTag::Pair:
      return ty_prod(type_check(delta, gamma, t->t0), type_check(delta, gamma, t->t1));
    case TermTag::Fst: {
      auto ty = type_check(delta, gamma, t->t0);
      if (ty->tag != TypeTag::Prod) fail(Err::TypeMismatch, "fst of non-product " + print_type(ty));
      return ty->a;
    }
    case TermTag::Snd: {
      auto ty = type_check(delta, gamma, t->t0);
      if (ty->tag != TypeTag::Prod) fail(Err::TypeMismatch, "snd of non-product " + print_type(ty));
      return ty->b;
    }
    case TermTag::Lam: {
      if (!t->ann) fail(Err::TypeMismatch, "missing function argument annotation");
      kind_check(delta, t->ann);
      TypeCtx g2 = gamma;
      g2.emplace_back(t->name, t->ann);
      auto body = type_check(delta, g2, t->t0);
      auto arrow = ty_arrow(t->ann, body);
      kind_check(delta, arrow);  // enforces the closedness restriction
      return arrow;
    }
    case TermTag::App: {
      auto f = type_check(delta, gamma, t->t0);
      if (f->tag != TypeTag::Arrow) fail(Err::TypeMismatch, "applying non-function " + print_type(f));
      auto a = type_check(delta, gamma, t->t1);
      expect_equal(a, f->a, "function argument");
      return f->b;
    }
    case TermTag::Inj: {
      if (!t->ann || t->ann->tag != TypeTag::Variant)
        fail(Err::TypeMismatch, "injection needs a variant annotation");
      kind_check(delta, t->ann);
      auto payload = type_check(delta, gamma, t->t0);
      for (const auto& c : t->ann->ctors)
        if (c.first == t->name) {
          expect_equal(payload, c.second, "payload of " + t->name);
          return t->ann;
        }
      fail(Err::TypeMismatch, "constructor " + t->name + " not in " + print_type(t->ann));
    }
    case TermTag::Match: {
      auto sty = type_check(delta, gamma, t->t0);
      if (sty->tag != TypeTag::Variant)
        fail(Err::TypeMismatch, "match on non-variant " + print_type(sty));
      if (t->branches.size() != sty->ctors.size())
        fail(Err::NonExhaustiveMatch, "expected " + std::to_string(sty->ctors.size()) + " branches");
      TypePtr result;
      for (std::size_t i = 0; i < sty->ctors.size(); ++i) {
        if (t->branches[i].label != sty->ctors[i].first)
          fail(Err::NonExhaustiveMatch,
               "branch " + t->branches[i].label + " out of order, expected " + sty->ctors[i].first);
        TypeCtx g2 = gamma;
        g2.emplace_back(t->branches[i].binder, sty->ctors[i].second);
        auto bty = type_check(delta, g2, t->branches[i].body);
        if (!result)
          result = bty;
        else
          expect_equal(bty, result, "match branch " + t->branches[i].label);
      }
      return result;
    }
    case TermTag::Roll: {
      if (!t->ann || t->ann->tag != TypeTag::Mu)
        fail(Err::TypeMismatch, "roll needs a mu annotation");
      kind_check(delta, t->ann);
      auto payload = type_check(delta, gamma, t->t0);
      expect_equal(payload, subst_type(t->ann->a, t->ann->name, t->ann), "roll payload");
      return t->ann;
    }
    case TermTag::Fold: {
      auto mty = type_check(delta, gamma, t->t0);
      if (mty->tag != TypeTag::Mu) fail(Err::TypeMismatch, "fold of non-mu " + print_type(mty));
      if (!t->ann) fail(Err::TypeMismatch, "fold needs a result annotation");
      kind_check(delta, t->ann);
      // the algebra sees only its binder (Fig. 8)
      TypeCtx galg;
      galg.emplace_back(t->name, subst_type(mty->a, mty->name, t->ann));
      auto bty = type_check(delta, galg, t->t1);
      expect_equal(bty, t->ann, "fold algebra result");
      return t->ann;
    }
    case TermTag::Gen: {
      if (!t->ann || t->ann->tag != TypeTag::Nu)
        fail(Err::TypeMismatch, "gen needs a nu annotation");
      kind_check(delta, t->ann);
      auto seed = type_check(delta, gamma, t->t0);
      TypeCtx gco;
      gco.emplace_back(t->name, seed);
      auto bty = type_check(delta, gco, t->t1);
      expect_equal(bty, subst_type(t->ann->a, t->ann->name, seed), "gen step result");
      return t->ann;
    }
    case TermTag::Unroll: {
      auto nty = type_check(delta, gamma, t->t0);
      if (nty->tag != TypeTag::Nu) fail(Err::TypeMismatch, "unroll of non-nu " + print_type(nty));
      return subst_type(nty->a, nty->name, nty);
    }
    default:
      fail(Err::TypeMismatch, "linear construct in the source language");
  }
}

TypePtr erase_type(const TypePtr& ty) {
  switch (ty->tag) {
    case TypeTag::TVar:
    case TypeTag::Real:
    case TypeTag::Unit:
    case TypeTag::LReal:
    case TypeTag::LUnit:
      return ty;
    case TypeTag::CaseType: {
      std::vector<TypePtr> alts;
      for (const auto& c : ty->ctors) alts.push_back(erase_type(c.second));
      return ty_lsum(alts);
    }
    case TypeTag::Variant: {
      std::vector<std::pair<std::string, TypePtr>> cs;
      for (const auto& c : ty->ctors) cs.emplace_back(c.first, erase_type(c.second));
      return ty_variant(cs);
    }
    case TypeTag::LSum: {
      std::vector<TypePtr> alts;
      for (const auto& a : ty->alts) alts.push_back(erase_type(a));
      return ty_lsum(alts);
    }
    default: {
      auto n = std::make_shared<Type>(*ty);
      if (n->a) n->a = erase_type(n->a);
      if (n->b) n->b = erase_type(n->b);
      return n;
    }
  }
}

namespace {

struct TargetChecker {
  const KindCtx& delta;

  TypePtr cart(const TypeCtx& g, const TermPtr& t, const TypePtr& expected);
  TypePtr lin(const TypeCtx& g, const TypePtr& v, const TermPtr& t, const TypePtr& expected);

  TypePtr finish(const TypePtr& found, const TypePtr& expected, const char* where) {
    if (expected) expect_equal(found, expected, where);
    return found;
  }
};

TypePtr TargetChecker::cart(const TypeCtx& g, const TermPtr& t, const TypePtr& expected) {
  switch (t->tag) {
    case TermTag::Var: {
      auto ty = lookup(g, t->name);
      if (!ty) fail(Err::UnboundVar, t->name);
      return finish(*ty, expected, "variable");
    }
    case TermTag::Let: {
      auto ty = cart(g, t->t0, nullptr);
      TypeCtx g2 = g;
      g2.emplace_back(t->name, ty);
      return cart(g2, t->t1, expected);
    }
    case TermTag::PrimOp: {
      std::vector<int> widths;
      for (const auto& a : t->args)
        widths.push_back(real_width(cart(g, a, nullptr), "argument of " + t->name));
      return finish(ty_real(op_sig(t->name, widths).result_width), expected, "operation");
    }
    case TermTag::RealLit:
      return finish(ty_real(static_cast<int>(t->lit.size())), expected, "literal");
    case TermTag::UnitVal:
      return finish(ty_unit(), expected, "unit");
    case TermTag::Pair: {
      TypePtr ea, eb;
      if (expected) {
        if (expected->tag != TypeTag::Prod)
          fail(Err::TypeMismatch, "pair against " + print_type(expected));
        ea = expected->a;
        eb = expected->b;
      }
      return ty_prod(cart(g, t->t0, ea), cart(g, t->t1, eb));
    }
    case TermTag::Fst: {
      auto ty = cart(g, t->t0, nullptr);
      if (ty->tag != TypeTag::Prod) fail(Err::TypeMismatch, "fst of " + print_type(ty));
      return finish(ty->a, expected, "fst");
    }
    case TermTag::Snd: {
      auto ty = cart(g, t->t0, nullptr);
      if (ty->tag != TypeTag::Prod) fail(Err::TypeMismatch, "snd of " + print_type(ty));
      return finish(ty->b, expected, "snd");
    }
    case TermTag::Lam: {
      if (!t->ann) fail(Err::TypeMismatch, "missing annotation");
      TypeCtx g2 = g;
      g2.emplace_back(t->name, t->ann);
      TypePtr ebody = expected && expected->tag == TypeTag::Arrow ? expected->b : nullptr;
      auto body = cart(g2, t->t0, ebody);
      return finish(ty_arrow(t->ann, body), expected, "function");
    }
    case TermTag::App: {
      auto f = cart(g, t->t0, nullptr);
      if (f->tag != TypeTag::Arrow) fail(Err::TypeMismatch, "applying " + print_type(f));
      cart(g, t->t1, f->a);
      return finish(f->b, expected, "application");
    }
    case TermTag::Inj: {
      if (!t->ann || t->ann->tag != TypeTag::Variant)
        fail(Err::TypeMismatch, "injection needs a variant annotation");
      for (const auto& c : t->ann->ctors)
        if (c.first == t->name) {
          cart(g, t->t0, c.second);
          return finish(t->ann, expected, "injection");
        }
      fail(Err::TypeMismatch, "constructor " + t->name);
    }
    case TermTag::Match: {
      auto sty = cart(g, t->t0, nullptr);
      if (sty->tag != TypeTag::Variant) fail(Err::TypeMismatch, "match on " + print_type(sty));
      if (t->branches.size() != sty->ctors.size()) fail(Err::NonExhaustiveMatch, "branch count");
      TypePtr result = expected;
      for (std::size_t i = 0; i < sty->ctors.size(); ++i) {
        if (t->branches[i].label != sty->ctors[i].first)
          fail(Err::NonExhaustiveMatch, "branch order");
        TypeCtx g2 = g;
        g2.emplace_back(t->branches[i].binder, sty->ctors[i].second);
        auto bty = cart(g2, t->branches[i].body, result);
        if (!result) result = bty;
      }
      return result;
    }
    case TermTag::Roll: {
      if (!t->ann || t->ann->tag != TypeTag::Mu) fail(Err::TypeMismatch, "roll annotation");
      cart(g, t->t0, subst_type(t->ann->a, t->ann->name, t->ann));
      return finish(t->ann, expected, "roll");
    }
    case TermTag::Fold: {
      auto mty = cart(g, t->t0, nullptr);
      if (mty->tag != TypeTag::Mu) fail(Err::TypeMismatch, "fold of " + print_type(mty));
      if (!t->ann) fail(Err::TypeMismatch, "fold annotation");
      // target-level cartesian folds may capture the ambient context; the
      // transformations rely on this for their let-bound helpers
      TypeCtx g2 = g;
      g2.emplace_back(t->name, subst_type(mty->a, mty->name, t->ann));
      cart(g2, t->t1, t->ann);
      return finish(t->ann, expected, "fold");
    }
    case TermTag::Gen: {
      if (!t->ann || t->ann->tag != TypeTag::Nu) fail(Err::TypeMismatch, "gen annotation");
      auto seed = cart(g, t->t0, nullptr);
      TypeCtx g2 = g;
      g2.emplace_back(t->name, seed);
      cart(g2, t->t1, subst_type(t->ann->a, t->ann->name, seed));
      return finish(t->ann, expected, "gen");
    }
    case TermTag::Unroll: {
      auto nty = cart(g, t->t0, nullptr);
      if (nty->tag != TypeTag::Nu) fail(Err::TypeMismatch, "unroll of " + print_type(nty));
      return finish(subst_type(nty->a, nty->name, nty), expected, "unroll");
    }
    case TermTag::LinLam: {
      if (!t->ann || t->ann->tag != TypeTag::LinArrow)
        fail(Err::TypeMismatch, "linear lambda needs its -o annotation");
      lin(g, t->ann->a, t->t0, t->ann->b);
      return finish(t->ann, expected, "linear lambda");
    }
    default:
      fail(Err::LinearVarMisuse,
           "linear term in cartesian position: " + print_term_sexpr(t).substr(0, 60));
  }
}

TypePtr TargetChecker::lin(const TypeCtx& g, const TypePtr& v, const TermPtr& t,
                           const TypePtr& expected) {
  switch (t->tag) {
    case TermTag::LinVar:
      return finish(v, expected, "linear variable");
    case TermTag::LinLet: {
      auto ty = lin(g, v, t->t0, nullptr);
      return lin(g, ty, t->t1, expected);
    }
    case TermTag::Let: {
      auto ty = cart(g, t->t0, nullptr);
      TypeCtx g2 = g;
      g2.emplace_back(t->name, ty);
      return lin(g2, v, t->t1, expected);
    }
    case TermTag::LinOp: {
      // names are "D:op" (forward derivative) and "Dt:op" (its transpose)
      bool transpose = t->name.rfind("Dt:", 0) == 0;
      bool forward = t->name.rfind("D:", 0) == 0;
      if (!transpose && !forward) fail(Err::MissingPrimitiveDerivative, t->name);
      std::string base = t->name.substr(transpose ? 3 : 2);
      if (!find_prim(base)) fail(Err::MissingPrimitiveDerivative, base);
      std::vector<int> widths;
      for (const auto& a : t->args)
        widths.push_back(real_width(cart(g, a, nullptr), "argument of " + base));
      auto sig = op_sig(base, widths);
      auto args_tuple = [&]() -> TypePtr {
        if (widths.empty()) return ty_lunit();
        TypePtr acc = ty_lreal(widths[0]);
        for (std::size_t i = 1; i < widths.size(); ++i)
          acc = ty_lprod(acc, ty_lreal(widths[i]));
        return acc;
      };
      if (forward) {
        lin(g, v, t->t0, args_tuple());
        return finish(ty_lreal(sig.result_width), expected, "derivative operation");
      }
      lin(g, v, t->t0, ty_lreal(sig.result_width));
      return finish(args_tuple(), expected, "transposed derivative operation");
    }
    case TermTag::UnitVal:
      return finish(ty_lunit(), expected, "linear unit");
    case TermTag::Zero: {
      if (!expected) fail(Err::NotLinearType, "cannot synthesize the type of 0");
      if (kind_check_target(delta, expected) == Kind::CartType && expected->tag != TypeTag::TVar)
        fail(Err::NotLinearType, "0 at cartesian type " + print_type(expected));
      return expected;
    }
    case TermTag::Add: {
      TypePtr ty = expected;
      if (!ty) ty = lin(g, v, t->t0, nullptr);
      else lin(g, v, t->t0, ty);
      lin(g, v, t->t1, ty);
      if (kind_check_target(delta, ty) == Kind::CartType && ty->tag != TypeTag::TVar)
        fail(Err::NotLinearType, "+ at cartesian type " + print_type(ty));
      return ty;
    }
    case TermTag::Pair: {
      TypePtr ea, eb;
      if (expected) {
        if (expected->tag != TypeTag::LProd)
          fail(Err::TypeMismatch, "linear pair against " + print_type(expected));
        ea = expected->a;
        eb = expected->b;
      }
      return ty_lprod(lin(g, v, t->t0, ea), lin(g, v, t->t1, eb));
    }
    case TermTag::Fst: {
      auto ty = lin(g, v, t->t0, nullptr);
      if (ty->tag != TypeTag::LProd) fail(Err::TypeMismatch, "fst of " + print_type(ty));
      return finish(ty->a, expected, "linear fst");
    }
    case TermTag::Snd: {
      auto ty = lin(g, v, t->t0, nullptr);
      if (ty->tag != TypeTag::LProd) fail(Err::TypeMismatch, "snd of " + print_type(ty));
      return finish(ty->b, expected, "linear snd");
    }
    case TermTag::Lam: {  // power introduction
      if (!t->ann) fail(Err::TypeMismatch, "missing annotation");
      TypeCtx g2 = g;
      g2.emplace_back(t->name, t->ann);
      TypePtr ebody = expected && expected->tag == TypeTag::Power ? expected->b : nullptr;
      auto body = lin(g2, v, t->t0, ebody);
      return finish(ty_power(t->ann, body), expected, "power");
    }
    case TermTag::App: {  // power elimination
      auto f = lin(g, v, t->t0, nullptr);
      if (f->tag != TypeTag::Power) fail(Err::TypeMismatch, "power application of " + print_type(f));
      cart(g, t->t1, f->a);
      return finish(f->b, expected, "power application");
    }
    case TermTag::LinApp: {
      auto f = cart(g, t->t0, nullptr);
      if (f->tag != TypeTag::LinArrow)
        fail(Err::TypeMismatch, "linear application of " + print_type(f));
      lin(g, v, t->t1, f->a);
      return finish(f->b, expected, "linear application");
    }
    case TermTag::CopowIntro: {
      auto pt = cart(g, t->t0, nullptr);
      TypePtr ebody = expected && expected->tag == TypeTag::Copower ? expected->b : nullptr;
      auto body = lin(g, v, t->t1, ebody);
      return finish(ty_copower(pt, body), expected, "copower");
    }
    case TermTag::CopowElim: {
      auto cp = lin(g, v, t->t0, nullptr);
      if (cp->tag != TypeTag::Copower) fail(Err::TypeMismatch, "copower elim of " + print_type(cp));
      TypeCtx g2 = g;
      g2.emplace_back(t->name, cp->a);
      return lin(g2, cp->b, t->t1, expected);
    }
    case TermTag::Match: {  // cartesian scrutinee, linear branches
      auto sty = cart(g, t->t0, nullptr);
      if (sty->tag != TypeTag::Variant) fail(Err::TypeMismatch, "match on " + print_type(sty));
      if (t->branches.size() != sty->ctors.size()) fail(Err::NonExhaustiveMatch, "branch count");
      TypePtr result = expected;
      for (std::size_t i = 0; i < sty->ctors.size(); ++i) {
        if (t->branches[i].label != sty->ctors[i].first) fail(Err::NonExhaustiveMatch, "order");
        TypeCtx g2 = g;
        g2.emplace_back(t->branches[i].binder, sty->ctors[i].second);
        auto bty = lin(g2, v, t->branches[i].body, result);
        if (!result) result = bty;
      }
      return result;
    }
    case TermTag::Roll: {
      if (!t->ann || t->ann->tag != TypeTag::LMu) fail(Err::TypeMismatch, "linear roll annotation");
      lin(g, v, t->t0, subst_type(t->ann->a, t->ann->name, t->ann));
      return finish(t->ann, expected, "linear roll");
    }
    case TermTag::Fold: {
      if (!t->name.empty()) fail(Err::LinearVarMisuse, "linear fold binds v");
      auto mty = lin(g, v, t->t0, nullptr);
      if (mty->tag != TypeTag::LMu) fail(Err::TypeMismatch, "linear fold of " + print_type(mty));
      if (!t->ann) fail(Err::TypeMismatch, "linear fold annotation");
      lin(g, subst_type(mty->a, mty->name, t->ann), t->t1, t->ann);
      return finish(t->ann, expected, "linear fold");
    }
    case TermTag::Gen: {
      if (!t->name.empty()) fail(Err::LinearVarMisuse, "linear gen binds v");
      if (!t->ann || t->ann->tag != TypeTag::LNu) fail(Err::TypeMismatch, "linear gen annotation");
      auto seed = lin(g, v, t->t0, nullptr);
      lin(g, seed, t->t1, subst_type(t->ann->a, t->ann->name, seed));
      return finish(t->ann, expected, "linear gen");
    }
    case TermTag::Unroll: {
      auto nty = lin(g, v, t->t0, nullptr);
      if (nty->tag != TypeTag::LNu) fail(Err::TypeMismatch, "linear unroll of " + print_type(nty));
      return finish(subst_type(nty->a, nty->name, nty), expected, "linear unroll");
    }
    case TermTag::Proj: {
      auto ty = lin(g, v, t->t0, nullptr);
      for (int i = t->arity; i > t->index; --i) {
        if (ty->tag != TypeTag::LProd) fail(Err::TypeMismatch, "projection of " + print_type(ty));
        ty = ty->a;
      }
      if (t->index > 1) {
        if (ty->tag != TypeTag::LProd) fail(Err::TypeMismatch, "projection of " + print_type(ty));
        ty = ty->b;
      }
      return finish(ty, expected, "projection");
    }
    case TermTag::CoProj: {
      if (!expected) fail(Err::NotLinearType, "cannot synthesize a coprojection");
      TypePtr comp = expected;
      for (int i = t->arity; i > t->index; --i) {
        if (comp->tag != TypeTag::LProd)
          fail(Err::TypeMismatch, "coprojection into " + print_type(expected));
        comp = comp->a;
      }
      if (t->index > 1) {
        if (comp->tag != TypeTag::LProd)
          fail(Err::TypeMismatch, "coprojection into " + print_type(expected));
        comp = comp->b;
      }
      lin(g, v, t->t0, comp);
      return expected;
    }
    case TermTag::LSumInj: {
      if (!t->ann || t->ann->tag != TypeTag::LSum) fail(Err::TypeMismatch, "iota annotation");
      if (t->index < 1 || t->index > static_cast<int>(t->ann->alts.size()))
        fail(Err::TypeMismatch, "iota index");
      lin(g, v, t->t0, t->ann->alts[t->index - 1]);
      return finish(t->ann, expected, "sum injection");
    }
    case TermTag::LSumProj: {
      auto ty = lin(g, v, t->t0, nullptr);
      if (ty->tag != TypeTag::LSum) fail(Err::TypeMismatch, "pi of " + print_type(ty));
      if (t->index < 1 || t->index > static_cast<int>(ty->alts.size()))
        fail(Err::TypeMismatch, "pi index");
      return finish(ty->alts[t->index - 1], expected, "sum projection");
    }
    case TermTag::LCase: {
      auto ty = lin(g, v, t->t0, nullptr);
      if (ty->tag != TypeTag::LSum) fail(Err::TypeMismatch, "lcase of " + print_type(ty));
      if (t->args.size() != ty->alts.size()) fail(Err::ArityMismatch, "lcase branches");
      TypePtr result = expected;
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        auto bty = lin(g, ty->alts[i], t->args[i], result);
        if (!result) result = bty;
      }
      return result;
    }
    default:
      fail(Err::LinearVarMisuse, "cartesian term in linear position");
  }
}

}  // namespace

TypePtr type_check_target(const KindCtx& delta, const TypeCtx& gamma, const TypePtr& linhyp,
                          const TermPtr& t, const TypePtr& expected) {
  TargetChecker c{delta};
  if (linhyp) return c.lin(gamma, linhyp, t, expected);
  return c.cart(gamma, t, expected);
}

}  // namespace chad
