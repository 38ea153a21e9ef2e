#include "chad/subst.hpp"

namespace chad {

namespace {

void ftv(const TypePtr& t, std::set<std::string>& bound, std::set<std::string>& out) {
  if (!t) return;
  switch (t->tag) {
    case TypeTag::TVar:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case TypeTag::Real:
    case TypeTag::LReal:
    case TypeTag::Unit:
    case TypeTag::LUnit:
      return;
    case TypeTag::Prod:
    case TypeTag::Arrow:
    case TypeTag::LProd:
    case TypeTag::Power:
    case TypeTag::Copower:
    case TypeTag::LinArrow:
      ftv(t->a, bound, out);
      ftv(t->b, bound, out);
      return;
    case TypeTag::Variant:
    case TypeTag::CaseType:
      for (const auto& c : t->ctors) ftv(c.second, bound, out);
      return;
    case TypeTag::LSum:
      for (const auto& a : t->alts) ftv(a, bound, out);
      return;
    case TypeTag::Mu:
    case TypeTag::Nu:
    case TypeTag::LMu:
    case TypeTag::LNu: {
      bool added = bound.insert(t->name).second;
      ftv(t->a, bound, out);
      if (added) bound.erase(t->name);
      return;
    }
  }
}

void ftermv(const TermPtr& t, std::set<std::string>& bound, std::set<std::string>& out) {
  if (!t) return;
  auto under = [&](const std::string& x, const TermPtr& body) {
    bool added = !x.empty() && bound.insert(x).second;
    ftermv(body, bound, out);
    if (added) bound.erase(x);
  };
  switch (t->tag) {
    case TermTag::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case TermTag::Let:
      ftermv(t->t0, bound, out);
      under(t->name, t->t1);
      return;
    case TermTag::Lam:
      under(t->name, t->t0);
      return;
    case TermTag::Match:
      ftermv(t->t0, bound, out);
      for (const auto& b : t->branches) under(b.binder, b.body);
      return;
    case TermTag::Fold:
    case TermTag::Gen:
      ftermv(t->t0, bound, out);
      under(t->name, t->t1);
      return;
    case TermTag::CopowElim:
      ftermv(t->t0, bound, out);
      under(t->name, t->t1);
      return;
    default:
      ftermv(t->t0, bound, out);
      ftermv(t->t1, bound, out);
      for (const auto& a : t->args) ftermv(a, bound, out);
      for (const auto& b : t->branches) under(b.binder, b.body);
      return;
  }
}

std::string avoid(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + "'" + (i == 1 ? "" : std::to_string(i - 1));
    if (!taken.count(cand)) return cand;
  }
}

TypePtr rebuild2(const TypePtr& t, TypePtr a, TypePtr b) {
  auto n = std::make_shared<Type>(*t);
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

}  // namespace

std::set<std::string> free_type_vars(const TypePtr& t) {
  std::set<std::string> bound, out;
  ftv(t, bound, out);
  return out;
}

std::set<std::string> free_term_vars(const TermPtr& t) {
  std::set<std::string> bound, out;
  ftermv(t, bound, out);
  return out;
}

TypePtr subst_type(const TypePtr& ty, const std::string& var, const TypePtr& repl) {
  if (!ty) return ty;
  switch (ty->tag) {
    case TypeTag::TVar:
      return ty->name == var ? repl : ty;
    case TypeTag::Real:
    case TypeTag::LReal:
    case TypeTag::Unit:
    case TypeTag::LUnit:
      return ty;
    case TypeTag::Prod:
    case TypeTag::Arrow:
    case TypeTag::LProd:
    case TypeTag::Power:
    case TypeTag::Copower:
    case TypeTag::LinArrow:
      return rebuild2(ty, subst_type(ty->a, var, repl), subst_type(ty->b, var, repl));
    case TypeTag::Variant:
    case TypeTag::CaseType: {
      auto n = std::make_shared<Type>(*ty);
      for (auto& c : n->ctors) c.second = subst_type(c.second, var, repl);
      return n;
    }
    case TypeTag::LSum: {
      auto n = std::make_shared<Type>(*ty);
      for (auto& a : n->alts) a = subst_type(a, var, repl);
      return n;
    }
    case TypeTag::Mu:
    case TypeTag::Nu:
    case TypeTag::LMu:
    case TypeTag::LNu: {
      if (ty->name == var) return ty;  // bound occurrence shadows
      auto fv = free_type_vars(repl);
      std::string binder = ty->name;
      TypePtr body = ty->a;
      if (fv.count(binder)) {
        auto taken = fv;
        auto bodyfv = free_type_vars(body);
        taken.insert(bodyfv.begin(), bodyfv.end());
        taken.insert(var);
        std::string fresh = avoid(binder, taken);
        body = subst_type(body, binder, ty_var(fresh));
        binder = fresh;
      }
      auto n = std::make_shared<Type>(*ty);
      n->name = binder;
      n->a = subst_type(body, var, repl);
      return n;
    }
  }
  return ty;
}

namespace {

TermPtr subst_rec(const TermPtr& t, const std::string& var, const TermPtr& repl,
                  const std::set<std::string>& repl_fv) {
  if (!t) return t;
  // rename a binder if it would capture a free variable of repl
  auto freshen = [&](const std::string& binder, const TermPtr& body,
                     std::string& out_binder) -> TermPtr {
    if (binder.empty() || !repl_fv.count(binder)) {
      out_binder = binder;
      return body;
    }
    auto taken = repl_fv;
    auto bfv = free_term_vars(body);
    taken.insert(bfv.begin(), bfv.end());
    taken.insert(var);
    out_binder = avoid(binder, taken);
    return subst_rec(body, binder, mk_var(out_binder), {out_binder});
  };
  auto go = [&](const TermPtr& s) { return subst_rec(s, var, repl, repl_fv); };
  switch (t->tag) {
    case TermTag::Var:
      return t->name == var ? repl : t;
    case TermTag::Let: {
      auto rhs = go(t->t0);
      if (t->name == var) return mk_let(t->name, rhs, t->t1);
      std::string b;
      auto body = freshen(t->name, t->t1, b);
      return mk_let(b, rhs, go(body));
    }
    case TermTag::Lam: {
      if (t->name == var) return t;
      std::string b;
      auto body = freshen(t->name, t->t0, b);
      return mk_lam(b, t->ann, go(body));
    }
    case TermTag::Match: {
      auto scrut = go(t->t0);
      std::vector<MatchBranch> bs;
      for (const auto& br : t->branches) {
        if (br.binder == var) {
          bs.push_back(br);
        } else {
          std::string b;
          auto body = freshen(br.binder, br.body, b);
          bs.push_back({br.label, b, go(body)});
        }
      }
      return mk_match(scrut, std::move(bs));
    }
    case TermTag::Fold:
    case TermTag::Gen: {
      auto tgt = go(t->t0);
      TermPtr body = t->t1;
      std::string b = t->name;
      if (t->name != var && !t->name.empty()) {
        body = freshen(t->name, t->t1, b);
        body = subst_rec(body, var, repl, repl_fv);
      } else if (t->name.empty()) {
        body = go(body);  // linear recursion binds only v
      }
      auto n = std::make_shared<Term>(*t);
      n->t0 = tgt;
      n->t1 = body;
      n->name = b;
      return n;
    }
    case TermTag::CopowElim: {
      auto tgt = go(t->t0);
      if (t->name == var) return mk_copow_elim(tgt, t->name, t->t1);
      std::string b;
      auto body = freshen(t->name, t->t1, b);
      return mk_copow_elim(tgt, b, go(body));
    }
    default: {
      auto n = std::make_shared<Term>(*t);
      n->t0 = go(t->t0);
      n->t1 = go(t->t1);
      for (auto& a : n->args) a = go(a);
      return n;
    }
  }
}

}  // namespace

TermPtr subst_term(const TermPtr& t, const std::string& var, const TermPtr& repl) {
  return subst_rec(t, var, repl, free_term_vars(repl));
}

TermPtr subst_linvar(const TermPtr& t, const TermPtr& repl) {
  if (!t) return t;
  switch (t->tag) {
    case TermTag::LinVar:
      return repl;
    case TermTag::LinLam:
      return t;  // rebinds v
    case TermTag::LinLet:
      return mk_linlet(subst_linvar(t->t0, repl), t->t1);
    case TermTag::CopowElim:
      return mk_copow_elim(subst_linvar(t->t0, repl), t->name, t->t1);
    case TermTag::LCase: {
      auto n = std::make_shared<Term>(*t);
      n->t0 = subst_linvar(t->t0, repl);
      return n;  // branches rebind v
    }
    case TermTag::Fold:
    case TermTag::Gen: {
      auto n = std::make_shared<Term>(*t);
      n->t0 = subst_linvar(t->t0, repl);
      if (!t->name.empty()) n->t1 = subst_linvar(t->t1, repl);  // linear algebra rebinds v
      return n;
    }
    default: {
      auto n = std::make_shared<Term>(*t);
      n->t0 = subst_linvar(t->t0, repl);
      n->t1 = subst_linvar(t->t1, repl);
      for (auto& a : n->args) a = subst_linvar(a, repl);
      for (auto& b : n->branches) b.body = subst_linvar(b.body, repl);
      return n;
    }
  }
}

TermPtr fmap_type(const TypePtr& ty, const std::string& hole, const std::string& binder,
                  const TermPtr& action, const TypePtr& action_out) {
  if (!free_type_vars(ty).count(hole)) return mk_var(binder);
  switch (ty->tag) {
    case TypeTag::TVar:
      return action;  // ty == hole here, the constant case returned above
    case TypeTag::Prod: {
      auto left = subst_term(fmap_type(ty->a, hole, binder, action, action_out), binder,
                             mk_fst(mk_var(binder)));
      auto right = subst_term(fmap_type(ty->b, hole, binder, action, action_out), binder,
                              mk_snd(mk_var(binder)));
      return mk_pair(left, right);
    }
    case TypeTag::Variant: {
      std::vector<std::pair<std::string, TypePtr>> out_ctors;
      for (const auto& c : ty->ctors)
        out_ctors.emplace_back(c.first, subst_type(c.second, hole, action_out));
      auto out_variant = ty_variant(out_ctors);
      std::vector<MatchBranch> bs;
      for (const auto& c : ty->ctors) {
        auto mapped = fmap_type(c.second, hole, binder, action, action_out);
        bs.push_back({c.first, binder, mk_inj(c.first, out_variant, mapped)});
      }
      return mk_match(mk_var(binder), std::move(bs));
    }
    case TypeTag::Mu: {
      // hole != ty->name since hole is free in ty
      auto out_mu = subst_type(ty, hole, action_out);
      auto mapped = fmap_type(ty->a, hole, binder, action, action_out);
      return mk_fold(mk_var(binder), binder, mk_roll(out_mu, mapped), out_mu);
    }
    case TypeTag::Nu: {
      auto out_nu = subst_type(ty, hole, action_out);
      auto mapped = fmap_type(ty->a, hole, binder, action, action_out);
      auto body = subst_term(mapped, binder, mk_unroll(mk_var(binder)));
      return mk_gen(out_nu, mk_var(binder), binder, body);
    }
    default:
      // Real, Unit, Arrow (closed) and foreign variables are constant in hole.
      return mk_var(binder);
  }
}

TermPtr lin_fmap(const TypePtr& lty, const std::string& hole, const TermPtr& action,
                 const TypePtr& action_out) {
  if (!free_type_vars(lty).count(hole)) return mk_linvar();
  switch (lty->tag) {
    case TypeTag::TVar:
      return action;
    case TypeTag::LProd: {
      auto left = subst_linvar(lin_fmap(lty->a, hole, action, action_out), mk_fst(mk_linvar()));
      auto right = subst_linvar(lin_fmap(lty->b, hole, action, action_out), mk_snd(mk_linvar()));
      return mk_pair(left, right);
    }
    case TypeTag::LSum: {
      std::vector<TypePtr> out_alts;
      for (const auto& a : lty->alts) out_alts.push_back(subst_type(a, hole, action_out));
      auto out_sum = ty_lsum(out_alts);
      std::vector<TermPtr> bodies;
      for (std::size_t i = 0; i < lty->alts.size(); ++i) {
        auto mapped = lin_fmap(lty->alts[i], hole, action, action_out);
        bodies.push_back(mk_lsum_inj(static_cast<int>(i) + 1, out_sum, mapped));
      }
      return mk_lcase(mk_linvar(), std::move(bodies));
    }
    case TypeTag::LMu: {
      auto out_mu = subst_type(lty, hole, action_out);
      auto mapped = lin_fmap(lty->a, hole, action, action_out);
      return mk_fold(mk_linvar(), "", mk_roll(out_mu, mapped), out_mu);
    }
    case TypeTag::LNu: {
      auto out_nu = subst_type(lty, hole, action_out);
      auto mapped = lin_fmap(lty->a, hole, action, action_out);
      auto body = subst_linvar(mapped, mk_unroll(mk_linvar()));
      return mk_gen(out_nu, mk_linvar(), "", body);
    }
    default:
      // LReal, LUnit, Power/Copower/LinArrow over closed types: identity on v.
      return mk_linvar();
  }
}

}  // namespace chad
