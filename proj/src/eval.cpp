#include "chad/eval.hpp"

#include "chad/errors.hpp"
#include "chad/printer.hpp"
#include "chad/subst.hpp"

namespace chad {

namespace {

Vec lin_to_vec(const LinPtr& l, int width) {
  if (is_zero(l)) return Vec(width, 0.0);
  if (l->tag != LinValue::Tag::Vec) fail(Err::Internal, "expected a linear vector");
  if (static_cast<int>(l->vec.size()) != width) fail(Err::Internal, "linear vector width");
  return l->vec;
}

// left-nested tuple access over linear values
LinPtr tuple_component(const LinPtr& v, int index, int arity) {
  LinPtr cur = v;
  for (int i = arity; i > index; --i) {
    if (is_zero(cur)) return l_zero();
    if (cur->tag != LinValue::Tag::Pair) fail(Err::Internal, "projection shape");
    cur = cur->a;
  }
  if (index > 1) {
    if (is_zero(cur)) return l_zero();
    if (cur->tag != LinValue::Tag::Pair) fail(Err::Internal, "projection shape");
    cur = cur->b;
  }
  return cur;
}

// recursive std::function that may escape into lazy cells
template <class Sig>
struct Rec {
  std::shared_ptr<std::function<Sig>> fn = std::make_shared<std::function<Sig>>();
  template <class... A>
  auto operator()(A&&... a) const {
    return (*fn)(std::forward<A>(a)...);
  }
};

}  // namespace

void Evaluator::tick(const TermPtr& t) {
  if (cfg_.counts) ++(*cfg_.counts)[t.get()];
  if (++steps_ > cfg_.max_steps) fail(Err::Internal, "evaluation step limit exceeded");
}

ValuePtr Evaluator::apply(const ValuePtr& f, const ValuePtr& arg) {
  if (f->tag != Value::Tag::Closure) fail(Err::Internal, "applying a non-closure");
  return eval(f->env.extend(f->binder, arg), f->body);
}

LinPtr Evaluator::apply_lin(const ValuePtr& f, const LinPtr& arg) {
  if (f->tag != Value::Tag::LinClosure) fail(Err::Internal, "applying a non-linear-closure");
  return eval_lin(f->env.with_lin(arg), f->body);
}

LinPtr Evaluator::apply_power(const LinPtr& p, const ValuePtr& arg) {
  if (is_zero(p)) return l_zero();
  if (p->tag != LinValue::Tag::Power) fail(Err::Internal, "applying a non-power");
  return p->power(arg);
}

ValuePtr Evaluator::eval(const Env& env, const TermPtr& t) {
  tick(t);
  switch (t->tag) {
    case TermTag::Var: {
      const ValuePtr* v = env.find(t->name);
      if (!v) fail(Err::UnboundVar, t->name);
      return *v;
    }
    case TermTag::Let:
      return eval(env.extend(t->name, eval(env, t->t0)), t->t1);
    case TermTag::PrimOp: {
      std::vector<Vec> args;
      for (const auto& a : t->args) {
        auto v = eval(env, a);
        if (v->tag != Value::Tag::RealVec) fail(Err::Internal, "operation argument not a vector");
        args.push_back(v->vec);
      }
      return v_real(prim_eval(t->name, args));
    }
    case TermTag::RealLit:
      return v_real(t->lit);
    case TermTag::UnitVal:
      return v_unit();
    case TermTag::Pair:
      return v_pair(eval(env, t->t0), eval(env, t->t1));
    case TermTag::Fst: {
      auto v = eval(env, t->t0);
      if (v->tag != Value::Tag::Pair) fail(Err::Internal, "fst of non-pair");
      return v->a;
    }
    case TermTag::Snd: {
      auto v = eval(env, t->t0);
      if (v->tag != Value::Tag::Pair) fail(Err::Internal, "snd of non-pair");
      return v->b;
    }
    case TermTag::Lam:
      return v_closure(t->name, t->t0, env);
    case TermTag::App:
      return apply(eval(env, t->t0), eval(env, t->t1));
    case TermTag::Inj:
      return v_inj(t->name, eval(env, t->t0));
    case TermTag::Match: {
      auto scrut = eval(env, t->t0);
      if (scrut->tag != Value::Tag::Inj) fail(Err::Internal, "match on non-variant value");
      for (const auto& b : t->branches)
        if (b.label == scrut->label) return eval(env.extend(b.binder, scrut->a), b.body);
      fail(Err::Internal, "no branch for " + scrut->label);
    }
    case TermTag::Roll:
      return v_roll(t->ann, eval(env, t->t0));
    case TermTag::Fold:
      return eval_fold(env, t);
    case TermTag::Gen:
      return eval_gen(env, t);
    case TermTag::Unroll: {
      auto v = eval(env, t->t0);
      if (v->tag != Value::Tag::Codata) fail(Err::Internal, "unroll of non-codata");
      return force_codata(v);
    }
    case TermTag::LinLam:
      return v_linclosure(t->t0, env);
    default:
      fail(Err::Internal, "linear term in cartesian evaluation: " + print_term(t));
  }
}

ValuePtr Evaluator::eval_fold(const Env& env, const TermPtr& t) {
  if (t->name.empty()) fail(Err::Internal, "linear fold in cartesian evaluation");
  auto target = eval(env, t->t0);
  Rec<ValuePtr(const ValuePtr&)> go;
  *go.fn = [this, env, t, go](const ValuePtr& mv) -> ValuePtr {
    if (mv->tag != Value::Tag::Roll) fail(Err::Internal, "fold of non-roll value");
    std::map<std::string, Action> acts;
    acts[mv->ty->name] = Action{[go](const ValuePtr& sub) { return go(sub); }, t->ann};
    auto x = fmap_value(mv->ty->a, acts, mv->a);
    return eval(env.extend(t->name, x), t->t1);
  };
  return go(target);
}

ValuePtr Evaluator::eval_gen(const Env& env, const TermPtr& t) {
  if (t->name.empty()) fail(Err::Internal, "linear gen in cartesian evaluation");
  auto nu = t->ann;
  Rec<ValuePtr(const ValuePtr&)> wrap;
  *wrap.fn = [this, env, t, nu, wrap](const ValuePtr& seed) -> ValuePtr {
    return v_codata(nu, [this, env, t, nu, seed, wrap]() -> ValuePtr {
      auto raw = eval(env.extend(t->name, seed), t->t1);
      std::map<std::string, Action> acts;
      acts[nu->name] = Action{[wrap](const ValuePtr& s) { return wrap(s); }, nu};
      return fmap_value(nu->a, acts, raw);
    });
  };
  return wrap(eval(env, t->t0));
}

ValuePtr Evaluator::fmap_value(const TypePtr& ty, const std::map<std::string, Action>& actions,
                               const ValuePtr& v) {
  switch (ty->tag) {
    case TypeTag::TVar: {
      auto it = actions.find(ty->name);
      return it == actions.end() ? v : it->second.fn(v);
    }
    case TypeTag::Prod: {
      if (v->tag != Value::Tag::Pair) fail(Err::Internal, "fmap pair shape");
      return v_pair(fmap_value(ty->a, actions, v->a), fmap_value(ty->b, actions, v->b));
    }
    case TypeTag::Variant: {
      if (v->tag != Value::Tag::Inj) fail(Err::Internal, "fmap variant shape");
      for (const auto& c : ty->ctors)
        if (c.first == v->label) return v_inj(v->label, fmap_value(c.second, actions, v->a));
      fail(Err::Internal, "fmap: unknown constructor " + v->label);
    }
    case TypeTag::Mu: {
      TypePtr out_mu = ty;
      for (const auto& [k, a] : actions)
        if (k != ty->name && a.out) out_mu = subst_type(out_mu, k, a.out);
      auto acts2 = actions;
      acts2.erase(ty->name);
      Rec<ValuePtr(const ValuePtr&)> self;
      *self.fn = [this, ty, acts2, out_mu, self](const ValuePtr& mv) -> ValuePtr {
        if (mv->tag != Value::Tag::Roll) fail(Err::Internal, "fmap mu shape");
        auto inner = acts2;
        inner[ty->name] = Action{[self](const ValuePtr& s) { return self(s); }, out_mu};
        return v_roll(out_mu, fmap_value(ty->a, inner, mv->a));
      };
      return self(v);
    }
    case TypeTag::Nu: {
      TypePtr out_nu = ty;
      for (const auto& [k, a] : actions)
        if (k != ty->name && a.out) out_nu = subst_type(out_nu, k, a.out);
      auto acts2 = actions;
      acts2.erase(ty->name);
      Rec<ValuePtr(const ValuePtr&)> self;
      *self.fn = [this, ty, acts2, out_nu, self](const ValuePtr& cv) -> ValuePtr {
        if (cv->tag != Value::Tag::Codata) fail(Err::Internal, "fmap nu shape");
        return v_codata(out_nu, [this, ty, acts2, out_nu, self, cv]() {
          auto inner = acts2;
          inner[ty->name] = Action{[self](const ValuePtr& s) { return self(s); }, out_nu};
          return fmap_value(ty->a, inner, force_codata(cv));
        });
      };
      return self(v);
    }
    default:
      // Real, Unit, closed arrows and foreign type variables are constant.
      return v;
  }
}

LinPtr Evaluator::eval_lin(const Env& env, const TermPtr& t) {
  tick(t);
  switch (t->tag) {
    case TermTag::LinVar:
      if (!env.lin) fail(Err::LinearVarMisuse, "no linear value in scope");
      return env.lin;
    case TermTag::LinLet:
      return eval_lin(env.with_lin(eval_lin(env, t->t0)), t->t1);
    case TermTag::Let:
      return eval_lin(env.extend(t->name, eval(env, t->t0)), t->t1);
    case TermTag::LinOp: {
      bool transpose = t->name.rfind("Dt:", 0) == 0;
      std::string base = t->name.substr(transpose ? 3 : 2);
      std::vector<Vec> args;
      std::vector<int> widths;
      for (const auto& a : t->args) {
        auto v = eval(env, a);
        args.push_back(v->vec);
        widths.push_back(static_cast<int>(v->vec.size()));
      }
      auto lin = eval_lin(env, t->t0);
      if (transpose) {
        int m = op_sig(base, widths).result_width;
        auto cots = prim_vjp(base, args, lin_to_vec(lin, m));
        if (cots.empty()) return l_unit();
        LinPtr acc = l_vec(cots[0]);
        for (std::size_t i = 1; i < cots.size(); ++i) acc = l_pair(acc, l_vec(cots[i]));
        return acc;
      }
      std::vector<Vec> tangents;
      int k = static_cast<int>(args.size());
      for (int i = 1; i <= k; ++i)
        tangents.push_back(lin_to_vec(tuple_component(lin, i, k), widths[i - 1]));
      return l_vec(prim_jvp(base, args, tangents));
    }
    case TermTag::UnitVal:
      return l_unit();
    case TermTag::Zero:
      return l_zero();
    case TermTag::Add:
      return lin_add(eval_lin(env, t->t0), eval_lin(env, t->t1));
    case TermTag::Pair:
      return l_pair(eval_lin(env, t->t0), eval_lin(env, t->t1));
    case TermTag::Fst: {
      auto v = eval_lin(env, t->t0);
      if (is_zero(v)) return v;
      if (v->tag != LinValue::Tag::Pair) fail(Err::Internal, "linear fst shape");
      return v->a;
    }
    case TermTag::Snd: {
      auto v = eval_lin(env, t->t0);
      if (is_zero(v)) return v;
      if (v->tag != LinValue::Tag::Pair) fail(Err::Internal, "linear snd shape");
      return v->b;
    }
    case TermTag::Lam: {  // power introduction captures the linear value
      Env captured = env;
      TermPtr body = t->t0;
      std::string binder = t->name;
      return l_power([this, captured, binder, body](const ValuePtr& x) {
        return eval_lin(captured.extend(binder, x), body);
      });
    }
    case TermTag::App:
      return apply_power(eval_lin(env, t->t0), eval(env, t->t1));
    case TermTag::LinApp:
      return apply_lin(eval(env, t->t0), eval_lin(env, t->t1));
    case TermTag::CopowIntro:
      return l_copow({{eval(env, t->t0), eval_lin(env, t->t1)}});
    case TermTag::CopowElim: {
      auto cp = eval_lin(env, t->t0);
      if (is_zero(cp)) return l_zero();
      if (cp->tag != LinValue::Tag::Copow) fail(Err::Internal, "copower elim shape");
      LinPtr acc = l_zero();
      for (const auto& [point, lin] : cp->pairs)
        acc = lin_add(acc, eval_lin(env.extend(t->name, point).with_lin(lin), t->t1));
      return acc;
    }
    case TermTag::Match: {
      auto scrut = eval(env, t->t0);
      if (scrut->tag != Value::Tag::Inj) fail(Err::Internal, "linear match on non-variant");
      for (const auto& b : t->branches)
        if (b.label == scrut->label) return eval_lin(env.extend(b.binder, scrut->a), b.body);
      fail(Err::Internal, "no branch for " + scrut->label);
    }
    case TermTag::Roll:
      return l_roll(t->ann, eval_lin(env, t->t0));
    case TermTag::Fold:
      return eval_lin_fold(env, t);
    case TermTag::Gen:
      return eval_lin_gen(env, t);
    case TermTag::Unroll: {
      auto v = eval_lin(env, t->t0);
      if (is_zero(v)) return v;
      if (v->tag != LinValue::Tag::Codata) fail(Err::Internal, "linear unroll shape");
      return force_lin(v);
    }
    case TermTag::Proj:
      return tuple_component(eval_lin(env, t->t0), t->index, t->arity);
    case TermTag::CoProj: {
      auto inner = eval_lin(env, t->t0);
      if (t->arity == 1) return inner;
      LinPtr acc = t->index == 1 ? inner : l_zero();
      for (int i = 2; i <= t->arity; ++i) acc = l_pair(acc, i == t->index ? inner : l_zero());
      return acc;
    }
    case TermTag::LSumInj: {
      auto inner = eval_lin(env, t->t0);
      if (cfg_.lsum_biproduct) {
        std::vector<LinPtr> items(static_cast<std::size_t>(t->arity), l_zero());
        items[t->index - 1] = inner;
        return l_tuple(std::move(items));
      }
      return l_sum_at(t->index, inner);
    }
    case TermTag::LSumProj: {
      auto v = eval_lin(env, t->t0);
      if (is_zero(v)) return v;
      if (v->tag == LinValue::Tag::Tuple) return v->items[t->index - 1];
      if (v->tag == LinValue::Tag::SumAt) {
        if (v->index != t->index)
          fail(Err::MismatchedBranch, "projecting branch " + std::to_string(t->index) +
                                          " out of a branch-" + std::to_string(v->index) +
                                          " cotangent");
        return v->a;
      }
      fail(Err::Internal, "sum projection shape");
    }
    case TermTag::LCase: {
      auto v = eval_lin(env, t->t0);
      if (is_zero(v)) return v;
      if (v->tag == LinValue::Tag::SumAt)
        return eval_lin(env.with_lin(v->a), t->args[v->index - 1]);
      if (v->tag == LinValue::Tag::Tuple) {
        LinPtr acc = l_zero();
        for (std::size_t i = 0; i < t->args.size(); ++i)
          acc = lin_add(acc, eval_lin(env.with_lin(v->items[i]), t->args[i]));
        return acc;
      }
      fail(Err::Internal, "lcase shape");
    }
    default:
      fail(Err::Internal, "cartesian term in linear evaluation: " + print_term(t));
  }
}

LinPtr Evaluator::eval_lin_fold(const Env& env, const TermPtr& t) {
  if (t->meta) {
    auto fiber = eval(env, t->meta->fiber);
    auto helper = eval(env, t->meta->helper);
    auto target = eval_lin(env, t->t0);
    if (t->meta->kind == LinRecMeta::Kind::FwdFold) return jvp_fold(t->meta, fiber, helper, target);
    if (t->meta->kind == LinRecMeta::Kind::RevGen) return vjp_gen(t->meta, fiber, helper, target);
    fail(Err::Internal, "fold metadata kind");
  }
  // generic linear catamorphism, for algebras that need no primal fibre
  auto target = eval_lin(env, t->t0);
  Rec<LinPtr(const LinPtr&)> go;
  *go.fn = [this, env, t, go](const LinPtr& lv) -> LinPtr {
    if (is_zero(lv)) return lv;
    if (lv->tag != LinValue::Tag::Roll || !lv->ty) fail(Err::Internal, "linear fold shape");
    std::map<std::string, HoleZip> acts;
    acts[lv->ty->name] = [go](const ValuePtr&, const LinPtr& sub) { return go(sub); };
    auto x = zip_hole(lv->ty->a, acts, nullptr, lv->a);
    return eval_lin(env.with_lin(x), t->t1);
  };
  return go(target);
}

LinPtr Evaluator::eval_lin_gen(const Env& env, const TermPtr& t) {
  if (t->meta) {
    auto fiber = eval(env, t->meta->fiber);
    auto helper = eval(env, t->meta->helper);
    auto seed = eval_lin(env, t->t0);
    if (t->meta->kind == LinRecMeta::Kind::RevFold) return vjp_fold(t->meta, fiber, helper, seed);
    if (t->meta->kind == LinRecMeta::Kind::FwdGen) return jvp_gen(t->meta, fiber, helper, seed);
    fail(Err::Internal, "gen metadata kind");
  }
  // generic linear anamorphism
  auto nu = t->ann;
  Rec<LinPtr(const LinPtr&)> wrap;
  *wrap.fn = [this, env, t, nu, wrap](const LinPtr& seed) -> LinPtr {
    if (is_zero(seed)) return seed;
    return l_codata(nu, [this, env, t, nu, seed, wrap]() -> LinPtr {
      auto raw = eval_lin(env.with_lin(seed), t->t1);
      std::map<std::string, HoleZip> acts;
      acts[nu->name] = [wrap](const ValuePtr&, const LinPtr& s) { return wrap(s); };
      return zip_hole(nu->a, acts, nullptr, raw);
    });
  };
  return wrap(eval_lin(env, t->t0));
}

// ---- primal-directed recursions ----

ValuePtr Evaluator::one_level(const MetaPtr& m, const ValuePtr& muval, const ValuePtr& helper) {
  if (muval->tag != Value::Tag::Roll) fail(Err::Internal, "one_level of non-roll");
  std::map<std::string, Action> acts;
  acts[m->mu_var] = Action{
      [this, m, helper](const ValuePtr& sub) { return primal_fold(m, sub, helper); },
      m->primal_result};
  return fmap_value(m->mu_body, acts, muval->a);
}

ValuePtr Evaluator::primal_fold(const MetaPtr& m, const ValuePtr& muval, const ValuePtr& helper) {
  auto pr = apply(helper, one_level(m, muval, helper));
  if (pr->tag != Value::Tag::Pair) fail(Err::Internal, "helper result shape");
  return pr->a;
}

LinPtr Evaluator::jvp_fold(const MetaPtr& m, const ValuePtr& muval, const ValuePtr& helper,
                           const LinPtr& tangent) {
  if (is_zero(tangent)) return tangent;
  if (tangent->tag != LinValue::Tag::Roll) fail(Err::Internal, "mu tangent shape");
  if (muval->tag != Value::Tag::Roll) fail(Err::Internal, "mu primal shape");
  std::map<std::string, HoleZip> acts;
  acts[m->mu_var] = [this, m, helper](const ValuePtr& sub, const LinPtr& lsub) {
    return jvp_fold(m, sub, helper, lsub);
  };
  auto rebuilt = zip_hole(m->mu_body, acts, muval->a, tangent->a);
  auto pr = apply(helper, one_level(m, muval, helper));
  return apply_lin(pr->b, rebuilt);
}

LinPtr Evaluator::vjp_fold(const MetaPtr& m, const ValuePtr& muval, const ValuePtr& helper,
                           const LinPtr& seed) {
  if (is_zero(seed)) return seed;
  return l_codata(nullptr, [this, m, muval, helper, seed]() -> LinPtr {
    auto pr = apply(helper, one_level(m, muval, helper));
    auto nodecot = apply_lin(pr->b, seed);
    if (muval->tag != Value::Tag::Roll) fail(Err::Internal, "mu primal shape");
    std::map<std::string, HoleZip> acts;
    acts[m->mu_var] = [this, m, helper](const ValuePtr& sub, const LinPtr& s) {
      return vjp_fold(m, sub, helper, s);
    };
    return zip_hole(m->mu_body, acts, muval->a, nodecot);
  });
}

LinPtr Evaluator::jvp_gen(const MetaPtr& m, const ValuePtr& seed_primal, const ValuePtr& helper,
                          const LinPtr& seed_tan) {
  if (is_zero(seed_tan)) return seed_tan;
  return l_codata(nullptr, [this, m, seed_primal, helper, seed_tan]() -> LinPtr {
    auto pr = apply(helper, seed_primal);
    auto node_tan = apply_lin(pr->b, seed_tan);
    std::map<std::string, HoleZip> acts;
    acts[m->mu_var] = [this, m, helper](const ValuePtr& sub_seed, const LinPtr& sub_tan) {
      return jvp_gen(m, sub_seed, helper, sub_tan);
    };
    return zip_hole(m->mu_body, acts, pr->a, node_tan);
  });
}

LinPtr Evaluator::vjp_gen(const MetaPtr& m, const ValuePtr& seed_primal, const ValuePtr& helper,
                          const LinPtr& observed) {
  if (is_zero(observed)) return observed;
  if (observed->tag != LinValue::Tag::Roll) fail(Err::Internal, "observed cotangent shape");
  auto pr = apply(helper, seed_primal);
  std::map<std::string, HoleZip> acts;
  acts[m->mu_var] = [this, m, helper](const ValuePtr& sub_seed, const LinPtr& sub_obs) {
    return vjp_gen(m, sub_seed, helper, sub_obs);
  };
  auto rebuilt = zip_hole(m->mu_body, acts, pr->a, observed->a);
  return apply_lin(pr->b, rebuilt);
}

LinPtr Evaluator::zip_hole(const TypePtr& ty, const std::map<std::string, HoleZip>& actions,
                           const ValuePtr& primal, const LinPtr& lin) {
  switch (ty->tag) {
    case TypeTag::TVar: {
      auto it = actions.find(ty->name);
      return it == actions.end() ? lin : it->second(primal, lin);
    }
    case TypeTag::Prod: {
      ValuePtr pa, pb;
      if (primal) {
        if (primal->tag != Value::Tag::Pair) fail(Err::Internal, "zip pair shape");
        pa = primal->a;
        pb = primal->b;
      }
      LinPtr la = l_zero(), lb = l_zero();
      if (!is_zero(lin)) {
        if (lin->tag != LinValue::Tag::Pair) fail(Err::Internal, "zip linear pair shape");
        la = lin->a;
        lb = lin->b;
      }
      return l_pair(zip_hole(ty->a, actions, pa, la), zip_hole(ty->b, actions, pb, lb));
    }
    case TypeTag::Variant: {
      // the primal's branch identifies the live component; without a primal
      // (generic recursion) the linear tag leads
      int live = -1;
      ValuePtr payload;
      if (primal) {
        if (primal->tag != Value::Tag::Inj) fail(Err::Internal, "zip variant shape");
        for (std::size_t i = 0; i < ty->ctors.size(); ++i)
          if (ty->ctors[i].first == primal->label) live = static_cast<int>(i);
        if (live < 0) fail(Err::Internal, "zip: unknown constructor");
        payload = primal->a;
      }
      if (is_zero(lin)) return lin;
      if (lin->tag == LinValue::Tag::SumAt) {
        int idx = lin->index - 1;
        if (live >= 0 && idx != live)
          fail(Err::MismatchedBranch, "cotangent branch does not match the primal branch");
        return l_sum_at(lin->index, zip_hole(ty->ctors[idx].second, actions, payload, lin->a));
      }
      if (lin->tag == LinValue::Tag::Tuple) {
        std::vector<LinPtr> items = lin->items;
        if (live >= 0) {
          items[live] = zip_hole(ty->ctors[live].second, actions, payload, items[live]);
        } else {
          for (std::size_t i = 0; i < items.size(); ++i)
            items[i] = zip_hole(ty->ctors[i].second, actions, nullptr, items[i]);
        }
        return l_tuple(std::move(items));
      }
      fail(Err::Internal, "zip variant linear shape");
    }
    case TypeTag::Mu: {
      if (is_zero(lin)) return lin;
      auto acts2 = actions;
      acts2.erase(ty->name);
      Rec<LinPtr(const ValuePtr&, const LinPtr&)> self;
      *self.fn = [this, ty, acts2, self](const ValuePtr& p, const LinPtr& l) -> LinPtr {
        if (is_zero(l)) return l;
        ValuePtr pl;
        if (p) {
          if (p->tag != Value::Tag::Roll) fail(Err::Internal, "zip mu shape");
          pl = p->a;
        }
        if (l->tag != LinValue::Tag::Roll) fail(Err::Internal, "zip linear mu shape");
        auto inner = acts2;
        inner[ty->name] = [self](const ValuePtr& sp, const LinPtr& sl) { return self(sp, sl); };
        return l_roll(l->ty, zip_hole(ty->a, inner, pl, l->a));
      };
      return self(primal, lin);
    }
    case TypeTag::Nu: {
      if (is_zero(lin)) return lin;
      if (lin->tag != LinValue::Tag::Codata) fail(Err::Internal, "zip linear nu shape");
      auto acts2 = actions;
      acts2.erase(ty->name);
      Rec<LinPtr(const ValuePtr&, const LinPtr&)> self;
      *self.fn = [this, ty, acts2, self](const ValuePtr& p, const LinPtr& l) -> LinPtr {
        if (is_zero(l)) return l;
        TypePtr cellty = l->tag == LinValue::Tag::Codata ? l->thunk->nu : nullptr;
        return l_codata(cellty, [this, ty, acts2, self, p, l]() -> LinPtr {
          ValuePtr pin;
          if (p) pin = force_codata(p);
          auto inner = acts2;
          inner[ty->name] = [self](const ValuePtr& sp, const LinPtr& sl) { return self(sp, sl); };
          return zip_hole(ty->a, inner, pin, force_lin(l));
        });
      };
      return self(primal, lin);
    }
    default:
      // Real, Unit, closed arrows, foreign variables: pass through.
      return lin;
  }
}

ValuePtr eval(const Env& env, const TermPtr& t, EvalConfig cfg) {
  Evaluator e(cfg);
  return e.eval(env, t);
}

LinPtr eval_lin(const Env& env, const TermPtr& t, EvalConfig cfg) {
  Evaluator e(cfg);
  return e.eval_lin(env, t);
}

}  // namespace chad
