#include "chad/transform.hpp"

#include "chad/errors.hpp"
#include "chad/ops.hpp"
#include "chad/subst.hpp"

namespace chad {

namespace {

TypePtr fwd_primal(const TypePtr& t);
TypePtr fwd_tangent(const TypePtr& t);
TypePtr rev_primal(const TypePtr& t);
TypePtr rev_cotangent(const TypePtr& t);

TypePtr fwd_primal(const TypePtr& t) {
  switch (t->tag) {
    case TypeTag::TVar:
      return t;
    case TypeTag::Real:
      return t;
    case TypeTag::Unit:
      return t;
    case TypeTag::Prod:
      return ty_prod(fwd_primal(t->a), fwd_primal(t->b));
    case TypeTag::Arrow:
      return ty_arrow(fwd_primal(t->a),
                      ty_prod(fwd_primal(t->b), ty_linarrow(fwd_tangent(t->a), fwd_tangent(t->b))));
    case TypeTag::Variant: {
      std::vector<std::pair<std::string, TypePtr>> cs;
      for (const auto& c : t->ctors) cs.emplace_back(c.first, fwd_primal(c.second));
      return ty_variant(cs);
    }
    case TypeTag::Mu:
      return ty_mu(t->name, fwd_primal(t->a));
    case TypeTag::Nu:
      return ty_nu(t->name, fwd_primal(t->a));
    default:
      fail(Err::IllKinded, "not a source type");
  }
}

TypePtr fwd_tangent(const TypePtr& t) {
  switch (t->tag) {
    case TypeTag::TVar:
      return t;  // a linear type variable after translation
    case TypeTag::Real:
      return ty_lreal(t->width);
    case TypeTag::Unit:
      return ty_lunit();
    case TypeTag::Prod:
      return ty_lprod(fwd_tangent(t->a), fwd_tangent(t->b));
    case TypeTag::Arrow:
      return ty_power(fwd_primal(t->a), fwd_tangent(t->b));
    case TypeTag::Variant: {
      std::vector<TypePtr> alts;
      for (const auto& c : t->ctors) alts.push_back(fwd_tangent(c.second));
      return ty_lsum(alts);
    }
    case TypeTag::Mu:
      return ty_lmu(t->name, fwd_tangent(t->a));
    case TypeTag::Nu:
      return ty_lnu(t->name, fwd_tangent(t->a));
    default:
      fail(Err::IllKinded, "not a source type");
  }
}

TypePtr rev_primal(const TypePtr& t) {
  switch (t->tag) {
    case TypeTag::TVar:
    case TypeTag::Real:
    case TypeTag::Unit:
      return t;
    case TypeTag::Prod:
      return ty_prod(rev_primal(t->a), rev_primal(t->b));
    case TypeTag::Arrow:
      return ty_arrow(rev_primal(t->a), ty_prod(rev_primal(t->b),
                                                ty_linarrow(rev_cotangent(t->b), rev_cotangent(t->a))));
    case TypeTag::Variant: {
      std::vector<std::pair<std::string, TypePtr>> cs;
      for (const auto& c : t->ctors) cs.emplace_back(c.first, rev_primal(c.second));
      return ty_variant(cs);
    }
    case TypeTag::Mu:
      return ty_mu(t->name, rev_primal(t->a));
    case TypeTag::Nu:
      return ty_nu(t->name, rev_primal(t->a));
    default:
      fail(Err::IllKinded, "not a source type");
  }
}

TypePtr rev_cotangent(const TypePtr& t) {
  switch (t->tag) {
    case TypeTag::TVar:
      return t;
    case TypeTag::Real:
      return ty_lreal(t->width);
    case TypeTag::Unit:
      return ty_lunit();
    case TypeTag::Prod:
      return ty_lprod(rev_cotangent(t->a), rev_cotangent(t->b));
    case TypeTag::Arrow:
      return ty_copower(rev_primal(t->a), rev_cotangent(t->b));
    case TypeTag::Variant: {
      std::vector<TypePtr> alts;
      for (const auto& c : t->ctors) alts.push_back(rev_cotangent(c.second));
      return ty_lsum(alts);
    }
    case TypeTag::Mu:
      return ty_lnu(t->name, rev_cotangent(t->a));  // the polarity flips
    case TypeTag::Nu:
      return ty_lmu(t->name, rev_cotangent(t->a));
    default:
      fail(Err::IllKinded, "not a source type");
  }
}

// shared clause plumbing

TermPtr plet(const std::string& x, const std::string& xp, TermPtr rhs, TermPtr body) {
  std::string tmp = fresh_name();
  return mk_let(tmp, std::move(rhs),
                mk_let(x, mk_fst(mk_var(tmp)), mk_let(xp, mk_snd(mk_var(tmp)), std::move(body))));
}

TermPtr ctx_proj(TermPtr t, int i, int n) {
  return n == 1 ? t : mk_proj(i, n, std::move(t));
}

TermPtr ctx_coproj(TermPtr t, int i, int n) {
  return n == 1 ? t : mk_coproj(i, n, std::move(t));
}

// the tuple for the extended context Gamma, x
TermPtr ctx_ext(TermPtr ctx_part, TermPtr x_part, int n) {
  return n == 0 ? std::move(x_part) : mk_pair(std::move(ctx_part), std::move(x_part));
}

int label_index(const TypePtr& variant, const std::string& label) {
  for (std::size_t i = 0; i < variant->ctors.size(); ++i)
    if (variant->ctors[i].first == label) return static_cast<int>(i) + 1;
  fail(Err::TypeMismatch, "constructor " + label);
}

struct Chad {
  bool reverse;

  TypePtr primal(const TypePtr& t) const { return reverse ? rev_primal(t) : fwd_primal(t); }
  TypePtr linear(const TypePtr& t) const { return reverse ? rev_cotangent(t) : fwd_tangent(t); }

  CtxTranslation ctx(const TypeCtx& g) const {
    CtxTranslation c;
    if (g.empty()) {
      c.linear = ty_lunit();
      return c;
    }
    TypePtr acc;
    for (const auto& [name, ty] : g) {
      c.primal_ctx.emplace_back(name, primal(ty));
      auto l = linear(ty);
      acc = acc ? ty_lprod(acc, l) : l;
    }
    c.linear = acc;
    return c;
  }

  // the linear map half of the result: DG2 -o Dt2 forward, Dt2 -o DG2 reverse
  TypePtr map_ann(const TypeCtx& g, const TypePtr& result) const {
    auto gl = ctx(g).linear;
    auto rl = linear(result);
    return reverse ? ty_linarrow(rl, gl) : ty_linarrow(gl, rl);
  }

  TypePtr check(const TypeCtx& g, const TermPtr& t) const { return type_check({}, g, t); }

  int idx(const TypeCtx& g, const std::string& x) const {
    for (std::size_t i = g.size(); i-- > 0;)
      if (g[i].first == x) return static_cast<int>(i) + 1;
    fail(Err::UnboundVar, x);
  }

  TermPtr transform(const TypeCtx& g, const TermPtr& t) const;
};

TermPtr Chad::transform(const TypeCtx& g, const TermPtr& t) const {
  const int n = static_cast<int>(g.size());
  const TypePtr ty = check(g, t);
  const TypePtr ann = map_ann(g, ty);
  auto linlam = [&](TermPtr body) { return mk_linlam(ann, std::move(body)); };
  auto v = [] { return mk_linvar(); };

  switch (t->tag) {
    case TermTag::Var: {
      int i = idx(g, t->name);
      auto back = reverse ? ctx_coproj(v(), i, n) : ctx_proj(v(), i, n);
      return mk_pair(mk_var(t->name), linlam(std::move(back)));
    }

    case TermTag::RealLit:
      return mk_pair(t, linlam(mk_zero()));

    case TermTag::UnitVal:
      return mk_pair(mk_unit(), linlam(reverse ? mk_zero() : mk_unit()));

    case TermTag::PrimOp: {
      // let <x1,x1'> = D[t1] in ... <op(xs), \v. D op / sum of transposes>
      std::vector<std::string> xs, xps;
      std::vector<TermPtr> argvars;
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        xs.push_back(fresh_name());
        xps.push_back(fresh_name());
        argvars.push_back(mk_var(xs[i]));
      }
      int k = static_cast<int>(t->args.size());
      TermPtr body;
      if (!reverse) {
        TermPtr tup;
        for (int i = 0; i < k; ++i) {
          auto piece = mk_linapp(mk_var(xps[i]), v());
          tup = tup ? mk_pair(tup, std::move(piece)) : std::move(piece);
        }
        body = mk_pair(mk_primop(t->name, argvars),
                       linlam(mk_linop("D:" + t->name, argvars, tup ? tup : mk_unit())));
      } else {
        TermPtr sum;
        for (int i = 0; i < k; ++i) {
          auto piece = mk_linapp(mk_var(xps[i]), ctx_proj(v(), i + 1, k));
          sum = sum ? mk_add(sum, std::move(piece)) : std::move(piece);
        }
        TermPtr back = sum ? mk_linlet(mk_linop("Dt:" + t->name, argvars, v()), std::move(sum))
                           : mk_zero();
        body = mk_pair(mk_primop(t->name, argvars), linlam(std::move(back)));
      }
      for (int i = k; i-- > 0;) body = plet(xs[i], xps[i], transform(g, t->args[i]), body);
      return body;
    }

    case TermTag::Let: {
      std::string xp = fresh_name(), y = fresh_name(), yp = fresh_name();
      TypeCtx g2 = g;
      g2.emplace_back(t->name, check(g, t->t0));
      TermPtr back;
      if (!reverse) {
        back = mk_linapp(mk_var(yp), ctx_ext(v(), mk_linapp(mk_var(xp), v()), n));
      } else if (n == 0) {
        back = mk_linapp(mk_var(xp), mk_linapp(mk_var(yp), v()));
      } else {
        back = mk_linlet(mk_linapp(mk_var(yp), v()),
                         mk_add(mk_fst(v()), mk_linapp(mk_var(xp), mk_snd(v()))));
      }
      return plet(t->name, xp, transform(g, t->t0),
                  plet(y, yp, transform(g2, t->t1), mk_pair(mk_var(y), linlam(std::move(back)))));
    }

    case TermTag::Pair: {
      std::string x = fresh_name(), xp = fresh_name(), y = fresh_name(), yp = fresh_name();
      TermPtr back;
      if (!reverse)
        back = mk_pair(mk_linapp(mk_var(xp), v()), mk_linapp(mk_var(yp), v()));
      else
        back = mk_add(mk_linapp(mk_var(xp), mk_fst(v())), mk_linapp(mk_var(yp), mk_snd(v())));
      return plet(x, xp, transform(g, t->t0),
                  plet(y, yp, transform(g, t->t1),
                       mk_pair(mk_pair(mk_var(x), mk_var(y)), linlam(std::move(back)))));
    }

    case TermTag::Fst: {
      std::string x = fresh_name(), xp = fresh_name();
      TermPtr back = reverse ? mk_linapp(mk_var(xp), mk_pair(v(), mk_zero()))
                             : mk_fst(mk_linapp(mk_var(xp), v()));
      return plet(x, xp, transform(g, t->t0),
                  mk_pair(mk_fst(mk_var(x)), linlam(std::move(back))));
    }

    case TermTag::Snd: {
      std::string x = fresh_name(), xp = fresh_name();
      TermPtr back = reverse ? mk_linapp(mk_var(xp), mk_pair(mk_zero(), v()))
                             : mk_snd(mk_linapp(mk_var(xp), v()));
      return plet(x, xp, transform(g, t->t0),
                  mk_pair(mk_snd(mk_var(x)), linlam(std::move(back))));
    }

    case TermTag::Lam: {
      std::string f = fresh_name(), z = fresh_name(), zp = fresh_name();
      TypeCtx g2 = g;
      g2.emplace_back(t->name, t->ann);
      auto inner = transform(g2, t->t0);
      auto body_ty = check(g2, t->t0);
      auto parg = primal(t->ann);
      if (!reverse) {
        // per-argument tangent map: feed a zero context tangent
        auto per_arg_ann = ty_linarrow(linear(t->ann), linear(body_ty));
        auto primal_fun = mk_lam(
            t->name, parg,
            plet(z, zp, mk_app(mk_var(f), mk_var(t->name)),
                 mk_pair(mk_var(z), mk_linlam(per_arg_ann,
                                              mk_linapp(mk_var(zp), ctx_ext(mk_zero(), v(), n))))));
        auto tangent = linlam(mk_lam(
            t->name, parg,
            mk_linapp(mk_snd(mk_app(mk_var(f), mk_var(t->name))), ctx_ext(v(), mk_zero(), n))));
        return mk_let(f, mk_lam(t->name, parg, inner), mk_pair(primal_fun, tangent));
      }
      auto per_arg_ann = ty_linarrow(linear(body_ty), linear(t->ann));
      auto arg_part = n == 0 ? mk_linapp(mk_var(zp), v()) : mk_snd(mk_linapp(mk_var(zp), v()));
      auto primal_fun =
          mk_lam(t->name, parg,
                 plet(z, zp, mk_app(mk_var(f), mk_var(t->name)),
                      mk_pair(mk_var(z), mk_linlam(per_arg_ann, std::move(arg_part)))));
      TermPtr back;
      if (n == 0) {
        back = mk_zero();
      } else {
        back = mk_copow_elim(
            v(), t->name,
            mk_fst(mk_linapp(mk_snd(mk_app(mk_var(f), mk_var(t->name))), v())));
      }
      return mk_let(f, mk_lam(t->name, parg, inner), mk_pair(primal_fun, linlam(std::move(back))));
    }

    case TermTag::App: {
      std::string x = fresh_name(), xctx = fresh_name();
      std::string y = fresh_name(), yp = fresh_name();
      std::string r = fresh_name(), rarg = fresh_name();
      TermPtr back;
      if (!reverse) {
        back = mk_add(mk_app(mk_linapp(mk_var(xctx), v()), mk_var(y)),
                      mk_linapp(mk_var(rarg), mk_linapp(mk_var(yp), v())));
      } else {
        back = mk_add(mk_linapp(mk_var(xctx), mk_copow_intro(mk_var(y), v())),
                      mk_linapp(mk_var(yp), mk_linapp(mk_var(rarg), v())));
      }
      return plet(x, xctx, transform(g, t->t0),
                  plet(y, yp, transform(g, t->t1),
                       plet(r, rarg, mk_app(mk_var(x), mk_var(y)),
                            mk_pair(mk_var(r), linlam(std::move(back))))));
    }

    case TermTag::Inj: {
      std::string x = fresh_name(), xp = fresh_name();
      int i = label_index(t->ann, t->name);
      auto sum = linear(t->ann);
      TermPtr back;
      if (!reverse)
        back = mk_lsum_inj(i, sum, mk_linapp(mk_var(xp), v()));
      else
        back = mk_linapp(mk_var(xp), mk_lsum_proj(i, v()));
      return plet(x, xp, transform(g, t->t0),
                  mk_pair(mk_inj(t->name, primal(t->ann), mk_var(x)), linlam(std::move(back))));
    }

    case TermTag::Match: {
      auto sty = check(g, t->t0);
      auto psty = primal(sty);
      auto lsty = linear(sty);
      std::string s = fresh_name(), sp = fresh_name();
      std::vector<MatchBranch> branches;
      for (std::size_t bi = 0; bi < t->branches.size(); ++bi) {
        const auto& br = t->branches[bi];
        int i = static_cast<int>(bi) + 1;
        TypeCtx g2 = g;
        g2.emplace_back(br.binder, sty->ctors[bi].second);
        std::string r = fresh_name(), rp = fresh_name();
        // the scrutinee map under the rebound primal, per the dependent clause
        auto rebound = mk_let(s, mk_inj(br.label, psty, mk_var(br.binder)), mk_var(sp));
        TermPtr back;
        if (!reverse) {
          back = mk_linapp(mk_var(rp),
                           ctx_ext(v(), mk_lsum_proj(i, mk_linapp(rebound, v())), n));
        } else if (n == 0) {
          back = mk_linapp(rebound, mk_lsum_inj(i, lsty, mk_linapp(mk_var(rp), v())));
        } else {
          back = mk_linlet(
              mk_linapp(mk_var(rp), v()),
              mk_add(mk_fst(v()), mk_linapp(rebound, mk_lsum_inj(i, lsty, mk_snd(v())))));
        }
        branches.push_back({br.label, br.binder,
                            plet(r, rp, transform(g2, br.body),
                                 mk_pair(mk_var(r), linlam(std::move(back))))});
      }
      return plet(s, sp, transform(g, t->t0), mk_match(mk_var(s), std::move(branches)));
    }

    case TermTag::Roll: {
      std::string x = fresh_name(), xp = fresh_name();
      auto pmu = primal(t->ann);
      auto lmu = linear(t->ann);
      TermPtr back;
      if (!reverse)
        back = mk_roll(lmu, mk_linapp(mk_var(xp), v()));
      else
        back = mk_linapp(mk_var(xp), mk_unroll(v()));
      return plet(x, xp, transform(g, t->t0),
                  mk_pair(mk_roll(pmu, mk_var(x)), linlam(std::move(back))));
    }

    case TermTag::Unroll: {
      std::string x = fresh_name(), xp = fresh_name();
      auto nty = check(g, t->t0);
      TermPtr back;
      if (!reverse)
        back = mk_unroll(mk_linapp(mk_var(xp), v()));
      else
        back = mk_linapp(mk_var(xp), mk_roll(linear(nty), v()));
      return plet(x, xp, transform(g, t->t0),
                  mk_pair(mk_unroll(mk_var(x)), linlam(std::move(back))));
    }

    case TermTag::Fold: {
      auto mty = check(g, t->t0);  // mu a. rho
      auto sigma = t->ann;
      auto rho = mty->a;
      const std::string& alpha = mty->name;
      auto alg_in = subst_type(rho, alpha, sigma);
      std::string y = fresh_name(), yp = fresh_name(), z = fresh_name();
      TypeCtx galg{{t->name, alg_in}};
      auto helper = mk_lam(t->name, primal(alg_in), transform(galg, t->t1));

      auto fold_primal = mk_fold(mk_var(y), t->name,
                                 mk_fst(mk_app(mk_var(z), mk_var(t->name))), primal(sigma));
      // let x = fold y with x => Drho1[a -> x |- fst (z x)] in (snd (z x)) . v
      auto prho = primal(rho);
      auto refold = mk_fold(
          mk_var(y), t->name,
          fmap_type(prho, alpha, t->name, mk_fst(mk_app(mk_var(z), mk_var(t->name))),
                    primal(sigma)),
          subst_type(prho, alpha, primal(sigma)));
      auto alg_body = mk_let(t->name, refold,
                             mk_linapp(mk_snd(mk_app(mk_var(z), mk_var(t->name))), v()));

      auto meta = std::make_shared<LinRecMeta>();
      meta->fiber = mk_var(y);
      meta->helper = mk_var(z);
      meta->mu_var = alpha;
      meta->mu_body = prho;
      meta->primal_result = primal(sigma);
      TermPtr back;
      if (!reverse) {
        meta->kind = LinRecMeta::Kind::FwdFold;
        back = mk_fold(mk_linapp(mk_var(yp), v()), "", alg_body, linear(sigma), meta);
      } else {
        meta->kind = LinRecMeta::Kind::RevFold;
        back = mk_linapp(mk_var(yp), mk_gen(linear(mty), v(), "", alg_body, meta));
      }
      return plet(y, yp, transform(g, t->t0),
                  mk_let(z, helper, mk_pair(fold_primal, linlam(std::move(back)))));
    }

    case TermTag::Gen: {
      auto nty = t->ann;  // nu a. rho
      auto sigma = check(g, t->t0);
      auto rho = nty->a;
      const std::string& alpha = nty->name;
      std::string y = fresh_name(), yp = fresh_name(), z = fresh_name();
      TypeCtx gco{{t->name, sigma}};
      auto helper = mk_lam(t->name, primal(sigma), transform(gco, t->t1));

      auto gen_primal = mk_gen(primal(nty), mk_var(y), t->name,
                               mk_fst(mk_app(mk_var(z), mk_var(t->name))));
      auto step = mk_linapp(mk_snd(mk_app(mk_var(z), mk_var(y))), v());

      auto meta = std::make_shared<LinRecMeta>();
      meta->fiber = mk_var(y);
      meta->helper = mk_var(z);
      meta->mu_var = alpha;
      meta->mu_body = primal(rho);
      meta->primal_result = primal(sigma);
      TermPtr back;
      if (!reverse) {
        meta->kind = LinRecMeta::Kind::FwdGen;
        back = mk_gen(linear(nty), mk_linapp(mk_var(yp), v()), "", step, meta);
      } else {
        meta->kind = LinRecMeta::Kind::RevGen;
        back = mk_linapp(mk_var(yp), mk_fold(v(), "", step, linear(sigma), meta));
      }
      return plet(y, yp, transform(g, t->t0),
                  mk_let(z, helper, mk_pair(gen_primal, linlam(std::move(back)))));
    }

    default:
      fail(Err::TypeMismatch, "cannot transform a target-only construct");
  }
}

// transformations without sharing between the primal and (co)tangent halves
struct SplitChad {
  Chad base;

  TypePtr primal(const TypePtr& t) const { return base.primal(t); }
  TypePtr linear(const TypePtr& t) const { return base.linear(t); }
  bool rev() const { return base.reverse; }

  TermPtr prim_half(const TypeCtx& g, const TermPtr& t) const;
  TermPtr lin_half(const TypeCtx& g, const TermPtr& t) const;

  TermPtr alg_helper(const std::string& binder, const TypePtr& alg_in, const TypePtr& sigma,
                     const TermPtr& alg) const {
    TypeCtx galg{{binder, alg_in}};
    auto ann = rev() ? ty_linarrow(linear(sigma), linear(alg_in))
                     : ty_linarrow(linear(alg_in), linear(sigma));
    return mk_lam(binder, primal(alg_in),
                  mk_pair(prim_half(galg, alg), mk_linlam(ann, lin_half(galg, alg))));
  }
};

TermPtr SplitChad::prim_half(const TypeCtx& g, const TermPtr& t) const {
  switch (t->tag) {
    case TermTag::Var:
    case TermTag::RealLit:
    case TermTag::UnitVal:
      return t;
    case TermTag::Let: {
      TypeCtx g2 = g;
      g2.emplace_back(t->name, base.check(g, t->t0));
      return mk_let(t->name, prim_half(g, t->t0), prim_half(g2, t->t1));
    }
    case TermTag::PrimOp: {
      std::vector<std::string> xs;
      std::vector<TermPtr> vars;
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        xs.push_back(fresh_name());
        vars.push_back(mk_var(xs[i]));
      }
      TermPtr body = mk_primop(t->name, vars);
      for (std::size_t i = t->args.size(); i-- > 0;)
        body = mk_let(xs[i], prim_half(g, t->args[i]), body);
      return body;
    }
    case TermTag::Pair:
      return mk_pair(prim_half(g, t->t0), prim_half(g, t->t1));
    case TermTag::Fst:
      return mk_fst(prim_half(g, t->t0));
    case TermTag::Snd:
      return mk_snd(prim_half(g, t->t0));
    case TermTag::Lam: {
      TypeCtx g2 = g;
      g2.emplace_back(t->name, t->ann);
      auto body_ty = base.check(g2, t->t0);
      int n = static_cast<int>(g.size());
      TermPtr back;
      TypePtr ann;
      if (!rev()) {
        ann = ty_linarrow(linear(t->ann), linear(body_ty));
        back = mk_linlet(ctx_ext(mk_zero(), mk_linvar(), n), lin_half(g2, t->t0));
      } else {
        ann = ty_linarrow(linear(body_ty), linear(t->ann));
        auto whole = lin_half(g2, t->t0);
        back = n == 0 ? whole : mk_snd(whole);
      }
      return mk_lam(t->name, primal(t->ann),
                    mk_pair(prim_half(g2, t->t0), mk_linlam(ann, back)));
    }
    case TermTag::App:
      return mk_fst(mk_app(prim_half(g, t->t0), prim_half(g, t->t1)));
    case TermTag::Inj:
      return mk_inj(t->name, primal(t->ann), prim_half(g, t->t0));
    case TermTag::Match: {
      auto sty = base.check(g, t->t0);
      std::vector<MatchBranch> bs;
      for (std::size_t i = 0; i < t->branches.size(); ++i) {
        TypeCtx g2 = g;
        g2.emplace_back(t->branches[i].binder, sty->ctors[i].second);
        bs.push_back({t->branches[i].label, t->branches[i].binder,
                      prim_half(g2, t->branches[i].body)});
      }
      return mk_match(prim_half(g, t->t0), std::move(bs));
    }
    case TermTag::Roll:
      return mk_roll(primal(t->ann), prim_half(g, t->t0));
    case TermTag::Unroll:
      return mk_unroll(prim_half(g, t->t0));
    case TermTag::Fold: {
      auto mty = base.check(g, t->t0);
      TypeCtx galg{{t->name, subst_type(mty->a, mty->name, t->ann)}};
      return mk_fold(prim_half(g, t->t0), t->name, prim_half(galg, t->t1), primal(t->ann));
    }
    case TermTag::Gen: {
      auto sigma = base.check(g, t->t0);
      TypeCtx gco{{t->name, sigma}};
      return mk_gen(primal(t->ann), prim_half(g, t->t0), t->name, prim_half(gco, t->t1));
    }
    default:
      fail(Err::TypeMismatch, "cannot transform a target-only construct");
  }
}

TermPtr SplitChad::lin_half(const TypeCtx& g, const TermPtr& t) const {
  const int n = static_cast<int>(g.size());
  auto v = [] { return mk_linvar(); };
  switch (t->tag) {
    case TermTag::Var: {
      int i = base.idx(g, t->name);
      return rev() ? ctx_coproj(v(), i, n) : ctx_proj(v(), i, n);
    }
    case TermTag::RealLit:
      return mk_zero();
    case TermTag::UnitVal:
      return rev() ? mk_zero() : mk_unit();
    case TermTag::Let: {
      TypeCtx g2 = g;
      g2.emplace_back(t->name, base.check(g, t->t0));
      if (!rev())
        return mk_let(t->name, prim_half(g, t->t0),
                      mk_linlet(ctx_ext(v(), lin_half(g, t->t0), n), lin_half(g2, t->t1)));
      if (n == 0)
        return mk_let(t->name, prim_half(g, t->t0),
                      mk_linlet(lin_half(g2, t->t1), lin_half(g, t->t0)));
      return mk_let(t->name, prim_half(g, t->t0),
                    mk_linlet(lin_half(g2, t->t1),
                              mk_add(mk_fst(v()), mk_linlet(mk_snd(v()), lin_half(g, t->t0)))));
    }
    case TermTag::PrimOp: {
      std::vector<std::string> xs;
      std::vector<TermPtr> vars;
      int k = static_cast<int>(t->args.size());
      for (int i = 0; i < k; ++i) {
        xs.push_back(fresh_name());
        vars.push_back(mk_var(xs[i]));
      }
      TermPtr body;
      if (!rev()) {
        TermPtr tup;
        for (int i = 0; i < k; ++i) {
          auto piece = lin_half(g, t->args[i]);
          tup = tup ? mk_pair(tup, std::move(piece)) : std::move(piece);
        }
        body = mk_linop("D:" + t->name, vars, tup ? tup : mk_unit());
      } else {
        TermPtr sum;
        for (int i = 0; i < k; ++i) {
          auto piece = mk_linlet(ctx_proj(v(), i + 1, k), lin_half(g, t->args[i]));
          sum = sum ? mk_add(sum, std::move(piece)) : std::move(piece);
        }
        body = sum ? mk_linlet(mk_linop("Dt:" + t->name, vars, v()), std::move(sum)) : mk_zero();
      }
      for (int i = k; i-- > 0;) body = mk_let(xs[i], prim_half(g, t->args[i]), body);
      return body;
    }
    case TermTag::Pair:
      if (!rev()) return mk_pair(lin_half(g, t->t0), lin_half(g, t->t1));
      return mk_add(mk_linlet(mk_fst(v()), lin_half(g, t->t0)),
                    mk_linlet(mk_snd(v()), lin_half(g, t->t1)));
    case TermTag::Fst:
      if (!rev()) return mk_fst(lin_half(g, t->t0));
      return mk_linlet(mk_pair(v(), mk_zero()), lin_half(g, t->t0));
    case TermTag::Snd:
      if (!rev()) return mk_snd(lin_half(g, t->t0));
      return mk_linlet(mk_pair(mk_zero(), v()), lin_half(g, t->t0));
    case TermTag::Lam: {
      TypeCtx g2 = g;
      g2.emplace_back(t->name, t->ann);
      if (!rev())
        return mk_lam(t->name, primal(t->ann),
                      mk_linlet(ctx_ext(v(), mk_zero(), n), lin_half(g2, t->t0)));
      if (n == 0) return mk_zero();
      return mk_copow_elim(v(), t->name, mk_fst(lin_half(g2, t->t0)));
    }
    case TermTag::App: {
      std::string y = fresh_name();
      if (!rev())
        return mk_let(y, prim_half(g, t->t1),
                      mk_add(mk_app(lin_half(g, t->t0), mk_var(y)),
                             mk_linapp(mk_snd(mk_app(prim_half(g, t->t0), mk_var(y))),
                                       lin_half(g, t->t1))));
      return mk_let(
          y, prim_half(g, t->t1),
          mk_add(mk_linlet(mk_copow_intro(mk_var(y), v()), lin_half(g, t->t0)),
                 mk_linlet(mk_linapp(mk_snd(mk_app(prim_half(g, t->t0), mk_var(y))), v()),
                           lin_half(g, t->t1))));
    }
    case TermTag::Inj: {
      int i = label_index(t->ann, t->name);
      if (!rev()) return mk_lsum_inj(i, linear(t->ann), lin_half(g, t->t0));
      return mk_linlet(mk_lsum_proj(i, v()), lin_half(g, t->t0));
    }
    case TermTag::Match: {
      auto sty = base.check(g, t->t0);
      auto lsty = linear(sty);
      std::vector<MatchBranch> bs;
      if (!rev()) {
        for (std::size_t i = 0; i < t->branches.size(); ++i) {
          TypeCtx g2 = g;
          g2.emplace_back(t->branches[i].binder, sty->ctors[i].second);
          auto rebind = ctx_ext(v(), mk_lsum_proj(static_cast<int>(i) + 1, lin_half(g, t->t0)), n);
          bs.push_back({t->branches[i].label, t->branches[i].binder,
                        mk_linlet(rebind, lin_half(g2, t->branches[i].body))});
        }
        return mk_match(prim_half(g, t->t0), std::move(bs));
      }
      for (std::size_t i = 0; i < t->branches.size(); ++i) {
        TypeCtx g2 = g;
        g2.emplace_back(t->branches[i].binder, sty->ctors[i].second);
        auto inner = lin_half(g2, t->branches[i].body);
        TermPtr wrapped;
        if (n == 0) {
          wrapped = mk_lsum_inj(static_cast<int>(i) + 1, lsty, inner);
        } else {
          wrapped = mk_linlet(
              inner, mk_pair(mk_fst(v()),
                             mk_lsum_inj(static_cast<int>(i) + 1, lsty, mk_snd(v()))));
        }
        bs.push_back({t->branches[i].label, t->branches[i].binder, wrapped});
      }
      auto dispatch = mk_match(prim_half(g, t->t0), std::move(bs));
      if (n == 0) return mk_linlet(dispatch, lin_half(g, t->t0));
      return mk_linlet(dispatch,
                       mk_add(mk_fst(v()), mk_linlet(mk_snd(v()), lin_half(g, t->t0))));
    }
    case TermTag::Roll:
      if (!rev()) return mk_roll(linear(t->ann), lin_half(g, t->t0));
      return mk_linlet(mk_unroll(v()), lin_half(g, t->t0));
    case TermTag::Unroll: {
      auto nty = base.check(g, t->t0);
      if (!rev()) return mk_unroll(lin_half(g, t->t0));
      return mk_linlet(mk_roll(linear(nty), v()), lin_half(g, t->t0));
    }
    case TermTag::Fold: {
      auto mty = base.check(g, t->t0);
      auto sigma = t->ann;
      auto rho = mty->a;
      const std::string& alpha = mty->name;
      auto alg_in = subst_type(rho, alpha, sigma);
      auto prho = primal(rho);
      TypeCtx galg{{t->name, alg_in}};
      auto refold = mk_fold(prim_half(g, t->t0), t->name,
                            fmap_type(prho, alpha, t->name, prim_half(galg, t->t1), primal(sigma)),
                            subst_type(prho, alpha, primal(sigma)));
      auto alg_body = mk_let(t->name, refold, lin_half(galg, t->t1));
      auto meta = std::make_shared<LinRecMeta>();
      meta->fiber = prim_half(g, t->t0);
      meta->helper = alg_helper(t->name, alg_in, sigma, t->t1);
      meta->mu_var = alpha;
      meta->mu_body = prho;
      meta->primal_result = primal(sigma);
      if (!rev()) {
        meta->kind = LinRecMeta::Kind::FwdFold;
        return mk_fold(lin_half(g, t->t0), "", alg_body, linear(sigma), meta);
      }
      meta->kind = LinRecMeta::Kind::RevFold;
      return mk_linlet(mk_gen(linear(mty), v(), "", alg_body, meta), lin_half(g, t->t0));
    }
    case TermTag::Gen: {
      auto nty = t->ann;
      auto sigma = base.check(g, t->t0);
      auto rho = nty->a;
      TypeCtx gco{{t->name, sigma}};
      auto step = mk_let(t->name, prim_half(g, t->t0), lin_half(gco, t->t1));
      auto meta = std::make_shared<LinRecMeta>();
      meta->fiber = prim_half(g, t->t0);
      meta->helper = alg_helper(t->name, sigma, subst_type(rho, nty->name, sigma), t->t1);
      meta->mu_var = nty->name;
      meta->mu_body = primal(rho);
      meta->primal_result = primal(sigma);
      if (!rev()) {
        meta->kind = LinRecMeta::Kind::FwdGen;
        return mk_gen(linear(nty), lin_half(g, t->t0), "", step, meta);
      }
      meta->kind = LinRecMeta::Kind::RevGen;
      return mk_linlet(mk_fold(v(), "", step, linear(sigma), meta), lin_half(g, t->t0));
    }
    default:
      fail(Err::TypeMismatch, "cannot transform a target-only construct");
  }
}

}  // namespace

FwdTypePair fwd_type(const TypePtr& src) { return {fwd_primal(src), fwd_tangent(src)}; }
RevTypePair rev_type(const TypePtr& src) { return {rev_primal(src), rev_cotangent(src)}; }

CtxTranslation fwd_ctx(const TypeCtx& gamma) { return Chad{false}.ctx(gamma); }
CtxTranslation rev_ctx(const TypeCtx& gamma) { return Chad{true}.ctx(gamma); }

TermPtr fwd_transform(const TypeCtx& gamma, const TermPtr& t) {
  return Chad{false}.transform(gamma, t);
}

TermPtr rev_transform(const TypeCtx& gamma, const TermPtr& t) {
  return Chad{true}.transform(gamma, t);
}

std::pair<TermPtr, TermPtr> fwd_transform_split(const TypeCtx& gamma, const TermPtr& t) {
  SplitChad s{Chad{false}};
  return {s.prim_half(gamma, t), s.lin_half(gamma, t)};
}

std::pair<TermPtr, TermPtr> rev_transform_split(const TypeCtx& gamma, const TermPtr& t) {
  SplitChad s{Chad{true}};
  return {s.prim_half(gamma, t), s.lin_half(gamma, t)};
}

TypePtr fwd_result_type(const TypeCtx& gamma, const TypePtr& result) {
  return ty_prod(fwd_primal(result), Chad{false}.map_ann(gamma, result));
}

TypePtr rev_result_type(const TypeCtx& gamma, const TypePtr& result) {
  return ty_prod(rev_primal(result), Chad{true}.map_ann(gamma, result));
}

}  // namespace chad
