#include <unordered_map>

#include "doctest.h"

#include "chad/errors.hpp"
#include "helpers.hpp"

using namespace chad;
using namespace chad::testing;

TEST_CASE("fwd_type clauses") {
  auto p = fwd_type(ty_real(3));
  CHECK(type_equal(p.primal, ty_real(3)));
  CHECK(type_equal(p.tangent, ty_lreal(3)));

  auto u = fwd_type(ty_unit());
  CHECK(type_equal(u.primal, ty_unit()));
  CHECK(type_equal(u.tangent, ty_lunit()));

  auto v = fwd_type(ty_variant({{"L", ty_unit()}, {"Rr", ty_real(1)}}));
  CHECK(v.primal->tag == TypeTag::Variant);
  CHECK(type_equal(v.tangent, ty_lsum({ty_lunit(), ty_lreal(1)})));

  auto f = fwd_type(ty_arrow(ty_real(1), ty_real(2)));
  CHECK(f.primal->tag == TypeTag::Arrow);
  CHECK(type_equal(f.primal->b, ty_prod(ty_real(2), ty_linarrow(ty_lreal(1), ty_lreal(2)))));
  CHECK(type_equal(f.tangent, ty_power(ty_real(1), ty_lreal(2))));

  auto m = fwd_type(nlist());
  CHECK(m.primal->tag == TypeTag::Mu);
  CHECK(m.tangent->tag == TypeTag::LMu);
}

TEST_CASE("rev_type flips the polarity of recursive types") {
  auto r = rev_type(ty_real(2));
  CHECK(type_equal(r.cotangent, ty_lreal(2)));

  auto m = rev_type(nlist());
  CHECK(m.primal->tag == TypeTag::Mu);
  CHECK(m.cotangent->tag == TypeTag::LNu);
  // the body is the matching linear sum
  CHECK(m.cotangent->a->tag == TypeTag::LSum);

  auto s = rev_type(ty_nu("s", ty_prod(ty_real(1), ty_var("s"))));
  CHECK(s.cotangent->tag == TypeTag::LMu);

  auto pr = rev_type(ty_prod(ty_real(1), ty_real(2)));
  CHECK(type_equal(pr.cotangent, ty_lprod(ty_lreal(1), ty_lreal(2))));
}

TEST_CASE("context translations tuple in context order") {
  auto e = fwd_ctx({});
  CHECK(e.primal_ctx.empty());
  CHECK(type_equal(e.linear, ty_lunit()));

  auto one = fwd_ctx({{"x", ty_real(1)}});
  CHECK(type_equal(one.linear, ty_lreal(1)));

  auto two = rev_ctx({{"x", ty_real(1)}, {"y", ty_real(2)}});
  CHECK(type_equal(two.linear, ty_lprod(ty_lreal(1), ty_lreal(2))));
}

TEST_CASE("variable clause projects and coprojects") {
  reset_fresh_names();
  TypeCtx g{{"x", ty_real(1)}};
  auto f = fwd_transform(g, mk_var("x"));
  CHECK(print_term(f) == "(x, \\v. v)");

  TypeCtx g2{{"x", ty_real(1)}, {"y", ty_real(1)}};
  auto r = rev_transform(g2, mk_var("x"));
  CHECK(print_term(r) == "(x, \\v. coproj1/2 v)");

  // the backward pass sends w to (w, 0)
  Evaluator ev;
  Env env;
  env = env.extend("x", v_real({5})).extend("y", v_real({7}));
  auto pairv = ev.eval(env, r);
  auto back = ev.apply_lin(pairv->b, l_vec({1}));
  CHECK(back->a->vec == Vec{1});
  CHECK(is_zero(back->b));
}

TEST_CASE("operation clause computes JVP and VJP through the derivative ops") {
  TypeCtx g{{"x", ty_real(1)}, {"y", ty_real(1)}};
  auto t = mk_primop("mul", {mk_var("x"), mk_var("y")});
  Evaluator ev;
  Env env;
  env = env.extend("x", v_real({2})).extend("y", v_real({3}));

  auto f = fwd_transform(g, t);
  auto fp = ev.eval(env, f);
  CHECK(fp->a->vec == Vec{6});
  // JVP at (2,3) with tangents (b1,b2) is 2*b2 + 3*b1
  auto jv = ev.apply_lin(fp->b, l_pair(l_vec({10}), l_vec({100})));
  CHECK(jv->vec == Vec{2 * 100 + 3 * 10});

  auto r = rev_transform(g, t);
  auto rp = ev.eval(env, r);
  auto back = ev.apply_lin(rp->b, l_vec({1}));
  CHECK(back->a->vec == Vec{3});
  CHECK(back->b->vec == Vec{2});
}

TEST_CASE("constant programs have zero derivative") {
  TypeCtx g{{"x", ty_real(1)}};
  auto f = fwd_transform(g, mk_lit({42}));
  Evaluator ev;
  Env env;
  env = env.extend("x", v_real({3}));
  auto fp = ev.eval(env, f);
  CHECK(fp->a->vec == Vec{42});
  CHECK(is_zero(ev.apply_lin(fp->b, l_vec({1}))));
}

TEST_CASE("fst backward pads with zero") {
  TypeCtx g{{"p", ty_prod(ty_real(1), ty_real(1))}};
  auto r = rev_transform(g, mk_fst(mk_var("p")));
  Evaluator ev;
  Env env;
  env = env.extend("p", v_pair(v_real({1}), v_real({2})));
  auto rp = ev.eval(env, r);
  auto back = ev.apply_lin(rp->b, l_vec({1}));
  CHECK(back->a->vec == Vec{1});
  CHECK(is_zero(back->b));
}

TEST_CASE("transformed programs type-check at the stated types") {
  for (const char* text : {
           "arg x : R\nbody let y = x * x in y + y",
           "type AB = { L : R | Rr : R }\narg v : AB\nbody match v with { L r => r * r | Rr r "
           "=> r }",
           "type NList = mu a . { One : R | Cons : R * a }\narg xs : NList\nbody fold [R] xs "
           "with n => match n with { One r => r | Cons p => fst p * snd p }",
           "arg x : R\nbody (fun (y : R) => y * y + x) x",
       }) {
    auto p = prog(text);
    auto f = fwd_transform(p.ctx, p.body);
    CHECK_NOTHROW(type_check_target({}, fwd_ctx(p.ctx).primal_ctx, nullptr, f,
                                    fwd_result_type(p.ctx, p.result)));
    auto r = rev_transform(p.ctx, p.body);
    CHECK_NOTHROW(type_check_target({}, rev_ctx(p.ctx).primal_ctx, nullptr, r,
                                    rev_result_type(p.ctx, p.result)));
  }
}

TEST_CASE("operation arguments are transformed and evaluated exactly once") {
  // mul(sin x, sin x): each argument's transform is let-bound once; running
  // the primal and the tangent map must evaluate each sin node once
  auto p = prog("arg x : R\nbody mul(sin(x), sin(x))");
  auto f = fwd_transform(p.ctx, p.body);

  std::unordered_map<const Term*, long> counts;
  EvalConfig cfg;
  cfg.counts = &counts;
  Evaluator ev(cfg);
  Env env;
  env = env.extend("x", v_real({0.5}));
  auto fp = ev.eval(env, f);
  ev.apply_lin(fp->b, l_vec({1}));

  long sin_evals = 0;
  std::function<void(const TermPtr&)> scan = [&](const TermPtr& t) {
    if (!t) return;
    if (t->tag == TermTag::PrimOp && t->name == "sin") sin_evals += counts[t.get()];
    scan(t->t0);
    scan(t->t1);
    for (const auto& a : t->args) scan(a);
    for (const auto& b : t->branches) scan(b.body);
  };
  scan(f);
  CHECK(sin_evals == 2);  // one per argument occurrence, not re-run by the tangent
}

TEST_CASE("split transforms agree with the efficient ones") {
  auto p = prog("arg x : R\narg y : R\nbody sin(x * y) + y");
  CheckConfig cfg;
  std::mt19937_64 rng(1);
  auto pt = random_point(p, rng, 3);
  Vec u{1.0, -0.5};
  auto eff = jvp(p, pt, u, cfg);
  cfg.split_mode = true;
  auto spl = jvp(p, pt, u, cfg);
  CHECK(close_all(eff, spl, 1e-12));

  cfg.split_mode = false;
  Vec w{1.0};
  auto effv = vjp(p, pt, w, cfg);
  cfg.split_mode = true;
  auto splv = vjp(p, pt, w, cfg);
  CHECK(close_all(effv, splv, 1e-12));
}

TEST_CASE("size growth is bounded by a per-clause constant") {
  auto p1 = prog("arg x : R\nbody x * x");
  auto s1 = double(term_size(fwd_transform(p1.ctx, p1.body))) / double(term_size(p1.body));
  CHECK(s1 < 40.0);
}
