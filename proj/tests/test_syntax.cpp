#include "doctest.h"

#include "chad/eval.hpp"
#include "chad/subst.hpp"
#include "helpers.hpp"

using namespace chad;
using namespace chad::testing;

TEST_CASE("subst_type basics") {
  // (a * R)[a := Unit] = Unit * R
  auto t = subst_type(ty_prod(ty_var("a"), ty_real(1)), "a", ty_unit());
  CHECK(type_equal(t, ty_prod(ty_unit(), ty_real(1))));

  // (mu b. a * b)[a := R] substitutes under the binder
  auto mu = ty_mu("b", ty_prod(ty_var("a"), ty_var("b")));
  auto r = subst_type(mu, "a", ty_real(1));
  CHECK(type_equal(r, ty_mu("b", ty_prod(ty_real(1), ty_var("b")))));

  // bound occurrences shadow: (mu a. a)[a := R] unchanged
  auto shadow = ty_mu("a", ty_var("a"));
  CHECK(type_equal(subst_type(shadow, "a", ty_real(1)), shadow));

  // capture avoidance: (mu b. a * b)[a := b] renames the binder
  auto captured = subst_type(mu, "a", ty_var("b"));
  CHECK(captured->tag == TypeTag::Mu);
  CHECK(captured->name != "b");
  CHECK(captured->a->a->name == "b");  // the substituted free b stays free
}

TEST_CASE("subst_term basics") {
  // (x + y)[x := 3] = 3 + y
  auto t = mk_primop("add", {mk_var("x"), mk_var("y")});
  auto r = subst_term(t, "x", mk_lit({3}));
  CHECK(r->args[0]->tag == TermTag::RealLit);
  CHECK(r->args[1]->name == "y");

  // (let x = x in x)[x := s] only replaces the free occurrence
  auto let = mk_let("x", mk_var("x"), mk_var("x"));
  auto rs = subst_term(let, "x", mk_var("s"));
  CHECK(rs->t0->name == "s");
  CHECK(rs->t1->name == "x");

  // (fun y => x)[x := y] avoids capture
  auto lam = mk_lam("y", ty_real(1), mk_var("x"));
  auto rc = subst_term(lam, "x", mk_var("y"));
  CHECK(rc->name != "y");
  CHECK(rc->t0->name == "y");
}

TEST_CASE("term_size counts every constructor once") {
  CHECK(term_size(mk_var("x")) == 1);
  CHECK(term_size(mk_pair(mk_var("x"), mk_var("y"))) == 3);

  auto pf = program("arg a : R\narg b : R\nbody let x = a * b in x + x");
  // let, mul, a, b, add, x, x
  CHECK(term_size(pf.program.body) == 7);
}

TEST_CASE("type_equal is up to alpha renaming of binders") {
  auto l1 = ty_mu("a", ty_prod(ty_real(1), ty_var("a")));
  auto l2 = ty_mu("b", ty_prod(ty_real(1), ty_var("b")));
  CHECK(type_equal(l1, l2));
  CHECK(!type_equal(l1, ty_mu("a", ty_prod(ty_real(2), ty_var("a")))));
  CHECK(!type_equal(ty_var("free1"), ty_var("free2")));
}

TEST_CASE("fmap_type clauses") {
  // the hole itself: the action
  auto act = mk_primop("add", {mk_var("x"), mk_lit({1})});
  auto r = fmap_type(ty_var("a"), "a", "x", act, ty_real(1));
  CHECK(term_equal(r, act));

  // constant type: the input variable unchanged
  auto c = fmap_type(ty_real(3), "a", "x", act, ty_real(1));
  CHECK(term_equal(c, mk_var("x")));

  // a * a with x |- x+1 evaluates (2,5) |-> (3,6); oracle: map the components
  auto m = fmap_type(ty_prod(ty_var("a"), ty_var("a")), "a", "x", act, ty_real(1));
  Env env;
  env = env.extend("x", v_pair(v_real({2}), v_real({5})));
  Evaluator ev;
  auto out = ev.eval(env, m);
  CHECK(out->a->vec[0] == 3.0);
  CHECK(out->b->vec[0] == 6.0);
}

TEST_CASE("fmap_type variant clause relabels and maps the payload") {
  auto variant = ty_variant({{"L", ty_var("a")}, {"Rr", ty_real(1)}});
  auto act = mk_primop("mul", {mk_var("x"), mk_lit({2})});
  auto m = fmap_type(variant, "a", "x", act, ty_real(1));
  Evaluator ev;
  Env env;
  auto out = ev.eval(env.extend("x", v_inj("L", v_real({4}))), m);
  CHECK(out->label == "L");
  CHECK(out->a->vec[0] == 8.0);
  auto out2 = ev.eval(env.extend("x", v_inj("Rr", v_real({4}))), m);
  CHECK(out2->label == "Rr");
  CHECK(out2->a->vec[0] == 4.0);  // constant position untouched
}

TEST_CASE("fmap_type through a nested mu maps every element") {
  // lists over the hole: (mu b. { N : Unit | C : a * b }) with action x |- 2x
  auto listed = ty_mu("b", ty_variant({{"N", ty_unit()}, {"C", ty_prod(ty_var("a"), ty_var("b"))}}));
  auto act = mk_primop("mul", {mk_var("x"), mk_lit({2})});
  auto m = fmap_type(listed, "a", "x", act, ty_real(1));

  auto at_r = subst_type(listed, "a", ty_real(1));
  auto mklist = [&](const Vec& xs) {
    ValuePtr acc = v_roll(at_r, v_inj("N", v_unit()));
    for (std::size_t i = xs.size(); i-- > 0;)
      acc = v_roll(at_r, v_inj("C", v_pair(v_real({xs[i]}), acc)));
    return acc;
  };
  Evaluator ev;
  Env env;
  auto out = ev.eval(env.extend("x", mklist({1, 2, 3})), m);
  auto flat = flatten(subst_type(listed, "a", ty_real(1)), out);
  CHECK(flat.coords == Vec{2, 4, 6});
}

TEST_CASE("fresh names live in a reserved namespace") {
  reset_fresh_names();
  auto n = fresh_name();
  CHECK(n[0] == '%');
}
