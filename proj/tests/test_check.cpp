#include "doctest.h"

#include "chad/check.hpp"
#include "chad/errors.hpp"
#include "chad/subst.hpp"
#include "helpers.hpp"

using namespace chad;
using namespace chad::testing;

namespace {
Err kind_of_failure(const std::function<void()>& f) {
  try {
    f();
  } catch (const ChadError& e) {
    return e.kind;
  }
  return Err::Internal;
}
}  // namespace

TEST_CASE("kind_check accepts the source fragment") {
  CHECK(kind_check({}, ty_real(2)) == Kind::CartType);
  // under Delta = [a], an inductive list type kinds fine
  auto list = ty_mu("b", ty_variant({{"Nil", ty_unit()}, {"Cons", ty_prod(ty_real(1), ty_var("b"))}}));
  CHECK(kind_check({"a"}, list) == Kind::CartType);
}

TEST_CASE("kind_check rejects open function types") {
  auto open_arrow = ty_arrow(ty_var("a"), ty_real(1));
  CHECK(kind_of_failure([&] { kind_check({"a"}, open_arrow); }) == Err::OpenFunctionType);
  CHECK(kind_of_failure([&] { kind_check({}, ty_var("nope")); }) == Err::UnboundTypeVar);
  CHECK(kind_of_failure([&] { kind_check({}, ty_variant({})); }) == Err::IllKinded);
  CHECK(kind_of_failure([&] { kind_check({}, ty_lreal(1)); }) == Err::IllKinded);
}

TEST_CASE("type_check basics") {
  TypeCtx g{{"x", ty_real(1)}};
  CHECK(type_equal(type_check({}, g, mk_var("x")), ty_real(1)));
  CHECK(kind_of_failure([&] { type_check({}, {}, mk_fst(mk_unit())); }) == Err::TypeMismatch);
  CHECK(kind_of_failure([&] { type_check({}, {}, mk_var("y")); }) == Err::UnboundVar);
}

TEST_CASE("type_check roll at an inductive type") {
  auto list = nlist();
  TypeCtx g{{"x", ty_real(1)}};
  auto nil = mk_roll(list, mk_inj("One", subst_type(list->a, list->name, list), mk_var("x")));
  CHECK(type_equal(type_check({}, g, nil), list));
}

TEST_CASE("match must cover every constructor in order") {
  auto pf = program(R"(
type AB = { L : R | Rr : R }
arg v : AB
body match v with { L r => r | Rr r => r })");
  CHECK(type_equal(pf.program.result, ty_real(1)));

  auto bad = parse_program(R"(
type AB = { L : R | Rr : R }
arg v : AB
body match v with { L r => r })");
  CHECK(kind_of_failure([&] { type_check({}, bad.program.ctx, bad.program.body); }) ==
        Err::NonExhaustiveMatch);
}

TEST_CASE("fold algebras see only their binder") {
  auto bad = parse_program(R"(
type NList = mu a . { One : R | Cons : R * a }
arg xs : NList
arg k : R
body fold [R] xs with n => match n with { One r => r * k | Cons p => fst p })");
  CHECK(kind_of_failure([&] { type_check({}, bad.program.ctx, bad.program.body); }) ==
        Err::UnboundVar);
}

TEST_CASE("primitive operation widths are checked") {
  TypeCtx g{{"x", ty_real(2)}, {"y", ty_real(3)}};
  CHECK(kind_of_failure([&] {
          type_check({}, g, mk_primop("add", {mk_var("x"), mk_var("y")}));
        }) == Err::TypeMismatch);
  CHECK(kind_of_failure([&] { type_check({}, g, mk_primop("nosuch", {mk_var("x")})); }) ==
        Err::UnknownOp);
  CHECK(kind_of_failure([&] { type_check({}, g, mk_primop("sum", {})); }) == Err::ArityMismatch);
}

TEST_CASE("erase_type sends case types to linear sums and is idempotent") {
  auto c = ty_case({{"l1", ty_lunit()}, {"l2", ty_lreal(1)}});
  auto e = erase_type(c);
  CHECK(e->tag == TypeTag::LSum);
  CHECK(e->alts.size() == 2);
  CHECK(type_equal(erase_type(e), e));

  auto lr = ty_lreal(3);
  CHECK(type_equal(erase_type(lr), lr));

  auto nested = ty_lprod(ty_power(ty_real(1), c), ty_lreal(2));
  CHECK(type_equal(erase_type(nested), erase_type(erase_type(nested))));
}

TEST_CASE("type_check_target linear judgments") {
  // v : R_ |- v : R_
  CHECK(type_equal(type_check_target({}, {}, ty_lreal(1), mk_linvar()), ty_lreal(1)));
  // v + 0 at R_
  CHECK(type_equal(type_check_target({}, {}, ty_lreal(1), mk_add(mk_linvar(), mk_zero())),
                   ty_lreal(1)));
  // \v. fst v : (R_ * R_) -o R_
  auto dom = ty_lprod(ty_lreal(1), ty_lreal(1));
  auto lam = mk_linlam(ty_linarrow(dom, ty_lreal(1)), mk_fst(mk_linvar()));
  CHECK(type_equal(type_check_target({}, {}, nullptr, lam), ty_linarrow(dom, ty_lreal(1))));
}

TEST_CASE("type_check_target rejects misuses") {
  // zero at a cartesian type
  CHECK(kind_of_failure([&] {
          auto lam = mk_linlam(ty_linarrow(ty_lreal(1), ty_real(1)), mk_zero());
          type_check_target({}, {}, nullptr, lam);
        }) == Err::NotLinearType);
  // a linear-only term in cartesian position
  CHECK(kind_of_failure([&] { type_check_target({}, {}, nullptr, mk_linvar()); }) ==
        Err::LinearVarMisuse);
}

TEST_CASE("type_check_target copowers and powers") {
  TypeCtx g{{"p", ty_real(1)}};
  // copower intro: !p (x) v at !R (x) R_
  auto intro = mk_copow_intro(mk_var("p"), mk_linvar());
  auto got = type_check_target({}, g, ty_lreal(1), intro);
  CHECK(type_equal(got, ty_copower(ty_real(1), ty_lreal(1))));
  // elim against an expected result
  auto elim = mk_copow_elim(intro, "q", mk_linvar());
  CHECK(type_equal(type_check_target({}, g, ty_lreal(1), elim, ty_lreal(1)), ty_lreal(1)));
  // power intro is a cartesian lambda at linear type
  auto pw = mk_lam("q", ty_real(1), mk_linvar());
  CHECK(type_equal(type_check_target({}, g, ty_lreal(1), pw),
                   ty_power(ty_real(1), ty_lreal(1))));
}
