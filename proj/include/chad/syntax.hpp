#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

// AST for the cartesian source language and the erased linear target
// language. The target is a strict superset of the source: source terms are
// target terms, and the AD transformations rewrite the former into the
// latter. All nodes are immutable and shared.

namespace chad {

struct Type;
using TypePtr = std::shared_ptr<const Type>;

enum class TypeTag {
  // cartesian layer
  TVar,     // type variable (usable at both kinds)
  Real,     // R^n
  Unit,
  Prod,     // a * b
  Arrow,    // a -> b (closed types only)
  Variant,  // { C1 t1 | ... | Cn tn }
  Mu,       // mu a. t
  Nu,       // nu a. t
  // linear layer (erased per the coarse-graining translation)
  LReal,    // underlined R^n
  LUnit,
  LProd,
  Power,    // t => s   (cartesian index, linear body)
  Copower,  // !t (x) s
  LinArrow, // s -o s'  (itself a cartesian type)
  LSum,     // s1 v ... v sn
  LMu,
  LNu,
  // dependent case-distinction type, only ever seen as input to erase_type
  CaseType,
};

struct Type {
  TypeTag tag;
  int width = 0;                                        // Real / LReal
  std::string name;                                     // TVar, Mu/Nu/LMu/LNu binder
  TypePtr a, b;                                         // children
  std::vector<std::pair<std::string, TypePtr>> ctors;   // Variant / CaseType labels
  std::vector<TypePtr> alts;                            // LSum
};

TypePtr ty_var(std::string name);
TypePtr ty_real(int n);
TypePtr ty_unit();
TypePtr ty_prod(TypePtr a, TypePtr b);
TypePtr ty_arrow(TypePtr a, TypePtr b);
TypePtr ty_variant(std::vector<std::pair<std::string, TypePtr>> ctors);
TypePtr ty_mu(std::string var, TypePtr body);
TypePtr ty_nu(std::string var, TypePtr body);
TypePtr ty_lreal(int n);
TypePtr ty_lunit();
TypePtr ty_lprod(TypePtr a, TypePtr b);
TypePtr ty_power(TypePtr idx, TypePtr body);
TypePtr ty_copower(TypePtr idx, TypePtr body);
TypePtr ty_linarrow(TypePtr a, TypePtr b);
TypePtr ty_lsum(std::vector<TypePtr> alts);
TypePtr ty_lmu(std::string var, TypePtr body);
TypePtr ty_lnu(std::string var, TypePtr body);
TypePtr ty_case(std::vector<std::pair<std::string, TypePtr>> branches);

bool type_equal(const TypePtr& a, const TypePtr& b);  // up to alpha-renaming
bool is_linear_tag(TypeTag t);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

enum class TermTag {
  // cartesian layer (the whole source language)
  Var,
  Let,      // let x = t0 in t1
  PrimOp,   // op(args...)
  RealLit,  // constant R^n literal (a nullary operation)
  UnitVal,
  Pair,
  Fst,
  Snd,
  Lam,      // fun (x : ann) => t0;  doubles as power intro at linear type
  App,      //                        doubles as power elimination
  Inj,      // inj C t0 at variant type ann
  Match,
  Roll,     // roll t0 at mu/lmu type ann
  Fold,     // fold t0 with x => t1, result type ann
  Gen,      // gen t0 at nu/lnu type ann with x => t1
  Unroll,
  // linear layer
  LinVar,     // the unique linear identifier v
  LinLet,     // let v = t0 in t1
  LinOp,      // lop(args...; t0)
  CopowIntro, // !t0 (x) t1
  CopowElim,  // case t0 of !x (x) v -> t1
  LinLam,     // \v. t0, ann = its -o type
  LinApp,     // t0 . t1
  Zero,
  Add,
  // derived forms, one node each
  Proj,     // proj_i of an n-ary left-nested tuple
  CoProj,   // coproj_i into an n-ary left-nested tuple of zeros
  LSumInj,  // linear sum injection iota_i, full sum type in ann
  LSumProj, // linear sum projection pi_i
  LCase,    // branch dispatch on a linear sum value, each branch rebinds v
};

struct MatchBranch {
  std::string label;
  std::string binder;
  TermPtr body;
};

// Recursion metadata attached by the AD transformations to emitted linear
// Fold/Gen nodes. The erased types no longer tie linear (co)inductive values
// to their primal fibre, so the evaluator re-derives per-node primals from
// this record instead of reducing the algebra closure naively.
struct LinRecMeta {
  enum class Kind {
    FwdFold,  // tangent of fold: linear fold over the tangent mu-value
    RevFold,  // cotangent of fold: linear gen producing a nu-value
    FwdGen,   // tangent of gen: linear gen driven by primal seeds
    RevGen,   // cotangent of gen: linear fold over the observed mu-value
  };
  Kind kind;
  TermPtr fiber;           // primal mu-value (folds) or initial seed (gens)
  TermPtr helper;          // z = fun x => <primal, \v. (co)tangent> of the algebra
  std::string mu_var;      // the hole of the (co)inductive body type
  TypePtr mu_body;         // primal body type under the mu/nu binder
  TypePtr primal_result;   // primal type of the fold result / gen seed
};

struct Term {
  TermTag tag;
  std::string name;   // Var / binder / PrimOp+LinOp name / Inj+Match labels live in branches
  TypePtr ann;        // Lam arg, Inj variant, Roll mu, Gen nu, Fold result, LSumInj sum
  TermPtr t0, t1;
  std::vector<TermPtr> args;          // PrimOp / LinOp cartesian arguments
  std::vector<MatchBranch> branches;  // Match
  std::vector<double> lit;            // RealLit
  int index = 0;                      // Proj/CoProj/LSumInj/LSumProj (1-based)
  int arity = 0;                      // Proj/CoProj tuple width, LSumInj sum width
  std::shared_ptr<const LinRecMeta> meta;  // Fold/Gen emitted by the transforms
};

TermPtr mk_var(std::string name);
TermPtr mk_let(std::string x, TermPtr t, TermPtr u);
TermPtr mk_primop(std::string op, std::vector<TermPtr> args);
TermPtr mk_lit(std::vector<double> xs);
TermPtr mk_unit();
TermPtr mk_pair(TermPtr a, TermPtr b);
TermPtr mk_fst(TermPtr t);
TermPtr mk_snd(TermPtr t);
TermPtr mk_lam(std::string x, TypePtr ann, TermPtr body);
TermPtr mk_app(TermPtr f, TermPtr a);
TermPtr mk_inj(std::string label, TypePtr variant, TermPtr t);
TermPtr mk_match(TermPtr scrut, std::vector<MatchBranch> branches);
TermPtr mk_roll(TypePtr mu, TermPtr t);
TermPtr mk_fold(TermPtr t, std::string binder, TermPtr body, TypePtr result,
                std::shared_ptr<const LinRecMeta> meta = nullptr);
TermPtr mk_gen(TypePtr nu, TermPtr seed, std::string binder, TermPtr body,
               std::shared_ptr<const LinRecMeta> meta = nullptr);
TermPtr mk_unroll(TermPtr t);
TermPtr mk_linvar();
TermPtr mk_linlet(TermPtr t, TermPtr u);
TermPtr mk_linop(std::string op, std::vector<TermPtr> cart, TermPtr lin);
TermPtr mk_copow_intro(TermPtr point, TermPtr lin);
TermPtr mk_copow_elim(TermPtr t, std::string binder, TermPtr body);
TermPtr mk_linlam(TypePtr arrow_ann, TermPtr body);
TermPtr mk_linapp(TermPtr f, TermPtr a);
TermPtr mk_zero();
TermPtr mk_add(TermPtr a, TermPtr b);
TermPtr mk_proj(int index, int arity, TermPtr t);
TermPtr mk_coproj(int index, int arity, TermPtr t);
TermPtr mk_lsum_inj(int index, TypePtr sum, TermPtr t);
TermPtr mk_lsum_proj(int index, TermPtr t);
TermPtr mk_lcase(TermPtr scrut, std::vector<TermPtr> branch_bodies);

// AST node count; every constructor counts one, annotations don't.
std::size_t term_size(const TermPtr& t);

// structural equality, exact binder names, annotations up to alpha
bool term_equal(const TermPtr& a, const TermPtr& b);

// Fresh names for the transformations' binders, in a namespace ("%n")
// unreachable from surface syntax.
std::string fresh_name();
void reset_fresh_names();

}  // namespace chad
