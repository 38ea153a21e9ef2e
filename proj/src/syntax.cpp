#include "chad/syntax.hpp"

#include <atomic>
#include <map>

namespace chad {

namespace {
TypePtr node(TypeTag tag) {
  auto t = std::make_shared<Type>();
  t->tag = tag;
  return t;
}
}  // namespace

TypePtr ty_var(std::string name) {
  auto t = std::make_shared<Type>();
  t->tag = TypeTag::TVar;
  t->name = std::move(name);
  return t;
}
TypePtr ty_real(int n) {
  auto t = std::make_shared<Type>();
  t->tag = TypeTag::Real;
  t->width = n;
  return t;
}
TypePtr ty_unit() { return node(TypeTag::Unit); }
TypePtr ty_prod(TypePtr a, TypePtr b) {
  auto t = std::make_shared<Type>();
  t->tag = TypeTag::Prod;
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}
TypePtr ty_arrow(TypePtr a, TypePtr b) {
  auto t = std::make_shared<Type>();
  t->tag = TypeTag::Arrow;
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}
TypePtr ty_variant(std::vector<std::pair<std::string, TypePtr>> ctors) {
  auto t = std::make_shared<Type>();
  t->tag = TypeTag::Variant;
  t->ctors = std::move(ctors);
  return t;
}
TypePtr ty_mu(std::string var, TypePtr body) {
  auto t = std::make_shared<Type>();
  t->tag = TypeTag::Mu;
  t->name = std::move(var);
  t->a = std::move(body);
  return t;
}
TypePtr ty_nu(std::string var, TypePtr body) {
  auto t = std::make_shared<Type>();
  t->tag = TypeTag::Nu;
  t->name = std::move(var);
  t->a = std::move(body);
  return t;
}
TypePtr ty_lreal(int n) {
  auto t = std::make_shared<Type>();
  t->tag = TypeTag::LReal;
  t->width = n;
  return t;
}
TypePtr ty_lunit() { return node(TypeTag::LUnit); }
TypePtr ty_lprod(TypePtr a, TypePtr b) {
  auto t = std::make_shared<Type>();
  t->tag = TypeTag::LProd;
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}
TypePtr ty_power(TypePtr idx, TypePtr body) {
  auto t = std::make_shared<Type>();
  t->tag = TypeTag::Power;
  t->a = std::move(idx);
  t->b = std::move(body);
  return t;
}
TypePtr ty_copower(TypePtr idx, TypePtr body) {
  auto t = std::make_shared<Type>();
  t->tag = TypeTag::Copower;
  t->a = std::move(idx);
  t->b = std::move(body);
  return t;
}
TypePtr ty_linarrow(TypePtr a, TypePtr b) {
  auto t = std::make_shared<Type>();
  t->tag = TypeTag::LinArrow;
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}
TypePtr ty_lsum(std::vector<TypePtr> alts) {
  auto t = std::make_shared<Type>();
  t->tag = TypeTag::LSum;
  t->alts = std::move(alts);
  return t;
}
TypePtr ty_lmu(std::string var, TypePtr body) {
  auto t = std::make_shared<Type>();
  t->tag = TypeTag::LMu;
  t->name = std::move(var);
  t->a = std::move(body);
  return t;
}
TypePtr ty_lnu(std::string var, TypePtr body) {
  auto t = std::make_shared<Type>();
  t->tag = TypeTag::LNu;
  t->name = std::move(var);
  t->a = std::move(body);
  return t;
}
TypePtr ty_case(std::vector<std::pair<std::string, TypePtr>> branches) {
  auto t = std::make_shared<Type>();
  t->tag = TypeTag::CaseType;
  t->ctors = std::move(branches);
  return t;
}

bool is_linear_tag(TypeTag t) {
  switch (t) {
    case TypeTag::LReal:
    case TypeTag::LUnit:
    case TypeTag::LProd:
    case TypeTag::Power:
    case TypeTag::Copower:
    case TypeTag::LSum:
    case TypeTag::LMu:
    case TypeTag::LNu:
    case TypeTag::CaseType:
      return true;
    default:
      return false;
  }
}

namespace {
bool type_equal_rec(const TypePtr& a, const TypePtr& b,
                    std::map<std::string, std::string>& ab,
                    std::map<std::string, std::string>& ba) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case TypeTag::TVar: {
      auto ita = ab.find(a->name);
      auto itb = ba.find(b->name);
      if (ita == ab.end() && itb == ba.end()) return a->name == b->name;
      if (ita == ab.end() || itb == ba.end()) return false;
      return ita->second == b->name && itb->second == a->name;
    }
    case TypeTag::Real:
    case TypeTag::LReal:
      return a->width == b->width;
    case TypeTag::Unit:
    case TypeTag::LUnit:
      return true;
    case TypeTag::Prod:
    case TypeTag::Arrow:
    case TypeTag::LProd:
    case TypeTag::Power:
    case TypeTag::Copower:
    case TypeTag::LinArrow:
      return type_equal_rec(a->a, b->a, ab, ba) && type_equal_rec(a->b, b->b, ab, ba);
    case TypeTag::Variant:
    case TypeTag::CaseType: {
      if (a->ctors.size() != b->ctors.size()) return false;
      for (std::size_t i = 0; i < a->ctors.size(); ++i) {
        if (a->ctors[i].first != b->ctors[i].first) return false;
        if (!type_equal_rec(a->ctors[i].second, b->ctors[i].second, ab, ba)) return false;
      }
      return true;
    }
    case TypeTag::LSum: {
      if (a->alts.size() != b->alts.size()) return false;
      for (std::size_t i = 0; i < a->alts.size(); ++i)
        if (!type_equal_rec(a->alts[i], b->alts[i], ab, ba)) return false;
      return true;
    }
    case TypeTag::Mu:
    case TypeTag::Nu:
    case TypeTag::LMu:
    case TypeTag::LNu: {
      auto olda = ab.find(a->name) == ab.end() ? std::optional<std::string>{}
                                               : std::optional<std::string>{ab[a->name]};
      auto oldb = ba.find(b->name) == ba.end() ? std::optional<std::string>{}
                                               : std::optional<std::string>{ba[b->name]};
      ab[a->name] = b->name;
      ba[b->name] = a->name;
      bool ok = type_equal_rec(a->a, b->a, ab, ba);
      if (olda) ab[a->name] = *olda; else ab.erase(a->name);
      if (oldb) ba[b->name] = *oldb; else ba.erase(b->name);
      return ok;
    }
  }
  return false;
}
}  // namespace

bool type_equal(const TypePtr& a, const TypePtr& b) {
  std::map<std::string, std::string> ab, ba;
  return type_equal_rec(a, b, ab, ba);
}

namespace {
std::shared_ptr<Term> term(TermTag tag) {
  auto t = std::make_shared<Term>();
  t->tag = tag;
  return t;
}
}  // namespace

TermPtr mk_var(std::string name) {
  auto t = term(TermTag::Var);
  t->name = std::move(name);
  return t;
}
TermPtr mk_let(std::string x, TermPtr rhs, TermPtr body) {
  auto t = term(TermTag::Let);
  t->name = std::move(x);
  t->t0 = std::move(rhs);
  t->t1 = std::move(body);
  return t;
}
TermPtr mk_primop(std::string op, std::vector<TermPtr> args) {
  auto t = term(TermTag::PrimOp);
  t->name = std::move(op);
  t->args = std::move(args);
  return t;
}
TermPtr mk_lit(std::vector<double> xs) {
  auto t = term(TermTag::RealLit);
  t->lit = std::move(xs);
  return t;
}
TermPtr mk_unit() { return term(TermTag::UnitVal); }
TermPtr mk_pair(TermPtr a, TermPtr b) {
  auto t = term(TermTag::Pair);
  t->t0 = std::move(a);
  t->t1 = std::move(b);
  return t;
}
TermPtr mk_fst(TermPtr x) {
  auto t = term(TermTag::Fst);
  t->t0 = std::move(x);
  return t;
}
TermPtr mk_snd(TermPtr x) {
  auto t = term(TermTag::Snd);
  t->t0 = std::move(x);
  return t;
}
TermPtr mk_lam(std::string x, TypePtr ann, TermPtr body) {
  auto t = term(TermTag::Lam);
  t->name = std::move(x);
  t->ann = std::move(ann);
  t->t0 = std::move(body);
  return t;
}
TermPtr mk_app(TermPtr f, TermPtr a) {
  auto t = term(TermTag::App);
  t->t0 = std::move(f);
  t->t1 = std::move(a);
  return t;
}
TermPtr mk_inj(std::string label, TypePtr variant, TermPtr x) {
  auto t = term(TermTag::Inj);
  t->name = std::move(label);
  t->ann = std::move(variant);
  t->t0 = std::move(x);
  return t;
}
TermPtr mk_match(TermPtr scrut, std::vector<MatchBranch> branches) {
  auto t = term(TermTag::Match);
  t->t0 = std::move(scrut);
  t->branches = std::move(branches);
  return t;
}
TermPtr mk_roll(TypePtr mu, TermPtr x) {
  auto t = term(TermTag::Roll);
  t->ann = std::move(mu);
  t->t0 = std::move(x);
  return t;
}
TermPtr mk_fold(TermPtr x, std::string binder, TermPtr body, TypePtr result,
                std::shared_ptr<const LinRecMeta> meta) {
  auto t = term(TermTag::Fold);
  t->t0 = std::move(x);
  t->name = std::move(binder);
  t->t1 = std::move(body);
  t->ann = std::move(result);
  t->meta = std::move(meta);
  return t;
}
TermPtr mk_gen(TypePtr nu, TermPtr seed, std::string binder, TermPtr body,
               std::shared_ptr<const LinRecMeta> meta) {
  auto t = term(TermTag::Gen);
  t->ann = std::move(nu);
  t->t0 = std::move(seed);
  t->name = std::move(binder);
  t->t1 = std::move(body);
  t->meta = std::move(meta);
  return t;
}
TermPtr mk_unroll(TermPtr x) {
  auto t = term(TermTag::Unroll);
  t->t0 = std::move(x);
  return t;
}
TermPtr mk_linvar() { return term(TermTag::LinVar); }
TermPtr mk_linlet(TermPtr rhs, TermPtr body) {
  auto t = term(TermTag::LinLet);
  t->t0 = std::move(rhs);
  t->t1 = std::move(body);
  return t;
}
TermPtr mk_linop(std::string op, std::vector<TermPtr> cart, TermPtr lin) {
  auto t = term(TermTag::LinOp);
  t->name = std::move(op);
  t->args = std::move(cart);
  t->t0 = std::move(lin);
  return t;
}
TermPtr mk_copow_intro(TermPtr point, TermPtr lin) {
  auto t = term(TermTag::CopowIntro);
  t->t0 = std::move(point);
  t->t1 = std::move(lin);
  return t;
}
TermPtr mk_copow_elim(TermPtr x, std::string binder, TermPtr body) {
  auto t = term(TermTag::CopowElim);
  t->t0 = std::move(x);
  t->name = std::move(binder);
  t->t1 = std::move(body);
  return t;
}
TermPtr mk_linlam(TypePtr arrow_ann, TermPtr body) {
  auto t = term(TermTag::LinLam);
  t->ann = std::move(arrow_ann);
  t->t0 = std::move(body);
  return t;
}
TermPtr mk_linapp(TermPtr f, TermPtr a) {
  auto t = term(TermTag::LinApp);
  t->t0 = std::move(f);
  t->t1 = std::move(a);
  return t;
}
TermPtr mk_zero() { return term(TermTag::Zero); }
TermPtr mk_add(TermPtr a, TermPtr b) {
  auto t = term(TermTag::Add);
  t->t0 = std::move(a);
  t->t1 = std::move(b);
  return t;
}
TermPtr mk_proj(int index, int arity, TermPtr x) {
  auto t = term(TermTag::Proj);
  t->index = index;
  t->arity = arity;
  t->t0 = std::move(x);
  return t;
}
TermPtr mk_coproj(int index, int arity, TermPtr x) {
  auto t = term(TermTag::CoProj);
  t->index = index;
  t->arity = arity;
  t->t0 = std::move(x);
  return t;
}
TermPtr mk_lsum_inj(int index, TypePtr sum, TermPtr x) {
  auto t = term(TermTag::LSumInj);
  t->index = index;
  t->arity = sum ? static_cast<int>(sum->alts.size()) : 0;
  t->ann = std::move(sum);
  t->t0 = std::move(x);
  return t;
}
TermPtr mk_lsum_proj(int index, TermPtr x) {
  auto t = term(TermTag::LSumProj);
  t->index = index;
  t->t0 = std::move(x);
  return t;
}
TermPtr mk_lcase(TermPtr scrut, std::vector<TermPtr> branch_bodies) {
  auto t = term(TermTag::LCase);
  t->t0 = std::move(scrut);
  t->args = std::move(branch_bodies);
  return t;
}

std::size_t term_size(const TermPtr& t) {
  if (!t) return 0;
  std::size_t n = 1;
  n += term_size(t->t0);
  n += term_size(t->t1);
  for (const auto& a : t->args) n += term_size(a);
  for (const auto& b : t->branches) n += term_size(b.body);
  return n;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (!a || !b) return a == b;
  if (a->tag != b->tag || a->name != b->name || a->index != b->index || a->arity != b->arity)
    return false;
  if (a->lit != b->lit) return false;
  if (static_cast<bool>(a->ann) != static_cast<bool>(b->ann)) return false;
  if (a->ann && !type_equal(a->ann, b->ann)) return false;
  if (!term_equal(a->t0, b->t0) || !term_equal(a->t1, b->t1)) return false;
  if (a->args.size() != b->args.size() || a->branches.size() != b->branches.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!term_equal(a->args[i], b->args[i])) return false;
  for (std::size_t i = 0; i < a->branches.size(); ++i) {
    if (a->branches[i].label != b->branches[i].label) return false;
    if (a->branches[i].binder != b->branches[i].binder) return false;
    if (!term_equal(a->branches[i].body, b->branches[i].body)) return false;
  }
  return true;
}

namespace {
std::atomic<unsigned long> g_fresh{0};
}

std::string fresh_name() { return "%" + std::to_string(g_fresh++); }
void reset_fresh_names() { g_fresh = 0; }

}  // namespace chad
