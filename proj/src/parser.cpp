#include "chad/parser.hpp"

#include <cctype>
#include <set>

#include "chad/errors.hpp"
#include "chad/ops.hpp"
#include "chad/printer.hpp"
#include "chad/subst.hpp"

namespace chad {

namespace {

struct Tok {
  enum Kind { Ident, Number, Sym, End } kind;
  std::string text;
  double num = 0;
  int line = 1, col = 1;
};

struct Lexer {
  std::string src;
  std::size_t at = 0;
  int line = 1, col = 1;
  Tok cur;

  explicit Lexer(std::string s) : src(std::move(s)) { advance(); }

  [[noreturn]] void err(const std::string& msg) const {
    fail(Err::SyntaxError, msg + " at line " + std::to_string(cur.line) + ", column " +
                               std::to_string(cur.col));
  }

  void bump(char c) {
    ++at;
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }

  void skip_ws() {
    while (at < src.size()) {
      char c = src[at];
      if (c == '-' && at + 1 < src.size() && src[at + 1] == '-') {
        while (at < src.size() && src[at] != '\n') bump(src[at]);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump(c);
      } else {
        break;
      }
    }
  }

  void advance() {
    skip_ws();
    cur.line = line;
    cur.col = col;
    if (at >= src.size()) {
      cur = {Tok::End, "", 0, line, col};
      return;
    }
    char c = src[at];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '%') {
      std::string s;
      while (at < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[at])) || src[at] == '_' ||
              src[at] == '\'' || src[at] == '%')) {
        s += src[at];
        bump(src[at]);
      }
      cur = {Tok::Ident, s, 0, cur.line, cur.col};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = at;
      while (at < src.size() && (std::isdigit(static_cast<unsigned char>(src[at])) ||
                                 src[at] == '.' || src[at] == 'e' || src[at] == 'E' ||
                                 ((src[at] == '+' || src[at] == '-') &&
                                  (src[at - 1] == 'e' || src[at - 1] == 'E'))))
        bump(src[at]);
      std::string s = src.substr(start, at - start);
      cur = {Tok::Number, s, std::stod(s), cur.line, cur.col};
      return;
    }
    // multi-character symbols
    auto two = src.substr(at, 2);
    if (two == "=>" || two == "->" || two == "-o") {
      bump(src[at]);
      bump(src[at]);
      cur = {Tok::Sym, two, 0, cur.line, cur.col};
      return;
    }
    std::string s(1, c);
    bump(c);
    cur = {Tok::Sym, s, 0, cur.line, cur.col};
  }

  bool is_sym(const std::string& s) const { return cur.kind == Tok::Sym && cur.text == s; }
  bool is_ident(const std::string& s) const { return cur.kind == Tok::Ident && cur.text == s; }

  bool eat_sym(const std::string& s) {
    if (!is_sym(s)) return false;
    advance();
    return true;
  }
  bool eat_ident(const std::string& s) {
    if (!is_ident(s)) return false;
    advance();
    return true;
  }
  void expect_sym(const std::string& s) {
    if (!eat_sym(s)) err("expected '" + s + "'");
  }
  std::string expect_ident() {
    if (cur.kind != Tok::Ident) err("expected an identifier");
    std::string s = cur.text;
    advance();
    return s;
  }
};

const std::set<std::string> kKeywords = {"type", "arg",  "body", "let",  "in",     "fun",
                                         "match", "with", "fold", "gen",  "roll",   "unroll",
                                         "inj",   "fst",  "snd",  "mu",   "nu",     "Unit"};

struct CtorInfo {
  std::string alias;   // declared type name
  TypePtr type;        // the variant or mu type
  TypePtr variant;     // the variant itself (unrolled once for mu)
  int index;           // 1-based
};

struct Parser {
  Lexer lx;
  std::map<std::string, TypePtr> aliases;
  std::map<std::string, CtorInfo> ctors;

  explicit Parser(std::string text) : lx(std::move(text)) {}

  bool real_ident(const std::string& s, int& width) {
    if (s.empty() || s[0] != 'R') return false;
    if (s.size() == 1) {
      width = 1;
      return true;
    }
    for (std::size_t i = 1; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    width = std::stoi(s.substr(1));
    return true;
  }

  TypePtr parse_type() {
    auto lhs = parse_prod_type();
    if (lx.eat_sym("->")) return ty_arrow(lhs, parse_type());
    return lhs;
  }

  TypePtr parse_prod_type() {
    auto lhs = parse_atom_type();
    while (lx.is_sym("*")) {
      lx.advance();
      lhs = ty_prod(lhs, parse_atom_type());
    }
    return lhs;
  }

  TypePtr parse_atom_type() {
    if (lx.eat_sym("(")) {
      auto t = parse_type();
      lx.expect_sym(")");
      return t;
    }
    if (lx.eat_sym("{")) {
      std::vector<std::pair<std::string, TypePtr>> cs;
      do {
        auto label = lx.expect_ident();
        lx.expect_sym(":");
        cs.emplace_back(label, parse_type());
      } while (lx.eat_sym("|"));
      lx.expect_sym("}");
      return ty_variant(std::move(cs));
    }
    if (lx.eat_ident("mu")) {
      auto v = lx.expect_ident();
      lx.expect_sym(".");
      return ty_mu(v, parse_type());
    }
    if (lx.eat_ident("nu")) {
      auto v = lx.expect_ident();
      lx.expect_sym(".");
      return ty_nu(v, parse_type());
    }
    if (lx.eat_ident("Unit")) return ty_unit();
    if (lx.cur.kind == Tok::Ident) {
      int width;
      if (real_ident(lx.cur.text, width)) {
        lx.advance();
        return ty_real(width);
      }
      auto name = lx.expect_ident();
      auto it = aliases.find(name);
      if (it != aliases.end()) return it->second;
      return ty_var(name);
    }
    lx.err("expected a type");
  }

  // term grammar: let/fun/match/fold/gen < ascription < +,- < * < application < atoms
  TermPtr parse_term() {
    if (lx.eat_ident("let")) {
      auto x = lx.expect_ident();
      lx.expect_sym("=");
      auto rhs = parse_term();
      if (!lx.eat_ident("in")) lx.err("expected 'in'");
      return mk_let(x, rhs, parse_term());
    }
    if (lx.eat_ident("fun")) {
      lx.expect_sym("(");
      auto x = lx.expect_ident();
      lx.expect_sym(":");
      auto ty = parse_type();
      lx.expect_sym(")");
      lx.expect_sym("=>");
      return mk_lam(x, ty, parse_term());
    }
    if (lx.eat_ident("match")) {
      auto scrut = parse_term();
      if (!lx.eat_ident("with")) lx.err("expected 'with'");
      lx.expect_sym("{");
      std::vector<MatchBranch> bs;
      do {
        auto label = lx.expect_ident();
        auto binder = lx.expect_ident();
        lx.expect_sym("=>");
        bs.push_back({label, binder, parse_term()});
      } while (lx.eat_sym("|"));
      lx.expect_sym("}");
      return mk_match(scrut, std::move(bs));
    }
    if (lx.eat_ident("fold")) {
      lx.expect_sym("[");
      auto result = parse_type();
      lx.expect_sym("]");
      auto target = parse_app_term();
      if (!lx.eat_ident("with")) lx.err("expected 'with'");
      auto binder = lx.expect_ident();
      lx.expect_sym("=>");
      return mk_fold(target, binder, parse_term(), result);
    }
    if (lx.eat_ident("gen")) {
      lx.expect_sym("[");
      auto nu = parse_type();
      lx.expect_sym("]");
      if (nu->tag != TypeTag::Nu) lx.err("gen needs a nu type");
      auto seed = parse_app_term();
      if (!lx.eat_ident("with")) lx.err("expected 'with'");
      auto binder = lx.expect_ident();
      lx.expect_sym("=>");
      return mk_gen(nu, seed, binder, parse_term());
    }
    auto t = parse_add_term();
    if (lx.eat_sym(":")) {
      auto ty = parse_type();
      return ascribe(t, ty);
    }
    return t;
  }

  // push a variant annotation into a bare injection
  TermPtr ascribe(const TermPtr& t, const TypePtr& ty) {
    if (t->tag == TermTag::Inj && !t->ann) {
      if (ty->tag == TypeTag::Variant) return mk_inj(t->name, ty, t->t0);
      if (ty->tag == TypeTag::Mu) {
        auto unrolled = subst_type(ty->a, ty->name, ty);
        if (unrolled->tag == TypeTag::Variant)
          return mk_roll(ty, mk_inj(t->name, unrolled, t->t0));
      }
      lx.err("cannot ascribe constructor " + t->name + " at " + print_type(ty));
    }
    return t;  // other ascriptions are documentation only
  }

  TermPtr parse_add_term() {
    auto lhs = parse_mul_term();
    for (;;) {
      if (lx.eat_sym("+")) {
        lhs = mk_primop("add", {lhs, parse_mul_term()});
      } else if (lx.is_sym("-")) {
        lx.advance();
        lhs = mk_primop("sub", {lhs, parse_mul_term()});
      } else {
        return lhs;
      }
    }
  }

  TermPtr parse_mul_term() {
    auto lhs = parse_app_term();
    while (lx.is_sym("*")) {
      lx.advance();
      lhs = mk_primop("mul", {lhs, parse_app_term()});
    }
    return lhs;
  }

  bool atom_start() {
    if (lx.cur.kind == Tok::Number) return true;
    if (lx.cur.kind == Tok::Ident) return !kKeywords.count(lx.cur.text) || lx.cur.text == "Unit";
    return lx.is_sym("(") || lx.is_sym("[");
  }

  TermPtr parse_app_term() {
    auto head = parse_prefix();
    for (;;) {
      if (!atom_start()) return head;
      head = apply(head, parse_atom());
    }
  }

  // prefix operators bind a single operand: `snd p q` is `(snd p) q`
  TermPtr parse_prefix() {
    if (lx.eat_ident("fst")) return mk_fst(parse_prefix());
    if (lx.eat_ident("snd")) return mk_snd(parse_prefix());
    if (lx.eat_ident("unroll")) return mk_unroll(parse_prefix());
    if (lx.eat_ident("roll")) {
      lx.expect_sym("[");
      auto mu = parse_type();
      lx.expect_sym("]");
      auto arg = parse_prefix();
      if (mu->tag == TypeTag::Mu && arg->tag == TermTag::Inj && !arg->ann) {
        auto unrolled = subst_type(mu->a, mu->name, mu);
        if (unrolled->tag == TypeTag::Variant)
          return mk_roll(mu, mk_inj(arg->name, unrolled, arg->t0));
      }
      return mk_roll(mu, arg);
    }
    if (lx.eat_ident("inj")) {
      lx.expect_sym("[");
      auto variant = parse_type();
      lx.expect_sym("]");
      auto label = lx.expect_ident();
      return mk_inj(label, variant, parse_prefix());
    }
    return parse_atom();
  }

  TermPtr apply(const TermPtr& head, const TermPtr& arg) {
    if (head->tag == TermTag::Var) {
      // registered constructor: an injection, rolled for mu aliases
      auto it = ctors.find(head->name);
      if (it != ctors.end()) {
        auto inj = mk_inj(head->name, it->second.variant, arg);
        if (it->second.type->tag == TypeTag::Mu) return mk_roll(it->second.type, inj);
        return inj;
      }
      // primitive operation by juxtaposition (single argument)
      if (find_prim(head->name)) return mk_primop(head->name, {arg});
    }
    if (head->tag == TermTag::Inj && !head->ann)
      lx.err("constructor " + head->name + " is not declared");
    return mk_app(head, arg);
  }

  TermPtr parse_atom() {
    if (lx.cur.kind == Tok::Number) {
      double x = lx.cur.num;
      lx.advance();
      return mk_lit({x});
    }
    if (lx.is_sym("-")) {  // negative literal in atom position
      lx.advance();
      if (lx.cur.kind != Tok::Number) lx.err("expected a number after '-'");
      double x = lx.cur.num;
      lx.advance();
      return mk_lit({-x});
    }
    if (lx.eat_sym("[")) {
      std::vector<double> xs;
      if (!lx.eat_sym("]")) {
        do {
          bool neg = lx.eat_sym("-");
          if (lx.cur.kind != Tok::Number) lx.err("expected a number");
          xs.push_back(neg ? -lx.cur.num : lx.cur.num);
          lx.advance();
        } while (lx.eat_sym(","));
        lx.expect_sym("]");
      }
      return mk_lit(std::move(xs));
    }
    if (lx.eat_sym("(")) {
      if (lx.eat_sym(")")) return mk_unit();
      auto t = parse_term();
      if (lx.eat_sym(",")) {
        auto u = parse_term();
        lx.expect_sym(")");
        return mk_pair(t, u);
      }
      lx.expect_sym(")");
      return t;
    }
    if (lx.cur.kind == Tok::Ident && !kKeywords.count(lx.cur.text)) {
      auto name = lx.expect_ident();
      // prim call syntax op(a, b, ...)
      if (find_prim(name) && lx.is_sym("(")) {
        lx.advance();
        std::vector<TermPtr> args;
        if (!lx.eat_sym(")")) {
          do {
            args.push_back(parse_term());
          } while (lx.eat_sym(","));
          lx.expect_sym(")");
        }
        return mk_primop(name, std::move(args));
      }
      auto it = ctors.find(name);
      if (it != ctors.end() && !atom_start()) {
        // nullary-looking constructor use: payload must follow
        lx.err("constructor " + name + " expects a payload");
      }
      return mk_var(name);
    }
    lx.err("expected a term");
  }

  void register_ctors(const std::string& alias, const TypePtr& ty) {
    TypePtr variant = ty;
    if (ty->tag == TypeTag::Mu) variant = subst_type(ty->a, ty->name, ty);
    if (variant->tag != TypeTag::Variant) return;
    for (std::size_t i = 0; i < variant->ctors.size(); ++i) {
      const auto& label = variant->ctors[i].first;
      if (ctors.count(label))
        lx.err("constructor " + label + " is declared twice; constructor names must be unique");
      ctors[label] = CtorInfo{alias, ty, variant, static_cast<int>(i) + 1};
    }
  }

  ProgramFile parse_file(const std::string& path) {
    ProgramFile pf;
    pf.path = path;
    TermPtr body;
    for (;;) {
      if (lx.eat_ident("type")) {
        auto name = lx.expect_ident();
        lx.expect_sym("=");
        auto ty = parse_type();
        if (aliases.count(name)) lx.err("type " + name + " is declared twice");
        aliases[name] = ty;
        register_ctors(name, ty);
        continue;
      }
      if (lx.eat_ident("arg")) {
        auto name = lx.expect_ident();
        lx.expect_sym(":");
        pf.program.ctx.emplace_back(name, parse_type());
        continue;
      }
      if (lx.eat_ident("body")) {
        body = parse_term();
        break;
      }
      lx.err("expected 'type', 'arg' or 'body'");
    }
    if (lx.cur.kind != Tok::End) lx.err("trailing input after the body");
    pf.aliases = aliases;
    pf.program.body = freshen(body, {});
    pf.program.id = path;
    return pf;
  }

  // binders are made locally unique with a monotone counter
  int unique_counter = 0;
  TermPtr freshen(const TermPtr& t, std::set<std::string> used) {
    std::function<TermPtr(const TermPtr&, std::map<std::string, std::string>&)> go =
        [&](const TermPtr& term, std::map<std::string, std::string>& ren) -> TermPtr {
      if (!term) return term;
      auto bind = [&](const std::string& b, std::map<std::string, std::string>& ren2) {
        std::string nb = b;
        if (used.count(b)) nb = b + "_" + std::to_string(++unique_counter);
        used.insert(nb);
        ren2[b] = nb;
        return nb;
      };
      switch (term->tag) {
        case TermTag::Var: {
          auto it = ren.find(term->name);
          return it == ren.end() ? term : mk_var(it->second);
        }
        case TermTag::Let: {
          auto rhs = go(term->t0, ren);
          auto ren2 = ren;
          auto nb = bind(term->name, ren2);
          return mk_let(nb, rhs, go(term->t1, ren2));
        }
        case TermTag::Lam: {
          auto ren2 = ren;
          auto nb = bind(term->name, ren2);
          return mk_lam(nb, term->ann, go(term->t0, ren2));
        }
        case TermTag::Match: {
          auto scrut = go(term->t0, ren);
          std::vector<MatchBranch> bs;
          for (const auto& b : term->branches) {
            auto ren2 = ren;
            auto nb = bind(b.binder, ren2);
            bs.push_back({b.label, nb, go(b.body, ren2)});
          }
          return mk_match(scrut, std::move(bs));
        }
        case TermTag::Fold: {
          auto target = go(term->t0, ren);
          auto ren2 = ren;
          auto nb = bind(term->name, ren2);
          return mk_fold(target, nb, go(term->t1, ren2), term->ann);
        }
        case TermTag::Gen: {
          auto seed = go(term->t0, ren);
          auto ren2 = ren;
          auto nb = bind(term->name, ren2);
          return mk_gen(term->ann, seed, nb, go(term->t1, ren2));
        }
        default: {
          auto n = std::make_shared<Term>(*term);
          n->t0 = go(term->t0, ren);
          n->t1 = go(term->t1, ren);
          for (auto& a : n->args) a = go(a, ren);
          return n;
        }
      }
    };
    std::map<std::string, std::string> ren;
    return go(t, ren);
  }

  // ---- type-directed value literals ----

  bool list_shape(const TypePtr& mu, int& cons_idx, int& leaf_idx, TypePtr& elem,
                  TypePtr& leaf_payload) {
    if (mu->tag != TypeTag::Mu || mu->a->tag != TypeTag::Variant || mu->a->ctors.size() != 2)
      return false;
    for (int i = 0; i < 2; ++i) {
      const auto& payload = mu->a->ctors[i].second;
      if (payload->tag == TypeTag::Prod && payload->b->tag == TypeTag::TVar &&
          payload->b->name == mu->name && !free_type_vars(payload->a).count(mu->name)) {
        cons_idx = i;
        leaf_idx = 1 - i;
        if (free_type_vars(mu->a->ctors[leaf_idx].second).count(mu->name)) return false;
        elem = payload->a;
        leaf_payload = mu->a->ctors[leaf_idx].second;
        return true;
      }
    }
    return false;
  }

  ValuePtr parse_value_at(const TypePtr& ty) {
    switch (ty->tag) {
      case TypeTag::Real: {
        if (ty->width == 1) {
          bool neg = lx.eat_sym("-");
          if (lx.cur.kind != Tok::Number) lx.err("expected a number");
          double x = neg ? -lx.cur.num : lx.cur.num;
          lx.advance();
          return v_real({x});
        }
        lx.expect_sym("[");
        Vec xs;
        if (!lx.eat_sym("]")) {
          do {
            bool neg = lx.eat_sym("-");
            if (lx.cur.kind != Tok::Number) lx.err("expected a number");
            xs.push_back(neg ? -lx.cur.num : lx.cur.num);
            lx.advance();
          } while (lx.eat_sym(","));
          lx.expect_sym("]");
        }
        if (static_cast<int>(xs.size()) != ty->width) lx.err("vector width mismatch");
        return v_real(std::move(xs));
      }
      case TypeTag::Unit:
        lx.expect_sym("(");
        lx.expect_sym(")");
        return v_unit();
      case TypeTag::Prod: {
        lx.expect_sym("(");
        auto a = parse_value_at(ty->a);
        lx.expect_sym(",");
        auto b = parse_value_at(ty->b);
        lx.expect_sym(")");
        return v_pair(a, b);
      }
      case TypeTag::Variant: {
        auto label = lx.expect_ident();
        for (const auto& c : ty->ctors)
          if (c.first == label) return v_inj(label, parse_value_at(c.second));
        lx.err("constructor " + label + " not in " + print_type(ty));
      }
      case TypeTag::Mu: {
        int cons_idx, leaf_idx;
        TypePtr elem, leaf_payload;
        if (lx.is_sym("[") && list_shape(ty, cons_idx, leaf_idx, elem, leaf_payload)) {
          lx.advance();
          std::vector<ValuePtr> elems;
          if (!lx.is_sym("]")) {
            do {
              elems.push_back(parse_value_at(elem));
            } while (lx.eat_sym(","));
          }
          lx.expect_sym("]");
          const auto& consname = ty->a->ctors[cons_idx].first;
          const auto& leafname = ty->a->ctors[leaf_idx].first;
          ValuePtr acc;
          std::size_t upto = elems.size();
          if (leaf_payload->tag == TypeTag::Unit) {
            acc = v_roll(ty, v_inj(leafname, v_unit()));
          } else {
            if (elems.empty()) lx.err("this list type has no empty list");
            // the final element must fit the leaf payload; element and leaf
            // payloads coincide in the corpus types
            acc = v_roll(ty, v_inj(leafname, elems.back()));
            upto = elems.size() - 1;
          }
          for (std::size_t i = upto; i-- > 0;)
            acc = v_roll(ty, v_inj(consname, v_pair(elems[i], acc)));
          return acc;
        }
        return v_roll(ty, parse_value_at(subst_type(ty->a, ty->name, ty)));
      }
      default:
        lx.err("cannot write a literal of type " + print_type(ty));
    }
  }
};

}  // namespace

ProgramFile parse_program(const std::string& text, const std::string& path) {
  Parser p(text);
  return p.parse_file(path);
}

ValuePtr parse_value(const ProgramFile& pf, const TypePtr& ty, const std::string& text) {
  Parser p(text);
  p.aliases = pf.aliases;
  auto v = p.parse_value_at(ty);
  if (p.lx.cur.kind != Tok::End) p.lx.err("trailing input after the value");
  return v;
}

std::vector<ValuePtr> parse_point(const ProgramFile& pf, const std::string& text) {
  Parser p(text);
  p.aliases = pf.aliases;
  std::vector<ValuePtr> vs;
  for (std::size_t i = 0; i < pf.program.ctx.size(); ++i) {
    if (i) p.lx.expect_sym(";");
    vs.push_back(p.parse_value_at(pf.program.ctx[i].second));
  }
  if (p.lx.cur.kind != Tok::End) p.lx.err("trailing input after the point");
  return vs;
}

Vec parse_coords(const std::string& text) {
  Parser p(text);
  Vec xs;
  p.lx.eat_sym("[");
  for (;;) {
    if (p.lx.cur.kind == Tok::End || p.lx.is_sym("]")) break;
    bool neg = p.lx.eat_sym("-");
    if (p.lx.cur.kind != Tok::Number) p.lx.err("expected a number");
    xs.push_back(neg ? -p.lx.cur.num : p.lx.cur.num);
    p.lx.advance();
    if (!p.lx.eat_sym(",")) break;
  }
  p.lx.eat_sym("]");
  if (p.lx.cur.kind != Tok::End) p.lx.err("trailing input after coordinates");
  return xs;
}

}  // namespace chad
