#include "chad/printer.hpp"

#include <sstream>

namespace chad {

namespace {

// type precedence: arrow 0, product 1, atom 2
void pt(std::ostringstream& o, const TypePtr& t, int prec) {
  auto paren = [&](int mine, auto body) {
    if (mine < prec) o << "(";
    body();
    if (mine < prec) o << ")";
  };
  switch (t->tag) {
    case TypeTag::TVar: o << t->name; break;
    case TypeTag::Real:
      o << "R";
      if (t->width != 1) o << t->width;
      break;
    case TypeTag::LReal:
      o << "R_";
      if (t->width != 1) o << t->width;
      break;
    case TypeTag::Unit: o << "Unit"; break;
    case TypeTag::LUnit: o << "Unit_"; break;
    case TypeTag::Prod:
    case TypeTag::LProd:
      paren(1, [&] {
        pt(o, t->a, 1);
        o << " * ";
        pt(o, t->b, 2);
      });
      break;
    case TypeTag::Arrow:
      paren(0, [&] {
        pt(o, t->a, 1);
        o << " -> ";
        pt(o, t->b, 0);
      });
      break;
    case TypeTag::LinArrow:
      paren(0, [&] {
        pt(o, t->a, 1);
        o << " -o ";
        pt(o, t->b, 0);
      });
      break;
    case TypeTag::Power:
      paren(0, [&] {
        pt(o, t->a, 1);
        o << " => ";
        pt(o, t->b, 0);
      });
      break;
    case TypeTag::Copower:
      paren(1, [&] {
        o << "!";
        pt(o, t->a, 2);
        o << " (x) ";
        pt(o, t->b, 2);
      });
      break;
    case TypeTag::Variant: {
      o << "{ ";
      bool first = true;
      for (const auto& c : t->ctors) {
        if (!first) o << " | ";
        first = false;
        o << c.first << " : ";
        pt(o, c.second, 0);
      }
      o << " }";
      break;
    }
    case TypeTag::CaseType: {
      o << "case{ ";
      bool first = true;
      for (const auto& c : t->ctors) {
        if (!first) o << " | ";
        first = false;
        o << c.first << " : ";
        pt(o, c.second, 0);
      }
      o << " }";
      break;
    }
    case TypeTag::LSum: {
      paren(1, [&] {
        bool first = true;
        for (const auto& a : t->alts) {
          if (!first) o << " v ";
          first = false;
          pt(o, a, 2);
        }
      });
      break;
    }
    case TypeTag::Mu:
      paren(0, [&] {
        o << "mu " << t->name << ". ";
        pt(o, t->a, 0);
      });
      break;
    case TypeTag::Nu:
      paren(0, [&] {
        o << "nu " << t->name << ". ";
        pt(o, t->a, 0);
      });
      break;
    case TypeTag::LMu:
      paren(0, [&] {
        o << "mu_ " << t->name << ". ";
        pt(o, t->a, 0);
      });
      break;
    case TypeTag::LNu:
      paren(0, [&] {
        o << "nu_ " << t->name << ". ";
        pt(o, t->a, 0);
      });
      break;
  }
}

std::string fmt_num(double x) {
  std::ostringstream o;
  o << x;
  return o.str();
}

// term precedence: 0 binder-level, 1 additive, 2 application, 3 atom
void p(std::ostringstream& o, const TermPtr& t, int prec) {
  auto paren = [&](int mine, auto body) {
    if (mine < prec) o << "(";
    body();
    if (mine < prec) o << ")";
  };
  switch (t->tag) {
    case TermTag::Var: o << t->name; break;
    case TermTag::LinVar: o << "v"; break;
    case TermTag::Let:
      paren(0, [&] {
        o << "let " << t->name << " = ";
        p(o, t->t0, 0);
        o << " in ";
        p(o, t->t1, 0);
      });
      break;
    case TermTag::LinLet:
      paren(0, [&] {
        o << "let v = ";
        p(o, t->t0, 0);
        o << " in ";
        p(o, t->t1, 0);
      });
      break;
    case TermTag::PrimOp: {
      o << t->name << "(";
      bool first = true;
      for (const auto& a : t->args) {
        if (!first) o << ", ";
        first = false;
        p(o, a, 0);
      }
      o << ")";
      break;
    }
    case TermTag::LinOp: {
      o << t->name << "(";
      bool first = true;
      for (const auto& a : t->args) {
        if (!first) o << ", ";
        first = false;
        p(o, a, 0);
      }
      o << "; ";
      p(o, t->t0, 0);
      o << ")";
      break;
    }
    case TermTag::RealLit:
      if (t->lit.size() == 1) {
        o << fmt_num(t->lit[0]);
      } else {
        o << "[";
        for (std::size_t i = 0; i < t->lit.size(); ++i) {
          if (i) o << ", ";
          o << fmt_num(t->lit[i]);
        }
        o << "]";
      }
      break;
    case TermTag::UnitVal: o << "()"; break;
    case TermTag::Pair:
      o << "(";
      p(o, t->t0, 0);
      o << ", ";
      p(o, t->t1, 0);
      o << ")";
      break;
    case TermTag::Fst:
      paren(2, [&] {
        o << "fst ";
        p(o, t->t0, 3);
      });
      break;
    case TermTag::Snd:
      paren(2, [&] {
        o << "snd ";
        p(o, t->t0, 3);
      });
      break;
    case TermTag::Lam:
      paren(0, [&] {
        o << "fun (" << t->name;
        if (t->ann) o << " : " << print_type(t->ann);
        o << ") => ";
        p(o, t->t0, 0);
      });
      break;
    case TermTag::LinLam:
      paren(0, [&] {
        o << "\\v. ";
        p(o, t->t0, 0);
      });
      break;
    case TermTag::App:
      paren(2, [&] {
        p(o, t->t0, 2);
        o << " ";
        p(o, t->t1, 3);
      });
      break;
    case TermTag::LinApp:
      paren(2, [&] {
        p(o, t->t0, 3);
        o << " . ";
        p(o, t->t1, 3);
      });
      break;
    case TermTag::Inj:
      paren(2, [&] {
        if (t->ann) o << "inj [" << print_type(t->ann) << "] ";
        o << t->name << " ";
        p(o, t->t0, 3);
      });
      break;
    case TermTag::Match: {
      paren(0, [&] {
        o << "match ";
        p(o, t->t0, 0);
        o << " with { ";
        bool first = true;
        for (const auto& b : t->branches) {
          if (!first) o << " | ";
          first = false;
          o << b.label << " " << b.binder << " => ";
          p(o, b.body, 0);
        }
        o << " }";
      });
      break;
    }
    case TermTag::Roll:
      paren(2, [&] {
        o << "roll ";
        if (t->ann) o << "[" << print_type(t->ann) << "] ";
        p(o, t->t0, 3);
      });
      break;
    case TermTag::Unroll:
      paren(2, [&] {
        o << "unroll ";
        p(o, t->t0, 3);
      });
      break;
    case TermTag::Fold:
      paren(0, [&] {
        o << "fold ";
        if (t->ann) o << "[" << print_type(t->ann) << "] ";
        p(o, t->t0, 3);
        o << " with " << (t->name.empty() ? "v" : t->name) << " => ";
        p(o, t->t1, 0);
      });
      break;
    case TermTag::Gen:
      paren(0, [&] {
        o << "gen ";
        if (t->ann) o << "[" << print_type(t->ann) << "] ";
        p(o, t->t0, 3);
        o << " with " << (t->name.empty() ? "v" : t->name) << " => ";
        p(o, t->t1, 0);
      });
      break;
    case TermTag::CopowIntro:
      paren(2, [&] {
        o << "!";
        p(o, t->t0, 3);
        o << " (x) ";
        p(o, t->t1, 3);
      });
      break;
    case TermTag::CopowElim:
      paren(0, [&] {
        o << "case ";
        p(o, t->t0, 0);
        o << " of !" << t->name << " (x) v => ";
        p(o, t->t1, 0);
      });
      break;
    case TermTag::Zero: o << "0_"; break;
    case TermTag::Add:
      paren(1, [&] {
        p(o, t->t0, 1);
        o << " + ";
        p(o, t->t1, 2);
      });
      break;
    case TermTag::Proj:
      paren(2, [&] {
        o << "proj" << t->index << "/" << t->arity << " ";
        p(o, t->t0, 3);
      });
      break;
    case TermTag::CoProj:
      paren(2, [&] {
        o << "coproj" << t->index << "/" << t->arity << " ";
        p(o, t->t0, 3);
      });
      break;
    case TermTag::LSumInj:
      paren(2, [&] {
        o << "iota" << t->index << " ";
        p(o, t->t0, 3);
      });
      break;
    case TermTag::LSumProj:
      paren(2, [&] {
        o << "pi" << t->index << " ";
        p(o, t->t0, 3);
      });
      break;
    case TermTag::LCase: {
      paren(0, [&] {
        o << "lcase ";
        p(o, t->t0, 3);
        o << " of { ";
        for (std::size_t i = 0; i < t->args.size(); ++i) {
          if (i) o << " | ";
          o << "iota" << (i + 1) << " v => ";
          p(o, t->args[i], 0);
        }
        o << " }";
      });
      break;
    }
  }
}

void ps(std::ostringstream& o, const TermPtr& t) {
  switch (t->tag) {
    case TermTag::Var: o << t->name; return;
    case TermTag::LinVar: o << "v"; return;
    case TermTag::Zero: o << "0_"; return;
    case TermTag::UnitVal: o << "unit"; return;
    case TermTag::RealLit: {
      o << "(lit";
      for (double x : t->lit) o << " " << fmt_num(x);
      o << ")";
      return;
    }
    default: break;
  }
  static const char* names[] = {
      "var",   "let",   "op",    "lit",    "unit",   "pair",    "fst",     "snd",
      "lam",   "app",   "inj",   "match",  "roll",   "fold",    "gen",     "unroll",
      "linvar", "linlet", "linop", "copow", "copow-elim", "linlam", "linapp",
      "zero",  "add",   "proj",  "coproj", "isum",   "psum",    "lcase"};
  o << "(" << names[static_cast<int>(t->tag)];
  if (!t->name.empty()) o << " " << t->name;
  if (t->tag == TermTag::Proj || t->tag == TermTag::CoProj || t->tag == TermTag::LSumInj ||
      t->tag == TermTag::LSumProj)
    o << " " << t->index << " " << t->arity;
  if (t->ann) o << " :" << print_type(t->ann);
  if (t->t0) {
    o << " ";
    ps(o, t->t0);
  }
  if (t->t1) {
    o << " ";
    ps(o, t->t1);
  }
  for (const auto& a : t->args) {
    o << " ";
    ps(o, a);
  }
  for (const auto& b : t->branches) {
    o << " (" << b.label << " " << b.binder << " ";
    ps(o, b.body);
    o << ")";
  }
  o << ")";
}

}  // namespace

std::string print_type(const TypePtr& t) {
  std::ostringstream o;
  pt(o, t, 0);
  return o.str();
}

std::string print_term(const TermPtr& t) {
  std::ostringstream o;
  p(o, t, 0);
  return o.str();
}

std::string print_term_sexpr(const TermPtr& t) {
  std::ostringstream o;
  ps(o, t);
  return o.str();
}

}  // namespace chad
