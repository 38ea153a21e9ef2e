// chadc: batch driver for the AD pipeline (check, transform, eval, grad,
// audit, size) over .chad program files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "chad/deriv_check.hpp"
#include "chad/errors.hpp"
#include "chad/parser.hpp"
#include "chad/printer.hpp"

namespace fs = std::filesystem;
using namespace chad;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::SyntaxError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProgramFile load(const std::string& path) {
  reset_fresh_names();  // per-file transforms print identically across runs
  auto pf = parse_program(slurp(path), fs::path(path).stem().string());
  pf.program.result = type_check({}, pf.program.ctx, pf.program.body);
  return pf;
}

std::vector<std::string> collect(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      for (const auto& e : fs::directory_iterator(in))
        if (e.path().extension() == ".chad") files.push_back(e.path().string());
    } else {
      files.push_back(in);
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string show_coords(const Vec& v) {
  std::ostringstream o;
  o << "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) o << ", ";
    o << v[i];
  }
  o << "]";
  return o.str();
}

std::string emit(const TermPtr& t, const std::string& how) {
  return how == "sexpr" ? print_term_sexpr(t) : print_term(t);
}

struct Options {
  std::string mode = "rev";
  bool split = false;
  std::string lsum = "lifted";
  std::string at, tan, cot;
  double h = 1e-5;
  double rel_tol = 1e-4;
  double abs_tol = 1e-6;
  unsigned long seed = 0;
  int depth = 16;
  int points = 10;
  std::string emit_kind = "pretty";
};

CheckConfig to_check_config(const Options& o) {
  CheckConfig cfg;
  cfg.h = o.h;
  cfg.rel_tol = o.rel_tol;
  cfg.abs_tol = o.abs_tol;
  cfg.seed = o.seed;
  cfg.codata_depth = o.depth;
  cfg.points = o.points;
  cfg.lsum_biproduct = (o.lsum == "biproduct");
  cfg.split_mode = o.split;
  return cfg;
}

int run(int argc, char** argv) {
  CLI::App app{"CHAD source-to-source automatic differentiation"};
  app.set_help_flag("--help", "print this help message");
  app.require_subcommand(1);
  Options o;
  std::vector<std::string> inputs;

  auto add_common = [&](CLI::App* c, bool with_inputs = true) {
    c->set_help_flag("--help", "print this help message");
    c->add_option("--mode", o.mode)->check(CLI::IsMember({"fwd", "rev"}));
    c->add_flag("--split", o.split);
    c->add_option("--lsum", o.lsum)->check(CLI::IsMember({"biproduct", "lifted"}));
    c->add_option("--h", o.h);
    c->add_option("--rel-tol", o.rel_tol);
    c->add_option("--abs-tol", o.abs_tol);
    c->add_option("--seed", o.seed);
    c->add_option("--depth", o.depth);
    c->add_option("--points", o.points);
    c->add_option("--emit", o.emit_kind)->check(CLI::IsMember({"pretty", "sexpr"}));
    if (with_inputs) c->add_option("files", inputs)->required();
  };

  auto* ccheck = app.add_subcommand("check", "type-check a program");
  add_common(ccheck);

  auto* ctrans = app.add_subcommand("transform", "print the CHAD-transformed program");
  add_common(ctrans);

  auto* ceval = app.add_subcommand("eval", "run a program on literal inputs");
  add_common(ceval);
  ceval->add_option("--at", o.at)->required();

  auto* cgrad = app.add_subcommand("grad", "JVP/VJP at a point");
  add_common(cgrad);
  cgrad->add_option("--at", o.at)->required();
  cgrad->add_option("--tan", o.tan);
  cgrad->add_option("--cot", o.cot);

  auto* caudit = app.add_subcommand("audit", "finite-difference derivative audit");
  add_common(caudit);

  auto* csize = app.add_subcommand("size", "source vs transformed term sizes");
  add_common(csize);

  CLI11_PARSE(app, argc, argv);

  auto files = collect(inputs);
  if (files.empty()) fail(Err::SyntaxError, "no input programs");

  if (ccheck->parsed()) {
    for (const auto& f : files) {
      auto pf = load(f);
      std::cout << pf.program.id << " : " << print_type(pf.program.result) << "\n";
    }
    return 0;
  }

  if (ctrans->parsed()) {
    for (const auto& f : files) {
      auto pf = load(f);
      if (o.split) {
        auto [pr, ln] = o.mode == "fwd" ? fwd_transform_split(pf.program.ctx, pf.program.body)
                                        : rev_transform_split(pf.program.ctx, pf.program.body);
        std::cout << "primal: " << emit(pr, o.emit_kind) << "\n";
        std::cout << (o.mode == "fwd" ? "tangent: " : "cotangent: ") << emit(ln, o.emit_kind)
                  << "\n";
      } else {
        auto tr = o.mode == "fwd" ? fwd_transform(pf.program.ctx, pf.program.body)
                                  : rev_transform(pf.program.ctx, pf.program.body);
        std::cout << emit(tr, o.emit_kind) << "\n";
      }
    }
    return 0;
  }

  if (ceval->parsed()) {
    for (const auto& f : files) {
      auto pf = load(f);
      auto point = parse_point(pf, o.at);
      Env env;
      for (std::size_t i = 0; i < point.size(); ++i)
        env = env.extend(pf.program.ctx[i].first, point[i]);
      Evaluator ev;
      std::cout << print_value(ev.eval(env, pf.program.body)) << "\n";
    }
    return 0;
  }

  if (cgrad->parsed()) {
    for (const auto& f : files) {
      auto pf = load(f);
      auto pt = make_point(pf.program, parse_point(pf, o.at));
      auto cfg = to_check_config(o);
      if (o.mode == "fwd") {
        if (o.tan.empty()) fail(Err::ShapeMismatch, "forward mode needs --tan");
        std::cout << show_coords(jvp(pf.program, pt, parse_coords(o.tan), cfg)) << "\n";
      } else {
        if (o.cot.empty()) fail(Err::ShapeMismatch, "reverse mode needs --cot");
        std::cout << show_coords(vjp(pf.program, pt, parse_coords(o.cot), cfg)) << "\n";
      }
    }
    return 0;
  }

  if (caudit->parsed()) {
    bool all_pass = true;
    auto cfg = to_check_config(o);
    for (const auto& f : files) {
      auto pf = load(f);
      auto rep = check_derivative(pf.program, cfg);
      std::cout << rep.serialize();
      all_pass = all_pass && rep.pass;
    }
    return all_pass ? 0 : 1;
  }

  if (csize->parsed()) {
    double worst = 0;
    for (const auto& f : files) {
      auto pf = load(f);
      auto src = term_size(pf.program.body);
      auto fwd = term_size(fwd_transform(pf.program.ctx, pf.program.body));
      auto rev = term_size(rev_transform(pf.program.ctx, pf.program.body));
      double fr = double(fwd) / double(src), rr = double(rev) / double(src);
      worst = std::max({worst, fr, rr});
      std::cout << pf.program.id << " src=" << src << " fwd=" << fwd << " rev=" << rev
                << " fwd_ratio=" << fr << " rev_ratio=" << rr << "\n";
    }
    std::cout << "max_ratio=" << worst << "\n";
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ChadError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind == Err::Internal ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
