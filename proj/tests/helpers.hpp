#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "chad/deriv_check.hpp"
#include "chad/parser.hpp"
#include "chad/printer.hpp"

namespace chad::testing {

inline ProgramFile program(const std::string& text) {
  auto pf = parse_program(text, "test");
  pf.program.result = type_check({}, pf.program.ctx, pf.program.body);
  return pf;
}

inline Program prog(const std::string& text) { return program(text).program; }

// independent central-difference oracle over a scalar function
inline double fd1(const std::function<double(double)>& f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

inline bool close(double a, double b, double tol = 1e-9) { return std::fabs(a - b) <= tol; }

inline bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b));
}

inline bool close_all(const Vec& a, const Vec& b, double tol = 1e-9) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!close(a[i], b[i], tol)) return false;
  return true;
}

// the non-empty list type of the worked examples
inline TypePtr nlist() {
  return ty_mu("a", ty_variant({{"One", ty_real(1)}, {"Cons", ty_prod(ty_real(1), ty_var("a"))}}));
}

inline ValuePtr make_list(const Vec& xs) {
  auto ty = nlist();
  ValuePtr acc = v_roll(ty, v_inj("One", v_real({xs.back()})));
  for (std::size_t i = xs.size() - 1; i-- > 0;)
    acc = v_roll(ty, v_inj("Cons", v_pair(v_real({xs[i]}), acc)));
  return acc;
}

}  // namespace chad::testing
