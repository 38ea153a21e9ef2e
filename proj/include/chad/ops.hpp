#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chad/syntax.hpp"

namespace chad {

using Vec = std::vector<double>;

// Signature of a primitive operation op in Op_{n1,...,nk}^m at concrete
// argument widths. Operations are width-polymorphic families (e.g. (+) exists
// at every n); `result_width` instantiates one member.
struct OpSig {
  std::string name;
  std::vector<int> arg_widths;
  int result_width = 0;
};

// Semantics of op together with D op and its transpose. jvp receives the
// point and one tangent per argument; vjp receives the point and the result
// cotangent, and produces one cotangent per argument.
struct PrimImpl {
  std::string name;
  int arity = 0;
  // checks widths, returns the result width
  std::function<std::optional<int>(const std::vector<int>&)> result_width;
  std::function<Vec(const std::vector<Vec>&)> eval;
  std::function<Vec(const std::vector<Vec>&, const std::vector<Vec>&)> jvp;
  std::function<std::vector<Vec>(const std::vector<Vec>&, const Vec&)> vjp;
};

const PrimImpl* find_prim(const std::string& name);
std::vector<std::string> prim_names();

Vec prim_eval(const std::string& op, const std::vector<Vec>& args);
Vec prim_jvp(const std::string& op, const std::vector<Vec>& args, const std::vector<Vec>& tangents);
std::vector<Vec> prim_vjp(const std::string& op, const std::vector<Vec>& args, const Vec& cot);

// Instantiated signature for concrete argument widths; errors on mismatch.
OpSig op_sig(const std::string& name, const std::vector<int>& arg_widths);

}  // namespace chad
