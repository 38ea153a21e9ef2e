#pragma once

#include <map>
#include <string>

#include "chad/deriv_check.hpp"

namespace chad {

// A parsed .chad file: named data-type aliases, an argument context and the
// body term. Constructor names of declared aliases are registered so surface
// programs can write `Cons (x, xs)` without annotations; rolls for mu-typed
// aliases are inserted automatically.
struct ProgramFile {
  std::string path;
  std::map<std::string, TypePtr> aliases;
  Program program;  // ctx + body; program.result is filled by type checking
};

ProgramFile parse_program(const std::string& text, const std::string& path = "<input>");

// Type-directed value literal parser ("3.5", "[2,3,4]", "(1, 2)", "Cons (...)").
// Lists written with brackets elaborate against list-shaped mu types.
ValuePtr parse_value(const ProgramFile& pf, const TypePtr& ty, const std::string& text);

// A comma-separated value per context variable.
std::vector<ValuePtr> parse_point(const ProgramFile& pf, const std::string& text);

// Plain vector of reals: "1" or "1,2,3" or "[1,2,3]".
Vec parse_coords(const std::string& text);

}  // namespace chad
