#pragma once

#include <string>

#include "chad/syntax.hpp"

namespace chad {

// Deterministic pretty-printers. The pretty form is the surface-ish notation
// used in golden files and --emit pretty; the sexpr form is fully
// parenthesized and annotation-complete.
std::string print_type(const TypePtr& t);
std::string print_term(const TermPtr& t);
std::string print_term_sexpr(const TermPtr& t);

}  // namespace chad
