#pragma once

#include "polyham/hamiltonian.hpp"

#include <istream>
#include <map>
#include <string>

namespace polyham::hamiltonian {

using Overrides = std::map<std::string, double>;

// Arithmetic over numbers and named parameters: + − * / ^, parentheses, unary minus,
// and sqrt(·).
double evaluate_expression(const std::string& text, const std::map<std::string, double>& params);

// Grammar (one statement per line, '#' comments):
//   dimension = N
//   mass = EXPR            also defines the parameter M
//   param NAME = EXPR
//   cg_table = PATH
//   term EXPR : FACTOR [* FACTOR ...] [@ ORBITAL]
// Overrides replace the values of declared parameters.
HamiltonianSpec parse_spec(std::istream& in, const std::string& source = "<stream>",
                           const Overrides& overrides = {});
HamiltonianSpec load_spec(const std::string& path, const Overrides& overrides = {});

// harmonic | pair:EVEN,ODD | per-v:FILE (lines "v lambda [scale]")
BasisSpec parse_basis(const std::string& text, int N, double scale, int nu_max, int v_max);

}  // namespace polyham::hamiltonian
