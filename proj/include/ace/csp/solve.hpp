#pragma once

#include <map>
#include <string>

#include "ace/csp/problem.hpp"

namespace ace::csp {

// Evaluates a single expression against bound variable values.
Rational evaluate(const Expr& expr, const std::map<std::string, Rational>& env);

// Topologically orders the variable dependency graph, evaluates every
// assignment exactly, and returns the query variable's value. Throws
// CyclicDependency, UndefinedVariable, DivisionByZero, or Underdetermined
// (query has no assignment).
Rational solve_csp(const CspProblem& problem);

// True when the text both parses and solves; used as the validity filter
// for mutated math problems.
bool is_valid_csp(const std::string& text, std::string* error_out = nullptr);

} // namespace ace::csp
