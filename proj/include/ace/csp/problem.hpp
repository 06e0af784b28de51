#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ace/csp/rational.hpp"

namespace ace::csp {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Expression tree over exact rationals.
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' integer)?
//   base   := literal | variable | '(' expr ')' | '-' base
// '^' nodes always carry an integer literal on the right; Group nodes keep
// explicit parentheses so pretty-printing round-trips byte-faithfully.
struct Expr {
    enum class Kind { Literal, Variable, Binary, Negate, Group };
    Kind kind = Kind::Literal;

    Rational value;      // Literal
    std::string lexeme;  // Literal: token as scanned ("0.25" stays "0.25")
    std::string var;     // Variable
    char op = 0;         // Binary: one of + - * / ^
    ExprPtr lhs, rhs;    // Binary children; Negate/Group use lhs
};

ExprPtr make_literal(Rational value, std::string lexeme);
ExprPtr make_variable(std::string name);
ExprPtr make_binary(char op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_negate(ExprPtr inner);
ExprPtr make_group(ExprPtr inner);

bool expr_equal(const Expr& a, const Expr& b);

struct Assignment {
    std::string variable;
    ExprPtr expression;
};

// A GSME-style chain: ordered assignments plus one queried variable.
struct CspProblem {
    std::vector<Assignment> assignments;
    std::string query;
    std::string source_text;
};

bool problems_equal(const CspProblem& a, const CspProblem& b);

// "a = 1, b = 2, c = a + b. What is c?" — ASCII operators, one statement
// per assignment, trailing query. parse(pretty_print(p)) == p structurally.
std::string pretty_print(const CspProblem& problem);
std::string pretty_print(const Expr& expr);

} // namespace ace::csp
