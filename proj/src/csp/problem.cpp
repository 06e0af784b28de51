#include "ace/csp/problem.hpp"

namespace ace::csp {

ExprPtr make_literal(Rational value, std::string lexeme) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Literal;
    e->value = std::move(value);
    e->lexeme = std::move(lexeme);
    return e;
}

ExprPtr make_variable(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Variable;
    e->var = std::move(name);
    return e;
}

ExprPtr make_binary(char op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Binary;
    e->op = op;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

ExprPtr make_negate(ExprPtr inner) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Negate;
    e->lhs = std::move(inner);
    return e;
}

ExprPtr make_group(ExprPtr inner) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Group;
    e->lhs = std::move(inner);
    return e;
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::Literal:
            return a.value == b.value;
        case Expr::Kind::Variable:
            return a.var == b.var;
        case Expr::Kind::Binary:
            return a.op == b.op && expr_equal(*a.lhs, *b.lhs) && expr_equal(*a.rhs, *b.rhs);
        case Expr::Kind::Negate:
        case Expr::Kind::Group:
            return expr_equal(*a.lhs, *b.lhs);
    }
    return false;
}

bool problems_equal(const CspProblem& a, const CspProblem& b) {
    if (a.query != b.query || a.assignments.size() != b.assignments.size()) return false;
    for (std::size_t i = 0; i < a.assignments.size(); ++i) {
        if (a.assignments[i].variable != b.assignments[i].variable) return false;
        if (!expr_equal(*a.assignments[i].expression, *b.assignments[i].expression))
            return false;
    }
    return true;
}

std::string pretty_print(const Expr& expr) {
    switch (expr.kind) {
        case Expr::Kind::Literal:
            return expr.lexeme.empty() ? expr.value.to_string() : expr.lexeme;
        case Expr::Kind::Variable:
            return expr.var;
        case Expr::Kind::Binary:
            if (expr.op == '^') return pretty_print(*expr.lhs) + "^" + pretty_print(*expr.rhs);
            return pretty_print(*expr.lhs) + " " + std::string(1, expr.op) + " " +
                   pretty_print(*expr.rhs);
        case Expr::Kind::Negate:
            return "-" + pretty_print(*expr.lhs);
        case Expr::Kind::Group:
            return "(" + pretty_print(*expr.lhs) + ")";
    }
    return "";
}

std::string pretty_print(const CspProblem& problem) {
    std::string out;
    for (const auto& a : problem.assignments) {
        if (!out.empty()) out += ", ";
        out += a.variable + " = " + pretty_print(*a.expression);
    }
    out += ". What is " + problem.query + "?";
    return out;
}

} // namespace ace::csp
