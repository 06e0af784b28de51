#include "ace/csp/solve.hpp"

#include <set>
#include <vector>

#include "ace/csp/parse.hpp"

namespace ace::csp {

namespace {

void collect_vars(const Expr& e, std::vector<std::string>& out, std::set<std::string>& seen) {
    switch (e.kind) {
        case Expr::Kind::Variable:
            if (seen.insert(e.var).second) out.push_back(e.var);
            return;
        case Expr::Kind::Binary:
            collect_vars(*e.lhs, out, seen);
            collect_vars(*e.rhs, out, seen);
            return;
        case Expr::Kind::Negate:
        case Expr::Kind::Group:
            collect_vars(*e.lhs, out, seen);
            return;
        case Expr::Kind::Literal:
            return;
    }
}

} // namespace

Rational evaluate(const Expr& expr, const std::map<std::string, Rational>& env) {
    switch (expr.kind) {
        case Expr::Kind::Literal:
            return expr.value;
        case Expr::Kind::Variable: {
            auto it = env.find(expr.var);
            if (it == env.end())
                throw UndefinedVariable("undefined variable '" + expr.var + "'");
            return it->second;
        }
        case Expr::Kind::Binary: {
            if (expr.op == '^') {
                Rational base = evaluate(*expr.lhs, env);
                // parser guarantees an integer literal exponent
                long e = std::stol(expr.rhs->lexeme);
                return base.pow(e);
            }
            Rational a = evaluate(*expr.lhs, env);
            Rational b = evaluate(*expr.rhs, env);
            switch (expr.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
            }
            throw InvariantViolation("unknown operator");
        }
        case Expr::Kind::Negate:
            return -evaluate(*expr.lhs, env);
        case Expr::Kind::Group:
            return evaluate(*expr.lhs, env);
    }
    throw InvariantViolation("unknown expression kind");
}

Rational solve_csp(const CspProblem& problem) {
    const auto& assigns = problem.assignments;
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < assigns.size(); ++i) index[assigns[i].variable] = i;

    // Dependency edges; any reference to an unassigned variable is an error
    // regardless of whether the query needs it (every expression is evaluated).
    std::vector<std::vector<std::size_t>> deps(assigns.size());
    for (std::size_t i = 0; i < assigns.size(); ++i) {
        std::vector<std::string> vars;
        std::set<std::string> seen;
        collect_vars(*assigns[i].expression, vars, seen);
        for (const auto& v : vars) {
            auto it = index.find(v);
            if (it == index.end())
                throw UndefinedVariable("undefined variable '" + v + "'");
            deps[i].push_back(it->second);
        }
    }

    // Kahn's algorithm; the ready set is ordered by assignment index so the
    // evaluation order is deterministic under statement reordering.
    std::vector<std::size_t> pending(assigns.size());
    std::vector<std::vector<std::size_t>> dependents(assigns.size());
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < assigns.size(); ++i) {
        pending[i] = deps[i].size();
        for (std::size_t d : deps[i]) dependents[d].push_back(i);
        if (deps[i].empty()) ready.insert(i);
    }

    std::map<std::string, Rational> env;
    std::size_t resolved = 0;
    while (!ready.empty()) {
        std::size_t i = *ready.begin();
        ready.erase(ready.begin());
        env[assigns[i].variable] = evaluate(*assigns[i].expression, env);
        ++resolved;
        for (std::size_t j : dependents[i])
            if (--pending[j] == 0) ready.insert(j);
    }
    if (resolved != assigns.size())
        throw CyclicDependency("cyclic variable dependencies");

    auto it = env.find(problem.query);
    if (it == env.end())
        throw Underdetermined("query variable '" + problem.query + "' is not assigned");
    return it->second;
}

bool is_valid_csp(const std::string& text, std::string* error_out) {
    try {
        solve_csp(parse_csp(text));
        return true;
    } catch (const Error& e) {
        if (error_out) *error_out = e.what();
        return false;
    }
}

} // namespace ace::csp
