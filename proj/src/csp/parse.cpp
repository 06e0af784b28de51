#include "ace/csp/parse.hpp"

#include <cctype>
#include <set>

#include "ace/util/strings.hpp"

namespace ace::csp {

namespace {

struct Token {
    enum class Kind { Number, Ident, Op, LParen, RParen, Equals, Separator };
    Kind kind;
    std::string text; // Number lexeme or Ident name
    char op = 0;      // Op: + - * / ^
    std::size_t pos = 0;
};

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = s.size();
    auto push_op = [&](char op, std::size_t pos) {
        out.push_back({Token::Kind::Op, std::string(1, op), op, pos});
    };
    while (i < n) {
        char c = s[i];
        unsigned char uc = static_cast<unsigned char>(c);
        if (std::isspace(uc)) {
            if (c == '\n') out.push_back({Token::Kind::Separator, "\n", 0, i});
            ++i;
            continue;
        }
        // unicode minus / times / divide glyphs
        if (uc == 0xE2 && i + 2 < n && static_cast<unsigned char>(s[i + 1]) == 0x88 &&
            static_cast<unsigned char>(s[i + 2]) == 0x92) {
            push_op('-', i);
            i += 3;
            continue;
        }
        if (uc == 0xC3 && i + 1 < n) {
            unsigned char b = static_cast<unsigned char>(s[i + 1]);
            if (b == 0x97) { push_op('*', i); i += 2; continue; }
            if (b == 0xB7) { push_op('/', i); i += 2; continue; }
        }
        if (std::isdigit(uc)) {
            std::size_t b = i;
            while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (i + 1 < n && s[i] == '.' && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
                ++i;
                while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            }
            out.push_back({Token::Kind::Number, s.substr(b, i - b), 0, b});
            continue;
        }
        if (is_ident_start(c)) {
            std::size_t b = i;
            while (i < n && is_ident_char(s[i])) ++i;
            out.push_back({Token::Kind::Ident, s.substr(b, i - b), 0, b});
            continue;
        }
        switch (c) {
            case ',': case ';': case '.': case '?':
                out.push_back({Token::Kind::Separator, std::string(1, c), 0, i});
                ++i;
                continue;
            case '=': out.push_back({Token::Kind::Equals, "=", 0, i}); ++i; continue;
            case '(': out.push_back({Token::Kind::LParen, "(", 0, i}); ++i; continue;
            case ')': out.push_back({Token::Kind::RParen, ")", 0, i}); ++i; continue;
            case '+': case '-': case '*': case '/': case '^':
                push_op(c, i);
                ++i;
                continue;
            default:
                throw ParseError("unknown token '" + std::string(1, c) + "'", i);
        }
    }
    return out;
}

// Recursive-descent over one statement's token span.
class ExprParser {
public:
    ExprParser(const std::vector<Token>& toks, std::size_t begin, std::size_t end)
        : toks_(toks), i_(begin), end_(end) {}

    ExprPtr parse_full() {
        ExprPtr e = parse_expr();
        if (i_ != end_)
            throw ParseError("unknown token '" + toks_[i_].text + "'", toks_[i_].pos);
        return e;
    }

private:
    const std::vector<Token>& toks_;
    std::size_t i_, end_;

    bool at_end() const { return i_ >= end_; }
    const Token& peek() const {
        if (at_end()) throw ParseError("unexpected end of expression", last_pos());
        return toks_[i_];
    }
    std::size_t last_pos() const { return end_ > 0 ? toks_[end_ - 1].pos : 0; }

    bool match_op(char op) {
        if (!at_end() && toks_[i_].kind == Token::Kind::Op && toks_[i_].op == op) {
            ++i_;
            return true;
        }
        return false;
    }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        for (;;) {
            if (match_op('+')) lhs = make_binary('+', lhs, parse_term());
            else if (match_op('-')) lhs = make_binary('-', lhs, parse_term());
            else return lhs;
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_factor();
        for (;;) {
            if (match_op('*')) lhs = make_binary('*', lhs, parse_factor());
            else if (match_op('/')) lhs = make_binary('/', lhs, parse_factor());
            else return lhs;
        }
    }

    ExprPtr parse_factor() {
        ExprPtr base = parse_base();
        if (match_op('^')) {
            // exponent must be an integer literal, optionally negated
            bool neg = match_op('-');
            if (at_end() || peek().kind != Token::Kind::Number)
                throw ParseError("non-integer exponent", at_end() ? last_pos() : peek().pos);
            const Token& t = peek();
            if (t.text.find('.') != std::string::npos)
                throw ParseError("non-integer exponent", t.pos);
            ++i_;
            std::string lex = (neg ? "-" : "") + t.text;
            Rational v = Rational::from_integer_string(lex);
            return make_binary('^', base, make_literal(std::move(v), std::move(lex)));
        }
        return base;
    }

    ExprPtr parse_base() {
        const Token& t = peek();
        switch (t.kind) {
            case Token::Kind::Number: {
                ++i_;
                return make_literal(Rational::from_decimal_string(t.text), t.text);
            }
            case Token::Kind::Ident: {
                ++i_;
                return make_variable(t.text);
            }
            case Token::Kind::LParen: {
                ++i_;
                ExprPtr inner = parse_expr();
                if (at_end() || peek().kind != Token::Kind::RParen)
                    throw ParseError("missing closing parenthesis",
                                     at_end() ? last_pos() : peek().pos);
                ++i_;
                return make_group(inner);
            }
            case Token::Kind::Op:
                if (t.op == '-') {
                    ++i_;
                    return make_negate(parse_base());
                }
                [[fallthrough]];
            default:
                throw ParseError("unknown token '" + t.text + "'", t.pos);
        }
    }
};

} // namespace

CspProblem parse_csp(const std::string& text) {
    std::vector<Token> toks = tokenize(text);

    // Statement spans between separators.
    std::vector<std::pair<std::size_t, std::size_t>> statements;
    std::size_t b = 0;
    for (std::size_t i = 0; i <= toks.size(); ++i) {
        if (i == toks.size() || toks[i].kind == Token::Kind::Separator) {
            if (i > b) statements.emplace_back(b, i);
            b = i + 1;
        }
    }
    if (statements.empty()) throw ParseError("missing query", text.size());

    CspProblem problem;
    problem.source_text = text;
    std::set<std::string> assigned;
    bool have_query = false;

    for (const auto& [sb, se] : statements) {
        if (have_query)
            throw ParseError("unknown token '" + toks[sb].text + "' after query", toks[sb].pos);
        const Token& first = toks[sb];
        // trailing query: "what is <var>"
        if (first.kind == Token::Kind::Ident && util::iequals(first.text, "what")) {
            if (se - sb != 3 || toks[sb + 1].kind != Token::Kind::Ident ||
                !util::iequals(toks[sb + 1].text, "is") ||
                toks[sb + 2].kind != Token::Kind::Ident)
                throw ParseError("malformed query", first.pos);
            problem.query = toks[sb + 2].text;
            have_query = true;
            continue;
        }
        // assignment: <var> = <expr>
        if (first.kind != Token::Kind::Ident || se - sb < 3 ||
            toks[sb + 1].kind != Token::Kind::Equals)
            throw ParseError("expected assignment '<var> = <expr>'", first.pos);
        if (!assigned.insert(first.text).second)
            throw ParseError("double assignment of '" + first.text + "'", first.pos);
        ExprParser ep(toks, sb + 2, se);
        problem.assignments.push_back({first.text, ep.parse_full()});
    }

    if (!have_query) throw ParseError("missing query", text.size());
    return problem;
}

} // namespace ace::csp
