#include "ace/csp/rational.hpp"

#include <cctype>

namespace ace::csp {

Rational::Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    v_.canonicalize();
}

Rational Rational::from_integer_string(const std::string& digits) {
    if (digits.empty()) throw InvariantViolation("empty integer literal");
    return Rational(mpq_class(mpz_class(digits, 10)));
}

Rational Rational::from_decimal_string(const std::string& text) {
    std::string s = text;
    bool negative = false;
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        negative = s[i] == '-';
        ++i;
    }
    std::string int_part, frac_part;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
        int_part.push_back(s[i++]);
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            frac_part.push_back(s[i++]);
    }
    if (i != s.size() || (int_part.empty() && frac_part.empty()))
        throw InvariantViolation("bad decimal literal: " + text);
    mpz_class num(int_part.empty() ? "0" : int_part, 10);
    mpz_class scale = 1;
    for (char c : frac_part) {
        num = num * 10 + (c - '0');
        scale *= 10;
    }
    mpq_class q(num, scale);
    q.canonicalize();
    if (negative) q = -q;
    return Rational(std::move(q));
}

Rational Rational::operator/(const Rational& o) const {
    if (o.v_ == 0) throw DivisionByZero("division by zero");
    return Rational(v_ / o.v_);
}

Rational Rational::pow(long exponent) const {
    if (exponent == 0) return Rational(1);
    bool invert = exponent < 0;
    unsigned long e = invert ? static_cast<unsigned long>(-exponent)
                             : static_cast<unsigned long>(exponent);
    if (invert && v_ == 0)
        throw DivisionByZero("zero raised to a negative exponent");
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), v_.get_num().get_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), v_.get_den().get_mpz_t(), e);
    mpq_class q = invert ? mpq_class(den, num) : mpq_class(num, den);
    q.canonicalize();
    return Rational(std::move(q));
}

Rational Rational::abs() const {
    return v_ < 0 ? Rational(mpq_class(-v_)) : *this;
}

long Rational::floor_log10_abs() const {
    if (v_ == 0) throw InvariantViolation("floor_log10 of zero");
    mpq_class a = v_ < 0 ? mpq_class(-v_) : v_;
    // Digit counts give a two-candidate window; exact compares settle it.
    long dn = static_cast<long>(mpz_sizeinbase(a.get_num().get_mpz_t(), 10));
    long dd = static_cast<long>(mpz_sizeinbase(a.get_den().get_mpz_t(), 10));
    long e = dn - dd;
    auto pow10q = [](long k) {
        mpz_class p;
        mpz_pow_ui(p.get_mpz_t(), mpz_class(10).get_mpz_t(),
                   static_cast<unsigned long>(k < 0 ? -k : k));
        return k < 0 ? mpq_class(1, p) : mpq_class(p);
    };
    while (a < pow10q(e)) --e;
    while (a >= pow10q(e + 1)) ++e;
    return e;
}

Rational Rational::pow10(long e) {
    mpz_class p;
    mpz_pow_ui(p.get_mpz_t(), mpz_class(10).get_mpz_t(),
               static_cast<unsigned long>(e < 0 ? -e : e));
    mpq_class q = e < 0 ? mpq_class(1, p) : mpq_class(p);
    q.canonicalize();
    return Rational(std::move(q));
}

} // namespace ace::csp
