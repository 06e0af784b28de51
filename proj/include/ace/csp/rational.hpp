#pragma once

#include <gmpxx.h>

#include <string>

#include "ace/errors.hpp"

namespace ace::csp {

// Exact rational with arbitrary-precision integer parts, always in lowest
// terms with a positive denominator (GMP canonical form). Everything the
// solver touches stays exact; no floats anywhere in the evaluation path.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(long num, long den);

    static Rational from_integer_string(const std::string& digits);
    // Exact place-value conversion: "0.25" -> 1/4. Throws on bad input.
    static Rational from_decimal_string(const std::string& text);

    Rational operator+(const Rational& o) const { return Rational(v_ + o.v_); }
    Rational operator-(const Rational& o) const { return Rational(v_ - o.v_); }
    Rational operator*(const Rational& o) const { return Rational(v_ * o.v_); }
    Rational operator/(const Rational& o) const;
    Rational operator-() const { return Rational(-v_); }

    // Integer exponent only; negative exponent inverts (zero base throws).
    Rational pow(long exponent) const;

    bool operator==(const Rational& o) const { return v_ == o.v_; }
    bool operator!=(const Rational& o) const { return v_ != o.v_; }
    bool operator<(const Rational& o) const { return v_ < o.v_; }
    bool operator<=(const Rational& o) const { return v_ <= o.v_; }
    bool operator>(const Rational& o) const { return v_ > o.v_; }
    bool operator>=(const Rational& o) const { return v_ >= o.v_; }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return v_.get_den() == 1; }

    Rational abs() const;

    // "3", "-7/2"; lowest-terms form.
    std::string to_string() const { return v_.get_str(); }
    double to_double() const { return v_.get_d(); }

    // floor(log10(|x|)) for x != 0; throws on zero.
    long floor_log10_abs() const;

    // 10^e as an exact rational (e may be negative).
    static Rational pow10(long e);

private:
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
    mpq_class v_;
};

} // namespace ace::csp
