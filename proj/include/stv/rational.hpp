#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace stv {

using BigInt = boost::multiprecision::cpp_int;

enum class Rounding {
    exact,
    floor_integer,
    floor_6dp,
};

const char* rounding_name(Rounding r);

/// Exact signed rational, always kept in lowest terms with a positive
/// denominator. Negative values are first-class: NSW-style surplus
/// fractions can legitimately go below zero and the engine must carry
/// them through tallies and transfer values unchanged.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}
    Rational(BigInt n, BigInt d);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return den_ == 1; }

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);  // throws std::domain_error on /0

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    /// Greatest integer <= *this.
    BigInt floor() const;

    /// Legislated truncation: identity, floor to an integer, or floor to
    /// a multiple of 10^-6. Floors toward -infinity in all modes.
    Rational round_down(Rounding mode) const;

    /// "n" for integers, "n/d" otherwise. Never a decimal rendering.
    std::string str() const;

    /// Parses the str() form. Throws std::invalid_argument on bad syntax
    /// or zero denominator.
    static Rational parse(const std::string& text);

  private:
    void normalize();

    BigInt num_;
    BigInt den_;
};

}  // namespace stv
