#include "stv/rational.hpp"

#include <boost/integer/common_factor.hpp>

#include <utility>

namespace stv {

const char* rounding_name(Rounding r) {
    switch (r) {
        case Rounding::exact: return "exact";
        case Rounding::floor_integer: return "floor_integer";
        case Rounding::floor_6dp: return "floor_6dp";
    }
    return "?";
}

Rational::Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    num_ = num_ * o.den_ - o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    num_ *= o.num_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    num_ *= o.den_;
    den_ *= o.num_;
    if (den_ == 0) throw std::domain_error("rational division by zero");
    normalize();
    return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    BigInt lhs = a.num_ * b.den_;
    BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

BigInt Rational::floor() const {
    BigInt q = num_ / den_;
    if (num_ < 0 && q * den_ != num_) q -= 1;
    return q;
}

Rational Rational::round_down(Rounding mode) const {
    switch (mode) {
        case Rounding::exact:
            return *this;
        case Rounding::floor_integer:
            return Rational(floor());
        case Rounding::floor_6dp: {
            static const BigInt kScale("1000000");
            Rational scaled(num_ * kScale, den_);
            return Rational(scaled.floor(), kScale);
        }
    }
    throw std::logic_error("unknown rounding mode");
}

std::string Rational::str() const {
    std::string s = num_.str();
    if (den_ != 1) {
        s += '/';
        s += den_.str();
    }
    return s;
}

Rational Rational::parse(const std::string& text) {
    auto bad = [&] { return std::invalid_argument("bad rational: '" + text + "'"); };
    if (text.empty()) throw bad();
    auto slash = text.find('/');
    auto check_int = [&](const std::string& part, bool allow_sign) {
        if (part.empty()) throw bad();
        std::size_t i = 0;
        if (allow_sign && (part[0] == '-' || part[0] == '+')) i = 1;
        if (i == part.size()) throw bad();
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9') throw bad();
    };
    if (slash == std::string::npos) {
        check_int(text, true);
        return Rational(BigInt(text));
    }
    std::string n = text.substr(0, slash);
    std::string d = text.substr(slash + 1);
    check_int(n, true);
    check_int(d, false);
    BigInt den(d);
    if (den == 0) throw bad();
    return Rational(BigInt(n), den);
}

}  // namespace stv
