#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>

#include "cbdt/error.hpp"

namespace cbdt {

/// Exact rational number on int64 numerator/denominator.
///
/// Always stored reduced with a positive denominator. Intermediate products
/// run in 128-bit arithmetic; a result that does not fit int64 after
/// reduction throws Error rather than wrapping.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(long long n) : num_(n), den_(1) {} // NOLINT: implicit by design
    Rational(long long n, long long d) { assign(n, d); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// Accepts "3", "-3", "3/4", "2.5".
    static Rational parse(std::string_view text);

    /// Exact conversion of a finite double (every finite double is a dyadic
    /// rational). Throws if the reduced form does not fit int64.
    static Rational from_double(double value);

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        using I = __int128;
        return make(I(a.num_) * b.den_ + I(b.num_) * a.den_, I(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        using I = __int128;
        return make(I(a.num_) * b.den_ - I(b.num_) * a.den_, I(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        using I = __int128;
        return make(I(a.num_) * b.num_, I(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw Error("rational division by zero");
        using I = __int128;
        return make(I(a.num_) * b.den_, I(a.den_) * b.num_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        using I = __int128;
        return I(a.num_) * b.den_ < I(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

private:
    long long num_ = 0;
    long long den_ = 1;

    void assign(long long n, long long d) {
        if (d == 0) throw Error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        const long long g = std::gcd(n < 0 ? -n : n, d);
        num_ = g ? n / g : 0;
        den_ = g ? d / g : 1;
    }

    static Rational make(__int128 n, __int128 d) {
        if (d == 0) throw Error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b) { const __int128 t = a % b; a = b; b = t; }
        if (a != 0) { n /= a; d /= a; }
        constexpr __int128 lo = -__int128(0x7fffffffffffffffLL) - 1;
        constexpr __int128 hi = __int128(0x7fffffffffffffffLL);
        if (n < lo || n > hi || d > hi)
            throw Error("rational overflow: value does not fit 64-bit num/den");
        Rational r;
        r.num_ = static_cast<long long>(n);
        r.den_ = static_cast<long long>(d);
        return r;
    }
};

inline Rational Rational::parse(std::string_view text) {
    const auto bad = [&] { return Error("cannot parse rational from '" + std::string(text) + "'"); };
    if (text.empty()) throw bad();
    std::string s(text);
    const auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            std::size_t ppos = 0, qpos = 0;
            const long long p = std::stoll(s.substr(0, slash), &ppos);
            const long long q = std::stoll(s.substr(slash + 1), &qpos);
            if (ppos != slash || qpos != s.size() - slash - 1) throw bad();
            return Rational(p, q);
        }
        const auto dot = s.find('.');
        if (dot == std::string::npos) {
            std::size_t pos = 0;
            const long long v = std::stoll(s, &pos);
            if (pos != s.size()) throw bad();
            return Rational(v);
        }
        const std::string ip = s.substr(0, dot);
        const std::string fp = s.substr(dot + 1);
        if (fp.empty() || fp.size() > 18) throw bad();
        std::size_t ipos = 0, fpos = 0;
        const long long whole = ip.empty() || ip == "-" ? 0 : std::stoll(ip, &ipos);
        const long long frac = std::stoll(fp, &fpos);
        if ((!ip.empty() && ip != "-" && ipos != ip.size()) || fpos != fp.size() || frac < 0 ||
            whole == std::numeric_limits<long long>::min())
            throw bad();
        long long scale = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
        const bool neg = !ip.empty() && ip[0] == '-';
        const Rational r = Rational(whole < 0 ? -whole : whole) + Rational(frac, scale);
        return neg ? -r : r;
    } catch (const std::invalid_argument&) {
        throw bad();
    } catch (const std::out_of_range&) {
        throw bad();
    }
}

inline Rational Rational::from_double(double value) {
    if (value != value || value - value != 0) throw Error("rational from non-finite double");
    if (value >= 9.0e18 || value <= -9.0e18)
        throw Error("rational from double: magnitude does not fit int64");
    if (value == static_cast<long long>(value)) return Rational(static_cast<long long>(value));
    // Scale the mantissa out by doubling; a finite double has at most 52
    // fractional bits, but int64 limits how far we can go.
    double v = value;
    long long den = 1;
    for (int i = 0; i < 62 && v != static_cast<long long>(v); ++i) {
        v *= 2;
        den <<= 1;
    }
    if (v != static_cast<long long>(v))
        throw Error("rational from double: value needs more than 64 bits");
    return Rational(static_cast<long long>(v), den);
}

} // namespace cbdt
