#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace mdist {

// Small exact rational for counting statistics (weights count/n, thresholds
// k/(3m)). Values stay far below overflow for desk-sized elections.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Fraction() = default;
    constexpr Fraction(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
        if (den == 0) throw std::domain_error("zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
    }

    Fraction reduced() const {
        const auto g = std::gcd(num < 0 ? -num : num, den);
        return g > 1 ? Fraction(num / g, den / g) : *this;
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend constexpr bool operator==(const Fraction& a, const Fraction& b) {
        return a.num * b.den == b.num * a.den;
    }
    friend constexpr auto operator<=>(const Fraction& a, const Fraction& b) {
        return a.num * b.den <=> b.num * a.den;
    }
    friend Fraction operator+(const Fraction& a, const Fraction& b) {
        return Fraction(a.num * b.den + b.num * a.den, a.den * b.den).reduced();
    }
    friend std::ostream& operator<<(std::ostream& os, const Fraction& f) {
        return os << f.num << '/' << f.den;
    }
};

// Closest fraction with denominator at most max_den (continued fractions).
// Decimal parameters such as 0.35 come back exact.
inline Fraction approximate(double x, std::int64_t max_den = 1'000'000) {
    if (!std::isfinite(x)) throw std::domain_error("cannot approximate a non-finite value");
    const bool negative = x < 0;
    double r = negative ? -x : x;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int iter = 0; iter < 64; ++iter) {
        const double fl = std::floor(r);
        const auto a = static_cast<std::int64_t>(fl);
        const std::int64_t q2 = q0 + a * q1;
        if (q2 > max_den) break;
        const std::int64_t p2 = p0 + a * p1;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double frac = r - fl;
        if (frac < 1e-12) break;
        r = 1.0 / frac;
    }
    return Fraction(negative ? -p1 : p1, q1).reduced();
}

}  // namespace mdist
