#pragma once

// Real-valued special functions: digamma/polygamma on the positive axis,
// polylogarithms Li_w(x) and the Nielsen polylogarithm S_{0,2}(x) inside
// the unit interval.  Everything here is plain binary64.

#include <cmath>
#include <cstdint>

#include "mercutio/numeric.hpp"

namespace mercutio {

inline constexpr double kPi         = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

namespace detail {

// B_2, B_4, ..., B_20
inline constexpr double kBernoulli2k[10] = {
    1.0 / 6.0,       -1.0 / 30.0,      1.0 / 42.0,
    -1.0 / 30.0,     5.0 / 66.0,       -691.0 / 2730.0,
    7.0 / 6.0,       -3617.0 / 510.0,  43867.0 / 798.0,
    -174611.0 / 330.0,
};

inline double factorial_d(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace detail

// psi(x), x > 0: shift upward until the Stirling-type tail applies.
inline double digamma(double x) {
    if (!(x > 0.0)) throw domain_error("digamma: argument must be positive");
    double acc = 0.0;
    while (x < 20.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv  = 1.0 / x;
    const double inv2 = inv * inv;
    double res = std::log(x) - 0.5 * inv;
    double pw  = inv2;
    for (int k = 1; k <= 10; ++k) {
        res -= detail::kBernoulli2k[k - 1] / (2.0 * k) * pw;
        pw *= inv2;
    }
    return acc + res;
}

// psi^(m)(x), x > 0, m >= 0.
inline double polygamma(int m, double x) {
    if (m < 0) throw domain_error("polygamma: order must be non-negative");
    if (m == 0) return digamma(x);
    if (!(x > 0.0)) throw domain_error("polygamma: argument must be positive");

    const double xmin = 20.0 + 2.0 * m;
    const double mfac = detail::factorial_d(m);
    // psi^(m)(x) = psi^(m)(x+1) + (-1)^(m+1) m! / x^(m+1)
    const double shift_sign = (m % 2 == 0) ? -1.0 : 1.0;
    double acc = 0.0;
    while (x < xmin) {
        acc += shift_sign * mfac / std::pow(x, m + 1);
        x += 1.0;
    }

    const double inv  = 1.0 / x;
    const double inv2 = inv * inv;
    double res = detail::factorial_d(m - 1) * std::pow(inv, m)
               + 0.5 * mfac * std::pow(inv, m + 1);
    double pw = std::pow(inv, m + 2);
    for (int k = 1; k <= 10; ++k) {
        double rf = 1.0; // (2k+m-1)! / (2k)!
        for (int j = 2 * k + 1; j <= 2 * k + m - 1; ++j) rf *= j;
        res += detail::kBernoulli2k[k - 1] * rf * pw;
        pw *= inv2;
    }
    const double tail_sign = (m % 2 == 0) ? -1.0 : 1.0;
    return acc + tail_sign * res;
}

// Li_w(x) = sum_{k>=1} x^k / k^w for |x| < 1, w >= 1.
inline double polylog_num(int weight, double x) {
    if (weight < 1) throw domain_error("polylog: weight must be >= 1");
    if (!(std::fabs(x) < 1.0)) throw domain_error("polylog: |x| must be < 1");
    if (x == 0.0) return 0.0;
    const double ax   = std::fabs(x);
    const double tailq = ax / (1.0 - ax);
    double sum = 0.0;
    double xp  = 1.0;
    for (long k = 1; k < 1000000; ++k) {
        xp *= x;
        const double term = xp / std::pow(static_cast<double>(k), weight);
        sum += term;
        if (std::fabs(term) * tailq <= 1e-14 * std::fabs(sum)) break;
    }
    return sum;
}

// S_{0,2}(x) = sum_{n>=2} H_{n-1} x^n / n^2 for |x| < 1,
// the weight-3 Nielsen polylogarithm (1/2) Int_0^x ln^2(1-t)/t dt.
inline double nielsen_s02_num(double x) {
    if (!(std::fabs(x) < 1.0)) throw domain_error("nielsen_s02: |x| must be < 1");
    if (x == 0.0) return 0.0;
    const double ax = std::fabs(x);
    double sum = 0.0;
    double h   = 1.0; // H_1
    double xp  = x;   // x^1
    for (long n = 2; n < 2000000; ++n) {
        xp *= x;
        const double term = h * xp / (static_cast<double>(n) * n);
        sum += term;
        // ratio of consecutive terms is below ax*(1 + 1/n) once H >= 1
        const double q = ax * (1.0 + 1.0 / n);
        if (q < 1.0 && std::fabs(term) * q / (1.0 - q) <= 1e-12 * std::fabs(sum))
            break;
        h += 1.0 / n;
    }
    return sum;
}

} // namespace mercutio
