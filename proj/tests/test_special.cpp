#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <mercutio/special.hpp>

using namespace mercutio;

// Reference values computed with an independent multiprecision library,
// frozen here to 20 significant digits.
static const double kZeta[17] = {
    0, 0,
    1.6449340668482264365,  // zeta(2)
    1.2020569031595942854,
    1.0823232337111381915,
    1.0369277551433699263,
    1.0173430619844491397,
    1.0083492773819228268,
    1.0040773561979443394,
    1.0020083928260822144,
    1.0009945751278180853,  // zeta(10)
    1.0004941886041194646,
    1.0002460865533080483,
    1.0001227133475784891,
    1.0000612481350587048,
    1.0000305882363070205,
    1.0000152822594086519,  // zeta(16)
};

static const double kLn2 = 0.69314718055994530942;

TEST_CASE("digamma at classic points") {
    CHECK(digamma(1.0) == Catch::Approx(-kEulerGamma).epsilon(1e-14));
    CHECK(digamma(2.0) == Catch::Approx(1.0 - kEulerGamma).epsilon(1e-14));
    CHECK(digamma(0.5) == Catch::Approx(-kEulerGamma - 2.0 * kLn2).epsilon(1e-14));
    // psi(1/2) to 20 digits
    CHECK(digamma(0.5) == Catch::Approx(-1.9635100260214234794).epsilon(1e-14));
}

TEST_CASE("digamma recurrence psi(x+1) = psi(x) + 1/x") {
    for (double x : {0.1, 0.37, 0.5, 1.0, 2.25, 7.5, 19.9, 20.1, 123.0}) {
        CHECK(digamma(x + 1.0) - digamma(x) == Catch::Approx(1.0 / x).epsilon(1e-12));
    }
}

TEST_CASE("digamma asymptotic region agrees with recurrence descent") {
    // compute psi(30.3) directly and via psi(5.3) + sum of reciprocals
    double direct = digamma(30.3);
    double low = digamma(5.3);
    for (double t = 5.3; t < 30.2; t += 1.0) low += 1.0 / t;
    CHECK(direct == Catch::Approx(low).epsilon(1e-13));
}

TEST_CASE("polygamma at 1 hits zeta values") {
    // psi^(m)(1) = (-1)^(m+1) m! zeta(m+1)
    double mfac = 1.0;
    for (int m = 1; m <= 9; ++m) {
        mfac *= m;
        double expect = ((m % 2 == 1) ? 1.0 : -1.0) * mfac * kZeta[m + 1];
        CHECK(polygamma(m, 1.0) == Catch::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("polygamma at 1/2") {
    // psi^(m)(1/2) = (-1)^(m+1) m! (2^(m+1)-1) zeta(m+1)
    CHECK(polygamma(1, 0.5) == Catch::Approx(kPi * kPi / 2.0).epsilon(1e-13));
    CHECK(polygamma(2, 0.5) == Catch::Approx(-14.0 * kZeta[3]).epsilon(1e-13));
    CHECK(polygamma(1, 0.5) == Catch::Approx(4.9348022005446793094).epsilon(1e-13));
    CHECK(polygamma(2, 0.5) == Catch::Approx(-16.828796644234319996).epsilon(1e-13));
}

TEST_CASE("polygamma recurrence") {
    // psi^(m)(x+1) = psi^(m)(x) + (-1)^m m! / x^(m+1)
    for (int m = 1; m <= 6; ++m) {
        double mfac = 1.0;
        for (int i = 2; i <= m; ++i) mfac *= i;
        for (double x : {0.2, 0.8, 1.5, 4.0, 25.0}) {
            double shift = mfac / std::pow(x, m + 1);
            double lhs = polygamma(m, x + 1.0);
            double rhs = polygamma(m, x) + ((m % 2 == 0) ? 1.0 : -1.0) * shift;
            // the difference cancels two values of size ~shift, so scale
            // the allowance to the operands, not the result
            double tol = 1e-12 * shift + 1e-11 * std::fabs(lhs);
            CHECK(lhs - rhs == Catch::Approx(0.0).margin(tol));
        }
    }
}

TEST_CASE("digamma and polygamma domain errors") {
    CHECK_THROWS_AS(digamma(0.0), domain_error);
    CHECK_THROWS_AS(digamma(-3.5), domain_error);
    CHECK_THROWS_AS(polygamma(2, -1.0), domain_error);
    CHECK_THROWS_AS(polygamma(-1, 1.0), domain_error);
}

TEST_CASE("polylog weight 1 is -ln(1-x)") {
    for (double x : {-0.9, -0.5, -0.1, 0.1, 0.5, 0.9}) {
        CHECK(polylog_num(1, x) == Catch::Approx(-std::log(1.0 - x)).epsilon(1e-13));
    }
}

TEST_CASE("polylog closed forms at 1/2") {
    CHECK(polylog_num(2, 0.5)
          == Catch::Approx(kPi * kPi / 12.0 - kLn2 * kLn2 / 2.0).epsilon(1e-13));
    CHECK(polylog_num(3, 0.5)
          == Catch::Approx(7.0 * kZeta[3] / 8.0 - kPi * kPi * kLn2 / 12.0
                           + kLn2 * kLn2 * kLn2 / 6.0).epsilon(1e-13));
    CHECK(polylog_num(4, 0.5) == Catch::Approx(0.51747906167389938633).epsilon(1e-13));
}

TEST_CASE("dilogarithm reflection") {
    for (double x : {0.2, 0.3, 0.65}) {
        double lhs = polylog_num(2, x) + polylog_num(2, 1.0 - x);
        double rhs = kPi * kPi / 6.0 - std::log(x) * std::log(1.0 - x);
        CHECK(lhs == Catch::Approx(rhs).epsilon(1e-13));
    }
}

TEST_CASE("polylog duplication") {
    // Li_w(x) + Li_w(-x) = 2^(1-w) Li_w(x^2)
    for (int w = 2; w <= 5; ++w) {
        for (double x : {0.4, 0.7}) {
            double lhs = polylog_num(w, x) + polylog_num(w, -x);
            double rhs = std::pow(2.0, 1 - w) * polylog_num(w, x * x);
            CHECK(lhs == Catch::Approx(rhs).margin(1e-14).epsilon(1e-12));
        }
    }
}

TEST_CASE("polylog trivia and domain") {
    CHECK(polylog_num(3, 0.0) == 0.0);
    CHECK_THROWS_AS(polylog_num(2, 1.0), domain_error);
    CHECK_THROWS_AS(polylog_num(2, -1.0), domain_error);
    CHECK_THROWS_AS(polylog_num(0, 0.5), domain_error);
}

namespace {

// adaptive Simpson quadrature, used as an independent check below
double simpson(double (*f)(double), double a, double b, double fa, double fb,
               double fm, double eps, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double left  = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, fm, flm, eps / 2.0, depth - 1)
         + simpson(f, m, b, fm, fb, frm, eps / 2.0, depth - 1);
}

double s02_integrand(double t) {
    if (t == 0.0) return 0.0; // ln^2(1-t)/t -> t as t -> 0
    double l = std::log(1.0 - t);
    return l * l / t;
}

double s02_quad(double x) {
    double fa = s02_integrand(0.0), fb = s02_integrand(x),
           fm = s02_integrand(0.5 * x);
    return 0.5 * simpson(s02_integrand, 0.0, x, fa, fb, fm, 1e-13, 40);
}

} // namespace

TEST_CASE("nielsen S02 matches quadrature of ln^2(1-t)/t / 2") {
    for (double x : {0.3, 0.5, 0.7, -0.5}) {
        CHECK(nielsen_s02_num(x) == Catch::Approx(s02_quad(x)).epsilon(1e-10));
    }
}

TEST_CASE("nielsen S02 frozen reference values") {
    CHECK(nielsen_s02_num(0.3) == Catch::Approx(0.028191341084107026633).epsilon(1e-12));
    CHECK(nielsen_s02_num(0.5) == Catch::Approx(0.094753004230127705722).epsilon(1e-12));
    CHECK(nielsen_s02_num(0.7) == Catch::Approx(0.23849649036813185128).epsilon(1e-12));
    CHECK(nielsen_s02_num(-0.5) == Catch::Approx(0.046936455382061914196).epsilon(1e-12));
}

TEST_CASE("nielsen S02 small-x expansion") {
    // x^2/4 + x^3/6 + 11 x^4/96 + x^5/12 + ...
    double x = 1e-3;
    double lead = x * x / 4.0 + x * x * x / 6.0 + 11.0 * x * x * x * x / 96.0
                + x * x * x * x * x / 12.0;
    CHECK(nielsen_s02_num(x) == Catch::Approx(lead).epsilon(1e-12));
    CHECK(nielsen_s02_num(0.0) == 0.0);
    CHECK_THROWS_AS(nielsen_s02_num(1.0), domain_error);
}
