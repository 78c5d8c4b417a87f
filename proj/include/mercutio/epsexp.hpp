#pragma once

// Epsilon expansion of Gamma-function products: truncated Laurent series in
// eps with binary64 coefficients, an expansion driver for "type A"
// functions (a Gamma prefactor times a Gamma-ratio power series), and a
// basis-fit recognizer that turns numeric coefficient functions back into
// symbolic expressions.
//
// The architecture is numeric-coefficients-first: every eps-coefficient is
// computed as a number at a concrete argument value, and symbolic forms are
// recovered afterwards by fitting against a caller-supplied basis. Termwise
// expansion followed by the n-summation is validated empirically by the
// test suite rather than proven.

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "mercutio/expr.hpp"
#include "mercutio/special.hpp"

namespace mercutio {

// ---------------------------------------------------------------------------
// Laurent series in eps
// ---------------------------------------------------------------------------

// c[i] multiplies eps^(lo+i); an empty c is the zero series. Series are
// truncated: only the stored window of coefficients is meaningful.
struct EpsLaurent {
    int lo = 0;
    std::vector<double> c;

    double coeff(int k) const {
        long i = static_cast<long>(k) - lo;
        if (i < 0 || i >= static_cast<long>(c.size()))
            return 0.0;
        return c[static_cast<size_t>(i)];
    }
    bool is_zero() const { return c.empty(); }
};

inline EpsLaurent el_scale(const EpsLaurent& a, double s) {
    EpsLaurent out = a;
    for (auto& x : out.c)
        x *= s;
    return out;
}

// product, keeping as many coefficients as both inputs can vouch for
inline EpsLaurent el_mul(const EpsLaurent& a, const EpsLaurent& b) {
    if (a.is_zero() || b.is_zero())
        return {};
    size_t n = std::min(a.c.size(), b.c.size());
    EpsLaurent out;
    out.lo = a.lo + b.lo;
    out.c.assign(n, 0.0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (i >= n)
            break;
        for (size_t j = 0; j + i < n && j < b.c.size(); ++j)
            out.c[i + j] += a.c[i] * b.c[j];
    }
    return out;
}

// reciprocal via the leading-coefficient recurrence; keeps a's window size
inline EpsLaurent el_inverse(const EpsLaurent& a) {
    if (a.is_zero() || a.c.front() == 0.0)
        throw domain_error("series inverse needs a nonzero leading coefficient");
    EpsLaurent out;
    out.lo = -a.lo;
    out.c.assign(a.c.size(), 0.0);
    out.c[0] = 1.0 / a.c.front();
    for (size_t k = 1; k < a.c.size(); ++k) {
        double s = 0.0;
        for (size_t j = 1; j <= k; ++j)
            s += a.c[j] * out.c[k - j];
        out.c[k] = -s / a.c.front();
    }
    return out;
}

// sum; the result window is the overlap both inputs can vouch for
inline EpsLaurent el_add(const EpsLaurent& a, const EpsLaurent& b) {
    if (a.is_zero())
        return b;
    if (b.is_zero())
        return a;
    int lo = std::min(a.lo, b.lo);
    long end = std::min(a.lo + static_cast<long>(a.c.size()),
                        b.lo + static_cast<long>(b.c.size()));
    EpsLaurent out;
    out.lo = lo;
    out.c.assign(static_cast<size_t>(end - lo), 0.0);
    for (long k = lo; k < end; ++k)
        out.c[static_cast<size_t>(k - lo)] = a.coeff(static_cast<int>(k)) +
                                             b.coeff(static_cast<int>(k));
    return out;
}

// ---------------------------------------------------------------------------
// expansion of a single Gamma factor
// ---------------------------------------------------------------------------

// one Gamma argument: offset + slope*eps, both exact rationals
struct GammaArg {
    BigRat offset;
    BigRat slope;
};

namespace epsexp_detail {

inline bool is_nonpositive_integer(const BigRat& r) {
    return denominator(r) == 1 && numerator(r) <= 0;
}

// smallest K with off + K > 0, for non-positive off
inline int shift_to_positive(const BigRat& off) {
    BigRat neg = -off;
    BigInt fl = numerator(neg) / denominator(neg);
    return fl.convert_to<int>() + 1;
}

// Taylor coefficients of Gamma(z0 + s*eps) for z0 > 0:
// Gamma(z0) * exp(sum_k psi^(k-1)(z0) (s eps)^k / k!)
inline EpsLaurent gamma_taylor_positive(double z0, double s, int nterms) {
    std::vector<double> l(static_cast<size_t>(nterms), 0.0);
    double sk = s, kfac = 1.0;
    for (int k = 1; k < nterms; ++k) {
        kfac *= k;
        l[static_cast<size_t>(k)] = polygamma(k - 1, z0) * sk / kfac;
        sk *= s;
    }
    // exponential of a series with zero constant term
    EpsLaurent out;
    out.lo = 0;
    out.c.assign(static_cast<size_t>(nterms), 0.0);
    out.c[0] = 1.0;
    for (int k = 1; k < nterms; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j)
            acc += j * l[static_cast<size_t>(j)] *
                   out.c[static_cast<size_t>(k - j)];
        out.c[static_cast<size_t>(k)] = acc / k;
    }
    return el_scale(out, std::tgamma(z0));
}

} // namespace epsexp_detail

// Laurent window (nterms coefficients) of Gamma(offset + slope*eps).
// Non-positive offsets go through Gamma(z) = Gamma(z+K)/prod(z+i); a factor
// whose constant part vanishes becomes an explicit 1/(slope*eps) pole, the
// others are expanded as geometric series.
inline EpsLaurent gamma_eps_expand(const GammaArg& g, int nterms) {
    if (nterms < 1)
        throw domain_error("gamma expansion needs at least one term");
    double s = rat_to_double(g.slope);
    double z0 = rat_to_double(g.offset);

    if (g.slope == 0) {
        if (epsexp_detail::is_nonpositive_integer(g.offset))
            throw domain_error("gamma factor is identically singular");
        EpsLaurent out;
        out.lo = 0;
        out.c.assign(static_cast<size_t>(nterms), 0.0);
        if (g.offset > 0) {
            out.c[0] = std::tgamma(z0);
        } else {
            // negative non-integer: reflect through the recurrence below
            int K = epsexp_detail::shift_to_positive(g.offset);
            double v = std::tgamma(z0 + K);
            for (int i = 0; i < K; ++i)
                v /= z0 + i;
            out.c[0] = v;
        }
        return out;
    }

    if (g.offset > 0)
        return epsexp_detail::gamma_taylor_positive(z0, s, nterms);

    // shift to a positive argument
    int K = epsexp_detail::shift_to_positive(g.offset);
    EpsLaurent out = epsexp_detail::gamma_taylor_positive(
        rat_to_double(g.offset + K), s, nterms);
    for (int i = 0; i < K; ++i) {
        BigRat ci = g.offset + i;
        EpsLaurent inv;
        inv.c.assign(static_cast<size_t>(nterms), 0.0);
        if (ci == 0) {
            // explicit pole factor 1/(slope*eps)
            inv.lo = -1;
            inv.c[0] = 1.0 / s;
        } else {
            // geometric series for 1/(c + slope*eps)
            double cd = rat_to_double(ci);
            inv.lo = 0;
            double t = 1.0 / cd;
            for (int k = 0; k < nterms; ++k) {
                inv.c[static_cast<size_t>(k)] = t;
                t *= -s / cd;
            }
        }
        out = el_mul(out, inv);
    }
    return out;
}

// ---------------------------------------------------------------------------
// type A transcendental functions
// ---------------------------------------------------------------------------

// value = [prod Gamma(p_k) / prod Gamma(q_l)]
//         * sum_{n>=0} x^n / Gamma(n+1) * prod Gamma(n+a_i) / prod Gamma(n+b_j)
struct TypeAFunction {
    std::vector<GammaArg> a, b, p, q;
};

namespace epsexp_detail {

// linear factor (c + s*eps) as an exact padded series
inline EpsLaurent linear_series(const BigRat& c, const BigRat& s, int nterms) {
    EpsLaurent out;
    if (c == 0) {
        if (s == 0)
            return {}; // exact zero: the series truncates here
        out.lo = 1;
        out.c.assign(static_cast<size_t>(nterms), 0.0);
        out.c[0] = rat_to_double(s);
        return out;
    }
    out.lo = 0;
    out.c.assign(static_cast<size_t>(nterms), 0.0);
    out.c[0] = rat_to_double(c);
    if (s != 0 && nterms > 1)
        out.c[1] = rat_to_double(s);
    return out;
}

inline double max_rel_increment(const EpsLaurent& acc, const EpsLaurent& t) {
    double worst = 0.0;
    for (size_t i = 0; i < t.c.size(); ++i) {
        int k = t.lo + static_cast<int>(i);
        double rel = std::fabs(t.c[i]) / (1.0 + std::fabs(acc.coeff(k)));
        worst = std::max(worst, rel);
    }
    return worst;
}

} // namespace epsexp_detail

// Numeric eps-expansion of f at argument value x, |x| < 1. Reports the
// coefficients from the detected lowest order up to eps^(order-1), so
// requesting order 5 on a regular function yields eps^0..eps^4.
inline EpsLaurent set_expansion(const TypeAFunction& f, int order, double x,
                                double tail_tol = 1e-12) {
    if (order < 1)
        throw domain_error("expansion order must be at least 1");
    if (!(std::fabs(x) < 1.0))
        throw domain_error("type A series converges only for |x| < 1");

    const int nt = order + 8; // guard window for pole factors

    EpsLaurent pref;
    pref.lo = 0;
    pref.c.assign(static_cast<size_t>(nt), 0.0);
    pref.c[0] = 1.0;
    for (const auto& g : f.p)
        pref = el_mul(pref, gamma_eps_expand(g, nt));
    for (const auto& g : f.q)
        pref = el_mul(pref, el_inverse(gamma_eps_expand(g, nt)));

    // n = 0 sum term; later terms follow from the Gamma recurrence,
    // term_n = term_{n-1} * x/n * prod(n-1+a_i) / prod(n-1+b_j)
    EpsLaurent term;
    term.lo = 0;
    term.c.assign(static_cast<size_t>(nt), 0.0);
    term.c[0] = 1.0;
    for (const auto& g : f.a)
        term = el_mul(term, gamma_eps_expand(g, nt));
    for (const auto& g : f.b)
        term = el_mul(term, el_inverse(gamma_eps_expand(g, nt)));

    EpsLaurent acc = term;
    const double ax = std::fabs(x);
    int quiet = 0;
    for (long n = 1; n < 100000; ++n) {
        if (term.is_zero())
            break; // a zero ratio factor truncated the series
        term = el_scale(term, x / static_cast<double>(n));
        for (const auto& g : f.a)
            term = el_mul(term, epsexp_detail::linear_series(
                                    g.offset + (n - 1), g.slope, nt));
        for (const auto& g : f.b)
            term = el_mul(term, el_inverse(epsexp_detail::linear_series(
                                    g.offset + (n - 1), g.slope, nt)));
        if (term.is_zero())
            break;
        double rel = epsexp_detail::max_rel_increment(acc, term);
        acc = el_add(acc, term);
        // consecutive small increments plus a geometric tail bound
        if (rel * std::max(1.0, ax / (1.0 - ax)) < tail_tol) {
            if (++quiet >= 3)
                break;
        } else {
            quiet = 0;
        }
        if (n == 99999)
            throw eval_error("type A series did not converge");
    }

    EpsLaurent total = el_mul(pref, acc);

    // detect the true lowest order: leading coefficients that are zero up
    // to roundoff (cancelled poles) are dropped
    double scale = 0.0;
    for (double v : total.c)
        scale = std::max(scale, std::fabs(v));
    size_t first = 0;
    while (first < total.c.size() &&
           std::fabs(total.c[first]) <= 1e-9 * scale)
        ++first;
    if (first == total.c.size())
        return {0, std::vector<double>(static_cast<size_t>(order), 0.0)};

    EpsLaurent out;
    out.lo = total.lo + static_cast<int>(first);
    for (int k = out.lo; k < order; ++k)
        out.c.push_back(total.coeff(k));
    return out;
}

// ---------------------------------------------------------------------------
// basis-fit recognizer
// ---------------------------------------------------------------------------

struct BasisFn {
    Expr label;                          // symbolic form of the basis element
    std::function<double(double)> eval;  // its numeric value at x
};

namespace epsexp_detail {

// nearest rational with denominator <= max_den
inline std::pair<long, long> round_rational(double w, long max_den) {
    long bp = 0, bq = 1;
    double best = std::fabs(w);
    for (long q = 1; q <= max_den; ++q) {
        long p = static_cast<long>(std::llround(w * static_cast<double>(q)));
        double err = std::fabs(w - static_cast<double>(p) / static_cast<double>(q));
        if (err < best - 1e-18) {
            best = err;
            bp = p;
            bq = q;
        }
    }
    return {bp, bq};
}

// Gaussian elimination with partial pivoting; false if singular
inline bool solve_dense(std::vector<std::vector<double>>& A,
                        std::vector<double>& y) {
    size_t n = A.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col]))
                piv = r;
        if (std::fabs(A[piv][col]) < 1e-300)
            return false;
        std::swap(A[piv], A[col]);
        std::swap(y[piv], y[col]);
        for (size_t r = 0; r < n; ++r) {
            if (r == col)
                continue;
            double m = A[r][col] / A[col][col];
            for (size_t cc = col; cc < n; ++cc)
                A[r][cc] -= m * A[col][cc];
            y[r] -= m * y[col];
        }
    }
    for (size_t i = 0; i < n; ++i)
        y[i] /= A[i][i];
    return true;
}

} // namespace epsexp_detail

// Least-squares fit of `coeff` over `basis` at xs[0..n-3], weights rounded
// to rationals with denominator <= 64, accepted only when the rounded fit
// reproduces the last two (held-out) sample points to 1e-6 relative scale.
inline std::optional<Expr> recognize(const std::function<double(double)>& coeff,
                                     const std::vector<BasisFn>& basis,
                                     const std::vector<double>& xs) {
    size_t m = basis.size();
    if (xs.size() < m + 2)
        throw domain_error("recognizer needs at least basis size + 2 samples");
    size_t nfit = xs.size() - 2;

    std::vector<std::vector<double>> B(nfit, std::vector<double>(m));
    std::vector<double> y(nfit);
    double scale = 1.0;
    for (size_t r = 0; r < nfit; ++r) {
        y[r] = coeff(xs[r]);
        scale = std::max(scale, std::fabs(y[r]));
        for (size_t c = 0; c < m; ++c)
            B[r][c] = basis[c].eval(xs[r]);
    }

    // normal equations
    std::vector<std::vector<double>> N(m, std::vector<double>(m, 0.0));
    std::vector<double> rhs(m, 0.0);
    for (size_t r = 0; r < nfit; ++r)
        for (size_t i = 0; i < m; ++i) {
            rhs[i] += B[r][i] * y[r];
            for (size_t j = 0; j < m; ++j)
                N[i][j] += B[r][i] * B[r][j];
        }
    if (!epsexp_detail::solve_dense(N, rhs))
        return std::nullopt;

    std::vector<std::pair<long, long>> w(m);
    for (size_t i = 0; i < m; ++i)
        w[i] = epsexp_detail::round_rational(rhs[i], 64);

    // held-out validation with the rounded weights
    for (size_t h = xs.size() - 2; h < xs.size(); ++h) {
        double want = coeff(xs[h]);
        scale = std::max(scale, std::fabs(want));
        double got = 0.0;
        for (size_t i = 0; i < m; ++i)
            got += static_cast<double>(w[i].first) /
                   static_cast<double>(w[i].second) * basis[i].eval(xs[h]);
        if (std::fabs(got - want) >= 1e-6 * scale)
            return std::nullopt;
    }

    std::vector<Expr> terms;
    for (size_t i = 0; i < m; ++i) {
        if (w[i].first == 0)
            continue;
        terms.push_back(
            make_mul({make_rat(w[i].first, w[i].second), basis[i].label}));
    }
    if (terms.empty())
        return make_int(0);
    return make_add(std::move(terms));
}

// one order of an expansion as a reusable numeric function of x
inline std::function<double(double)> coefficient_handle(TypeAFunction f,
                                                        int order, int k) {
    return [f = std::move(f), order, k](double x) {
        return set_expansion(f, order, x).coeff(k);
    };
}

// An expansion packaged as reusable per-order handles. coeff[i] evaluates
// the eps^(lo+i) coefficient at a given x; form[i] holds a recognized
// symbolic expression for that order once one is found.
struct EpsSeries {
    int lo = 0;
    std::vector<std::function<double(double)>> coeff;
    std::vector<std::optional<Expr>> form;
};

// The lowest order is detected at probe_x and assumed uniform in x.
inline EpsSeries make_eps_series(const TypeAFunction& f, int order,
                                 double probe_x = 0.5) {
    EpsSeries s;
    s.lo = set_expansion(f, order, probe_x).lo;
    for (int k = s.lo; k < order; ++k) {
        s.coeff.push_back(coefficient_handle(f, order, k));
        s.form.emplace_back();
    }
    return s;
}

} // namespace mercutio
