#pragma once

#include "mercutio/expr.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

// Rational normalization: rewrite an expression as a single cancelled
// fraction of expanded polynomials.  The polynomial ring is generated by the
// symbols of the expression plus each maximal non-polynomial subexpression
// (function applications, powers with non-integer exponents), which are
// treated as opaque atoms.

namespace mercutio {
namespace normal_detail {

using Mono = std::vector<int>; // one exponent per generator

// Sparse multivariate polynomial with rational coefficients.  The map's
// lexicographic key order doubles as the monomial order for division.
struct MPoly {
    std::map<Mono, BigRat> t;

    bool zero() const { return t.empty(); }
    bool constant() const {
        if (t.empty()) return true;
        if (t.size() != 1) return false;
        for (int e : t.begin()->first)
            if (e != 0) return false;
        return true;
    }
};

inline MPoly mp_const(const BigRat& c, size_t nvars) {
    MPoly p;
    if (!c.is_zero()) p.t.emplace(Mono(nvars, 0), c);
    return p;
}

inline MPoly mp_gen(size_t i, size_t nvars) {
    MPoly p;
    Mono m(nvars, 0);
    m[i] = 1;
    p.t.emplace(std::move(m), BigRat(1));
    return p;
}

inline MPoly mp_add(const MPoly& a, const MPoly& b) {
    MPoly r = a;
    for (const auto& [m, c] : b.t) {
        auto it = r.t.find(m);
        if (it == r.t.end()) {
            r.t.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) r.t.erase(it);
        }
    }
    return r;
}

inline MPoly mp_neg(const MPoly& a) {
    MPoly r = a;
    for (auto& [m, c] : r.t) c = -c;
    return r;
}

inline MPoly mp_sub(const MPoly& a, const MPoly& b) { return mp_add(a, mp_neg(b)); }

// a * (coef * x^mono)
inline MPoly mp_mul_term(const MPoly& a, const Mono& mono, const BigRat& coef) {
    MPoly r;
    for (const auto& [m, c] : a.t) {
        Mono k = m;
        for (size_t i = 0; i < k.size(); ++i) k[i] += mono[i];
        r.t.emplace(std::move(k), c * coef);
    }
    return r;
}

inline MPoly mp_mul(const MPoly& a, const MPoly& b) {
    MPoly r;
    for (const auto& [m, c] : b.t) {
        for (const auto& [am, ac] : a.t) {
            Mono k = am;
            for (size_t i = 0; i < k.size(); ++i) k[i] += m[i];
            auto it = r.t.find(k);
            if (it == r.t.end()) {
                BigRat v = ac * c;
                if (!v.is_zero()) r.t.emplace(std::move(k), std::move(v));
            } else {
                it->second += ac * c;
                if (it->second.is_zero()) r.t.erase(it);
            }
        }
    }
    return r;
}

inline MPoly mp_pow(const MPoly& a, long k, size_t nvars) {
    MPoly r = mp_const(BigRat(1), nvars);
    MPoly base = a;
    for (long n = k; n > 0; n >>= 1) {
        if (n & 1) r = mp_mul(r, base);
        if (n > 1) base = mp_mul(base, base);
    }
    return r;
}

inline int deg_in(const MPoly& p, size_t v) {
    int d = 0;
    for (const auto& [m, c] : p.t) d = std::max(d, m[v]);
    return d;
}

// coefficient of v^d, with the v-slot zeroed out
inline MPoly coeff_of(const MPoly& p, size_t v, int d) {
    MPoly r;
    for (const auto& [m, c] : p.t) {
        if (m[v] != d) continue;
        Mono k = m;
        k[v] = 0;
        r.t.emplace(std::move(k), c);
    }
    return r;
}

inline MPoly mp_shift(const MPoly& p, size_t v, int k) {
    MPoly r;
    for (const auto& [m, c] : p.t) {
        Mono mm = m;
        mm[v] += k;
        r.t.emplace(std::move(mm), c);
    }
    return r;
}

// Exact long division in the lexicographic term order; the divisor is known
// to divide the dividend (contents and gcds), so a failure is an internal bug.
inline MPoly mp_divexact(const MPoly& a, const MPoly& b) {
    if (b.zero()) throw arithmetic_error("polynomial division by zero");
    MPoly q;
    MPoly r = a;
    const auto& [lbm, lbc] = *b.t.rbegin();
    while (!r.zero()) {
        const auto& [lrm, lrc] = *r.t.rbegin();
        Mono d = lrm;
        for (size_t i = 0; i < d.size(); ++i) {
            d[i] -= lbm[i];
            if (d[i] < 0) throw error("inexact polynomial division");
        }
        BigRat c = lrc / lbc;
        q.t.emplace(d, c);
        r = mp_sub(r, mp_mul_term(b, d, c));
    }
    return q;
}

// Scale factor that makes p integer-primitive with a positive leading
// coefficient (the canonical representative of its associate class).
inline BigRat canon_factor(const MPoly& p) {
    if (p.zero()) return BigRat(1);
    BigInt den_lcm = 1;
    for (const auto& [m, c] : p.t) den_lcm = lcm(den_lcm, denominator(c));
    BigInt num_gcd = 0;
    for (const auto& [m, c] : p.t)
        num_gcd = gcd(num_gcd, BigInt(numerator(c) * (den_lcm / denominator(c))));
    BigRat s(den_lcm, num_gcd);
    if (p.t.rbegin()->second < 0) s = -s;
    return s;
}

inline MPoly mp_scale(const MPoly& p, const BigRat& s) {
    MPoly r = p;
    for (auto& [m, c] : r.t) c *= s;
    return r;
}

inline MPoly mp_canon(const MPoly& p) { return mp_scale(p, canon_factor(p)); }

// pseudo-remainder of a by b with respect to variable v
inline MPoly prem(const MPoly& a, const MPoly& b, size_t v) {
    int db = deg_in(b, v);
    MPoly lb = coeff_of(b, v, db);
    MPoly r = a;
    while (!r.zero()) {
        int dr = deg_in(r, v);
        if (dr < db) break;
        MPoly lr = coeff_of(r, v, dr);
        r = mp_sub(mp_mul(lb, r), mp_shift(mp_mul(lr, b), v, dr - db));
    }
    return r;
}

inline MPoly mp_gcd(const MPoly& a, const MPoly& b);

// gcd of the univariate-in-v coefficients
inline MPoly content_in(const MPoly& p, size_t v) {
    MPoly g;
    for (int d = 0; d <= deg_in(p, v); ++d) {
        MPoly c = coeff_of(p, v, d);
        if (c.zero()) continue;
        g = mp_gcd(g, c);
        if (g.constant()) break;
    }
    return g;
}

// Recursive primitive-part Euclidean gcd: view both polynomials as univariate
// in the highest occurring generator with polynomial coefficients, split off
// contents, and run a pseudo-remainder sequence reduced to primitive parts.
inline MPoly mp_gcd(const MPoly& a, const MPoly& b) {
    if (a.zero()) return mp_canon(b);
    if (b.zero()) return mp_canon(a);
    size_t nvars = a.t.begin()->first.size();
    if (a.constant() || b.constant()) return mp_const(BigRat(1), nvars);
    size_t v = 0;
    for (const auto& [m, c] : a.t)
        for (size_t i = 0; i < nvars; ++i)
            if (m[i] != 0) v = std::max(v, i);
    for (const auto& [m, c] : b.t)
        for (size_t i = 0; i < nvars; ++i)
            if (m[i] != 0) v = std::max(v, i);
    MPoly ca = content_in(a, v);
    MPoly cb = content_in(b, v);
    MPoly A = mp_divexact(a, ca);
    MPoly B = mp_divexact(b, cb);
    MPoly cg = mp_gcd(ca, cb);
    if (deg_in(A, v) < deg_in(B, v)) std::swap(A, B);
    while (!B.zero()) {
        MPoly r = prem(A, B, v);
        A = std::move(B);
        if (r.zero())
            B = std::move(r);
        else
            B = mp_divexact(r, content_in(r, v));
    }
    return mp_canon(mp_mul(cg, A));
}

struct Frac {
    MPoly num, den;
};

class Normalizer {
public:
    Expr run(const Expr& e) {
        scan(e);
        Frac f = conv(e);
        if (f.num.zero()) return has_float_ ? make_float(0.0) : make_int(0);
        MPoly g = mp_gcd(f.num, f.den);
        f.num = mp_divexact(f.num, g);
        f.den = mp_divexact(f.den, g);
        BigRat s = canon_factor(f.den);
        f.num = mp_scale(f.num, s);
        f.den = mp_scale(f.den, s);
        Expr numer = to_expr(f.num);
        if (f.den.constant()) return numer; // den is exactly 1 after scaling
        return make_mul({numer, make_pow(to_expr(f.den), make_int(-1))});
    }

private:
    std::vector<Expr> gens_;
    bool has_float_ = false;

    // A power is handled structurally only for small exact-integer exponents
    // on a non-numeric base; everything else stays opaque.
    static bool structural_pow(const Expr& e, long& k) {
        const Expr& x = e.kid(1);
        if (x.kind() != Kind::Integer) return false;
        const BigRat& q = x.num().q;
        if (q > 1000000 || q < -1000000) return false;
        if (e.kid(0).is_num()) return false; // unfolded numeric power
        k = numerator(q).convert_to<long>();
        return true;
    }

    void add_gen(const Expr& g) {
        for (const Expr& have : gens_)
            if (have == g) return;
        gens_.push_back(g);
    }

    void scan(const Expr& e) {
        switch (e.kind()) {
        case Kind::Integer:
        case Kind::Rational:
            return;
        case Kind::Float:
            has_float_ = true;
            return;
        case Kind::Symbol:
            add_gen(e);
            return;
        case Kind::Add:
        case Kind::Mul:
            for (const Expr& k : e.kids()) scan(k);
            return;
        case Kind::Pow: {
            long k;
            if (structural_pow(e, k))
                scan(e.kid(0));
            else
                add_gen(e);
            return;
        }
        case Kind::Fun:
            add_gen(e);
            return;
        }
    }

    size_t gen_index(const Expr& g) const {
        for (size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i] == g) return i;
        throw error("normalization: unregistered generator");
    }

    Frac conv(const Expr& e) {
        size_t n = gens_.size();
        switch (e.kind()) {
        case Kind::Integer:
        case Kind::Rational:
            return {mp_const(e.num().q, n), mp_const(BigRat(1), n)};
        case Kind::Float:
            return {mp_const(rat_from_double(e.num().d), n), mp_const(BigRat(1), n)};
        case Kind::Symbol:
        case Kind::Fun:
            return {mp_gen(gen_index(e), n), mp_const(BigRat(1), n)};
        case Kind::Pow: {
            long k;
            if (!structural_pow(e, k))
                return {mp_gen(gen_index(e), n), mp_const(BigRat(1), n)};
            Frac f = conv(e.kid(0));
            if (k >= 0) return {mp_pow(f.num, k, n), mp_pow(f.den, k, n)};
            if (f.num.zero()) throw arithmetic_error("division by zero");
            return {mp_pow(f.den, -k, n), mp_pow(f.num, -k, n)};
        }
        case Kind::Add: {
            Frac acc{mp_const(BigRat(0), n), mp_const(BigRat(1), n)};
            for (const Expr& kid : e.kids()) {
                Frac f = conv(kid);
                acc.num = mp_add(mp_mul(acc.num, f.den), mp_mul(f.num, acc.den));
                acc.den = mp_mul(acc.den, f.den);
            }
            return acc;
        }
        case Kind::Mul: {
            Frac acc{mp_const(BigRat(1), n), mp_const(BigRat(1), n)};
            for (const Expr& kid : e.kids()) {
                Frac f = conv(kid);
                acc.num = mp_mul(acc.num, f.num);
                acc.den = mp_mul(acc.den, f.den);
            }
            return acc;
        }
        }
        throw error("normalization: unreachable");
    }

    Expr coeff_expr(const BigRat& c) const {
        if (has_float_) return make_float(rat_to_double(c));
        return make_rat(c);
    }

    Expr to_expr(const MPoly& p) const {
        if (p.zero()) return has_float_ ? make_float(0.0) : make_int(0);
        std::vector<Expr> terms;
        terms.reserve(p.t.size());
        for (const auto& [m, c] : p.t) {
            std::vector<Expr> fs;
            fs.push_back(coeff_expr(c));
            for (size_t i = 0; i < m.size(); ++i)
                if (m[i] != 0) fs.push_back(make_pow(gens_[i], make_int(m[i])));
            terms.push_back(fs.size() == 1 ? fs[0] : make_mul(std::move(fs)));
        }
        return make_add(std::move(terms));
    }
};

} // namespace normal_detail

inline Expr normal(const Expr& e) { return normal_detail::Normalizer().run(e); }

} // namespace mercutio
