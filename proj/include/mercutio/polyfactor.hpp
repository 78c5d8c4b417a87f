#pragma once

// Factorization of univariate integer polynomials into
// content * product of primitive irreducible powers.
//
// Pipeline: content/primitive split, Yun squarefree decomposition, reduction
// modulo the smallest usable odd prime, distinct-degree splitting plus
// Cantor-Zassenhaus equal-degree splitting, quadratic Hensel lifting past
// the Mignotte bound, and subset recombination with trial division.
// Returned factors are primitive with positive leading coefficient and are
// sorted by degree, then lexicographically by coefficient sequence, so the
// output order does not depend on the prime or on the splitting randomness.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mercutio/algebra.hpp"
#include "mercutio/expr.hpp"
#include "mercutio/poly.hpp"
#include "mercutio/rng.hpp"

namespace mercutio {

// ---------------------------------------------------------------------------
// Expr -> Poly
// ---------------------------------------------------------------------------

namespace polyfactor_detail {

// one additive term of an expanded expression; false = not a polynomial term
inline bool collect_term(const Expr& t, const std::string& v,
                         std::map<long, BigInt>& coef) {
    BigInt c = 1;
    long deg = 0;
    std::vector<Expr> parts;
    if (t.kind() == Kind::Mul) {
        for (size_t i = 0; i < t.nkids(); ++i)
            parts.push_back(t.kid(i));
    } else {
        parts.push_back(t);
    }
    for (const auto& f : parts) {
        switch (f.kind()) {
            case Kind::Integer:
                c *= numerator(f.num().q);
                break;
            case Kind::Symbol:
                if (f.name() != v)
                    return false;
                deg += 1;
                break;
            case Kind::Pow: {
                const Expr& base = f.kid(0);
                const Expr& ex = f.kid(1);
                if (base.kind() != Kind::Symbol || base.name() != v)
                    return false;
                if (ex.kind() != Kind::Integer)
                    return false;
                BigInt k = numerator(ex.num().q);
                if (k < 1 || k > 100000)
                    return false;
                deg += static_cast<long>(k);
                break;
            }
            default:
                return false; // Rational, Float, Fun, nested Add, ...
        }
    }
    coef[deg] += c;
    return true;
}

} // namespace polyfactor_detail

// Reads expand(e) as a polynomial in v with integer coefficients and no
// other symbols; nullopt signals "not such a polynomial".
inline std::optional<Poly> expr_to_poly(const Expr& e, const std::string& v) {
    Expr x = expand(e);
    std::map<long, BigInt> coef;
    if (x.kind() == Kind::Add) {
        for (size_t i = 0; i < x.nkids(); ++i)
            if (!polyfactor_detail::collect_term(x.kid(i), v, coef))
                return std::nullopt;
    } else {
        if (!polyfactor_detail::collect_term(x, v, coef))
            return std::nullopt;
    }
    long top = 0;
    for (const auto& [k, c] : coef)
        if (c != 0)
            top = std::max(top, k);
    Poly p(static_cast<size_t>(top) + 1, BigInt(0));
    for (const auto& [k, c] : coef)
        p[static_cast<size_t>(k)] = c;
    upoly::trim(p);
    return p;
}

inline Expr poly_to_expr(const Poly& p, const std::string& v) {
    if (p.empty())
        return make_int(0);
    Expr x = make_sym(v);
    std::vector<Expr> terms;
    for (size_t k = 0; k < p.size(); ++k) {
        if (p[k] == 0)
            continue;
        if (k == 0)
            terms.push_back(make_int(p[k]));
        else
            terms.push_back(make_mul(
                {make_int(p[k]), make_pow(x, make_int(static_cast<long>(k)))}));
    }
    return make_add(std::move(terms));
}

// ---------------------------------------------------------------------------
// arithmetic mod a small odd prime
// ---------------------------------------------------------------------------

using PolyP = std::vector<long long>; // coefficients in [0, p)

namespace modp {

inline void trim(PolyP& a) {
    while (!a.empty() && a.back() == 0)
        a.pop_back();
}

inline int degree(const PolyP& a) { return static_cast<int>(a.size()) - 1; }

inline long long inv(long long a, long long p) {
    // extended Euclid; p prime, a != 0 mod p
    long long t = 0, nt = 1, r = p, nr = a % p;
    while (nr != 0) {
        long long q = r / nr;
        t -= q * nt;
        std::swap(t, nt);
        r -= q * nr;
        std::swap(r, nr);
    }
    return ((t % p) + p) % p;
}

inline PolyP add(const PolyP& a, const PolyP& b, long long p) {
    PolyP out(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i)
        out[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i)
        out[i] = (out[i] + b[i]) % p;
    trim(out);
    return out;
}

inline PolyP sub(const PolyP& a, const PolyP& b, long long p) {
    PolyP out(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i)
        out[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i)
        out[i] = ((out[i] - b[i]) % p + p) % p;
    trim(out);
    return out;
}

inline PolyP mul(const PolyP& a, const PolyP& b, long long p) {
    if (a.empty() || b.empty())
        return {};
    PolyP out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            out[i + j] = (out[i + j] + a[i] * b[j]) % p;
    trim(out);
    return out;
}

inline PolyP monic(const PolyP& a, long long p) {
    if (a.empty())
        return {};
    PolyP out = a;
    long long s = inv(out.back(), p);
    for (auto& c : out)
        c = c * s % p;
    return out;
}

inline std::pair<PolyP, PolyP> divmod(const PolyP& a, const PolyP& b,
                                      long long p) {
    PolyP rem = a, quo;
    trim(rem);
    if (static_cast<int>(rem.size()) < static_cast<int>(b.size()))
        return {PolyP{}, rem};
    quo.assign(rem.size() - b.size() + 1, 0);
    long long binv = inv(b.back(), p);
    for (size_t k = quo.size(); k-- > 0;) {
        if (rem.size() < k + b.size())
            continue;
        long long top = rem[k + b.size() - 1];
        if (top == 0)
            continue;
        long long q = top * binv % p;
        quo[k] = q;
        for (size_t i = 0; i < b.size(); ++i)
            rem[k + i] = ((rem[k + i] - q * b[i]) % p + p) % p;
    }
    trim(rem);
    trim(quo);
    return {quo, rem};
}

inline PolyP gcd(PolyP a, PolyP b, long long p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        PolyP r = divmod(a, b, p).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.empty() ? a : monic(a, p);
}

inline PolyP pow_mod(PolyP base, BigInt e, const PolyP& f, long long p) {
    PolyP acc{1};
    base = divmod(base, f, p).second;
    while (e > 0) {
        if (boost::multiprecision::bit_test(e, 0))
            acc = divmod(mul(acc, base, p), f, p).second;
        base = divmod(mul(base, base, p), f, p).second;
        e >>= 1;
    }
    return acc;
}

inline PolyP reduce(const Poly& a, long long p) {
    PolyP out(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        out[i] = static_cast<long long>(((a[i] % p) + p) % p);
    trim(out);
    return out;
}

} // namespace modp

// ---------------------------------------------------------------------------
// factorization mod p: distinct-degree + Cantor-Zassenhaus splitting
// ---------------------------------------------------------------------------

namespace polyfactor_detail {

inline void cz_split(const PolyP& g, int d, long long p, Xoshiro256& rng,
                     std::vector<PolyP>& out) {
    if (modp::degree(g) == d) {
        out.push_back(g);
        return;
    }
    BigInt half = (boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(d)) - 1) / 2;
    for (;;) {
        PolyP r(static_cast<size_t>(modp::degree(g)), 0);
        for (auto& c : r)
            c = static_cast<long long>(rng.below(static_cast<uint64_t>(p)));
        modp::trim(r);
        if (modp::degree(r) < 1)
            continue;
        PolyP w = modp::pow_mod(r, half, g, p);
        w = modp::sub(w, PolyP{1}, p);
        PolyP h = modp::gcd(w, g, p);
        int dh = modp::degree(h);
        if (dh > 0 && dh < modp::degree(g)) {
            cz_split(h, d, p, rng, out);
            cz_split(modp::divmod(g, h, p).first, d, p, rng, out);
            return;
        }
    }
}

} // namespace polyfactor_detail

// Monic irreducible factors of f mod p (f squarefree mod p, p odd,
// p not dividing lc f), sorted by degree then coefficient sequence.
inline std::vector<PolyP> factor_mod_p(const PolyP& f, long long p,
                                       Xoshiro256& rng) {
    std::vector<PolyP> out;
    PolyP fp = modp::monic(f, p);
    PolyP x{0, 1};
    PolyP h = modp::divmod(x, fp, p).second;
    for (int d = 1; 2 * d <= modp::degree(fp); ++d) {
        h = modp::pow_mod(h, BigInt(p), fp, p);
        PolyP g = modp::gcd(modp::sub(h, x, p), fp, p);
        if (modp::degree(g) > 0) {
            polyfactor_detail::cz_split(g, d, p, rng, out);
            fp = modp::divmod(fp, g, p).first;
            h = modp::divmod(h, fp, p).second;
        }
    }
    if (modp::degree(fp) > 0)
        out.push_back(fp);
    std::sort(out.begin(), out.end(), [](const PolyP& a, const PolyP& b) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a < b;
    });
    return out;
}

// ---------------------------------------------------------------------------
// quadratic Hensel lifting
// ---------------------------------------------------------------------------

namespace modm {

// polynomials with coefficients in [0, m); m is a prime power

inline BigInt mod(const BigInt& a, const BigInt& m) {
    BigInt r = a % m;
    if (r < 0)
        r += m;
    return r;
}

inline BigInt inv(const BigInt& a, const BigInt& m) {
    BigInt t = 0, nt = 1, r = m, nr = mod(a, m);
    while (nr != 0) {
        BigInt q = r / nr;
        t -= q * nt;
        std::swap(t, nt);
        r -= q * nr;
        std::swap(r, nr);
    }
    return mod(t, m);
}

inline Poly reduce(const Poly& a, const BigInt& m) {
    Poly out(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        out[i] = mod(a[i], m);
    upoly::trim(out);
    return out;
}

inline Poly add(const Poly& a, const Poly& b, const BigInt& m) {
    return reduce(upoly::add(a, b), m);
}

inline Poly sub(const Poly& a, const Poly& b, const BigInt& m) {
    return reduce(upoly::sub(a, b), m);
}

inline Poly mul(const Poly& a, const Poly& b, const BigInt& m) {
    return reduce(upoly::mul(a, b), m);
}

inline Poly mul_scalar(const Poly& a, const BigInt& c, const BigInt& m) {
    return reduce(upoly::mul_scalar(a, c), m);
}

// requires lc(b) invertible mod m
inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b,
                                    const BigInt& m) {
    Poly rem = reduce(a, m), quo;
    if (rem.size() < b.size())
        return {Poly{}, rem};
    quo.assign(rem.size() - b.size() + 1, BigInt(0));
    BigInt binv = inv(b.back(), m);
    for (size_t k = quo.size(); k-- > 0;) {
        if (rem.size() < k + b.size())
            continue;
        BigInt top = rem[k + b.size() - 1];
        if (top == 0)
            continue;
        BigInt q = mod(top * binv, m);
        quo[k] = q;
        for (size_t i = 0; i < b.size(); ++i)
            rem[k + i] = mod(rem[k + i] - q * b[i], m);
    }
    upoly::trim(rem);
    upoly::trim(quo);
    return {quo, rem};
}

// Bezout pair for coprime a, b mod a prime m: s*a + t*b == 1
inline std::pair<Poly, Poly> xgcd_coprime(const Poly& a, const Poly& b,
                                          const BigInt& m) {
    Poly r0 = reduce(a, m), r1 = reduce(b, m);
    Poly s0 = upoly::constant(1), s1;
    Poly t0, t1 = upoly::constant(1);
    while (!r1.empty()) {
        auto [q, r] = divmod(r0, r1, m);
        r0 = std::move(r1);
        r1 = std::move(r);
        Poly s2 = sub(s0, mul(q, s1, m), m);
        s0 = std::move(s1);
        s1 = std::move(s2);
        Poly t2 = sub(t0, mul(q, t1, m), m);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    // r0 is a nonzero constant for coprime inputs
    BigInt scale = inv(r0.back(), m);
    return {mul_scalar(s0, scale, m), mul_scalar(t0, scale, m)};
}

// map a residue to the symmetric range (-m/2, m/2]
inline Poly center(const Poly& a, const BigInt& m) {
    Poly out = a;
    BigInt half = m / 2;
    for (auto& c : out)
        if (c > half)
            c -= m;
    upoly::trim(out);
    return out;
}

} // namespace modm

namespace polyfactor_detail {

// binary tree over the mod-p factors; every right subtree is monic so the
// classic two-factor Hensel step (which divides by its right factor) applies
struct HNode {
    Poly val;  // this subtree's product, coefficients in [0,m)
    Poly s, t; // Bezout pair for (left.val, right.val)
    std::unique_ptr<HNode> left, right;

    bool leaf() const { return !left; }
};

inline std::unique_ptr<HNode> build_tree(const std::vector<Poly>& gs,
                                         size_t lo, size_t hi,
                                         const BigInt& p) {
    auto node = std::make_unique<HNode>();
    if (hi - lo == 1) {
        node->val = gs[lo];
        return node;
    }
    size_t mid = lo + (hi - lo) / 2;
    node->left = build_tree(gs, lo, mid, p);
    node->right = build_tree(gs, mid, hi, p);
    node->val = modm::mul(node->left->val, node->right->val, p);
    auto [s, t] = modm::xgcd_coprime(node->left->val, node->right->val, p);
    node->s = std::move(s);
    node->t = std::move(t);
    return node;
}

// one quadratic step: given f == g*h and s*g + t*h == 1 (mod m), with h
// monic, produce the same data mod m^2 and push the new target down
inline void lift_node(HNode& nd, const Poly& target, const BigInt& M) {
    nd.val = modm::reduce(target, M);
    if (nd.leaf())
        return;
    const Poly& g = nd.left->val;
    const Poly& h = nd.right->val;
    Poly e = modm::sub(nd.val, modm::mul(g, h, M), M);
    auto [q, r] = modm::divmod(modm::mul(nd.s, e, M), h, M);
    Poly g1 = modm::add(modm::add(g, modm::mul(nd.t, e, M), M),
                        modm::mul(q, g, M), M);
    Poly h1 = modm::add(h, r, M);
    Poly b = modm::sub(
        modm::add(modm::mul(nd.s, g1, M), modm::mul(nd.t, h1, M), M),
        upoly::constant(1), M);
    auto [c, d] = modm::divmod(modm::mul(nd.s, b, M), h1, M);
    Poly s1 = modm::sub(nd.s, d, M);
    Poly t1 = modm::sub(modm::sub(nd.t, modm::mul(nd.t, b, M), M),
                        modm::mul(c, g1, M), M);
    nd.s = std::move(s1);
    nd.t = std::move(t1);
    lift_node(*nd.left, g1, M);
    lift_node(*nd.right, h1, M);
}

inline void collect_leaves(const HNode& nd, std::vector<Poly>& out) {
    if (nd.leaf()) {
        out.push_back(nd.val);
        return;
    }
    collect_leaves(*nd.left, out);
    collect_leaves(*nd.right, out);
}

} // namespace polyfactor_detail

struct HenselResult {
    std::vector<Poly> factors; // monic mod modulus, coefficients in [0,modulus)
    BigInt modulus;
};

// Lifts monic factors of f mod p until the modulus exceeds `bound`.
// Requires the factors pairwise coprime mod p with product == f/lc(f).
inline HenselResult hensel_lift(const Poly& f, const std::vector<PolyP>& fp,
                                long long p, const BigInt& bound) {
    BigInt m = p;
    std::vector<Poly> gs;
    gs.reserve(fp.size());
    for (const auto& g : fp) {
        Poly gb(g.size());
        for (size_t i = 0; i < g.size(); ++i)
            gb[i] = g[i];
        gs.push_back(std::move(gb));
    }
    if (gs.size() == 1)
        return {std::move(gs), m};

    // fold lc(f) into the leftmost leaf so the tree's product is f itself
    BigInt lcf = f.back();
    gs.front() = modm::mul_scalar(gs.front(), lcf, m);
    auto root = polyfactor_detail::build_tree(gs, 0, gs.size(), m);

    while (m <= bound) {
        BigInt M = m * m;
        polyfactor_detail::lift_node(*root, modm::reduce(f, M), M);
        m = M;
    }

    std::vector<Poly> lifted;
    polyfactor_detail::collect_leaves(*root, lifted);
    // undo the leading-coefficient fold: make the first leaf monic again
    lifted.front() =
        modm::mul_scalar(lifted.front(), modm::inv(lcf, m), m);
    return {std::move(lifted), m};
}

// ---------------------------------------------------------------------------
// squarefree decomposition (Yun) and the full pipeline
// ---------------------------------------------------------------------------

// parts of a primitive nonzero polynomial: product of part^mult reconstructs
// the input, parts squarefree and pairwise coprime
inline std::vector<std::pair<Poly, int>> squarefree_decompose(const Poly& p) {
    std::vector<std::pair<Poly, int>> out;
    if (upoly::degree(p) < 1)
        return out;
    Poly dp = upoly::derivative(p);
    Poly g = upoly::gcd(p, dp);
    if (upoly::degree(g) == 0)
        return {{p, 1}};
    Poly c = *upoly::div_exact(p, g);
    Poly d = upoly::sub(*upoly::div_exact(dp, g), upoly::derivative(c));
    for (int i = 1; upoly::degree(c) > 0; ++i) {
        Poly h = upoly::gcd(c, d);
        if (upoly::degree(h) > 0)
            out.push_back({h, i});
        c = *upoly::div_exact(c, h);
        d = upoly::sub(*upoly::div_exact(d, h), upoly::derivative(c));
    }
    return out;
}

namespace polyfactor_detail {

inline bool is_prime_small(long long n) {
    if (n < 2)
        return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

// smallest odd prime keeping the degree and the squarefree shape of u
inline long long choose_prime(const Poly& u) {
    Poly du = upoly::derivative(u);
    for (long long p = 3;; p += 2) {
        if (!is_prime_small(p))
            continue;
        if (upoly::lc(u) % p == 0)
            continue;
        PolyP up = modp::reduce(u, p);
        PolyP dup = modp::reduce(du, p);
        if (modp::degree(modp::gcd(up, dup, p)) == 0)
            return p;
    }
}

// Zassenhaus recombination: try subsets of the lifted factors by increasing
// cardinality; a subset whose centered product divides u over Z is a true
// irreducible factor
inline std::vector<Poly> recombine(Poly u, const std::vector<Poly>& lifted,
                                   const BigInt& m) {
    std::vector<Poly> out;
    std::vector<size_t> alive(lifted.size());
    for (size_t i = 0; i < alive.size(); ++i)
        alive[i] = i;

    size_t card = 1;
    while (2 * card <= alive.size()) {
        // lexicographic combinations of `card` indices into alive
        std::vector<size_t> pick(card);
        for (size_t i = 0; i < card; ++i)
            pick[i] = i;
        bool hit = false;
        for (;;) {
            Poly cand = upoly::constant(upoly::lc(u));
            for (size_t i : pick)
                cand = modm::mul(cand, lifted[alive[i]], m);
            cand = upoly::primitive(modm::center(cand, m));
            auto q = upoly::div_exact(u, cand);
            if (q) {
                out.push_back(cand);
                u = std::move(*q);
                std::vector<size_t> keep;
                for (size_t i = 0, j = 0; i < alive.size(); ++i) {
                    if (j < pick.size() && pick[j] == i)
                        ++j;
                    else
                        keep.push_back(alive[i]);
                }
                alive = std::move(keep);
                hit = true;
                break;
            }
            // advance to the next combination
            size_t i = card;
            while (i-- > 0) {
                if (pick[i] != i + alive.size() - card) {
                    ++pick[i];
                    for (size_t j = i + 1; j < card; ++j)
                        pick[j] = pick[j - 1] + 1;
                    break;
                }
                if (i == 0)
                    goto exhausted;
            }
        }
        continue;
    exhausted:
        if (!hit)
            ++card;
    }
    if (upoly::degree(u) > 0)
        out.push_back(upoly::primitive(u));
    return out;
}

// irreducible factors of a primitive squarefree polynomial, deg >= 1
inline std::vector<Poly> factor_squarefree(const Poly& u, Xoshiro256& rng) {
    if (upoly::degree(u) == 1)
        return {u};
    long long p = choose_prime(u);
    std::vector<PolyP> fp = factor_mod_p(modp::reduce(u, p), p, rng);
    if (fp.size() == 1)
        return {u};
    BigInt bound = 2 * upoly::mignotte_bound(u) *
                   boost::multiprecision::abs(upoly::lc(u));
    HenselResult lift = hensel_lift(u, fp, p, bound);
    return recombine(u, lift.factors, lift.modulus);
}

} // namespace polyfactor_detail

struct Factorization {
    BigInt content;
    std::vector<std::pair<Poly, int>> factors; // (irreducible, multiplicity)
};

// content * product(factor^mult) for a nonzero integer polynomial
inline Factorization factor_poly(const Poly& p, uint64_t seed = 0) {
    if (upoly::is_zero(p))
        return {0, {}};
    Factorization out;
    out.content = upoly::content(p);
    Poly u = upoly::primitive(p);
    if (upoly::degree(u) == 0)
        return out;
    Xoshiro256 rng = Xoshiro256::stream(seed, 0x9f);
    for (const auto& [part, mult] : squarefree_decompose(u)) {
        for (auto& q : polyfactor_detail::factor_squarefree(part, rng))
            out.factors.push_back({std::move(q), mult});
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& a, const auto& b) {
                  if (a.first.size() != b.first.size())
                      return a.first.size() < b.first.size();
                  if (a.first != b.first)
                      return a.first < b.first;
                  return a.second < b.second;
              });
    return out;
}

// REPL builtin: factor e as a polynomial in v; inputs that are not integer
// polynomials in v come back unevaluated
inline Expr factorpoly(const Expr& e, const std::string& v,
                       uint64_t seed = 0) {
    auto po = expr_to_poly(e, v);
    if (!po || po->empty())
        return e;
    Factorization f = factor_poly(*po, seed);
    std::vector<Expr> parts;
    if (f.content != 1 || f.factors.empty())
        parts.push_back(make_int(f.content));
    for (const auto& [q, mult] : f.factors) {
        Expr fe = poly_to_expr(q, v);
        parts.push_back(mult == 1 ? fe : make_pow(fe, make_int(mult)));
    }
    return make_mul(std::move(parts));
}

} // namespace mercutio
