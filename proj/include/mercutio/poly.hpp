#pragma once

// Dense univariate polynomials over the integers. Coefficients are stored
// constant term first; the zero polynomial is the empty vector, so the
// leading coefficient of a trimmed nonzero polynomial is back().

#include <optional>
#include <utility>
#include <vector>

#include "mercutio/numeric.hpp"

namespace mercutio {

using Poly = std::vector<BigInt>;

namespace upoly {

inline void trim(Poly& p) {
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

inline int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline bool is_zero(const Poly& p) { return p.empty(); }

inline const BigInt& lc(const Poly& p) { return p.back(); }

inline Poly constant(const BigInt& c) {
    Poly p;
    if (c != 0)
        p.push_back(c);
    return p;
}

inline Poly add(const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()), BigInt(0));
    for (size_t i = 0; i < a.size(); ++i)
        out[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i)
        out[i] += b[i];
    trim(out);
    return out;
}

inline Poly neg(const Poly& a) {
    Poly out = a;
    for (auto& c : out)
        c = -c;
    return out;
}

inline Poly sub(const Poly& a, const Poly& b) { return add(a, neg(b)); }

inline Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty())
        return {};
    Poly out(a.size() + b.size() - 1, BigInt(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    trim(out);
    return out;
}

inline Poly mul_scalar(const Poly& a, const BigInt& c) {
    if (c == 0)
        return {};
    Poly out = a;
    for (auto& x : out)
        x *= c;
    return out;
}

inline Poly derivative(const Poly& a) {
    if (a.size() < 2)
        return {};
    Poly out(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i)
        out[i - 1] = a[i] * BigInt(static_cast<long>(i));
    trim(out);
    return out;
}

inline BigInt eval(const Poly& a, const BigInt& x) {
    BigInt acc = 0;
    for (size_t i = a.size(); i-- > 0;)
        acc = acc * x + a[i];
    return acc;
}

// quotient when b divides a exactly over the integers, nullopt otherwise;
// doubles as trial division during factor recombination
inline std::optional<Poly> div_exact(const Poly& a, const Poly& b) {
    if (b.empty())
        return std::nullopt;
    if (a.empty())
        return Poly{};
    if (a.size() < b.size())
        return std::nullopt;
    Poly rem = a;
    Poly quo(a.size() - b.size() + 1, BigInt(0));
    for (size_t k = quo.size(); k-- > 0;) {
        BigInt top = rem[k + b.size() - 1];
        if (top == 0)
            continue;
        if (top % b.back() != 0)
            return std::nullopt;
        BigInt q = top / b.back();
        quo[k] = q;
        for (size_t i = 0; i < b.size(); ++i)
            rem[k + i] -= q * b[i];
    }
    for (const auto& c : rem)
        if (c != 0)
            return std::nullopt;
    trim(quo);
    return quo;
}

// signed content: gcd of the coefficients carrying the sign of the leading
// coefficient, so p / content(p) has a positive leading coefficient
inline BigInt content(const Poly& p) {
    BigInt g = 0;
    for (const auto& c : p)
        g = boost::multiprecision::gcd(g, c);
    if (g == 0)
        return 0;
    return lc(p) < 0 ? BigInt(-g) : g;
}

inline Poly primitive(const Poly& p) {
    if (p.empty())
        return {};
    BigInt c = content(p);
    Poly out = p;
    for (auto& x : out)
        x /= c;
    return out;
}

// pseudo-remainder: lc(b)^(deg a - deg b + 1) * a reduced by b
inline Poly pseudo_rem(const Poly& a, const Poly& b) {
    Poly rem = a;
    trim(rem);
    int db = degree(b);
    while (degree(rem) >= db) {
        BigInt q = rem.back();
        size_t shift = rem.size() - b.size();
        Poly scaled = mul_scalar(rem, lc(b));
        for (size_t i = 0; i < b.size(); ++i)
            scaled[shift + i] -= q * b[i];
        trim(scaled);
        rem = std::move(scaled);
    }
    return rem;
}

// primitive gcd, positive leading coefficient (primitive PRS; integer
// content of the inputs is deliberately ignored)
inline Poly gcd(Poly a, Poly b) {
    trim(a);
    trim(b);
    if (a.empty())
        return b.empty() ? Poly{} : primitive(b);
    if (b.empty())
        return primitive(a);
    Poly A = primitive(a), B = primitive(b);
    if (degree(A) < degree(B))
        std::swap(A, B);
    while (!B.empty()) {
        Poly r = pseudo_rem(A, B);
        A = std::move(B);
        if (!r.empty())
            r = primitive(r);
        B = std::move(r);
    }
    return A;
}

// coefficient bound for integer factors: 2^deg * ceil(two-norm)
inline BigInt mignotte_bound(const Poly& p) {
    BigInt s = 0;
    for (const auto& c : p)
        s += c * c;
    BigInt n2 = boost::multiprecision::sqrt(s) + 1;
    return (BigInt(1) << static_cast<unsigned>(degree(p))) * n2;
}

} // namespace upoly

} // namespace mercutio
