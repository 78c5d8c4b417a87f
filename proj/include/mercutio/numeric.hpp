#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mercutio {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class arithmetic_error : public error {
public:
    using error::error;
};

class domain_error : public error {
public:
    using error::error;
};

class eval_error : public error {
public:
    using error::error;
};

class compile_error : public error {
public:
    using error::error;
};

class parse_error : public error {
public:
    using error::error;
};

class io_error : public error {
public:
    using error::error;
};

inline double rat_to_double(const BigRat& q) {
    return q.convert_to<double>();
}

inline BigRat rat_from_double(double d) {
    return BigRat(d); // exact dyadic conversion
}

inline bool rat_is_int(const BigRat& q) {
    return denominator(q) == 1;
}

// Numeric scalar: exact rational, or binary64 once a float entered the mix.
struct NumVal {
    bool flt = false;
    BigRat q;
    double d = 0.0;

    NumVal() : q(0) {}
    static NumVal exact(BigRat v) {
        NumVal n;
        n.q = std::move(v);
        return n;
    }
    static NumVal exact(const BigInt& v) { return exact(BigRat(v)); }
    static NumVal exact(long v) { return exact(BigRat(v)); }
    static NumVal real(double v) {
        NumVal n;
        n.flt = true;
        n.d = v;
        return n;
    }

    double to_double() const { return flt ? d : rat_to_double(q); }
    bool is_zero() const { return flt ? d == 0.0 : q.is_zero(); }
    bool is_one() const { return flt ? d == 1.0 : q == 1; }
    bool is_exact_int() const { return !flt && rat_is_int(q); }
    bool negative() const { return flt ? d < 0.0 : q < 0; }
};

inline NumVal nv_add(const NumVal& a, const NumVal& b) {
    if (a.flt || b.flt) return NumVal::real(a.to_double() + b.to_double());
    return NumVal::exact(a.q + b.q);
}

inline NumVal nv_mul(const NumVal& a, const NumVal& b) {
    if (a.flt || b.flt) return NumVal::real(a.to_double() * b.to_double());
    return NumVal::exact(a.q * b.q);
}

inline NumVal nv_neg(const NumVal& a) {
    if (a.flt) return NumVal::real(-a.d);
    return NumVal::exact(-a.q);
}

inline NumVal nv_abs(const NumVal& a) {
    return a.negative() ? nv_neg(a) : a;
}

inline NumVal nv_div(const NumVal& a, const NumVal& b) {
    if (b.is_zero()) throw arithmetic_error("division by zero");
    if (a.flt || b.flt) return NumVal::real(a.to_double() / b.to_double());
    return NumVal::exact(a.q / b.q);
}

inline BigRat rat_pow_int(const BigRat& base, const BigInt& e) {
    if (e == 0) return BigRat(1);
    BigInt n = abs(e);
    if (base.is_zero()) {
        if (e < 0) throw arithmetic_error("division by zero");
        return BigRat(0);
    }
    unsigned long ul = n.convert_to<unsigned long>();
    BigInt np = pow(numerator(base), ul);
    BigInt dp = pow(denominator(base), ul);
    if (e < 0) std::swap(np, dp);
    if (dp < 0) { np = -np; dp = -dp; }
    return BigRat(np, dp);
}

// Order: value first, exact-vs-float kind breaks ties.
inline int nv_compare(const NumVal& a, const NumVal& b) {
    auto cmp_exact = [](const BigRat& x, const BigRat& y) {
        if (x < y) return -1;
        if (y < x) return 1;
        return 0;
    };
    int c;
    if (!a.flt && !b.flt) {
        c = cmp_exact(a.q, b.q);
    } else {
        BigRat aq = a.flt ? rat_from_double(a.d) : a.q;
        BigRat bq = b.flt ? rat_from_double(b.d) : b.q;
        c = cmp_exact(aq, bq);
    }
    if (c != 0) return c;
    int ra = a.flt ? 1 : 0, rb = b.flt ? 1 : 0;
    return ra < rb ? -1 : (ra > rb ? 1 : 0);
}

} // namespace mercutio
