#pragma once

// Recursive binary64 evaluation of expressions.  Domain violations inside
// function evaluation yield quiet NaN / inf per IEEE so that samplers can
// decide policy; unbound symbols are a hard error.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "mercutio/expr.hpp"
#include "mercutio/special.hpp"

namespace mercutio {

// x^n by repeated squaring; x^2 is computed as x*x exactly.
inline double pow_int_d(double x, long long n) {
    if (n < 0) return 1.0 / pow_int_d(x, -n);
    double acc = 1.0;
    double b = x;
    while (n > 0) {
        if (n & 1) acc *= b;
        n >>= 1;
        if (n > 0) b *= b;
    }
    return acc;
}

// exact integers up to 2^53 convert losslessly through double
inline bool fits_small_int(const NumVal& n, long long& out) {
    if (n.flt || !rat_is_int(n.q)) return false;
    static const BigRat lim(9007199254740992LL);
    if (n.q > lim || n.q < -lim) return false;
    out = static_cast<long long>(n.to_double());
    return true;
}

namespace detail {

inline double apply_fun(FunId id, const std::vector<double>& args) {
    switch (id) {
        case FunId::Sin: return std::sin(args[0]);
        case FunId::Cos: return std::cos(args[0]);
        case FunId::Exp: return std::exp(args[0]);
        case FunId::Log: return std::log(args[0]);
        case FunId::Gamma: return std::tgamma(args[0]);
        case FunId::Li: {
            // weight is a canonical exact integer by construction
            long long w = static_cast<long long>(args[0]);
            double x = args[1];
            if (!(std::fabs(x) < 1.0)) return std::numeric_limits<double>::quiet_NaN();
            return polylog_num(static_cast<int>(w), x);
        }
        case FunId::S02: {
            double x = args[0];
            if (!(std::fabs(x) < 1.0)) return std::numeric_limits<double>::quiet_NaN();
            return nielsen_s02_num(x);
        }
    }
    throw eval_error("unknown function identifier");
}

template <class Lookup>
double eval_rec(const Expr& e, const Lookup& lookup) {
    switch (e.kind()) {
        case Kind::Integer:
        case Kind::Rational:
        case Kind::Float:
            return e.num().to_double();
        case Kind::Symbol:
            return lookup(e.name());
        case Kind::Add: {
            double s = 0.0;
            for (const auto& c : e.kids()) s += eval_rec(c, lookup);
            return s;
        }
        case Kind::Mul: {
            double p = 1.0;
            for (const auto& c : e.kids()) p *= eval_rec(c, lookup);
            return p;
        }
        case Kind::Pow: {
            double b = eval_rec(e.kid(0), lookup);
            const Expr& ex = e.kid(1);
            long long n;
            if (ex.kind() == Kind::Integer && fits_small_int(ex.num(), n))
                return pow_int_d(b, n);
            return std::pow(b, eval_rec(ex, lookup));
        }
        case Kind::Fun: {
            std::vector<double> args;
            args.reserve(e.nkids());
            for (const auto& c : e.kids()) args.push_back(eval_rec(c, lookup));
            return apply_fun(e.fun(), args);
        }
    }
    throw eval_error("unknown node kind");
}

} // namespace detail

inline double eval_num(const Expr& e,
                       const std::unordered_map<std::string, double>& env) {
    return detail::eval_rec(e, [&](const std::string& name) -> double {
        auto it = env.find(name);
        if (it == env.end()) throw eval_error("unbound symbol '" + name + "'");
        return it->second;
    });
}

// slot-based variant for hot loops: values[i] binds vars[i]
inline double eval_num_slots(const Expr& e, const std::vector<std::string>& vars,
                             const double* values) {
    return detail::eval_rec(e, [&](const std::string& name) -> double {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == name) return values[i];
        throw eval_error("unbound symbol '" + name + "'");
    });
}

} // namespace mercutio
