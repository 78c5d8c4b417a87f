#pragma once

#include "mercutio/expr.hpp"

namespace mercutio {

inline Expr expand(const Expr& e);

namespace detail {

inline std::vector<Expr> add_terms(const Expr& e) {
    if (e.kind() == Kind::Add) return e.kids();
    return {e};
}

// Product of two expanded expressions, distributed over sums.
inline Expr mul_expanded(const Expr& a, const Expr& b) {
    std::vector<Expr> out;
    std::vector<Expr> ta = add_terms(a), tb = add_terms(b);
    out.reserve(ta.size() * tb.size());
    for (const Expr& x : ta)
        for (const Expr& y : tb) out.push_back(make_mul({x, y}));
    return make_add(std::move(out));
}

} // namespace detail

inline Expr expand(const Expr& e) {
    switch (e.kind()) {
    case Kind::Integer:
    case Kind::Rational:
    case Kind::Float:
    case Kind::Symbol:
        return e;
    case Kind::Add: {
        std::vector<Expr> kids;
        kids.reserve(e.nkids());
        for (const Expr& k : e.kids()) kids.push_back(expand(k));
        return make_add(std::move(kids));
    }
    case Kind::Mul: {
        Expr acc = make_int(1);
        for (const Expr& k : e.kids()) acc = detail::mul_expanded(acc, expand(k));
        return acc;
    }
    case Kind::Pow: {
        Expr b = expand(e.kid(0));
        Expr x = expand(e.kid(1));
        if (x.kind() == Kind::Integer && x.num().q >= 2 && b.kind() == Kind::Add) {
            if (x.num().q > 65536) throw arithmetic_error("expand: exponent too large");
            long n = numerator(x.num().q).convert_to<long>();
            Expr acc = b;
            for (long i = 1; i < n; ++i) acc = detail::mul_expanded(acc, b);
            return acc;
        }
        return make_pow(b, x);
    }
    case Kind::Fun: {
        std::vector<Expr> args;
        args.reserve(e.nkids());
        for (const Expr& k : e.kids()) args.push_back(expand(k));
        return make_fun(e.fun(), std::move(args));
    }
    }
    return e;
}

inline Expr diff(const Expr& e, const std::string& x) {
    switch (e.kind()) {
    case Kind::Integer:
    case Kind::Rational:
    case Kind::Float:
        return make_int(0);
    case Kind::Symbol:
        return e.name() == x ? make_int(1) : make_int(0);
    case Kind::Add: {
        std::vector<Expr> kids;
        kids.reserve(e.nkids());
        for (const Expr& k : e.kids()) kids.push_back(diff(k, x));
        return make_add(std::move(kids));
    }
    case Kind::Mul: {
        std::vector<Expr> terms;
        terms.reserve(e.nkids());
        for (size_t i = 0; i < e.nkids(); ++i) {
            std::vector<Expr> fs = e.kids();
            fs[i] = diff(e.kid(i), x);
            terms.push_back(make_mul(std::move(fs)));
        }
        return make_add(std::move(terms));
    }
    case Kind::Pow: {
        const Expr& b = e.kid(0);
        const Expr& p = e.kid(1);
        Expr db = diff(b, x);
        Expr dp = diff(p, x);
        if (dp.is_zero()) {
            Expr pm1 = make_add({p, make_int(-1)});
            return make_mul({p, make_pow(b, pm1), db});
        }
        Expr logterm = make_mul({dp, make_fun(FunId::Log, {b})});
        Expr powterm = make_mul({p, db, make_pow(b, make_int(-1))});
        return make_mul({e, make_add({logterm, powterm})});
    }
    case Kind::Fun: {
        const Expr& u = e.fun() == FunId::Li ? e.kid(1) : e.kid(0);
        Expr du = diff(u, x);
        if (du.is_zero()) return make_int(0);
        switch (e.fun()) {
        case FunId::Sin:
            return make_mul({make_fun(FunId::Cos, {u}), du});
        case FunId::Cos:
            return make_mul({make_int(-1), make_fun(FunId::Sin, {u}), du});
        case FunId::Exp:
            return make_mul({e, du});
        case FunId::Log:
            return make_mul({du, make_pow(u, make_int(-1))});
        case FunId::Li: {
            const BigRat& w = e.kid(0).num().q;
            if (w >= 2) {
                Expr wm1 = make_int(BigInt(numerator(w) - 1));
                return make_mul({make_fun(FunId::Li, {wm1, u}),
                                 make_pow(u, make_int(-1)), du});
            }
            Expr om = make_add({make_int(1), neg(u)});
            return make_mul({du, make_pow(om, make_int(-1))});
        }
        case FunId::Gamma:
            throw eval_error("diff: no derivative rule for gamma");
        case FunId::S02:
            throw eval_error("diff: no derivative rule for S02");
        }
        break;
    }
    }
    return make_int(0);
}

inline Expr diff(const Expr& e, const std::string& x, long n) {
    if (n < 0) throw domain_error("diff: negative order");
    Expr r = e;
    for (long i = 0; i < n; ++i) r = diff(r, x);
    return r;
}

} // namespace mercutio
