#pragma once

#include "mercutio/numeric.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <utility>
#include <vector>

namespace mercutio {

enum class Kind : uint8_t { Integer, Rational, Float, Symbol, Pow, Fun, Mul, Add };

enum class FunId : uint8_t { Sin, Cos, Exp, Log, Gamma, Li, S02 };

inline const char* fun_name(FunId f) {
    switch (f) {
    case FunId::Sin: return "sin";
    case FunId::Cos: return "cos";
    case FunId::Exp: return "exp";
    case FunId::Log: return "log";
    case FunId::Gamma: return "gamma";
    case FunId::Li: return "Li";
    case FunId::S02: return "S02";
    }
    return "?";
}

inline int fun_arity(FunId f) {
    return f == FunId::Li ? 2 : 1;
}

class Expr;
int compare(const Expr& a, const Expr& b);

struct ExprNode {
    Kind kind = Kind::Integer;
    NumVal num;
    std::string name;
    std::string display;
    FunId fun = FunId::Sin;
    std::vector<Expr> kids;
    size_t hash = 0;
};

class Expr {
public:
    Expr();
    explicit Expr(std::shared_ptr<const ExprNode> p) : p_(std::move(p)) {}

    Kind kind() const { return p_->kind; }
    bool is_num() const {
        return kind() == Kind::Integer || kind() == Kind::Rational || kind() == Kind::Float;
    }
    bool is_exact_num() const { return kind() == Kind::Integer || kind() == Kind::Rational; }
    const NumVal& num() const { return p_->num; }
    const std::string& name() const { return p_->name; }
    const std::string& display() const { return p_->display; }
    FunId fun() const { return p_->fun; }
    const std::vector<Expr>& kids() const { return p_->kids; }
    const Expr& kid(size_t i) const { return p_->kids[i]; }
    size_t nkids() const { return p_->kids.size(); }
    size_t hash() const { return p_->hash; }
    bool same(const Expr& o) const { return p_ == o.p_; }

    bool is_zero() const { return kind() == Kind::Integer && num().is_zero(); }
    bool is_one() const { return kind() == Kind::Integer && num().is_one(); }
    bool is_int_value(long v) const {
        return kind() == Kind::Integer && !num().flt && num().q == v;
    }

private:
    std::shared_ptr<const ExprNode> p_;
};

inline bool operator==(const Expr& a, const Expr& b) {
    if (a.same(b)) return true;
    if (a.hash() != b.hash()) return false;
    return compare(a, b) == 0;
}
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

using BindingSet = std::map<std::string, Expr>;

namespace detail {

inline size_t hash_mix(size_t h, size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

inline size_t node_hash(const ExprNode& n) {
    size_t h = hash_mix(0x811c9dc5, static_cast<size_t>(n.kind));
    switch (n.kind) {
    case Kind::Integer:
    case Kind::Rational: {
        std::hash<std::string> hs;
        h = hash_mix(h, hs(numerator(n.num.q).str()));
        h = hash_mix(h, hs(denominator(n.num.q).str()));
        break;
    }
    case Kind::Float: {
        h = hash_mix(h, std::hash<double>{}(n.num.d));
        break;
    }
    case Kind::Symbol: {
        std::hash<std::string> hs;
        h = hash_mix(h, hs(n.name));
        h = hash_mix(h, hs(n.display));
        break;
    }
    case Kind::Fun:
        h = hash_mix(h, static_cast<size_t>(n.fun));
        [[fallthrough]];
    case Kind::Pow:
    case Kind::Mul:
    case Kind::Add:
        for (const Expr& k : n.kids) h = hash_mix(h, k.hash());
        break;
    }
    return h;
}

inline Expr wrap(ExprNode&& n) {
    n.hash = node_hash(n);
    return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

} // namespace detail

inline Expr num_expr(NumVal v) {
    if (v.flt) {
        if (!std::isfinite(v.d)) throw arithmetic_error("non-finite float value");
        ExprNode n;
        n.kind = Kind::Float;
        n.num = v;
        return detail::wrap(std::move(n));
    }
    ExprNode n;
    n.kind = rat_is_int(v.q) ? Kind::Integer : Kind::Rational;
    n.num = std::move(v);
    return detail::wrap(std::move(n));
}

inline Expr make_int(BigInt v) { return num_expr(NumVal::exact(std::move(v))); }
inline Expr make_int(long v) { return num_expr(NumVal::exact(v)); }
inline Expr make_rat(const BigRat& v) { return num_expr(NumVal::exact(v)); }
inline Expr make_rat(const BigInt& p, const BigInt& q) {
    if (q.is_zero()) throw arithmetic_error("division by zero");
    if (q < 0) return num_expr(NumVal::exact(BigRat(-p, -q)));
    return num_expr(NumVal::exact(BigRat(p, q)));
}
inline Expr make_rat(long p, long q) { return make_rat(BigInt(p), BigInt(q)); }
inline Expr make_float(double d) { return num_expr(NumVal::real(d)); }

inline Expr::Expr() {
    static const Expr zero = make_int(0);
    p_ = zero.p_;
}

inline Expr make_sym(std::string name, std::string display = "") {
    ExprNode n;
    n.kind = Kind::Symbol;
    n.name = std::move(name);
    n.display = std::move(display);
    return detail::wrap(std::move(n));
}

inline int kind_rank(Kind k) {
    switch (k) {
    case Kind::Integer:
    case Kind::Rational:
    case Kind::Float: return 0;
    case Kind::Symbol: return 1;
    case Kind::Pow: return 2;
    case Kind::Fun: return 3;
    case Kind::Mul: return 4;
    case Kind::Add: return 5;
    }
    return 6;
}

inline int compare(const Expr& a, const Expr& b) {
    if (a.same(b)) return 0;
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
    case Kind::Integer:
    case Kind::Rational:
    case Kind::Float: {
        int c = nv_compare(a.num(), b.num());
        if (c != 0) return c;
        // value tie: Integer < Rational < Float (only exact-vs-float can tie)
        int ka = static_cast<int>(a.kind()), kb = static_cast<int>(b.kind());
        return ka < kb ? -1 : (ka > kb ? 1 : 0);
    }
    case Kind::Symbol: {
        int c = a.name().compare(b.name());
        if (c != 0) return c < 0 ? -1 : 1;
        c = a.display().compare(b.display());
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::Fun: {
        if (a.fun() != b.fun())
            return static_cast<int>(a.fun()) < static_cast<int>(b.fun()) ? -1 : 1;
        break;
    }
    default: break;
    }
    // Pow, Fun, Mul, Add: lexicographic over children
    size_t n = std::min(a.nkids(), b.nkids());
    for (size_t i = 0; i < n; ++i) {
        int c = compare(a.kid(i), b.kid(i));
        if (c != 0) return c;
    }
    if (a.nkids() != b.nkids()) return a.nkids() < b.nkids() ? -1 : 1;
    return 0;
}

Expr make_add(std::vector<Expr> terms);
Expr make_mul(std::vector<Expr> factors);
Expr make_pow(const Expr& base, const Expr& exp);

namespace detail {

// Construct a Mul node from factors already known canonical (sorted, flat,
// no numerics except possibly factors[0]).
inline Expr raw_mul(std::vector<Expr> factors) {
    if (factors.empty()) return make_int(1);
    if (factors.size() == 1) return factors[0];
    ExprNode n;
    n.kind = Kind::Mul;
    n.kids = std::move(factors);
    return wrap(std::move(n));
}

} // namespace detail

// Split a canonical term into (numeric coefficient, remainder).
inline std::pair<NumVal, Expr> split_coeff(const Expr& t) {
    if (t.kind() == Kind::Mul && t.kid(0).is_num()) {
        std::vector<Expr> rest(t.kids().begin() + 1, t.kids().end());
        return {t.kid(0).num(), detail::raw_mul(std::move(rest))};
    }
    return {NumVal::exact(1), t};
}

inline Expr make_add(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    flat.reserve(terms.size());
    for (Expr& t : terms) {
        if (t.kind() == Kind::Add)
            flat.insert(flat.end(), t.kids().begin(), t.kids().end());
        else
            flat.push_back(std::move(t));
    }
    NumVal cacc = NumVal::exact(0);
    std::map<Expr, NumVal, ExprLess> groups;
    for (const Expr& t : flat) {
        if (t.is_num()) {
            cacc = nv_add(cacc, t.num());
            continue;
        }
        auto [c, rest] = split_coeff(t);
        auto it = groups.find(rest);
        if (it == groups.end())
            groups.emplace(rest, c);
        else
            it->second = nv_add(it->second, c);
    }
    std::vector<Expr> out;
    out.reserve(groups.size() + 1);
    if (!cacc.is_zero()) out.push_back(num_expr(cacc));
    for (auto& [rest, c] : groups) {
        if (c.is_zero()) continue;
        if (c.is_one() && !c.flt)
            out.push_back(rest);
        else
            out.push_back(make_mul({num_expr(c), rest}));
    }
    std::sort(out.begin(), out.end(), ExprLess{});
    if (out.empty()) return make_int(0);
    if (out.size() == 1) return out[0];
    ExprNode n;
    n.kind = Kind::Add;
    n.kids = std::move(out);
    return detail::wrap(std::move(n));
}

inline Expr make_mul(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    flat.reserve(factors.size());
    for (Expr& f : factors) {
        if (f.kind() == Kind::Mul)
            flat.insert(flat.end(), f.kids().begin(), f.kids().end());
        else
            flat.push_back(std::move(f));
    }
    NumVal coeff = NumVal::exact(1);
    std::map<Expr, std::vector<Expr>, ExprLess> bases;
    for (const Expr& f : flat) {
        if (f.is_num()) {
            coeff = nv_mul(coeff, f.num());
        } else if (f.kind() == Kind::Pow) {
            bases[f.kid(0)].push_back(f.kid(1));
        } else {
            bases[f].push_back(make_int(1));
        }
    }
    if (coeff.is_zero()) return num_expr(coeff);
    std::vector<Expr> out;
    out.reserve(bases.size() + 1);
    for (auto& [base, exps] : bases) {
        Expr factor = make_pow(base, make_add(std::move(exps)));
        if (factor.is_num())
            coeff = nv_mul(coeff, factor.num());
        else
            out.push_back(factor);
    }
    if (coeff.is_zero()) return num_expr(coeff);
    std::sort(out.begin(), out.end(), ExprLess{});
    if (!coeff.is_one()) {
        out.insert(out.begin(), num_expr(coeff));
    }
    if (out.empty()) return num_expr(coeff);
    if (out.size() == 1) return out[0];
    ExprNode n;
    n.kind = Kind::Mul;
    n.kids = std::move(out);
    return detail::wrap(std::move(n));
}

namespace detail {

inline bool pow_fold_ok(const BigRat& base, const BigInt& e) {
    BigInt mag = abs(e);
    if (mag > 1048576) return false;
    BigInt nn = abs(numerator(base));
    unsigned long bits = 1;
    if (!nn.is_zero()) bits += msb(nn);
    bits += 1 + msb(denominator(base));
    return BigInt(bits) * mag <= 4194304;
}

} // namespace detail

inline Expr make_pow(const Expr& base, const Expr& exp) {
    if (exp.kind() == Kind::Integer) {
        const BigRat& ev = exp.num().q;
        if (ev.is_zero()) {
            if (base.is_exact_num() && base.num().is_zero())
                throw domain_error("zero to the power zero");
            return make_int(1);
        }
        if (ev == 1) return base;
    }
    if (base.is_num() && exp.is_num()) {
        const NumVal& b = base.num();
        const NumVal& e = exp.num();
        if (!b.flt && !e.flt) {
            if (rat_is_int(e.q) && detail::pow_fold_ok(b.q, numerator(e.q))) {
                return num_expr(NumVal::exact(rat_pow_int(b.q, numerator(e.q))));
            }
            // non-integer rational exponent stays symbolic
        } else {
            double bd = b.to_double(), ed = e.to_double();
            double r = std::pow(bd, ed);
            if (std::isnan(r)) throw domain_error("invalid power");
            if (std::isinf(r)) {
                if (bd == 0.0) throw arithmetic_error("division by zero");
                throw arithmetic_error("non-finite result in power");
            }
            return make_float(r);
        }
    }
    if (exp.kind() == Kind::Integer) {
        if (base.kind() == Kind::Pow)
            return make_pow(base.kid(0), make_mul({base.kid(1), exp}));
        if (base.kind() == Kind::Mul) {
            std::vector<Expr> fs;
            fs.reserve(base.nkids());
            for (const Expr& f : base.kids()) fs.push_back(make_pow(f, exp));
            return make_mul(std::move(fs));
        }
    }
    if (base.is_one()) return base;
    ExprNode n;
    n.kind = Kind::Pow;
    n.kids = {base, exp};
    return detail::wrap(std::move(n));
}

inline Expr make_fun(FunId f, std::vector<Expr> args) {
    if (static_cast<int>(args.size()) != fun_arity(f))
        throw domain_error(std::string(fun_name(f)) + ": wrong argument count");
    if (f == FunId::Li) {
        const Expr& w = args[0];
        if (w.kind() != Kind::Integer || w.num().q < 1)
            throw domain_error("Li weight must be a positive integer");
    }
    ExprNode n;
    n.kind = Kind::Fun;
    n.fun = f;
    n.kids = std::move(args);
    return detail::wrap(std::move(n));
}

inline Expr neg(const Expr& e) { return make_mul({make_int(-1), e}); }

inline Expr sub(const Expr& a, const Expr& b) { return make_add({a, neg(b)}); }

inline Expr div(const Expr& a, const Expr& b) {
    return make_mul({a, make_pow(b, make_int(-1))});
}

inline void collect_symbols(const Expr& e, std::set<std::string>& out) {
    if (e.kind() == Kind::Symbol) {
        out.insert(e.name());
        return;
    }
    for (const Expr& k : e.kids()) collect_symbols(k, out);
}

inline std::set<std::string> free_symbols(const Expr& e) {
    std::set<std::string> s;
    collect_symbols(e, s);
    return s;
}

inline Expr subs(const Expr& e, const BindingSet& b) {
    switch (e.kind()) {
    case Kind::Integer:
    case Kind::Rational:
    case Kind::Float:
        return e;
    case Kind::Symbol: {
        auto it = b.find(e.name());
        return it == b.end() ? e : it->second;
    }
    default: break;
    }
    std::vector<Expr> kids;
    kids.reserve(e.nkids());
    bool changed = false;
    for (const Expr& k : e.kids()) {
        kids.push_back(subs(k, b));
        if (!kids.back().same(k)) changed = true;
    }
    if (!changed) return e;
    switch (e.kind()) {
    case Kind::Add: return make_add(std::move(kids));
    case Kind::Mul: return make_mul(std::move(kids));
    case Kind::Pow: return make_pow(kids[0], kids[1]);
    case Kind::Fun: return make_fun(e.fun(), std::move(kids));
    default: break;
    }
    return e;
}

} // namespace mercutio
