#pragma once

#include "mercutio/expr.hpp"

#include <charconv>
#include <cstdio>
#include <string>
#include <vector>

namespace mercutio {

struct RenderOptions {
    int digits = 6;
};

inline std::string ensure_decimal(std::string s) {
    for (char c : s)
        if (c == '.' || c == 'e' || c == 'E' || c == 'n' || c == 'i') return s;
    return s + ".0";
}

inline std::string format_double(double d, int digits) {
    if (digits < 1) digits = 1;
    if (digits > 17) digits = 17;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, d);
    return ensure_decimal(buf);
}

inline std::string format_double_shortest(double d) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
    (void)ec;
    return ensure_decimal(std::string(buf, p));
}

struct RenderBox {
    std::vector<std::string> lines;
    int width = 0;
    int height = 0;
    int baseline = 0;
};

namespace detail {

inline bool term_is_negative(const Expr& t) {
    if (t.is_num()) return t.num().negative();
    if (t.kind() == Kind::Mul && t.kid(0).is_num()) return t.kid(0).num().negative();
    return false;
}

// sums display their numeric term last ("x + 1", not "1 + x"), though it
// sorts first canonically; "1 - x" keeps the constant up front rather than
// opening with a minus
inline std::vector<Expr> display_terms(const Expr& add) {
    std::vector<Expr> ts(add.kids().begin(), add.kids().end());
    if (ts.size() > 1 && ts.front().is_num() && !term_is_negative(ts[1]))
        std::rotate(ts.begin(), ts.begin() + 1, ts.end());
    return ts;
}

} // namespace detail

inline RenderBox box_text(std::string s) {
    RenderBox b;
    b.width = static_cast<int>(s.size());
    b.height = 1;
    b.baseline = 0;
    b.lines.push_back(std::move(s));
    return b;
}

inline RenderBox hcat(const std::vector<RenderBox>& parts) {
    int above = 0, below = 1, width = 0;
    for (const RenderBox& p : parts) {
        above = std::max(above, p.baseline);
        below = std::max(below, p.height - p.baseline);
        width += p.width;
    }
    RenderBox out;
    out.width = width;
    out.height = above + below;
    out.baseline = above;
    out.lines.assign(out.height, "");
    for (const RenderBox& p : parts) {
        int off = above - p.baseline;
        for (int r = 0; r < out.height; ++r) {
            int pr = r - off;
            if (pr >= 0 && pr < p.height)
                out.lines[r] += p.lines[pr];
            else
                out.lines[r] += std::string(p.width, ' ');
        }
    }
    if (out.width == 0) return box_text("");
    return out;
}

inline RenderBox box_frac(const RenderBox& num, const RenderBox& den) {
    int w = std::max(num.width, den.width);
    auto centered = [w](const RenderBox& b) {
        int lpad = (w - b.width) / 2;
        int rpad = w - b.width - lpad;
        std::vector<std::string> out;
        for (const std::string& l : b.lines)
            out.push_back(std::string(lpad, ' ') + l + std::string(rpad, ' '));
        return out;
    };
    RenderBox out;
    out.width = w;
    out.height = num.height + 1 + den.height;
    out.baseline = num.height;
    out.lines = centered(num);
    out.lines.push_back(std::string(w, '-'));
    for (std::string& l : centered(den)) out.lines.push_back(std::move(l));
    return out;
}

inline RenderBox box_parens(const RenderBox& b) {
    if (b.height == 1) return box_text("(" + b.lines[0] + ")");
    RenderBox out;
    out.width = b.width + 2;
    out.height = b.height;
    out.baseline = b.baseline;
    for (int r = 0; r < b.height; ++r) {
        char l = r == 0 ? '/' : (r == b.height - 1 ? '\\' : '|');
        char rr = r == 0 ? '\\' : (r == b.height - 1 ? '/' : '|');
        out.lines.push_back(l + b.lines[r] + rr);
    }
    return out;
}

inline RenderBox box_pow(const RenderBox& base, const RenderBox& exp) {
    RenderBox out;
    out.width = base.width + exp.width;
    out.height = base.height + exp.height;
    out.baseline = exp.height + base.baseline;
    for (int r = 0; r < exp.height; ++r)
        out.lines.push_back(std::string(base.width, ' ') + exp.lines[r]);
    for (int r = 0; r < base.height; ++r)
        out.lines.push_back(base.lines[r] + std::string(exp.width, ' '));
    return out;
}

namespace detail {

inline RenderBox ascii_box(const Expr& e, const RenderOptions& opt, bool tight);

inline std::string num_mag_text(const NumVal& v, const RenderOptions& opt) {
    // absolute value, integer or float only (rationals become fraction boxes)
    if (v.flt) return format_double(std::fabs(v.d), opt.digits);
    return BigInt(abs(numerator(v.q))).str();
}

// (negative, magnitude box) for a term of a sum or a standalone product
inline std::pair<bool, RenderBox> ascii_term(const Expr& t, const RenderOptions& opt,
                                             bool tight) {
    if (t.is_num()) {
        bool negv = t.num().negative();
        if (t.kind() == Kind::Rational) {
            const BigRat& q = t.num().q;
            return {negv, box_frac(box_text(BigInt(abs(numerator(q))).str()),
                                   box_text(denominator(q).str()))};
        }
        return {negv, box_text(num_mag_text(t.num(), opt))};
    }
    if (t.kind() == Kind::Mul) {
        auto [c, rest] = split_coeff(t);
        bool negv = c.negative();
        NumVal mag = nv_abs(c);
        std::string num_coeff, den_coeff;
        if (!mag.flt) {
            if (denominator(mag.q) != 1) den_coeff = denominator(mag.q).str();
            if (numerator(mag.q) != 1) num_coeff = BigInt(abs(numerator(mag.q))).str();
        } else if (!mag.is_one()) {
            num_coeff = format_double(mag.d, opt.digits);
        }
        std::vector<Expr> num_exprs, den_exprs;
        std::vector<Expr> factors =
            rest.kind() == Kind::Mul ? rest.kids() : std::vector<Expr>{rest};
        for (const Expr& f : factors) {
            if (f.kind() == Kind::Pow && f.kid(1).kind() == Kind::Integer &&
                f.kid(1).num().negative()) {
                Expr mag_exp = num_expr(nv_abs(f.kid(1).num()));
                den_exprs.push_back(make_pow(f.kid(0), mag_exp));
            } else {
                num_exprs.push_back(f);
            }
        }
        auto side = [&](const std::string& coeff, const std::vector<Expr>& es) {
            size_t nparts = (coeff.empty() ? 0 : 1) + es.size();
            std::vector<RenderBox> seq;
            if (!coeff.empty()) seq.push_back(box_text(coeff));
            for (const Expr& f : es) {
                if (!seq.empty()) seq.push_back(box_text(" "));
                if (f.kind() == Kind::Add && nparts > 1)
                    seq.push_back(box_parens(ascii_box(f, opt, true)));
                else
                    seq.push_back(ascii_box(f, opt, tight));
            }
            if (seq.empty()) return box_text("1");
            return hcat(seq);
        };
        if (den_exprs.empty() && den_coeff.empty())
            return {negv, side(num_coeff, num_exprs)};
        return {negv, box_frac(side(num_coeff, num_exprs), side(den_coeff, den_exprs))};
    }
    if (t.kind() == Kind::Pow && t.kid(1).kind() == Kind::Integer &&
        t.kid(1).num().negative()) {
        Expr mag_exp = num_expr(nv_abs(t.kid(1).num()));
        return {false, box_frac(box_text("1"), ascii_box(make_pow(t.kid(0), mag_exp), opt, tight))};
    }
    return {false, ascii_box(t, opt, tight)};
}

inline RenderBox ascii_box(const Expr& e, const RenderOptions& opt, bool tight) {
    switch (e.kind()) {
    case Kind::Integer: {
        return box_text(numerator(e.num().q).str());
    }
    case Kind::Float:
        return box_text(format_double(e.num().d, opt.digits));
    case Kind::Rational: {
        auto [negv, mag] = ascii_term(e, opt, tight);
        if (!negv) return mag;
        return hcat({box_text(tight ? "-" : "- "), mag});
    }
    case Kind::Symbol:
        return box_text(e.name());
    case Kind::Add: {
        std::vector<RenderBox> seq;
        bool first = true;
        for (const Expr& t : display_terms(e)) {
            auto [negv, mag] = ascii_term(t, opt, tight);
            if (first) {
                if (negv) seq.push_back(box_text(tight ? "-" : " - "));
                first = false;
            } else {
                if (tight)
                    seq.push_back(box_text(negv ? "-" : "+"));
                else
                    seq.push_back(box_text(negv ? " - " : " + "));
            }
            seq.push_back(mag);
        }
        return hcat(seq);
    }
    case Kind::Mul: {
        auto [negv, mag] = ascii_term(e, opt, tight);
        if (!negv) return mag;
        return hcat({box_text(tight ? "-" : "- "), mag});
    }
    case Kind::Pow: {
        const Expr& b = e.kid(0);
        const Expr& x = e.kid(1);
        if (x.kind() == Kind::Integer && x.num().negative()) {
            auto [negv, mag] = ascii_term(e, opt, tight);
            (void)negv;
            return mag;
        }
        RenderBox bb;
        switch (b.kind()) {
        case Kind::Add:
            bb = box_parens(ascii_box(b, opt, true));
            break;
        case Kind::Mul:
        case Kind::Rational:
        case Kind::Pow:
            bb = box_parens(ascii_box(b, opt, tight));
            break;
        case Kind::Integer:
        case Kind::Float:
            bb = e.kid(0).num().negative() ? box_parens(ascii_box(b, opt, tight))
                                           : ascii_box(b, opt, tight);
            break;
        default:
            bb = ascii_box(b, opt, tight);
            break;
        }
        return box_pow(bb, ascii_box(x, opt, true));
    }
    case Kind::Fun: {
        std::vector<RenderBox> args;
        for (size_t i = 0; i < e.nkids(); ++i) {
            if (args.size()) args.push_back(box_text(","));
            args.push_back(ascii_box(e.kid(i), opt, false));
        }
        return hcat({box_text(fun_name(e.fun())), box_parens(hcat(args))});
    }
    }
    return box_text("?");
}

} // namespace detail

inline RenderBox render_ascii(const Expr& e, const RenderOptions& opt = {}) {
    if (e.is_num() && e.kind() != Kind::Rational) {
        // tight sign on bare numbers
        if (e.kind() == Kind::Integer) return box_text(numerator(e.num().q).str());
        return box_text(format_double(e.num().d, opt.digits));
    }
    return detail::ascii_box(e, opt, false);
}

inline std::string ascii_to_string(const RenderBox& b) {
    std::string out;
    for (int r = 0; r < b.height; ++r) {
        std::string line = b.lines[r];
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line;
        if (r + 1 < b.height) out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------- raw form

namespace detail {

inline std::string raw_rec(const Expr& e, int pprec);

inline std::string raw_num_mag(const NumVal& v) {
    if (v.flt) return format_double_shortest(std::fabs(v.d));
    BigInt n = abs(numerator(v.q));
    if (denominator(v.q) == 1) return n.str();
    return n.str() + "/" + denominator(v.q).str();
}

inline std::pair<bool, std::string> raw_term(const Expr& t) {
    if (t.is_num()) return {t.num().negative(), raw_num_mag(t.num())};
    if (t.kind() == Kind::Mul) {
        auto [c, rest] = split_coeff(t);
        std::string s;
        NumVal mag = nv_abs(c);
        if (!mag.is_one() || mag.flt) s = raw_num_mag(mag);
        std::vector<Expr> factors =
            rest.kind() == Kind::Mul ? rest.kids() : std::vector<Expr>{rest};
        for (const Expr& f : factors) {
            if (!s.empty()) s += "*";
            s += raw_rec(f, 20);
        }
        return {c.negative(), s};
    }
    return {false, raw_rec(t, 20)};
}

inline int raw_prec(const Expr& e) {
    switch (e.kind()) {
    case Kind::Integer:
    case Kind::Float:
        return e.num().negative() ? 5 : 40;
    case Kind::Rational:
        return e.num().negative() ? 5 : 20;
    case Kind::Add:
        return 10;
    case Kind::Mul:
        return split_coeff(e).first.negative() ? 5 : 20;
    case Kind::Pow:
        return 30;
    default:
        return 40;
    }
}

inline std::string raw_rec(const Expr& e, int pprec) {
    std::string s;
    switch (e.kind()) {
    case Kind::Integer:
        s = numerator(e.num().q).str();
        break;
    case Kind::Rational:
        s = (e.num().negative() ? "-" : "") + raw_num_mag(e.num());
        break;
    case Kind::Float:
        s = (e.num().negative() ? "-" : "") + raw_num_mag(e.num());
        break;
    case Kind::Symbol:
        s = e.name();
        break;
    case Kind::Add: {
        bool first = true;
        for (const Expr& t : display_terms(e)) {
            auto [negv, mag] = raw_term(t);
            if (first) {
                if (negv) s += "-";
                first = false;
            } else {
                s += negv ? "-" : "+";
            }
            s += mag;
        }
        break;
    }
    case Kind::Mul: {
        auto [negv, mag] = raw_term(e);
        s = (negv ? "-" : "") + mag;
        break;
    }
    case Kind::Pow:
        s = raw_rec(e.kid(0), 31) + "^" + raw_rec(e.kid(1), 30);
        break;
    case Kind::Fun: {
        s = fun_name(e.fun());
        s += "(";
        for (size_t i = 0; i < e.nkids(); ++i) {
            if (i) s += ",";
            s += raw_rec(e.kid(i), 0);
        }
        s += ")";
        break;
    }
    }
    if (raw_prec(e) < pprec) return "(" + s + ")";
    return s;
}

} // namespace detail

inline std::string render_raw(const Expr& e) { return detail::raw_rec(e, 0); }

// ---------------------------------------------------------------- LaTeX

namespace detail {

inline std::string latex_rec(const Expr& e, const RenderOptions& opt, int pprec);

inline std::pair<bool, std::string> latex_term(const Expr& t, const RenderOptions& opt) {
    if (t.is_num()) {
        const NumVal& v = t.num();
        if (!v.flt && denominator(v.q) != 1)
            return {v.negative(), "\\frac{" + BigInt(abs(numerator(v.q))).str() + "}{" +
                                      denominator(v.q).str() + "}"};
        if (v.flt) return {v.negative(), format_double(std::fabs(v.d), opt.digits)};
        return {v.negative(), BigInt(abs(numerator(v.q))).str()};
    }
    if (t.kind() == Kind::Mul) {
        auto [c, rest] = split_coeff(t);
        NumVal mag = nv_abs(c);
        std::string num_coeff, den_coeff;
        if (!mag.flt) {
            if (denominator(mag.q) != 1) den_coeff = denominator(mag.q).str();
            if (numerator(mag.q) != 1) num_coeff = BigInt(abs(numerator(mag.q))).str();
        } else if (!mag.is_one()) {
            num_coeff = format_double(mag.d, opt.digits);
        }
        std::vector<Expr> num_exprs, den_exprs;
        std::vector<Expr> factors =
            rest.kind() == Kind::Mul ? rest.kids() : std::vector<Expr>{rest};
        for (const Expr& f : factors) {
            if (f.kind() == Kind::Pow && f.kid(1).kind() == Kind::Integer &&
                f.kid(1).num().negative()) {
                Expr mag_exp = num_expr(nv_abs(f.kid(1).num()));
                den_exprs.push_back(make_pow(f.kid(0), mag_exp));
            } else {
                num_exprs.push_back(f);
            }
        }
        auto side = [&](const std::string& coeff, const std::vector<Expr>& es) {
            size_t nparts = (coeff.empty() ? 0 : 1) + es.size();
            std::string s = coeff;
            for (const Expr& f : es) {
                if (!s.empty()) s += " ";
                s += latex_rec(f, opt, nparts > 1 ? 20 : 0);
            }
            return s.empty() ? std::string("1") : s;
        };
        if (den_exprs.empty() && den_coeff.empty()) return {c.negative(), side(num_coeff, num_exprs)};
        return {c.negative(), "\\frac{" + side(num_coeff, num_exprs) + "}{" +
                                  side(den_coeff, den_exprs) + "}"};
    }
    if (t.kind() == Kind::Pow && t.kid(1).kind() == Kind::Integer &&
        t.kid(1).num().negative()) {
        Expr mag_exp = num_expr(nv_abs(t.kid(1).num()));
        return {false, "\\frac{1}{" + latex_rec(make_pow(t.kid(0), mag_exp), opt, 0) + "}"};
    }
    return {false, latex_rec(t, opt, 20)};
}

inline std::string latex_rec(const Expr& e, const RenderOptions& opt, int pprec) {
    switch (e.kind()) {
    case Kind::Integer:
    case Kind::Rational:
    case Kind::Float: {
        auto [negv, mag] = latex_term(e, opt);
        std::string s = (negv ? "-" : "") + mag;
        if (negv && pprec >= 20) return "(" + s + ")";
        return s;
    }
    case Kind::Symbol:
        return e.display().empty() ? e.name() : e.display();
    case Kind::Add: {
        std::string s;
        bool first = true;
        for (const Expr& t : display_terms(e)) {
            auto [negv, mag] = latex_term(t, opt);
            if (first) {
                if (negv) s += "-";
                first = false;
            } else {
                s += negv ? "-" : "+";
            }
            s += mag;
        }
        if (pprec > 10) return "(" + s + ")";
        return s;
    }
    case Kind::Mul: {
        auto [negv, mag] = latex_term(e, opt);
        std::string s = (negv ? "-" : "") + mag;
        if (pprec >= 20) return "(" + s + ")";
        return s;
    }
    case Kind::Pow: {
        const Expr& b = e.kid(0);
        const Expr& x = e.kid(1);
        if (x.kind() == Kind::Integer && x.num().negative()) {
            auto [negv, mag] = latex_term(e, opt);
            (void)negv;
            return mag;
        }
        bool wrap = b.kind() == Kind::Add || b.kind() == Kind::Mul ||
                    b.kind() == Kind::Rational || b.kind() == Kind::Pow ||
                    (b.is_num() && b.num().negative());
        std::string bs = latex_rec(b, opt, 0);
        if (wrap) bs = "(" + bs + ")";
        return bs + "^{" + latex_rec(x, opt, 0) + "}";
    }
    case Kind::Fun: {
        std::string args;
        for (size_t i = e.fun() == FunId::Li ? 1 : 0; i < e.nkids(); ++i) {
            if (!args.empty()) args += ",";
            args += latex_rec(e.kid(i), opt, 0);
        }
        switch (e.fun()) {
        case FunId::Sin: return "\\sin(" + args + ")";
        case FunId::Cos: return "\\cos(" + args + ")";
        case FunId::Exp: return "\\exp(" + args + ")";
        case FunId::Log: return "\\log(" + args + ")";
        case FunId::Gamma: return "\\Gamma(" + args + ")";
        case FunId::Li:
            return "\\mathrm{Li}_{" + numerator(e.kid(0).num().q).str() + "}(" + args + ")";
        case FunId::S02: return "S_{0,2}(" + args + ")";
        }
        break;
    }
    }
    return "?";
}

} // namespace detail

inline std::string render_latex(const Expr& e, const RenderOptions& opt = {}) {
    return detail::latex_rec(e, opt, 0);
}

} // namespace mercutio
