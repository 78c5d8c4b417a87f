#pragma once

// Shared helpers for the test suite: a seeded random expression generator
// and a minimal raw-string-to-Expr reader for round-trip checks.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <mercutio/ast.hpp>
#include <mercutio/expr.hpp>
#include <mercutio/rng.hpp>

namespace mtest {

using namespace mercutio;

struct GenOpt {
    bool funs = true;     // sin/cos/exp/log
    bool special = false; // gamma/Li/S02
    bool floats = true;
    int max_depth = 4;
};

namespace detail {

inline Expr gen_leaf(Xoshiro256& rng, const GenOpt& o) {
    switch (rng.below(o.floats ? 6 : 5)) {
        case 0: return make_sym(std::string(1, static_cast<char>('x' + rng.below(3))));
        case 1: return make_sym(std::string(1, static_cast<char>('a' + rng.below(3))));
        case 2: return make_int(static_cast<long>(rng.below(19)) - 9);
        case 3: return make_int(static_cast<long>(rng.below(9)) + 1);
        case 4: {
            long p = static_cast<long>(rng.below(19)) - 9;
            long q = static_cast<long>(rng.below(8)) + 2;
            return make_rat(p, q);
        }
        default:
            return make_float((static_cast<double>(rng.below(4001)) - 2000.0) / 512.0);
    }
}

inline Expr gen_rec(Xoshiro256& rng, const GenOpt& o, int depth) {
    if (depth >= o.max_depth || rng.below(4) == 0) return gen_leaf(rng, o);
    switch (rng.below(o.funs ? 4 : 3)) {
        case 0: {
            std::vector<Expr> kids;
            size_t n = 2 + rng.below(3);
            for (size_t i = 0; i < n; ++i) kids.push_back(gen_rec(rng, o, depth + 1));
            return make_add(std::move(kids));
        }
        case 1: {
            std::vector<Expr> kids;
            size_t n = 2 + rng.below(2);
            for (size_t i = 0; i < n; ++i) kids.push_back(gen_rec(rng, o, depth + 1));
            return make_mul(std::move(kids));
        }
        case 2: {
            Expr base = gen_rec(rng, o, depth + 1);
            long e = static_cast<long>(rng.below(7)) - 3;
            if (e == 0) e = 2;
            return make_pow(base, make_int(e));
        }
        default: {
            Expr arg = gen_rec(rng, o, depth + 1);
            unsigned pick = rng.below(o.special ? 7 : 4);
            switch (pick) {
                case 0: return make_fun(FunId::Sin, {arg});
                case 1: return make_fun(FunId::Cos, {arg});
                case 2: return make_fun(FunId::Exp, {arg});
                case 3: return make_fun(FunId::Log, {arg});
                case 4: return make_fun(FunId::Gamma, {arg});
                case 5: return make_fun(FunId::S02, {arg});
                default:
                    return make_fun(FunId::Li,
                                    {make_int(static_cast<long>(rng.below(5)) + 1), arg});
            }
        }
    }
}

} // namespace detail

// Generates a canonical expression; retries when a random combination is
// rejected by the constructors (0^0, huge folds, ...).
inline Expr gen_expr(Xoshiro256& rng, const GenOpt& o = {}) {
    for (int tries = 0; tries < 100; ++tries) {
        try {
            return detail::gen_rec(rng, o, 0);
        } catch (const mercutio::error&) {
            continue;
        }
    }
    return make_int(1);
}

// Reads the raw renderer's output language: numbers, symbols, + - * / ^,
// and the built-in function names.
inline Expr ast_to_expr(const AstNode& n) {
    switch (n.type) {
        case AstNode::Int: return make_int(n.ival);
        case AstNode::Float: return make_float(n.fval);
        case AstNode::Ident: return make_sym(n.text);
        case AstNode::Neg: return neg(ast_to_expr(n.kids[0]));
        case AstNode::Add: return make_add({ast_to_expr(n.kids[0]), ast_to_expr(n.kids[1])});
        case AstNode::Sub: return sub(ast_to_expr(n.kids[0]), ast_to_expr(n.kids[1]));
        case AstNode::Mul: return make_mul({ast_to_expr(n.kids[0]), ast_to_expr(n.kids[1])});
        case AstNode::Div: return div(ast_to_expr(n.kids[0]), ast_to_expr(n.kids[1]));
        case AstNode::Pow: return make_pow(ast_to_expr(n.kids[0]), ast_to_expr(n.kids[1]));
        case AstNode::Call: {
            std::vector<Expr> args;
            for (const auto& k : n.kids) args.push_back(ast_to_expr(k));
            if (n.text == "sin") return make_fun(FunId::Sin, std::move(args));
            if (n.text == "cos") return make_fun(FunId::Cos, std::move(args));
            if (n.text == "exp") return make_fun(FunId::Exp, std::move(args));
            if (n.text == "log") return make_fun(FunId::Log, std::move(args));
            if (n.text == "gamma") return make_fun(FunId::Gamma, std::move(args));
            if (n.text == "Li") return make_fun(FunId::Li, std::move(args));
            if (n.text == "S02") return make_fun(FunId::S02, std::move(args));
            throw std::runtime_error("unexpected call in raw text: " + n.text);
        }
        default:
            throw std::runtime_error("unexpected node in raw text");
    }
}

inline Expr parse_raw_expr(const std::string& s) {
    return ast_to_expr(parse_expression(s));
}

} // namespace mtest
