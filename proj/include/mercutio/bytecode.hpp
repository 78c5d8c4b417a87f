#pragma once

// Stack-machine bytecode for fast repeated binary64 evaluation.  compile()
// lowers a canonical expression over an ordered variable list; run() executes
// with IEEE semantics (non-finite values propagate, nothing traps).

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "mercutio/eval.hpp"
#include "mercutio/expr.hpp"

namespace mercutio {

enum class Op : std::uint8_t {
    PushConst,  // push consts[imm]
    LoadVar,    // push values[imm]
    Add,        // b=pop, a=pop, push a+b
    Mul,        // b=pop, a=pop, push a*b
    Neg,        // a=pop, push -a
    Div,        // b=pop, a=pop, push a/b
    PowInt,     // a=pop, push a^imm (repeated squaring)
    PowReal,    // b=pop, a=pop, push pow(a,b)
    CallUnary,  // a=pop, push fn[imm](a)
};

enum class UnaryFn : std::uint8_t { Sin, Cos, Exp, Log };

struct Instr {
    Op op;
    std::int64_t imm = 0;
};

struct Program {
    std::vector<Instr> code;
    std::vector<double> consts;
    std::vector<std::string> vars;
    int max_stack = 0;
};

namespace detail {

class Compiler {
  public:
    explicit Compiler(const std::vector<std::string>& vars) {
        prog_.vars = vars;
    }

    Program take(const Expr& e) {
        emit_expr(e);
        finalize();
        return std::move(prog_);
    }

  private:
    Program prog_;

    void emit(Op op, std::int64_t imm = 0) { prog_.code.push_back({op, imm}); }

    void emit_const(double v) {
        for (std::size_t i = 0; i < prog_.consts.size(); ++i) {
            if (prog_.consts[i] == v && std::signbit(prog_.consts[i]) == std::signbit(v)) {
                emit(Op::PushConst, static_cast<std::int64_t>(i));
                return;
            }
        }
        prog_.consts.push_back(v);
        emit(Op::PushConst, static_cast<std::int64_t>(prog_.consts.size() - 1));
    }

    int slot_of(const std::string& name) const {
        for (std::size_t i = 0; i < prog_.vars.size(); ++i)
            if (prog_.vars[i] == name) return static_cast<int>(i);
        throw compile_error("unbound symbol '" + name + "'");
    }

    // emit base, then raise to positive integer power
    void emit_pow_pos(const Expr& base, long long n) {
        emit_expr(base);
        if (n != 1) emit(Op::PowInt, n);
    }

    void emit_mul(const Expr& e) {
        bool negate = false;
        std::vector<Expr> nums;
        std::vector<std::pair<Expr, long long>> dens;
        for (const auto& c : e.kids()) {
            if (c.is_num() && !c.num().flt && c.num().q == -1) {
                negate = true;
                continue;
            }
            long long n;
            if (c.kind() == Kind::Pow && c.kid(1).kind() == Kind::Integer &&
                fits_small_int(c.kid(1).num(), n) && n < 0) {
                dens.emplace_back(c.kid(0), -n);
                continue;
            }
            nums.push_back(c);
        }
        if (nums.empty()) {
            emit_const(1.0);
        } else {
            emit_expr(nums[0]);
            for (std::size_t i = 1; i < nums.size(); ++i) {
                emit_expr(nums[i]);
                emit(Op::Mul);
            }
        }
        for (const auto& [base, n] : dens) {
            emit_pow_pos(base, n);
            emit(Op::Div);
        }
        if (negate) emit(Op::Neg);
    }

    void emit_expr(const Expr& e) {
        switch (e.kind()) {
            case Kind::Integer:
            case Kind::Rational:
            case Kind::Float:
                emit_const(e.num().to_double());
                return;
            case Kind::Symbol:
                emit(Op::LoadVar, slot_of(e.name()));
                return;
            case Kind::Add:
                emit_expr(e.kid(0));
                for (std::size_t i = 1; i < e.nkids(); ++i) {
                    emit_expr(e.kid(i));
                    emit(Op::Add);
                }
                return;
            case Kind::Mul:
                emit_mul(e);
                return;
            case Kind::Pow: {
                long long n;
                if (e.kid(1).kind() == Kind::Integer &&
                    fits_small_int(e.kid(1).num(), n)) {
                    if (n > 0) {
                        emit_pow_pos(e.kid(0), n);
                    } else {
                        emit_const(1.0);
                        emit_pow_pos(e.kid(0), -n);
                        emit(Op::Div);
                    }
                } else {
                    emit_expr(e.kid(0));
                    emit_expr(e.kid(1));
                    emit(Op::PowReal);
                }
                return;
            }
            case Kind::Fun:
                switch (e.fun()) {
                    case FunId::Sin:
                    case FunId::Cos:
                    case FunId::Exp:
                    case FunId::Log: {
                        emit_expr(e.kid(0));
                        UnaryFn f = e.fun() == FunId::Sin ? UnaryFn::Sin
                                  : e.fun() == FunId::Cos ? UnaryFn::Cos
                                  : e.fun() == FunId::Exp ? UnaryFn::Exp
                                                          : UnaryFn::Log;
                        emit(Op::CallUnary, static_cast<std::int64_t>(f));
                        return;
                    }
                    case FunId::Gamma:
                        throw compile_error("no VM instruction for gamma");
                    case FunId::Li:
                        throw compile_error("no VM instruction for Li");
                    case FunId::S02:
                        throw compile_error("no VM instruction for S02");
                }
                throw compile_error("unknown function identifier");
        }
        throw compile_error("unknown node kind");
    }

    void finalize() {
        int depth = 0, maxd = 0;
        for (const auto& in : prog_.code) {
            switch (in.op) {
                case Op::PushConst:
                    if (in.imm < 0 ||
                        in.imm >= static_cast<std::int64_t>(prog_.consts.size()))
                        throw compile_error("constant index out of range");
                    ++depth;
                    break;
                case Op::LoadVar:
                    if (in.imm < 0 ||
                        in.imm >= static_cast<std::int64_t>(prog_.vars.size()))
                        throw compile_error("variable slot out of range");
                    ++depth;
                    break;
                case Op::Add:
                case Op::Mul:
                case Op::Div:
                case Op::PowReal:
                    if (depth < 2) throw compile_error("stack underflow");
                    --depth;
                    break;
                case Op::Neg:
                case Op::PowInt:
                case Op::CallUnary:
                    if (depth < 1) throw compile_error("stack underflow");
                    break;
            }
            if (depth > maxd) maxd = depth;
        }
        if (depth != 1) throw compile_error("program is not stack balanced");
        prog_.max_stack = maxd;
    }
};

} // namespace detail

inline Program compile(const Expr& e, const std::vector<std::string>& vars) {
    return detail::Compiler(vars).take(e);
}

// returns false instead of throwing, for test harnesses
inline bool stack_balanced(const Program& p) {
    int depth = 0;
    for (const auto& in : p.code) {
        switch (in.op) {
            case Op::PushConst:
                if (in.imm < 0 || in.imm >= static_cast<std::int64_t>(p.consts.size()))
                    return false;
                ++depth;
                break;
            case Op::LoadVar:
                if (in.imm < 0 || in.imm >= static_cast<std::int64_t>(p.vars.size()))
                    return false;
                ++depth;
                break;
            case Op::Add:
            case Op::Mul:
            case Op::Div:
            case Op::PowReal:
                if (depth < 2) return false;
                --depth;
                break;
            case Op::Neg:
            case Op::PowInt:
            case Op::CallUnary:
                if (depth < 1) return false;
                break;
        }
    }
    return depth == 1;
}

inline double run(const Program& p, const double* values) {
    // stack depth was bounded statically at compile time
    double stack[64];
    std::vector<double> heap;
    double* sp = stack;
    if (p.max_stack > 64) {
        heap.resize(p.max_stack);
        sp = heap.data();
    }
    int top = 0;
    for (const auto& in : p.code) {
        switch (in.op) {
            case Op::PushConst: sp[top++] = p.consts[in.imm]; break;
            case Op::LoadVar: sp[top++] = values[in.imm]; break;
            case Op::Add: --top; sp[top - 1] += sp[top]; break;
            case Op::Mul: --top; sp[top - 1] *= sp[top]; break;
            case Op::Neg: sp[top - 1] = -sp[top - 1]; break;
            case Op::Div: --top; sp[top - 1] /= sp[top]; break;
            case Op::PowInt: sp[top - 1] = pow_int_d(sp[top - 1], in.imm); break;
            case Op::PowReal: --top; sp[top - 1] = std::pow(sp[top - 1], sp[top]); break;
            case Op::CallUnary:
                switch (static_cast<UnaryFn>(in.imm)) {
                    case UnaryFn::Sin: sp[top - 1] = std::sin(sp[top - 1]); break;
                    case UnaryFn::Cos: sp[top - 1] = std::cos(sp[top - 1]); break;
                    case UnaryFn::Exp: sp[top - 1] = std::exp(sp[top - 1]); break;
                    case UnaryFn::Log: sp[top - 1] = std::log(sp[top - 1]); break;
                }
                break;
        }
    }
    return sp[top - 1];
}

inline double run(const Program& p, const std::vector<double>& values) {
    return run(p, values.data());
}

inline std::string disassemble(const Program& p) {
    std::string out;
    char buf[128];
    for (const auto& in : p.code) {
        switch (in.op) {
            case Op::PushConst: {
                char nb[64];
                auto res = std::to_chars(nb, nb + sizeof nb, p.consts[in.imm]);
                std::string v(nb, res.ptr);
                std::snprintf(buf, sizeof buf, "push-constant  %s\n", v.c_str());
                break;
            }
            case Op::LoadVar:
                std::snprintf(buf, sizeof buf, "load-variable  %lld  ; %s\n",
                              static_cast<long long>(in.imm),
                              p.vars[in.imm].c_str());
                break;
            case Op::Add: std::snprintf(buf, sizeof buf, "add\n"); break;
            case Op::Mul: std::snprintf(buf, sizeof buf, "mul\n"); break;
            case Op::Neg: std::snprintf(buf, sizeof buf, "neg\n"); break;
            case Op::Div: std::snprintf(buf, sizeof buf, "div\n"); break;
            case Op::PowInt:
                std::snprintf(buf, sizeof buf, "pow-int        %lld\n",
                              static_cast<long long>(in.imm));
                break;
            case Op::PowReal: std::snprintf(buf, sizeof buf, "pow-real\n"); break;
            case Op::CallUnary: {
                const char* fn = "?";
                switch (static_cast<UnaryFn>(in.imm)) {
                    case UnaryFn::Sin: fn = "sin"; break;
                    case UnaryFn::Cos: fn = "cos"; break;
                    case UnaryFn::Exp: fn = "exp"; break;
                    case UnaryFn::Log: fn = "log"; break;
                }
                std::snprintf(buf, sizeof buf, "call-unary     %s\n", fn);
                break;
            }
        }
        out += buf;
    }
    return out;
}

// Compiled-if-possible callable: expressions using functions without a VM
// instruction fall back to the tree-walking evaluator.
class NumericFn {
  public:
    NumericFn(const Expr& e, std::vector<std::string> vars)
        : expr_(e), vars_(std::move(vars)) {
        for (const auto& s : free_symbols(e)) {
            bool found = false;
            for (const auto& v : vars_)
                if (v == s) { found = true; break; }
            if (!found) throw compile_error("unbound symbol '" + s + "'");
        }
        try {
            prog_ = compile(e, vars_);
        } catch (const compile_error&) {
            prog_.reset();
        }
    }

    bool compiled() const { return prog_.has_value(); }

    double operator()(const double* xs) const {
        if (prog_) return run(*prog_, xs);
        return eval_num_slots(expr_, vars_, xs);
    }

    const std::vector<std::string>& vars() const { return vars_; }

  private:
    Expr expr_;
    std::vector<std::string> vars_;
    std::optional<Program> prog_;
};

} // namespace mercutio
