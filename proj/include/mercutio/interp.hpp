#pragma once

// Statement interpreter and session state for the scripting language defined
// in ast.hpp: scoped variable bindings, substitution macros, the builtin
// function surface (expand, normal, diff, subs, factorpoly, intnum, plot,
// expand_typeA), script loading, and the interactive command loop.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mercutio/algebra.hpp"
#include "mercutio/ast.hpp"
#include "mercutio/epsexp.hpp"
#include "mercutio/eval.hpp"
#include "mercutio/expr.hpp"
#include "mercutio/normal.hpp"
#include "mercutio/plot.hpp"
#include "mercutio/polyfactor.hpp"
#include "mercutio/render.hpp"
#include "mercutio/vegas.hpp"

namespace mercutio {

enum class OutputFormat { Ascii, Latex, Raw };

struct SessionConfig {
    OutputFormat format = OutputFormat::Ascii;
    std::uint64_t seed = 0;
    int digits = 6;
    std::string plot_dir = ".";
    // `eval` mode: unknown identifiers become symbols instead of errors
    bool auto_symbols = false;
};

namespace interp_detail {

inline const std::set<std::string>& builtin_names() {
    static const std::set<std::string> names = {
        "sin", "cos", "exp", "log", "gamma", "Li", "S02",
        "expand", "normal", "diff", "subs", "factorpoly",
        "intnum", "plot", "expand_typeA",
    };
    return names;
}

inline void collect_calls(const AstNode& a, std::set<std::string>& out) {
    if (a.type == AstNode::Call) out.insert(a.text);
    for (const AstNode& k : a.kids) collect_calls(k, out);
}

inline std::string dir_of(const std::string& path) {
    size_t slash = path.find_last_of('/');
    return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

inline std::string join_path(const std::string& dir, const std::string& p) {
    if (p.empty() || p.front() == '/' || dir == "." || dir.empty()) return p;
    return dir + "/" + p;
}

} // namespace interp_detail

class Session {
  public:
    explicit Session(SessionConfig cfg = {}, std::ostream& out = std::cout,
                     std::ostream& diag = std::cerr)
        : cfg_(cfg), out_(out), diag_(diag) {
        scopes_.emplace_back();
        bind_global("int_res", make_float(0.0));
        bind_global("int_err", make_float(0.0));
        bind_global("int_chi2", make_float(0.0));
        bind_global("int_iter_low", make_int(5));
        bind_global("int_calls_low", make_int(10000));
        bind_global("int_iter_high", make_int(10));
        bind_global("int_calls_high", make_int(100000));
    }

    // Parses and executes REPL-style input. Returns false once quit was
    // requested; errors propagate to the caller.
    bool run_source(const std::string& src) {
        return exec_all(Parser(tokenize(src)).parse_program());
    }

    // .L / .x semantics; also the entry point for `run FILE` (execute mode).
    // Errors are reported on the diagnostic stream; returns false on error.
    bool run_script(const std::string& path, bool execute) {
        std::string resolved = interp_detail::join_path(script_dirs_.empty()
                                   ? "." : script_dirs_.back(), path);
        std::ifstream in(resolved, std::ios::binary);
        if (!in) {
            diag_ << "error: cannot open " << path << "\n";
            failed_ = true;
            return false;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        std::vector<Stmt> prog;
        try {
            prog = Parser(tokenize(buf.str())).parse_program();
        } catch (const parse_error& pe) {
            diag_ << resolved << ": " << pe.what() << "\n";
            failed_ = true;
            return false;
        }
        script_dirs_.push_back(interp_detail::dir_of(resolved));
        bool ok = true;
        try {
            if (execute) {
                // un-named scripts must be a single braced block, run in a
                // child scope
                if (prog.size() != 1 || prog[0].type != Stmt::Block) {
                    diag_ << resolved
                          << ": error: an executable script must be a single "
                             "braced block\n";
                    failed_ = true;
                    ok = false;
                } else {
                    ScopeGuard g(*this);
                    exec_all(prog[0].body);
                }
            } else {
                // load mode registers function definitions only
                for (const Stmt& s : prog) {
                    if (s.type == Stmt::FuncDef) {
                        exec_stmt(s);
                    } else {
                        diag_ << resolved << ": line " << s.line
                              << ": only function definitions load here; "
                                 "statement ignored\n";
                    }
                }
            }
        } catch (const error& ex) {
            diag_ << resolved << ": error: " << ex.what() << "\n";
            failed_ = true;
            ok = false;
        }
        script_dirs_.pop_back();
        return ok;
    }

    // Interactive loop; returns the process exit status.
    int repl(std::istream& in) {
        std::string buffer;
        for (;;) {
            out_ << (buffer.empty() ? "mercutio> " : "    ... > ");
            out_.flush();
            std::string line;
            if (!std::getline(in, line)) {
                out_ << "\n";
                return 0;
            }
            buffer += line;
            buffer += '\n';
            if (buffer.find_first_not_of(" \t\r\n") == std::string::npos) {
                buffer.clear();
                continue;
            }
            std::vector<Stmt> prog;
            try {
                prog = Parser(tokenize(buffer)).parse_program();
            } catch (const parse_error& pe) {
                // incomplete input: keep reading
                if (std::string(pe.what()).find("end of input")
                    != std::string::npos)
                    continue;
                diag_ << "error: " << pe.what() << "\n";
                buffer.clear();
                continue;
            }
            buffer.clear();
            try {
                if (!exec_all(prog)) return 0;  // quit
            } catch (const error& ex) {
                diag_ << "error: " << ex.what() << "\n";
            }
        }
    }

    // Evaluates a single expression (for `eval --disasm`).
    Expr eval_expression(const std::string& src) {
        AstNode a = Parser(tokenize(src)).parse_single_expr();
        return eval_ast(a);
    }

    bool failed() const { return failed_; }
    void mark_failed() { failed_ = true; }
    bool quit_requested() const { return quit_; }

  private:
    struct FuncMacro {
        std::vector<std::string> params;
        AstNode body;
    };

    struct ScopeGuard {
        Session& s;
        explicit ScopeGuard(Session& s_) : s(s_) { s.scopes_.emplace_back(); }
        ~ScopeGuard() { s.scopes_.pop_back(); }
    };

    SessionConfig cfg_;
    std::ostream& out_;
    std::ostream& diag_;
    std::vector<std::map<std::string, Expr>> scopes_;
    std::map<std::string, FuncMacro> funcs_;
    std::vector<std::string> script_dirs_;
    int plot_counter_ = 0;
    int intnum_counter_ = 0;
    bool quit_ = false;
    bool failed_ = false;

    RenderOptions ropt() const {
        RenderOptions o;
        o.digits = cfg_.digits;
        return o;
    }

    // ------------------------------------------------------------ bindings

    void bind_global(const std::string& n, const Expr& v) {
        scopes_.front().insert_or_assign(n, v);
    }

    void bind_here(const std::string& n, const Expr& v) {
        scopes_.back().insert_or_assign(n, v);
    }

    // assignment updates the innermost existing binding, else creates one
    // in the current scope
    void assign(const std::string& n, const Expr& v) {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto f = it->find(n);
            if (f != it->end()) {
                f->second = v;
                return;
            }
        }
        bind_here(n, v);
    }

    const Expr* lookup(const std::string& n) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto f = it->find(n);
            if (f != it->end()) return &f->second;
        }
        return nullptr;
    }

    void check_not_builtin(const std::string& n, const char* what) {
        if (interp_detail::builtin_names().count(n))
            throw eval_error(std::string("cannot ") + what + " builtin '" +
                             n + "'");
    }

    long long register_value(const char* name) {
        const Expr* e = lookup(name);
        if (!e || e->kind() != Kind::Integer)
            throw eval_error(std::string("register '") + name +
                             "' must hold an integer");
        BigInt v = numerator(e->num().q);
        if (v < 1 || v > 1000000000)
            throw eval_error(std::string("register '") + name +
                             "' is out of range");
        return v.convert_to<long long>();
    }

    // ------------------------------------------------------------ execution

    bool exec_all(const std::vector<Stmt>& prog) {
        for (const Stmt& s : prog) {
            exec_stmt(s);
            if (quit_) return false;
        }
        return true;
    }

    void exec_stmt(const Stmt& s) {
        switch (s.type) {
        case Stmt::SymbolDecl:
            for (const auto& [name, display] : s.symbols) {
                check_not_builtin(name, "redeclare");
                bind_here(name, make_sym(name, display));
            }
            return;
        case Stmt::Assign:
            check_not_builtin(s.name, "assign to");
            assign(s.name, eval_ast(s.expr));
            return;
        case Stmt::FuncDef:
            define_func(s);
            return;
        case Stmt::ExprStmt:
            (void)eval_ast(s.expr);  // silent; builtins may have effects
            return;
        case Stmt::Print:
            print_expr(eval_ast(s.expr));
            return;
        case Stmt::RawPrint:
            out_ << render_raw(eval_ast(s.expr)) << "\n";
            return;
        case Stmt::PrintLatex:
            out_ << render_latex(eval_ast(s.expr), ropt()) << "\n";
            return;
        case Stmt::For:
            exec_for(s);
            return;
        case Stmt::Load:
            if (script_dirs_.size() > 16)
                throw eval_error("script include depth exceeded");
            run_script(s.path, s.execute);
            return;
        case Stmt::Block: {
            ScopeGuard g(*this);
            exec_all(s.body);
            return;
        }
        case Stmt::Quit:
            quit_ = true;
            return;
        }
    }

    void print_expr(const Expr& e) {
        switch (cfg_.format) {
        case OutputFormat::Ascii:
            out_ << ascii_to_string(render_ascii(e, ropt())) << "\n";
            return;
        case OutputFormat::Latex:
            out_ << render_latex(e, ropt()) << "\n";
            return;
        case OutputFormat::Raw:
            out_ << render_raw(e) << "\n";
            return;
        }
    }

    void define_func(const Stmt& s) {
        check_not_builtin(s.name, "redefine");
        // reject definitions that could call back into themselves, directly
        // or through already-defined macros
        std::set<std::string> seen;
        if (body_reaches(s.expr, s.name, seen))
            throw eval_error("function '" + s.name + "' may not be recursive");
        funcs_[s.name] = FuncMacro{s.params, s.expr};
    }

    bool body_reaches(const AstNode& body, const std::string& target,
                      std::set<std::string>& seen) {
        std::set<std::string> calls;
        interp_detail::collect_calls(body, calls);
        for (const std::string& c : calls) {
            if (c == target) return true;
            auto it = funcs_.find(c);
            if (it != funcs_.end() && seen.insert(c).second &&
                body_reaches(it->second.body, target, seen))
                return true;
        }
        return false;
    }

    BigInt bound_value(const AstNode& b) {
        if (b.type == AstNode::Int) return b.ival;
        const Expr* e = lookup(b.text);
        if (!e || e->kind() != Kind::Integer)
            throw eval_error("loop bound '" + b.text +
                             "' must be an integer");
        return numerator(e->num().q);
    }

    void exec_for(const Stmt& s) {
        BigInt lo = bound_value(s.lo), hi = bound_value(s.hi);
        ScopeGuard g(*this);  // the counter must not leak
        for (BigInt i = lo; i <= hi; ++i) {
            bind_here(s.name, make_int(i));
            for (const Stmt& st : s.body) {
                exec_stmt(st);
                if (quit_) return;
            }
        }
    }

    // ------------------------------------------------------------ expressions

    Expr eval_ast(const AstNode& a) {
        switch (a.type) {
        case AstNode::Int: return make_int(a.ival);
        case AstNode::Float: return make_float(a.fval);
        case AstNode::Ident: {
            if (const Expr* e = lookup(a.text)) return *e;
            if (cfg_.auto_symbols) return make_sym(a.text);
            throw eval_error("unbound identifier '" + a.text + "'");
        }
        case AstNode::Neg: return neg(eval_ast(a.kids[0]));
        case AstNode::Add:
            return make_add({eval_ast(a.kids[0]), eval_ast(a.kids[1])});
        case AstNode::Sub:
            return sub(eval_ast(a.kids[0]), eval_ast(a.kids[1]));
        case AstNode::Mul:
            return make_mul({eval_ast(a.kids[0]), eval_ast(a.kids[1])});
        case AstNode::Div:
            return div(eval_ast(a.kids[0]), eval_ast(a.kids[1]));
        case AstNode::Pow:
            return make_pow(eval_ast(a.kids[0]), eval_ast(a.kids[1]));
        case AstNode::Call: return eval_call(a);
        case AstNode::List:
            throw eval_error("a list is only valid as a builtin argument");
        case AstNode::KV:
            throw eval_error("'name = value' is only valid inside subs(...)");
        }
        throw eval_error("malformed expression");
    }

    void need_args(const AstNode& a, size_t n, const char* sig) {
        if (a.kids.size() != n)
            throw eval_error(std::string(a.text) + " expects " + sig);
    }

    Expr plain_arg(const AstNode& a, size_t i) {
        const AstNode& k = a.kids[i];
        if (k.type == AstNode::List || k.type == AstNode::KV)
            throw eval_error(a.text + " argument " + std::to_string(i + 1) +
                             " must be an expression");
        return eval_ast(k);
    }

    std::string symbol_arg(const AstNode& a, size_t i) {
        Expr e = plain_arg(a, i);
        if (e.kind() != Kind::Symbol)
            throw eval_error(a.text + " argument " + std::to_string(i + 1) +
                             " must be a symbol");
        return e.name();
    }

    long long int_arg(const AstNode& a, size_t i, long long lo, long long hi) {
        Expr e = plain_arg(a, i);
        if (e.kind() != Kind::Integer)
            throw eval_error(a.text + " argument " + std::to_string(i + 1) +
                             " must be an integer");
        BigInt v = numerator(e.num().q);
        if (v < lo || v > hi)
            throw eval_error(a.text + " argument " + std::to_string(i + 1) +
                             " is out of range");
        return v.convert_to<long long>();
    }

    double number_arg(const AstNode& a, size_t i) {
        Expr e = plain_arg(a, i);
        if (e.is_num()) return e.num().to_double();
        try {
            return eval_num(e, {});
        } catch (const error&) {
            throw eval_error(a.text + " argument " + std::to_string(i + 1) +
                             " must be numeric");
        }
    }

    Expr eval_call(const AstNode& a) {
        const std::string& f = a.text;
        if (f == "sin" || f == "cos" || f == "exp" || f == "log" ||
            f == "gamma" || f == "S02") {
            need_args(a, 1, "one argument");
            FunId id = f == "sin"   ? FunId::Sin
                       : f == "cos" ? FunId::Cos
                       : f == "exp" ? FunId::Exp
                       : f == "log" ? FunId::Log
                       : f == "gamma" ? FunId::Gamma
                                      : FunId::S02;
            return make_fun(id, {plain_arg(a, 0)});
        }
        if (f == "Li") {
            need_args(a, 2, "(weight, argument)");
            return make_fun(FunId::Li, {plain_arg(a, 0), plain_arg(a, 1)});
        }
        if (f == "expand") {
            need_args(a, 1, "one argument");
            return expand(plain_arg(a, 0));
        }
        if (f == "normal") {
            need_args(a, 1, "one argument");
            return normal(plain_arg(a, 0));
        }
        if (f == "diff") {
            if (a.kids.size() != 2 && a.kids.size() != 3)
                throw eval_error("diff expects (expr, symbol) or "
                                 "(expr, symbol, order)");
            Expr e = plain_arg(a, 0);
            std::string x = symbol_arg(a, 1);
            long long n =
                a.kids.size() == 3 ? int_arg(a, 2, 0, 1000) : 1;
            return diff(e, x, n);
        }
        if (f == "subs") return builtin_subs(a);
        if (f == "factorpoly") {
            need_args(a, 2, "(expr, symbol)");
            Expr e = plain_arg(a, 0);
            std::string x = symbol_arg(a, 1);
            return factorpoly(e, x, cfg_.seed);
        }
        if (f == "intnum") return builtin_intnum(a);
        if (f == "plot") return builtin_plot(a);
        if (f == "expand_typeA") return builtin_expand_typeA(a);

        auto it = funcs_.find(f);
        if (it == funcs_.end())
            throw eval_error("unknown function '" + f + "'");
        const FuncMacro& m = it->second;
        if (a.kids.size() != m.params.size())
            throw eval_error("function '" + f + "' expects " +
                             std::to_string(m.params.size()) + " argument" +
                             (m.params.size() == 1 ? "" : "s"));
        // call-by-value: arguments are evaluated before substitution
        std::vector<Expr> args;
        args.reserve(a.kids.size());
        for (size_t i = 0; i < a.kids.size(); ++i)
            args.push_back(plain_arg(a, i));
        ScopeGuard g(*this);
        for (size_t i = 0; i < args.size(); ++i)
            bind_here(m.params[i], args[i]);
        return eval_ast(m.body);
    }

    Expr builtin_subs(const AstNode& a) {
        BindingSet b;
        if (a.kids.size() >= 2 && a.kids[1].type == AstNode::KV) {
            // subs(e, x = 1, y = 2, ...)
            for (size_t i = 1; i < a.kids.size(); ++i) {
                const AstNode& kv = a.kids[i];
                if (kv.type != AstNode::KV)
                    throw eval_error("subs expects name = value pairs");
                b[kv.text] = eval_ast(kv.kids[0]);
            }
        } else if (a.kids.size() == 3) {
            // subs(e, x, value)
            b[symbol_arg(a, 1)] = plain_arg(a, 2);
        } else {
            throw eval_error("subs expects (expr, symbol, value) or "
                             "(expr, name = value, ...)");
        }
        return subs(plain_arg(a, 0), b);
    }

    Expr builtin_intnum(const AstNode& a) {
        std::vector<std::string> vars;
        std::vector<double> lows, highs;
        const auto& k = a.kids;
        if (k.size() == 4 && k[1].type == AstNode::List) {
            // intnum(f, [vars], [lows], [highs])
            if (k[2].type != AstNode::List || k[3].type != AstNode::List)
                throw eval_error("intnum bounds must be lists here");
            const size_t d = k[1].kids.size();
            if (d == 0 || k[2].kids.size() != d || k[3].kids.size() != d)
                throw eval_error(
                    "intnum lists must share one length per dimension");
            for (size_t i = 0; i < d; ++i) {
                Expr v = eval_ast(k[1].kids[i]);
                if (v.kind() != Kind::Symbol)
                    throw eval_error("integration variables must be symbols");
                vars.push_back(v.name());
                lows.push_back(list_number(k[2].kids[i]));
                highs.push_back(list_number(k[3].kids[i]));
            }
        } else if (k.size() == 4) {
            // intnum(f, x, lo, hi)
            vars.push_back(symbol_arg(a, 1));
            lows.push_back(number_arg(a, 2));
            highs.push_back(number_arg(a, 3));
        } else if (k.size() == 7) {
            // intnum(f, x, xlo, xhi, y, ylo, yhi)
            vars.push_back(symbol_arg(a, 1));
            lows.push_back(number_arg(a, 2));
            highs.push_back(number_arg(a, 3));
            vars.push_back(symbol_arg(a, 4));
            lows.push_back(number_arg(a, 5));
            highs.push_back(number_arg(a, 6));
        } else {
            throw eval_error("intnum expects (f, [vars], [lows], [highs]), "
                             "(f, x, lo, hi) or (f, x, xlo, xhi, y, ylo, yhi)");
        }
        Expr f = plain_arg(a, 0);
        VegasConfig cfg;
        cfg.iter_low = static_cast<int>(register_value("int_iter_low"));
        cfg.calls_low = static_cast<long>(register_value("int_calls_low"));
        cfg.iter_high = static_cast<int>(register_value("int_iter_high"));
        cfg.calls_high = static_cast<long>(register_value("int_calls_high"));
        cfg.seed = cfg_.seed + static_cast<std::uint64_t>(intnum_counter_++);
        IntResult r = intnum(f, vars, lows, highs, cfg);
        bind_global("int_res", make_float(r.value));
        bind_global("int_err", make_float(r.error));
        bind_global("int_chi2", make_float(r.chi2));
        return make_float(r.value);
    }

    double list_number(const AstNode& el) {
        if (el.type == AstNode::List || el.type == AstNode::KV)
            throw eval_error("bounds must be numeric expressions");
        Expr e = eval_ast(el);
        if (e.is_num()) return e.num().to_double();
        try {
            return eval_num(e, {});
        } catch (const error&) {
            throw eval_error("bounds must be numeric expressions");
        }
    }

    std::string next_plot_basename() {
        char name[32];
        std::snprintf(name, sizeof name, "plot_%04d", ++plot_counter_);
        return interp_detail::join_path(cfg_.plot_dir, name);
    }

    Expr builtin_plot(const AstNode& a) {
        if (a.kids.size() == 4) {
            Expr f = plain_arg(a, 0);
            std::string x = symbol_arg(a, 1);
            plot1d(f, x, number_arg(a, 2), number_arg(a, 3), 500,
                   next_plot_basename(), render_raw(f));
            return f;
        }
        if (a.kids.size() == 7) {
            Expr f = plain_arg(a, 0);
            std::string x = symbol_arg(a, 1);
            std::string y = symbol_arg(a, 2);
            plot2d(f, x, y, number_arg(a, 3), number_arg(a, 4),
                   number_arg(a, 5), number_arg(a, 6), 100, 100,
                   next_plot_basename(), render_raw(f));
            return f;
        }
        throw eval_error(
            "plot expects (f, x, lo, hi) or (f, x, y, xlo, xhi, ylo, yhi)");
    }

    // ------------------------------------------------- epsilon expansion

    std::vector<GammaArg> gamma_list(const AstNode& node,
                                     std::set<std::string>& syms) {
        if (node.type != AstNode::List)
            throw eval_error("expand_typeA parameter lists must be written "
                             "in brackets");
        std::vector<GammaArg> out;
        for (const AstNode& el : node.kids) {
            Expr g = expand(eval_ast(el));
            GammaArg arg{BigRat(0), BigRat(0)};
            std::vector<Expr> terms;
            if (g.kind() == Kind::Add)
                for (size_t i = 0; i < g.nkids(); ++i)
                    terms.push_back(g.kid(i));
            else
                terms.push_back(g);
            for (const Expr& t : terms) {
                if (t.is_num()) {
                    if (t.num().flt)
                        throw eval_error(
                            "gamma arguments must be exact rationals");
                    arg.offset += t.num().q;
                    continue;
                }
                BigRat c(1);
                Expr core = t;
                if (t.kind() == Kind::Mul && t.nkids() == 2 &&
                    t.kid(0).is_num() && !t.kid(0).num().flt) {
                    c = t.kid(0).num().q;
                    core = t.kid(1);
                }
                if (core.kind() != Kind::Symbol)
                    throw eval_error("gamma arguments must be linear in the "
                                     "expansion symbol");
                syms.insert(core.name());
                arg.slope += c;
            }
            out.push_back(arg);
        }
        return out;
    }

    Expr builtin_expand_typeA(const AstNode& a) {
        need_args(a, 6, "(x, [a...], [b...], [p...], [q...], order)");
        Expr xe = plain_arg(a, 0);
        if (!xe.is_num())
            throw eval_error("expand_typeA needs a numeric argument value");
        double x = xe.num().to_double();
        std::set<std::string> syms;
        TypeAFunction f;
        f.a = gamma_list(a.kids[1], syms);
        f.b = gamma_list(a.kids[2], syms);
        f.p = gamma_list(a.kids[3], syms);
        f.q = gamma_list(a.kids[4], syms);
        if (syms.size() > 1)
            throw eval_error(
                "gamma arguments must share one expansion symbol");
        int order = static_cast<int>(int_arg(a, 5, 1, 32));

        EpsLaurent at_x = set_expansion(f, order, x);

        // recognition runs over a fixed interior sample grid
        const std::vector<double> xs = {0.15, 0.25, 0.35, 0.45,
                                        0.55, 0.65, 0.75};
        std::map<double, EpsLaurent> grid;
        bool have_grid = true;
        try {
            for (double xi : xs) grid.emplace(xi, set_expansion(f, order, xi));
        } catch (const error&) {
            have_grid = false;
        }
        std::vector<BasisFn> basis;
        basis.push_back({make_int(1), [](double) { return 1.0; }});
        for (int w = 1; w <= 4; ++w)
            basis.push_back({make_fun(FunId::Li, {make_int(w), make_sym("x")}),
                             [w](double t) { return polylog_num(w, t); }});

        for (int k = at_x.lo; k < order; ++k) {
            std::optional<Expr> form;
            if (have_grid)
                form = recognize(
                    [&grid, k](double t) { return grid.at(t).coeff(k); },
                    basis, xs);
            out_ << "eps^" << k << ": ";
            if (form)
                out_ << render_raw(*form);
            else
                out_ << format_double(at_x.coeff(k), cfg_.digits);
            out_ << "\n";
        }
        return make_int(0);
    }
};

} // namespace mercutio
