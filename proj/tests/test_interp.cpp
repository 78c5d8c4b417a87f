#include <catch2/catch_amalgamated.hpp>

#include "mercutio/interp.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace mercutio;
using Catch::Matchers::ContainsSubstring;

namespace {

struct Run {
    std::string out, diag;
    bool more = true;  // false once quit was requested
};

Run run(const std::string& src, SessionConfig cfg = {}) {
    std::ostringstream out, diag;
    Session s(cfg, out, diag);
    Run r;
    r.more = s.run_source(src);
    r.out = out.str();
    r.diag = diag.str();
    return r;
}

std::string error_of(const std::string& src, SessionConfig cfg = {}) {
    std::ostringstream out, diag;
    Session s(cfg, out, diag);
    try {
        s.run_source(src);
    } catch (const error& e) {
        return e.what();
    }
    return "";
}

double number_of(Session& s, const std::string& name) {
    return s.eval_expression(name).num().to_double();
}

std::filesystem::path scratch_dir(const char* sub) {
    auto d = std::filesystem::temp_directory_path() / "mercutio_interp" / sub;
    std::filesystem::create_directories(d);
    return d;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
}

SessionConfig raw_cfg() {
    SessionConfig cfg;
    cfg.format = OutputFormat::Raw;
    return cfg;
}

// the reduced schedule keeps Monte Carlo tests fast
const char* kSmallSchedule =
    "int_iter_low = 2; int_calls_low = 300; "
    "int_iter_high = 3; int_calls_high = 1500; ";

} // namespace

TEST_CASE("assignment and arithmetic") {
    CHECK(run("i = 1; i = i + 1; print(i);").out == "2\n");
    CHECK(run("x = 2^10; print(x);").out == "1024\n");
    CHECK(run("print(1/3 + 1/6);", raw_cfg()).out == "1/2\n");
}

TEST_CASE("printing uses the session format") {
    CHECK(run("symbol a, b; print(expand((a+b)^2));").out ==
          " 2    2\n"
          "a  + b  + 2 a b\n");
    CHECK(run("symbol a, b; print(expand((a+b)^2));", raw_cfg()).out ==
          "a^2+b^2+2*a*b\n");
    SessionConfig latex;
    latex.format = OutputFormat::Latex;
    CHECK(run("symbol x; print(x^2);", latex).out == "x^{2}\n");
}

TEST_CASE("rawprint and printlatex override the format") {
    CHECK(run("symbol x; rawprint(x + 1);").out == "x+1\n");
    CHECK(run("printlatex(1/2);").out == "\\frac{1}{2}\n");
}

TEST_CASE("float printing respects the digits option") {
    CHECK(run("x = 0.123456789; print(x);").out == "0.123457\n");
    SessionConfig two;
    two.digits = 2;
    CHECK(run("x = 0.123456789; print(x);", two).out == "0.12\n");
}

TEST_CASE("expression statements are silent") {
    Run r = run("1 + 1; symbol x; x^2;");
    CHECK(r.out.empty());
    CHECK(r.diag.empty());
}

TEST_CASE("function definitions and calls") {
    CHECK(run("sq(u) := u^2; print(sq(7));").out == "49\n");
    // arguments are evaluated before the body runs
    CHECK(run("f(u) := u + u; i = 3; print(f(i + 1));").out == "8\n");
    // free names in the body resolve at call time
    CHECK(run("f(u) := u + c; c = 10; print(f(1));").out == "11\n");
    // parameters bind in a child scope and do not leak
    CHECK_THROWS_WITH(run("f(u) := u; f(1); print(u);"),
                      ContainsSubstring("unbound identifier 'u'"));
}

TEST_CASE("function arity and name errors") {
    CHECK(error_of("f(u) := u^2; f(1, 2);") ==
          "function 'f' expects 1 argument");
    CHECK(error_of("nosuch(1);") == "unknown function 'nosuch'");
}

TEST_CASE("recursive definitions are rejected") {
    CHECK(error_of("f(n) := f(n - 1);") ==
          "function 'f' may not be recursive");
    // ...including through a chain of definitions
    CHECK(error_of("g(u) := h(u); h(u) := g(u);") ==
          "function 'h' may not be recursive");
}

TEST_CASE("builtin names are reserved") {
    CHECK_THROWS_WITH(run("sin = 1;"),
                      ContainsSubstring("cannot assign to builtin 'sin'"));
    CHECK_THROWS_WITH(run("symbol sin;"),
                      ContainsSubstring("cannot redeclare builtin 'sin'"));
    CHECK_THROWS_WITH(run("expand(u) := u;"),
                      ContainsSubstring("cannot redefine builtin 'expand'"));
}

TEST_CASE("misplaced lists and keyword pairs") {
    // the grammar already confines lists to call arguments
    CHECK_THROWS_WITH(run("x = [1, 2];"),
                      ContainsSubstring("expected an expression, got '['"));
    CHECK_THROWS_WITH(run("symbol x; sin(x = 1);"),
                      ContainsSubstring("sin argument 1 must be an expression"));
    CHECK_THROWS_WITH(run("print(zzz);"),
                      ContainsSubstring("unbound identifier 'zzz'"));
}

TEST_CASE("for loops run inclusive integer ranges") {
    CHECK(run("s = 0; for i in 1..10 { s = s + i; } print(s);").out == "55\n");
    // bounds may be integer-valued names
    CHECK(run("n = 3; s = 0; for i in 1..n { s = s + i; } print(s);").out ==
          "6\n");
    // empty range runs zero times
    CHECK(run("s = 0; for i in 3..2 { s = s + 1; } print(s);").out == "0\n");
    CHECK_THROWS_WITH(run("symbol x; for i in 1..x { }"),
                      ContainsSubstring("loop bound 'x' must be an integer"));
}

TEST_CASE("loop counters do not leak") {
    std::ostringstream out, diag;
    Session s({}, out, diag);
    s.run_source("s = 0; for i in 1..4 { s = s + i; }");
    CHECK_THROWS_WITH(s.eval_expression("i"),
                      ContainsSubstring("unbound identifier 'i'"));
    // an outer binding of the same name is untouched
    CHECK(run("i = 99; for i in 1..3 { } print(i);").out == "99\n");
}

TEST_CASE("blocks open a scope") {
    std::ostringstream out, diag;
    Session s({}, out, diag);
    s.run_source("{ t = 5; print(t); }");
    CHECK(out.str() == "5\n");
    CHECK_THROWS_WITH(s.eval_expression("t"),
                      ContainsSubstring("unbound identifier 't'"));
    // assignment to an existing outer name updates it in place
    CHECK(run("v = 1; { v = 2; } print(v);").out == "2\n");
    CHECK(run("{ int_calls_low = 777; } print(int_calls_low);").out ==
          "777\n");
}

TEST_CASE("integrator registers") {
    CHECK(run("print(int_iter_low); print(int_calls_high);").out ==
          "5\n100000\n");
    CHECK(run("int_calls_low = 500; print(int_calls_low);").out == "500\n");
    // bad register contents surface when the integrator reads them
    CHECK_THROWS_WITH(
        run("symbol x; int_calls_low = 0; intnum(x, x, 0, 1);"),
        ContainsSubstring("register 'int_calls_low' is out of range"));
    CHECK_THROWS_WITH(
        run("symbol x, y; int_iter_low = y; intnum(x, x, 0, 1);"),
        ContainsSubstring("register 'int_iter_low' must hold an integer"));
}

TEST_CASE("intnum forms and result registers") {
    std::ostringstream out, diag;
    Session s({}, out, diag);

    s.run_source(kSmallSchedule);
    s.run_source("symbol x, y, z; v = intnum(x, x, 0, 1);");
    double v1 = number_of(s, "v");
    CHECK(v1 == Catch::Approx(0.5).margin(0.05));
    CHECK(number_of(s, "int_res") == v1);
    CHECK(number_of(s, "int_err") > 0.0);
    CHECK(number_of(s, "int_err") < 0.05);

    s.run_source("w = intnum(x*y, x, 0, 1, y, 0, 1);");
    CHECK(number_of(s, "w") == Catch::Approx(0.25).margin(0.05));

    s.run_source("u = intnum(x*y*z, [x, y, z], [0, 0, 0], [1, 1, 1]);");
    CHECK(number_of(s, "u") == Catch::Approx(0.125).margin(0.05));
    CHECK(number_of(s, "int_res") == number_of(s, "u"));
}

TEST_CASE("intnum argument validation") {
    CHECK_THROWS_WITH(run("intnum(1, 2, 0, 1);"),
                      ContainsSubstring("must be a symbol"));
    CHECK_THROWS_WITH(run("symbol x; intnum(x, x, 0);"),
                      ContainsSubstring("intnum expects"));
}

TEST_CASE("repeated integrations advance the stream") {
    std::ostringstream out, diag;
    Session s({}, out, diag);
    s.run_source(kSmallSchedule);
    s.run_source("symbol x; a = intnum(x, x, 0, 1); b = intnum(x, x, 0, 1);");
    // same integral, fresh sample stream: estimates agree but not bitwise
    CHECK(number_of(s, "a") == Catch::Approx(number_of(s, "b")).margin(0.05));
    CHECK(number_of(s, "a") != number_of(s, "b"));
}

TEST_CASE("sessions with one seed reproduce bytes") {
    const std::string script =
        std::string("symbol x, y; ") + kSmallSchedule +
        "intnum(x*y, [x, y], [0, 0], [1, 1]); "
        "print(int_res); print(int_err);";
    SessionConfig cfg;
    cfg.seed = 3;
    Run a = run(script, cfg);
    Run b = run(script, cfg);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
    cfg.seed = 4;
    CHECK(run(script, cfg).out != a.out);
}

TEST_CASE("factorpoly and subs through the language") {
    SessionConfig cfg = raw_cfg();
    CHECK(run("symbol x; print(factorpoly(expand((x+2)^2*(x+3)), x));",
              cfg).out == "(x+2)^2*(x+3)\n");
    CHECK(run("symbol x; print(subs(x^2, x, 3));").out == "9\n");
    CHECK(run("symbol x, y; print(subs(x^2 + y, x = 2, y = 3));").out ==
          "7\n");
    CHECK_THROWS_WITH(run("symbol x; subs(x, 1, 2);"),
                      ContainsSubstring("must be a symbol"));
    CHECK_THROWS_WITH(run("symbol x; subs(x);"),
                      ContainsSubstring("subs expects"));
}

TEST_CASE("derivatives and known functions through the language") {
    SessionConfig cfg = raw_cfg();
    CHECK(run("symbol x; print(diff(x^5, x, 2));", cfg).out == "20*x^3\n");
    CHECK(run("symbol x; print(diff(sin(x), x));", cfg).out == "cos(x)\n");
    CHECK(run("symbol x; print(Li(2, x));", cfg).out == "Li(2,x)\n");
    CHECK(run("symbol x; print(S02(x));", cfg).out == "S02(x)\n");
    CHECK(run("symbol x; print(gamma(x));", cfg).out == "gamma(x)\n");
    CHECK(run("symbol x; print(normal(exp(-x^2)/exp(-x^2)));", cfg).out ==
          "1\n");
}

TEST_CASE("series expansion of gamma products, recognized orders") {
    Run r = run("symbol eps; "
                "expand_typeA(0.5, [1, -eps], [1 - eps], [1 - eps], "
                "[1, -eps], 5);");
    CHECK(r.out ==
          "eps^0: 1\n"
          "eps^1: -Li(1,x)\n"
          "eps^2: -Li(2,x)\n"
          "eps^3: -Li(3,x)\n"
          "eps^4: -Li(4,x)\n");
}

TEST_CASE("series expansion of gamma products, numeric orders") {
    Run r = run("symbol eps; "
                "expand_typeA(0.5, [1, 1 + eps], [2], "
                "[1 - 2*eps, 1 - eps, -eps], "
                "[1 + eps, 1 - eps, 1 - eps, 1, 1, 1 - 2*eps], 1);");
    CHECK(r.out ==
          "eps^-1: -1.38629\n"
          "eps^0: -0.480453\n");
}

TEST_CASE("series expansion argument validation") {
    CHECK_THROWS_WITH(
        run("symbol eps; expand_typeA(0.5, [1.5 + eps], [1], [1], [1], 2);"),
        ContainsSubstring("gamma arguments must be exact rationals"));
    CHECK_THROWS_WITH(
        run("symbol eps; expand_typeA(0.5, [1.5*eps], [1], [1], [1], 2);"),
        ContainsSubstring("linear in the expansion symbol"));
    CHECK_THROWS_WITH(
        run("symbol eps, mu; "
            "expand_typeA(0.5, [1 + eps], [1 + mu], [1], [1], 2);"),
        ContainsSubstring("share one expansion symbol"));
}

TEST_CASE("quit stops execution") {
    std::ostringstream out, diag;
    Session s({}, out, diag);
    bool more = s.run_source("print(1); quit; print(2);");
    CHECK_FALSE(more);
    CHECK(s.quit_requested());
    CHECK(out.str() == "1\n");
}

TEST_CASE("auto symbols for one-shot evaluation") {
    SessionConfig cfg;
    cfg.auto_symbols = true;
    std::ostringstream out, diag;
    Session s(cfg, out, diag);
    Expr e = s.eval_expression("q + 1");
    CHECK(free_symbols(e) == std::set<std::string>{"q"});
}

TEST_CASE("executable scripts must be one braced block") {
    auto d = scratch_dir("exec");
    write_file(d / "ok.mc", "{\ns = 3;\nprint(s + 4);\n}\n");
    write_file(d / "noblock.mc", "print(1);\n");

    std::ostringstream out, diag;
    Session s({}, out, diag);
    CHECK(s.run_script((d / "ok.mc").string(), true));
    CHECK(out.str() == "7\n");
    // script-local names vanish with the script's scope
    CHECK_THROWS_WITH(s.eval_expression("s"),
                      ContainsSubstring("unbound identifier 's'"));

    CHECK_FALSE(s.run_script((d / "noblock.mc").string(), true));
    CHECK_THAT(diag.str(),
               ContainsSubstring("an executable script must be a single "
                                 "braced block"));
    CHECK(s.failed());
}

TEST_CASE("missing scripts are diagnosed, not fatal") {
    std::ostringstream out, diag;
    Session s({}, out, diag);
    CHECK_FALSE(s.run_script("no_such_file.mc", true));
    CHECK_THAT(diag.str(),
               ContainsSubstring("error: cannot open no_such_file.mc"));
    CHECK(s.failed());
    // the session keeps working
    s.run_source("print(2 + 2);");
    CHECK(out.str() == "4\n");
}

TEST_CASE("load mode registers function definitions only") {
    auto d = scratch_dir("load");
    write_file(d / "mixed.mc", "inc(u) := u + 1;\nprint(1);\n");

    std::ostringstream out, diag;
    Session s({}, out, diag);
    CHECK(s.run_script((d / "mixed.mc").string(), false));
    CHECK_THAT(diag.str(),
               ContainsSubstring("line 2: only function definitions load "
                                 "here; statement ignored"));
    CHECK(out.str().empty());
    s.run_source("print(inc(41));");
    CHECK(out.str() == "42\n");
}

TEST_CASE("relative includes resolve against the including script") {
    auto d = scratch_dir("rel");
    std::filesystem::create_directories(d / "lib");
    write_file(d / "lib" / "defs.mc", "sq(u) := u^2;\n");
    write_file(d / "outer.mc", "{\n.L lib/defs.mc\nprint(sq(5));\n}\n");

    std::ostringstream out, diag;
    Session s({}, out, diag);
    CHECK(s.run_script((d / "outer.mc").string(), true));
    CHECK(out.str() == "25\n");
    CHECK(diag.str().empty());
}

TEST_CASE("script runtime errors are diagnosed with the path") {
    auto d = scratch_dir("err");
    write_file(d / "bad.mc", "{\nprint(zzz9);\n}\n");
    write_file(d / "badparse.mc", "1 +* 2;\n");

    std::ostringstream out, diag;
    Session s({}, out, diag);
    CHECK_FALSE(s.run_script((d / "bad.mc").string(), true));
    CHECK_THAT(diag.str(), ContainsSubstring("bad.mc: error: unbound "
                                             "identifier 'zzz9'"));
    CHECK_FALSE(s.run_script((d / "badparse.mc").string(), true));
    CHECK_THAT(diag.str(), ContainsSubstring("badparse.mc: line 1"));
    CHECK(s.failed());
}

TEST_CASE("include depth is capped") {
    auto d = scratch_dir("depth");
    write_file(d / "self.mc", "{\n.x self.mc\n}\n");

    std::ostringstream out, diag;
    Session s({}, out, diag);
    s.run_script((d / "self.mc").string(), true);
    CHECK_THAT(diag.str(),
               ContainsSubstring("script include depth exceeded"));
    CHECK(s.failed());
}

TEST_CASE("plots are numbered per session") {
    auto d = scratch_dir("plots");
    SessionConfig cfg;
    cfg.plot_dir = d.string();
    std::ostringstream out, diag;
    Session s(cfg, out, diag);
    s.run_source("symbol x, y; plot(sin(x), x, 0, 6); "
                 "plot(x*y, x, y, 0, 1, 0, 1);");
    CHECK(std::filesystem::exists(d / "plot_0001.tsv"));
    CHECK(std::filesystem::exists(d / "plot_0001.gp"));
    CHECK(std::filesystem::exists(d / "plot_0002.tsv"));
    CHECK(std::filesystem::exists(d / "plot_0002.gp"));
    CHECK(std::filesystem::file_size(d / "plot_0001.tsv") > 0);
}

TEST_CASE("repl echoes prompts and results") {
    std::istringstream in("print(1+1);\nquit\n");
    std::ostringstream out, diag;
    Session s({}, out, diag);
    CHECK(s.repl(in) == 0);
    CHECK(out.str() == "mercutio> 2\nmercutio> ");
    CHECK(diag.str().empty());
}

TEST_CASE("repl keeps reading until input completes") {
    std::istringstream in("print(\n1+1\n);\nquit\n");
    std::ostringstream out, diag;
    Session s({}, out, diag);
    CHECK(s.repl(in) == 0);
    CHECK(out.str() == "mercutio>     ... >     ... > 2\nmercutio> ");
}

TEST_CASE("repl recovers from errors") {
    std::istringstream in("print(zzz);\n1 +* 2;\nprint(2);\nquit\n");
    std::ostringstream out, diag;
    Session s({}, out, diag);
    CHECK(s.repl(in) == 0);
    CHECK_THAT(diag.str(),
               ContainsSubstring("error: unbound identifier 'zzz'"));
    CHECK_THAT(diag.str(), ContainsSubstring("error: line 1"));
    CHECK_THAT(out.str(), ContainsSubstring("2\n"));
}

TEST_CASE("repl ends cleanly at end of input") {
    std::istringstream in("print(7);\n");
    std::ostringstream out, diag;
    Session s({}, out, diag);
    CHECK(s.repl(in) == 0);
    CHECK(out.str() == "mercutio> 7\nmercutio> \n");
}
