#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <mercutio/bytecode.hpp>
#include <mercutio/interp.hpp>

using namespace mercutio;

int main(int argc, char** argv) {
    CLI::App app{"mercutio - a small computer algebra system"};
    app.require_subcommand(0, 1);

    std::string format = "ascii";
    SessionConfig cfg;
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"ascii", "latex", "raw"}))
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    app.add_option("--digits", cfg.digits, "float display digits")
        ->capture_default_str();
    app.add_option("--plot-dir", cfg.plot_dir, "directory for plot files")
        ->capture_default_str();

    std::string script_path;
    CLI::App* run = app.add_subcommand("run", "execute a script file");
    run->fallthrough();
    run->add_option("file", script_path, "script path")->required();

    std::string stmt;
    bool disasm = false;
    CLI::App* ev = app.add_subcommand("eval", "evaluate statements");
    ev->fallthrough();
    ev->add_option("statement", stmt, "statements to execute")->required();
    ev->add_flag("--disasm", disasm,
                 "treat the argument as an expression and print its compiled "
                 "instruction listing");

    CLI11_PARSE(app, argc, argv);

    cfg.format = format == "latex" ? OutputFormat::Latex
                 : format == "raw" ? OutputFormat::Raw
                                   : OutputFormat::Ascii;

    if (run->parsed()) {
        Session session(cfg);
        session.run_script(script_path, /*execute=*/true);
        return session.failed() ? 1 : 0;
    }

    if (ev->parsed()) {
        cfg.auto_symbols = true;
        Session session(cfg);
        if (disasm) {
            try {
                Expr e = session.eval_expression(stmt);
                std::set<std::string> syms = free_symbols(e);
                std::vector<std::string> vars(syms.begin(), syms.end());
                std::cout << disassemble(compile(e, vars));
            } catch (const error& ex) {
                std::cerr << "error: " << ex.what() << "\n";
                return 1;
            }
            return 0;
        }
        try {
            session.run_source(stmt);
        } catch (const error& ex) {
            std::cerr << "error: " << ex.what() << "\n";
            return 1;
        }
        return session.failed() ? 1 : 0;
    }

    Session session(cfg);
    return session.repl(std::cin);
}
