#pragma once

#include "mercutio/numeric.hpp"

#include <cstdlib>
#include <string>
#include <vector>

namespace mercutio {

enum class Tok : uint8_t {
    Ident, Int, Float, Str,
    Plus, Minus, Star, Slash, Caret,
    Assign, Walrus,
    LParen, RParen, LBracket, RBracket, LBrace, RBrace,
    Comma, Semi, DotDot,
    KwSymbol, KwFor, KwIn, KwPrint, KwRawPrint, KwPrintLatex, KwQuit,
    DotL, DotX, Path,
    End,
};

struct Token {
    Tok type;
    std::string text;
    int line = 1;
    int col = 1;
};

inline std::string tok_describe(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Float: return "float";
    case Tok::Str: return "string";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::Assign: return "'='";
    case Tok::Walrus: return "':='";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::DotDot: return "'..'";
    case Tok::KwSymbol: return "'symbol'";
    case Tok::KwFor: return "'for'";
    case Tok::KwIn: return "'in'";
    case Tok::KwPrint: return "'print'";
    case Tok::KwRawPrint: return "'rawprint'";
    case Tok::KwPrintLatex: return "'printlatex'";
    case Tok::KwQuit: return "'quit'";
    case Tok::DotL: return "'.L'";
    case Tok::DotX: return "'.x'";
    case Tok::Path: return "path";
    case Tok::End: return "end of input";
    }
    return "?";
}

inline std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    size_t i = 0, n = src.size();
    int line = 1, col = 1;
    bool at_line_start = true;
    auto advance = [&](size_t k) {
        for (size_t j = 0; j < k; ++j) {
            if (src[i + j] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += k;
    };
    auto err = [&](const std::string& msg) {
        throw parse_error("line " + std::to_string(line) + ", col " + std::to_string(col) +
                          ": " + msg);
    };
    auto push = [&](Tok t, std::string text, int l, int c) {
        out.push_back(Token{t, std::move(text), l, c});
    };
    while (i < n) {
        char c = src[i];
        if (c == '\n') {
            advance(1);
            at_line_start = true;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && src[i] != '\n') advance(1);
            continue;
        }
        int tl = line, tc = col;
        if (at_line_start && c == '.' && i + 1 < n && (src[i + 1] == 'L' || src[i + 1] == 'x') &&
            (i + 2 >= n || src[i + 2] == ' ' || src[i + 2] == '\t')) {
            Tok t = src[i + 1] == 'L' ? Tok::DotL : Tok::DotX;
            advance(2);
            size_t start = i;
            while (i < n && src[i] != '\n') advance(1);
            std::string path = src.substr(start, i - start);
            size_t b = path.find_first_not_of(" \t");
            size_t e = path.find_last_not_of(" \t\r");
            path = b == std::string::npos ? "" : path.substr(b, e - b + 1);
            if (path.empty()) err("expected a file path after dot-command");
            push(t, t == Tok::DotL ? ".L" : ".x", tl, tc);
            push(Tok::Path, path, tl, tc + 3);
            continue;
        }
        at_line_start = false;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = i;
            bool is_float = false;
            while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) advance(1);
            if (i < n && src[i] == '.' && i + 1 < n &&
                std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
                is_float = true;
                advance(1);
                while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) advance(1);
            }
            if (i < n && (src[i] == 'e' || src[i] == 'E')) {
                size_t j = i + 1;
                if (j < n && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) {
                    is_float = true;
                    advance(j - i);
                    while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) advance(1);
                }
            }
            push(is_float ? Tok::Float : Tok::Int, src.substr(start, i - start), tl, tc);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = i;
            while (i < n && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
                advance(1);
            std::string w = src.substr(start, i - start);
            Tok t = Tok::Ident;
            if (w == "symbol") t = Tok::KwSymbol;
            else if (w == "for") t = Tok::KwFor;
            else if (w == "in") t = Tok::KwIn;
            else if (w == "print") t = Tok::KwPrint;
            else if (w == "rawprint") t = Tok::KwRawPrint;
            else if (w == "printlatex") t = Tok::KwPrintLatex;
            else if (w == "quit") t = Tok::KwQuit;
            push(t, std::move(w), tl, tc);
            continue;
        }
        if (c == '"') {
            advance(1);
            size_t start = i;
            while (i < n && src[i] != '"' && src[i] != '\n') advance(1);
            if (i >= n || src[i] != '"') err("unterminated string literal");
            push(Tok::Str, src.substr(start, i - start), tl, tc);
            advance(1);
            continue;
        }
        switch (c) {
        case '+': push(Tok::Plus, "+", tl, tc); advance(1); continue;
        case '-': push(Tok::Minus, "-", tl, tc); advance(1); continue;
        case '*': push(Tok::Star, "*", tl, tc); advance(1); continue;
        case '/': push(Tok::Slash, "/", tl, tc); advance(1); continue;
        case '^': push(Tok::Caret, "^", tl, tc); advance(1); continue;
        case '(': push(Tok::LParen, "(", tl, tc); advance(1); continue;
        case ')': push(Tok::RParen, ")", tl, tc); advance(1); continue;
        case '[': push(Tok::LBracket, "[", tl, tc); advance(1); continue;
        case ']': push(Tok::RBracket, "]", tl, tc); advance(1); continue;
        case '{': push(Tok::LBrace, "{", tl, tc); advance(1); continue;
        case '}': push(Tok::RBrace, "}", tl, tc); advance(1); continue;
        case ',': push(Tok::Comma, ",", tl, tc); advance(1); continue;
        case ';': push(Tok::Semi, ";", tl, tc); advance(1); continue;
        case '=': push(Tok::Assign, "=", tl, tc); advance(1); continue;
        case ':':
            if (i + 1 < n && src[i + 1] == '=') {
                push(Tok::Walrus, ":=", tl, tc);
                advance(2);
                continue;
            }
            err("unexpected character ':'");
            continue;
        case '.':
            if (i + 1 < n && src[i + 1] == '.') {
                push(Tok::DotDot, "..", tl, tc);
                advance(2);
                continue;
            }
            err("unexpected character '.'");
            continue;
        default:
            err(std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back(Token{Tok::End, "", line, col});
    return out;
}

// ------------------------------------------------------------------ AST

struct AstNode {
    enum Type { Int, Float, Ident, Neg, Add, Sub, Mul, Div, Pow, Call, List, KV } type;
    std::string text; // Ident name, Call callee, KV key
    BigInt ival;
    double fval = 0;
    std::vector<AstNode> kids;
    int line = 1, col = 1;
};

struct Stmt {
    enum Type {
        SymbolDecl, Assign, FuncDef, ExprStmt,
        Print, RawPrint, PrintLatex,
        For, Load, Block, Quit,
    } type;
    std::vector<std::pair<std::string, std::string>> symbols; // (name, display)
    std::string name;                                         // Assign/FuncDef target, For counter
    std::vector<std::string> params;
    AstNode expr;     // Assign/FuncDef/ExprStmt/Print*
    AstNode lo, hi;   // For bounds
    std::vector<Stmt> body; // For/Block
    std::string path; // Load
    bool execute = false;
    int line = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

    std::vector<Stmt> parse_program() {
        std::vector<Stmt> out;
        while (!at(Tok::End)) out.push_back(parse_stmt());
        return out;
    }

    AstNode parse_single_expr() {
        AstNode e = parse_expr();
        expect(Tok::End, "after expression");
        return e;
    }

private:
    std::vector<Token> t_;
    size_t p_ = 0;

    const Token& cur() const { return t_[p_]; }
    bool at(Tok t) const { return cur().type == t; }
    const Token& next() { return t_[p_++]; }
    bool accept(Tok t) {
        if (at(t)) {
            ++p_;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error("line " + std::to_string(cur().line) + ", col " +
                          std::to_string(cur().col) + ": " + msg + ", got " +
                          tok_describe(cur().type));
    }
    Token expect(Tok t, const std::string& where) {
        if (!at(t)) fail("expected " + tok_describe(t) + " " + where);
        return next();
    }

    Stmt parse_stmt() {
        Stmt s;
        s.line = cur().line;
        switch (cur().type) {
        case Tok::KwSymbol: {
            next();
            s.type = Stmt::SymbolDecl;
            do {
                Token id = expect(Tok::Ident, "in symbol declaration");
                std::string display;
                if (at(Tok::Str)) display = next().text;
                s.symbols.emplace_back(id.text, display);
            } while (accept(Tok::Comma));
            expect(Tok::Semi, "after symbol declaration");
            return s;
        }
        case Tok::KwFor: {
            next();
            s.type = Stmt::For;
            s.name = expect(Tok::Ident, "as loop counter").text;
            expect(Tok::KwIn, "in for loop");
            s.lo = parse_bound();
            expect(Tok::DotDot, "in for loop range");
            s.hi = parse_bound();
            expect(Tok::LBrace, "to open loop body");
            while (!at(Tok::RBrace)) s.body.push_back(parse_stmt());
            expect(Tok::RBrace, "to close loop body");
            return s;
        }
        case Tok::KwPrint:
        case Tok::KwRawPrint:
        case Tok::KwPrintLatex: {
            Tok kw = next().type;
            s.type = kw == Tok::KwPrint ? Stmt::Print
                     : kw == Tok::KwRawPrint ? Stmt::RawPrint
                                             : Stmt::PrintLatex;
            expect(Tok::LParen, "after print");
            s.expr = parse_expr();
            expect(Tok::RParen, "after print argument");
            expect(Tok::Semi, "after print statement");
            return s;
        }
        case Tok::KwQuit: {
            next();
            s.type = Stmt::Quit;
            accept(Tok::Semi);
            return s;
        }
        case Tok::DotL:
        case Tok::DotX: {
            s.type = Stmt::Load;
            s.execute = next().type == Tok::DotX;
            s.path = expect(Tok::Path, "after dot-command").text;
            return s;
        }
        case Tok::LBrace: {
            next();
            s.type = Stmt::Block;
            while (!at(Tok::RBrace)) s.body.push_back(parse_stmt());
            expect(Tok::RBrace, "to close block");
            return s;
        }
        case Tok::Ident: {
            // lookahead: assignment, function definition, or expression
            if (t_[p_ + 1].type == Tok::Assign) {
                s.type = Stmt::Assign;
                s.name = next().text;
                next();
                s.expr = parse_expr();
                expect(Tok::Semi, "after assignment");
                return s;
            }
            if (t_[p_ + 1].type == Tok::LParen && is_funcdef_head()) {
                s.type = Stmt::FuncDef;
                s.name = next().text;
                next(); // (
                do {
                    s.params.push_back(expect(Tok::Ident, "as parameter name").text);
                } while (accept(Tok::Comma));
                expect(Tok::RParen, "after parameter list");
                expect(Tok::Walrus, "in function definition");
                s.expr = parse_expr();
                expect(Tok::Semi, "after function definition");
                for (size_t i = 0; i < s.params.size(); ++i)
                    for (size_t j = i + 1; j < s.params.size(); ++j)
                        if (s.params[i] == s.params[j])
                            throw parse_error("line " + std::to_string(s.line) +
                                              ": duplicate parameter '" + s.params[i] + "'");
                return s;
            }
            break;
        }
        default: break;
        }
        s.type = Stmt::ExprStmt;
        s.expr = parse_expr();
        expect(Tok::Semi, "after expression statement");
        return s;
    }

    // IDENT '(' ident, ident, ... ')' ':='  — distinguishes definitions from calls
    bool is_funcdef_head() const {
        size_t q = p_ + 2;
        if (t_[q].type != Tok::Ident) return false;
        while (t_[q].type == Tok::Ident) {
            ++q;
            if (t_[q].type == Tok::Comma) {
                ++q;
                continue;
            }
            break;
        }
        return t_[q].type == Tok::RParen && t_[q + 1].type == Tok::Walrus;
    }

    AstNode parse_bound() {
        AstNode b;
        b.line = cur().line;
        b.col = cur().col;
        if (at(Tok::Minus)) {
            next();
            Token v = expect(Tok::Int, "in loop bound");
            b.type = AstNode::Int;
            b.ival = -BigInt(v.text);
            return b;
        }
        if (at(Tok::Int)) {
            b.type = AstNode::Int;
            b.ival = BigInt(next().text);
            return b;
        }
        if (at(Tok::Ident)) {
            b.type = AstNode::Ident;
            b.text = next().text;
            return b;
        }
        fail("expected an integer or name in loop bound");
    }

    AstNode node(AstNode::Type ty) {
        AstNode a;
        a.type = ty;
        a.line = cur().line;
        a.col = cur().col;
        return a;
    }

    AstNode parse_expr() { return parse_add(); }

    AstNode parse_add() {
        AstNode lhs = parse_mul();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            AstNode op = node(at(Tok::Plus) ? AstNode::Add : AstNode::Sub);
            next();
            AstNode rhs = parse_mul();
            op.kids = {std::move(lhs), std::move(rhs)};
            lhs = std::move(op);
        }
        return lhs;
    }

    AstNode parse_mul() {
        AstNode lhs = parse_unary();
        while (at(Tok::Star) || at(Tok::Slash)) {
            AstNode op = node(at(Tok::Star) ? AstNode::Mul : AstNode::Div);
            next();
            AstNode rhs = parse_unary();
            op.kids = {std::move(lhs), std::move(rhs)};
            lhs = std::move(op);
        }
        return lhs;
    }

    AstNode parse_unary() {
        if (at(Tok::Minus)) {
            AstNode op = node(AstNode::Neg);
            next();
            op.kids = {parse_unary()};
            return op;
        }
        if (at(Tok::Plus)) {
            next();
            return parse_unary();
        }
        return parse_pow();
    }

    AstNode parse_pow() {
        AstNode base = parse_atom();
        if (at(Tok::Caret)) {
            AstNode op = node(AstNode::Pow);
            next();
            AstNode exp = parse_unary(); // right-associative, allows -x
            op.kids = {std::move(base), std::move(exp)};
            return op;
        }
        return base;
    }

    AstNode parse_callarg() {
        if (at(Tok::LBracket)) {
            AstNode l = node(AstNode::List);
            next();
            if (!at(Tok::RBracket)) {
                do {
                    l.kids.push_back(parse_expr());
                } while (accept(Tok::Comma));
            }
            expect(Tok::RBracket, "to close list");
            return l;
        }
        if (at(Tok::Ident) && t_[p_ + 1].type == Tok::Assign) {
            AstNode kv = node(AstNode::KV);
            kv.text = next().text;
            next();
            kv.kids = {parse_expr()};
            return kv;
        }
        return parse_expr();
    }

    AstNode parse_atom() {
        switch (cur().type) {
        case Tok::Int: {
            AstNode a = node(AstNode::Int);
            a.ival = BigInt(next().text);
            return a;
        }
        case Tok::Float: {
            AstNode a = node(AstNode::Float);
            a.fval = std::strtod(next().text.c_str(), nullptr);
            return a;
        }
        case Tok::Ident: {
            if (t_[p_ + 1].type == Tok::LParen) {
                AstNode call = node(AstNode::Call);
                call.text = next().text;
                next(); // (
                if (!at(Tok::RParen)) {
                    do {
                        call.kids.push_back(parse_callarg());
                    } while (accept(Tok::Comma));
                }
                expect(Tok::RParen, "to close call");
                return call;
            }
            AstNode a = node(AstNode::Ident);
            a.text = next().text;
            return a;
        }
        case Tok::LParen: {
            next();
            AstNode e = parse_expr();
            expect(Tok::RParen, "to close parenthesis");
            return e;
        }
        default:
            fail("expected an expression");
        }
    }
};

inline std::vector<Stmt> parse_source(const std::string& src) {
    return Parser(tokenize(src)).parse_program();
}

inline AstNode parse_expression(const std::string& src) {
    return Parser(tokenize(src)).parse_single_expr();
}

} // namespace mercutio
