#include "floqeig/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>

#include "floqeig/errors.hpp"

namespace floqeig {

namespace {

enum class TokKind { Number, Ident, Symbol, End };

struct Token {
    TokKind kind;
    std::string text;
    double number = 0.0;
    size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        tok_.pos = i_;
        if (i_ >= s_.size()) {
            tok_ = {TokKind::End, "", 0.0, i_};
            return;
        }
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t end = 0;
            double v = 0.0;
            try {
                v = std::stod(s_.substr(i_), &end);
            } catch (const std::exception&) {
                throw ParseError("bad number at position " + std::to_string(i_) + " in '" + s_ + "'");
            }
            tok_ = {TokKind::Number, s_.substr(i_, end), v, i_};
            i_ += end;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i_;
            while (j < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
                ++j;
            tok_ = {TokKind::Ident, s_.substr(i_, j - i_), 0.0, i_};
            i_ = j;
            return;
        }
        // two-character comparison operators
        if ((c == '<' || c == '>') && i_ + 1 < s_.size() && s_[i_ + 1] == '=') {
            tok_ = {TokKind::Symbol, s_.substr(i_, 2), 0.0, i_};
            i_ += 2;
            return;
        }
        tok_ = {TokKind::Symbol, std::string(1, c), 0.0, i_};
        ++i_;
    }

    const std::string& s_;
    size_t i_ = 0;
    Token tok_;
};

}  // namespace

class ExprParser {
public:
    explicit ExprParser(const std::string& src) : src_(src), lex_(src) {}

    Expr run() {
        Expr e;
        e.src_ = src_;
        parse_comparison(e.prog_);
        if (lex_.peek().kind != TokKind::End)
            fail("unexpected trailing input '" + lex_.peek().text + "'", lex_.peek().pos);
        // Evaluation uses a fixed 64-slot stack; reject programs that need more.
        int depth = 0, max_depth = 0;
        for (const Expr::Instr& in : e.prog_) {
            switch (in.op) {
                case Op::Const: case Op::X: case Op::T: ++depth; break;
                case Op::Neg: case Op::Sin: case Op::Cos: case Op::Exp: case Op::Tanh: break;
                case Op::Piecewise: depth -= in.argc - 1; break;
                default: --depth; break;
            }
            max_depth = std::max(max_depth, depth);
        }
        if (max_depth > 64) fail("expression too deep", 0);
        return e;
    }

private:
    using Prog = std::vector<Expr::Instr>;
    using Op = Expr::Op;

    [[noreturn]] void fail(const std::string& msg, size_t pos) const {
        throw ParseError("expression error at position " + std::to_string(pos) + ": " + msg +
                         " (in '" + src_ + "')");
    }

    bool accept_symbol(const std::string& s) {
        if (lex_.peek().kind == TokKind::Symbol && lex_.peek().text == s) {
            lex_.take();
            return true;
        }
        return false;
    }

    void expect_symbol(const std::string& s) {
        if (!accept_symbol(s)) fail("expected '" + s + "'", lex_.peek().pos);
    }

    void parse_comparison(Prog& out) {
        parse_additive(out);
        for (;;) {
            Op op;
            if (accept_symbol("<=")) op = Op::Le;
            else if (accept_symbol(">=")) op = Op::Ge;
            else if (accept_symbol("<")) op = Op::Lt;
            else if (accept_symbol(">")) op = Op::Gt;
            else break;
            parse_additive(out);
            out.push_back({op, 0.0, 0});
        }
    }

    void parse_additive(Prog& out) {
        parse_term(out);
        for (;;) {
            if (accept_symbol("+")) {
                parse_term(out);
                out.push_back({Op::Add, 0.0, 0});
            } else if (accept_symbol("-")) {
                parse_term(out);
                out.push_back({Op::Sub, 0.0, 0});
            } else {
                break;
            }
        }
    }

    void parse_term(Prog& out) {
        parse_unary(out);
        for (;;) {
            if (accept_symbol("*")) {
                parse_unary(out);
                out.push_back({Op::Mul, 0.0, 0});
            } else if (accept_symbol("/")) {
                parse_unary(out);
                out.push_back({Op::Div, 0.0, 0});
            } else {
                break;
            }
        }
    }

    void parse_unary(Prog& out) {
        if (accept_symbol("-")) {
            parse_unary(out);
            out.push_back({Op::Neg, 0.0, 0});
            return;
        }
        if (accept_symbol("+")) {
            parse_unary(out);
            return;
        }
        parse_power(out);
    }

    void parse_power(Prog& out) {
        parse_primary(out);
        if (accept_symbol("^")) {
            parse_unary(out);  // right-associative
            out.push_back({Op::Pow, 0.0, 0});
        }
    }

    void parse_primary(Prog& out) {
        Token t = lex_.take();
        if (t.kind == TokKind::Number) {
            out.push_back({Op::Const, t.number, 0});
            return;
        }
        if (t.kind == TokKind::Symbol && t.text == "(") {
            parse_comparison(out);
            expect_symbol(")");
            return;
        }
        if (t.kind != TokKind::Ident) fail("expected value, got '" + t.text + "'", t.pos);

        if (t.text == "x") { out.push_back({Op::X, 0.0, 0}); return; }
        if (t.text == "t") { out.push_back({Op::T, 0.0, 0}); return; }
        if (t.text == "pi") { out.push_back({Op::Const, M_PI, 0}); return; }

        static const std::map<std::string, std::pair<Op, int>> kFuncs = {
            {"sin", {Op::Sin, 1}},  {"cos", {Op::Cos, 1}}, {"exp", {Op::Exp, 1}},
            {"tanh", {Op::Tanh, 1}}, {"min", {Op::Min, 2}}, {"max", {Op::Max, 2}},
        };
        auto it = kFuncs.find(t.text);
        if (it != kFuncs.end()) {
            expect_symbol("(");
            parse_comparison(out);
            for (int k = 1; k < it->second.second; ++k) {
                expect_symbol(",");
                parse_comparison(out);
            }
            expect_symbol(")");
            out.push_back({it->second.first, 0.0, 0});
            return;
        }
        if (t.text == "piecewise") {
            expect_symbol("(");
            int argc = 0;
            parse_comparison(out);
            ++argc;
            while (accept_symbol(",")) {
                parse_comparison(out);
                ++argc;
            }
            expect_symbol(")");
            if (argc < 3 || argc % 2 == 0)
                fail("piecewise needs an odd argument count >= 3 (cond, value, ..., otherwise)",
                     t.pos);
            out.push_back({Op::Piecewise, 0.0, argc});
            return;
        }
        fail("unknown identifier '" + t.text + "'", t.pos);
    }

    const std::string& src_;
    Lexer lex_;
};

Expr Expr::parse(const std::string& source) { return ExprParser(source).run(); }

Expr Expr::constant(double c) {
    Expr e;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    e.src_ = buf;
    e.prog_.push_back({Op::Const, c, 0});
    return e;
}

double Expr::operator()(double x, double t) const {
    double stack[64];
    int sp = 0;
    for (const Instr& in : prog_) {
        switch (in.op) {
            case Op::Const: stack[sp++] = in.value; break;
            case Op::X: stack[sp++] = x; break;
            case Op::T: stack[sp++] = t; break;
            case Op::Add: --sp; stack[sp - 1] += stack[sp]; break;
            case Op::Sub: --sp; stack[sp - 1] -= stack[sp]; break;
            case Op::Mul: --sp; stack[sp - 1] *= stack[sp]; break;
            case Op::Div: --sp; stack[sp - 1] /= stack[sp]; break;
            case Op::Pow: --sp; stack[sp - 1] = std::pow(stack[sp - 1], stack[sp]); break;
            case Op::Neg: stack[sp - 1] = -stack[sp - 1]; break;
            case Op::Lt: --sp; stack[sp - 1] = stack[sp - 1] < stack[sp] ? 1.0 : 0.0; break;
            case Op::Le: --sp; stack[sp - 1] = stack[sp - 1] <= stack[sp] ? 1.0 : 0.0; break;
            case Op::Gt: --sp; stack[sp - 1] = stack[sp - 1] > stack[sp] ? 1.0 : 0.0; break;
            case Op::Ge: --sp; stack[sp - 1] = stack[sp - 1] >= stack[sp] ? 1.0 : 0.0; break;
            case Op::Sin: stack[sp - 1] = std::sin(stack[sp - 1]); break;
            case Op::Cos: stack[sp - 1] = std::cos(stack[sp - 1]); break;
            case Op::Exp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
            case Op::Tanh: stack[sp - 1] = std::tanh(stack[sp - 1]); break;
            case Op::Min: --sp; stack[sp - 1] = std::min(stack[sp - 1], stack[sp]); break;
            case Op::Max: --sp; stack[sp - 1] = std::max(stack[sp - 1], stack[sp]); break;
            case Op::Piecewise: {
                const int argc = in.argc;
                const double* args = &stack[sp - argc];
                double v = args[argc - 1];  // otherwise-branch
                for (int k = 0; k + 1 < argc; k += 2) {
                    if (args[k] != 0.0) {
                        v = args[k + 1];
                        break;
                    }
                }
                sp -= argc;
                stack[sp++] = v;
                break;
            }
        }
    }
    return sp == 1 ? stack[0] : 0.0;
}

}  // namespace floqeig
