#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace floqeig {

/// Compiled closed-form expression in the variables x and t.
///
/// Supported grammar: numbers, x, t, pi, + - * / ^, unary minus,
/// comparisons (< <= > >=, yielding 0/1), and the calls
/// sin, cos, exp, tanh, min(a,b), max(a,b),
/// piecewise(c1, v1, ..., ck, vk, otherwise).
/// Expressions compile to a small postfix program; evaluation is
/// allocation-free and safe to run from many threads at once.
class Expr {
public:
    Expr() = default;

    /// Compile from source text. Throws ParseError on malformed input.
    static Expr parse(const std::string& source);

    /// Constant expression (source text is the shortest round-trip literal).
    static Expr constant(double c);

    double operator()(double x, double t) const;

    bool empty() const { return prog_.empty(); }
    const std::string& source() const { return src_; }

private:
    enum class Op : std::uint8_t {
        Const, X, T,
        Add, Sub, Mul, Div, Pow, Neg,
        Lt, Le, Gt, Ge,
        Sin, Cos, Exp, Tanh, Min, Max,
        Piecewise,
    };
    struct Instr {
        Op op;
        double value = 0.0;  // Const payload
        int argc = 0;        // Piecewise arity
    };

    std::vector<Instr> prog_;
    std::string src_;

    friend class ExprParser;
};

}  // namespace floqeig
