#pragma once

#include "avfc/error.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

/// Scalar expressions over t and x1..xn used by scenario files.
///
/// Grammar, loosest to tightest binding:
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?          (right associative)
///   primary := number | 't' | 'pi' | 'x'k | name '(' sum (',' sum)* ')' | '(' sum ')'
///
/// so `-2^2` is -(2^2) and `2*-3+1` is (2*(-3))+1.
namespace avfc::expr {

/// Base for all parse failures; offset is the byte position in the source.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& msg)
        : Error("at offset " + std::to_string(offset) + ": " + msg), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class SyntaxError : public ParseError { public: using ParseError::ParseError; };
class UnknownIdentifier : public ParseError { public: using ParseError::ParseError; };
class ArityMismatch : public ParseError { public: using ParseError::ParseError; };
class VariableOutOfRange : public ParseError { public: using ParseError::ParseError; };

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Sign, Step, Min, Max };

enum class NodeKind { Literal, Time, State, Neg, Add, Sub, Mul, Div, Pow, Call };

struct Node {
    NodeKind kind;
    double value = 0.0;        // Literal
    std::size_t index = 0;     // State: zero-based state index
    Func func = Func::Sin;     // Call
    std::vector<std::shared_ptr<const Node>> args;
};

inline constexpr int kMaxDepth = 64;

class Expr {
public:
    Expr() = default;

    /// Number of state variables the expression was validated against.
    std::size_t arity() const noexcept { return n_; }
    const Node& root() const { return *root_; }
    bool valid() const noexcept { return root_ != nullptr; }

    double eval(double t, std::span<const double> x) const;

    /// Canonical text with minimal parentheses; reparses to an identical tree.
    std::string to_string() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    friend Expr parse(std::string_view source, std::size_t n);
    Expr(std::shared_ptr<const Node> root, std::size_t n) : root_(std::move(root)), n_(n) {}

    std::shared_ptr<const Node> root_;
    std::size_t n_ = 0;
};

Expr parse(std::string_view source, std::size_t n);

inline double eval(const Expr& e, double t, std::span<const double> x) { return e.eval(t, x); }

/// Expression paired with the text it was parsed from, as stored in scenario files.
struct SourceExpr {
    std::string source;
    Expr expr;

    static SourceExpr from(std::string_view source, std::size_t n) {
        return {std::string(source), parse(source, n)};
    }
    double operator()(double t, std::span<const double> x) const { return expr.eval(t, x); }
    friend bool operator==(const SourceExpr& a, const SourceExpr& b) { return a.expr == b.expr; }
};

} // namespace avfc::expr
