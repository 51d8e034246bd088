#include "avfc/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

namespace avfc::expr {

namespace {

using NodePtr = std::shared_ptr<const Node>;

struct FuncInfo {
    std::string_view name;
    Func func;
    std::size_t arity;
};

constexpr std::array<FuncInfo, 11> kFunctions{{
    {"sin", Func::Sin, 1},
    {"cos", Func::Cos, 1},
    {"tan", Func::Tan, 1},
    {"exp", Func::Exp, 1},
    {"log", Func::Log, 1},
    {"sqrt", Func::Sqrt, 1},
    {"abs", Func::Abs, 1},
    {"sign", Func::Sign, 1},
    {"step", Func::Step, 1},
    {"min", Func::Min, 2},
    {"max", Func::Max, 2},
}};

const FuncInfo* find_function(std::string_view name) {
    for (const auto& f : kFunctions)
        if (f.name == name) return &f;
    return nullptr;
}

std::string_view function_name(Func f) {
    for (const auto& info : kFunctions)
        if (info.func == f) return info.name;
    return "?";
}

int tree_depth(const Node& node) {
    int d = 0;
    for (const auto& a : node.args) d = std::max(d, tree_depth(*a));
    return d + 1;
}

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
public:
    Parser(std::string_view src, std::size_t n) : src_(src), n_(n) {}

    NodePtr parse_all() {
        skip_ws();
        if (pos_ >= src_.size()) throw SyntaxError(pos_, "empty expression");
        NodePtr root = parse_sum();
        skip_ws();
        if (pos_ < src_.size()) throw SyntaxError(pos_, std::string("unexpected '") + src_[pos_] + "'");
        return root;
    }

private:
    static constexpr int kMaxRecursion = 4 * kMaxDepth;

    struct Guard {
        Parser& p;
        explicit Guard(Parser& parser) : p(parser) {
            if (++p.recursion_ > kMaxRecursion) throw SyntaxError(p.pos_, "expression nested too deeply");
        }
        ~Guard() { --p.recursion_; }
    };

    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr make(NodeKind kind, std::vector<NodePtr> args, std::size_t at, Func func = Func::Sin) {
        auto node = std::make_shared<Node>();
        node->kind = kind;
        node->func = func;
        node->args = std::move(args);
        if (tree_depth(*node) > kMaxDepth) throw SyntaxError(at, "expression tree deeper than 64 levels");
        return node;
    }

    NodePtr parse_sum() {
        Guard g(*this);
        NodePtr lhs = parse_product();
        for (;;) {
            skip_ws();
            const std::size_t at = pos_;
            if (accept('+'))
                lhs = make(NodeKind::Add, {lhs, parse_product()}, at);
            else if (accept('-'))
                lhs = make(NodeKind::Sub, {lhs, parse_product()}, at);
            else
                return lhs;
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_unary();
        for (;;) {
            skip_ws();
            const std::size_t at = pos_;
            if (accept('*'))
                lhs = make(NodeKind::Mul, {lhs, parse_unary()}, at);
            else if (accept('/'))
                lhs = make(NodeKind::Div, {lhs, parse_unary()}, at);
            else
                return lhs;
        }
    }

    NodePtr parse_unary() {
        Guard g(*this);
        skip_ws();
        const std::size_t at = pos_;
        if (accept('-')) return make(NodeKind::Neg, {parse_unary()}, at);
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        skip_ws();
        const std::size_t at = pos_;
        if (accept('^')) return make(NodeKind::Pow, {base, parse_unary()}, at);
        return base;
    }

    NodePtr parse_primary() {
        Guard g(*this);
        skip_ws();
        if (pos_ >= src_.size()) throw SyntaxError(pos_, "unexpected end of expression");
        const char c = src_[pos_];
        if (is_digit(c) || c == '.') return parse_number();
        if (is_ident_start(c)) return parse_identifier();
        if (c == '(') {
            const std::size_t open = pos_++;
            NodePtr inner = parse_sum();
            if (!accept(')')) {
                skip_ws();
                if (pos_ >= src_.size()) throw SyntaxError(open, "unclosed '('");
                throw SyntaxError(pos_, "expected ')'");
            }
            return inner;
        }
        throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        std::size_t end = pos_;
        while (end < src_.size() && is_digit(src_[end])) ++end;
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            while (end < src_.size() && is_digit(src_[end])) ++end;
        }
        if (end == start + 1 && src_[start] == '.') throw SyntaxError(start, "malformed number");
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t e = end + 1;
            if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
            if (e >= src_.size() || !is_digit(src_[e])) throw SyntaxError(end, "malformed exponent");
            while (e < src_.size() && is_digit(src_[e])) ++e;
            end = e;
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + end, v);
        if (ec == std::errc::result_out_of_range) throw SyntaxError(start, "number out of range");
        if (ec != std::errc{} || ptr != src_.data() + end) throw SyntaxError(start, "malformed number");
        pos_ = end;
        auto node = std::make_shared<Node>();
        node->kind = NodeKind::Literal;
        node->value = v;
        return node;
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);

        if (name == "t") {
            auto node = std::make_shared<Node>();
            node->kind = NodeKind::Time;
            return node;
        }
        if (name == "pi") {
            auto node = std::make_shared<Node>();
            node->kind = NodeKind::Literal;
            node->value = std::numbers::pi;
            return node;
        }
        if (name.size() > 1 && name[0] == 'x' &&
            std::all_of(name.begin() + 1, name.end(), is_digit)) {
            std::size_t k = 0;
            const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
            if (ec != std::errc{} || k == 0 || k > n_)
                throw VariableOutOfRange(start, "state variable '" + std::string(name) + "' outside x1..x" +
                                                    std::to_string(n_));
            auto node = std::make_shared<Node>();
            node->kind = NodeKind::State;
            node->index = k - 1;
            return node;
        }
        const FuncInfo* f = find_function(name);
        if (f == nullptr) throw UnknownIdentifier(start, "unknown identifier '" + std::string(name) + "'");

        if (!accept('(')) throw SyntaxError(pos_, "expected '(' after '" + std::string(name) + "'");
        std::vector<NodePtr> args;
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == ')') {
            ++pos_;
        } else {
            args.push_back(parse_sum());
            while (accept(',')) args.push_back(parse_sum());
            if (!accept(')')) {
                skip_ws();
                throw SyntaxError(pos_, pos_ >= src_.size() ? "unclosed function call" : "expected ',' or ')'");
            }
        }
        if (args.size() != f->arity)
            throw ArityMismatch(start, std::string(name) + " takes " + std::to_string(f->arity) +
                                           " argument(s), got " + std::to_string(args.size()));
        return make(NodeKind::Call, std::move(args), start, f->func);
    }

    std::string_view src_;
    std::size_t n_;
    std::size_t pos_ = 0;
    int recursion_ = 0;
};

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " produced a non-finite value");
    return v;
}

double eval_node(const Node& node, double t, std::span<const double> x) {
    switch (node.kind) {
    case NodeKind::Literal: return node.value;
    case NodeKind::Time: return t;
    case NodeKind::State: return x[node.index];
    case NodeKind::Neg: return -eval_node(*node.args[0], t, x);
    case NodeKind::Add: return checked(eval_node(*node.args[0], t, x) + eval_node(*node.args[1], t, x), "addition");
    case NodeKind::Sub: return checked(eval_node(*node.args[0], t, x) - eval_node(*node.args[1], t, x), "subtraction");
    case NodeKind::Mul: return checked(eval_node(*node.args[0], t, x) * eval_node(*node.args[1], t, x), "product");
    case NodeKind::Div: {
        const double num = eval_node(*node.args[0], t, x);
        const double den = eval_node(*node.args[1], t, x);
        if (den == 0.0) throw DomainError("division by zero");
        return checked(num / den, "division");
    }
    case NodeKind::Pow: {
        const double base = eval_node(*node.args[0], t, x);
        const double ex = eval_node(*node.args[1], t, x);
        if (base < 0.0 && ex != std::trunc(ex)) throw DomainError("non-integer power of a negative base");
        if (base == 0.0 && ex < 0.0) throw DomainError("negative power of zero");
        return checked(std::pow(base, ex), "power");
    }
    case NodeKind::Call: {
        const double a = eval_node(*node.args[0], t, x);
        switch (node.func) {
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Tan: return checked(std::tan(a), "tan");
        case Func::Exp: return checked(std::exp(a), "exp");
        case Func::Log:
            if (a <= 0.0) throw DomainError("log of a non-positive value");
            return std::log(a);
        case Func::Sqrt:
            if (a < 0.0) throw DomainError("sqrt of a negative value");
            return std::sqrt(a);
        case Func::Abs: return std::abs(a);
        case Func::Sign: return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
        case Func::Step: return a < 0.0 ? 0.0 : 1.0;
        case Func::Min: return std::min(a, eval_node(*node.args[1], t, x));
        case Func::Max: return std::max(a, eval_node(*node.args[1], t, x));
        }
        break;
    }
    }
    throw DomainError("corrupt expression node");
}

int precedence(const Node& node) {
    switch (node.kind) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Neg: return 3;
    case NodeKind::Pow: return 4;
    default: return 5;
    }
}

void print_node(const Node& node, std::string& out);

void print_child(const Node& child, bool parens, std::string& out) {
    if (parens) out += '(';
    print_node(child, out);
    if (parens) out += ')';
}

void print_node(const Node& node, std::string& out) {
    const int p = precedence(node);
    switch (node.kind) {
    case NodeKind::Literal: {
        if (node.value == std::numbers::pi) {
            out += "pi";
            break;
        }
        std::array<char, 64> buf{};
        const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), node.value);
        out.append(buf.data(), ptr);
        break;
    }
    case NodeKind::Time: out += 't'; break;
    case NodeKind::State: out += 'x' + std::to_string(node.index + 1); break;
    case NodeKind::Neg:
        out += '-';
        print_child(*node.args[0], precedence(*node.args[0]) < 3, out);
        break;
    case NodeKind::Pow:
        print_child(*node.args[0], precedence(*node.args[0]) <= 4, out);
        out += '^';
        print_child(*node.args[1], precedence(*node.args[1]) < 3, out);
        break;
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div: {
        const char op = node.kind == NodeKind::Add ? '+' : node.kind == NodeKind::Sub ? '-'
                      : node.kind == NodeKind::Mul ? '*' : '/';
        print_child(*node.args[0], precedence(*node.args[0]) < p, out);
        out += op;
        print_child(*node.args[1], precedence(*node.args[1]) <= p, out);
        break;
    }
    case NodeKind::Call:
        out += function_name(node.func);
        out += '(';
        for (std::size_t i = 0; i < node.args.size(); ++i) {
            if (i > 0) out += ", ";
            print_node(*node.args[i], out);
        }
        out += ')';
        break;
    }
}

bool same_tree(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
    switch (a.kind) {
    case NodeKind::Literal:
        if (a.value != b.value) return false;
        break;
    case NodeKind::State:
        if (a.index != b.index) return false;
        break;
    case NodeKind::Call:
        if (a.func != b.func) return false;
        break;
    default: break;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!same_tree(*a.args[i], *b.args[i])) return false;
    return true;
}

} // namespace

Expr parse(std::string_view source, std::size_t n) {
    Parser parser(source, n);
    return Expr(parser.parse_all(), n);
}

double Expr::eval(double t, std::span<const double> x) const {
    if (!root_) throw DomainError("evaluating an empty expression");
    if (x.size() < n_) throw DimensionMismatch("state vector shorter than expression arity");
    return eval_node(*root_, t, x);
}

std::string Expr::to_string() const {
    std::string out;
    if (root_) print_node(*root_, out);
    return out;
}

bool operator==(const Expr& a, const Expr& b) {
    if (!a.root_ || !b.root_) return a.root_ == b.root_;
    return same_tree(*a.root_, *b.root_);
}

} // namespace avfc::expr
