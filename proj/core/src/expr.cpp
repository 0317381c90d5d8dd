#include "contactlab/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cctype>

#include "contactlab/bessel.hpp"
#include "contactlab/errors.hpp"

namespace contactlab {

namespace {

constexpr std::array<std::pair<const char*, Func>, 13> kFuncs{{
    {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},   {"sinh", Func::Sinh},
    {"cosh", Func::Cosh}, {"tanh", Func::Tanh}, {"exp", Func::Exp},   {"ln", Func::Ln},
    {"sqrt", Func::Sqrt}, {"abs", Func::Abs},   {"atan", Func::Atan}, {"besselJ0", Func::BesselJ0},
    {"besselJ1", Func::BesselJ1},
}};

class Parser {
public:
    explicit Parser(std::string_view s) : src_(s) {}

    Expr parse() {
        Expr e = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = make_binary(Node::Kind::Add, lhs, term());
            else if (accept('-'))
                lhs = make_binary(Node::Kind::Sub, lhs, term());
            else
                return lhs;
        }
    }

    Expr term() {
        Expr lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = make_binary(Node::Kind::Mul, lhs, unary());
            else if (accept('/'))
                lhs = make_binary(Node::Kind::Div, lhs, unary());
            else
                return lhs;
        }
    }

    Expr unary() {
        if (accept('-')) return make_unary(Node::Kind::Neg, unary());
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (accept('^')) return make_binary(Node::Kind::Pow, base, unary());
        return base;
    }

    Expr primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            std::string id(src_.substr(start, pos_ - start));
            skip_ws();
            if (pos_ < src_.size() && src_[pos_] == '(') {
                Func f;
                if (!lookup_func(id, f))
                    throw UnknownFunction("unknown function '" + id + "' at offset " +
                                          std::to_string(start));
                ++pos_;
                Expr arg = expr();
                if (!accept(')')) fail("expected ')' after argument of " + id);
                return make_call(f, arg);
            }
            return make_var(std::move(id));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Expr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t nd = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            nd += digits();
        }
        if (nd == 0) fail("malformed number");
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            const std::size_t save = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (digits() == 0) {
                pos_ = save;
                fail("malformed exponent");
            }
        }
        double v = 0.0;
        const char* first = src_.data() + start;
        const char* last = src_.data() + pos_;
        auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last) {
            pos_ = start;
            fail("number out of range");
        }
        return make_num(v);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

int precedence(const Expr& e) {
    switch (e->kind) {
        case Node::Kind::Add:
        case Node::Kind::Sub: return 1;
        case Node::Kind::Mul:
        case Node::Kind::Div: return 2;
        case Node::Kind::Neg: return 3;
        case Node::Kind::Pow: return 4;
        case Node::Kind::Num: return e->value < 0 ? 0 : 5;
        default: return 5;
    }
}

std::string fmt_num(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    std::string s(buf.data(), res.ptr);
    if (v < 0) return "(" + s + ")";
    return s;
}

void print(const Expr& e, std::string& out) {
    auto wrap = [&](const Expr& c, bool paren) {
        if (paren) out += '(';
        print(c, out);
        if (paren) out += ')';
    };
    const int p = precedence(e);
    switch (e->kind) {
        case Node::Kind::Num: out += fmt_num(e->value); break;
        case Node::Kind::Var: out += e->name; break;
        case Node::Kind::Neg:
            out += '-';
            wrap(e->lhs, precedence(e->lhs) < 3);
            break;
        case Node::Kind::Call:
            out += func_name(e->func);
            out += '(';
            print(e->lhs, out);
            out += ')';
            break;
        case Node::Kind::Pow:
            wrap(e->lhs, precedence(e->lhs) <= 4);
            out += '^';
            wrap(e->rhs, precedence(e->rhs) < 3);
            break;
        default: {
            const char* op = e->kind == Node::Kind::Add   ? " + "
                             : e->kind == Node::Kind::Sub ? " - "
                             : e->kind == Node::Kind::Mul ? "*"
                                                          : "/";
            wrap(e->lhs, precedence(e->lhs) < p);
            out += op;
            wrap(e->rhs, precedence(e->rhs) <= p);
        }
    }
}

double binary(Node::Kind k, double a, double b) {
    switch (k) {
        case Node::Kind::Add: return a + b;
        case Node::Kind::Sub: return a - b;
        case Node::Kind::Mul: return a * b;
        case Node::Kind::Div:
            if (b == 0.0) throw DomainError("division by zero");
            return a / b;
        case Node::Kind::Pow:
            if (a < 0.0 && b != std::floor(b))
                throw DomainError("negative base with non-integer exponent");
            if (a == 0.0 && b < 0.0) throw DomainError("division by zero in power");
            return std::pow(a, b);
        default: throw DomainError("bad operator");
    }
}

void collect(const Expr& e, std::set<std::string>& out) {
    if (!e) return;
    if (e->kind == Node::Kind::Var) out.insert(e->name);
    collect(e->lhs, out);
    collect(e->rhs, out);
}

double eval_node(const Expr& e, const std::map<std::string, double>& env) {
    switch (e->kind) {
        case Node::Kind::Num: return e->value;
        case Node::Kind::Var: {
            auto it = env.find(e->name);
            if (it == env.end()) throw UnboundVariable("unbound variable '" + e->name + "'");
            return it->second;
        }
        case Node::Kind::Neg: return -eval_node(e->lhs, env);
        case Node::Kind::Call: return apply_func(e->func, eval_node(e->lhs, env));
        default: return binary(e->kind, eval_node(e->lhs, env), eval_node(e->rhs, env));
    }
}

}  // namespace

Expr make_num(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Num;
    n->value = v;
    return n;
}

Expr make_var(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Var;
    n->name = std::move(name);
    return n;
}

Expr make_unary(Node::Kind k, Expr a) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    return n;
}

Expr make_binary(Node::Kind k, Expr a, Expr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

Expr make_call(Func f, Expr a) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Call;
    n->func = f;
    n->lhs = std::move(a);
    return n;
}

const char* func_name(Func f) {
    for (const auto& [name, g] : kFuncs)
        if (g == f) return name;
    return "?";
}

bool lookup_func(std::string_view name, Func& out) {
    for (const auto& [n, g] : kFuncs) {
        if (name == n) {
            out = g;
            return true;
        }
    }
    return false;
}

Expr parse_expr(std::string_view src) { return Parser(src).parse(); }

std::string to_string(const Expr& e) {
    std::string out;
    print(e, out);
    return out;
}

bool same_structure(const Expr& a, const Expr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Node::Kind::Num: return a->value == b->value;
        case Node::Kind::Var: return a->name == b->name;
        case Node::Kind::Call: return a->func == b->func && same_structure(a->lhs, b->lhs);
        default: return same_structure(a->lhs, b->lhs) && same_structure(a->rhs, b->rhs);
    }
}

double apply_func(Func f, double x) {
    switch (f) {
        case Func::Sin: return std::sin(x);
        case Func::Cos: return std::cos(x);
        case Func::Tan: return std::tan(x);
        case Func::Sinh: return std::sinh(x);
        case Func::Cosh: return std::cosh(x);
        case Func::Tanh: return std::tanh(x);
        case Func::Exp: return std::exp(x);
        case Func::Ln:
            if (x <= 0.0) throw DomainError("ln of non-positive argument");
            return std::log(x);
        case Func::Sqrt:
            if (x < 0.0) throw DomainError("sqrt of negative argument");
            return std::sqrt(x);
        case Func::Abs: return std::fabs(x);
        case Func::Atan: return std::atan(x);
        case Func::BesselJ0: return bessel_j0(x);
        case Func::BesselJ1: return bessel_j1(x);
    }
    return 0.0;
}

double eval_expr(const Expr& e, const std::map<std::string, double>& env) {
    const double v = eval_node(e, env);
    if (!std::isfinite(v)) throw DomainError("non-finite result");
    return v;
}

std::set<std::string> free_vars(const Expr& e) {
    std::set<std::string> out;
    collect(e, out);
    return out;
}

Expr substitute(const Expr& e, const std::map<std::string, double>& constants) {
    switch (e->kind) {
        case Node::Kind::Num: return e;
        case Node::Kind::Var: {
            auto it = constants.find(e->name);
            return it == constants.end() ? e : make_num(it->second);
        }
        case Node::Kind::Neg: {
            Expr a = substitute(e->lhs, constants);
            if (a->kind == Node::Kind::Num) return make_num(-a->value);
            return make_unary(Node::Kind::Neg, a);
        }
        case Node::Kind::Call: {
            Expr a = substitute(e->lhs, constants);
            if (a->kind == Node::Kind::Num) return make_num(apply_func(e->func, a->value));
            return make_call(e->func, a);
        }
        default: {
            Expr a = substitute(e->lhs, constants);
            Expr b = substitute(e->rhs, constants);
            if (a->kind == Node::Kind::Num && b->kind == Node::Kind::Num)
                return make_num(binary(e->kind, a->value, b->value));
            return make_binary(e->kind, a, b);
        }
    }
}

Program::Program(const Expr& e, const std::vector<std::string>& vars) {
    emit(e, vars, 1);
    if (constant_) {
        value_ = eval_expr(e, {});
        code_.assign(1, Instr{Op::Const, Func::Sin, 0, value_});
        max_depth_ = 1;
    }
}

void Program::emit(const Expr& e, const std::vector<std::string>& vars, int depth) {
    if (depth > max_depth_) max_depth_ = depth;
    switch (e->kind) {
        case Node::Kind::Num: code_.push_back({Op::Const, Func::Sin, 0, e->value}); return;
        case Node::Kind::Var: {
            for (std::size_t i = 0; i < vars.size(); ++i) {
                if (vars[i] == e->name) {
                    code_.push_back({Op::Var, Func::Sin, static_cast<int>(i), 0.0});
                    constant_ = false;
                    return;
                }
            }
            throw UnboundVariable("unbound variable '" + e->name + "'");
        }
        case Node::Kind::Neg:
            emit(e->lhs, vars, depth);
            code_.push_back({Op::Neg, Func::Sin, 0, 0.0});
            return;
        case Node::Kind::Call:
            emit(e->lhs, vars, depth);
            code_.push_back({Op::Call, e->func, 0, 0.0});
            return;
        default: {
            emit(e->lhs, vars, depth);
            emit(e->rhs, vars, depth + 1);
            Op op = Op::Add;
            switch (e->kind) {
                case Node::Kind::Sub: op = Op::Sub; break;
                case Node::Kind::Mul: op = Op::Mul; break;
                case Node::Kind::Div: op = Op::Div; break;
                case Node::Kind::Pow: op = Op::Pow; break;
                default: break;
            }
            code_.push_back({op, Func::Sin, 0, 0.0});
        }
    }
}

double Program::operator()(const double* x) const {
    if (constant_) return value_;
    double stack[64];
    stack[0] = 0.0;
    double* heap = nullptr;
    std::vector<double> big;
    if (max_depth_ > 64) {
        big.resize(max_depth_);
        heap = big.data();
    }
    double* s = heap ? heap : stack;
    int top = -1;
    for (const Instr& in : code_) {
        switch (in.op) {
            case Op::Const: s[++top] = in.value; break;
            case Op::Var: s[++top] = x[in.index]; break;
            case Op::Neg: s[top] = -s[top]; break;
            case Op::Call: s[top] = apply_func(in.func, s[top]); break;
            case Op::Add: --top; s[top] += s[top + 1]; break;
            case Op::Sub: --top; s[top] -= s[top + 1]; break;
            case Op::Mul: --top; s[top] *= s[top + 1]; break;
            case Op::Div: --top; s[top] = binary(Node::Kind::Div, s[top], s[top + 1]); break;
            case Op::Pow: --top; s[top] = binary(Node::Kind::Pow, s[top], s[top + 1]); break;
        }
    }
    if (!std::isfinite(s[0])) throw DomainError("non-finite result");
    return s[0];
}

}  // namespace contactlab
