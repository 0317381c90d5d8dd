#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace contactlab {

enum class Func { Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Ln, Sqrt, Abs, Atan, BesselJ0, BesselJ1 };

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
    enum class Kind { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
    Kind kind = Kind::Num;
    double value = 0.0;  // Num
    std::string name;    // Var
    Func func = Func::Sin;
    Expr lhs;  // operand of Neg/Call, left operand of binaries
    Expr rhs;
};

Expr make_num(double v);
Expr make_var(std::string name);
Expr make_unary(Node::Kind k, Expr a);
Expr make_binary(Node::Kind k, Expr a, Expr b);
Expr make_call(Func f, Expr a);

const char* func_name(Func f);
bool lookup_func(std::string_view name, Func& out);

Expr parse_expr(std::string_view src);
std::string to_string(const Expr& e);
bool same_structure(const Expr& a, const Expr& b);

double eval_expr(const Expr& e, const std::map<std::string, double>& env);
double apply_func(Func f, double x);

std::set<std::string> free_vars(const Expr& e);
// Replace named constants by literals and fold constant subtrees.
Expr substitute(const Expr& e, const std::map<std::string, double>& constants);

// Flat stack program for fast repeated evaluation over a fixed variable list.
class Program {
public:
    Program() = default;
    Program(const Expr& e, const std::vector<std::string>& vars);

    double operator()(const double* x) const;
    bool is_constant() const noexcept { return constant_; }
    double constant_value() const noexcept { return value_; }

private:
    enum class Op : unsigned char { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
    struct Instr {
        Op op;
        Func func;
        int index;
        double value;
    };
    void emit(const Expr& e, const std::vector<std::string>& vars, int depth);

    std::vector<Instr> code_;
    int max_depth_ = 0;
    bool constant_ = true;
    double value_ = 0.0;
};

}  // namespace contactlab
