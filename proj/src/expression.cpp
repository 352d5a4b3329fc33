#include "levy/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace levy
{
    namespace
    {
        const char *const functions[] = {"exp", "log", "sqrt", "abs", "sin", "cos", "tanh", "pow", "min", "max"};
        constexpr int n_functions = 10;

        int arity(int fn) { return fn >= 7 ? 2 : 1; }
    }

    class ExpressionParser
    {
    public:
        ExpressionParser(const std::string &s, Expression &e) : s_(s), e_(e) {}

        int run()
        {
            const int root = sum();
            skip();
            if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
            return root;
        }

    private:
        [[noreturn]] void fail(const std::string &msg) const
        {
            throw parse_error("expression: " + msg + " at column " + std::to_string(pos_ + 1), int(pos_ + 1));
        }

        void skip()
        {
            while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }

        bool eat(char c)
        {
            skip();
            if (pos_ < s_.size() && s_[pos_] == c) {
                ++pos_;
                return true;
            }
            return false;
        }

        int add(Expression::Node n)
        {
            e_.nodes_.push_back(n);
            return int(e_.nodes_.size()) - 1;
        }

        int binary(Expression::Node::Op op, int l, int r)
        {
            Expression::Node n{op};
            n.lhs = l;
            n.rhs = r;
            return add(n);
        }

        int sum()
        {
            int l = product();
            for (;;) {
                if (eat('+')) l = binary(Expression::Node::Add, l, product());
                else if (eat('-')) l = binary(Expression::Node::Sub, l, product());
                else return l;
            }
        }

        int product()
        {
            int l = unary();
            for (;;) {
                if (eat('*')) l = binary(Expression::Node::Mul, l, unary());
                else if (eat('/')) l = binary(Expression::Node::Div, l, unary());
                else return l;
            }
        }

        int unary()
        {
            if (eat('-')) {
                Expression::Node n{Expression::Node::Neg};
                n.lhs = unary();
                return add(n);
            }
            if (eat('+')) return unary();
            return power();
        }

        int power()
        {
            const int base = atom();
            if (eat('^')) return binary(Expression::Node::Pow, base, unary());   // right associative
            return base;
        }

        int atom()
        {
            skip();
            if (pos_ >= s_.size()) fail("unexpected end");
            const char c = s_[pos_];
            if (c == '(') {
                ++pos_;
                const int inner = sum();
                if (!eat(')')) fail("missing ')'");
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t used = 0;
                double v = 0.0;
                try {
                    v = std::stod(s_.substr(pos_), &used);
                } catch (const std::exception &) {
                    fail("bad number");
                }
                pos_ += used;
                Expression::Node n{Expression::Node::Num};
                n.value = v;
                return add(n);
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                const std::size_t start = pos_;
                while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                const std::string name = s_.substr(start, pos_ - start);
                if (name == "u") return add({Expression::Node::VarU});
                if (name == "r") {
                    e_.dep_ = combine(e_.dep_, Dependence::Radius);
                    return add({Expression::Node::VarR});
                }
                if (name == "pi" || name == "e") {
                    Expression::Node n{Expression::Node::Num};
                    n.value = name == "pi" ? std::numbers::pi : std::numbers::e;
                    return add(n);
                }
                if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '9') {
                    Expression::Node n{Expression::Node::VarX};
                    n.index = name[1] - '1';
                    e_.max_coord_ = std::max(e_.max_coord_, n.index + 1);
                    e_.dep_ = combine(e_.dep_, n.index == 0 ? Dependence::FirstCoordinate : Dependence::Arbitrary);
                    return add(n);
                }
                for (int k = 0; k < n_functions; ++k) {
                    if (name != functions[k]) continue;
                    if (!eat('(')) fail("expected '(' after " + name);
                    Expression::Node n{Expression::Node::Call};
                    n.index = k;
                    n.lhs = sum();
                    if (arity(k) == 2) {
                        if (!eat(',')) fail("expected ',' in " + name);
                        n.rhs = sum();
                    }
                    if (!eat(')')) fail("missing ')' after arguments of " + name);
                    return add(n);
                }
                pos_ = start;
                fail("unknown name '" + name + "'");
            }
            fail("unexpected '" + std::string(1, c) + "'");
        }

        const std::string &s_;
        Expression &e_;
        std::size_t pos_ = 0;
    };

    Expression Expression::parse(const std::string &text)
    {
        Expression e;
        e.text_ = text;
        ExpressionParser p(text, e);
        e.root_ = p.run();
        return e;
    }

    double Expression::eval(double u, const Vec &x) const
    {
        const double radius = (dep_ == Dependence::Radius || dep_ == Dependence::FirstAndRadius ||
                               dep_ == Dependence::Arbitrary)
                                  ? x.norm()
                                  : 0.0;
        return eval_node(root_, u, x, radius);
    }

    double Expression::eval_node(int i, double u, const Vec &x, double radius) const
    {
        const Node &n = nodes_[i];
        switch (n.op) {
        case Node::Num: return n.value;
        case Node::VarU: return u;
        case Node::VarR: return radius;
        case Node::VarX: return n.index < x.size() ? x(n.index) : 0.0;
        case Node::Add: return eval_node(n.lhs, u, x, radius) + eval_node(n.rhs, u, x, radius);
        case Node::Sub: return eval_node(n.lhs, u, x, radius) - eval_node(n.rhs, u, x, radius);
        case Node::Mul: return eval_node(n.lhs, u, x, radius) * eval_node(n.rhs, u, x, radius);
        case Node::Div: return eval_node(n.lhs, u, x, radius) / eval_node(n.rhs, u, x, radius);
        case Node::Pow: return std::pow(eval_node(n.lhs, u, x, radius), eval_node(n.rhs, u, x, radius));
        case Node::Neg: return -eval_node(n.lhs, u, x, radius);
        case Node::Call: {
            const double a = eval_node(n.lhs, u, x, radius);
            switch (n.index) {
            case 0: return std::exp(a);
            case 1: return std::log(a);
            case 2: return std::sqrt(a);
            case 3: return std::abs(a);
            case 4: return std::sin(a);
            case 5: return std::cos(a);
            case 6: return std::tanh(a);
            case 7: return std::pow(a, eval_node(n.rhs, u, x, radius));
            case 8: return std::min(a, eval_node(n.rhs, u, x, radius));
            case 9: return std::max(a, eval_node(n.rhs, u, x, radius));
            }
        }
        }
        return 0.0;
    }
}
