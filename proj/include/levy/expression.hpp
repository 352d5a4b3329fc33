#pragma once

#include "levy/fields.hpp"

#include <string>
#include <vector>

namespace levy
{
    struct parse_error : std::runtime_error
    {
        parse_error(const std::string &what, int col) : std::runtime_error(what), column(col) {}
        int column;
    };

    // Arithmetic expression in u (radius), r (=|x|) and x1..x9.
    // Operators + - * / ^, functions exp log sqrt abs sin cos tanh pow min max,
    // constants pi and e.
    class Expression
    {
    public:
        static Expression parse(const std::string &text);

        double eval(double u, const Vec &x) const;
        Dependence dependence() const { return dep_; }
        int max_coordinate() const { return max_coord_; }   // highest xk referenced, 0 if none
        const std::string &text() const { return text_; }

        struct Node
        {
            enum Op { Num, VarU, VarR, VarX, Add, Sub, Mul, Div, Pow, Neg, Call } op;
            double value = 0.0;
            int index = 0;      // coordinate for VarX, function id for Call
            int lhs = -1, rhs = -1;
        };

    private:
        double eval_node(int i, double u, const Vec &x, double radius) const;

        std::string text_;
        std::vector<Node> nodes_;
        int root_ = -1;
        Dependence dep_ = Dependence::None;
        int max_coord_ = 0;

        friend class ExpressionParser;
    };
}
