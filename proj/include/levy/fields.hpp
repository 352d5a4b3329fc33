#pragma once

#include "levy/types.hpp"

#include <array>
#include <string>

namespace levy
{
    // What a state-dependent coefficient looks at. Grid enumeration uses it
    // to avoid sweeping the full d-dimensional box.
    enum class Dependence { None, FirstCoordinate, Radius, FirstAndRadius, Arbitrary };

    // Bounded scalar coefficient x -> R with known range.
    class ScalarField
    {
    public:
        enum class Kind { Constant, TanhRamp, SignStep, RadialBump, Cosine };

        ScalarField(double v = 0.0) : ScalarField(Kind::Constant, {v, 0.0, 0.0}) {}

        // lo + (hi-lo)(1+tanh(x1/scale))/2
        static ScalarField tanh_ramp(double lo, double hi, double scale = 1.0);
        // base + amp*sign(x1)
        static ScalarField sign_step(double base, double amp);
        // far + (centre-far)exp(-|x|^2/scale^2)
        static ScalarField radial_bump(double centre, double far, double scale = 1.0);
        // mid + amp*cos(freq*x1)
        static ScalarField cosine(double mid, double amp, double freq);

        double operator()(const Vec &x) const;
        double eval(double x1, double radius) const;

        double lower() const;   // inf over R^d
        double upper() const;   // sup over R^d
        bool is_constant() const { return kind_ == Kind::Constant; }
        bool is_even() const;   // f(-x) == f(x)
        Dependence dependence() const;

        Kind kind() const { return kind_; }
        const std::array<double, 3> &params() const { return p_; }
        std::string describe() const;

    private:
        ScalarField(Kind k, std::array<double, 3> p) : kind_(k), p_(p) {}
        Kind kind_;
        std::array<double, 3> p_;
    };

    Dependence combine(Dependence a, Dependence b);
}
