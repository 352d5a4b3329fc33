#include "levy/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace levy
{
    double sphere_area(int d)
    {
        if (d < 1) throw std::invalid_argument("sphere_area: dimension must be positive");
        const double h = 0.5 * d;
        return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
    }

    ScalarField ScalarField::tanh_ramp(double lo, double hi, double scale)
    {
        if (!(scale > 0)) throw std::invalid_argument("tanh_ramp: scale must be positive");
        return {Kind::TanhRamp, {lo, hi, scale}};
    }

    ScalarField ScalarField::sign_step(double base, double amp) { return {Kind::SignStep, {base, amp, 0.0}}; }

    ScalarField ScalarField::radial_bump(double centre, double far, double scale)
    {
        if (!(scale > 0)) throw std::invalid_argument("radial_bump: scale must be positive");
        return {Kind::RadialBump, {centre, far, scale}};
    }

    ScalarField ScalarField::cosine(double mid, double amp, double freq) { return {Kind::Cosine, {mid, amp, freq}}; }

    double ScalarField::eval(double x1, double radius) const
    {
        switch (kind_) {
        case Kind::Constant: return p_[0];
        case Kind::TanhRamp: return p_[0] + (p_[1] - p_[0]) * 0.5 * (1.0 + std::tanh(x1 / p_[2]));
        case Kind::SignStep: return p_[0] + p_[1] * ((x1 > 0) - (x1 < 0));
        case Kind::RadialBump: return p_[1] + (p_[0] - p_[1]) * std::exp(-radius * radius / (p_[2] * p_[2]));
        case Kind::Cosine: return p_[0] + p_[1] * std::cos(p_[2] * x1);
        }
        return p_[0];
    }

    double ScalarField::operator()(const Vec &x) const
    {
        switch (kind_) {
        case Kind::Constant: return p_[0];
        case Kind::RadialBump: return eval(0.0, x.norm());
        default: return eval(x.size() ? x(0) : 0.0, 0.0);
        }
    }

    double ScalarField::lower() const
    {
        switch (kind_) {
        case Kind::Constant: return p_[0];
        case Kind::TanhRamp:
        case Kind::RadialBump: return std::min(p_[0], p_[1]);
        case Kind::SignStep: return p_[0] - std::abs(p_[1]);
        case Kind::Cosine: return p_[2] == 0.0 ? p_[0] + p_[1] : p_[0] - std::abs(p_[1]);
        }
        return p_[0];
    }

    double ScalarField::upper() const
    {
        switch (kind_) {
        case Kind::Constant: return p_[0];
        case Kind::TanhRamp:
        case Kind::RadialBump: return std::max(p_[0], p_[1]);
        case Kind::SignStep: return p_[0] + std::abs(p_[1]);
        case Kind::Cosine: return p_[2] == 0.0 ? p_[0] + p_[1] : p_[0] + std::abs(p_[1]);
        }
        return p_[0];
    }

    bool ScalarField::is_even() const
    {
        switch (kind_) {
        case Kind::Constant:
        case Kind::RadialBump:
        case Kind::Cosine: return true;
        case Kind::TanhRamp: return p_[0] == p_[1];
        case Kind::SignStep: return p_[1] == 0.0;
        }
        return false;
    }

    Dependence ScalarField::dependence() const
    {
        switch (kind_) {
        case Kind::Constant: return Dependence::None;
        case Kind::RadialBump: return p_[0] == p_[1] ? Dependence::None : Dependence::Radius;
        case Kind::TanhRamp: return p_[0] == p_[1] ? Dependence::None : Dependence::FirstCoordinate;
        case Kind::SignStep: return p_[1] == 0.0 ? Dependence::None : Dependence::FirstCoordinate;
        case Kind::Cosine:
            return (p_[1] == 0.0 || p_[2] == 0.0) ? Dependence::None : Dependence::FirstCoordinate;
        }
        return Dependence::Arbitrary;
    }

    std::string ScalarField::describe() const
    {
        std::ostringstream os;
        switch (kind_) {
        case Kind::Constant: os << p_[0]; break;
        case Kind::TanhRamp: os << "tanh_ramp(" << p_[0] << "," << p_[1] << "," << p_[2] << ")"; break;
        case Kind::SignStep: os << "sign_step(" << p_[0] << "," << p_[1] << ")"; break;
        case Kind::RadialBump: os << "radial_bump(" << p_[0] << "," << p_[1] << "," << p_[2] << ")"; break;
        case Kind::Cosine: os << "cosine(" << p_[0] << "," << p_[1] << "," << p_[2] << ")"; break;
        }
        return os.str();
    }

    Dependence combine(Dependence a, Dependence b)
    {
        if (a == b) return a;
        if (a == Dependence::None) return b;
        if (b == Dependence::None) return a;
        if (a == Dependence::Arbitrary || b == Dependence::Arbitrary) return Dependence::Arbitrary;
        // first coordinate together with radius: enumerable as (x1, |x|) pairs
        return Dependence::FirstAndRadius;
    }
}
