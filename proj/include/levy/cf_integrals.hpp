#pragma once

#include "levy/symbol.hpp"

#include <functional>
#include <string>
#include <vector>

namespace levy
{
    enum class VerdictState { Diverges, Converges, Inconclusive };
    std::string to_string(VerdictState s);

    // where the integral is singular: near rho = 0, or at rho = inf (mapped to 0 by rho -> 1/rho)
    enum class Orientation { AtZero, AtInfinity };

    struct Partial
    {
        double eps;
        double value;   // integral over eps < rho < r (at infinity: r < rho < 1/eps)
    };

    struct DivergenceVerdict
    {
        VerdictState state = VerdictState::Inconclusive;
        double exponent = 0.0;   // fitted p in G(rho) ~ rho^p near the singular end
        double band = 0.05;
        double residual = 0.0;   // rms of the log-log fit
        std::vector<Partial> partials;

        // boundary cases: decided from the sign of p+1 when the fit is clean, and
        // from a log-correction slope when p+1 is numerically zero
        VerdictState refined = VerdictState::Inconclusive;
        double log_slope = 0.0;
        std::string note;

        VerdictState resolved() const { return state != VerdictState::Inconclusive ? state : refined; }
    };

    struct DivergenceOptions
    {
        double band = 0.05;
        int levels = 24;        // annuli eps_k = r 2^-k, k = 0..levels
        int directions = 64;    // used when the envelope is not radial
        double rel_tol = 1e-8;
    };

    // Verdict for int G over (0,r] (AtZero) or [r,inf) (AtInfinity), G >= 0 and
    // already including any rho^(d-1) factor.
    DivergenceVerdict radial_divergence(const std::function<double(double)> &G, double r, Orientation o,
                                        const DivergenceOptions &opt = {});

    class WeightFunction
    {
    public:
        enum class Tag { Power, Constant, Custom };

        static WeightFunction power(double kappa);
        static WeightFunction constant(double c = 1.0);
        // f must be non-decreasing and C^1; attested says the caller checked that
        static WeightFunction custom(std::function<double(double)> f, bool attested);

        double operator()(double t) const;
        double integral_to(double t) const;   // int_0^t f
        double laplace(double s) const;       // int_0^inf f(t) e^(-st) dt
        Tag tag() const { return tag_; }
        double kappa() const { return kappa_; }
        bool attested() const { return attested_; }

    private:
        Tag tag_ = Tag::Constant;
        double kappa_ = 0.0;
        double c_ = 1.0;
        bool attested_ = true;
        std::function<double(double)> f_;
    };

    // int_{B(0,r)} int_0^{t0} f(t) dt dxi, t0 = ln2 / (4 sup_x|q|)
    DivergenceVerdict weak_integral_f(const SymbolModel &m, const WeightFunction &f, double r,
                                      const DivergenceOptions &opt = {});
    // int_{B(0,r)} int_0^inf f(t) exp(-t inf_x Re q / 16) dt dxi
    DivergenceVerdict strong_integral_f(const SymbolModel &m, const WeightFunction &f, double r,
                                        const DivergenceOptions &opt = {});
    // int_{B(0,r)} (sup_x|q|)^-(kappa+1) dxi
    DivergenceVerdict weak_integral_kappa(const SymbolModel &m, double kappa, double r = 1.0,
                                          const DivergenceOptions &opt = {});
    // int_{B(0,r)} (inf_x Re q)^-(kappa+1) dxi
    DivergenceVerdict strong_integral_kappa(const SymbolModel &m, double kappa, double r = 1.0,
                                            const DivergenceOptions &opt = {});

    enum class TestSide { Weak, Strong };

    struct RIndependence
    {
        bool agree = true;
        std::vector<std::pair<double, VerdictState>> verdicts;
    };
    RIndependence r_independence_report(const SymbolModel &m, TestSide side, double kappa,
                                        const std::vector<double> &r_list, const DivergenceOptions &opt = {});

    // true when xi -> sup_x|q| and xi -> inf_x Re q are functions of |xi| only
    bool radial_envelope(const SymbolModel &m);
}
