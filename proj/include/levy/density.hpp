#pragma once

#include "levy/expression.hpp"
#include "levy/fields.hpp"
#include "levy/memo.hpp"
#include "levy/quadrature.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace levy
{
    // Mass spread uniformly over the sphere |y| = radius (mass kept apart from the density).
    struct Shell
    {
        double radius;
        double mass;
    };

    // gamma(x) u^(-d-alpha(x)) on u > support_from
    struct PowerLaw
    {
        ScalarField gamma;
        ScalarField alpha;
        double support_from = 0.0;
        bool stable_normalised = false;    // gamma holds the symbol scale, not the density constant
    };

    // Radial jump density n(x,u), u = |y| > 0.
    class RadialLevyDensity
    {
    public:
        using Profile = std::function<double(double)>;
        using Binder = std::function<Profile(const Vec &)>;
        using KeyFn = std::function<std::vector<double>(const Vec &)>;

        RadialLevyDensity(int d, Binder bind, double u0, bool monotone, Dependence dep, KeyFn key = {});

        static RadialLevyDensity power_law(int d, ScalarField gamma, ScalarField alpha, double support_from = 0.0);
        // jump density of the symbol gamma(x)|xi|^alpha(x)
        static RadialLevyDensity stable(int d, ScalarField gamma, ScalarField alpha);
        // alpha(x)/S_d * u^(-d-alpha(x)) on u >= 1, unit total mass
        static RadialLevyDensity finite_jump(int d, ScalarField alpha);
        // points (u, n) interpolated linearly in log-log, end slopes extrapolated
        static RadialLevyDensity table(int d, std::vector<std::pair<double, double>> points, double u0, bool monotone);
        static RadialLevyDensity expression(int d, const Expression &e, double u0, bool monotone,
                                            double support_from = 0.0);

        // n multiplied by factor on u < radius
        RadialLevyDensity with_inner_factor(double radius, double factor) const;
        RadialLevyDensity scaled(double c) const;
        RadialLevyDensity with_shell(Shell s) const;

        double operator()(const Vec &x, double u) const { return bind_(x)(u); }
        Profile at(const Vec &x) const { return bind_(x); }

        int dim() const { return d_; }
        double u0() const { return u0_; }
        bool monotone_flag() const { return monotone_; }
        double support_from() const { return support_from_; }
        const std::vector<double> &breakpoints() const { return breaks_; }
        const std::vector<Shell> &shells() const { return shells_; }
        Dependence dependence() const { return dep_; }
        bool x_independent() const { return dep_ == Dependence::None; }
        std::vector<double> key(const Vec &x) const;
        const std::optional<PowerLaw> &power() const { return power_; }
        const std::string &describe() const { return text_; }

        // numerical check that n is non-increasing on (u0, inf) at 64 log-spaced radii
        bool verify_monotone(const Vec &x) const;

        // tail integrals already computed for this density, keyed by (tag, state key, radius)
        Memo<double> &tail_cache() const { return *cache_; }

    private:
        int d_;
        Binder bind_;
        double u0_;
        bool monotone_;
        Dependence dep_;
        KeyFn key_;
        double support_from_ = 0.0;
        std::vector<double> breaks_;
        std::vector<Shell> shells_;
        std::optional<PowerLaw> power_;
        std::string text_;
        std::shared_ptr<Memo<double>> cache_ = std::make_shared<Memo<double>>();
    };

    // constant c with c|y|^(-d-alpha) dy having symbol |xi|^alpha
    double stable_density_constant(int d, double alpha);

    // average of cos<xi,y> over the sphere |y|=1 at |xi| = s, and 1 minus it (no cancellation)
    double sphere_cos(int d, double s);
    double one_minus_sphere_cos(int d, double s);

    // S_d int_lo^hi u^(d-1) n(x,u) w(u) du (+ shells with radius in [lo,hi)); hi may be +inf
    quad::Result density_integral(const RadialLevyDensity &n, const Vec &x, const std::function<double(double)> &w,
                                  double lo, double hi, const quad::Options &opt = {});

    // int (1 - cos<xi,y>) nu(x,dy) for |xi| = rho
    double radial_jump_symbol(const RadialLevyDensity &n, const Vec &x, double rho, const quad::Options &opt = {});
}
