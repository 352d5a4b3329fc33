#pragma once

#include <functional>

namespace levy::quad
{
    struct Options
    {
        double abs_tol = 1e-300;
        double rel_tol = 1e-10;
        int max_intervals = 2000;
        double tail_span = 1e6;     // tails are cut at start*tail_span when no power law is found
    };

    struct Result
    {
        double value = 0.0;
        double error = 0.0;
        bool converged = true;
        bool divergent = false;     // blocks stopped shrinking: integral is +inf
        bool truncated = false;     // tail cut without extrapolation
        int evaluations = 0;
    };

    using Fn = std::function<double(double)>;

    // Globally adaptive 21-point Gauss-Kronrod on [a,b].
    Result integrate(const Fn &f, double a, double b, const Options &opt = {});

    // [a,b] with 0 < a < b, cut into dyadic blocks first. Use when b/a is large.
    Result integrate_dyadic(const Fn &f, double a, double b, const Options &opt = {});

    // int_a^inf, a > 0. Dyadic blocks outward; once the block ratio settles
    // the remainder is summed as a geometric series.
    Result integrate_to_infinity(const Fn &f, double a, const Options &opt = {});

    // int_0^b, dyadic blocks towards the origin, same extrapolation.
    Result integrate_from_zero(const Fn &f, double b, const Options &opt = {});
}
