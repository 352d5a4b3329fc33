#pragma once

#include "levy/symbol.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace levy
{
    // Philox4x32-10 block: 128-bit counter, 64-bit key
    std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

    // Counter-based stream. Substream (seed, index, tag) is independent of how work is scheduled.
    class Stream
    {
    public:
        Stream(std::uint64_t seed, std::uint64_t index, std::uint32_t tag = 0);

        std::uint32_t next_u32();
        double uniform();          // in (0,1)
        double normal();
        double exponential();
        Vec normal_vec(int d);
        // positive (a)-stable with Laplace transform exp(-s^a), 0 < a < 1 (Kanter)
        double positive_stable(double a);
        // isotropic symmetric alpha-stable in R^d with E exp(i<xi,Z>) = exp(-|xi|^alpha)
        Vec isotropic_stable(int d, double alpha);

    private:
        std::array<std::uint32_t, 2> key_;
        std::array<std::uint32_t, 4> ctr_;
        std::array<std::uint32_t, 4> buf_{};
        int used_ = 4;
        std::optional<double> spare_;
    };

    struct unsupported_mode : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct estimate_refused : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // X_t for an x-independent Brownian or stable model started at 0
    Vec sample_levy_marginal(const SymbolModel &m, double t, Stream &rng);

    struct Path
    {
        std::vector<double> times;
        Mat states;   // d x times.size()
    };

    // Euler scheme X += beta h + (gamma h)^(1/alpha) zeta for stable-like models, h <= T/100
    Path simulate_stable_like_path(const SymbolModel &m, double T, double h, Stream &rng, const Vec &x0 = Vec());

    struct SimConfig
    {
        enum class Mode { ExactMarginal, EulerPath };
        double T = 100.0;
        double h = 0.1;
        int N = 10000;
        std::uint64_t seed = 1;
        double r = 1.0;
        double kappa = 1.0;
        Mode mode = Mode::ExactMarginal;

        int nodes_per_decade = 64;
        double t_min = 1e-3;              // first node of the geometric grid
        bool exact_probability = false;   // chi-square formula for centred isotropic Brownian models
        double band = 0.05;               // for the growth exponent
        double censor_window = 0.1;       // fraction of the horizon counted as censored
        double max_censored = 0.5;
    };

    std::string to_string(SimConfig::Mode m);

    enum class Trend { DivergentTrend, ConvergentTrend, Inconclusive };
    std::string to_string(Trend t);

    struct OccupationEstimate
    {
        std::array<double, 3> horizon{};
        std::array<double, 3> value{};     // S(T), S(2T), S(4T)
        std::array<double, 3> stderr_{};
        // log2 of the ratio of the increments over [2T,4T] and [T,2T]; p+1 for an integrand ~ t^p
        double growth = 0.0;
        double growth_se = 0.0;
        Trend verdict = Trend::Inconclusive;
        std::vector<std::string> warnings;
    };

    // estimate of int_0^H t^kappa P(X_t in B(0,r)) dt at H = T, 2T, 4T
    OccupationEstimate occupation_integral_estimate(const SymbolModel &m, const SimConfig &cfg);

    struct LastExitReport
    {
        std::array<double, 3> horizon{};
        std::array<double, 3> moment{};      // E[min(L,H)^kappa], L the last grid time in B(0,r)
        std::array<double, 3> stderr_{};
        double censored_fraction = 0.0;       // at the largest horizon
        double growth = 0.0;                  // same increment exponent as the occupation estimate
        double growth_se = 0.0;
        Trend verdict = Trend::Inconclusive;
    };

    // censored last-exit moments at T, 2T, 4T (EulerPath only); throws estimate_refused when
    // more than cfg.max_censored of the paths visit the ball in the final censor window
    LastExitReport last_exit_estimate(const SymbolModel &m, double r, const SimConfig &cfg);

    struct EcfPoint
    {
        Vec xi;
        cplx empirical;
        cplx target;     // exp(-t q(xi))
        double se_re = 0.0, se_im = 0.0;
        bool within = false;
    };

    struct EcfReport
    {
        std::vector<EcfPoint> points;
        bool pass = true;
    };

    EcfReport ecf_check(const SymbolModel &m, double t, const std::vector<Vec> &xis, const SimConfig &cfg);

    struct PositivityReport
    {
        double min_re = 0.0;
        double min_re_se = 0.0;
        Vec argmin;
        bool pass = true;   // min Re >= -3 se
    };

    PositivityReport positivity_diagnostic(const SymbolModel &m, double t, const std::vector<Vec> &xis,
                                           const SimConfig &cfg);
}
