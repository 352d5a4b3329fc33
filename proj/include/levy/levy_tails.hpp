#pragma once

#include "levy/cf_integrals.hpp"
#include "levy/density.hpp"
#include "levy/symbol.hpp"

#include <array>
#include <optional>
#include <string>

namespace levy
{
    // nu(x, |y| >= u) = S_d int_u^inf v^(d-1) n(x,v) dv, plus shells at radius >= u
    double tail_mass(const RadialLevyDensity &n, const Vec &x, double u);
    // T1 = int_0^rho u nu(x,|y| >= u) du, by nested quadrature
    double integrated_tail(const RadialLevyDensity &n, const Vec &x, double rho);
    // T3 = int_{|y| < rho} |y|^2 nu(x,dy)
    double truncated_second_moment(const RadialLevyDensity &n, const Vec &x, double rho);

    struct TailFunctionals
    {
        double T1, T2, T3;
    };
    // T1 from its own quadrature, T2 = rho^2 nu(x,|y| >= rho), T3 as above
    TailFunctionals tail_functionals(const RadialLevyDensity &n, const Vec &x, double rho);

    // states of the density on a grid, one per distinct local density
    std::vector<Vec> density_states(const RadialLevyDensity &n, const StateGrid &grid = {});

    // int_r^inf rho^(2k-d+1) / (sup_x T1)^(k+1): divergence gives the weak integral condition
    DivergenceVerdict tail_test_weak(const RadialLevyDensity &n, double kappa, double r = 1.0,
                                     const StateGrid &grid = {}, const DivergenceOptions &opt = {});
    // same with inf_x T1: convergence is necessary for the strong condition, and
    // sufficient under the perturbation bound with a decreasing density
    DivergenceVerdict tail_test_strong(const RadialLevyDensity &n, double kappa, double r = 1.0,
                                       const StateGrid &grid = {}, const DivergenceOptions &opt = {});

    // the four decompositions T1 -> T2, T3: ids "Prop5.4/5.10" .. "Prop5.4/5.13"
    struct TailSufficient
    {
        DivergenceVerdict split_sup;       // rho^2 sup nu(B^c) + sup T3; Diverges -> weak-side tail test diverges
        DivergenceVerdict split_inf;       // rho^2 inf nu(B^c) + inf T3; Converges -> strong-side tail test converges
        DivergenceVerdict mass_only;       // rho^(-d-1) / inf nu(B^c)^(k+1)
        DivergenceVerdict moment_only;     // rho^(2k-d+1) / inf T3^(k+1)
        std::vector<std::string> fired;
    };
    TailSufficient tail_sufficient_tests(const RadialLevyDensity &n, double kappa, double r = 1.0,
                                         const StateGrid &grid = {}, const DivergenceOptions &opt = {});

    // int_r^inf rho^(-dk-2d-1) / (inf_x n(x,rho))^(k+1); throws not_applicable when inf n vanishes
    DivergenceVerdict density_tail_test(const RadialLevyDensity &n, double kappa, double r = 1.0,
                                        const StateGrid &grid = {}, const DivergenceOptions &opt = {});

    // liminf over |xi| = 2^-k of inf_x int (1 - cos<xi,y>) nu(x,dy) / |xi|^2, with the verdict "> 0"
    struct LiminfCheck
    {
        bool holds = false;
        double tail_min = 0.0;
        double slope = 0.0;
    };
    LiminfCheck cosine_moment_condition(const RadialLevyDensity &n, const StateGrid &grid = {});
    // liminf of inf_x Re q(x,xi) / |xi|^2 > bound
    LiminfCheck quadratic_lower_bound(const SymbolModel &m, double bound = 0.0);

    // sup_x S_d int u^(d+1) |n_A(x,u) - n_B(Ox,u)| du (+ shell differences); +inf when divergent
    double perturbation_distance(const RadialLevyDensity &a, const RadialLevyDensity &b, const Mat &O,
                                 const StateGrid &grid = {});

    struct EquivalenceReport
    {
        double distance = 0.0;
        double diffusion_gap = 0.0;   // sup_x |c(x) - cbar(Ox)| / 2
        double quadratic_liminf = 0.0;
        bool weak_transfer = false;   // finite distance: weak condition holds for both or neither
        bool strong_transfer = false; // also liminf Re q / |xi|^2 above gap + distance
        std::string detail;
    };
    // both models need a radial jump density (or none) and C(x) = c(x) I
    EquivalenceReport perturbation_equivalence(const SymbolModel &a, const SymbolModel &b, const Mat &O);

    struct ComparisonReport
    {
        bool applicable = false;
        bool a_decreasing = false;
        std::optional<double> witness_u;
        std::optional<Vec> witness_x;
        std::string statement;
        // at a given kappa: weak-side tail verdicts of A and B, and whether they respect the transfer
        std::optional<std::array<VerdictState, 2>> weak;
        std::optional<std::array<VerdictState, 2>> strong;
        bool consistent = true;
    };
    // A's tail dominates B's beyond u0 on a 64-point grid
    ComparisonReport comparison_transfer(const RadialLevyDensity &a, const RadialLevyDensity &b, double u0,
                                         std::optional<double> kappa = std::nullopt, const StateGrid &grid = {});

    struct RegularVariationFit
    {
        double delta = 0.0;    // n(u) ~ u^delta (log u)^beta
        double beta = 0.0;
        double residual = 0.0;
        bool ok = false;
    };
    RegularVariationFit rv_index_fit(const RadialLevyDensity &n);

    enum class TailClass { WeaklyTransient, StronglyTransient, NotTransient, NotCovered, Inconclusive };
    std::string to_string(TailClass c);

    struct TailClassification
    {
        TailClass verdict = TailClass::NotCovered;
        std::string case_id;   // "e3.i" .. "e3.vi"
        std::string rule;
    };
    // log_boundary: does the log-boundary integral converge, needed only when delta = -2d
    TailClassification regular_variation_classify(int d, double delta, double kappa,
                                                  std::optional<bool> log_boundary = std::nullopt, double tol = 1e-9);

    // int_r^inf d rho / (rho^(2d+1) n(rho)); Converges means the boundary condition holds
    DivergenceVerdict log_boundary_test(const RadialLevyDensity &n, double r = 1.0, const DivergenceOptions &opt = {});
}
