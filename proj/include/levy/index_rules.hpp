#pragma once

#include "levy/symbol.hpp"

#include <string>
#include <utility>
#include <vector>

namespace levy
{
    enum class Conclusion { ImpliesWeak, ImpliesStrong, NecessaryViolated, NotApplicable };
    // "ImpliesEq41", "ImpliesEq43", "NecessaryViolated", "NotApplicable"
    std::string to_string(Conclusion c);

    struct Premise
    {
        std::string name;
        bool holds;
    };

    struct RuleOutcome
    {
        std::string id;
        Conclusion conclusion = Conclusion::NotApplicable;
        std::vector<Premise> premises;
        std::string detail;
    };

    struct PruittIndices
    {
        double lower = 0.0;
        double upper = 0.0;
        double tolerance = 0.0;       // rules treat the indices as known up to this much
        double lower_residual = 0.0;
        double upper_residual = 0.0;
        double window_lo = 0.0;       // |xi| range of the fit
        double window_hi = 0.0;
    };

    // slopes of log sup_x|q| (max over directions) and log inf_x Re q (min over
    // directions) against log|xi| at |xi| = 2^-k, k = 4..20
    double lower_index(const SymbolModel &m);
    double upper_index(const SymbolModel &m);
    PruittIndices pruitt_indices(const SymbolModel &m);

    // "Thm4.6i": d < (kappa+1) lower -> weak; "Thm4.6ii": d < (kappa+1) upper rules out the strong condition
    std::pair<RuleOutcome, RuleOutcome> pruitt_index_rules(int d, double kappa, const PruittIndices &idx);

    // "Prop4.2i/ii": sup|q| = O(|xi|^gamma) with d <= (kappa+1)gamma -> weak;
    // inf Re q >= c|xi|^gamma with d > (kappa+1)gamma -> strong
    std::pair<RuleOutcome, RuleOutcome> scaling_rules(const SymbolModel &m, double gamma, int d, double kappa);

    // "Thm4.3i/ii": symmetric, bounded second moments, d <= 2(kappa+1) -> weak;
    // d > 2(kappa+1) and the nondegeneracy liminf > 0 -> strong
    std::pair<RuleOutcome, RuleOutcome> moment_rules(const SymbolModel &m, int d, double kappa);

    // "Thm4.7i".."Thm4.7iv": convexity or concavity of the radial envelopes near 0
    std::vector<RuleOutcome> convexity_rules(const SymbolModel &m, double kappa, int d);

    // sup over states of int |y|^2 nu(x,dy); +inf when some state has infinite second moment
    double sup_second_moment(const SymbolModel &m);
    // inf over states and directions of <e,C(x)e> + int_{|y| <= pi/(2 rho)} <e,y>^2 nu(x,dy)
    double nondegeneracy(const SymbolModel &m, double rho);

    // sign pattern of second differences on a window (0, eps]
    enum class Shape { Convex, Concave, Linear, Neither };
    struct ShapeReport
    {
        Shape shape = Shape::Neither;
        double window = 0.0;
    };
    ShapeReport radial_shape(const std::function<double(double)> &f);
}
