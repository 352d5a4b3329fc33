#pragma once

#include "levy/cf_integrals.hpp"
#include "levy/index_rules.hpp"
#include "levy/levy_tails.hpp"
#include "levy/symbol.hpp"

#include <optional>
#include <string>
#include <vector>

namespace levy
{
    enum class Gate { Transient, Recurrent, Unknown };
    enum class Verdict { WeaklyTransient, StronglyTransient, Inconclusive };
    // closed forms decide first, then the integral and tail tests, then the index rules
    enum class Tier { Index = 1, Integral = 2, ClosedForm = 3 };

    std::string to_string(Gate g);
    std::string to_string(Verdict v);
    std::string to_string(Tier t);

    // Conditions the user vouches for. JSON keys: eq3, eq0_c, eq5_2, irreducible.
    struct Assumptions
    {
        bool weak_test_hypothesis = false;       // liminf condition behind the weak-side test
        std::optional<double> sector_constant;   // sup|Im q| <= c inf Re q with this c < 1
        bool perturbation_bound = false;         // liminf inf_x Re q / |xi|^2 > 0
        bool irreducible = false;                // open-set irreducibility
        bool operator==(const Assumptions &) const = default;
    };

    struct FiredRule
    {
        std::string id;
        std::string quote_ref;   // the condition that fired, in plain form
        std::string verdict;     // what the rule itself concluded
        Tier tier = Tier::Index;
        Verdict supports = Verdict::Inconclusive;
        std::string detail;
        bool operator==(const FiredRule &) const = default;
    };

    struct TransienceReport
    {
        Gate gate = Gate::Unknown;
        double kappa = 0.0;
        Verdict verdict = Verdict::Inconclusive;
        std::vector<FiredRule> rules;
        std::optional<double> kappa_star;
        Assumptions assumptions;
        bool symmetric = false;
        bool sector_holds = false;
        bool quadratic_bound_holds = false;   // numerical check of the perturbation bound
        std::vector<std::string> conditional_on;
        std::vector<std::string> notes;
        bool operator==(const TransienceReport &) const = default;
    };

    struct ClassifyOptions
    {
        enum class Route { All, Integral, Tail };
        Route route = Route::All;
        double r = 1.0;
        DivergenceOptions divergence;
    };

    struct not_transient : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct no_boundary : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    Gate transience_gate(const SymbolModel &m, const Assumptions &a = {}, std::vector<FiredRule> *trace = nullptr);

    // throws not_transient when the gate says Recurrent
    TransienceReport classify(const SymbolModel &m, double kappa, const Assumptions &a = {},
                              const ClassifyOptions &opt = {});

    struct BoundaryResult
    {
        double kappa_star = 0.0;
        double lo = 0.0, hi = 0.0;   // final bracket
        std::vector<std::pair<double, Verdict>> probes;
    };
    // bisection on [lo, hi] for the switch from strong to weak; throws no_boundary when both ends agree
    BoundaryResult kappa_boundary(const SymbolModel &m, const Assumptions &a = {}, double tol = 0.02,
                                  const ClassifyOptions &opt = {}, double lo = 0.0, double hi = 8.0);
}
