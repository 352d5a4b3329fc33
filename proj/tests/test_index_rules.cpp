#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levy/cf_integrals.hpp"
#include "levy/index_rules.hpp"

#include <cmath>

using namespace levy;

namespace
{
    const auto W = Conclusion::ImpliesWeak;
    const auto S = Conclusion::ImpliesStrong;
    const auto V = Conclusion::NecessaryViolated;
    const auto N = Conclusion::NotApplicable;

    SymbolModel ramp_stable(int d, double lo, double hi, EnvelopeMode mode = EnvelopeMode::ClosedForm)
    {
        return SymbolModel::stable_like(d, StableParams{ScalarField::tanh_ramp(lo, hi)}, mode);
    }
}

TEST_CASE("Pruitt indices")
{
    const auto s = pruitt_indices(SymbolModel::isotropic_stable(2, 1.3));
    CHECK(std::abs(s.lower - 1.3) <= 0.02);
    CHECK(std::abs(s.upper - 1.3) <= 0.02);
    const auto b = pruitt_indices(SymbolModel::standard_brownian(3));
    CHECK(std::abs(b.lower - 2) <= 0.02);
    CHECK(std::abs(b.upper - 2) <= 0.02);
    for (auto mode : {EnvelopeMode::ClosedForm, EnvelopeMode::GridSampled}) {
        const auto r = pruitt_indices(ramp_stable(2, 0.6, 1.4, mode));
        CHECK(std::abs(r.lower - 0.6) <= 0.03);
        CHECK(std::abs(r.upper - 1.4) <= 0.03);
    }
}

TEST_CASE("index invariants")
{
    const std::vector<SymbolModel> fixtures{SymbolModel::isotropic_stable(1, 0.5), SymbolModel::standard_brownian(2),
                                            ramp_stable(3, 0.8, 1.6),
                                            SymbolModel::finite_jump(2, 2.5),
                                            SymbolModel::radial_jump(RadialLevyDensity::stable(2, 1.0, 0.9))};
    for (const auto &m : fixtures) {
        const auto p = pruitt_indices(m);
        CHECK(p.lower <= p.upper + 0.02);
        CHECK(p.lower >= -0.02);
        CHECK(p.lower <= 2.02);
        if (m.x_independent()) CHECK(std::abs(p.lower - p.upper) <= 0.02);
        const auto q = pruitt_indices(m.scaled(3.0));
        CHECK(std::abs(q.lower - p.lower) <= 0.02);
        CHECK(std::abs(q.upper - p.upper) <= 0.02);
    }
}

TEST_CASE("Pruitt index rules")
{
    PruittIndices p;
    p.lower = 0.5;
    p.upper = 0.5;
    CHECK(pruitt_index_rules(1, 2.0, p).first.conclusion == W);
    p.lower = p.upper = 2.0;
    CHECK(pruitt_index_rules(3, 1.0, p).second.conclusion == V);
    p.lower = p.upper = 1.5;
    CHECK(pruitt_index_rules(3, 1.0, p).first.conclusion == N);
}

TEST_CASE("scaling rules")
{
    StableParams drift{ScalarField(1.5)};
    drift.beta = Vec::Ones(1);
    CHECK(scaling_rules(SymbolModel::stable_like(1, drift), 1.0, 1, 0.5).first.conclusion == W);
    CHECK(scaling_rules(SymbolModel::isotropic_stable(2, 0.8, 0.8), 0.8, 2, 1.0).second.conclusion == S);
    CHECK(scaling_rules(SymbolModel::standard_brownian(4), 2.0, 4, 1.0).first.conclusion == W);
    // wrong exponent: sup|q|/|xi|^1 blows up for a 0.5-stable symbol
    CHECK(scaling_rules(SymbolModel::isotropic_stable(1, 0.5), 1.0, 1, 0.5).first.conclusion == N);
}

TEST_CASE("moment rules")
{
    CHECK(moment_rules(SymbolModel::standard_brownian(3), 3, 1.0).first.conclusion == W);
    BrownianParams bp;
    bp.diffusion_scale = ScalarField::tanh_ramp(0.5, 2.0);
    CHECK(moment_rules(SymbolModel::brownian(5, bp), 5, 1.0).second.conclusion == S);
    const auto fj = SymbolModel::finite_jump(2, ScalarField::tanh_ramp(2.2, 2.8));
    CHECK(std::isfinite(sup_second_moment(fj)));
    CHECK(moment_rules(fj, 2, 1.0).first.conclusion == W);
    CHECK(moment_rules(SymbolModel::isotropic_stable(1, 1.5), 1, 1.0).first.conclusion == N);
}

TEST_CASE("convexity rules")
{
    const auto c = convexity_rules(SymbolModel::isotropic_stable(1, 1.5), 1.0, 1);
    CHECK(c[0].conclusion == W);
    const auto v = convexity_rules(SymbolModel::isotropic_stable(3, 0.7), 1.0, 3);
    CHECK(v[3].conclusion == S);
    CHECK(v[1].conclusion == V);
    CHECK(radial_shape([](double r) { return 2 * r; }).shape == Shape::Linear);
    const auto lin = convexity_rules(SymbolModel::isotropic_stable(2, 1.0), 1.0, 2);
    CHECK(lin[0].conclusion == W);
    CHECK(lin[3].detail.find("upper_index") != std::string::npos);
    CHECK(lin[0].detail.find("lower_index") != std::string::npos);
}

TEST_CASE("rules agree with the integral tests")
{
    const std::vector<SymbolModel> fixtures{SymbolModel::isotropic_stable(1, 0.5), SymbolModel::isotropic_stable(3, 0.7),
                                            SymbolModel::isotropic_stable(2, 1.5), SymbolModel::standard_brownian(3),
                                            SymbolModel::standard_brownian(5), ramp_stable(2, 0.9, 1.3)};
    for (const auto &m : fixtures) {
        const int d = m.dim();
        const auto idx = pruitt_indices(m);
        for (double k : {0.25, 1.0, 2.0, 4.0}) {
            std::vector<RuleOutcome> all;
            auto [a, b] = pruitt_index_rules(d, k, idx);
            auto [c, e] = moment_rules(m, d, k);
            all = {a, b, c, e};
            for (auto &o : convexity_rules(m, k, d)) all.push_back(o);
            for (double g : {idx.lower, idx.upper}) {
                auto [s1, s2] = scaling_rules(m, g, d, k);
                all.push_back(s1);
                all.push_back(s2);
            }
            for (const auto &o : all) {
                INFO(o.id << " d=" << d << " kappa=" << k);
                if (o.conclusion == W) CHECK(weak_integral_kappa(m, k).resolved() == VerdictState::Diverges);
                if (o.conclusion == S) CHECK(strong_integral_kappa(m, k).resolved() == VerdictState::Converges);
            }
        }
    }
}
