#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levy/cf_integrals.hpp"

#include <cmath>
#include <numbers>

using namespace levy;

namespace
{
    const auto D = VerdictState::Diverges;
    const auto C = VerdictState::Converges;
    const auto I = VerdictState::Inconclusive;
}

TEST_CASE("Brownian weak and strong tests")
{
    const auto b3 = SymbolModel::standard_brownian(3);
    const auto w = weak_integral_f(b3, WeightFunction::power(1.0), 1.0);
    CHECK(w.state == D);
    CHECK(w.exponent == doctest::Approx(-2.0).epsilon(0.01));
    CHECK(weak_integral_kappa(b3, 0.6).state == D);
    CHECK(weak_integral_kappa(b3, 0.4).state == C);
    CHECK(strong_integral_kappa(b3, 0.4).state == C);
    CHECK(strong_integral_f(SymbolModel::standard_brownian(5), WeightFunction::power(1.0), 1.0).state == C);
}

TEST_CASE("stable weak and strong tests")
{
    const auto s = SymbolModel::isotropic_stable(1, 0.5);
    const auto v = weak_integral_f(s, WeightFunction::power(0.5), 1.0);
    CHECK(v.state == C);
    CHECK(v.exponent == doctest::Approx(-0.75).epsilon(0.01));
    CHECK(strong_integral_kappa(SymbolModel::isotropic_stable(3, 1.0), 0.5).state == C);
}

TEST_CASE("constant weight against a direct quadrature oracle")
{
    const auto s = SymbolModel::isotropic_stable(1, 1.5);
    const auto v = weak_integral_f(s, WeightFunction::constant(1.0), 1.0);
    CHECK(v.state == D);
    CHECK(v.exponent == doctest::Approx(-1.5).epsilon(0.01));
    // midpoint rule in log rho on [eps, 1] for 2 * (ln2/4) rho^-1.5
    const Partial &p = v.partials[20];
    const int n = 200000;
    const double a = std::log(p.eps), h = -a / n;
    double oracle = 0;
    for (int i = 0; i < n; ++i) {
        const double rho = std::exp(a + (i + 0.5) * h);
        oracle += 2 * std::numbers::ln2 / 4 * std::pow(rho, -1.5) * rho * h;
    }
    CHECK(p.value == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(v.partials.back().eps < 1e-6);
}

TEST_CASE("inner Laplace integral")
{
    CHECK(WeightFunction::power(1.0).laplace(1.0 / 16) == doctest::Approx(256.0));
    CHECK(WeightFunction::power(0.5).laplace(1.0 / 16) == doctest::Approx(std::tgamma(1.5) * std::pow(16, 1.5)));
    const auto cw = WeightFunction::custom([](double t) { return t; }, true);
    CHECK(cw.laplace(1.0 / 16) == doctest::Approx(256.0).epsilon(1e-8));
    CHECK(cw.integral_to(3.0) == doctest::Approx(4.5));
}

TEST_CASE("kappa = 0 matches the constant-weight test")
{
    for (const auto &m : {SymbolModel::standard_brownian(1), SymbolModel::standard_brownian(3),
                          SymbolModel::isotropic_stable(1, 1.5), SymbolModel::isotropic_stable(1, 0.7)}) {
        CHECK(weak_integral_kappa(m, 0.0).state == weak_integral_f(m, WeightFunction::constant(), 1.0).state);
        CHECK(strong_integral_kappa(m, 0.0).state == strong_integral_f(m, WeightFunction::constant(), 1.0).state);
    }
}

TEST_CASE("kappa and f versions agree on fixtures")
{
    StableParams sl{ScalarField::tanh_ramp(0.6, 1.4)};
    const std::vector<SymbolModel> models{SymbolModel::standard_brownian(3), SymbolModel::isotropic_stable(2, 1.2),
                                          SymbolModel::stable_like(2, sl)};
    for (const auto &m : models)
        for (double k : {0.0, 0.3, 1.0, 2.5}) {
            CHECK(weak_integral_kappa(m, k).state == weak_integral_f(m, WeightFunction::power(k), 1.0).state);
            CHECK(strong_integral_kappa(m, k).state == strong_integral_f(m, WeightFunction::power(k), 1.0).state);
        }
}

TEST_CASE("exponent fit on pure powers")
{
    for (int d : {1, 2, 3, 5})
        for (double a : {0.5, 1.0, 1.7, 2.0})
            for (double k : {0.0, 0.5, 1.5}) {
                const auto m = a == 2.0 ? SymbolModel::standard_brownian(d) : SymbolModel::isotropic_stable(d, a);
                const double p = weak_integral_kappa(m, k).exponent;
                CHECK(std::abs(p - (d - 1 - a * (k + 1))) <= 0.02);
            }
}

TEST_CASE("partials are non-decreasing")
{
    const auto v = weak_integral_kappa(SymbolModel::isotropic_stable(2, 1.3), 0.7);
    for (std::size_t k = 1; k < v.partials.size(); ++k) {
        CHECK(v.partials[k].eps < v.partials[k - 1].eps);
        CHECK(v.partials[k].value >= v.partials[k - 1].value);
    }
}

TEST_CASE("monotone in kappa")
{
    // sup|q| <= 1 on B(0,1)
    const std::vector<SymbolModel> models{SymbolModel::isotropic_stable(3, 1.0), SymbolModel::isotropic_stable(1, 0.5)};
    for (const auto &m : models) {
        bool seen = false;
        for (int i = 0; i <= 16; ++i) {
            const auto s = weak_integral_kappa(m, 0.5 * i).resolved();
            if (seen) CHECK(s == D);
            seen = seen || s == D;
        }
    }
}

TEST_CASE("boundary cases use the logarithmic refinement")
{
    const auto v = weak_integral_kappa(SymbolModel::standard_brownian(4), 1.0);
    CHECK(v.state == I);
    CHECK(v.refined == D);
    CHECK(v.resolved() == D);
    const auto s = strong_integral_kappa(SymbolModel::isotropic_stable(3, 1.0), 2.0);
    CHECK(s.state == I);
    CHECK(s.resolved() == D);
}

TEST_CASE("non-radial envelopes use the worst direction")
{
    StableParams p{ScalarField(1.5)};
    p.beta = Vec::Unit(2, 0);
    const auto m = SymbolModel::stable_like(2, p);
    CHECK_FALSE(radial_envelope(m));
    // drift dominates sup|q| ~ |xi|: exponent 1 - (k+1)
    CHECK(weak_integral_kappa(m, 0.5).state == C);
    const auto v = weak_integral_kappa(m, 1.5);
    CHECK(v.state == D);
    CHECK(v.exponent == doctest::Approx(-1.5).epsilon(0.02));
}

TEST_CASE("vanishing real part makes the strong test diverge")
{
    BrownianParams bp;
    bp.diffusion = Mat::Zero(2, 2);
    bp.diffusion(0, 0) = 1.0;
    const auto m = SymbolModel::brownian(2, bp);
    const auto v = strong_integral_kappa(m, 1.0);
    CHECK(v.state == D);
    CHECK_FALSE(v.note.empty());
}

TEST_CASE("r independence")
{
    CHECK(r_independence_report(SymbolModel::isotropic_stable(2, 1.0), TestSide::Weak, 1.0, {0.5, 1, 2}).agree);
    CHECK(r_independence_report(SymbolModel::standard_brownian(2), TestSide::Weak, 0.0, {0.1, 1}).agree);
    StableParams p{ScalarField::tanh_ramp(0.6, 1.4)};
    const auto sl = SymbolModel::stable_like(2, p);
    const auto rep = r_independence_report(sl, TestSide::Strong, 2.0, {0.5, 1});
    CHECK(rep.agree);
    CHECK(rep.verdicts[0].second == strong_integral_kappa(sl, 2.0, 0.5).resolved());
}
