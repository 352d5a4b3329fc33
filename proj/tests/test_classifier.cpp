#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levy/classifier.hpp"

#include <algorithm>
#include <cmath>

using namespace levy;

namespace
{
    const auto W = Verdict::WeaklyTransient;
    const auto S = Verdict::StronglyTransient;

    bool has_rule(const TransienceReport &r, const std::string &id, Verdict v)
    {
        return std::any_of(r.rules.begin(), r.rules.end(), [&](const FiredRule &f) { return f.id == id && f.supports == v; });
    }

    ClassifyOptions route(ClassifyOptions::Route r)
    {
        ClassifyOptions o;
        o.route = r;
        return o;
    }

    std::vector<std::pair<std::string, SymbolModel>> fixtures()
    {
        return {
            {"brownian d=3", SymbolModel::standard_brownian(3)},
            {"stable d=2 alpha=1.2", SymbolModel::isotropic_stable(2, 1.2)},
            {"stable-like d=3", SymbolModel::stable_like(3, StableParams{ScalarField::tanh_ramp(1.2, 1.5)})},
            {"finite jump d=3", SymbolModel::finite_jump(3, ScalarField::tanh_ramp(0.8, 1.2))},
            {"power tail d=3", SymbolModel::radial_jump(RadialLevyDensity::power_law(3, 1.0, 4.0, 1.0))},
        };
    }
}

TEST_CASE("transience gate")
{
    CHECK(transience_gate(SymbolModel::standard_brownian(3)) == Gate::Transient);
    CHECK(transience_gate(SymbolModel::standard_brownian(2)) == Gate::Recurrent);
    CHECK(transience_gate(SymbolModel::isotropic_stable(1, 0.5)) == Gate::Transient);
    CHECK(transience_gate(SymbolModel::isotropic_stable(1, 1.5)) == Gate::Recurrent);
    // drifted Brownian motion in d=1 is transient
    BrownianParams p{Vec::Ones(1), Mat::Identity(1, 1)};
    CHECK(transience_gate(SymbolModel::brownian(1, p)) == Gate::Transient);
    CHECK_THROWS_AS(classify(SymbolModel::standard_brownian(2), 0.6), not_transient);
}

TEST_CASE("classification examples")
{
    const auto b = classify(SymbolModel::standard_brownian(3), 0.6);
    CHECK(b.verdict == W);
    CHECK(has_rule(b, "Ex4.4ii", W));
    CHECK(classify(SymbolModel::standard_brownian(3), 0.4).verdict == S);

    const auto s = classify(SymbolModel::isotropic_stable(1, 0.5), 0.5);
    CHECK(s.verdict == S);
    CHECK(s.conditional_on.empty());

    const auto sl = classify(SymbolModel::stable_like(3, StableParams{ScalarField::tanh_ramp(1.2, 1.5)}), 1.6);
    CHECK(sl.verdict == W);
    CHECK(has_rule(sl, "Ex4.5iii", W));
    CHECK(sl.conditional_on == std::vector<std::string>{"eq3"});
    CHECK_THROWS_AS(classify(SymbolModel::standard_brownian(3), -0.1), std::invalid_argument);
}

TEST_CASE("weak evidence without symmetry needs the hypothesis")
{
    StableParams p{ScalarField::tanh_ramp(0.6, 0.9)};
    p.beta = Vec::Unit(3, 0);
    const auto m = SymbolModel::stable_like(3, p);
    const auto plain = classify(m, 5.0);
    CHECK(plain.verdict == Verdict::Inconclusive);
    Assumptions a;
    a.weak_test_hypothesis = true;
    const auto with = classify(m, 5.0, a);
    CHECK(with.verdict == W);
    CHECK(with.conditional_on.empty());
    CHECK(has_rule(with, "Ex4.5i", W));
}

TEST_CASE("family closed forms")
{
    const auto fj = SymbolModel::finite_jump(3, ScalarField::tanh_ramp(0.8, 1.2));
    CHECK(classify(fj, 3.0).verdict == W);
    CHECK(has_rule(classify(fj, 3.0), "e2.i", W));
    CHECK(classify(fj, 1.0).verdict == S);

    const auto pt = SymbolModel::radial_jump(RadialLevyDensity::power_law(3, 1.0, 4.0, 1.0));
    const auto r = classify(pt, 0.6);
    CHECK(r.verdict == W);
    CHECK(has_rule(r, "e3.i", W));
    CHECK(classify(pt, 0.4).verdict == S);
}

TEST_CASE("kappa boundary")
{
    CHECK(std::abs(kappa_boundary(SymbolModel::standard_brownian(3)).kappa_star - 0.5) <= 0.02);
    CHECK(std::abs(kappa_boundary(SymbolModel::isotropic_stable(1, 0.5)).kappa_star - 1.0) <= 0.02);
    const auto st = SymbolModel::isotropic_stable(3, 1.0);
    for (auto rt : {ClassifyOptions::Route::All, ClassifyOptions::Route::Integral, ClassifyOptions::Route::Tail})
        CHECK(std::abs(kappa_boundary(st, {}, 0.02, route(rt)).kappa_star - 2.0) <= 0.02);
    CHECK_THROWS_AS(kappa_boundary(SymbolModel::standard_brownian(3), {}, 0.02, {}, 0.6, 8.0), no_boundary);

    // decreasing in alpha
    double prev = INFINITY;
    for (double alpha : {0.4, 0.8, 1.2, 1.6}) {
        const double k = kappa_boundary(SymbolModel::isotropic_stable(2, alpha)).kappa_star;
        CHECK(std::abs(k - (2 / alpha - 1)) <= 0.02);
        CHECK(k < prev);
        prev = k;
    }
}

TEST_CASE("verdicts are monotone in kappa")
{
    for (const auto &[name, m] : fixtures()) {
        bool weak_seen = false;
        for (int i = 0; i <= 16; ++i) {
            const double k = 0.25 * i;
            const Verdict v = classify(m, k).verdict;
            CHECK_MESSAGE(!(weak_seen && v == S), name, " kappa ", k);
            weak_seen = weak_seen || v == W;
        }
        CHECK_MESSAGE(weak_seen, name);
    }
}

TEST_CASE("rescaling leaves verdicts unchanged")
{
    for (const auto &[name, m] : fixtures()) {
        const auto big = m.scaled(3.7);
        for (double k : {0.3, 1.1, 2.7})
            CHECK_MESSAGE(classify(m, k).verdict == classify(big, k).verdict, name, " kappa ", k);
        CHECK_MESSAGE(std::abs(kappa_boundary(m).kappa_star - kappa_boundary(big).kappa_star) <= 0.02, name);
    }
}

TEST_CASE("every verdict has a supporting rule")
{
    for (const auto &[name, m] : fixtures())
        for (double k : {0.2, 1.0, 3.0}) {
            const auto r = classify(m, k);
            if (r.verdict == Verdict::Inconclusive) continue;
            CHECK_MESSAGE(std::any_of(r.rules.begin(), r.rules.end(),
                                      [&](const FiredRule &f) { return !f.id.empty() && f.supports == r.verdict; }),
                          name);
        }
}
