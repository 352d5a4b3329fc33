#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levy/classifier.hpp"
#include "levy/montecarlo.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace levy;

namespace
{
    // two-sample Kolmogorov-Smirnov statistic scaled by sqrt(nm/(n+m))
    double ks_scaled(std::vector<double> a, std::vector<double> b)
    {
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        std::size_t i = 0, j = 0;
        double D = 0;
        while (i < a.size() && j < b.size()) {
            const double x = std::min(a[i], b[j]);
            while (i < a.size() && a[i] <= x) ++i;
            while (j < b.size() && b[j] <= x) ++j;
            D = std::max(D, std::abs(double(i) / a.size() - double(j) / b.size()));
        }
        const double n = a.size(), m = b.size();
        return D * std::sqrt(n * m / (n + m));
    }

    SimConfig exact_cfg(double kappa)
    {
        SimConfig c;
        c.T = 200;
        c.kappa = kappa;
        c.exact_probability = true;
        return c;
    }
}

TEST_CASE("Philox known answers")
{
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams")
{
    Stream a(7, 3), b(7, 3), c(7, 4), e(8, 3);
    std::vector<std::uint32_t> va, vb, vc, ve;
    for (int i = 0; i < 20; ++i) {
        va.push_back(a.next_u32());
        vb.push_back(b.next_u32());
        vc.push_back(c.next_u32());
        ve.push_back(e.next_u32());
    }
    CHECK(va == vb);
    CHECK(va != vc);
    CHECK(va != ve);

    Stream u(1, 0);
    double lo = 1, hi = 0, mean = 0;
    for (int i = 0; i < 100000; ++i) {
        const double x = u.uniform();
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        mean += x / 100000;
    }
    CHECK(lo > 0);
    CHECK(hi < 1);
    CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("positive stable variate has the right Laplace transform")
{
    for (double a : {0.25, 0.5, 0.75}) {
        Stream rng(11, 0);
        const int n = 100000;
        for (double s : {0.5, 1.0, 3.0}) {
            double m = 0, m2 = 0;
            Stream r2(11, 1);
            for (int i = 0; i < n; ++i) {
                const double v = std::exp(-s * r2.positive_stable(a));
                m += v;
                m2 += v * v;
            }
            m /= n;
            const double se = std::sqrt((m2 / n - m * m) / n);
            CHECK(std::abs(m - std::exp(-std::pow(s, a))) < 3 * se);
        }
    }
}

TEST_CASE("Brownian marginal")
{
    const SymbolModel bm = SymbolModel::standard_brownian(1);
    Stream rng(5, 0);
    const int n = 100000;
    double m = 0, m2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = sample_levy_marginal(bm, 4.0, rng)[0];
        m += x;
        m2 += x * x;
    }
    const double var = m2 / n - (m / n) * (m / n);
    CHECK(std::abs(var - 4.0) < 3 * 4.0 * std::sqrt(2.0 / n));

    // drift and covariance
    BrownianParams p{Vec::Constant(2, 0.5), Mat::Identity(2, 2)};
    p.diffusion(0, 1) = p.diffusion(1, 0) = 0.6;
    const SymbolModel dm = SymbolModel::brownian(2, p);
    Vec mean = Vec::Zero(2);
    Mat cov = Mat::Zero(2, 2);
    for (int i = 0; i < n; ++i) {
        const Vec x = sample_levy_marginal(dm, 2.0, rng);
        mean += x / n;
        cov += x * x.transpose() / n;
    }
    cov -= mean * mean.transpose();
    CHECK(mean[0] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(cov(0, 1) == doctest::Approx(1.2).epsilon(0.03));
    CHECK(cov(1, 1) == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("stable marginals")
{
    const int n = 100000;
    SUBCASE("Cauchy arctan law")
    {
        const SymbolModel c = SymbolModel::isotropic_stable(1, 1.0);
        Stream rng(9, 0);
        int in = 0;
        for (int i = 0; i < n; ++i) in += std::abs(sample_levy_marginal(c, 1.0, rng)[0]) <= 1.0;
        const double p = double(in) / n;
        CHECK(std::abs(p - 0.5) < 3 * std::sqrt(0.25 / n));
        // t = 3: P(|X| <= 1) = 2 atan(1/3) / pi
        in = 0;
        for (int i = 0; i < n; ++i) in += std::abs(sample_levy_marginal(c, 3.0, rng)[0]) <= 1.0;
        const double q = 2 * std::atan(1.0 / 3) / std::numbers::pi;
        CHECK(std::abs(double(in) / n - q) < 3 * std::sqrt(q * (1 - q) / n));
    }
    SUBCASE("ecf at |xi| = 1, alpha 1.5, d = 2")
    {
        SimConfig cfg;
        cfg.N = n;
        cfg.seed = 3;
        const SymbolModel s = SymbolModel::isotropic_stable(2, 1.5);
        const EcfReport r = ecf_check(s, 1.0, {Vec::Unit(2, 0), Vec::Unit(2, 1)}, cfg);
        CHECK(r.pass);
        CHECK(r.points[0].target.real() == doctest::Approx(std::exp(-1.0)));
    }
    SUBCASE("gamma and drift")
    {
        StableParams p{ScalarField(1.2), ScalarField(2.0), Vec::Constant(1, 0.7)};
        const SymbolModel s = SymbolModel::stable_like(1, p);
        SimConfig cfg;
        cfg.N = n;
        const EcfReport r = ecf_check(s, 0.8, {Vec::Constant(1, 0.3), Vec::Constant(1, 1.0), Vec::Constant(1, 2.0)}, cfg);
        CHECK(r.pass);
        CHECK(std::abs(r.points[0].target.imag()) > 0.05);
    }
    SUBCASE("x-dependent models are refused")
    {
        const SymbolModel s = SymbolModel::stable_like(1, StableParams{ScalarField::tanh_ramp(0.5, 1.5)});
        Stream rng(1, 0);
        CHECK_THROWS_AS(sample_levy_marginal(s, 1.0, rng), unsupported_mode);
    }
}

TEST_CASE("ecf and positivity on symmetric families")
{
    SimConfig cfg;
    cfg.N = 50000;
    std::vector<Vec> xis;
    for (int k = 1; k <= 8; ++k) xis.push_back(Vec::Constant(2, 0.25 * k));
    for (double a : {0.5, 1.0, 1.5}) {
        const SymbolModel s = SymbolModel::isotropic_stable(2, a);
        CHECK(ecf_check(s, 0.5, xis, cfg).pass);
        CHECK(positivity_diagnostic(s, 0.5, xis, cfg).pass);
    }
    const EcfReport b = ecf_check(SymbolModel::standard_brownian(3), 1.0, {Vec::Unit(3, 0)}, cfg);
    CHECK(b.points[0].target.real() == doctest::Approx(std::exp(-0.5)));
    CHECK(b.pass);
}

TEST_CASE("Euler paths")
{
    SUBCASE("constant coefficients match the exact marginal")
    {
        const SymbolModel s = SymbolModel::stable_like(2, StableParams{ScalarField(1.3), ScalarField(0.7)});
        const int n = 4000;
        std::vector<double> a, b;
        Stream ra(21, 0), rb(22, 0);
        for (int i = 0; i < n; ++i) {
            const Path p = simulate_stable_like_path(s, 2.0, 0.02, ra);
            a.push_back(p.states.col(p.states.cols() - 1).norm());
            b.push_back(sample_levy_marginal(s, 2.0, rb).norm());
        }
        CHECK(ks_scaled(a, b) < 1.628);   // p > 0.01
    }
    SUBCASE("symmetric without drift")
    {
        const SymbolModel s = SymbolModel::stable_like(1, StableParams{ScalarField::radial_bump(0.8, 1.4)});
        const int n = 20000;
        Stream rng(4, 0);
        double pos = 0, th = 0, th2 = 0;
        for (int i = 0; i < n; ++i) {
            const double x = simulate_stable_like_path(s, 1.0, 0.01, rng).states(0, 100);
            pos += x > 0;
            // odd and bounded: the mean exists for every alpha
            th += std::tanh(x);
            th2 += std::tanh(x) * std::tanh(x);
        }
        CHECK(std::abs(pos / n - 0.5) < 3 * std::sqrt(0.25 / n));
        CHECK(std::abs(th / n) < 3 * std::sqrt(th2 / n / n));
    }
    SUBCASE("smaller alpha leaves a large ball sooner")
    {
        const SymbolModel s = SymbolModel::stable_like(1, StableParams{ScalarField::tanh_ramp(0.6, 1.4, 2.0)});
        const double R = 4;
        auto median_exit = [&](double start, std::uint64_t seed) {
            std::vector<double> tau;
            for (int i = 0; i < 1500; ++i) {
                Stream rng(seed, i);
                const Path p = simulate_stable_like_path(s, 40.0, 0.02, rng, Vec::Constant(1, start));
                double t = 40.0;
                for (std::size_t k = 0; k < p.times.size(); ++k)
                    if (std::abs(p.states(0, k) - start) > R) {
                        t = p.times[k];
                        break;
                    }
                tau.push_back(t);
            }
            std::nth_element(tau.begin(), tau.begin() + tau.size() / 2, tau.end());
            return tau[tau.size() / 2];
        };
        CHECK(median_exit(-25, 1) < median_exit(25, 2));
    }
    SUBCASE("errors")
    {
        Stream rng(1, 0);
        const SymbolModel s = SymbolModel::isotropic_stable(1, 1.0);
        CHECK_THROWS_AS(simulate_stable_like_path(s, 1.0, 0.5, rng), std::invalid_argument);
        CHECK_THROWS_AS(simulate_stable_like_path(SymbolModel::standard_brownian(1), 1.0, 0.01, rng), unsupported_mode);
    }
    SUBCASE("deterministic")
    {
        const SymbolModel s = SymbolModel::stable_like(2, StableParams{ScalarField::tanh_ramp(0.6, 1.4)});
        Stream a(99, 5), b(99, 5);
        const Path p = simulate_stable_like_path(s, 3.0, 0.01, a), q = simulate_stable_like_path(s, 3.0, 0.01, b);
        CHECK(p.states == q.states);
    }
}

TEST_CASE("occupation integral with exact Brownian probabilities")
{
    const SymbolModel bm = SymbolModel::standard_brownian(3);
    const OccupationEstimate w = occupation_integral_estimate(bm, exact_cfg(1.0));
    const double ratio = w.value[1] / w.value[0];
    CHECK(ratio >= 1.364);
    CHECK(ratio <= 1.464);
    CHECK(w.verdict == Trend::DivergentTrend);
    CHECK(w.growth == doctest::Approx(0.5).epsilon(0.05));
    CHECK(w.value[0] <= w.value[1]);
    CHECK(w.value[1] <= w.value[2]);

    // quadrature oracle: int_0^T t P(chi2_3 <= 1/t) dt by the substitution t = e^s
    double oracle = 0;
    const int n = 200000;
    const double a = std::log(1e-8), b = std::log(200.0), ds = (b - a) / n;
    for (int i = 0; i <= n; ++i) {
        const double t = std::exp(a + i * ds);
        oracle += (i == 0 || i == n ? 0.5 : 1.0) * ds * t * t * boost::math::gamma_p(1.5, 0.5 / t);
    }
    CHECK(w.value[0] == doctest::Approx(oracle).epsilon(1e-3));

    const OccupationEstimate s = occupation_integral_estimate(bm, exact_cfg(0.25));
    CHECK(s.verdict == Trend::ConvergentTrend);
    CHECK(s.growth == doctest::Approx(-0.25).epsilon(0.1));
}

TEST_CASE("sampled occupation agrees with the exact one")
{
    const SymbolModel bm = SymbolModel::standard_brownian(3);
    SimConfig c = exact_cfg(1.0);
    c.T = 20;
    c.nodes_per_decade = 16;
    c.N = 20000;
    const OccupationEstimate ex = occupation_integral_estimate(bm, c);
    c.exact_probability = false;
    const OccupationEstimate mc = occupation_integral_estimate(bm, c);
    for (int k = 0; k < 3; ++k) {
        CHECK(mc.stderr_[k] > 0);
        CHECK(std::abs(mc.value[k] - ex.value[k]) < 3 * mc.stderr_[k]);
    }
    CHECK(mc.value[0] <= mc.value[1]);
    CHECK(mc.value[1] <= mc.value[2]);
}

TEST_CASE("boundary case is not called")
{
    // integrand ~ 1/t: each doubling adds the same amount
    SimConfig c;
    c.T = 5;
    c.kappa = 2;
    c.N = 20000;
    c.t_min = 0.05;
    c.nodes_per_decade = 16;
    const OccupationEstimate e = occupation_integral_estimate(SymbolModel::isotropic_stable(3, 1.0), c);
    CHECK(e.verdict == Trend::Inconclusive);
    CHECK(std::abs(e.growth) < 0.3);
}

TEST_CASE("Monte Carlo trend agrees with the classifier away from the boundary")
{
    struct Fixture
    {
        SymbolModel m;
        bool exact;
        double T;
    };
    const std::vector<Fixture> fx = {
        {SymbolModel::standard_brownian(3), true, 200},
        {SymbolModel::standard_brownian(5), true, 200},
        {SymbolModel::isotropic_stable(1, 0.5), false, 8},
        {SymbolModel::isotropic_stable(3, 1.0), false, 3},
        {SymbolModel::isotropic_stable(3, 1.5), false, 4},
    };
    for (const Fixture &f : fx) {
        const double ks = kappa_boundary(f.m).kappa_star;
        for (double kappa : {std::max(0.0, ks - 0.5), ks + 0.5}) {
            const TransienceReport rep = classify(f.m, kappa);
            SimConfig c;
            c.T = f.T;
            c.kappa = kappa;
            c.exact_probability = f.exact;
            c.N = 40000;
            c.t_min = 0.05;
            c.nodes_per_decade = f.exact ? 64 : 16;
            const OccupationEstimate e = occupation_integral_estimate(f.m, c);
            INFO(to_string(f.m.family()), " d=", f.m.dim(), " kappa=", kappa, " g=", e.growth, " se=", e.growth_se);
            if (rep.verdict == Verdict::WeaklyTransient) CHECK(e.verdict == Trend::DivergentTrend);
            else if (rep.verdict == Verdict::StronglyTransient) CHECK(e.verdict == Trend::ConvergentTrend);
            else FAIL("classifier inconclusive");
        }
    }
}

TEST_CASE("Euler occupation")
{
    const SymbolModel s = SymbolModel::stable_like(2, StableParams{ScalarField::tanh_ramp(1.0, 1.6)});
    SimConfig c;
    c.mode = SimConfig::Mode::EulerPath;
    c.T = 5;
    c.h = 0.05;
    c.N = 2000;
    c.kappa = 0.5;
    const OccupationEstimate a = occupation_integral_estimate(s, c);
    c.h = 0.025;
    const OccupationEstimate b = occupation_integral_estimate(s, c);
    CHECK(a.value[0] <= a.value[1]);
    CHECK(a.value[1] <= a.value[2]);
    // halving the step moves the estimate by less than two standard errors
    CHECK(std::abs(a.value[0] - b.value[0]) < 2 * std::hypot(a.stderr_[0], b.stderr_[0]));

    // bit-identical reruns
    const OccupationEstimate again = occupation_integral_estimate(s, c);
    CHECK(again.value == b.value);
    CHECK(again.stderr_ == b.stderr_);

    c.mode = SimConfig::Mode::ExactMarginal;
    CHECK_THROWS_AS(occupation_integral_estimate(s, c), unsupported_mode);
}

TEST_CASE("last exit moments")
{
    SimConfig c;
    c.mode = SimConfig::Mode::EulerPath;
    c.T = 25;
    c.h = 0.25;
    c.N = 4000;
    c.kappa = 1;
    SUBCASE("d = 5 stabilises")
    {
        const LastExitReport r = last_exit_estimate(SymbolModel::standard_brownian(5), 1.0, c);
        CHECK(r.verdict == Trend::ConvergentTrend);
        CHECK(r.censored_fraction < 0.5);
    }
    SUBCASE("d = 3 keeps growing")
    {
        const LastExitReport r = last_exit_estimate(SymbolModel::standard_brownian(3), 1.0, c);
        CHECK(r.verdict == Trend::DivergentTrend);
        CHECK(r.moment[0] <= r.moment[2]);
    }
    SUBCASE("ball never entered")
    {
        c.N = 200;
        const LastExitReport r = last_exit_estimate(SymbolModel::standard_brownian(3), 1e-6, c);
        CHECK(r.moment[2] == 0.0);
        CHECK(r.verdict == Trend::Inconclusive);
    }
    SUBCASE("short horizon is refused")
    {
        c.T = 1;
        c.h = 0.01;
        c.N = 200;
        CHECK_THROWS_AS(last_exit_estimate(SymbolModel::standard_brownian(1), 5.0, c), estimate_refused);
    }
}
