#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levy/symbol.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace levy;

namespace
{
    Vec v1(double a) { return Vec::Constant(1, a); }
    Vec axis(int d, double r)
    {
        Vec v = Vec::Zero(d);
        v(0) = r;
        return v;
    }

    // composite Simpson on [a,b] with n (even) intervals
    template <class F>
    double simpson(F f, double a, double b, long n)
    {
        const double h = (b - a) / n;
        double s = f(a) + f(b);
        for (long i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
        return s * h / 3.0;
    }
}

TEST_CASE("quadrature: power tails and dyadic blocks")
{
    auto r = quad::integrate_to_infinity([](double u) { return std::pow(u, -1.5); }, 2.0);
    CHECK(r.value == doctest::Approx(2.0 / std::sqrt(2.0)).epsilon(1e-9));
    auto z = quad::integrate_from_zero([](double u) { return std::pow(u, -0.5); }, 4.0);
    CHECK(z.value == doctest::Approx(4.0).epsilon(1e-9));
    auto dv = quad::integrate_to_infinity([](double u) { return 1.0 / u; }, 1.0);
    CHECK(dv.divergent);
    auto g = quad::integrate([](double u) { return std::exp(-u * u); }, -8.0, 8.0);
    CHECK(g.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("one-dimensional jump symbol against a Simpson oracle")
{
    const auto n = RadialLevyDensity::power_law(1, 1.0, 0.5, 1.0);
    const auto m = SymbolModel::radial_jump(n);
    const double got = eval_symbol(m, v1(0), v1(1.0)).real();

    const double U = 1e4;
    const double body = simpson([](double u) { return (1 - std::cos(u)) * std::pow(u, -1.5); }, 1.0, U, 1000000);
    const double tail = 2 / std::sqrt(U) + std::sin(U) * std::pow(U, -1.5) - 1.5 * std::cos(U) * std::pow(U, -2.5);
    const double oracle = 2 * (body + tail);
    CHECK(std::abs(got - oracle) < 1e-6);
}

TEST_CASE("stable density reproduces gamma rho^alpha")
{
    for (int d : {1, 2, 3})
        for (double alpha : {0.5, 1.0, 1.5}) {
            const auto n = RadialLevyDensity::stable(d, 0.7, alpha);
            for (double rho : {0.01, 0.3, 1.0, 7.0}) {
                const double q = radial_jump_symbol(n, Vec::Zero(d), rho);
                CHECK(q == doctest::Approx(0.7 * std::pow(rho, alpha)).epsilon(1e-6));
            }
        }
}

TEST_CASE("closed-form values")
{
    const auto s = SymbolModel::isotropic_stable(1, 0.5);
    CHECK(eval_symbol(s, v1(3), v1(2)).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(eval_symbol(s, v1(3), v1(0)) == cplx(0.0));

    const auto b = SymbolModel::standard_brownian(3);
    const Envelope e = envelopes(b, axis(3, 2.0));
    CHECK(e.sup_abs == doctest::Approx(2.0));
    CHECK(e.inf_re == doctest::Approx(2.0));
    CHECK(sup_abs_q(b, Vec::Zero(3)) == 0.0);
}

TEST_CASE("stable-like envelopes against dense alpha maximisation")
{
    StableParams p{ScalarField::tanh_ramp(0.5, 1.5, 1.0)};
    const auto m = SymbolModel::stable_like(2, p);
    double hi = 0, lo = 1e300;
    for (int i = 0; i <= 100000; ++i) {
        const double a = 0.5 + i * 1e-5;
        hi = std::max(hi, std::pow(0.25, a));
        lo = std::min(lo, std::pow(0.25, a));
    }
    CHECK(sup_abs_q(m, axis(2, 0.25)) == doctest::Approx(hi).epsilon(1e-12));
    CHECK(inf_re_q(m, axis(2, 0.25)) == doctest::Approx(lo).epsilon(1e-12));
    CHECK(hi == doctest::Approx(0.5));
    CHECK(lo == doctest::Approx(0.125));
}

TEST_CASE("grid envelopes bound every state and are attained")
{
    StableParams p{ScalarField::cosine(1.0, 0.5, std::numbers::pi / 10)};
    const auto m = SymbolModel::stable_like(2, p, EnvelopeMode::GridSampled);
    for (double r : {0.1, 2.0}) {
        const Vec xi = axis(2, r);
        const Envelope e = envelopes(m, xi);
        double best = 0, worst = 1e300;
        for (const Vec &x : m.states()) {
            const cplx q = eval_symbol(m, x, xi);
            CHECK(std::abs(q) <= e.sup_abs * (1 + 1e-15));
            CHECK(q.real() >= e.inf_re * (1 - 1e-15));
            best = std::max(best, std::abs(q));
            worst = std::min(worst, q.real());
            CHECK(eval_symbol(m, x, Vec::Zero(2)) == cplx(0.0));
        }
        CHECK(best == e.sup_abs);
        CHECK(worst == e.inf_re);
        CHECK(e.sup_abs == doctest::Approx(std::max(std::pow(r, 0.5), std::pow(r, 1.5))));
    }
}

TEST_CASE("empty grid is rejected")
{
    StableParams p{ScalarField::sign_step(1.0, 0.4)};
    CHECK_THROWS_AS(SymbolModel::stable_like(1, p, EnvelopeMode::GridSampled, StateGrid{1, -1, 5}),
                    std::invalid_argument);
}

TEST_CASE("structural validation")
{
    CHECK_THROWS_AS(SymbolModel::isotropic_stable(2, 2.5), model_error);
    CHECK_THROWS_AS(SymbolModel::stable_like(1, StableParams{ScalarField::tanh_ramp(0.5, 2.5)}), model_error);
    BrownianParams bp;
    bp.diffusion = Mat::Identity(2, 2);
    bp.diffusion(1, 1) = -1;
    CHECK_THROWS_AS(SymbolModel::brownian(2, bp), model_error);
    BrownianParams zero;
    zero.diffusion = Mat::Zero(2, 2);
    CHECK_THROWS_AS(SymbolModel::brownian(2, zero), model_error);
    // u^{-3} near 0 in d=1 is not a Levy density
    CHECK_THROWS_AS(SymbolModel::radial_jump(RadialLevyDensity::power_law(1, 1.0, 2.0)), model_error);
}

TEST_CASE("sector condition")
{
    CHECK(sector_check(SymbolModel::standard_brownian(2), 0.0).holds);
    CHECK(sector_check(SymbolModel::isotropic_stable(2, 1.2), 0.0).holds);
    CHECK(sector_check(SymbolModel::isotropic_stable(2, 1.2), 0.9).holds);

    StableParams p{ScalarField(1.5)};
    p.beta = Vec::Zero(2);
    p.beta(1) = 1.0;
    const auto m = SymbolModel::stable_like(2, p);
    const SectorResult s = sector_check(m, 0.0);
    CHECK_FALSE(s.holds);
    REQUIRE(s.witness);
    CHECK(std::abs(s.witness->dot(p.beta)) > 0);
}

TEST_CASE("radiality")
{
    CHECK(radiality_check(SymbolModel::isotropic_stable(3, 1.0)));
    StableParams p{ScalarField(1.5)};
    p.beta = Vec::Ones(2);
    CHECK_FALSE(radiality_check(SymbolModel::stable_like(2, p)));

    LevyTriplet t;
    t.dim = 2;
    t.diffusion = [](const Vec &) { return Mat::Identity(2, 2); };
    Vec y(2);
    y << 2.0, 0.0;
    t.jumps = AtomJumps{{{y, 1.0}, {-y, 1.0}}};
    CHECK_FALSE(radiality_check(SymbolModel::custom(t)));
}

TEST_CASE("symmetry")
{
    CHECK(symmetry_check(SymbolModel::isotropic_stable(2, 0.8)));
    StableParams even{ScalarField::cosine(1.0, 0.3, 0.5)};
    CHECK(symmetry_check(SymbolModel::stable_like(2, even, EnvelopeMode::GridSampled)));
    StableParams step{ScalarField::sign_step(1.0, 0.4)};
    const auto m = SymbolModel::stable_like(2, step, EnvelopeMode::GridSampled);
    CHECK_FALSE(symmetry_check(m));
    Vec x = axis(2, 1.0), xi(2);
    xi << 0.3, 0.5;
    CHECK(eval_symbol(m, x, xi) != eval_symbol(m, Vec(-x), Vec(-xi)));
}

TEST_CASE("rotation invariance and scaling of the stable symbol")
{
    const auto m = SymbolModel::isotropic_stable(3, 1.3, 0.6);
    std::mt19937_64 gen(7);
    std::normal_distribution<double> z;
    Vec xi(3);
    xi << 0.2, -0.7, 1.1;
    for (int k = 0; k < 10; ++k) {
        Mat g(3, 3);
        for (int i = 0; i < 9; ++i) g(i / 3, i % 3) = z(gen);
        const Mat o = Eigen::HouseholderQR<Mat>(g).householderQ();
        CHECK(std::abs(eval_symbol(m, Vec::Zero(3), xi) - eval_symbol(m, Vec::Zero(3), Vec(o * xi))) < 1e-10);
    }
    for (double lam : {0.01, 0.5, 3.0})
        CHECK(std::abs(sup_abs_q(m, Vec(lam * xi)) - std::pow(lam, 1.3) * sup_abs_q(m, xi)) < 1e-10);
}

TEST_CASE("state enumeration dedupes by local parameters")
{
    StableParams p{ScalarField::sign_step(1.0, 0.4)};
    const auto m = SymbolModel::stable_like(3, p, EnvelopeMode::GridSampled);
    CHECK(m.states().size() == 3);
    StableParams q{ScalarField::radial_bump(1.5, 0.8, 2.0)};
    const auto r = SymbolModel::stable_like(3, q, EnvelopeMode::GridSampled);
    CHECK(r.states().size() > 10);
    CHECK(SymbolModel::isotropic_stable(3, 1.0).states().size() == 1);
}
