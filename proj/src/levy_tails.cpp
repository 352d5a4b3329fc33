#include "levy/levy_tails.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <map>
#include <set>

namespace levy
{
    double tail_mass(const RadialLevyDensity &n, const Vec &x, double u)
    {
        if (!(u > 0)) throw std::invalid_argument("tail_mass: u must be positive");
        std::vector<double> key = n.key(x);
        key.insert(key.begin(), 0.0);
        key.push_back(u);
        const double v = n.tail_cache().get(key, [&] {
            const quad::Result r = density_integral(n, x, [](double) { return 1.0; }, u, INFINITY);
            return r.divergent ? INFINITY : r.value;
        });
        if (!std::isfinite(v)) throw model_error("Levy measure condition: nu(x, |y| >= u) is infinite");
        return v;
    }

    double truncated_second_moment(const RadialLevyDensity &n, const Vec &x, double rho)
    {
        if (!(rho > 0)) throw std::invalid_argument("truncated_second_moment: rho must be positive");
        std::vector<double> key = n.key(x);
        key.insert(key.begin(), 1.0);
        key.push_back(rho);
        const double v = n.tail_cache().get(key, [&] {
            const quad::Result r = density_integral(n, x, [](double u) { return u * u; }, 0.0, rho);
            return r.divergent ? INFINITY : r.value;
        });
        if (!std::isfinite(v)) throw model_error("Levy measure condition: int_{|y|<1} |y|^2 nu(x,dy) is infinite");
        return v;
    }

    double integrated_tail(const RadialLevyDensity &n, const Vec &x, double rho)
    {
        if (!(rho > 0)) throw std::invalid_argument("integrated_tail: rho must be positive");
        std::vector<double> cuts{0.0};
        for (double b : n.breakpoints())
            if (b < rho) cuts.push_back(b);
        for (const Shell &s : n.shells())
            if (s.radius < rho) cuts.push_back(s.radius);
        if (n.support_from() > 0 && n.support_from() < rho) cuts.push_back(n.support_from());
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        cuts.push_back(rho);
        const quad::Fn f = [&](double u) { return u * tail_mass(n, x, u); };
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const quad::Result r = cuts[i] == 0.0 ? quad::integrate_from_zero(f, cuts[i + 1])
                                                  : quad::integrate(f, cuts[i], cuts[i + 1]);
            total += r.value;
        }
        return total;
    }

    TailFunctionals tail_functionals(const RadialLevyDensity &n, const Vec &x, double rho)
    {
        return {integrated_tail(n, x, rho), rho * rho * tail_mass(n, x, rho), truncated_second_moment(n, x, rho)};
    }

    std::vector<Vec> density_states(const RadialLevyDensity &n, const StateGrid &grid)
    {
        return enumerate_states(grid, n.dim(), n.dependence(), [&n](const Vec &x) { return n.key(x); });
    }

    namespace
    {
        struct Env
        {
            double lo = INFINITY, hi = 0.0;
        };

        template <class F>
        Env envelope_over(const std::vector<Vec> &states, F f)
        {
            Env e;
            for (const Vec &x : states) {
                const double v = f(x);
                e.lo = std::min(e.lo, v);
                e.hi = std::max(e.hi, v);
            }
            return e;
        }

        // T1 through the parts identity
        double t1(const RadialLevyDensity &n, const Vec &x, double rho)
        {
            return 0.5 * (rho * rho * tail_mass(n, x, rho) + truncated_second_moment(n, x, rho));
        }

        void require_jumps(const RadialLevyDensity &n, const std::vector<Vec> &states, double r)
        {
            const double far = std::ldexp(r, 30);
            for (const Vec &x : states)
                if (t1(n, x, far) > 0.0) return;
            throw not_applicable("tail test: the Levy measure vanishes (no jumps)");
        }

        DivergenceVerdict t1_test(const RadialLevyDensity &n, double kappa, double r, const StateGrid &grid,
                                  const DivergenceOptions &opt, bool sup)
        {
            if (!(kappa >= 0)) throw std::invalid_argument("kappa must be >= 0");
            const int d = n.dim();
            const std::vector<Vec> states = density_states(n, grid);
            require_jumps(n, states, r);
            const auto G = [&](double rho) {
                const Env e = envelope_over(states, [&](const Vec &x) { return t1(n, x, rho); });
                const double t = sup ? e.hi : e.lo;
                return t > 0 ? std::pow(rho, 2 * kappa - d + 1) / std::pow(t, kappa + 1) : INFINITY;
            };
            DivergenceVerdict v = radial_divergence(G, r, Orientation::AtInfinity, opt);
            if (!n.monotone_flag() || !std::all_of(states.begin(), states.end(),
                                                   [&](const Vec &x) { return n.verify_monotone(x); }))
                v.note += (v.note.empty() ? "" : "; ") + std::string("density not verified decreasing: one-directional");
            return v;
        }

        std::string fmt(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", v);
            return buf;
        }

        LiminfCheck liminf_ratio(const std::function<double(double)> &g, double bound)
        {
            LiminfCheck c;
            std::vector<double> x, y;
            c.tail_min = INFINITY;
            for (int k = 12; k <= 20; ++k) {
                const double rho = std::ldexp(1.0, -k);
                const double v = g(rho) / (rho * rho);
                c.tail_min = std::min(c.tail_min, v);
                x.push_back(std::log(rho));
                y.push_back(std::log(std::max(v, 1e-300)));
            }
            double mx = 0, my = 0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                mx += x[i];
                my += y[i];
            }
            mx /= x.size();
            my /= y.size();
            double sxx = 0, sxy = 0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                sxx += (x[i] - mx) * (x[i] - mx);
                sxy += (x[i] - mx) * (y[i] - my);
            }
            c.slope = sxy / sxx;
            c.holds = c.tail_min > 0 && (c.slope < -0.02 || (c.slope <= 0.02 && c.tail_min > bound));
            return c;
        }
    }

    DivergenceVerdict tail_test_weak(const RadialLevyDensity &n, double kappa, double r, const StateGrid &grid,
                                     const DivergenceOptions &opt)
    {
        return t1_test(n, kappa, r, grid, opt, true);
    }

    DivergenceVerdict tail_test_strong(const RadialLevyDensity &n, double kappa, double r, const StateGrid &grid,
                                       const DivergenceOptions &opt)
    {
        return t1_test(n, kappa, r, grid, opt, false);
    }

    TailSufficient tail_sufficient_tests(const RadialLevyDensity &n, double kappa, double r, const StateGrid &grid,
                                         const DivergenceOptions &opt)
    {
        if (!(kappa >= 0)) throw std::invalid_argument("kappa must be >= 0");
        const int d = n.dim();
        const std::vector<Vec> states = density_states(n, grid);
        require_jumps(n, states, r);
        const double pw = 2 * kappa - d + 1, k1 = kappa + 1;
        const auto inv = [](double num, double den, double k) { return den > 0 ? num / std::pow(den, k) : INFINITY; };
        auto mass = [&](double rho) { return envelope_over(states, [&](const Vec &x) { return tail_mass(n, x, rho); }); };
        auto mom = [&](double rho) {
            return envelope_over(states, [&](const Vec &x) { return truncated_second_moment(n, x, rho); });
        };
        TailSufficient t;
        t.split_sup = radial_divergence([&](double rho) {
            return inv(std::pow(rho, pw), rho * rho * mass(rho).hi + mom(rho).hi, k1);
        }, r, Orientation::AtInfinity, opt);
        t.split_inf = radial_divergence([&](double rho) {
            return inv(std::pow(rho, pw), rho * rho * mass(rho).lo + mom(rho).lo, k1);
        }, r, Orientation::AtInfinity, opt);
        t.mass_only = radial_divergence([&](double rho) { return inv(std::pow(rho, -d - 1), mass(rho).lo, k1); }, r,
                                        Orientation::AtInfinity, opt);
        t.moment_only = radial_divergence([&](double rho) { return inv(std::pow(rho, pw), mom(rho).lo, k1); }, r,
                                          Orientation::AtInfinity, opt);
        if (t.split_sup.resolved() == VerdictState::Diverges) t.fired.push_back("Prop5.4/5.10");
        if (t.split_inf.resolved() == VerdictState::Converges) t.fired.push_back("Prop5.4/5.11");
        if (t.mass_only.resolved() == VerdictState::Converges) t.fired.push_back("Prop5.4/5.12");
        if (t.moment_only.resolved() == VerdictState::Converges) t.fired.push_back("Prop5.4/5.13");
        return t;
    }

    DivergenceVerdict density_tail_test(const RadialLevyDensity &n, double kappa, double r, const StateGrid &grid,
                                        const DivergenceOptions &opt)
    {
        if (!(kappa >= 0)) throw std::invalid_argument("kappa must be >= 0");
        const int d = n.dim();
        const std::vector<Vec> states = density_states(n, grid);
        const auto inf_n = [&](double rho) {
            return envelope_over(states, [&](const Vec &x) { return n(x, rho); }).lo;
        };
        for (int k = 6; k <= 30; k += 6)
            if (!(inf_n(std::ldexp(r, k)) > 0)) throw not_applicable("density tail test: inf_x n(x,rho) vanishes");
        DivergenceVerdict v = radial_divergence([&](double rho) {
            const double m = inf_n(rho);
            return m > 0 ? std::pow(rho, -d * kappa - 2 * d - 1) / std::pow(m, kappa + 1) : INFINITY;
        }, r, Orientation::AtInfinity, opt);
        if (!n.monotone_flag() || !std::all_of(states.begin(), states.end(),
                                               [&](const Vec &x) { return n.verify_monotone(x); }))
            v.note += (v.note.empty() ? "" : "; ") + std::string("density not verified decreasing");
        return v;
    }

    LiminfCheck cosine_moment_condition(const RadialLevyDensity &n, const StateGrid &grid)
    {
        const std::vector<Vec> states = density_states(n, grid);
        return liminf_ratio([&](double rho) {
            return envelope_over(states, [&](const Vec &x) { return radial_jump_symbol(n, x, rho); }).lo;
        }, 0.0);
    }

    LiminfCheck quadratic_lower_bound(const SymbolModel &m, double bound)
    {
        const std::vector<Vec> dirs = sphere_directions(m.dim(), m.dim() == 1 ? 2 : 16);
        return liminf_ratio([&](double rho) {
            double best = INFINITY;
            for (const Vec &u : dirs) best = std::min(best, inf_re_q(m, Vec(rho * u)));
            return best;
        }, bound);
    }

    namespace
    {
        double distance_at(const RadialLevyDensity &a, const RadialLevyDensity &b, const Vec &x, const Vec &ox)
        {
            const int d = a.dim();
            const double sd = sphere_area(d);
            const auto pa = a.at(x), pb = b.at(ox);
            std::vector<double> cuts{1.0};
            for (double c : a.breakpoints()) cuts.push_back(c);
            for (double c : b.breakpoints()) cuts.push_back(c);
            if (a.support_from() > 0) cuts.push_back(a.support_from());
            if (b.support_from() > 0) cuts.push_back(b.support_from());
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            const quad::Fn f = [&](double u) {
                const double va = u > a.support_from() ? pa(u) : 0.0, vb = u > b.support_from() ? pb(u) : 0.0;
                if (va == vb) return 0.0;
                return sd * std::pow(u, d + 1) * std::abs(va - vb);
            };
            quad::Result r = quad::integrate_from_zero(f, cuts.front());
            double total = r.value;
            if (r.divergent) return INFINITY;
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += quad::integrate(f, cuts[i], cuts[i + 1]).value;
            r = quad::integrate_to_infinity(f, cuts.back());
            if (r.divergent || !std::isfinite(r.value)) return INFINITY;
            total += r.value;

            std::map<double, double> shells;
            for (const Shell &s : a.shells()) shells[s.radius] += s.mass;
            for (const Shell &s : b.shells()) shells[s.radius] -= s.mass;
            for (const auto &[rad, m] : shells) total += std::abs(m) * rad * rad;
            return total;
        }
    }

    double perturbation_distance(const RadialLevyDensity &a, const RadialLevyDensity &b, const Mat &O,
                                 const StateGrid &grid)
    {
        const int d = a.dim();
        if (b.dim() != d || O.rows() != d || O.cols() != d)
            throw std::invalid_argument("perturbation distance: dimension mismatch");
        if ((O.transpose() * O - Mat::Identity(d, d)).norm() > 1e-10)
            throw std::invalid_argument("perturbation distance: O is not orthogonal");
        const bool identity = (O - Mat::Identity(d, d)).norm() == 0.0;
        const Dependence dep = identity ? combine(a.dependence(), b.dependence())
                                        : (a.x_independent() && b.x_independent() ? Dependence::None
                                                                                  : Dependence::Arbitrary);
        const auto states = enumerate_states(grid, d, dep, [&](const Vec &x) {
            std::vector<double> k = a.key(x), kb = b.key(Vec(O * x));
            k.push_back(NAN);     // separator keeps the two keys apart
            k.insert(k.end(), kb.begin(), kb.end());
            for (double &v : k)
                if (std::isnan(v)) v = -1e300;
            return k;
        });
        double best = 0.0;
        for (const Vec &x : states) {
            best = std::max(best, distance_at(a, b, x, Vec(O * x)));
            if (std::isinf(best)) break;
        }
        return best;
    }

    namespace
    {
        // c(x) with C(x) = c(x) I
        double diffusion_coefficient(const SymbolModel &m, const Vec &x)
        {
            if (const auto *b = m.brownian_params()) return m.scale() * b->diffusion_scale(x) * b->diffusion(0, 0);
            if (const auto *r = m.radial_params()) return m.scale() * r->diffusion_scale(x);
            if (m.stable_params()) return 0.0;
            return m.scale() * m.triplet().diffusion(x)(0, 0);
        }

        RadialLevyDensity zero_density(int d)
        {
            return RadialLevyDensity(d, [](const Vec &) { return [](double) { return 0.0; }; }, 0.0, true,
                                     Dependence::None);
        }
    }

    EquivalenceReport perturbation_equivalence(const SymbolModel &a, const SymbolModel &b, const Mat &O)
    {
        if (a.dim() != b.dim()) throw std::invalid_argument("perturbation equivalence: dimension mismatch");
        if (!radiality_check(a) || !radiality_check(b))
            throw not_applicable("perturbation equivalence: both symbols must be radial (b = 0, C = cI, rotation invariant jumps)");
        const int d = a.dim();
        const auto da = a.jump_density(), db = b.jump_density();
        if ((!da && !std::holds_alternative<NoJumps>(a.triplet().jumps)) ||
            (!db && !std::holds_alternative<NoJumps>(b.triplet().jumps)))
            throw not_applicable("perturbation equivalence: jump measures must have radial densities");
        EquivalenceReport rep;
        StateGrid grid = a.grid();
        rep.distance = perturbation_distance(da ? *da : zero_density(d), db ? *db : zero_density(d), O, grid);
        const auto states = enumerate_states(grid, d, Dependence::Arbitrary, {});
        double gap = 0.0;
        const std::size_t stride = std::max<std::size_t>(1, states.size() / 2000);
        for (std::size_t i = 0; i < states.size(); i += stride)
            gap = std::max(gap, std::abs(diffusion_coefficient(a, states[i]) - diffusion_coefficient(b, Vec(O * states[i]))));
        rep.diffusion_gap = 0.5 * gap;
        rep.weak_transfer = std::isfinite(rep.distance);
        const LiminfCheck lb = quadratic_lower_bound(a, rep.diffusion_gap + rep.distance);
        rep.quadratic_liminf = lb.slope < -0.02 ? INFINITY : lb.tail_min;
        rep.strong_transfer = rep.weak_transfer && lb.holds;
        rep.detail = "distance " + fmt(rep.distance) + ", diffusion gap " + fmt(rep.diffusion_gap) +
                     ", liminf Re q/|xi|^2 " + fmt(rep.quadratic_liminf);
        return rep;
    }

    ComparisonReport comparison_transfer(const RadialLevyDensity &a, const RadialLevyDensity &b, double u0,
                                         std::optional<double> kappa, const StateGrid &grid)
    {
        if (a.dim() != b.dim()) throw std::invalid_argument("comparison: dimension mismatch");
        ComparisonReport rep;
        const auto states = enumerate_states(grid, a.dim(), combine(a.dependence(), b.dependence()), [&](const Vec &x) {
            std::vector<double> k = a.key(x), kb = b.key(x);
            k.push_back(-1e300);
            k.insert(k.end(), kb.begin(), kb.end());
            return k;
        });
        const double start = u0 > 0 ? u0 : 1.0;
        rep.a_decreasing = std::all_of(states.begin(), states.end(), [&](const Vec &x) { return a.verify_monotone(x); });
        rep.applicable = true;
        for (const Vec &x : states) {
            for (int i = 0; i < 64 && rep.applicable; ++i) {
                const double u = start * (1 + 1e-9) * std::pow(1e6, i / 63.0);
                const double ta = tail_mass(a, x, u), tb = tail_mass(b, x, u);
                if (ta < tb * (1 - 1e-9)) {
                    rep.applicable = false;
                    rep.witness_u = u;
                    rep.witness_x = x;
                }
            }
            if (!rep.applicable) break;
        }
        if (!rep.applicable) {
            rep.statement = "tail domination fails at u = " + fmt(*rep.witness_u);
            return rep;
        }
        if (!rep.a_decreasing) {
            rep.applicable = false;
            rep.statement = "first density not verified decreasing beyond u0";
            return rep;
        }
        rep.statement = "weak integral divergence transfers from the first model to the second; strong integral "
                        "convergence transfers from the second to the first when the first satisfies the "
                        "perturbation bound";
        if (kappa) {
            const VerdictState wa = tail_test_weak(a, *kappa, 1.0, grid).resolved();
            const VerdictState wb = tail_test_weak(b, *kappa, 1.0, grid).resolved();
            const VerdictState sa = tail_test_strong(a, *kappa, 1.0, grid).resolved();
            const VerdictState sb = tail_test_strong(b, *kappa, 1.0, grid).resolved();
            rep.weak = std::array{wa, wb};
            rep.strong = std::array{sa, sb};
            if (wa == VerdictState::Diverges && wb == VerdictState::Converges) rep.consistent = false;
            if (sb == VerdictState::Converges && sa == VerdictState::Diverges) rep.consistent = false;
        }
        return rep;
    }

    RegularVariationFit rv_index_fit(const RadialLevyDensity &n)
    {
        if (!n.x_independent()) throw not_applicable("regular variation fit: density depends on x");
        RegularVariationFit f;
        const double lo = std::max({std::exp(3.0), 10 * n.u0(), 10 * n.support_from()});
        const Vec x = Vec::Zero(n.dim());
        const int m = 64;
        Mat A(m, 3);
        Vec y(m);
        for (int i = 0; i < m; ++i) {
            const double u = lo * std::pow(1e8, double(i) / (m - 1));
            const double v = n(x, u);
            if (!(v > 0) || !std::isfinite(v)) return f;
            A(i, 0) = std::log(u);
            A(i, 1) = std::log(std::log(u));
            A(i, 2) = 1.0;
            y(i) = std::log(v);
        }
        const Vec c = A.colPivHouseholderQr().solve(y);
        f.delta = c(0);
        f.beta = c(1);
        f.residual = std::sqrt((A * c - y).squaredNorm() / m);
        f.ok = f.residual < 0.05;
        return f;
    }

    std::string to_string(TailClass c)
    {
        switch (c) {
        case TailClass::WeaklyTransient: return "WeaklyTransient";
        case TailClass::StronglyTransient: return "StronglyTransient";
        case TailClass::NotTransient: return "NotTransient";
        case TailClass::NotCovered: return "NotCovered";
        case TailClass::Inconclusive: return "Inconclusive";
        }
        return "Inconclusive";
    }

    TailClassification regular_variation_classify(int d, double delta, double kappa, std::optional<bool> log_boundary,
                                                   double tol)
    {
        if (d < 1) throw std::invalid_argument("dimension must be positive");
        const auto eq = [tol](double a, double b) { return std::abs(a - b) <= tol; };
        const double k1 = kappa + 1;
        TailClassification c;
        auto decide = [&](const char *id, bool weak, const std::string &rule) {
            c.case_id = id;
            c.rule = rule;
            c.verdict = weak ? TailClass::WeaklyTransient : TailClass::StronglyTransient;
            return c;
        };
        if (eq(delta, -d)) return decide("e3.vi", false, "delta = -d: always strongly transient");
        if (delta > -d) {
            c.rule = "index above -d is not a Levy tail index covered here";
            return c;
        }
        if (d >= 3) {
            if (eq(delta, -d - 2.0)) return decide("e3.iii", 2 * k1 > d, "weak iff 2(kappa+1) > d");
            if (delta < -d - 2.0) return decide("e3.i", 2 * k1 >= d, "weak iff 2(kappa+1) >= d");
            return decide("e3.v", d * (kappa + 2) + delta * k1 <= tol * k1, "weak iff d(kappa+2) + delta(kappa+1) <= 0");
        }
        // d = 1, 2
        if (eq(delta, -2.0 * d)) {
            if (!log_boundary) {
                c.verdict = TailClass::Inconclusive;
                c.case_id = "e3.ii";
                c.rule = "delta = -2d needs the log-boundary integral";
                return c;
            }
            if (!*log_boundary) {
                c.case_id = "e3.ii";
                c.rule = "delta = -2d without the log-boundary integral: transience not established";
                return c;
            }
            return decide("e3.ii", 2 * k1 > d, "weak iff 2(kappa+1) > d");
        }
        if (delta < -2.0 * d) {
            c.verdict = TailClass::NotTransient;
            c.rule = "d <= 2 with delta < -2d: recurrent";
            return c;
        }
        if (d == 1) {
            if (delta > -2 && delta < -1) return decide("e3.iv", kappa + 2 + delta * k1 <= tol * k1, "weak iff kappa+2 + delta(kappa+1) <= 0");
            c.rule = "d = 1 with delta outside (-2,-1)";
            return c;
        }
        // delta within tol of the boundary counts as on it
        return decide("e3.v", d * (kappa + 2) + delta * k1 <= tol * k1, "weak iff d(kappa+2) + delta(kappa+1) <= 0");
    }

    DivergenceVerdict log_boundary_test(const RadialLevyDensity &n, double r, const DivergenceOptions &opt)
    {
        if (!n.x_independent()) throw not_applicable("log-boundary test: density depends on x");
        const int d = n.dim();
        const Vec x = Vec::Zero(d);
        return radial_divergence([&](double rho) {
            const double v = n(x, rho);
            return v > 0 ? 1.0 / (std::pow(rho, 2 * d + 1) * v) : INFINITY;
        }, r, Orientation::AtInfinity, opt);
    }
}
