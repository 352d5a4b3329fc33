#include "levy/montecarlo.hpp"

#include "levy/parallel.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace levy
{
    std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key)
    {
        constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
        constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += W0;
                key[1] += W1;
            }
            const std::uint64_t p0 = std::uint64_t(M0) * ctr[0];
            const std::uint64_t p1 = std::uint64_t(M1) * ctr[2];
            ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
                   std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
        }
        return ctr;
    }

    Stream::Stream(std::uint64_t seed, std::uint64_t index, std::uint32_t tag)
        : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
          ctr_{0u, tag, std::uint32_t(index), std::uint32_t(index >> 32)}
    {
    }

    std::uint32_t Stream::next_u32()
    {
        if (used_ == 4) {
            buf_ = philox4x32(ctr_, key_);
            ++ctr_[0];
            used_ = 0;
        }
        return buf_[used_++];
    }

    double Stream::uniform()
    {
        const std::uint64_t a = next_u32() >> 5, b = next_u32() >> 6;
        return (double(a * 67108864u + b) + 0.5) * 0x1p-53;
    }

    double Stream::normal()
    {
        if (spare_) {
            const double z = *spare_;
            spare_.reset();
            return z;
        }
        const double rad = std::sqrt(-2.0 * std::log(uniform()));
        const double th = 2.0 * std::numbers::pi * uniform();
        spare_ = rad * std::sin(th);
        return rad * std::cos(th);
    }

    double Stream::exponential() { return -std::log(uniform()); }

    Vec Stream::normal_vec(int d)
    {
        Vec g(d);
        for (int i = 0; i < d; ++i) g[i] = normal();
        return g;
    }

    double Stream::positive_stable(double a)
    {
        if (!(a > 0 && a < 1)) throw std::invalid_argument("positive stable: index must lie in (0,1)");
        const double u = std::numbers::pi * uniform();
        const double e = exponential();
        const double A = std::pow(std::sin(a * u), a / (1 - a)) * std::sin((1 - a) * u) /
                         std::pow(std::sin(u), 1 / (1 - a));
        return std::pow(A / e, (1 - a) / a);
    }

    Vec Stream::isotropic_stable(int d, double alpha)
    {
        if (!(alpha > 0 && alpha <= 2)) throw std::invalid_argument("stable variate: alpha must lie in (0,2]");
        // Gaussian subordinated to a positive alpha/2-stable time: E exp(-S|xi|^2) = exp(-|xi|^alpha)
        const double s = alpha == 2 ? 1.0 : positive_stable(alpha / 2);
        return std::sqrt(2 * s) * normal_vec(d);
    }

    std::string to_string(SimConfig::Mode m) { return m == SimConfig::Mode::ExactMarginal ? "ExactMarginal" : "EulerPath"; }

    std::string to_string(Trend t)
    {
        switch (t) {
        case Trend::DivergentTrend: return "DivergentTrend";
        case Trend::ConvergentTrend: return "ConvergentTrend";
        case Trend::Inconclusive: return "Inconclusive";
        }
        return "Inconclusive";
    }

    namespace
    {
        bool stable_kind(const SymbolModel &m)
        {
            return m.family() == Family::IsotropicStable || m.family() == Family::StableLike;
        }

        // symmetric square root of a PSD matrix, negative rounding noise clipped
        Mat psd_sqrt(const Mat &C)
        {
            Eigen::SelfAdjointEigenSolver<Mat> es(C);
            return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
        }

        // one Euler step of length h for the Brownian and stable-like families
        class Stepper
        {
        public:
            explicit Stepper(const SymbolModel &m) : m_(m), c_(m.scale())
            {
                if (const auto *b = m.brownian_params()) sqrt_c_ = psd_sqrt(b->diffusion);
                else if (!m.stable_params())
                    throw unsupported_mode("path simulation supports Brownian and stable-like families only");
            }

            void step(Vec &x, double h, Stream &rng) const
            {
                const double hc = h * c_;
                if (const auto *b = m_.brownian_params()) {
                    const double ds = b->diffusion_scale(x);
                    Vec dx = std::sqrt(hc * std::max(ds, 0.0)) * (sqrt_c_ * rng.normal_vec(x.size()));
                    if (b->drift.size()) dx += hc * b->drift_scale(x) * b->drift;
                    x += dx;
                    return;
                }
                const StableParams &s = *m_.stable_params();
                const double a = s.alpha(x), g = s.gamma(x);
                if (!(a > 0 && a < 2))
                    throw model_error("stable-like path: alpha(x) = " + std::to_string(a) + " outside (0,2) at a visited state");
                if (!(g > 0)) throw model_error("stable-like path: gamma(x) must be positive");
                Vec dx = std::pow(g * hc, 1 / a) * rng.isotropic_stable(x.size(), a);
                if (s.beta.size()) dx += hc * s.beta_scale(x) * s.beta;
                x += dx;
            }

        private:
            const SymbolModel &m_;
            double c_;
            Mat sqrt_c_;
        };

        void require_marginal(const SymbolModel &m)
        {
            if (!m.x_independent())
                throw unsupported_mode("exact marginals need an x-independent model");
            if (!m.brownian_params() && !stable_kind(m))
                throw unsupported_mode("exact marginals exist for Brownian and isotropic stable families only");
        }

        // P(|X_t| <= r) in closed form when X is centred Brownian with C = s I
        std::optional<double> chi_square_sigma(const SymbolModel &m)
        {
            const auto *b = m.brownian_params();
            if (!b || !m.x_independent() || !m.drift_free()) return std::nullopt;
            const Vec x0 = Vec::Zero(m.dim());
            const Mat C = b->diffusion_scale(x0) * b->diffusion;
            const double s = C(0, 0);
            if (!(s > 0) || !C.isApprox(s * Mat::Identity(m.dim(), m.dim()), 1e-12)) return std::nullopt;
            return s * m.scale();
        }

        struct Segment
        {
            std::vector<double> t;   // nodes, geometric
            std::vector<double> w;   // trapezoid weights in log time, times t
        };

        Segment log_trapezoid(double a, double b, int per_decade)
        {
            const int n = std::max(2, int(std::ceil(per_decade * std::log10(b / a))));
            const double la = std::log(a), ds = (std::log(b) - la) / n;
            Segment s;
            for (int i = 0; i <= n; ++i) {
                const double t = i == n ? b : std::exp(la + i * ds);
                s.t.push_back(t);
                s.w.push_back((i == 0 || i == n ? 0.5 : 1.0) * ds * t);
            }
            return s;
        }

        // growth exponent from the two increments and their variances; total is the value at 4T
        void trend(double total, double i1, double v1, double i2, double v2, double band, double &g, double &se,
                   Trend &out, std::vector<std::string> *warn)
        {
            out = Trend::Inconclusive;
            g = 0;
            se = 0;
            if (!(total > 0)) {
                if (warn) warn->push_back("ball never hit; no growth exponent");
                return;
            }
            if (!(i2 > 0)) {
                // nothing added over the last doubling: the estimate has stopped moving
                if (i1 > 0 || i2 == 0) {
                    g = -INFINITY;
                    out = Trend::ConvergentTrend;
                    if (warn) warn->push_back("no occupation after 2T; growth exponent is -inf");
                }
                return;
            }
            if (!(i1 > 0)) {
                if (warn) warn->push_back("no occupation in [T,2T] but some later; horizon too short");
                return;
            }
            g = std::log2(i2 / i1);
            se = std::sqrt(v1 / (i1 * i1) + v2 / (i2 * i2)) / std::numbers::ln2;
            if (g - 2 * se >= band) out = Trend::DivergentTrend;
            else if (g + 2 * se <= -band) out = Trend::ConvergentTrend;
        }

        void check_config(const SimConfig &cfg)
        {
            if (!(cfg.T > 0) || !(cfg.h > 0) || cfg.N < 1 || !(cfg.r > 0) || !(cfg.kappa >= 0))
                throw std::invalid_argument("simulation config: need T > 0, h > 0, N >= 1, r > 0, kappa >= 0");
        }

        // per-path accumulation over [0, 4T] on the Euler grid
        struct PathStats
        {
            std::array<double, 3> occ{};    // occupation integral up to each horizon
            std::array<double, 3> last{};   // last grid time in the ball up to each horizon
            bool censored = false;
        };

        PathStats run_path(const SymbolModel &m, const Stepper &st, const SimConfig &cfg, double horizon_factor,
                           std::uint64_t index)
        {
            Stream rng(cfg.seed, index, 1);
            const int d = m.dim();
            Vec x = Vec::Zero(d);
            const std::array<double, 3> H{cfg.T, 2 * cfg.T, 4 * cfg.T};
            const double end = horizon_factor * cfg.T;
            const long steps = std::lround(std::ceil(end / cfg.h - 1e-9));
            const double r2 = cfg.r * cfg.r, cut = (1 - cfg.censor_window) * end;
            PathStats ps;
            double t = 0;
            for (long i = 1; i <= steps; ++i) {
                const double t1 = std::min(end, i * cfg.h), dt = t1 - t;
                st.step(x, dt, rng);
                t = t1;
                if (x.squaredNorm() > r2) continue;
                const double wt = (cfg.kappa == 0 ? 1.0 : std::pow(t, cfg.kappa)) * dt;
                for (int k = 0; k < 3; ++k)
                    if (t <= H[k] * (1 + 1e-12)) {
                        ps.occ[k] += wt;
                        ps.last[k] = t;
                    }
                if (t >= cut) ps.censored = true;
            }
            return ps;
        }
    }

    Vec sample_levy_marginal(const SymbolModel &m, double t, Stream &rng)
    {
        require_marginal(m);
        if (!(t >= 0)) throw std::invalid_argument("marginal: time must be non-negative");
        const int d = m.dim();
        const Vec x0 = Vec::Zero(d);
        const double te = t * m.scale();
        if (const auto *b = m.brownian_params()) {
            Vec x = std::sqrt(te * b->diffusion_scale(x0)) * (psd_sqrt(b->diffusion) * rng.normal_vec(d));
            if (b->drift.size()) x += te * b->drift_scale(x0) * b->drift;
            return x;
        }
        const StableParams &s = *m.stable_params();
        Vec x = std::pow(s.gamma(x0) * te, 1 / s.alpha(x0)) * rng.isotropic_stable(d, s.alpha(x0));
        if (s.beta.size()) x += te * s.beta_scale(x0) * s.beta;
        return x;
    }

    Path simulate_stable_like_path(const SymbolModel &m, double T, double h, Stream &rng, const Vec &x0)
    {
        if (!stable_kind(m)) throw unsupported_mode("stable-like path: model is not stable-like");
        if (!(T > 0) || !(h > 0) || h > 0.01 * T * (1 + 1e-12))
            throw std::invalid_argument("stable-like path: need T > 0 and 0 < h <= T/100");
        const Stepper st(m);
        const long steps = std::lround(std::ceil(T / h - 1e-9));
        Path p;
        p.states.resize(m.dim(), steps + 1);
        Vec x = x0.size() ? x0 : Vec::Zero(m.dim());
        p.times.push_back(0.0);
        p.states.col(0) = x;
        for (long i = 1; i <= steps; ++i) {
            const double t1 = std::min(T, i * h);
            st.step(x, t1 - p.times.back(), rng);
            p.times.push_back(t1);
            p.states.col(i) = x;
        }
        return p;
    }

    OccupationEstimate occupation_integral_estimate(const SymbolModel &m, const SimConfig &cfg)
    {
        check_config(cfg);
        OccupationEstimate est;
        est.horizon = {cfg.T, 2 * cfg.T, 4 * cfg.T};
        std::array<double, 3> var{};
        double v1 = 0, v2 = 0;

        if (cfg.mode == SimConfig::Mode::ExactMarginal) {
            require_marginal(m);
            if (!(cfg.t_min > 0 && cfg.t_min < cfg.T)) throw std::invalid_argument("occupation: need 0 < t_min < T");
            const std::optional<double> sigma2 = cfg.exact_probability ? chi_square_sigma(m) : std::nullopt;
            if (cfg.exact_probability && !sigma2)
                est.warnings.push_back("exact probabilities need centred Brownian motion with C = sI; sampled instead");

            // nodes of the three segments, shared endpoints sampled once
            const std::array<Segment, 3> seg{log_trapezoid(cfg.t_min, cfg.T, cfg.nodes_per_decade),
                                             log_trapezoid(cfg.T, 2 * cfg.T, cfg.nodes_per_decade),
                                             log_trapezoid(2 * cfg.T, 4 * cfg.T, cfg.nodes_per_decade)};
            std::vector<double> nodes;
            for (const Segment &s : seg)
                for (double t : s.t)
                    if (nodes.empty() || t > nodes.back()) nodes.push_back(t);

            const double r2 = cfg.r * cfg.r;
            const int d = m.dim();
            std::vector<double> p(nodes.size());
            parallel_for(nodes.size(), [&](std::size_t j) {
                if (sigma2) {
                    p[j] = boost::math::gamma_p(0.5 * d, r2 / (2 * nodes[j] * *sigma2));
                    return;
                }
                Stream rng(cfg.seed, j, 0);
                long hits = 0;
                for (int i = 0; i < cfg.N; ++i)
                    if (sample_levy_marginal(m, nodes[j], rng).squaredNorm() <= r2) ++hits;
                p[j] = double(hits) / cfg.N;
            });
            auto node_var = [&](std::size_t j) { return sigma2 ? 0.0 : p[j] * (1 - p[j]) / cfg.N; };

            // head on (0, t_min]: P taken constant
            std::vector<double> coef(nodes.size(), 0.0);
            std::array<std::vector<double>, 3> seg_coef;
            coef[0] += std::pow(cfg.t_min, cfg.kappa + 1) / (cfg.kappa + 1);
            std::size_t base = 0;
            for (int k = 0; k < 3; ++k) {
                seg_coef[k].assign(nodes.size(), 0.0);
                for (std::size_t i = 0; i < seg[k].t.size(); ++i) {
                    const double c = seg[k].w[i] * std::pow(seg[k].t[i], cfg.kappa);
                    seg_coef[k][base + i] += c;
                }
                base += seg[k].t.size() - 1;
            }
            std::array<double, 3> inc{};
            std::array<double, 3> inc_var{};
            for (int k = 0; k < 3; ++k) {
                std::vector<double> c = seg_coef[k];
                if (k == 0)
                    for (std::size_t j = 0; j < c.size(); ++j) c[j] += coef[j];
                for (std::size_t j = 0; j < c.size(); ++j) {
                    inc[k] += c[j] * p[j];
                    inc_var[k] += c[j] * c[j] * node_var(j);
                }
            }
            // segments share an endpoint, so the increments are slightly correlated; the
            // covariance is dropped in the growth error (it only shrinks it)
            double acc = 0, acc_var = 0;
            std::vector<double> total(nodes.size(), 0.0);
            for (int k = 0; k < 3; ++k) {
                acc += inc[k];
                for (std::size_t j = 0; j < total.size(); ++j) total[j] += seg_coef[k][j] + (k == 0 ? coef[j] : 0.0);
                acc_var = 0;
                for (std::size_t j = 0; j < total.size(); ++j) acc_var += total[j] * total[j] * node_var(j);
                est.value[k] = acc;
                var[k] = acc_var;
            }
            v1 = inc_var[1];
            v2 = inc_var[2];
            trend(est.value[2], inc[1], v1, inc[2], v2, cfg.band, est.growth, est.growth_se, est.verdict, &est.warnings);
        } else {
            const Stepper st(m);
            if (cfg.h > 0.01 * cfg.T * (1 + 1e-12)) throw std::invalid_argument("occupation: need h <= T/100");
            std::vector<PathStats> ps(cfg.N);
            parallel_for(ps.size(), [&](std::size_t i) { ps[i] = run_path(m, st, cfg, 4.0, i); });
            std::array<double, 3> sum{}, sq{};
            double i1 = 0, i2 = 0, q1 = 0, q2 = 0;
            for (const PathStats &s : ps) {
                for (int k = 0; k < 3; ++k) {
                    sum[k] += s.occ[k];
                    sq[k] += s.occ[k] * s.occ[k];
                }
                const double a = s.occ[1] - s.occ[0], b = s.occ[2] - s.occ[1];
                i1 += a;
                i2 += b;
                q1 += a * a;
                q2 += b * b;
            }
            const double n = cfg.N;
            auto mean_var = [n](double s, double q) { return n > 1 ? std::max(0.0, (q - s * s / n) / (n - 1)) / n : 0.0; };
            for (int k = 0; k < 3; ++k) {
                est.value[k] = sum[k] / n;
                var[k] = mean_var(sum[k], sq[k]);
            }
            v1 = mean_var(i1, q1);
            v2 = mean_var(i2, q2);
            trend(sum[2] / n, i1 / n, v1, i2 / n, v2, cfg.band, est.growth, est.growth_se, est.verdict, &est.warnings);
        }
        for (int k = 0; k < 3; ++k) est.stderr_[k] = std::sqrt(var[k]);
        return est;
    }

    LastExitReport last_exit_estimate(const SymbolModel &m, double r, const SimConfig &cfg)
    {
        check_config(cfg);
        if (cfg.mode != SimConfig::Mode::EulerPath) throw unsupported_mode("last exit: EulerPath mode required");
        if (cfg.h > 0.01 * cfg.T * (1 + 1e-12)) throw std::invalid_argument("last exit: need h <= T/100");
        SimConfig c = cfg;
        c.r = r;
        const Stepper st(m);
        std::vector<PathStats> ps(cfg.N);
        parallel_for(ps.size(), [&](std::size_t i) { ps[i] = run_path(m, st, c, 4.0, i); });

        LastExitReport rep;
        rep.horizon = {cfg.T, 2 * cfg.T, 4 * cfg.T};
        long censored = 0;
        for (const PathStats &s : ps) censored += s.censored;
        rep.censored_fraction = double(censored) / cfg.N;
        if (rep.censored_fraction > cfg.max_censored)
            throw estimate_refused("last exit: " + std::to_string(rep.censored_fraction) +
                                   " of the paths are censored; horizon too short");

        auto pw = [&](double t) { return cfg.kappa == 0 ? (t > 0 ? 1.0 : 0.0) : std::pow(t, cfg.kappa); };
        const double n = cfg.N;
        std::array<double, 3> sum{}, sq{};
        double i1 = 0, i2 = 0, q1 = 0, q2 = 0;
        for (const PathStats &s : ps) {
            std::array<double, 3> v{};
            for (int k = 0; k < 3; ++k) {
                v[k] = pw(s.last[k]);
                sum[k] += v[k];
                sq[k] += v[k] * v[k];
            }
            i1 += v[1] - v[0];
            i2 += v[2] - v[1];
            q1 += (v[1] - v[0]) * (v[1] - v[0]);
            q2 += (v[2] - v[1]) * (v[2] - v[1]);
        }
        auto mean_var = [n](double s, double q) { return n > 1 ? std::max(0.0, (q - s * s / n) / (n - 1)) / n : 0.0; };
        for (int k = 0; k < 3; ++k) {
            rep.moment[k] = sum[k] / n;
            rep.stderr_[k] = std::sqrt(mean_var(sum[k], sq[k]));
        }
        trend(sum[2] / n, i1 / n, mean_var(i1, q1), i2 / n, mean_var(i2, q2), cfg.band, rep.growth, rep.growth_se, rep.verdict,
              nullptr);
        return rep;
    }

    namespace
    {
        // samples of X_t in fixed-size chunks, one substream per chunk
        Mat marginal_samples(const SymbolModel &m, double t, const SimConfig &cfg)
        {
            constexpr int chunk = 4096;
            Mat X(m.dim(), cfg.N);
            const std::size_t chunks = (cfg.N + chunk - 1) / chunk;
            parallel_for(chunks, [&](std::size_t c) {
                Stream rng(cfg.seed, c, 2);
                const int end = std::min<int>(cfg.N, int((c + 1) * chunk));
                for (int i = int(c * chunk); i < end; ++i) X.col(i) = sample_levy_marginal(m, t, rng);
            });
            return X;
        }

        EcfPoint ecf_at(const SymbolModel &m, const Mat &X, double t, const Vec &xi)
        {
            const Eigen::ArrayXd ph = (xi.transpose() * X).transpose().array();
            const Eigen::ArrayXd c = ph.cos(), s = ph.sin();
            const double n = double(X.cols());
            EcfPoint p;
            p.xi = xi;
            p.empirical = cplx(c.mean(), s.mean());
            p.target = std::exp(-t * eval_symbol(m, Vec::Zero(m.dim()), xi));
            auto se = [n](const Eigen::ArrayXd &v) {
                return n > 1 ? std::sqrt(std::max(0.0, (v - v.mean()).square().sum() / (n - 1)) / n) : 0.0;
            };
            p.se_re = se(c);
            p.se_im = se(s);
            p.within = std::abs(p.empirical.real() - p.target.real()) <= 3 * p.se_re &&
                       std::abs(p.empirical.imag() - p.target.imag()) <= 3 * p.se_im;
            return p;
        }
    }

    EcfReport ecf_check(const SymbolModel &m, double t, const std::vector<Vec> &xis, const SimConfig &cfg)
    {
        require_marginal(m);
        const Mat X = marginal_samples(m, t, cfg);
        EcfReport rep;
        for (const Vec &xi : xis) {
            rep.points.push_back(ecf_at(m, X, t, xi));
            rep.pass = rep.pass && rep.points.back().within;
        }
        return rep;
    }

    PositivityReport positivity_diagnostic(const SymbolModel &m, double t, const std::vector<Vec> &xis,
                                           const SimConfig &cfg)
    {
        require_marginal(m);
        const Mat X = marginal_samples(m, t, cfg);
        PositivityReport rep;
        rep.min_re = INFINITY;
        for (const Vec &xi : xis) {
            const EcfPoint p = ecf_at(m, X, t, xi);
            if (p.empirical.real() < rep.min_re) {
                rep.min_re = p.empirical.real();
                rep.min_re_se = p.se_re;
                rep.argmin = xi;
            }
        }
        rep.pass = rep.min_re >= -3 * rep.min_re_se;
        return rep;
    }
}
