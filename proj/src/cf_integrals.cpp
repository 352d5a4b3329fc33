#include "levy/cf_integrals.hpp"

#include "levy/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>

namespace levy
{
    std::string to_string(VerdictState s)
    {
        switch (s) {
        case VerdictState::Diverges: return "Diverges";
        case VerdictState::Converges: return "Converges";
        case VerdictState::Inconclusive: return "Inconclusive";
        }
        return "Inconclusive";
    }

    namespace
    {
        struct Fit
        {
            double slope = 0.0;
            double residual = 0.0;
            bool ok = false;
        };

        Fit least_squares(const std::vector<double> &x, const std::vector<double> &y)
        {
            Fit f;
            const std::size_t n = x.size();
            if (n < 3) return f;
            double mx = 0, my = 0;
            for (std::size_t i = 0; i < n; ++i) {
                mx += x[i];
                my += y[i];
            }
            mx /= n;
            my /= n;
            double sxx = 0, sxy = 0;
            for (std::size_t i = 0; i < n; ++i) {
                sxx += (x[i] - mx) * (x[i] - mx);
                sxy += (x[i] - mx) * (y[i] - my);
            }
            if (sxx == 0) return f;
            f.slope = sxy / sxx;
            double ss = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double e = y[i] - my - f.slope * (x[i] - mx);
                ss += e * e;
            }
            f.residual = std::sqrt(ss / n);
            f.ok = true;
            return f;
        }
    }

    DivergenceVerdict radial_divergence(const std::function<double(double)> &G, double r, Orientation o,
                                        const DivergenceOptions &opt)
    {
        if (!(r > 0) || !std::isfinite(r)) throw std::invalid_argument("divergence test: r must be positive");
        // work with H on (0, R]: H = G at zero, H(s) = G(1/s)/s^2 at infinity
        const double R = o == Orientation::AtZero ? r : 1.0 / r;
        const std::function<double(double)> H = o == Orientation::AtZero
                                                     ? G
                                                     : std::function<double(double)>([&G](double s) { return G(1.0 / s) / (s * s); });
        const int K = opt.levels;
        DivergenceVerdict v;
        v.band = opt.band;

        std::vector<double> annulus(K, 0.0);
        quad::Options qo;
        qo.rel_tol = opt.rel_tol;
        parallel_for(std::size_t(K), [&](std::size_t k) {
            const double hi = std::ldexp(R, -int(k)), lo = hi / 2;
            annulus[k] = quad::integrate([&](double t) {
                const double rho = std::exp(t);
                return H(rho) * rho;
            }, std::log(lo), std::log(hi), qo).value;
        });
        double acc = 0.0;
        v.partials.push_back({R, 0.0});
        for (int k = 0; k < K; ++k) {
            acc += annulus[k];
            v.partials.push_back({std::ldexp(R, -(k + 1)), acc});
        }

        std::vector<double> lx, ly, rho_pts, h_pts;
        int zeros = 0;
        for (int k = K / 2; k < K; ++k) {
            const double mid = std::ldexp(R, -k) / std::numbers::sqrt2;
            const double h = H(mid);
            if (!(h > 0) || !std::isfinite(h)) {
                ++zeros;
                continue;
            }
            lx.push_back(std::log(mid));
            ly.push_back(std::log(h));
            rho_pts.push_back(mid);
            h_pts.push_back(h);
        }
        if (zeros == K - K / 2) {
            v.state = v.refined = VerdictState::Converges;
            v.exponent = INFINITY;
            v.note = "integrand vanishes near the singular end";
            return v;
        }
        const Fit fit = least_squares(lx, ly);
        if (!fit.ok || zeros > 0) {
            v.note = "integrand not a clean power near the singular end";
            return v;
        }
        v.exponent = fit.slope;
        v.residual = fit.residual;
        if (v.exponent <= -1.0 - opt.band) v.state = VerdictState::Diverges;
        else if (v.exponent >= -1.0 + opt.band) v.state = VerdictState::Converges;

        if (v.residual > 0.05) {
            v.refined = VerdictState::Inconclusive;
            v.note = "local exponent fit has large residual";
        } else if (std::abs(v.exponent + 1.0) >= 2e-3) {
            v.refined = v.exponent < -1.0 ? VerdictState::Diverges : VerdictState::Converges;
        } else {
            // G(rho) rho ~ log(1/rho)^beta: divergent iff beta >= -1
            std::vector<double> x, y;
            for (std::size_t i = 0; i < rho_pts.size(); ++i)
                if (rho_pts[i] < 0.5) {
                    x.push_back(std::log(std::log(1.0 / rho_pts[i])));
                    y.push_back(std::log(h_pts[i] * rho_pts[i]));
                }
            const Fit lf = least_squares(x, y);
            if (lf.ok) {
                v.log_slope = lf.slope;
                if (lf.slope >= -1.0 + opt.band) v.refined = VerdictState::Diverges;
                else if (lf.slope <= -1.0 - opt.band) v.refined = VerdictState::Converges;
                v.note = "boundary case decided by the logarithmic refinement";
            }
        }
        if (o == Orientation::AtInfinity) {
            // report in rho: G(rho) ~ rho^p with p = -slope(H) - 2, partials indexed by the upper limit
            v.exponent = -v.exponent - 2.0;
            for (Partial &p : v.partials) p.eps = 1.0 / p.eps;
        }
        return v;
    }

    WeightFunction WeightFunction::power(double kappa)
    {
        if (!(kappa >= 0)) throw std::invalid_argument("weight: kappa must be >= 0");
        WeightFunction w;
        w.tag_ = Tag::Power;
        w.kappa_ = kappa;
        return w;
    }

    WeightFunction WeightFunction::constant(double c)
    {
        if (!(c > 0)) throw std::invalid_argument("weight: constant must be positive");
        WeightFunction w;
        w.tag_ = Tag::Constant;
        w.c_ = c;
        return w;
    }

    WeightFunction WeightFunction::custom(std::function<double(double)> f, bool attested)
    {
        WeightFunction w;
        w.tag_ = Tag::Custom;
        w.f_ = std::move(f);
        w.attested_ = attested;
        return w;
    }

    double WeightFunction::operator()(double t) const
    {
        switch (tag_) {
        case Tag::Power: return kappa_ == 0.0 ? 1.0 : std::pow(t, kappa_);
        case Tag::Constant: return c_;
        case Tag::Custom: return f_(t);
        }
        return 0.0;
    }

    double WeightFunction::integral_to(double t) const
    {
        switch (tag_) {
        case Tag::Power: return std::pow(t, kappa_ + 1) / (kappa_ + 1);
        case Tag::Constant: return c_ * t;
        case Tag::Custom: return quad::integrate(f_, 0.0, t).value;
        }
        return 0.0;
    }

    double WeightFunction::laplace(double s) const
    {
        switch (tag_) {
        case Tag::Power: return std::tgamma(kappa_ + 1) / std::pow(s, kappa_ + 1);
        case Tag::Constant: return c_ / s;
        case Tag::Custom: {
            const auto g = [this, s](double t) { return f_(t) * std::exp(-s * t); };
            return quad::integrate(g, 0.0, 1.0 / s).value + quad::integrate_to_infinity(g, 1.0 / s).value;
        }
        }
        return 0.0;
    }

    bool radial_envelope(const SymbolModel &m) { return radiality_check(m); }

    namespace
    {
        // F is the frequency integrand; sets the flag when the envelope vanishes
        DivergenceVerdict ball_integral(const SymbolModel &m, double r, const DivergenceOptions &opt,
                                        const std::function<double(const Vec &, std::atomic<bool> &)> &F,
                                        const char *vanish_note, bool vanish_diverges)
        {
            const int d = m.dim();
            const double sd = sphere_area(d);
            std::atomic<bool> vanished{false};
            auto G_dir = [&](const Vec &u) {
                return [&, u](double rho) { return sd * std::pow(rho, d - 1) * F(Vec(rho * u), vanished); };
            };
            DivergenceVerdict out;
            if (radial_envelope(m)) {
                out = radial_divergence(G_dir(Vec::Unit(d, 0)), r, Orientation::AtZero, opt);
            } else {
                const std::vector<Vec> dirs = sphere_directions(d, d == 1 ? 2 : opt.directions);
                std::vector<DivergenceVerdict> per;
                for (const Vec &u : dirs) per.push_back(radial_divergence(G_dir(u), r, Orientation::AtZero, opt));
                std::size_t worst = 0;
                for (std::size_t j = 1; j < per.size(); ++j)
                    if (per[j].exponent < per[worst].exponent) worst = j;
                out = per[worst];
                for (std::size_t k = 0; k < out.partials.size(); ++k) {
                    double s = 0;
                    for (const auto &p : per) s += p.partials[k].value;
                    out.partials[k].value = s / per.size();
                }
                out.note += (out.note.empty() ? "" : "; ") + std::string("worst of ") + std::to_string(dirs.size()) +
                            " directions";
            }
            if (vanished) {
                if (!vanish_diverges) throw model_error(vanish_note);
                out.state = out.refined = VerdictState::Diverges;
                out.note = vanish_note;
            }
            return out;
        }
    }

    DivergenceVerdict weak_integral_f(const SymbolModel &m, const WeightFunction &f, double r,
                                      const DivergenceOptions &opt)
    {
        return ball_integral(m, r, opt, [&](const Vec &xi, std::atomic<bool> &vanished) {
            const double s = sup_abs_q(m, xi);
            if (s == 0.0) {
                vanished = true;
                return 0.0;
            }
            return f.integral_to(std::numbers::ln2 / (4 * s));
        }, "model degenerate: sup_x|q(x,xi)| vanishes at some xi != 0", false);
    }

    DivergenceVerdict strong_integral_f(const SymbolModel &m, const WeightFunction &f, double r,
                                        const DivergenceOptions &opt)
    {
        return ball_integral(m, r, opt, [&](const Vec &xi, std::atomic<bool> &vanished) {
            const double s = inf_re_q(m, xi);
            if (s <= 0.0) {
                vanished = true;
                return 0.0;
            }
            return f.laplace(s / 16);
        }, "inf_x Re q vanishes on a set of directions", true);
    }

    DivergenceVerdict weak_integral_kappa(const SymbolModel &m, double kappa, double r, const DivergenceOptions &opt)
    {
        if (!(kappa >= 0)) throw std::invalid_argument("kappa must be >= 0");
        return ball_integral(m, r, opt, [&](const Vec &xi, std::atomic<bool> &vanished) {
            const double s = sup_abs_q(m, xi);
            if (s == 0.0) {
                vanished = true;
                return 0.0;
            }
            return std::pow(s, -(kappa + 1));
        }, "model degenerate: sup_x|q(x,xi)| vanishes at some xi != 0", false);
    }

    DivergenceVerdict strong_integral_kappa(const SymbolModel &m, double kappa, double r,
                                            const DivergenceOptions &opt)
    {
        if (!(kappa >= 0)) throw std::invalid_argument("kappa must be >= 0");
        return ball_integral(m, r, opt, [&](const Vec &xi, std::atomic<bool> &vanished) {
            const double s = inf_re_q(m, xi);
            if (s <= 0.0) {
                vanished = true;
                return 0.0;
            }
            return std::pow(s, -(kappa + 1));
        }, "inf_x Re q vanishes on a set of directions", true);
    }

    RIndependence r_independence_report(const SymbolModel &m, TestSide side, double kappa,
                                        const std::vector<double> &r_list, const DivergenceOptions &opt)
    {
        RIndependence rep;
        for (double r : r_list) {
            const DivergenceVerdict v =
                side == TestSide::Weak ? weak_integral_kappa(m, kappa, r, opt) : strong_integral_kappa(m, kappa, r, opt);
            rep.verdicts.emplace_back(r, v.resolved());
            if (v.resolved() != rep.verdicts.front().second) rep.agree = false;
        }
        return rep;
    }
}
