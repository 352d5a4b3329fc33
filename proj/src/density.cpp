#include "levy/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace levy
{
    RadialLevyDensity::RadialLevyDensity(int d, Binder bind, double u0, bool monotone, Dependence dep, KeyFn key)
        : d_(d), bind_(std::move(bind)), u0_(u0), monotone_(monotone), dep_(dep), key_(std::move(key))
    {
        if (d < 1) throw std::invalid_argument("density: dimension must be positive");
        if (!(u0 >= 0)) throw std::invalid_argument("density: u0 must be >= 0");
        if (u0 > 0) breaks_.push_back(u0);
        text_ = "custom";
    }

    std::vector<double> RadialLevyDensity::key(const Vec &x) const
    {
        if (dep_ == Dependence::None) return {};
        if (key_) return key_(x);
        return std::vector<double>(x.data(), x.data() + x.size());
    }

    double stable_density_constant(int d, double alpha)
    {
        if (!(alpha > 0 && alpha < 2)) throw std::invalid_argument("stable density: alpha must lie in (0,2)");
        return alpha * std::pow(2.0, alpha - 1) * std::tgamma(0.5 * (d + alpha)) /
               (std::pow(std::numbers::pi, 0.5 * d) * std::tgamma(1.0 - 0.5 * alpha));
    }

    RadialLevyDensity RadialLevyDensity::power_law(int d, ScalarField gamma, ScalarField alpha, double support_from)
    {
        if (!(gamma.lower() > 0)) throw std::invalid_argument("power law density: gamma must be positive");
        if (!(alpha.lower() > 0)) throw std::invalid_argument("power law density: alpha must be positive");
        auto bind = [d, gamma, alpha, support_from](const Vec &x) -> Profile {
            const double g = gamma(x), p = -d - alpha(x);
            return [g, p, support_from](double u) { return u > support_from ? g * std::pow(u, p) : 0.0; };
        };
        auto key = [gamma, alpha](const Vec &x) { return std::vector<double>{gamma(x), alpha(x)}; };
        RadialLevyDensity n(d, bind, support_from, true, combine(gamma.dependence(), alpha.dependence()), key);
        n.support_from_ = support_from;
        n.power_ = PowerLaw{gamma, alpha, support_from, false};
        std::ostringstream os;
        os << "power(gamma=" << gamma.describe() << ",alpha=" << alpha.describe() << ",from=" << support_from << ")";
        n.text_ = os.str();
        return n;
    }

    RadialLevyDensity RadialLevyDensity::stable(int d, ScalarField gamma, ScalarField alpha)
    {
        if (!(gamma.lower() > 0)) throw std::invalid_argument("stable density: gamma must be positive");
        if (!(alpha.lower() > 0 && alpha.upper() < 2))
            throw std::invalid_argument("stable density: alpha must lie in (0,2)");
        auto bind = [d, gamma, alpha](const Vec &x) -> Profile {
            const double a = alpha(x);
            const double c = gamma(x) * stable_density_constant(d, a), p = -d - a;
            return [c, p](double u) { return u > 0 ? c * std::pow(u, p) : 0.0; };
        };
        auto key = [gamma, alpha](const Vec &x) { return std::vector<double>{gamma(x), alpha(x)}; };
        RadialLevyDensity n(d, bind, 0.0, true, combine(gamma.dependence(), alpha.dependence()), key);
        n.power_ = PowerLaw{gamma, alpha, 0.0, true};
        n.text_ = "stable(gamma=" + gamma.describe() + ",alpha=" + alpha.describe() + ")";
        return n;
    }

    RadialLevyDensity RadialLevyDensity::finite_jump(int d, ScalarField alpha)
    {
        if (!(alpha.lower() > 0)) throw std::invalid_argument("finite jump density: alpha must be positive");
        const double sd = sphere_area(d);
        auto bind = [d, alpha, sd](const Vec &x) -> Profile {
            const double a = alpha(x), g = a / sd, p = -d - a;
            return [g, p](double u) { return u >= 1.0 ? g * std::pow(u, p) : 0.0; };
        };
        auto key = [alpha](const Vec &x) { return std::vector<double>{alpha(x)}; };
        RadialLevyDensity n(d, bind, 1.0, true, alpha.dependence(), key);
        n.support_from_ = 1.0;
        n.text_ = "finite_jump(alpha=" + alpha.describe() + ")";
        return n;
    }

    RadialLevyDensity RadialLevyDensity::table(int d, std::vector<std::pair<double, double>> pts, double u0,
                                               bool monotone)
    {
        if (pts.size() < 2) throw std::invalid_argument("table density: need at least two points");
        std::sort(pts.begin(), pts.end());
        std::vector<double> lu, ln;
        for (const auto &[u, v] : pts) {
            if (!(u > 0 && v > 0)) throw std::invalid_argument("table density: entries must be positive");
            if (!lu.empty() && std::log(u) == lu.back())
                throw std::invalid_argument("table density: duplicate radius");
            lu.push_back(std::log(u));
            ln.push_back(std::log(v));
        }
        auto bind = [lu, ln](const Vec &) -> Profile {
            return [lu, ln](double u) {
                if (!(u > 0)) return 0.0;
                const double l = std::log(u);
                std::size_t i = std::upper_bound(lu.begin(), lu.end(), l) - lu.begin();
                i = std::clamp<std::size_t>(i, 1, lu.size() - 1);
                const double t = (l - lu[i - 1]) / (lu[i] - lu[i - 1]);
                return std::exp(ln[i - 1] + t * (ln[i] - ln[i - 1]));
            };
        };
        RadialLevyDensity n(d, bind, u0, monotone, Dependence::None);
        for (double l : lu) n.breaks_.push_back(std::exp(l));
        n.text_ = "table(" + std::to_string(pts.size()) + " points)";
        return n;
    }

    RadialLevyDensity RadialLevyDensity::expression(int d, const Expression &e, double u0, bool monotone,
                                                    double support_from)
    {
        auto bind = [e, support_from](const Vec &x) -> Profile {
            return [e, x, support_from](double u) { return u > support_from ? e.eval(u, x) : 0.0; };
        };
        RadialLevyDensity n(d, bind, u0, monotone, e.dependence());
        n.support_from_ = support_from;
        if (support_from > 0) n.breaks_.push_back(support_from);
        n.text_ = "expr(" + e.text() + ")";
        return n;
    }

    RadialLevyDensity RadialLevyDensity::with_inner_factor(double radius, double factor) const
    {
        if (!(radius > 0 && factor >= 0)) throw std::invalid_argument("inner factor: need radius > 0, factor >= 0");
        RadialLevyDensity n = *this;
        n.cache_ = std::make_shared<Memo<double>>();
        Binder inner = bind_;
        n.bind_ = [inner, radius, factor](const Vec &x) -> Profile {
            Profile p = inner(x);
            return [p, radius, factor](double u) { return u < radius ? factor * p(u) : p(u); };
        };
        n.breaks_.push_back(radius);
        if (radius > u0_ && factor < 1.0) n.monotone_ = false;
        n.power_.reset();
        std::ostringstream os;
        os << text_ << "*inner(" << radius << "," << factor << ")";
        n.text_ = os.str();
        return n;
    }

    RadialLevyDensity RadialLevyDensity::scaled(double c) const
    {
        if (!(c > 0)) throw std::invalid_argument("scaled density: factor must be positive");
        RadialLevyDensity n = *this;
        n.cache_ = std::make_shared<Memo<double>>();
        Binder inner = bind_;
        n.bind_ = [inner, c](const Vec &x) -> Profile {
            Profile p = inner(x);
            return [p, c](double u) { return c * p(u); };
        };
        for (Shell &s : n.shells_) s.mass *= c;
        n.power_.reset();
        std::ostringstream os;
        os << c << "*" << text_;
        n.text_ = os.str();
        return n;
    }

    RadialLevyDensity RadialLevyDensity::with_shell(Shell s) const
    {
        if (!(s.radius > 0 && s.mass >= 0)) throw std::invalid_argument("shell: need radius > 0, mass >= 0");
        RadialLevyDensity n = *this;
        n.cache_ = std::make_shared<Memo<double>>();
        n.shells_.push_back(s);
        n.power_.reset();
        return n;
    }

    bool RadialLevyDensity::verify_monotone(const Vec &x) const
    {
        const Profile p = at(x);
        const double start = std::max({u0_, support_from_, 1e-6});
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 64; ++i) {
            const double u = start * (1.0 + 1e-9) * std::pow(1e6, i / 63.0);
            const double v = p(u);
            if (v > prev * (1.0 + 1e-12)) return false;
            prev = v;
        }
        return true;
    }

    double sphere_cos(int d, double s)
    {
        s = std::abs(s);
        if (d == 1) return std::cos(s);
        if (s < 1.0) return 1.0 - one_minus_sphere_cos(d, s);
        if (d == 3) return std::sin(s) / s;
        if (d == 2) return std::cyl_bessel_j(0.0, s);
        const double nu = 0.5 * d - 1.0;
        return std::tgamma(0.5 * d) * std::pow(2.0 / s, nu) * std::cyl_bessel_j(nu, s);
    }

    double one_minus_sphere_cos(int d, double s)
    {
        s = std::abs(s);
        if (d == 1) {
            const double h = std::sin(0.5 * s);
            return 2.0 * h * h;
        }
        if (s >= 1.0) return 1.0 - sphere_cos(d, s);
        // power series of 1 - Gamma(d/2)(2/s)^nu J_nu(s)
        const double q = 0.25 * s * s;
        double term = q / (0.5 * d);
        double sum = term;
        for (int k = 1; k < 30; ++k) {
            term *= -q / ((k + 1) * (k + 0.5 * d));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }

    namespace
    {
        void accumulate(quad::Result &into, const quad::Result &r)
        {
            into.value += r.value;
            into.error += r.error;
            into.evaluations += r.evaluations;
            into.converged = into.converged && r.converged;
            into.divergent = into.divergent || r.divergent;
            into.truncated = into.truncated || r.truncated;
        }

        std::vector<double> cut_points(const RadialLevyDensity &n, double lo, double hi, double extra = -1.0)
        {
            std::vector<double> pts{lo};
            for (double b : n.breakpoints())
                if (b > lo && b < hi) pts.push_back(b);
            if (extra > lo && extra < hi) pts.push_back(extra);
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            return pts;
        }

        quad::Result piecewise(const quad::Fn &g, const std::vector<double> &pts, double hi, const quad::Options &opt)
        {
            quad::Result out;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double a = pts[i];
                const double b = i + 1 < pts.size() ? pts[i + 1] : hi;
                if (std::isinf(b)) {
                    if (a == 0.0) {
                        accumulate(out, quad::integrate_from_zero(g, 1.0, opt));
                        accumulate(out, quad::integrate_to_infinity(g, 1.0, opt));
                    } else {
                        accumulate(out, quad::integrate_to_infinity(g, a, opt));
                    }
                } else if (a == 0.0) {
                    accumulate(out, quad::integrate_from_zero(g, b, opt));
                } else {
                    accumulate(out, quad::integrate_dyadic(g, a, b, opt));
                }
                if (out.divergent) return out;
            }
            return out;
        }
    }

    quad::Result density_integral(const RadialLevyDensity &n, const Vec &x, const std::function<double(double)> &w,
                                  double lo, double hi, const quad::Options &opt)
    {
        quad::Result out;
        const int d = n.dim();
        const double sd = sphere_area(d);
        for (const Shell &s : n.shells())
            if (s.radius >= lo && s.radius < hi) out.value += s.mass * w(s.radius);
        const double a = std::max(lo, n.support_from());
        if (!(a < hi)) return out;
        const RadialLevyDensity::Profile p = n.at(x);
        const quad::Fn g = [&](double u) {
            const double v = p(u);
            return v == 0.0 ? 0.0 : sd * std::pow(u, d - 1) * v * w(u);
        };
        accumulate(out, piecewise(g, cut_points(n, a, hi), hi, opt));
        return out;
    }

    namespace
    {
        // int_a^b h over consecutive half periods; b = inf uses repeated averaging of the partial sums
        double oscillatory(const quad::Fn &h, double a, double b, double half, const quad::Options &opt)
        {
            if (std::isinf(b)) {
                const int chunks = 48, keep = 20;
                std::vector<double> partial;
                double s = 0.0;
                for (int k = 0; k < chunks; ++k) {
                    s += quad::integrate(h, a + k * half, a + (k + 1) * half, opt).value;
                    partial.push_back(s);
                }
                std::vector<double> avg(partial.end() - keep, partial.end());
                while (avg.size() > 1) {
                    for (std::size_t i = 0; i + 1 < avg.size(); ++i) avg[i] = 0.5 * (avg[i] + avg[i + 1]);
                    avg.pop_back();
                }
                return avg[0];
            }
            const double count = std::ceil((b - a) / half);
            if (count > 2e5)
                throw quadrature_error("jump symbol: too many oscillations on a bounded piece", 0.0);
            double s = 0.0;
            for (double lo = a; lo < b; lo += half) s += quad::integrate(h, lo, std::min(b, lo + half), opt).value;
            return s;
        }
    }

    double radial_jump_symbol(const RadialLevyDensity &n, const Vec &x, double rho, const quad::Options &opt)
    {
        rho = std::abs(rho);
        if (rho == 0.0) return 0.0;
        const int d = n.dim();
        const double sd = sphere_area(d);
        double q = 0.0;
        for (const Shell &s : n.shells()) q += s.mass * one_minus_sphere_cos(d, rho * s.radius);

        const double scale = 1.0 / rho;
        const double start = std::max(scale, n.support_from());
        const RadialLevyDensity::Profile p = n.at(x);
        const quad::Fn g_low = [&](double u) {
            const double v = p(u);
            return v == 0.0 ? 0.0 : sd * std::pow(u, d - 1) * v * one_minus_sphere_cos(d, rho * u);
        };
        const quad::Fn g_mass = [&](double u) {
            const double v = p(u);
            return v == 0.0 ? 0.0 : sd * std::pow(u, d - 1) * v;
        };
        const quad::Fn g_osc = [&](double u) {
            const double v = p(u);
            return v == 0.0 ? 0.0 : sd * std::pow(u, d - 1) * v * sphere_cos(d, rho * u);
        };

        quad::Result low;
        const double a = n.support_from();
        if (a < start) low = piecewise(g_low, cut_points(n, a, start), start, opt);
        const quad::Result mass = piecewise(g_mass, cut_points(n, start, INFINITY), INFINITY, opt);
        if (low.divergent || !std::isfinite(low.value))
            throw model_error("jump symbol: integral of |y|^2 near the origin diverges (Levy measure condition)");
        if (mass.divergent)
            throw model_error("jump symbol: tail mass is infinite (Levy measure condition)");
        if (!low.converged || !mass.converged)
            throw quadrature_error("jump symbol: quadrature did not converge", q + low.value + mass.value);

        const std::vector<double> pts = cut_points(n, start, INFINITY);
        const double half = std::numbers::pi / rho;
        double osc = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double b = i + 1 < pts.size() ? pts[i + 1] : INFINITY;
            osc += oscillatory(g_osc, pts[i], b, half, opt);
        }
        return q + low.value + mass.value - osc;
    }
}
