#include "levy/index_rules.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace levy
{
    std::string to_string(Conclusion c)
    {
        switch (c) {
        case Conclusion::ImpliesWeak: return "ImpliesEq41";
        case Conclusion::ImpliesStrong: return "ImpliesEq43";
        case Conclusion::NecessaryViolated: return "NecessaryViolated";
        case Conclusion::NotApplicable: return "NotApplicable";
        }
        return "NotApplicable";
    }

    namespace
    {
        constexpr int k_first = 4, k_last = 20;

        std::vector<Vec> index_directions(int d) { return sphere_directions(d, d == 1 ? 2 : 16); }

        std::pair<double, double> slope_fit(const std::vector<double> &x, const std::vector<double> &y)
        {
            const std::size_t n = x.size();
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
            const double b = sxy / sxx;
            double ss = 0;
            for (std::size_t i = 0; i < n; ++i) ss += std::pow(y[i] - my - b * (x[i] - mx), 2);
            return {b, std::sqrt(ss / n)};
        }

        // envelope value at |xi| = rho: max over directions of sup|q|, or min of inf Re q
        double directional(const SymbolModel &m, double rho, bool upper_side)
        {
            double best = upper_side ? INFINITY : 0.0;
            for (const Vec &u : index_directions(m.dim())) {
                const Envelope e = envelopes(m, Vec(rho * u));
                best = upper_side ? std::min(best, e.inf_re) : std::max(best, e.sup_abs);
            }
            return best;
        }

        std::pair<double, double> index_fit(const SymbolModel &m, bool upper_side)
        {
            std::vector<double> x, y;
            for (int k = k_first; k <= k_last; ++k) {
                const double rho = std::ldexp(1.0, -k);
                const double v = directional(m, rho, upper_side);
                if (!(v > 0)) {
                    if (upper_side) throw model_error("upper index: inf Re q vanishes near the origin");
                    throw model_error("lower index: sup|q| vanishes identically near the origin");
                }
                x.push_back(std::log(rho));
                y.push_back(std::log(v));
            }
            return slope_fit(x, y);
        }

        // slope of log(g(rho)/rho^gamma) vs log rho over the tail half of the dyadic sequence
        double tail_ratio_slope(const std::function<double(double)> &g, double gamma, double &tail_min, double &tail_max)
        {
            std::vector<double> x, y;
            tail_min = INFINITY;
            tail_max = 0;
            for (int k = (k_first + k_last) / 2; k <= k_last; ++k) {
                const double rho = std::ldexp(1.0, -k);
                const double r = g(rho) / std::pow(rho, gamma);
                tail_min = std::min(tail_min, r);
                tail_max = std::max(tail_max, r);
                x.push_back(std::log(rho));
                y.push_back(std::log(std::max(r, 1e-300)));
            }
            return slope_fit(x, y).first;
        }

        std::string fmt(double v)
        {
            std::ostringstream os;
            os.precision(6);
            os << v;
            return os.str();
        }

        const RadialLevyDensity *radial_density(const SymbolModel &m)
        {
            if (const auto *r = m.radial_params()) return &r->density;
            if (const auto *j = std::get_if<RadialJumps>(&m.triplet().jumps)) return &j->density;
            return nullptr;
        }

        Mat diffusion_at(const SymbolModel &m, const Vec &x)
        {
            if (const auto *b = m.brownian_params()) return m.scale() * b->diffusion_scale(x) * b->diffusion;
            if (m.stable_params()) return Mat::Zero(m.dim(), m.dim());
            return m.scale() * m.triplet().diffusion(x);
        }
    }

    double lower_index(const SymbolModel &m) { return index_fit(m, false).first; }
    double upper_index(const SymbolModel &m) { return index_fit(m, true).first; }

    PruittIndices pruitt_indices(const SymbolModel &m)
    {
        PruittIndices p;
        const auto lo = index_fit(m, false), hi = index_fit(m, true);
        p.lower = lo.first;
        p.upper = hi.first;
        p.lower_residual = lo.second;
        p.upper_residual = hi.second;
        p.tolerance = 0.02;
        p.window_lo = std::ldexp(1.0, -k_last);
        p.window_hi = std::ldexp(1.0, -k_first);
        return p;
    }

    std::pair<RuleOutcome, RuleOutcome> pruitt_index_rules(int d, double kappa, const PruittIndices &idx)
    {
        RuleOutcome a{"Thm4.6i"}, b{"Thm4.6ii"};
        const double lo = (kappa + 1) * (idx.lower - idx.tolerance);
        a.premises.push_back({"d < (kappa+1) lower_index", d < lo});
        a.detail = "d=" + std::to_string(d) + ", (kappa+1)*lower=" + fmt((kappa + 1) * idx.lower);
        if (d < lo) a.conclusion = Conclusion::ImpliesWeak;

        const double hi = (kappa + 1) * (idx.upper - idx.tolerance);
        b.premises.push_back({"d >= (kappa+1) upper_index (necessary for the strong condition)", !(d < hi)});
        b.detail = "d=" + std::to_string(d) + ", (kappa+1)*upper=" + fmt((kappa + 1) * idx.upper);
        if (d < hi) b.conclusion = Conclusion::NecessaryViolated;
        return {a, b};
    }

    std::pair<RuleOutcome, RuleOutcome> scaling_rules(const SymbolModel &m, double gamma, int d, double kappa)
    {
        if (!(gamma > 0)) throw std::invalid_argument("scaling rule: gamma must be positive");
        RuleOutcome a{"Prop4.2i"}, b{"Prop4.2ii"};
        double mn, mx;
        const double sa = tail_ratio_slope([&](double r) { return directional(m, r, false); }, gamma, mn, mx);
        const bool bounded = sa >= -0.02 && std::isfinite(mx);
        a.premises.push_back({"limsup sup|q|/|xi|^gamma < inf", bounded});
        a.premises.push_back({"d <= (kappa+1) gamma", d <= (kappa + 1) * gamma});
        a.detail = "ratio slope " + fmt(sa) + ", tail max " + fmt(mx);
        if (bounded && d <= (kappa + 1) * gamma) a.conclusion = Conclusion::ImpliesWeak;

        const double sb = tail_ratio_slope([&](double r) { return directional(m, r, true); }, gamma, mn, mx);
        const bool away = sb <= 0.02 && mn > 0;
        b.premises.push_back({"liminf inf Re q/|xi|^gamma > 0", away});
        b.premises.push_back({"d > (kappa+1) gamma", d > (kappa + 1) * gamma});
        b.detail = "ratio slope " + fmt(sb) + ", tail min " + fmt(mn);
        if (away && d > (kappa + 1) * gamma) b.conclusion = Conclusion::ImpliesStrong;
        return {a, b};
    }

    double sup_second_moment(const SymbolModel &m)
    {
        const int d = m.dim();
        if (m.brownian_params()) return 0.0;
        if (m.stable_params()) return INFINITY;
        const LevyTriplet &t = m.triplet();
        if (std::holds_alternative<NoJumps>(t.jumps)) return 0.0;
        if (std::holds_alternative<StableJumps>(t.jumps)) return INFINITY;
        if (const auto *a = std::get_if<AtomJumps>(&t.jumps)) {
            double s = 0;
            for (const auto &[y, w] : a->atoms) s += w * y.squaredNorm();
            return m.scale() * s;
        }
        const RadialLevyDensity *n = radial_density(m);
        double best = 0;
        for (const Vec &x : m.states()) {
            const quad::Result r =
                density_integral(*n, x, [](double u) { return u * u; }, 0.0, INFINITY, m.quadrature);
            if (r.divergent || !std::isfinite(r.value)) return INFINITY;
            best = std::max(best, r.value);
        }
        (void)d;
        return m.scale() * best;
    }

    double nondegeneracy(const SymbolModel &m, double rho)
    {
        const int d = m.dim();
        const double R = std::numbers::pi / (2 * rho);
        double best = INFINITY;
        const std::vector<Vec> dirs = index_directions(d);
        std::optional<RadialLevyDensity> dens;
        if (m.stable_params() || std::holds_alternative<StableJumps>(m.triplet().jumps)) dens = m.jump_density();
        const RadialLevyDensity *n = dens ? &*dens : radial_density(m);
        const double nscale = dens ? 1.0 : m.scale();
        for (const Vec &x : m.states()) {
            const Mat c = diffusion_at(m, x);
            double jump_radial = 0.0;
            if (n) {
                const quad::Result r =
                    density_integral(*n, x, [](double u) { return u * u; }, 0.0, R, m.quadrature);
                jump_radial = nscale * r.value / d;
            }
            for (const Vec &e : dirs) {
                double v = e.dot(c * e) + jump_radial;
                if (const auto *a = std::get_if<AtomJumps>(&m.triplet().jumps))
                    for (const auto &[y, w] : a->atoms)
                        if (y.norm() <= R) v += m.scale() * w * std::pow(e.dot(y), 2);
                best = std::min(best, v);
            }
        }
        return best;
    }

    std::pair<RuleOutcome, RuleOutcome> moment_rules(const SymbolModel &m, int d, double kappa)
    {
        RuleOutcome a{"Thm4.3i"}, b{"Thm4.3ii"};
        const bool sym = real_symbol(m);
        const double m2 = sup_second_moment(m);
        a.premises.push_back({"q(x,xi) = q(x,-xi)", sym});
        a.premises.push_back({"sup_x second moment finite", std::isfinite(m2)});
        a.premises.push_back({"d <= 2(kappa+1)", d <= 2 * (kappa + 1)});
        a.detail = "sup second moment " + fmt(m2);
        if (sym && std::isfinite(m2) && d <= 2 * (kappa + 1)) a.conclusion = Conclusion::ImpliesWeak;

        b.premises.push_back({"d > 2(kappa+1)", d > 2 * (kappa + 1)});
        if (d > 2 * (kappa + 1)) {
            double mn, mx;
            const double s = tail_ratio_slope([&](double r) { return nondegeneracy(m, r); }, 0.0, mn, mx);
            const bool nondeg = mn > 0 && s <= 0.02;
            b.premises.push_back({"nondegeneracy liminf > 0", nondeg});
            b.detail = "nondegeneracy tail min " + fmt(mn);
            if (nondeg) b.conclusion = Conclusion::ImpliesStrong;
        }
        return {a, b};
    }

    ShapeReport radial_shape(const std::function<double(double)> &f)
    {
        auto classify = [&](double eps) {
            std::vector<double> v;
            for (int j = 1; j <= 10; ++j) v.push_back(f(eps * j / 10));
            double scale = 0;
            for (double x : v) scale = std::max(scale, std::abs(x));
            const double tol = 1e-8 * scale;
            bool convex = true, concave = true;
            for (int j = 1; j + 1 < 10; ++j) {
                const double dd = v[j + 1] - 2 * v[j] + v[j - 1];
                if (dd < -tol) convex = false;
                if (dd > tol) concave = false;
            }
            if (convex && concave) return Shape::Linear;
            if (convex) return Shape::Convex;
            if (concave) return Shape::Concave;
            return Shape::Neither;
        };
        const int windows = 21, run = 8;
        std::vector<Shape> shapes;
        for (int k = 0; k < windows; ++k) shapes.push_back(classify(std::ldexp(1.0, -k)));
        for (int k = 0; k + run <= windows; ++k) {
            if (shapes[k] == Shape::Neither) continue;
            bool stable = true;
            for (int j = k; j < k + run; ++j) stable = stable && shapes[j] == shapes[k];
            if (stable) return {shapes[k], std::ldexp(1.0, -k)};
        }
        return {};
    }

    std::vector<RuleOutcome> convexity_rules(const SymbolModel &m, double kappa, int d)
    {
        std::vector<RuleOutcome> out{{"Thm4.7i"}, {"Thm4.7ii"}, {"Thm4.7iii"}, {"Thm4.7iv"}};
        const bool radial = radiality_check(m);
        for (auto &o : out) o.premises.push_back({"radial envelopes", radial});
        if (!radial) return out;
        const Vec e = Vec::Unit(m.dim(), 0);
        const ShapeReport sup_shape = radial_shape([&](double r) { return sup_abs_q(m, Vec(r * e)); });
        const ShapeReport inf_shape = radial_shape([&](double r) { return inf_re_q(m, Vec(r * e)); });
        const auto convex = [](Shape s) { return s == Shape::Convex || s == Shape::Linear; };
        const auto concave = [](Shape s) { return s == Shape::Concave || s == Shape::Linear; };
        const double k1 = kappa + 1;
        const std::string ws = "window " + fmt(sup_shape.window), wi = "window " + fmt(inf_shape.window);

        // (i) convex sup|q| gives sup|q| <= c|xi|, and d <= kappa+1 makes the weak integral diverge
        out[0].premises.push_back({"kappa+1 >= d", k1 >= d});
        out[0].premises.push_back({"sup|q| convex near 0", convex(sup_shape.shape)});
        if (k1 >= d && convex(sup_shape.shape)) {
            out[0].conclusion = Conclusion::ImpliesWeak;
            out[0].detail = "lower_index*(kappa+1) >= d; " + ws;
        }
        // (ii) concave sup|q| >= c|xi|: the weak condition forces d = kappa+1
        out[1].premises.push_back({"kappa+1 <= d", k1 <= d});
        out[1].premises.push_back({"sup|q| concave near 0", concave(sup_shape.shape)});
        if (k1 <= d && concave(sup_shape.shape)) {
            out[1].detail = "lower_index*(kappa+1) <= d; " + ws;
            if (k1 < d) {
                out[1].conclusion = Conclusion::NecessaryViolated;
                out[1].detail += "; weak integral condition needs d = kappa+1";
            }
        }
        // (iii) convex inf Re q: the strong condition forces d = kappa+1
        out[2].premises.push_back({"kappa+1 >= d", k1 >= d});
        out[2].premises.push_back({"inf Re q convex near 0", convex(inf_shape.shape)});
        if (k1 >= d && convex(inf_shape.shape)) {
            out[2].detail = "upper_index*(kappa+1) >= d; " + wi;
            if (k1 > d) {
                out[2].conclusion = Conclusion::NecessaryViolated;
                out[2].detail += "; strong integral condition needs d = kappa+1";
            }
        }
        // (iv) concave inf Re q and kappa+1 < d give the strong condition
        out[3].premises.push_back({"kappa+1 <= d", k1 <= d});
        out[3].premises.push_back({"inf Re q concave near 0", concave(inf_shape.shape)});
        if (k1 <= d && concave(inf_shape.shape)) {
            out[3].detail = "upper_index*(kappa+1) <= d; " + wi;
            if (k1 < d) out[3].conclusion = Conclusion::ImpliesStrong;
        }
        return out;
    }
}
