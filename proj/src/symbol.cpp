#include "levy/symbol.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

namespace levy
{
    std::string to_string(Family f)
    {
        switch (f) {
        case Family::BrownianDrift: return "brownian";
        case Family::IsotropicStable: return "isotropic_stable";
        case Family::StableLike: return "stable_like";
        case Family::RadialJump: return "radial_jump";
        case Family::FiniteJump: return "finite_jump";
        case Family::Custom: return "custom";
        }
        return "custom";
    }

    namespace
    {
        std::vector<double> grid_values(const StateGrid &g)
        {
            if (g.points < 1 || !(g.lo <= g.hi)) throw std::invalid_argument("state grid: empty grid");
            std::vector<double> v;
            for (int i = 0; i < g.points; ++i)
                v.push_back(g.points == 1 ? 0.5 * (g.lo + g.hi) : g.lo + (g.hi - g.lo) * i / (g.points - 1));
            return v;
        }

        // all values of sum_{i<k} v_i^2 with v_i from the grid
        std::set<double> square_sums(const std::vector<double> &vals, int k)
        {
            std::set<double> sums{0.0};
            for (int i = 0; i < k; ++i) {
                std::set<double> next;
                for (double s : sums)
                    for (double v : vals) next.insert(s + v * v);
                sums.swap(next);
            }
            return sums;
        }

        std::vector<Vec> candidate_states(const StateGrid &g, int d, Dependence dep)
        {
            const std::vector<double> vals = grid_values(g);
            std::vector<Vec> out;
            auto axis_point = [d](double a, double b) {
                Vec x = Vec::Zero(d);
                x(0) = a;
                if (d > 1) x(1) = b;
                return x;
            };
            switch (dep) {
            case Dependence::None: out.push_back(Vec::Zero(d)); break;
            case Dependence::FirstCoordinate:
                for (double v : vals) out.push_back(axis_point(v, 0.0));
                break;
            case Dependence::Radius:
                for (double s : square_sums(vals, d)) out.push_back(axis_point(std::sqrt(s), 0.0));
                break;
            case Dependence::FirstAndRadius:
                if (d == 1) {
                    for (double v : vals) out.push_back(axis_point(v, 0.0));
                } else {
                    const std::set<double> rest = square_sums(vals, d - 1);
                    for (double v : vals)
                        for (double s : rest) out.push_back(axis_point(v, std::sqrt(s)));
                }
                break;
            case Dependence::Arbitrary: {
                const double total = std::pow(double(vals.size()), d);
                if (total > 2e6) throw model_error("state grid: too many points for an x-dependent model; reduce points");
                std::vector<int> idx(d, 0);
                for (;;) {
                    Vec x(d);
                    for (int i = 0; i < d; ++i) x(i) = vals[idx[i]];
                    out.push_back(x);
                    int k = 0;
                    while (k < d && ++idx[k] == int(vals.size())) idx[k++] = 0;
                    if (k == d) break;
                }
                break;
            }
            }
            return out;
        }

        bool is_zero(const Vec &v) { return v.size() == 0 || v.lpNorm<Eigen::Infinity>() == 0.0; }

        double min_abs(const ScalarField &f)
        {
            const double lo = f.lower(), hi = f.upper();
            if (lo <= 0.0 && hi >= 0.0) return 0.0;
            return std::min(std::abs(lo), std::abs(hi));
        }

        double max_abs(const ScalarField &f) { return std::max(std::abs(f.lower()), std::abs(f.upper())); }

        cplx atom_symbol(const AtomJumps &a, const Vec &xi)
        {
            cplx s = 0.0;
            for (const auto &[y, w] : a.atoms) {
                const double t = xi.dot(y);
                const double comp = y.norm() < 1.0 ? t : 0.0;
                s += w * cplx(1.0 - std::cos(t), -std::sin(t) + comp);
            }
            return s;
        }
    }

    std::vector<Vec> enumerate_states(const StateGrid &grid, int d, Dependence dep,
                                      const std::function<std::vector<double>(const Vec &)> &key)
    {
        const std::vector<Vec> cands = candidate_states(grid, d, dep);
        if (!key) return cands;
        std::map<std::vector<double>, std::size_t> seen;
        std::vector<Vec> out;
        for (const Vec &x : cands)
            if (seen.emplace(key(x), out.size()).second) out.push_back(x);
        return out;
    }

    SymbolModel SymbolModel::brownian(int d, BrownianParams p, EnvelopeMode mode, StateGrid grid)
    {
        SymbolModel m;
        m.family_ = Family::BrownianDrift;
        m.d_ = d;
        m.mode_ = mode;
        m.grid_ = grid;
        if (p.drift.size() == 0) p.drift = Vec::Zero(d);
        if (p.diffusion.size() == 0) p.diffusion = Mat::Identity(d, d);
        if (p.drift.size() != d || p.diffusion.rows() != d || p.diffusion.cols() != d)
            throw std::invalid_argument("brownian: drift/diffusion size does not match d");
        m.params_ = p;
        m.finish();
        return m;
    }

    SymbolModel SymbolModel::standard_brownian(int d) { return brownian(d, BrownianParams{}); }

    SymbolModel SymbolModel::isotropic_stable(int d, double alpha, double gamma)
    {
        if (!(alpha > 0 && alpha < 2)) throw model_error("isotropic stable: alpha must lie in (0,2)");
        if (!(gamma > 0)) throw model_error("isotropic stable: gamma must be positive");
        SymbolModel m;
        m.family_ = Family::IsotropicStable;
        m.d_ = d;
        m.mode_ = EnvelopeMode::ClosedForm;
        m.params_ = StableParams{ScalarField(alpha), ScalarField(gamma), Vec::Zero(d), ScalarField(1.0)};
        m.finish();
        return m;
    }

    SymbolModel SymbolModel::stable_like(int d, StableParams p, EnvelopeMode mode, StateGrid grid)
    {
        SymbolModel m;
        m.family_ = Family::StableLike;
        m.d_ = d;
        m.mode_ = mode;
        m.grid_ = grid;
        if (p.beta.size() == 0) p.beta = Vec::Zero(d);
        if (p.beta.size() != d) throw std::invalid_argument("stable_like: beta size does not match d");
        m.params_ = p;
        m.finish();
        return m;
    }

    SymbolModel SymbolModel::radial_jump(RadialLevyDensity n, ScalarField diffusion_scale, EnvelopeMode mode,
                                         StateGrid grid)
    {
        SymbolModel m;
        m.family_ = Family::RadialJump;
        m.d_ = n.dim();
        m.mode_ = mode;
        m.grid_ = grid;
        m.params_ = RadialParams{std::move(n), diffusion_scale};
        m.finish();
        return m;
    }

    SymbolModel SymbolModel::finite_jump(int d, ScalarField alpha, EnvelopeMode mode, StateGrid grid)
    {
        SymbolModel m;
        m.family_ = Family::FiniteJump;
        m.d_ = d;
        m.mode_ = mode;
        m.grid_ = grid;
        m.params_ = RadialParams{RadialLevyDensity::finite_jump(d, alpha), ScalarField(0.0)};
        m.jump_alpha_ = alpha;
        m.finish();
        return m;
    }

    SymbolModel SymbolModel::custom(LevyTriplet t, StateGrid grid)
    {
        SymbolModel m;
        m.family_ = Family::Custom;
        m.d_ = t.dim;
        m.mode_ = EnvelopeMode::GridSampled;
        m.grid_ = grid;
        if (!t.drift) t.drift = [d = t.dim](const Vec &) { return Vec::Zero(d); };
        if (!t.diffusion) t.diffusion = [d = t.dim](const Vec &) { return Mat::Zero(d, d); };
        m.triplet_ = std::move(t);
        m.finish();
        return m;
    }

    SymbolModel SymbolModel::scaled(double c) const
    {
        if (!(c > 0)) throw std::invalid_argument("scaled: factor must be positive");
        SymbolModel m = *this;
        m.scale_ *= c;
        m.envelope_cache_ = std::make_shared<Memo<Envelope>>();
        m.jump_density_ = m.build_jump_density();
        return m;
    }

    std::optional<RadialLevyDensity> SymbolModel::jump_density() const { return jump_density_; }

    std::optional<RadialLevyDensity> SymbolModel::build_jump_density() const
    {
        std::optional<RadialLevyDensity> n;
        if (const auto *s = stable_params()) n = RadialLevyDensity::stable(d_, s->gamma, s->alpha);
        else if (const auto *r = radial_params()) n = r->density;
        else if (const auto *j = std::get_if<RadialJumps>(&triplet_.jumps)) n = j->density;
        else if (const auto *sj = std::get_if<StableJumps>(&triplet_.jumps))
            n = RadialLevyDensity::stable(d_, sj->gamma, sj->alpha);
        if (n && scale_ != 1.0) n = n->scaled(scale_);
        return n;
    }

    bool SymbolModel::drift_free() const
    {
        if (const auto *b = brownian_params()) return is_zero(b->drift) || (b->drift_scale.upper() == 0.0 && b->drift_scale.lower() == 0.0);
        if (const auto *s = stable_params()) return is_zero(s->beta) || (s->beta_scale.upper() == 0.0 && s->beta_scale.lower() == 0.0);
        if (radial_params()) return true;
        for (const Vec &x : states_)
            if (!is_zero(triplet_.drift(x))) return false;
        return true;
    }

    void SymbolModel::finish()
    {
        if (d_ < 1) throw std::invalid_argument("model: dimension must be positive");
        quadrature.rel_tol = 1e-10;
        quadrature.abs_tol = 1e-300;

        std::function<std::vector<double>(const Vec &)> key;
        const int d = d_;
        if (const auto *b = brownian_params()) {
            Eigen::SelfAdjointEigenSolver<Mat> es(b->diffusion);
            if ((b->diffusion - b->diffusion.transpose()).norm() > 1e-12 * (1 + b->diffusion.norm()))
                throw model_error("brownian: diffusion matrix is not symmetric");
            if (es.eigenvalues().minCoeff() < -1e-12 * (1 + b->diffusion.norm()) || b->diffusion_scale.lower() < 0)
                throw model_error("brownian: diffusion matrix is not positive semidefinite");
            dependence_ = combine(is_zero(b->drift) ? Dependence::None : b->drift_scale.dependence(),
                                  b->diffusion_scale.dependence());
            key = [b](const Vec &x) { return std::vector<double>{b->drift_scale(x), b->diffusion_scale(x)}; };
            if (mode_ == EnvelopeMode::ClosedForm && !is_zero(b->drift) && !b->drift_scale.is_constant() &&
                !b->diffusion_scale.is_constant())
                throw model_error("brownian: closed-form envelopes need a constant drift or diffusion scale");
            const BrownianParams p = *b;
            triplet_.drift = [p](const Vec &x) -> Vec { return p.drift_scale(x) * p.drift; };
            triplet_.diffusion = [p](const Vec &x) -> Mat { return p.diffusion_scale(x) * p.diffusion; };
            triplet_.jumps = NoJumps{};
        } else if (const auto *s = stable_params()) {
            if (!(s->alpha.lower() > 0 && s->alpha.upper() < 2))
                throw model_error("stable: alpha(x) must stay inside (0,2)");
            if (!(s->gamma.lower() > 0)) throw model_error("stable: inf gamma(x) must be positive");
            dependence_ = combine(combine(s->alpha.dependence(), s->gamma.dependence()),
                                  is_zero(s->beta) ? Dependence::None : s->beta_scale.dependence());
            key = [s](const Vec &x) { return std::vector<double>{s->alpha(x), s->gamma(x), s->beta_scale(x)}; };
            if (mode_ == EnvelopeMode::ClosedForm &&
                ((!s->alpha.is_constant() && !s->gamma.is_constant()) ||
                 (!is_zero(s->beta) && !s->beta_scale.is_constant())))
                throw model_error("stable: closed-form envelopes need constant gamma or alpha, and a constant drift");
            const StableParams p = *s;
            triplet_.drift = [p](const Vec &x) -> Vec { return p.beta_scale(x) * p.beta; };
            triplet_.diffusion = [d](const Vec &) -> Mat { return Mat::Zero(d, d); };
            triplet_.jumps = StableJumps{p.alpha, p.gamma};
        } else if (const auto *r = radial_params()) {
            if (r->density.dim() != d) throw std::invalid_argument("radial jump: density dimension mismatch");
            if (r->diffusion_scale.lower() < 0) throw model_error("radial jump: diffusion scale must be >= 0");
            dependence_ = combine(r->density.dependence(), r->diffusion_scale.dependence());
            key = [r](const Vec &x) {
                std::vector<double> k = r->density.key(x);
                k.push_back(r->diffusion_scale(x));
                return k;
            };
            if (mode_ == EnvelopeMode::ClosedForm && dependence_ != Dependence::None)
                throw model_error("radial jump: closed-form envelopes only for x-independent densities");
            const RadialParams p = *r;
            triplet_.drift = [d](const Vec &) -> Vec { return Vec::Zero(d); };
            triplet_.diffusion = [p, d](const Vec &x) -> Mat { return p.diffusion_scale(x) * Mat::Identity(d, d); };
            triplet_.jumps = RadialJumps{p.density};
        } else {
            if (triplet_.dim != d) throw std::invalid_argument("custom: triplet dimension mismatch");
            dependence_ = Dependence::Arbitrary;
        }
        triplet_.dim = d;

        states_ = enumerate_states(grid_, d, dependence_, key);
        if (states_.empty()) throw std::invalid_argument("state grid: empty grid");

        // per-state structural checks
        for (const Vec &x : states_) {
            if (family_ == Family::Custom) {
                const Mat c = triplet_.diffusion(x);
                if (c.rows() != d || c.cols() != d) throw std::invalid_argument("custom: diffusion size mismatch");
                if ((c - c.transpose()).norm() > 1e-12 * (1 + c.norm()))
                    throw model_error("custom: diffusion matrix is not symmetric");
                Eigen::SelfAdjointEigenSolver<Mat> es(c);
                if (d > 0 && es.eigenvalues().minCoeff() < -1e-12 * (1 + c.norm()))
                    throw model_error("custom: diffusion matrix is not positive semidefinite");
                if (triplet_.drift(x).size() != d) throw std::invalid_argument("custom: drift size mismatch");
            }
            const RadialLevyDensity *n = nullptr;
            if (const auto *r = radial_params()) n = &r->density;
            else if (const auto *j = std::get_if<RadialJumps>(&triplet_.jumps)) n = &j->density;
            if (n) {
                const quad::Result small = density_integral(*n, x, [](double u) { return std::min(1.0, u * u); }, 0.0,
                                                            INFINITY, quadrature);
                if (small.divergent || !std::isfinite(small.value))
                    throw model_error("Levy measure condition: integral of min(1,|y|^2) nu(dy) is infinite");
            }
            if (const auto *a = std::get_if<AtomJumps>(&triplet_.jumps)) {
                for (const auto &[y, w] : a->atoms) {
                    if (y.size() != d) throw std::invalid_argument("custom: atom dimension mismatch");
                    if (y.norm() == 0.0) throw model_error("Levy measure condition: mass at the origin");
                    if (w < 0) throw model_error("Levy measure condition: negative atom weight");
                }
            }
            if (states_.size() > 64) break;
        }

        jump_density_ = build_jump_density();

        // q identically zero is not a process we can classify
        bool nonzero = false;
        for (const Vec &xi : {Vec(Vec::Constant(d, 1.0 / std::sqrt(double(d)))), Vec(Vec::Constant(d, 0.1))}) {
            if (sup_abs_q(*this, xi) > 0.0) nonzero = true;
        }
        if (!nonzero) throw model_error("model: symbol vanishes identically");
    }

    cplx eval_symbol(const SymbolModel &m, const Vec &x, const Vec &xi)
    {
        if (xi.size() != m.dim() || x.size() != m.dim())
            throw std::invalid_argument("eval_symbol: vector size does not match d");
        const double rho = xi.norm();
        if (rho == 0.0) return 0.0;
        cplx q = 0.0;
        if (const auto *b = m.brownian_params()) {
            q = cplx(0.5 * b->diffusion_scale(x) * xi.dot(b->diffusion * xi), -b->drift_scale(x) * xi.dot(b->drift));
        } else if (const auto *s = m.stable_params()) {
            q = cplx(s->gamma(x) * std::pow(rho, s->alpha(x)), -s->beta_scale(x) * xi.dot(s->beta));
        } else if (const auto *r = m.radial_params()) {
            q = 0.5 * r->diffusion_scale(x) * rho * rho + radial_jump_symbol(r->density, x, rho, m.quadrature);
        } else {
            const LevyTriplet &t = m.triplet();
            q = cplx(0.5 * xi.dot(t.diffusion(x) * xi), -xi.dot(t.drift(x)));
            if (const auto *sj = std::get_if<StableJumps>(&t.jumps)) q += sj->gamma(x) * std::pow(rho, sj->alpha(x));
            else if (const auto *rj = std::get_if<RadialJumps>(&t.jumps))
                q += radial_jump_symbol(rj->density, x, rho, m.quadrature);
            else if (const auto *aj = std::get_if<AtomJumps>(&t.jumps)) q += atom_symbol(*aj, xi);
        }
        return m.scale() * q;
    }

    namespace
    {
        Envelope sampled_envelope(const SymbolModel &m, const Vec &xi)
        {
            Envelope e;
            bool first = true;
            for (const Vec &x : m.states()) {
                const cplx q = eval_symbol(m, x, xi);
                const double a = std::abs(q), re = q.real(), im = std::abs(q.imag());
                if (first) {
                    e = {a, re, im, a};
                    first = false;
                } else {
                    e.sup_abs = std::max(e.sup_abs, a);
                    e.inf_re = std::min(e.inf_re, re);
                    e.sup_abs_im = std::max(e.sup_abs_im, im);
                    e.inf_abs = std::min(e.inf_abs, a);
                }
            }
            return e;
        }
    }

    Envelope envelopes(const SymbolModel &m, const Vec &xi)
    {
        if (xi.size() != m.dim()) throw std::invalid_argument("envelopes: vector size does not match d");
        Envelope e;
        const double rho = xi.norm();
        if (rho == 0.0) return e;
        if (m.mode() == EnvelopeMode::ClosedForm) {
            double re_lo = 0, re_hi = 0, im_lo = 0, im_hi = 0;
            if (const auto *b = m.brownian_params()) {
                const double qf = 0.5 * xi.dot(b->diffusion * xi), bd = std::abs(xi.dot(b->drift));
                re_lo = b->diffusion_scale.lower() * qf;
                re_hi = b->diffusion_scale.upper() * qf;
                im_lo = min_abs(b->drift_scale) * bd;
                im_hi = max_abs(b->drift_scale) * bd;
            } else if (const auto *s = m.stable_params()) {
                const double p1 = std::pow(rho, s->alpha.lower()), p2 = std::pow(rho, s->alpha.upper());
                re_lo = s->gamma.lower() * std::min(p1, p2);
                re_hi = s->gamma.upper() * std::max(p1, p2);
                const double bd = std::abs(xi.dot(s->beta));
                im_lo = min_abs(s->beta_scale) * bd;
                im_hi = max_abs(s->beta_scale) * bd;
            } else {
                const cplx q = eval_symbol(m, m.states().front(), xi) / m.scale();
                re_lo = re_hi = q.real();
                im_lo = im_hi = std::abs(q.imag());
            }
            const double c = m.scale();
            e.inf_re = c * re_lo;
            e.sup_abs_im = c * im_hi;
            e.sup_abs = c * std::hypot(re_hi, im_hi);
            e.inf_abs = c * std::hypot(re_lo, im_lo);
            return e;
        }
        std::vector<double> key(xi.data(), xi.data() + xi.size());
        key.push_back(m.quadrature.rel_tol);
        return m.envelope_cache_->get(key, [&] { return sampled_envelope(m, xi); });
    }


    double sup_abs_q(const SymbolModel &m, const Vec &xi) { return envelopes(m, xi).sup_abs; }
    double inf_re_q(const SymbolModel &m, const Vec &xi) { return envelopes(m, xi).inf_re; }
    double sup_abs_im_q(const SymbolModel &m, const Vec &xi) { return envelopes(m, xi).sup_abs_im; }

    std::vector<Vec> sphere_directions(int d, int count)
    {
        std::vector<Vec> out;
        if (d == 1) {
            out.push_back(Vec::Constant(1, 1.0));
            out.push_back(Vec::Constant(1, -1.0));
            return out;
        }
        if (d == 2) {
            for (int k = 0; k < count; ++k) {
                const double t = 2 * std::numbers::pi * (k + 0.5) / count;
                Vec v(2);
                v << std::cos(t), std::sin(t);
                out.push_back(v);
            }
            return out;
        }
        static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
        if (d > 16) throw std::invalid_argument("sphere_directions: dimension above 16 not supported");
        for (int k = 1; int(out.size()) < count; ++k) {
            Vec v(d);
            for (int i = 0; i < d; ++i) {
                double f = 1.0, h = 0.0;
                for (int n = k; n > 0; n /= primes[i]) {
                    f /= primes[i];
                    h += f * (n % primes[i]);
                }
                v(i) = std::sqrt(2.0) * boost::math::erf_inv(2.0 * h - 1.0);
            }
            if (v.norm() > 1e-12) out.push_back(v / v.norm());
        }
        return out;
    }

    std::vector<Vec> frequency_grid(int d)
    {
        std::vector<Vec> dirs = sphere_directions(d, d == 1 ? 2 : 8);
        for (int i = 0; i < d && d > 1; ++i) {
            dirs.push_back(Vec::Unit(d, i));
            dirs.push_back(-Vec::Unit(d, i));
        }
        std::vector<Vec> out;
        for (int k = -20; k <= 20; k += 2)
            for (const Vec &u : dirs) out.push_back(std::ldexp(1.0, k) * u);
        return out;
    }

    SectorResult sector_check(const SymbolModel &m, double c)
    {
        if (!(c >= 0 && c < 1)) throw std::invalid_argument("sector_check: c must lie in [0,1)");
        SectorResult res;
        if (real_symbol(m)) return res;
        std::vector<Vec> grid = frequency_grid(m.dim());
        Vec extra;
        if (const auto *b = m.brownian_params()) extra = b->drift;
        else if (const auto *s = m.stable_params()) extra = s->beta;
        if (extra.size() && extra.norm() > 0)
            for (int k = -20; k <= 20; k += 2) {
                grid.push_back(std::ldexp(1.0, k) * extra / extra.norm());
                grid.push_back(-std::ldexp(1.0, k) * extra / extra.norm());
            }
        for (const Vec &xi : grid) {
            const Envelope e = envelopes(m, xi);
            const double ratio = e.inf_re > 0 ? e.sup_abs_im / e.inf_re : (e.sup_abs_im > 0 ? INFINITY : 0.0);
            const bool bad = e.sup_abs_im > c * e.inf_re + 1e-14 * e.sup_abs;
            if (ratio > res.worst_ratio || (bad && !res.witness)) {
                res.worst_ratio = std::max(res.worst_ratio, ratio);
                if (bad) res.witness = xi;
            }
            if (bad) res.holds = false;
        }
        return res;
    }

    namespace
    {
        std::vector<Vec> sample_states(const SymbolModel &m, std::size_t cap)
        {
            const auto &s = m.states();
            if (s.size() <= cap) return s;
            std::vector<Vec> out;
            for (std::size_t i = 0; i < cap; ++i) out.push_back(s[i * s.size() / cap]);
            return out;
        }

        std::vector<Vec> sample_frequencies(int d)
        {
            std::vector<Vec> out;
            const std::vector<Vec> dirs = sphere_directions(d, d == 1 ? 2 : 6);
            for (double r : {0.05, 0.7, 3.0})
                for (const Vec &u : dirs) out.push_back(r * u);
            return out;
        }

        bool close(cplx a, cplx b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a) + std::abs(b)); }
    }

    bool real_symbol(const SymbolModel &m)
    {
        if (m.family() != Family::Custom) return m.drift_free();
        for (const Vec &x : sample_states(m, 32))
            for (const Vec &xi : sample_frequencies(m.dim()))
                if (std::abs(eval_symbol(m, x, xi).imag()) > 1e-12 * (1 + std::abs(eval_symbol(m, x, xi))))
                    return false;
        return true;
    }

    bool radiality_check(const SymbolModel &m)
    {
        const int d = m.dim();
        if (const auto *b = m.brownian_params()) {
            if (!m.drift_free()) return false;
            const Mat &c = b->diffusion;
            return (c - c(0, 0) * Mat::Identity(d, d)).norm() <= 1e-12 * (1 + c.norm());
        }
        if (m.stable_params()) return m.drift_free();
        if (m.radial_params()) return true;

        const LevyTriplet &t = m.triplet();
        for (const Vec &x : sample_states(m, 32)) {
            if (!is_zero(t.drift(x))) return false;
            const Mat c = t.diffusion(x);
            if ((c - c(0, 0) * Mat::Identity(d, d)).norm() > 1e-12 * (1 + c.norm())) return false;
        }
        if (!std::holds_alternative<AtomJumps>(t.jumps)) return true;
        const auto &atoms = std::get<AtomJumps>(t.jumps);
        std::mt19937_64 gen(20240611ULL);
        std::normal_distribution<double> z;
        for (int k = 0; k < 16; ++k) {
            Mat g(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) g(i, j) = z(gen);
            const Mat o = Eigen::HouseholderQR<Mat>(g).householderQ();
            for (const Vec &xi : sample_frequencies(d))
                if (!close(atom_symbol(atoms, xi), atom_symbol(atoms, o * xi))) return false;
        }
        return true;
    }

    bool symmetry_check(const SymbolModel &m)
    {
        for (const Vec &x : sample_states(m, 64)) {
            const Vec mx = -x;
            for (const Vec &xi : sample_frequencies(m.dim()))
                if (!close(eval_symbol(m, x, xi), eval_symbol(m, mx, Vec(-xi)))) return false;
        }
        return true;
    }
}
