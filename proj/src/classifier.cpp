#include "levy/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace levy
{
    std::string to_string(Gate g)
    {
        switch (g) {
        case Gate::Transient: return "Transient";
        case Gate::Recurrent: return "Recurrent";
        case Gate::Unknown: return "Unknown";
        }
        return "Unknown";
    }

    std::string to_string(Verdict v)
    {
        switch (v) {
        case Verdict::WeaklyTransient: return "WeaklyTransient";
        case Verdict::StronglyTransient: return "StronglyTransient";
        case Verdict::Inconclusive: return "Inconclusive";
        }
        return "Inconclusive";
    }

    std::string to_string(Tier t)
    {
        switch (t) {
        case Tier::ClosedForm: return "closed_form";
        case Tier::Integral: return "integral";
        case Tier::Index: return "index";
        }
        return "index";
    }

    namespace
    {
        std::string fmt(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", v);
            return buf;
        }

        FiredRule rule(std::string id, std::string quote, std::string verdict, Tier tier, Verdict supports,
                       std::string detail = {})
        {
            return {std::move(id), std::move(quote), std::move(verdict), tier, supports, std::move(detail)};
        }

        bool elliptic(const BrownianParams &b)
        {
            if (!(b.diffusion_scale.lower() > 0)) return false;
            Eigen::SelfAdjointEigenSolver<Mat> es(b.diffusion);
            return es.eigenvalues().minCoeff() > 0;
        }

        bool zero_field(const ScalarField &f) { return f.lower() == 0.0 && f.upper() == 0.0; }

        // Lévy case: int_{B(0,r)} Re(1/q) dxi, finite iff transient
        DivergenceVerdict inverse_symbol_integral(const SymbolModel &m, const DivergenceOptions &opt)
        {
            const int d = m.dim();
            const Vec x = m.states().front();
            const std::vector<Vec> dirs = radiality_check(m) ? std::vector<Vec>{Vec::Unit(d, 0)}
                                                             : sphere_directions(d, d == 1 ? 2 : 64);
            return radial_divergence([&](double rho) {
                double s = 0.0;
                for (const Vec &u : dirs) {
                    const cplx q = eval_symbol(m, x, Vec(rho * u));
                    s += std::abs(q) > 0 ? std::real(1.0 / q) : INFINITY;
                }
                return sphere_area(d) * std::pow(rho, d - 1) * s / dirs.size();
            }, 1.0, Orientation::AtZero, opt);
        }

        // everything about the model that does not depend on kappa
        struct Facts
        {
            int d = 1;
            bool levy = false;
            bool symmetric = false;
            bool sector = false;
            std::string sector_detail;
            std::optional<PruittIndices> idx;
            std::optional<RadialLevyDensity> density;   // set when the tail tests apply
            bool monotone = false;
            bool bound_holds = false;
            bool bound_checked = false;
            bool cos_moment = false;
            std::optional<RegularVariationFit> rv;
            std::optional<bool> log_boundary;
            Gate gate = Gate::Unknown;
            std::vector<FiredRule> gate_trace;
        };

        bool pure_radial_jump(const SymbolModel &m)
        {
            if (m.stable_params()) return m.drift_free();
            if (const auto *r = m.radial_params()) return zero_field(r->diffusion_scale);
            if (m.family() != Family::Custom) return false;
            const auto &t = m.triplet();
            if (!std::holds_alternative<RadialJumps>(t.jumps) && !std::holds_alternative<StableJumps>(t.jumps))
                return false;
            if (!m.drift_free()) return false;
            for (const Vec &x : m.states())
                if (t.diffusion && t.diffusion(x).norm() != 0.0) return false;
            return true;
        }

        Facts gather(const SymbolModel &m, const Assumptions &a, const ClassifyOptions &opt)
        {
            Facts f;
            f.d = m.dim();
            f.levy = m.x_independent();
            f.symmetric = real_symbol(m);
            const double c = a.sector_constant.value_or(1.0 - 1e-9);
            if (a.sector_constant && !(*a.sector_constant >= 0 && *a.sector_constant < 1))
                throw std::invalid_argument("sector constant must lie in [0,1)");
            const SectorResult s = sector_check(m, c);
            f.sector = s.holds;
            f.sector_detail = "worst |Im q|/Re q " + fmt(s.worst_ratio);
            if (opt.route == ClassifyOptions::Route::All) f.idx = pruitt_indices(m);
            if (opt.route != ClassifyOptions::Route::Integral && pure_radial_jump(m)) {
                f.density = m.jump_density();
                if (f.density) {
                    const auto states = density_states(*f.density, m.grid());
                    f.monotone = f.density->monotone_flag() &&
                                 std::all_of(states.begin(), states.end(),
                                             [&](const Vec &x) { return f.density->verify_monotone(x); });
                    f.bound_checked = quadratic_lower_bound(m).holds;
                    f.bound_holds = a.perturbation_bound || f.bound_checked;
                    f.cos_moment = cosine_moment_condition(*f.density, m.grid()).holds;
                    if (f.density->x_independent() && f.monotone) {
                        f.rv = rv_index_fit(*f.density);
                        if (f.rv->ok && f.d <= 2 && std::abs(f.rv->delta + 2.0 * f.d) < 1e-3)
                            f.log_boundary = log_boundary_test(*f.density, std::exp(3.0), opt.divergence).resolved() ==
                                    VerdictState::Converges;
                    }
                }
            }
            f.gate = transience_gate(m, a, &f.gate_trace);
            return f;
        }

        struct Collector
        {
            const Facts &f;
            const Assumptions &a;
            std::vector<FiredRule> rules;

            // evidence that the weak condition holds
            void weak(std::string id, std::string quote, std::string verdict, Tier tier, std::string detail = {})
            {
                const bool ok = a.weak_test_hypothesis || f.symmetric;
                rules.push_back(rule(std::move(id), std::move(quote), std::move(verdict), tier,
                                     ok ? Verdict::WeaklyTransient : Verdict::Inconclusive,
                                     ok ? detail : detail + (detail.empty() ? "" : "; ") + "needs eq3"));
            }
            // evidence that the strong condition holds
            void strong(std::string id, std::string quote, std::string verdict, Tier tier, std::string detail = {})
            {
                rules.push_back(rule(std::move(id), std::move(quote), std::move(verdict), tier,
                                     f.sector ? Verdict::StronglyTransient : Verdict::Inconclusive,
                                     f.sector ? detail
                                              : detail + (detail.empty() ? "" : "; ") + "sector condition fails"));
            }
            // the weak condition fails: only decisive for symmetric Lévy processes
            void not_weak(std::string id, std::string quote, std::string verdict, Tier tier, std::string detail = {})
            {
                const bool iff = f.levy && f.symmetric;
                rules.push_back(rule(std::move(id), std::move(quote), std::move(verdict), tier,
                                     iff ? Verdict::StronglyTransient : Verdict::Inconclusive, std::move(detail)));
            }
            void not_strong(std::string id, std::string quote, std::string verdict, Tier tier, std::string detail = {})
            {
                const bool iff = f.levy && f.symmetric;
                rules.push_back(rule(std::move(id), std::move(quote), std::move(verdict), tier,
                                     iff ? Verdict::WeaklyTransient : Verdict::Inconclusive, std::move(detail)));
            }
            void info(std::string id, std::string quote, std::string verdict, Tier tier, std::string detail = {})
            {
                rules.push_back(rule(std::move(id), std::move(quote), std::move(verdict), tier, Verdict::Inconclusive,
                                     std::move(detail)));
            }
        };

        void closed_forms(const SymbolModel &m, double k, Collector &c)
        {
            const int d = c.f.d;
            const double k1 = k + 1;
            const Tier T = Tier::ClosedForm;
            if (const auto *b = m.brownian_params()) {
                if (!elliptic(*b)) return;
                if (m.drift_free()) {
                    if (d <= 2 * k1) c.weak("Ex4.4ii", "b = 0 and d <= 2(kappa+1)", "ImpliesEq41", T);
                    else c.strong("Ex4.4iii", "d > 2(kappa+1)", "ImpliesEq43", T);
                } else {
                    if (d <= k1) c.weak("Ex4.4i", "sup|b| > 0 and d <= kappa+1", "ImpliesEq41", T);
                    if (d > 2 * k1) c.strong("Ex4.4iii", "d > 2(kappa+1)", "ImpliesEq43", T);
                }
                return;
            }
            if (const auto *s = m.stable_params()) {
                const double lo = s->alpha.lower(), hi = s->alpha.upper();
                if (!m.drift_free()) {
                    if (lo < 1 && d <= k1 * lo) c.weak("Ex4.5i", "sup|beta| > 0, alpha_lo < 1, d <= (kappa+1) alpha_lo", "ImpliesEq41", T);
                    if (lo >= 1 && d <= k1) c.weak("Ex4.5ii", "sup|beta| > 0, alpha_lo >= 1, d <= kappa+1", "ImpliesEq41", T);
                } else if (d <= k1 * lo) {
                    c.weak("Ex4.5iii", "beta = 0 and d <= (kappa+1) alpha_lo", "ImpliesEq41", T);
                }
                if (d > k1 * hi) c.strong("Ex4.5iv", "d > (kappa+1) alpha_hi", "ImpliesEq43", T);
                return;
            }
            if (const auto *alpha = m.finite_jump_alpha()) {
                const double lo = alpha->lower(), hi = alpha->upper();
                if (hi < 2) {
                    if (lo * k1 >= d) c.weak("e2.i", "alpha_lo (kappa+1) >= d", "ImpliesEq41", T);
                    if (hi * k1 < d) c.strong("e2.i", "alpha_hi (kappa+1) < d", "ImpliesEq43", T);
                } else if (lo == 2 && hi == 2) {
                    if (2 * k1 > d) c.weak("e2.ii", "2(kappa+1) > d", "ImpliesEq41", T);
                    else c.strong("e2.ii", "2(kappa+1) <= d", "ImpliesEq43", T);
                } else if (lo > 2) {
                    if (2 * k1 >= d) c.weak("e2.iii", "2(kappa+1) >= d", "ImpliesEq41", T);
                    else c.strong("e2.iii", "2(kappa+1) < d", "ImpliesEq43", T);
                }
                return;
            }
            if (c.f.rv && c.f.rv->ok && c.f.levy && c.f.symmetric) {
                const TailClassification t = regular_variation_classify(d, c.f.rv->delta, k, c.f.log_boundary, 1e-3);
                const std::string detail = "fitted index " + fmt(c.f.rv->delta) + ", log power " + fmt(c.f.rv->beta);
                if (t.verdict == TailClass::WeaklyTransient)
                    c.weak(t.case_id, t.rule, "WeaklyTransient", T, detail);
                else if (t.verdict == TailClass::StronglyTransient)
                    c.strong(t.case_id, t.rule, "StronglyTransient", T, detail);
                else
                    c.info(t.case_id.empty() ? "e3" : t.case_id, t.rule, to_string(t.verdict), T, detail);
            }
        }

        std::string verdict_text(const DivergenceVerdict &v)
        {
            std::string s = "exponent " + fmt(v.exponent) + ", " + to_string(v.state);
            if (v.refined != v.state) s += ", refined " + to_string(v.refined);
            if (!v.note.empty()) s += "; " + v.note;
            return s;
        }

        void integral_tests(const SymbolModel &m, double k, const ClassifyOptions &opt, Collector &c)
        {
            const Tier T = Tier::Integral;
            const DivergenceVerdict w = weak_integral_kappa(m, k, opt.r, opt.divergence);
            const VerdictState ws = w.resolved();
            if (ws == VerdictState::Diverges) c.weak("eq4.1", "int (sup|q|)^-(kappa+1) = inf", "Diverges", T, verdict_text(w));
            else if (ws == VerdictState::Converges) c.not_weak("eq4.1", "int (sup|q|)^-(kappa+1) < inf", "Converges", T, verdict_text(w));
            else c.info("eq4.1", "int (sup|q|)^-(kappa+1)", "Inconclusive", T, verdict_text(w));

            const DivergenceVerdict s = strong_integral_kappa(m, k, opt.r, opt.divergence);
            const VerdictState ss = s.resolved();
            if (ss == VerdictState::Converges) c.strong("eq4.3", "int (inf Re q)^-(kappa+1) < inf", "Converges", T, verdict_text(s));
            else if (ss == VerdictState::Diverges) c.not_strong("eq4.3", "int (inf Re q)^-(kappa+1) = inf", "Diverges", T, verdict_text(s));
            else c.info("eq4.3", "int (inf Re q)^-(kappa+1)", "Inconclusive", T, verdict_text(s));
        }

        void tail_tests(const SymbolModel &m, double k, const ClassifyOptions &opt, Collector &c)
        {
            const Facts &f = c.f;
            if (!f.density) return;
            const Tier T = Tier::Integral;
            const RadialLevyDensity &n = *f.density;
            const StateGrid &grid = m.grid();
            const bool strong_side = f.bound_holds && f.monotone;
            const std::string why = f.bound_holds ? (f.monotone ? "" : "density not verified decreasing")
                                            : "perturbation bound not established";
            try {
                const DivergenceVerdict w = tail_test_weak(n, k, opt.r, grid, opt.divergence);
                if (w.resolved() == VerdictState::Diverges)
                    c.weak("Thm5.3/5.5", "int rho^(2kappa-d+1) (sup T1)^-(kappa+1) = inf", "Diverges", T, verdict_text(w));
                else if (w.resolved() == VerdictState::Converges && strong_side)
                    c.not_weak("Thm5.3/5.5", "int rho^(2kappa-d+1) (sup T1)^-(kappa+1) < inf", "Converges", T, verdict_text(w));
                else c.info("Thm5.3/5.5", "int rho^(2kappa-d+1) (sup T1)^-(kappa+1)", to_string(w.resolved()), T, verdict_text(w));

                const DivergenceVerdict s = tail_test_strong(n, k, opt.r, grid, opt.divergence);
                if (s.resolved() == VerdictState::Converges && strong_side)
                    c.strong("Thm5.3/5.6", "int rho^(2kappa-d+1) (inf T1)^-(kappa+1) < inf", "Converges", T, verdict_text(s));
                else if (s.resolved() == VerdictState::Diverges && strong_side)
                    c.not_strong("Thm5.3/5.6", "int rho^(2kappa-d+1) (inf T1)^-(kappa+1) = inf", "Diverges", T, verdict_text(s));
                else c.info("Thm5.3/5.6", "int rho^(2kappa-d+1) (inf T1)^-(kappa+1)", to_string(s.resolved()), T,
                            verdict_text(s) + (why.empty() ? "" : "; " + why));

                const TailSufficient p = tail_sufficient_tests(n, k, opt.r, grid, opt.divergence);
                if (p.split_sup.resolved() == VerdictState::Diverges)
                    c.weak("Prop5.4/5.10", "split sup tail integral = inf", "Diverges", T, verdict_text(p.split_sup));
                const std::pair<const char *, const DivergenceVerdict *> strong_parts[] = {
                    {"Prop5.4/5.11", &p.split_inf}, {"Prop5.4/5.12", &p.mass_only}, {"Prop5.4/5.13", &p.moment_only}};
                for (const auto &[id, v] : strong_parts) {
                    if (v->resolved() != VerdictState::Converges) continue;
                    if (strong_side) c.strong(id, "sufficient tail integral < inf", "Converges", T, verdict_text(*v));
                    else c.info(id, "sufficient tail integral < inf", "Converges", T, why);
                }
                if (f.cos_moment && p.moment_only.resolved() == VerdictState::Converges)
                    c.strong("Prop5.6", "cosine moment liminf > 0 and moment-only tail integral < inf", "ImpliesEq43", T);
            } catch (const not_applicable &e) {
                c.info("Thm5.3", "tail tests", "NotApplicable", T, e.what());
                return;
            }
            try {
                const DivergenceVerdict v = density_tail_test(n, k, opt.r, grid, opt.divergence);
                if (v.resolved() == VerdictState::Converges) {
                    if (strong_side) c.strong("Cor5.5", "int rho^(-d kappa-2d-1) (inf n)^-(kappa+1) < inf", "Converges", T, verdict_text(v));
                    else c.info("Cor5.5", "int rho^(-d kappa-2d-1) (inf n)^-(kappa+1) < inf", "Converges", T, why);
                }
            } catch (const not_applicable &) {
            }
        }

        void add_outcome(Collector &c, const RuleOutcome &o, bool weak_side_necessary)
        {
            std::string premises;
            for (const Premise &p : o.premises) premises += (premises.empty() ? "" : ", ") + p.name + (p.holds ? "" : " (fails)");
            const std::string detail = o.detail.empty() ? premises : o.detail;
            switch (o.conclusion) {
            case Conclusion::ImpliesWeak: c.weak(o.id, premises, to_string(o.conclusion), Tier::Index, detail); break;
            case Conclusion::ImpliesStrong: c.strong(o.id, premises, to_string(o.conclusion), Tier::Index, detail); break;
            case Conclusion::NecessaryViolated:
                if (weak_side_necessary) c.not_weak(o.id, premises, to_string(o.conclusion), Tier::Index, detail);
                else c.not_strong(o.id, premises, to_string(o.conclusion), Tier::Index, detail);
                break;
            case Conclusion::NotApplicable: break;
            }
        }

        void index_rules(const SymbolModel &m, double k, Collector &c)
        {
            const int d = c.f.d;
            const PruittIndices &idx = *c.f.idx;
            const auto [p1, p2] = pruitt_index_rules(d, k, idx);
            add_outcome(c, p1, true);
            add_outcome(c, p2, false);
            std::vector<double> gammas{idx.lower, idx.upper, 1.0, 2.0};
            std::sort(gammas.begin(), gammas.end());
            gammas.erase(std::unique(gammas.begin(), gammas.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                         gammas.end());
            bool weak_fired = false, strong_fired = false;
            for (double g : gammas) {
                if (!(g > 0)) continue;
                const auto [s1, s2] = scaling_rules(m, g, d, k);
                if (!weak_fired && s1.conclusion == Conclusion::ImpliesWeak) {
                    add_outcome(c, s1, true);
                    weak_fired = true;
                }
                if (!strong_fired && s2.conclusion == Conclusion::ImpliesStrong) {
                    add_outcome(c, s2, false);
                    strong_fired = true;
                }
            }
            const auto [t1, t2] = moment_rules(m, d, k);
            add_outcome(c, t1, true);
            add_outcome(c, t2, false);
            const auto conv = convexity_rules(m, k, d);
            for (const RuleOutcome &o : conv) add_outcome(c, o, o.id == "Thm4.7ii");
        }

        TransienceReport assemble(const SymbolModel &m, const Facts &f, double k, const Assumptions &a,
                                  const ClassifyOptions &opt)
        {
            if (!(k >= 0) || !std::isfinite(k)) throw std::invalid_argument("kappa must be a finite number >= 0");
            if (f.gate == Gate::Recurrent) throw not_transient("not transient: the recurrence criterion holds");
            TransienceReport rep;
            rep.gate = f.gate;
            rep.kappa = k;
            rep.assumptions = a;
            rep.symmetric = f.symmetric;
            rep.sector_holds = f.sector;
            rep.quadratic_bound_holds = f.bound_checked;

            Collector c{f, a, {}};
            c.rules = f.gate_trace;
            for (FiredRule &r : c.rules) r.supports = Verdict::Inconclusive;
            using Route = ClassifyOptions::Route;
            if (opt.route == Route::All) closed_forms(m, k, c);
            if (opt.route != Route::Tail) integral_tests(m, k, opt, c);
            if (opt.route != Route::Integral) tail_tests(m, k, opt, c);
            if (opt.route == Route::All) index_rules(m, k, c);
            rep.rules = std::move(c.rules);

            for (Tier t : {Tier::ClosedForm, Tier::Integral, Tier::Index}) {
                bool weak = false, strong = false;
                for (const FiredRule &r : rep.rules) {
                    if (r.tier != t) continue;
                    weak = weak || r.supports == Verdict::WeaklyTransient;
                    strong = strong || r.supports == Verdict::StronglyTransient;
                }
                if (weak && strong) {
                    rep.verdict = Verdict::Inconclusive;
                    rep.notes.push_back("conflicting evidence among " + to_string(t) + " rules");
                    break;
                }
                if (weak || strong) {
                    rep.verdict = weak ? Verdict::WeaklyTransient : Verdict::StronglyTransient;
                    for (const FiredRule &r : rep.rules)
                        if (r.tier < t && r.supports != Verdict::Inconclusive && r.supports != rep.verdict)
                            rep.notes.push_back("lower-precedence rule " + r.id + " disagrees");
                    break;
                }
            }
            if (rep.verdict == Verdict::WeaklyTransient && !f.levy && !a.weak_test_hypothesis)
                rep.conditional_on.push_back("eq3");
            if (!f.levy && !a.irreducible && m.family() == Family::Custom)
                rep.notes.push_back("open-set irreducibility not asserted");
            if (rep.gate == Gate::Unknown) rep.notes.push_back("transience not established");
            return rep;
        }
    }

    Gate transience_gate(const SymbolModel &m, const Assumptions &a, std::vector<FiredRule> *trace)
    {
        std::vector<FiredRule> local;
        std::vector<FiredRule> &t = trace ? *trace : local;
        const int d = m.dim();
        const auto note = [&](std::string id, std::string quote, std::string v) {
            t.push_back(rule(std::move(id), std::move(quote), std::move(v), Tier::ClosedForm, Verdict::Inconclusive));
        };
        if (const auto *b = m.brownian_params(); b && elliptic(*b) && m.drift_free()) {
            if (d >= 3) {
                note("Ex4.4", "b = 0 and d >= 3", "Transient");
                return Gate::Transient;
            }
            note("Ex4.4", "b = 0 and d <= 2", "Recurrent");
            return Gate::Recurrent;
        }
        if (const auto *s = m.stable_params()) {
            if (d >= 2) {
                note("Ex4.5", "d >= 2", "Transient");
                return Gate::Transient;
            }
            if (s->alpha.upper() < 1) {
                note("Ex4.5", "d = 1 and alpha_hi < 1", "Transient");
                return Gate::Transient;
            }
            if (m.drift_free() && s->alpha.lower() >= 1) {
                note("Ex4.5", "d = 1, beta = 0 and alpha_lo >= 1", "Recurrent");
                return Gate::Recurrent;
            }
        }
        if (const auto *alpha = m.finite_jump_alpha()) {
            if (d >= 3 || alpha->upper() < d) {
                note("e2", d >= 3 ? "d >= 3" : "alpha_hi < d", "Transient");
                return Gate::Transient;
            }
        }
        const DivergenceOptions opt;
        if (m.x_independent()) {
            const DivergenceVerdict v = inverse_symbol_integral(m, opt);
            const VerdictState s = v.resolved();
            t.push_back(rule("ChungFuchs", "int Re(1/q) over a ball", to_string(s), Tier::Integral,
                             Verdict::Inconclusive, verdict_text(v)));
            if (s == VerdictState::Converges) return Gate::Transient;
            if (s == VerdictState::Diverges) return Gate::Recurrent;
            return Gate::Unknown;
        }
        const auto one = WeightFunction::constant(1.0);
        const double c = a.sector_constant.value_or(1.0 - 1e-9);
        const DivergenceVerdict s = strong_integral_f(m, one, 1.0, opt);
        t.push_back(rule("Thm3.5", "f constant: strong-side integral", to_string(s.resolved()), Tier::Integral,
                         Verdict::Inconclusive, verdict_text(s)));
        if (s.resolved() == VerdictState::Converges && sector_check(m, c).holds) return Gate::Transient;
        const DivergenceVerdict w = weak_integral_f(m, one, 1.0, opt);
        t.push_back(rule("Thm3.4", "f constant: weak-side integral", to_string(w.resolved()), Tier::Integral,
                         Verdict::Inconclusive, verdict_text(w)));
        const bool irreducible = a.irreducible || m.family() != Family::Custom;
        if (w.resolved() == VerdictState::Diverges && real_symbol(m) && irreducible) return Gate::Recurrent;
        return Gate::Unknown;
    }

    TransienceReport classify(const SymbolModel &m, double kappa, const Assumptions &a, const ClassifyOptions &opt)
    {
        if (!(kappa >= 0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be a finite number >= 0");
        return assemble(m, gather(m, a, opt), kappa, a, opt);
    }

    BoundaryResult kappa_boundary(const SymbolModel &m, const Assumptions &a, double tol, const ClassifyOptions &opt,
                                  double lo, double hi)
    {
        if (!(tol > 0) || !(lo >= 0) || !(hi > lo)) throw std::invalid_argument("kappa boundary: need 0 <= lo < hi, tol > 0");
        const Facts f = gather(m, a, opt);
        BoundaryResult res;
        // true on the weak side; an Inconclusive probe falls back to the sign of the weak-side exponent
        const auto weak_at = [&](double k) -> std::optional<bool> {
            const TransienceReport r = assemble(m, f, k, a, opt);
            res.probes.emplace_back(k, r.verdict);
            if (r.verdict != Verdict::Inconclusive) return r.verdict == Verdict::WeaklyTransient;
            if (opt.route == ClassifyOptions::Route::Tail) {
                if (!f.density) return std::nullopt;
                const DivergenceVerdict v = tail_test_weak(*f.density, k, opt.r, m.grid(), opt.divergence);
                if (!std::isfinite(v.exponent)) return std::nullopt;
                return v.exponent >= -1.0;
            }
            const DivergenceVerdict v = weak_integral_kappa(m, k, opt.r, opt.divergence);
            if (!std::isfinite(v.exponent)) return std::nullopt;
            return v.exponent <= -1.0;
        };
        const auto a_lo = weak_at(lo), a_hi = weak_at(hi);
        if (!a_lo || !a_hi) throw no_boundary("kappa boundary: an end of the range is inconclusive");
        if (*a_lo == *a_hi)
            throw no_boundary(std::string("kappa boundary: same verdict at both ends (") +
                              (*a_lo ? "WeaklyTransient" : "StronglyTransient") + ")");
        const bool weak_low = *a_lo;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            const auto w = weak_at(mid);
            if (!w) {
                res.lo = lo;
                res.hi = hi;
                res.kappa_star = mid;
                return res;
            }
            (*w == weak_low ? lo : hi) = mid;
        }
        res.lo = lo;
        res.hi = hi;
        res.kappa_star = 0.5 * (lo + hi);
        return res;
    }
}
