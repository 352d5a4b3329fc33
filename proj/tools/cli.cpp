#include "cli.hpp"

#include "levy/index_rules.hpp"
#include "levy/levy_tails.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace levy::cli
{
    using nlohmann::json;

    namespace
    {
        std::string num(double v)
        {
            if (std::isnan(v)) return "nan";
            if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
            // shortest text that reads back to the same double
            char buf[32];
            const auto res = std::to_chars(buf, buf + sizeof buf, v);
            return std::string(buf, res.ptr);
        }

        int verdict_code(Verdict v)
        {
            switch (v) {
            case Verdict::WeaklyTransient: return 0;
            case Verdict::StronglyTransient: return 1;
            case Verdict::Inconclusive: return 2;
            }
            return 2;
        }

        struct Output
        {
            json report;
            std::vector<PlotRow> rows;
            std::optional<std::string> occupation;
            int code = 0;
            std::string summary;
        };

        ClassifyOptions classify_options(const RunConfig &cfg)
        {
            ClassifyOptions o;
            o.r = cfg.r;
            if (cfg.route == "all") o.route = ClassifyOptions::Route::All;
            else if (cfg.route == "integral") o.route = ClassifyOptions::Route::Integral;
            else if (cfg.route == "tail") o.route = ClassifyOptions::Route::Tail;
            else throw config_error("--route must be all, integral or tail", 0, 0, "route");
            return o;
        }

        std::vector<ModelSpec> load_models(const RunConfig &cfg, std::size_t expected)
        {
            if (cfg.models.size() != expected)
                throw config_error(cfg.command + " needs exactly " + std::to_string(expected) + " --model file(s)", 0, 0,
                                   "model");
            std::vector<ModelSpec> out;
            for (const std::string &f : cfg.models) out.push_back(load_model(f, cfg.d));
            return out;
        }

        double need_kappa(const RunConfig &cfg)
        {
            if (!cfg.kappa) throw config_error(cfg.command + " needs --kappa", 0, 0, "kappa");
            return *cfg.kappa;
        }

        // the report of a process the gate calls recurrent
        TransienceReport recurrent_report(const ModelSpec &ms, double kappa)
        {
            TransienceReport r;
            r.kappa = kappa;
            r.assumptions = ms.assumptions;
            transience_gate(ms.model, ms.assumptions, &r.rules);
            r.gate = Gate::Recurrent;
            r.notes.push_back("transience gate: the process is recurrent, so last-exit moments are not defined");
            return r;
        }

        void add_cf_rows(std::vector<PlotRow> &rows, const SymbolModel &m, double kappa, double r, const std::string &tag)
        {
            try {
                const auto w = verdict_rows("cf_weak" + tag, weak_integral_kappa(m, kappa, r));
                const auto s = verdict_rows("cf_strong" + tag, strong_integral_kappa(m, kappa, r));
                rows.insert(rows.end(), w.begin(), w.end());
                rows.insert(rows.end(), s.begin(), s.end());
            } catch (const std::exception &) {
                // partial integrals are a plotting extra; the verdict above stands without them
            }
        }

        Output cmd_classify(const RunConfig &cfg)
        {
            const ModelSpec ms = load_models(cfg, 1)[0];
            std::vector<double> kappas = cfg.kappa_grid;
            if (kappas.empty()) kappas.push_back(need_kappa(cfg));
            const ClassifyOptions opt = classify_options(cfg);
            Output out;
            json reports = json::array();
            int inconclusive = 0;
            for (double k : kappas) {
                TransienceReport rep;
                try {
                    rep = classify(ms.model, k, ms.assumptions, opt);
                } catch (const not_transient &) {
                    out.report = to_json(recurrent_report(ms, k));
                    out.code = 1;
                    out.summary = "gate Recurrent: the process is not transient";
                    return out;
                }
                reports.push_back(to_json(rep));
                out.rows.push_back({"verdict", k, double(verdict_code(rep.verdict)), std::nullopt});
                add_cf_rows(out.rows, ms.model, k, cfg.r, kappas.size() == 1 ? "" : "[kappa=" + num(k) + "]");
                inconclusive += rep.verdict == Verdict::Inconclusive;
                out.summary += (out.summary.empty() ? "" : "; ") + std::string("kappa=") + num(k) + " " + to_string(rep.verdict);
            }
            out.report = kappas.size() == 1 ? reports[0] : reports;
            out.code = inconclusive ? 2 : 0;
            return out;
        }

        Output cmd_kappa_star(const RunConfig &cfg)
        {
            const ModelSpec ms = load_models(cfg, 1)[0];
            const ClassifyOptions opt = classify_options(cfg);
            Output out;
            try {
                const BoundaryResult b = kappa_boundary(ms.model, ms.assumptions, cfg.tol, opt);
                // the report is taken on the weak side of the final bracket
                TransienceReport rep = classify(ms.model, b.hi, ms.assumptions, opt);
                rep.kappa_star = b.kappa_star;
                rep.notes.push_back("bracket [" + num(b.lo) + ", " + num(b.hi) + "]");
                out.report = to_json(rep);
                for (const auto &[k, v] : b.probes) out.rows.push_back({"verdict", k, double(verdict_code(v)), std::nullopt});
                out.summary = "kappa_star=" + num(b.kappa_star);
            } catch (const not_transient &) {
                out.report = to_json(recurrent_report(ms, 0.0));
                out.code = 1;
                out.summary = "gate Recurrent: the process is not transient";
            } catch (const no_boundary &e) {
                TransienceReport rep = classify(ms.model, 0.0, ms.assumptions, opt);
                rep.notes.push_back(e.what());
                out.report = to_json(rep);
                out.code = 2;
                out.summary = std::string("no boundary: ") + e.what();
            }
            return out;
        }

        Output cmd_pruitt(const RunConfig &cfg)
        {
            const ModelSpec ms = load_models(cfg, 1)[0];
            const PruittIndices p = pruitt_indices(ms.model);
            Output out;
            out.report = {{"lower", p.lower},       {"upper", p.upper},
                          {"tolerance", p.tolerance}, {"lower_residual", p.lower_residual},
                          {"upper_residual", p.upper_residual}, {"window", {p.window_lo, p.window_hi}}};
            const Vec e = Vec::Unit(ms.model.dim(), 0);
            for (int k = 4; k <= 20; ++k) {
                const double rho = std::ldexp(1.0, -k);
                out.rows.push_back({"sup_abs", rho, sup_abs_q(ms.model, rho * e), std::nullopt});
                out.rows.push_back({"inf_re", rho, inf_re_q(ms.model, rho * e), std::nullopt});
            }
            out.summary = "lower=" + num(p.lower) + " upper=" + num(p.upper);
            return out;
        }

        Output cmd_tails(const RunConfig &cfg)
        {
            const ModelSpec ms = load_models(cfg, 1)[0];
            const double k = need_kappa(cfg);
            const auto n = ms.model.jump_density();
            if (!n) throw not_applicable("tails: the model has no radial jump density");
            ClassifyOptions opt = classify_options(cfg);
            opt.route = ClassifyOptions::Route::Tail;
            Output out;
            TransienceReport rep;
            try {
                rep = classify(ms.model, k, ms.assumptions, opt);
            } catch (const not_transient &) {
                out.report = to_json(recurrent_report(ms, k));
                out.code = 1;
                out.summary = "gate Recurrent: the process is not transient";
                return out;
            }
            out.report = to_json(rep);
            const DivergenceVerdict w = tail_test_weak(*n, k, cfg.r, ms.model.grid());
            const DivergenceVerdict s = tail_test_strong(*n, k, cfg.r, ms.model.grid());
            out.report["tail_weak"] = to_json(w);
            out.report["tail_strong"] = to_json(s);
            const RegularVariationFit fit = rv_index_fit(*n);
            out.report["regular_variation"] = {{"delta", fit.delta}, {"beta", fit.beta}, {"residual", fit.residual}, {"ok", fit.ok}};
            for (const PlotRow &r : verdict_rows("tail_weak", w)) out.rows.push_back(r);
            for (const PlotRow &r : verdict_rows("tail_strong", s)) out.rows.push_back(r);
            out.code = rep.verdict == Verdict::Inconclusive ? 2 : 0;
            out.summary = "kappa=" + num(k) + " " + to_string(rep.verdict);
            return out;
        }

        Output cmd_simulate(const RunConfig &cfg)
        {
            const ModelSpec ms = load_models(cfg, 1)[0];
            std::vector<FiredRule> trace;
            if (transience_gate(ms.model, ms.assumptions, &trace) == Gate::Recurrent)
                throw not_transient("simulate: the transience gate says the process is recurrent");
            const OccupationEstimate e = occupation_integral_estimate(ms.model, cfg.sim);
            Output out;
            out.report = {{"model", ms.name}, {"config", to_json(cfg.sim)}, {"estimate", to_json(e)}};
            out.rows = occupation_rows(e);
            out.occupation = emit_occupation(e);
            out.code = e.verdict == Trend::Inconclusive ? 2 : 0;
            out.summary = to_string(e.verdict) + " growth=" + num(e.growth);
            return out;
        }

        Output cmd_compare(const RunConfig &cfg)
        {
            const std::vector<ModelSpec> ms = load_models(cfg, 2);
            Output out;
            const auto na = ms[0].model.jump_density(), nb = ms[1].model.jump_density();
            bool conclusive = false;
            if (na && nb) {
                const double u0 = std::max(na->u0(), nb->u0());
                const ComparisonReport c = comparison_transfer(*na, *nb, u0, cfg.kappa, ms[0].model.grid());
                json cj = {{"applicable", c.applicable}, {"a_decreasing", c.a_decreasing}, {"statement", c.statement},
                           {"consistent", c.consistent}};
                if (c.witness_u) cj["witness_u"] = *c.witness_u;
                if (c.weak) cj["weak"] = {to_string((*c.weak)[0]), to_string((*c.weak)[1])};
                if (c.strong) cj["strong"] = {to_string((*c.strong)[0]), to_string((*c.strong)[1])};
                out.report["transfer"] = cj;
                conclusive = c.applicable;
                out.summary = c.statement;
            }
            if (ms[0].model.dim() == ms[1].model.dim()) {
                try {
                    const EquivalenceReport e =
                        perturbation_equivalence(ms[0].model, ms[1].model, Mat::Identity(ms[0].model.dim(), ms[0].model.dim()));
                    out.report["equivalence"] = {{"distance", std::isfinite(e.distance) ? json(e.distance) : json()},
                                                 {"diffusion_gap", e.diffusion_gap},
                                                 {"quadratic_liminf", e.quadratic_liminf},
                                                 {"weak_transfer", e.weak_transfer},
                                                 {"strong_transfer", e.strong_transfer},
                                                 {"detail", e.detail}};
                    conclusive = conclusive || e.weak_transfer;
                } catch (const not_applicable &x) {
                    out.report["equivalence"] = {{"detail", x.what()}};
                }
            }
            if (cfg.kappa) {
                json reps = json::array();
                for (const ModelSpec &m : ms) {
                    try {
                        reps.push_back(to_json(classify(m.model, *cfg.kappa, m.assumptions, classify_options(cfg))));
                    } catch (const not_transient &) {
                        reps.push_back(to_json(recurrent_report(m, *cfg.kappa)));
                    }
                }
                out.report["reports"] = reps;
            }
            if (out.summary.empty()) out.summary = conclusive ? "transfer applies" : "no transfer statement applies";
            out.code = conclusive ? 0 : 2;
            return out;
        }

        Output cmd_validate(const RunConfig &cfg)
        {
            const ModelSpec ms = load_models(cfg, 1)[0];
            const int d = ms.model.dim();
            std::vector<Vec> xis;
            for (int k = 1; k <= 8; ++k) xis.push_back(0.25 * k * Vec::Unit(d, 0));
            const double t = 1.0;
            const EcfReport e = ecf_check(ms.model, t, xis, cfg.sim);
            const PositivityReport p = positivity_diagnostic(ms.model, t, xis, cfg.sim);
            Output out;
            json pts = json::array();
            for (const EcfPoint &q : e.points) {
                const double s = q.xi.norm();
                pts.push_back({{"xi", s}, {"re", q.empirical.real()}, {"im", q.empirical.imag()},
                               {"target_re", q.target.real()}, {"target_im", q.target.imag()},
                               {"se_re", q.se_re}, {"se_im", q.se_im}, {"within", q.within}});
                out.rows.push_back({"ecf_re", s, q.empirical.real(), q.se_re});
                out.rows.push_back({"ecf_target", s, q.target.real(), std::nullopt});
            }
            out.report = {{"t", t}, {"N", cfg.sim.N}, {"seed", cfg.sim.seed}, {"points", pts}, {"pass", e.pass},
                          {"positivity", {{"min_re", p.min_re}, {"se", p.min_re_se}, {"pass", p.pass}}}};
            out.code = e.pass && p.pass ? 0 : 2;
            out.summary = e.pass && p.pass ? "sampler agrees with the characteristic function" : "sampler check failed";
            return out;
        }

        void write_file(const std::filesystem::path &p, const std::string &text)
        {
            std::ofstream f(p, std::ios::binary);
            if (!f) throw std::runtime_error("cannot write " + p.string());
            f << text;
        }
    }

    std::vector<double> parse_grid(const std::string &text)
    {
        std::vector<double> out;
        auto to_d = [&](const std::string &s) {
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(s, &used);
            } catch (const std::exception &) {
                used = 0;
            }
            if (used == 0 || used != s.size()) throw config_error("bad number '" + s + "' in kappa grid", 0, 0, "kappa-grid");
            return v;
        };
        if (text.find(':') != std::string::npos) {
            std::stringstream ss(text);
            std::string a, b, c;
            std::getline(ss, a, ':');
            std::getline(ss, b, ':');
            std::getline(ss, c, ':');
            const double lo = to_d(a), hi = to_d(b), step = to_d(c);
            if (!(step > 0) || hi < lo) throw config_error("kappa grid lo:hi:step needs step > 0 and hi >= lo", 0, 0, "kappa-grid");
            const long n = std::lround(std::floor((hi - lo) / step + 1e-9));
            for (long i = 0; i <= n; ++i) out.push_back(lo + i * step);
        } else {
            std::stringstream ss(text);
            for (std::string s; std::getline(ss, s, ',');) out.push_back(to_d(s));
        }
        for (double k : out)
            if (!(k >= 0)) throw config_error("kappa grid values must be >= 0", 0, 0, "kappa-grid");
        return out;
    }

    std::string emit_plotdata(const std::vector<PlotRow> &rows)
    {
        std::string s = "series,x,y,err\n";
        for (const PlotRow &r : rows) s += r.series + "," + num(r.x) + "," + num(r.y) + "," + (r.err ? num(*r.err) : "") + "\n";
        return s;
    }

    std::vector<PlotRow> verdict_rows(const std::string &series, const DivergenceVerdict &v)
    {
        std::vector<PlotRow> rows;
        for (const Partial &p : v.partials) rows.push_back({series, p.eps, p.value, std::nullopt});
        return rows;
    }

    std::vector<PlotRow> occupation_rows(const OccupationEstimate &e)
    {
        std::vector<PlotRow> rows;
        for (int k = 0; k < 3; ++k) rows.push_back({"occupation", e.horizon[k], e.value[k], e.stderr_[k]});
        return rows;
    }

    std::string emit_occupation(const OccupationEstimate &e)
    {
        std::string s = "horizon,S_hat,stderr,growth_exp,verdict\n";
        for (int k = 0; k < 3; ++k)
            s += num(e.horizon[k]) + "," + num(e.value[k]) + "," + num(e.stderr_[k]) + "," + num(e.growth) + "," +
                 to_string(e.verdict) + "\n";
        return s;
    }

    int run(const RunConfig &cfg)
    {
        Output out;
        try {
            if (cfg.kappa && !(*cfg.kappa >= 0)) throw config_error("--kappa must be >= 0", 0, 0, "kappa");
            if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "both")
                throw config_error("--format must be json, csv or both", 0, 0, "format");
            if (cfg.command == "classify") out = cmd_classify(cfg);
            else if (cfg.command == "kappa-star") out = cmd_kappa_star(cfg);
            else if (cfg.command == "pruitt") out = cmd_pruitt(cfg);
            else if (cfg.command == "tails") out = cmd_tails(cfg);
            else if (cfg.command == "simulate") out = cmd_simulate(cfg);
            else if (cfg.command == "compare") out = cmd_compare(cfg);
            else if (cfg.command == "validate-sampler") out = cmd_validate(cfg);
            else throw config_error("unknown command '" + cfg.command + "'", 0, 0);

            const std::filesystem::path dir(cfg.out);
            std::filesystem::create_directories(dir);
            if (cfg.format != "csv") write_file(dir / "report.json", out.report.dump(2) + "\n");
            if (cfg.format != "json") {
                write_file(dir / "plotdata.csv", emit_plotdata(out.rows));
                if (out.occupation) write_file(dir / "occupation.csv", *out.occupation);
            }
        } catch (const config_error &e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        } catch (const model_error &e) {
            std::cerr << "model invariant violated: " << e.what() << "\n";
            return 1;
        } catch (const std::exception &e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
        if (!cfg.quiet) std::cout << cfg.command << ": " << out.summary << "\n";
        if (out.code == 1) std::cerr << "error: " << out.summary << "\n";
        return out.code;
    }
}
