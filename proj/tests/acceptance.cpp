// One line per acceptance criterion; exit status is the number of failures.
#include "levy/classifier.hpp"
#include "levy/montecarlo.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace levy;
namespace fs = std::filesystem;

namespace
{
    struct Outcome
    {
        bool pass = true;
        std::string detail;

        void fail(const std::string &why)
        {
            if (pass) detail.clear();
            pass = false;
            detail += (detail.empty() ? "" : "; ") + why;
        }
    };

    using Clock = std::chrono::steady_clock;

    double seconds_since(Clock::time_point t0)
    {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    std::string fmt(double v)
    {
        std::ostringstream os;
        os.precision(4);
        os << v;
        return os.str();
    }

    void within_time(Outcome &o, const std::string &what, double secs, double limit)
    {
        if (secs >= limit) o.fail(what + " took " + fmt(secs) + " s (limit " + fmt(limit) + " s)");
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream f(p, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    Outcome brownian_boundary()
    {
        Outcome o;
        for (int d : {3, 4, 5}) {
            const auto t0 = Clock::now();
            const double k = kappa_boundary(SymbolModel::standard_brownian(d)).kappa_star;
            const double want = d / 2.0 - 1;
            if (std::abs(k - want) > 0.02) o.fail("d=" + std::to_string(d) + " gave " + fmt(k));
            within_time(o, "d=" + std::to_string(d), seconds_since(t0), 10);
            if (o.pass) o.detail += (o.detail.empty() ? "" : ", ") + ("d=" + std::to_string(d) + ": " + fmt(k));
        }
        return o;
    }

    Outcome stable_boundary()
    {
        Outcome o;
        for (auto [d, a] : std::vector<std::pair<int, double>>{{1, 0.5}, {2, 1.2}, {3, 1.0}, {3, 1.8}}) {
            const auto t0 = Clock::now();
            const double k = kappa_boundary(SymbolModel::isotropic_stable(d, a)).kappa_star;
            const std::string tag = "(" + std::to_string(d) + "," + fmt(a) + ")";
            if (std::abs(k - (d / a - 1)) > 0.02) o.fail(tag + " gave " + fmt(k));
            within_time(o, tag, seconds_since(t0), 30);
            if (o.pass) o.detail += (o.detail.empty() ? "" : ", ") + tag + ": " + fmt(k);
        }
        return o;
    }

    Outcome tail_symbol_agreement()
    {
        Outcome o;
        int compared = 0, agreed = 0;
        const int d = 3;
        for (double a : {0.6, 0.9, 1.2, 1.5, 1.8}) {
            const auto n = RadialLevyDensity::stable(d, 1.0, a);
            const auto m = SymbolModel::isotropic_stable(d, a);
            for (double k : {0.3, 0.8, 1.3, 1.9, 2.6}) {
                if (std::abs(k - (d / a - 1)) <= 0.05) continue;
                ++compared;
                const bool w = tail_test_weak(n, k).resolved() == weak_integral_kappa(m, k).resolved();
                const bool s = tail_test_strong(n, k).resolved() == strong_integral_kappa(m, k).resolved();
                if (w && s) ++agreed;
                else o.fail("disagree at alpha=" + fmt(a) + " kappa=" + fmt(k));
            }
        }
        if (compared < 20) o.fail("only " + std::to_string(compared) + " grid points");
        if (o.pass) o.detail = std::to_string(agreed) + "/" + std::to_string(compared) + " points agree";
        return o;
    }

    // Expected rows of the regular variation table, written out from the stable analogy
    // alpha = -delta - d, plus the logarithmic corrections at the two Brownian-type edges.
    struct TableCase
    {
        std::string id;
        int d;
        RadialLevyDensity n;
        std::optional<bool> log_boundary;
        std::function<bool(double)> weak;
    };

    Outcome e3_table()
    {
        Outcome o;
        const auto expr = [](int d, const char *e, double from) {
            return RadialLevyDensity::expression(d, Expression::parse(e), from, true, from);
        };
        const std::vector<TableCase> cases = {
            {"e3.i", 3, RadialLevyDensity::power_law(3, 1.0, 4.0, 1.0), std::nullopt, [](double k) { return k >= 0.5; }},
            {"e3.ii", 1, expr(1, "max(u, e^2)^(-2) * log(max(u, e^2))^2", std::exp(2.0)), std::nullopt,
             [](double) { return true; }},
            {"e3.iii", 3, RadialLevyDensity::power_law(3, 1.0, 2.0, 1.0), std::nullopt, [](double k) { return k > 0.5; }},
            {"e3.iv", 1, RadialLevyDensity::power_law(1, 1.0, 0.5, 1.0), std::nullopt, [](double k) { return k >= 1.0; }},
            {"e3.v", 2, RadialLevyDensity::power_law(2, 1.0, 1.0, 1.0), std::nullopt, [](double k) { return k >= 1.0; }},
            {"e3.vi", 2, expr(2, "max(u, e)^(-2) * log(max(u, e))^(-2)", std::exp(1.0)), std::nullopt,
             [](double) { return false; }},
        };
        int rows = 0;
        for (const TableCase &c : cases) {
            const RegularVariationFit fit = rv_index_fit(c.n);
            if (!fit.ok) {
                o.fail(c.id + ": index fit failed");
                continue;
            }
            std::optional<bool> log_boundary = c.log_boundary;
            if (std::abs(fit.delta + 2.0 * c.d) < 1e-6)
                log_boundary = log_boundary_test(c.n, std::exp(3.0)).resolved() == VerdictState::Converges;
            bool ok = true;
            for (double k : {0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0}) {
                const TailClassification t = regular_variation_classify(c.d, fit.delta, k, log_boundary, 1e-6);
                const TailClass want = c.weak(k) ? TailClass::WeaklyTransient : TailClass::StronglyTransient;
                if (t.case_id != c.id || t.verdict != want) {
                    o.fail(c.id + " at kappa=" + fmt(k) + " gave " + t.case_id + " " + to_string(t.verdict));
                    ok = false;
                    break;
                }
            }
            if (ok) ++rows;
        }
        if (o.pass) o.detail = std::to_string(rows) + "/6 cases match at 8 kappa values each";
        return o;
    }

    Outcome parts_identity()
    {
        Outcome o;
        const auto t0 = Clock::now();
        std::mt19937_64 rng(20261015);
        std::uniform_real_distribution<double> U(0, 1);
        double worst = 0;
        for (int i = 0; i < 100; ++i) {
            const int d = 1 + i % 3;
            const double a = 0.2 + 1.6 * U(rng);
            const double rho = std::exp(std::log(0.05) + U(rng) * std::log(2000.0));
            const RadialLevyDensity n = i % 2 ? RadialLevyDensity::stable(d, 0.5 + U(rng), a)
                                              : RadialLevyDensity::power_law(d, 0.5 + U(rng), a, 0.5 * U(rng));
            Vec x = Vec::Zero(d);
            x(0) = 4 * U(rng) - 2;
            const TailFunctionals t = tail_functionals(n, x, rho);
            const double rel = std::abs(t.T1 - 0.5 * (t.T2 + t.T3)) / std::abs(t.T1);
            worst = std::max(worst, rel);
        }
        if (!(worst <= 1e-8)) o.fail("worst relative error " + fmt(worst));
        const double secs = seconds_since(t0);
        within_time(o, "100 triples", secs, 5);
        if (o.pass) o.detail = "worst relative error " + fmt(worst) + " in " + fmt(secs) + " s";
        return o;
    }

    Outcome occupation_trend()
    {
        Outcome o;
        const auto t0 = Clock::now();
        SimConfig cfg;
        cfg.T = 200;
        cfg.nodes_per_decade = 64;
        cfg.exact_probability = true;
        cfg.kappa = 1;
        const SymbolModel bm = SymbolModel::standard_brownian(3);
        const OccupationEstimate w = occupation_integral_estimate(bm, cfg);
        const double ratio = w.value[1] / w.value[0];
        if (ratio < 1.36 || ratio > 1.47) o.fail("ratio " + fmt(ratio) + " at kappa=1");
        if (w.verdict != Trend::DivergentTrend) o.fail("kappa=1 trend " + to_string(w.verdict));
        cfg.kappa = 0.25;
        const OccupationEstimate s = occupation_integral_estimate(bm, cfg);
        if (s.verdict != Trend::ConvergentTrend) o.fail("kappa=0.25 trend " + to_string(s.verdict));
        const double secs = seconds_since(t0);
        within_time(o, "both runs", secs, 60);
        if (o.pass) o.detail = "ratio " + fmt(ratio) + ", kappa=0.25 growth " + fmt(s.growth);
        return o;
    }

    Outcome sampler()
    {
        Outcome o;
        const auto t0 = Clock::now();
        SimConfig cfg;
        cfg.N = 100000;
        int checked = 0;
        for (int d : {1, 2}) {
            std::vector<Vec> xis;
            for (int k = 1; k <= 8; ++k) xis.push_back(Vec::Constant(d, 0.25 * k));
            for (double a : {0.5, 1.0, 1.5}) {
                const EcfReport r = ecf_check(SymbolModel::isotropic_stable(d, a), 1.0, xis, cfg);
                if (!r.pass) o.fail("alpha=" + fmt(a) + " d=" + std::to_string(d));
                ++checked;
            }
        }
        const double secs = seconds_since(t0);
        within_time(o, "six checks", secs, 30);
        if (o.pass) o.detail = std::to_string(checked) + " ecf checks in " + fmt(secs) + " s";
        return o;
    }

    Outcome inner_perturbation()
    {
        Outcome o;
        const auto n = RadialLevyDensity::stable(3, 1.0, 1.2);
        Assumptions a;
        a.irreducible = true;
        const std::vector<std::pair<std::string, RadialLevyDensity>> variants = {
            {"x2", n.with_inner_factor(1.0, 2.0)},
            {"x0.25", n.with_inner_factor(1.0, 0.25)},
            {"shell", n.with_inner_factor(1.0, 0.5).with_shell({0.5, 2.0})},
        };
        std::string verdicts;
        for (double k : {0.5, 1.0, 2.0}) {
            const Verdict base = classify(SymbolModel::radial_jump(n), k, a).verdict;
            verdicts += (verdicts.empty() ? "" : ", ") + fmt(k) + ": " + to_string(base);
            for (const auto &[tag, v] : variants) {
                const Verdict got = classify(SymbolModel::radial_jump(v), k, a).verdict;
                if (got != base) o.fail(tag + " at kappa=" + fmt(k) + " gave " + to_string(got));
            }
        }
        if (o.pass) o.detail = verdicts;
        return o;
    }

    Outcome pruitt()
    {
        Outcome o;
        struct Fix
        {
            int d;
            double lo, hi;
        };
        int checked = 0;
        for (const Fix f : {Fix{2, 1.3, 1.3}, Fix{3, 0.7, 0.7}, Fix{2, 0.6, 1.4}, Fix{3, 0.8, 1.7}}) {
            for (EnvelopeMode mode : {EnvelopeMode::ClosedForm, EnvelopeMode::GridSampled}) {
                const auto t0 = Clock::now();
                const ScalarField alpha = f.lo == f.hi ? ScalarField(f.lo) : ScalarField::tanh_ramp(f.lo, f.hi);
                const PruittIndices p = pruitt_indices(SymbolModel::stable_like(f.d, StableParams{alpha}, mode));
                const std::string tag = "[" + fmt(f.lo) + "," + fmt(f.hi) + "] d=" + std::to_string(f.d) +
                                        (mode == EnvelopeMode::GridSampled ? " sampled" : "");
                if (std::abs(p.lower - f.lo) > 0.03 || std::abs(p.upper - f.hi) > 0.03)
                    o.fail(tag + " gave [" + fmt(p.lower) + "," + fmt(p.upper) + "]");
                within_time(o, tag, seconds_since(t0), 10);
                ++checked;
            }
        }
        if (o.pass) o.detail = std::to_string(checked) + " fixture/envelope pairs within 0.03";
        return o;
    }

    Outcome determinism()
    {
        Outcome o;
        const fs::path root = fs::temp_directory_path() / "levy_acceptance";
        fs::remove_all(root);
        std::string csv[2];
        for (int i = 0; i < 2; ++i) {
            const fs::path out = root / ("run" + std::to_string(i));
            const std::string cmd = std::string("\"") + LEVY_CLI + "\" simulate --model \"" + LEVY_MODEL_DIR +
                                    "/stable_a05_d1.json\" --kappa 1.5 --horizon 4 --paths 5000 --seed 7 --quiet --out \"" +
                                    out.string() + "\"";
            const int rc = std::system(cmd.c_str());
            if (rc == -1 || !fs::exists(out / "occupation.csv")) {
                o.fail("simulate run " + std::to_string(i) + " produced no CSV");
                return o;
            }
            csv[i] = slurp(out / "occupation.csv") + slurp(out / "plotdata.csv");
        }
        if (csv[0] != csv[1]) o.fail("CSV output differs between runs");
        if (o.pass) o.detail = std::to_string(csv[0].size()) + " bytes identical";
        return o;
    }
}

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"Brownian boundary", brownian_boundary},
        {"stable boundary", stable_boundary},
        {"tail/symbol agreement", tail_symbol_agreement},
        {"regular variation table", e3_table},
        {"parts identity", parts_identity},
        {"Monte Carlo trend", occupation_trend},
        {"sampler validation", sampler},
        {"inner perturbation invariance", inner_perturbation},
        {"Pruitt recovery", pruitt},
        {"simulate determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failures += !o.pass;
        std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << ": "
                  << o.detail << " [" << fmt(seconds_since(t0)) << " s]" << std::endl;
    }
    return failures;
}
