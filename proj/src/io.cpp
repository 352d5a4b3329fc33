#include "levy/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace levy
{
    using nlohmann::json;

    namespace
    {
        [[noreturn]] void fail(const std::string &path, const std::string &what)
        {
            throw config_error(path + ": " + what, 0, 0, path);
        }

        void allow_keys(const json &j, const std::string &path, std::initializer_list<const char *> keys)
        {
            if (!j.is_object()) fail(path, "expected an object");
            const std::set<std::string> ok(keys.begin(), keys.end());
            for (const auto &[k, v] : j.items())
                if (!ok.count(k)) fail(path + "." + k, "unknown key");
        }

        double number(const json &j, const std::string &path)
        {
            if (!j.is_number()) fail(path, "expected a number");
            return j.get<double>();
        }

        double number_or(const json &j, const char *key, double dflt, const std::string &path)
        {
            return j.contains(key) ? number(j.at(key), path + "." + key) : dflt;
        }

        bool bool_or(const json &j, const char *key, bool dflt, const std::string &path)
        {
            if (!j.contains(key)) return dflt;
            if (!j.at(key).is_boolean()) fail(path + "." + key, "expected true or false");
            return j.at(key).get<bool>();
        }

        Vec vector(const json &j, int d, const std::string &path)
        {
            if (!j.is_array() || int(j.size()) != d) fail(path, "expected an array of " + std::to_string(d) + " numbers");
            Vec v(d);
            for (int i = 0; i < d; ++i) v[i] = number(j[i], path + "[" + std::to_string(i) + "]");
            return v;
        }

        // a number means c*I
        Mat matrix(const json &j, int d, const std::string &path)
        {
            if (j.is_number()) return j.get<double>() * Mat::Identity(d, d);
            if (!j.is_array() || int(j.size()) != d) fail(path, "expected a number or a " + std::to_string(d) + "x" + std::to_string(d) + " array");
            Mat m(d, d);
            for (int i = 0; i < d; ++i) m.row(i) = vector(j[i], d, path + "[" + std::to_string(i) + "]").transpose();
            return m;
        }

        std::pair<int, int> line_column(const std::string &text, std::size_t byte)
        {
            int line = 1, col = 1;
            for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
                if (text[i] == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
            }
            return {line, col};
        }

        template <class E>
        E enum_from(const json &j, const std::string &path, std::initializer_list<E> values)
        {
            if (!j.is_string()) fail(path, "expected a string");
            for (E e : values)
                if (to_string(e) == j.get<std::string>()) return e;
            fail(path, "unknown value '" + j.get<std::string>() + "'");
        }

        // the family tag, CamelCase as in the docs or the snake_case used by to_string
        Family family_from(const json &j)
        {
            static const std::pair<const char *, Family> tags[] = {
                {"BrownianDrift", Family::BrownianDrift}, {"IsotropicStable", Family::IsotropicStable},
                {"StableLike", Family::StableLike},       {"RadialJump", Family::RadialJump},
                {"FiniteJump", Family::FiniteJump},       {"Custom", Family::Custom}};
            if (j.is_string())
                for (const auto &[name, f] : tags)
                    if (j.get<std::string>() == name) return f;
            return enum_from<Family>(j, "family", {Family::BrownianDrift, Family::IsotropicStable, Family::StableLike,
                                                   Family::RadialJump, Family::FiniteJump, Family::Custom});
        }

        double finite_or_inf(const json &j) { return j.is_null() ? INFINITY : j.get<double>(); }
    }

    ScalarField field_from_json(const json &j, const std::string &path)
    {
        if (j.is_number()) return ScalarField(j.get<double>());
        if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
            fail(path, "expected a number or an object with a kind");
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "tanh_ramp") {
            allow_keys(j, path, {"kind", "lo", "hi", "scale"});
            return ScalarField::tanh_ramp(number(j.value("lo", json()), path + ".lo"),
                                          number(j.value("hi", json()), path + ".hi"), number_or(j, "scale", 1.0, path));
        }
        if (kind == "sign_step") {
            allow_keys(j, path, {"kind", "base", "amp"});
            return ScalarField::sign_step(number(j.value("base", json()), path + ".base"),
                                          number(j.value("amp", json()), path + ".amp"));
        }
        if (kind == "radial_bump") {
            allow_keys(j, path, {"kind", "centre", "far", "scale"});
            return ScalarField::radial_bump(number(j.value("centre", json()), path + ".centre"),
                                            number(j.value("far", json()), path + ".far"), number_or(j, "scale", 1.0, path));
        }
        if (kind == "cosine") {
            allow_keys(j, path, {"kind", "mid", "amp", "freq"});
            return ScalarField::cosine(number(j.value("mid", json()), path + ".mid"),
                                       number(j.value("amp", json()), path + ".amp"),
                                       number(j.value("freq", json()), path + ".freq"));
        }
        fail(path + ".kind", "unknown field kind '" + kind + "'");
    }

    RadialLevyDensity density_from_json(const json &j, int d, const std::string &path)
    {
        if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) fail(path, "expected an object with a kind");
        const std::string kind = j.at("kind").get<std::string>();
        std::optional<RadialLevyDensity> n;
        if (kind == "radial_density") {
            allow_keys(j, path, {"kind", "expr", "table", "u0", "monotone_flag", "support_from", "inner_factor", "shells"});
            const double u0 = number_or(j, "u0", 1.0, path);
            const bool mono = bool_or(j, "monotone_flag", false, path);
            if (j.contains("expr") == j.contains("table")) fail(path, "give exactly one of expr and table");
            if (j.contains("expr")) {
                if (!j.at("expr").is_string()) fail(path + ".expr", "expected a string");
                try {
                    n = RadialLevyDensity::expression(d, Expression::parse(j.at("expr").get<std::string>()), u0, mono,
                                                      number_or(j, "support_from", 0.0, path));
                } catch (const parse_error &e) {
                    throw config_error(path + ".expr: " + e.what() + " (column " + std::to_string(e.column) + " of the expression)",
                                       0, 0, path + ".expr");
                }
            } else {
                const json &t = j.at("table");
                if (!t.is_array() || t.size() < 2) fail(path + ".table", "expected at least two [u, n] pairs");
                std::vector<std::pair<double, double>> pts;
                for (std::size_t i = 0; i < t.size(); ++i) {
                    const std::string p = path + ".table[" + std::to_string(i) + "]";
                    if (!t[i].is_array() || t[i].size() != 2) fail(p, "expected [u, n]");
                    pts.emplace_back(number(t[i][0], p), number(t[i][1], p));
                }
                n = RadialLevyDensity::table(d, std::move(pts), u0, mono);
            }
        } else if (kind == "power_law") {
            allow_keys(j, path, {"kind", "gamma", "alpha", "support_from", "inner_factor", "shells"});
            n = RadialLevyDensity::power_law(d, field_from_json(j.value("gamma", json(1.0)), path + ".gamma"),
                                             field_from_json(j.value("alpha", json()), path + ".alpha"),
                                             number_or(j, "support_from", 0.0, path));
        } else if (kind == "stable") {
            allow_keys(j, path, {"kind", "gamma", "alpha", "inner_factor", "shells"});
            n = RadialLevyDensity::stable(d, field_from_json(j.value("gamma", json(1.0)), path + ".gamma"),
                                          field_from_json(j.value("alpha", json()), path + ".alpha"));
        } else if (kind == "finite_jump") {
            allow_keys(j, path, {"kind", "alpha", "inner_factor", "shells"});
            n = RadialLevyDensity::finite_jump(d, field_from_json(j.value("alpha", json()), path + ".alpha"));
        } else {
            fail(path + ".kind", "unknown density kind '" + kind + "'");
        }
        if (j.contains("inner_factor")) {
            const json &f = j.at("inner_factor");
            allow_keys(f, path + ".inner_factor", {"radius", "factor"});
            n = n->with_inner_factor(number(f.value("radius", json()), path + ".inner_factor.radius"),
                                     number(f.value("factor", json()), path + ".inner_factor.factor"));
        }
        if (j.contains("shells")) {
            if (!j.at("shells").is_array()) fail(path + ".shells", "expected an array");
            for (std::size_t i = 0; i < j.at("shells").size(); ++i) {
                const json &s = j.at("shells")[i];
                const std::string p = path + ".shells[" + std::to_string(i) + "]";
                allow_keys(s, p, {"radius", "mass"});
                n = n->with_shell({number(s.value("radius", json()), p + ".radius"), number(s.value("mass", json()), p + ".mass")});
            }
        }
        return *n;
    }

    json to_json(const Assumptions &a)
    {
        return {{"eq3", a.weak_test_hypothesis},
                {"eq0_c", a.sector_constant ? json(*a.sector_constant) : json()},
                {"eq5_2", a.perturbation_bound},
                {"irreducible", a.irreducible}};
    }

    Assumptions assumptions_from_json(const json &j)
    {
        allow_keys(j, "assumptions", {"eq3", "eq0_c", "eq5_2", "irreducible"});
        Assumptions a;
        a.weak_test_hypothesis = bool_or(j, "eq3", false, "assumptions");
        if (j.contains("eq0_c") && !j.at("eq0_c").is_null()) {
            const double c = number(j.at("eq0_c"), "assumptions.eq0_c");
            if (!(c >= 0 && c < 1)) fail("assumptions.eq0_c", "sector constant must lie in [0,1)");
            a.sector_constant = c;
        }
        a.perturbation_bound = bool_or(j, "eq5_2", false, "assumptions");
        a.irreducible = bool_or(j, "irreducible", false, "assumptions");
        return a;
    }

    ModelSpec parse_model(const std::string &text, std::optional<int> d_override)
    {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error &e) {
            const auto [line, col] = line_column(text, e.byte);
            // keep only the reason from the library message
            std::string why = e.what();
            if (const auto k = why.find(", column "); k != std::string::npos)
                if (const auto c = why.find(": ", k); c != std::string::npos) why = why.substr(c + 2);
            throw config_error("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + why,
                               line, col);
        }
        if (d_override) {
            if (!j.is_object()) fail("model", "expected an object");
            j["d"] = *d_override;
        }
        allow_keys(j, "model", {"name", "family", "d", "parameters", "envelope_mode", "state_grid", "assumptions"});
        if (!j.contains("family")) fail("family", "missing");
        if (!j.contains("d") || !j.at("d").is_number_integer() || j.at("d").get<int>() < 1)
            fail("d", "expected a positive integer");
        const Family fam = family_from(j.at("family"));
        const int d = j.at("d").get<int>();
        const json p = j.value("parameters", json::object());
        if (!p.is_object()) fail("parameters", "expected an object");

        StateGrid grid;
        if (j.contains("state_grid")) {
            const json &g = j.at("state_grid");
            allow_keys(g, "state_grid", {"lo", "hi", "points"});
            grid.lo = number_or(g, "lo", grid.lo, "state_grid");
            grid.hi = number_or(g, "hi", grid.hi, "state_grid");
            grid.points = int(number_or(g, "points", grid.points, "state_grid"));
            if (!(grid.lo < grid.hi) || grid.points < 1) fail("state_grid", "need lo < hi and points >= 1");
        }
        std::optional<EnvelopeMode> mode;
        if (j.contains("envelope_mode")) {
            const json &m = j.at("envelope_mode");
            if (m == "ClosedForm") mode = EnvelopeMode::ClosedForm;
            else if (m == "GridSampled") mode = EnvelopeMode::GridSampled;
            else fail("envelope_mode", "expected ClosedForm or GridSampled");
        }

        ModelSpec spec{j.value("name", std::string()), SymbolModel::standard_brownian(1), {}};
        switch (fam) {
        case Family::BrownianDrift: {
            allow_keys(p, "parameters", {"drift", "diffusion", "drift_scale", "diffusion_scale"});
            BrownianParams bp;
            bp.drift = p.contains("drift") ? vector(p.at("drift"), d, "parameters.drift") : Vec::Zero(d);
            bp.diffusion = p.contains("diffusion") ? matrix(p.at("diffusion"), d, "parameters.diffusion") : Mat::Identity(d, d);
            if (p.contains("drift_scale")) bp.drift_scale = field_from_json(p.at("drift_scale"), "parameters.drift_scale");
            if (p.contains("diffusion_scale"))
                bp.diffusion_scale = field_from_json(p.at("diffusion_scale"), "parameters.diffusion_scale");
            spec.model = SymbolModel::brownian(d, bp, mode.value_or(EnvelopeMode::ClosedForm), grid);
            break;
        }
        case Family::IsotropicStable:
            allow_keys(p, "parameters", {"alpha", "gamma"});
            if (mode == EnvelopeMode::GridSampled) fail("envelope_mode", "isotropic stable models use closed-form envelopes");
            spec.model = SymbolModel::isotropic_stable(d, number(p.value("alpha", json()), "parameters.alpha"),
                                                       number_or(p, "gamma", 1.0, "parameters"));
            break;
        case Family::StableLike: {
            allow_keys(p, "parameters", {"alpha", "gamma", "beta", "beta_scale"});
            StableParams sp{field_from_json(p.value("alpha", json()), "parameters.alpha")};
            if (p.contains("gamma")) sp.gamma = field_from_json(p.at("gamma"), "parameters.gamma");
            sp.beta = p.contains("beta") ? vector(p.at("beta"), d, "parameters.beta") : Vec::Zero(d);
            if (p.contains("beta_scale")) sp.beta_scale = field_from_json(p.at("beta_scale"), "parameters.beta_scale");
            spec.model = SymbolModel::stable_like(d, sp, mode.value_or(EnvelopeMode::ClosedForm), grid);
            break;
        }
        case Family::RadialJump: {
            allow_keys(p, "parameters", {"density", "diffusion_scale"});
            if (!p.contains("density")) fail("parameters.density", "missing");
            RadialLevyDensity n = density_from_json(p.at("density"), d, "parameters.density");
            const ScalarField c = p.contains("diffusion_scale")
                                      ? field_from_json(p.at("diffusion_scale"), "parameters.diffusion_scale")
                                      : ScalarField(0.0);
            spec.model = SymbolModel::radial_jump(std::move(n), c, mode.value_or(EnvelopeMode::GridSampled), grid);
            break;
        }
        case Family::FiniteJump:
            allow_keys(p, "parameters", {"alpha"});
            spec.model = SymbolModel::finite_jump(d, field_from_json(p.value("alpha", json()), "parameters.alpha"),
                                                  mode.value_or(EnvelopeMode::GridSampled), grid);
            break;
        case Family::Custom:
            fail("family", "Custom models are built in code; the file format covers the named families");
        }
        if (j.contains("assumptions")) spec.assumptions = assumptions_from_json(j.at("assumptions"));
        return spec;
    }

    ModelSpec load_model(const std::string &file, std::optional<int> d_override)
    {
        std::ifstream in(file);
        if (!in) throw config_error("cannot open model file '" + file + "'", 0, 0);
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            return parse_model(ss.str(), d_override);
        } catch (const config_error &e) {
            throw config_error(file + ": " + e.what(), e.line, e.column, e.path);
        }
    }

    json to_json(const TransienceReport &r)
    {
        json rules = json::array();
        for (const FiredRule &f : r.rules)
            rules.push_back({{"id", f.id},
                             {"quote_ref", f.quote_ref},
                             {"verdict", f.verdict},
                             {"tier", to_string(f.tier)},
                             {"supports", to_string(f.supports)},
                             {"detail", f.detail}});
        return {{"gate", to_string(r.gate)},
                {"kappa", r.kappa},
                {"verdict", to_string(r.verdict)},
                {"kappa_star", r.kappa_star ? json(*r.kappa_star) : json()},
                {"rules", rules},
                {"assumptions", to_json(r.assumptions)},
                {"symmetric", r.symmetric},
                {"sector_holds", r.sector_holds},
                {"quadratic_bound_holds", r.quadratic_bound_holds},
                {"conditional_on", r.conditional_on},
                {"notes", r.notes}};
    }

    TransienceReport report_from_json(const json &j)
    {
        TransienceReport r;
        r.gate = enum_from<Gate>(j.at("gate"), "gate", {Gate::Transient, Gate::Recurrent, Gate::Unknown});
        r.kappa = j.at("kappa").get<double>();
        const std::initializer_list<Verdict> verdicts{Verdict::WeaklyTransient, Verdict::StronglyTransient,
                                                      Verdict::Inconclusive};
        r.verdict = enum_from<Verdict>(j.at("verdict"), "verdict", verdicts);
        if (j.contains("kappa_star") && !j.at("kappa_star").is_null()) r.kappa_star = j.at("kappa_star").get<double>();
        for (const json &f : j.at("rules")) {
            FiredRule fr;
            fr.id = f.at("id").get<std::string>();
            fr.quote_ref = f.at("quote_ref").get<std::string>();
            fr.verdict = f.at("verdict").get<std::string>();
            if (f.contains("tier")) fr.tier = enum_from<Tier>(f.at("tier"), "tier", {Tier::Index, Tier::Integral, Tier::ClosedForm});
            if (f.contains("supports")) fr.supports = enum_from<Verdict>(f.at("supports"), "supports", verdicts);
            fr.detail = f.value("detail", std::string());
            r.rules.push_back(fr);
        }
        r.assumptions = assumptions_from_json(j.at("assumptions"));
        r.symmetric = j.value("symmetric", false);
        r.sector_holds = j.value("sector_holds", false);
        r.quadratic_bound_holds = j.value("quadratic_bound_holds", false);
        r.conditional_on = j.value("conditional_on", std::vector<std::string>{});
        r.notes = j.value("notes", std::vector<std::string>{});
        return r;
    }

    json to_json(const DivergenceVerdict &v)
    {
        json partials = json::array();
        for (const Partial &p : v.partials) partials.push_back({{"eps", p.eps}, {"value", p.value}});
        // non-finite numbers become null
        return {{"state", to_string(v.state)},
                {"exponent", std::isfinite(v.exponent) ? json(v.exponent) : json()},
                {"band", v.band},
                {"partials", partials},
                {"refined", to_string(v.refined)},
                {"residual", v.residual},
                {"log_slope", v.log_slope},
                {"note", v.note}};
    }

    DivergenceVerdict verdict_from_json(const json &j)
    {
        const std::initializer_list<VerdictState> states{VerdictState::Diverges, VerdictState::Converges,
                                                         VerdictState::Inconclusive};
        DivergenceVerdict v;
        v.state = enum_from<VerdictState>(j.at("state"), "state", states);
        v.exponent = finite_or_inf(j.at("exponent"));
        v.band = j.at("band").get<double>();
        for (const json &p : j.at("partials")) v.partials.push_back({finite_or_inf(p.at("eps")), finite_or_inf(p.at("value"))});
        if (j.contains("refined")) v.refined = enum_from<VerdictState>(j.at("refined"), "refined", states);
        v.residual = j.value("residual", 0.0);
        v.log_slope = j.value("log_slope", 0.0);
        v.note = j.value("note", std::string());
        return v;
    }

    json to_json(const OccupationEstimate &e)
    {
        return {{"horizon", e.horizon},
                {"S_hat", e.value},
                {"stderr", e.stderr_},
                {"growth_exp", std::isfinite(e.growth) ? json(e.growth) : json()},
                {"growth_se", e.growth_se},
                {"verdict", to_string(e.verdict)},
                {"warnings", e.warnings}};
    }

    json to_json(const SimConfig &c)
    {
        return {{"T", c.T},
                {"h", c.h},
                {"N", c.N},
                {"seed", c.seed},
                {"r", c.r},
                {"kappa", c.kappa},
                {"mode", to_string(c.mode)},
                {"nodes_per_decade", c.nodes_per_decade},
                {"t_min", c.t_min},
                {"exact_probability", c.exact_probability},
                {"band", c.band},
                {"censor_window", c.censor_window},
                {"max_censored", c.max_censored}};
    }

    SimConfig sim_config_from_json(const json &j, SimConfig c)
    {
        allow_keys(j, "sim", {"T", "h", "N", "seed", "r", "kappa", "mode", "nodes_per_decade", "t_min",
                              "exact_probability", "band", "censor_window", "max_censored"});
        c.T = number_or(j, "T", c.T, "sim");
        c.h = number_or(j, "h", c.h, "sim");
        c.N = int(number_or(j, "N", c.N, "sim"));
        if (j.contains("seed")) {
            if (!j.at("seed").is_number_unsigned()) fail("sim.seed", "expected a non-negative integer");
            c.seed = j.at("seed").get<std::uint64_t>();
        }
        c.r = number_or(j, "r", c.r, "sim");
        c.kappa = number_or(j, "kappa", c.kappa, "sim");
        if (j.contains("mode")) {
            if (j.at("mode") == "ExactMarginal") c.mode = SimConfig::Mode::ExactMarginal;
            else if (j.at("mode") == "EulerPath") c.mode = SimConfig::Mode::EulerPath;
            else fail("sim.mode", "expected ExactMarginal or EulerPath");
        }
        c.nodes_per_decade = int(number_or(j, "nodes_per_decade", c.nodes_per_decade, "sim"));
        c.t_min = number_or(j, "t_min", c.t_min, "sim");
        c.exact_probability = bool_or(j, "exact_probability", c.exact_probability, "sim");
        c.band = number_or(j, "band", c.band, "sim");
        c.censor_window = number_or(j, "censor_window", c.censor_window, "sim");
        c.max_censored = number_or(j, "max_censored", c.max_censored, "sim");
        return c;
    }
}
