#pragma once

#include "levy/classifier.hpp"
#include "levy/montecarlo.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace levy
{
    // Bad configuration text. line/column are 1-based and 0 when the problem is not positional;
    // path names the offending key, e.g. "parameters.alpha".
    struct config_error : std::runtime_error
    {
        config_error(const std::string &what, int line_, int column_, std::string path_ = {})
            : std::runtime_error(what), line(line_), column(column_), path(std::move(path_)) {}
        int line, column;
        std::string path;
    };

    struct ModelSpec
    {
        std::string name;
        SymbolModel model;
        Assumptions assumptions;
    };

    // d_override replaces the file's dimension
    ModelSpec parse_model(const std::string &text, std::optional<int> d_override = std::nullopt);
    ModelSpec load_model(const std::string &file, std::optional<int> d_override = std::nullopt);

    ScalarField field_from_json(const nlohmann::json &j, const std::string &path = "field");
    RadialLevyDensity density_from_json(const nlohmann::json &j, int d, const std::string &path = "density");

    nlohmann::json to_json(const Assumptions &a);
    Assumptions assumptions_from_json(const nlohmann::json &j);

    // the CLI report; rules also carry tier, supports and detail so the round trip is exact
    nlohmann::json to_json(const TransienceReport &r);
    TransienceReport report_from_json(const nlohmann::json &j);

    nlohmann::json to_json(const DivergenceVerdict &v);
    DivergenceVerdict verdict_from_json(const nlohmann::json &j);

    nlohmann::json to_json(const OccupationEstimate &e);
    nlohmann::json to_json(const SimConfig &c);
    // fields missing from j keep their defaults
    SimConfig sim_config_from_json(const nlohmann::json &j, SimConfig base = {});
}
