#pragma once

#include "levy/io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace levy::cli
{
    struct RunConfig
    {
        std::string command;                 // classify, kappa-star, pruitt, tails, simulate, compare, validate-sampler
        std::vector<std::string> models;
        std::optional<double> kappa;
        std::vector<double> kappa_grid;
        std::optional<int> d;                // overrides the model file
        double r = 1.0;
        double tol = 0.02;
        std::string route = "all";           // all, integral, tail
        SimConfig sim;
        std::string out = ".";
        std::string format = "both";         // json, csv, both
        bool quiet = false;
    };

    // one tidy row of plotdata.csv; err is left blank when absent
    struct PlotRow
    {
        std::string series;
        double x;
        double y;
        std::optional<double> err;
    };

    // "0,0.5,1" or "lo:hi:step"
    std::vector<double> parse_grid(const std::string &text);

    std::string emit_plotdata(const std::vector<PlotRow> &rows);
    std::vector<PlotRow> verdict_rows(const std::string &series, const DivergenceVerdict &v);
    std::vector<PlotRow> occupation_rows(const OccupationEstimate &e);
    // columns horizon, S_hat, stderr, growth_exp, verdict
    std::string emit_occupation(const OccupationEstimate &e);

    // 0 conclusive, 2 inconclusive, 1 error; diagnostics go to stderr
    int run(const RunConfig &cfg);
}
