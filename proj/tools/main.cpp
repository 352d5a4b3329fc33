#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char **argv)
{
    using levy::cli::RunConfig;
    CLI::App app{"Classify Levy-type processes as weakly or strongly transient"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string grid, mode = "ExactMarginal";
    bool exact = false;

    struct Cmd
    {
        const char *name, *help;
    };
    const Cmd cmds[] = {
        {"classify", "verdict at --kappa or over --kappa-grid"},
        {"kappa-star", "bisect for the weak/strong boundary"},
        {"pruitt", "lower and upper Pruitt indices"},
        {"tails", "tail tests on the radial jump density"},
        {"simulate", "Monte Carlo occupation integral"},
        {"compare", "transfer statements between two models"},
        {"validate-sampler", "empirical characteristic function check"},
    };
    for (const Cmd &c : cmds) {
        CLI::App *sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--model", cfg.models, "model JSON file (twice for compare)")->required();
        sub->add_option("--kappa", cfg.kappa, "moment order");
        sub->add_option("--kappa-grid", grid, "list a,b,c or lo:hi:step");
        sub->add_option("--d", cfg.d, "override the model dimension");
        sub->add_option("--r", cfg.r, "ball radius");
        sub->add_option("--tol", cfg.tol, "kappa-star bracket width");
        sub->add_option("--route", cfg.route, "all, integral or tail");
        sub->add_option("--seed", cfg.sim.seed, "simulation seed");
        sub->add_option("--paths", cfg.sim.N, "samples per node, or paths");
        sub->add_option("--horizon", cfg.sim.T, "first horizon T (also 2T and 4T)");
        sub->add_option("--step", cfg.sim.h, "Euler step");
        sub->add_option("--mode", mode, "ExactMarginal or EulerPath");
        sub->add_option("--nodes-per-decade", cfg.sim.nodes_per_decade, "time grid density");
        sub->add_flag("--exact-probability", exact, "closed-form ball probabilities for centred Brownian motion");
        sub->add_option("--out", cfg.out, "output directory");
        sub->add_option("--format", cfg.format, "json, csv or both");
        sub->add_flag("--quiet", cfg.quiet, "no summary line");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    try {
        if (!grid.empty()) cfg.kappa_grid = levy::cli::parse_grid(grid);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (mode == "ExactMarginal") cfg.sim.mode = levy::SimConfig::Mode::ExactMarginal;
    else if (mode == "EulerPath") cfg.sim.mode = levy::SimConfig::Mode::EulerPath;
    else {
        std::cerr << "error: --mode must be ExactMarginal or EulerPath\n";
        return 1;
    }
    cfg.sim.exact_probability = exact;
    if (cfg.kappa) cfg.sim.kappa = *cfg.kappa;
    cfg.sim.r = cfg.r;
    return levy::cli::run(cfg);
}
