// Command-line front door: presets catalog, preset runs, and custom sweeps.
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rfso/runner.hpp"

namespace {

int cmd_presets() {
    for (const rfso::Preset& p : rfso::presets()) {
        std::printf("%-28s %s\n", p.name.c_str(), p.description.c_str());
        std::printf("%-28s default sweep: %s over [%g, %g] (%zu points)\n", "",
                    rfso::sweep_var_name(p.default_sweep.variable),
                    p.default_sweep.grid.front(), p.default_sweep.grid.back(),
                    p.default_sweep.grid.size());
        std::string cfg = rfso::serialize_config(p.config);
        for (std::size_t pos = 0; pos < cfg.size();) {
            std::size_t nl = cfg.find('\n', pos);
            std::printf("%-28s | %s\n", "", cfg.substr(pos, nl - pos).c_str());
            pos = nl + 1;
        }
    }
    return 0;
}

std::vector<double> parse_sweep_range(const std::string& range) {
    // start:stop:steps, steps = number of grid points
    double start = 0, stop = 0;
    long steps = 0;
    if (std::sscanf(range.c_str(), "%lf:%lf:%ld", &start, &stop, &steps) != 3 ||
        steps < 2 || !(stop > start))
        throw rfso::config_error("sweep range must be start:stop:steps with steps >= 2");
    std::vector<double> grid(steps);
    for (long i = 0; i < steps; ++i)
        grid[i] = start + (stop - start) * i / (steps - 1);
    return grid;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"secrecy analysis of the mixed RF-FSO decode-and-forward relay"};
    app.require_subcommand(1);

    auto* sc_presets = app.add_subcommand("presets", "list the built-in presets");

    std::string preset_name, out_path, config_path, sweep_expr, methods_expr;
    uint64_t seed = 0;
    uint64_t trials = 0;
    bool have_seed = false, have_trials = false;

    auto add_overrides = [&](CLI::App* sc) {
        sc->add_option("--seed", seed, "override the Monte Carlo seed")
            ->each([&](const std::string&) { have_seed = true; });
        sc->add_option("--trials", trials, "override the Monte Carlo trial count")
            ->each([&](const std::string&) { have_trials = true; });
    };

    auto* sc_preset = app.add_subcommand("preset", "run a built-in preset sweep");
    sc_preset->add_option("name", preset_name, "preset name (see `presets`)")->required();
    sc_preset->add_option("--out", out_path, "output CSV path")->required();
    sc_preset->add_option("--methods", methods_expr,
                          "methods: closed,asymptotic,quadrature,mc (default closed,mc)");
    add_overrides(sc_preset);

    auto* sc_run = app.add_subcommand("run", "run a sweep from a config file");
    sc_run->add_option("--config", config_path, "scenario config file")->required();
    sc_run->add_option("--sweep", sweep_expr, "var=start:stop:steps")->required();
    sc_run->add_option("--methods", methods_expr, "methods: closed,asymptotic,quadrature,mc")
        ->required();
    sc_run->add_option("--out", out_path, "output CSV path")->required();
    add_overrides(sc_run);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sc_presets->parsed()) return cmd_presets();

        rfso::RunnerConfig cfg;
        rfso::SweepSpec sweep;
        if (sc_preset->parsed()) {
            const rfso::Preset* p = rfso::find_preset(preset_name);
            if (!p) {
                std::cerr << "unknown preset: " << preset_name << "\n";
                return 1;
            }
            cfg = p->config;
            sweep = p->default_sweep;
            if (sc_preset->count("--methods") > 0)
                sweep.methods = rfso::parse_methods(methods_expr);
        } else {
            cfg = rfso::parse_config_file(config_path);
            std::size_t eq = sweep_expr.find('=');
            if (eq == std::string::npos)
                throw rfso::config_error("--sweep expects var=start:stop:steps");
            sweep.variable = rfso::sweep_var_from_name(sweep_expr.substr(0, eq));
            sweep.grid = parse_sweep_range(sweep_expr.substr(eq + 1));
            sweep.methods = rfso::parse_methods(methods_expr);
        }
        if (have_seed) cfg.mc.seed = seed;
        if (have_trials) cfg.mc.n_trials = trials;
        return rfso::run_scenario(cfg, sweep, out_path);
    } catch (const rfso::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
