#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>

#include "qint/config.hpp"
#include "qint/errors.hpp"
#include "qint/recipes.hpp"
#include "qint/version.hpp"

namespace {

void report_error(const std::string& kind, const std::string& message) {
    const bool color = std::getenv("NO_COLOR") == nullptr && isatty(fileno(stderr)) != 0;
    if (color)
        std::cerr << "\x1b[31m" << kind << ":\x1b[0m " << message << "\n";
    else
        std::cerr << kind << ": " << message << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-photon interrogation via frustrated total internal reflection: "
                 "evanescent optics, Monte Carlo ensembles, and shot-noise test planning."};
    app.set_version_flag("--version", qint::artifact_version);
    app.require_subcommand(1);

    std::string config_path;
    qint::cli::RecipeOptions options;
    std::uint64_t seed_flag = 0;
    std::uint64_t runs_flag = 0;
    double from_flag = 0.0;
    double to_flag = 0.0;

    const struct {
        const char* name;
        const char* help;
        bool needs_config;
        bool sweeps;
        bool has_reflectivity;
    } recipes[] = {
        {"paper-example", "Plan the damage-budget experiment and simulate it at the planned operating point",
         true, false, false},
        {"ev-baseline", "Monte Carlo the 50-50 interferometric bomb test for comparison", false, false, true},
        {"sweep-distance", "Tabulate decay length, tunnelling probability and plan vs gap distance", true,
         true, false},
        {"sweep-angle", "Tabulate the evanescent decay length against the incidence angle", true, true,
         false},
        {"power-study", "Empirical rejection rates for matched object-present/absent ensembles", true, false,
         false},
        {"plan", "Sample-size and integration-time plan from the closed-form statistic", true, false, false},
    };

    for (const auto& recipe : recipes) {
        CLI::App* sub = app.add_subcommand(recipe.name, recipe.help);
        auto* config_opt =
            sub->add_option("--config", config_path, "Config file (JSON)")->check(CLI::ExistingFile);
        if (recipe.needs_config)
            config_opt->required();
        sub->add_option("--seed", seed_flag, "Base seed; overrides the config seed (default 42)");
        sub->add_option("--runs", runs_flag, "Number of Monte Carlo runs");
        sub->add_option("--out", options.out_dir, "Output directory (default .)");
        sub->add_option("--threads", options.threads, "Worker threads; 0 = hardware concurrency");
        if (recipe.sweeps) {
            sub->add_option("--from", from_flag, "Sweep start");
            sub->add_option("--to", to_flag, "Sweep end");
            sub->add_option("--steps", options.sweep_steps, "Sweep points (default 100)");
        }
        if (recipe.has_reflectivity)
            sub->add_option("--reflectivity", options.reflectivity,
                            "Beamsplitter reflectivity (default 0.5)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return qint::cli::exit_validation;
    }

    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--seed") > 0)
        options.seed = seed_flag;
    if (sub->count("--runs") > 0)
        options.runs = runs_flag;
    if (sub->get_option_no_throw("--from") != nullptr && sub->count("--from") > 0)
        options.sweep_from = from_flag;
    if (sub->get_option_no_throw("--to") != nullptr && sub->count("--to") > 0)
        options.sweep_to = to_flag;

    try {
        const qint::cli::ResolvedConfig config = sub->count("--config") > 0
                                                     ? qint::cli::parse_config(config_path)
                                                     : qint::cli::default_config();
        // single-photon sources live around 1e2..1e6 counts/s; outside that
        // range the model still runs, but flag it
        const double rate = config.trial.source.mean_rate;
        if (rate < 1e2 || rate > 1e6)
            std::cerr << "note: n0_rate_hz = " << rate
                      << " is outside the usual single-photon-source range [1e2, 1e6] /s\n";
        qint::cli::run_recipe(sub->get_name(), config, options);
        return qint::cli::exit_ok;
    } catch (const qint::singularity_error& e) {
        report_error("singularity", e.what());
        return qint::cli::exit_singularity;
    } catch (const qint::validation_error& e) {
        report_error("error", e.what());
        return qint::cli::exit_validation;
    } catch (const std::exception& e) {
        report_error("error", e.what());
        return 1;
    }
}
