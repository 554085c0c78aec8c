#include "qint/recipes.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <utility>

#include <json.hpp>

#include "qint/csv.hpp"
#include "qint/detection_stats.hpp"
#include "qint/version.hpp"

namespace qint::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Everything is staged in memory and written in one pass at the end, so a
// failing recipe leaves no partial CSVs behind.
class StagedOutputs {
public:
    void stage(std::string name, std::string content) {
        files_.emplace_back(std::move(name), std::move(content));
    }

    void flush(const std::string& out_dir) {
        fs::create_directories(out_dir);
        std::vector<fs::path> written;
        for (const auto& [name, content] : files_) {
            const fs::path path = fs::path(out_dir) / name;
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            out.write(content.data(), static_cast<std::streamsize>(content.size()));
            if (!out) {
                out.close();
                for (const fs::path& p : written) {
                    std::error_code ignored;
                    fs::remove(p, ignored);
                }
                std::error_code ignored;
                fs::remove(path, ignored);
                throw std::runtime_error("recipe: failed writing '" + path.string() + "'");
            }
            written.push_back(path);
        }
    }

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

std::string timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm parts{};
    gmtime_r(&now, &parts);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buffer;
}

std::string manifest_text(const std::string& recipe, const ResolvedConfig& config,
                          const RecipeOptions& options, std::uint64_t seed, std::uint64_t runs) {
    json command;
    command["recipe"] = recipe;
    command["runs"] = runs;
    command["threads"] = options.threads;
    command["out_dir"] = options.out_dir;
    command["sweep_from"] = options.sweep_from ? json(*options.sweep_from) : json(nullptr);
    command["sweep_to"] = options.sweep_to ? json(*options.sweep_to) : json(nullptr);
    command["sweep_steps"] = options.sweep_steps;
    command["reflectivity"] = options.reflectivity;

    json doc;
    doc["artifact_version"] = artifact_version;
    doc["command"] = command;
    doc["config_digest"] = config_digest(config);
    doc["base_seed"] = seed;
    doc["generated_at"] = timestamp_utc();
    doc["resolved_config"] = json::parse(config.canonical_text);
    if (config.trial.source.distribution == photon::CountDistribution::SubPoissonianBinomial) {
        // trial rounding can shift the per-run mean; record what is realized
        const auto shape = photon::binomial_shape(
            config.trial.source.mean_rate * config.trial.duration, config.trial.source.fano_factor);
        doc["herald_binomial"] = {{"trials_per_run", shape.trials},
                                  {"success_prob", shape.success_prob},
                                  {"requested_mean_per_run",
                                   config.trial.source.mean_rate * config.trial.duration},
                                  {"realized_mean_per_run", shape.realized_mean}};
    }
    return doc.dump(2) + "\n";
}

// Gap distance realizing b^2 = 1/(1 + ratio): d = xi ln(1 + ratio) / 2.
double gap_for_damage_ratio(double xi, double ratio) {
    return xi * std::log1p(ratio) / 2.0;
}

std::uint64_t pick_runs(const RecipeOptions& options, std::uint64_t fallback) {
    const std::uint64_t runs = options.runs.value_or(fallback);
    if (runs < 1)
        throw validation_error("recipe: --runs must be >= 1");
    return runs;
}

struct SweepRange {
    double from;
    double to;
    std::uint64_t steps;

    double at(std::uint64_t k) const {
        if (steps == 1)
            return from;
        if (k == steps - 1)  // keep the endpoint exact; rounding must not pass it
            return to;
        return from + (to - from) * static_cast<double>(k) / static_cast<double>(steps - 1);
    }
};

SweepRange resolve_sweep(const RecipeOptions& options, double default_from, double default_to) {
    SweepRange range{options.sweep_from.value_or(default_from), options.sweep_to.value_or(default_to),
                     options.sweep_steps};
    if (range.steps < 1)
        throw validation_error("recipe: --steps must be >= 1");
    if (!(range.to >= range.from))
        throw validation_error("recipe: sweep bounds must satisfy from <= to");
    return range;
}

void recipe_paper_example(const ResolvedConfig& config, const RecipeOptions& options,
                          std::uint64_t seed, StagedOutputs& staged) {
    const auto& source = config.trial.source;
    const std::uint64_t runs = pick_runs(options, 1000);

    const auto plan = stats::plan_sample_size(source.mean_rate, source.fano_factor,
                                              config.stats.damage_ratio, config.stats.threshold);

    const double n_outer =
        optics::tunneling_index_value(config.trial.stack, config.trial.tunneling_index);
    const double xi = optics::penetration_depth(config.trial.stack, n_outer);

    sim::TrialConfig trial = config.trial;
    trial.stack.gap_distance = gap_for_damage_ratio(xi, config.stats.damage_ratio);
    trial.duration = plan.integration_time;
    trial.object_present = true;
    trial.stop_on_trigger = false;

    const auto split = optics::split_amplitudes(trial.stack, trial.tunneling_index);
    const auto probs = optics::detection_probabilities(split);
    const auto ensemble = sim::simulate_ensemble(trial, runs, seed, options.threads);

    const double t = stats::t_statistic(split, source.mean_rate, source.fano_factor, plan.required_n);
    const auto outcome = stats::evaluate_test(t, plan.required_n, config.stats.threshold,
                                              config.stats.confidence, config.stats.side);
    const double expected_rate =
        photon::effective_detected_rate(source, trial.background, probs.p_damage_free);

    CsvTable table({"required_n", "paper_time_s", "integration_time_s", "expected_triggers",
                    "observed_mean_triggers", "expected_detected_rate_hz",
                    "observed_detected_rate_hz", "t_statistic", "reject_null", "b_squared",
                    "gap_distance_nm", "xi_nm", "runs", "duration_s"});
    table.add_row({format_integer(plan.required_n), format_number(plan.paper_time),
                   format_number(plan.integration_time), format_number(plan.expected_triggers),
                   format_number(ensemble.aggregate.mean_tunneled), format_number(expected_rate),
                   format_number(ensemble.aggregate.mean_detected_rate), format_number(t),
                   format_flag(outcome.reject_null), format_number(probs.p_absorb),
                   format_number(trial.stack.gap_distance), format_number(xi), format_integer(runs),
                   format_number(trial.duration)});

    staged.stage("paper-example.csv", table.str());
    staged.stage("manifest.json", manifest_text("paper-example", config, options, seed, runs));
}

void recipe_ev_baseline(const ResolvedConfig& config, const RecipeOptions& options,
                        std::uint64_t seed, StagedOutputs& staged) {
    const std::uint64_t runs = pick_runs(options, 1'000'000);
    const auto mc = sim::ev_baseline(runs, seed, options.reflectivity);
    const auto exact = sim::ev_baseline_analytic(options.reflectivity);

    CsvTable table({"runs", "reflectivity", "explode_fraction", "dark_port_fraction",
                    "bright_port_fraction", "efficiency", "analytic_explode_fraction",
                    "analytic_dark_port_fraction", "analytic_bright_port_fraction",
                    "analytic_efficiency"});
    table.add_row({format_integer(runs), format_number(options.reflectivity),
                   format_number(mc.explode_fraction), format_number(mc.dark_port_fraction),
                   format_number(mc.bright_port_fraction), format_number(mc.efficiency),
                   format_number(exact.explode_fraction), format_number(exact.dark_port_fraction),
                   format_number(exact.bright_port_fraction), format_number(exact.efficiency)});

    staged.stage("ev-baseline.csv", table.str());
    staged.stage("manifest.json", manifest_text("ev-baseline", config, options, seed, runs));
}

void recipe_sweep_distance(const ResolvedConfig& config, const RecipeOptions& options,
                           std::uint64_t seed, StagedOutputs& staged) {
    const auto& source = config.trial.source;
    const double n_outer =
        optics::tunneling_index_value(config.trial.stack, config.trial.tunneling_index);
    const double xi = optics::penetration_depth(config.trial.stack, n_outer);
    const SweepRange range = resolve_sweep(options, xi / 20.0, 5.0 * xi);
    if (!(range.from > 0.0))
        throw validation_error(
            "sweep-distance: gap distances must be positive; d = 0 leaves no reflected beam to plan for");

    CsvTable table({"d_nm", "xi_nm", "b_tunnel", "b_squared", "p_dfd", "damage_ratio",
                    "required_n", "integration_time_s"});
    for (std::uint64_t k = 0; k < range.steps; ++k) {
        optics::OpticalStack stack = config.trial.stack;
        stack.gap_distance = range.at(k);
        const auto split = optics::split_amplitudes(stack, config.trial.tunneling_index);
        const auto probs = optics::detection_probabilities(split);
        const double ratio = probs.p_damage_free / probs.p_absorb;
        const auto plan = stats::plan_sample_size(source.mean_rate, source.fano_factor, ratio,
                                                  config.stats.threshold);
        table.add_row({format_number(stack.gap_distance), format_number(xi),
                       format_number(split.b_tunnel), format_number(probs.p_absorb),
                       format_number(probs.p_damage_free), format_number(ratio),
                       format_integer(plan.required_n), format_number(plan.integration_time)});
    }

    staged.stage("sweep-distance.csv", table.str());
    staged.stage("manifest.json", manifest_text("sweep-distance", config, options, seed, range.steps));
}

void recipe_sweep_angle(const ResolvedConfig& config, const RecipeOptions& options,
                        std::uint64_t seed, StagedOutputs& staged) {
    const double n_outer =
        optics::tunneling_index_value(config.trial.stack, config.trial.tunneling_index);
    const double theta_c = optics::critical_angle(config.trial.stack.n_incident, n_outer);
    const SweepRange range = resolve_sweep(options, theta_c + 1e-3, optics::pi / 2.0);
    if (!(range.from > theta_c))
        throw validation_error("sweep-angle: sweep must start above the critical angle " +
                               std::to_string(theta_c));
    if (!(range.to <= optics::pi / 2.0))
        throw validation_error("sweep-angle: sweep must end at or below pi/2");

    CsvTable table({"theta_i_rad", "xi_nm", "b_tunnel", "b_squared", "p_dfd"});
    for (std::uint64_t k = 0; k < range.steps; ++k) {
        optics::OpticalStack stack = config.trial.stack;
        stack.theta_incidence = range.at(k);
        const double xi = optics::penetration_depth(stack, n_outer);
        const auto split = optics::split_amplitudes(stack, config.trial.tunneling_index);
        const auto probs = optics::detection_probabilities(split);
        table.add_row({format_number(stack.theta_incidence), format_number(xi),
                       format_number(split.b_tunnel), format_number(probs.p_absorb),
                       format_number(probs.p_damage_free)});
    }

    staged.stage("sweep-angle.csv", table.str());
    staged.stage("manifest.json", manifest_text("sweep-angle", config, options, seed, range.steps));
}

void recipe_power_study(const ResolvedConfig& config, const RecipeOptions& options,
                        std::uint64_t seed, StagedOutputs& staged) {
    const std::uint64_t runs = pick_runs(options, 1000);
    const auto split = optics::split_amplitudes(config.trial.stack, config.trial.tunneling_index);
    const auto probs = optics::detection_probabilities(split);
    const auto estimate = stats::empirical_power(config.trial, runs, seed, config.stats.threshold,
                                                 config.stats.side, options.threads);

    CsvTable table({"runs", "duration_s", "n0_rate_hz", "fano_factor", "b_squared", "threshold",
                    "test_side", "power", "false_rejection"});
    table.add_row({format_integer(runs), format_number(config.trial.duration),
                   format_number(config.trial.source.mean_rate),
                   format_number(config.trial.source.fano_factor), format_number(probs.p_absorb),
                   format_number(config.stats.threshold),
                   config.stats.side == stats::TestSide::TwoSided ? "two_sided" : "one_sided",
                   format_number(estimate.power), format_number(estimate.false_rejection)});

    staged.stage("power-study.csv", table.str());
    staged.stage("manifest.json", manifest_text("power-study", config, options, seed, runs));
}

void recipe_plan(const ResolvedConfig& config, const RecipeOptions& options, std::uint64_t seed,
                 StagedOutputs& staged) {
    const auto& source = config.trial.source;
    const auto plan = stats::plan_sample_size(source.mean_rate, source.fano_factor,
                                              config.stats.damage_ratio, config.stats.threshold);

    CsvTable table({"n0_rate_hz", "fano_factor", "damage_ratio", "threshold", "required_n",
                    "integration_time_s", "paper_time_s", "expected_triggers"});
    table.add_row({format_number(source.mean_rate), format_number(source.fano_factor),
                   format_number(plan.damage_ratio), format_number(config.stats.threshold),
                   format_integer(plan.required_n), format_number(plan.integration_time),
                   format_number(plan.paper_time), format_number(plan.expected_triggers)});

    staged.stage("plan.csv", table.str());
    staged.stage("manifest.json", manifest_text("plan", config, options, seed, 0));
}

} // namespace

const std::vector<std::string>& recipe_names() {
    static const std::vector<std::string> names = {"paper-example", "ev-baseline", "sweep-distance",
                                                   "sweep-angle", "power-study", "plan"};
    return names;
}

void run_recipe(const std::string& name, const ResolvedConfig& config, const RecipeOptions& options) {
    const std::uint64_t seed = options.seed.value_or(config.seed);
    StagedOutputs staged;

    if (name == "paper-example")
        recipe_paper_example(config, options, seed, staged);
    else if (name == "ev-baseline")
        recipe_ev_baseline(config, options, seed, staged);
    else if (name == "sweep-distance")
        recipe_sweep_distance(config, options, seed, staged);
    else if (name == "sweep-angle")
        recipe_sweep_angle(config, options, seed, staged);
    else if (name == "power-study")
        recipe_power_study(config, options, seed, staged);
    else if (name == "plan")
        recipe_plan(config, options, seed, staged);
    else
        throw validation_error("unknown recipe '" + name + "'");

    staged.flush(options.out_dir);
}

} // namespace qint::cli
