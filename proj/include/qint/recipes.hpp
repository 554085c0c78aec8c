#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qint/config.hpp"

namespace qint::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_singularity = 3;

struct RecipeOptions {
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;   // overrides the config seed
    std::optional<std::uint64_t> runs;   // overrides the recipe default
    unsigned threads = 0;                // 0: hardware concurrency
    std::optional<double> sweep_from;
    std::optional<double> sweep_to;
    std::uint64_t sweep_steps = 100;
    double reflectivity = 0.5;           // ev-baseline only
};

const std::vector<std::string>& recipe_names();

// Runs one named recipe against a resolved config, writing <recipe>.csv and
// manifest.json into out_dir. Output files appear only on success; failures
// leave nothing behind. Throws validation_error / singularity_error; the CLI
// front end converts those into exit codes 2 and 3.
void run_recipe(const std::string& name, const ResolvedConfig& config, const RecipeOptions& options);

} // namespace qint::cli
