#pragma once

#include <cstdint>
#include <string>

#include "qint/detection_stats.hpp"
#include "qint/interrogation.hpp"

namespace qint::cli {

struct StatsParams {
    double threshold = stats::two_sided_threshold_99;
    double confidence = 0.99;
    stats::TestSide side = stats::TestSide::TwoSided;
    double damage_ratio = 100.0;
};

struct ResolvedConfig {
    sim::TrialConfig trial;
    StatsParams stats;
    std::uint64_t seed = 42;

    // Canonical serialization of the fully resolved config; digest input and
    // the reproducibility witness recorded in the manifest.
    std::string canonical_text;
};

// Reads and validates a config file. Unknown keys are hard errors; defaults
// fill everything except the stack geometry, the source rate and the run
// duration. Throws parse_error with file/line diagnostics on bad syntax and
// validation_error naming the violated invariant on bad values.
ResolvedConfig parse_config(const std::string& path);

// Same, from an in-memory document; `origin` labels diagnostics.
ResolvedConfig parse_config_text(const std::string& text, const std::string& origin);

// All-defaults configuration; recipes that need no optics (ev-baseline) can
// run without a config file.
ResolvedConfig default_config();

// FNV-1a over the canonical text, as fixed-width hex.
std::string config_digest(const ResolvedConfig& config);

} // namespace qint::cli
