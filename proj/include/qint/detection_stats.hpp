#pragma once

#include <cstdint>

#include "qint/interrogation.hpp"
#include "qint/optics.hpp"

namespace qint::stats {

inline constexpr double two_sided_threshold_99 = 2.58;
inline constexpr double one_sided_threshold_99 = 2.33;

// The rejection rule is only defined for samples larger than 30.
inline constexpr std::uint64_t min_sample_size = 31;

enum class TestSide { TwoSided, OneSided };

struct TestOutcome {
    double t_statistic = 0.0;
    std::uint64_t sample_size = 0;
    double threshold = two_sided_threshold_99;
    bool reject_null = false;
    double confidence = 0.99;
};

struct ExperimentPlan {
    std::uint64_t required_n = 0;
    double integration_time = 0.0;   // time for D_S itself to record required_n counts
    double paper_time = 0.0;         // required_n / n0, the usual quick estimate
    double expected_triggers = 0.0;  // required_n / damage_ratio
    double damage_ratio = 0.0;
};

// Shot-noise statistic against the no-object null (sample mean n0):
//   t = -sqrt(N n0 / (a^2 eta)) b^2,
// identically (mu - n0) / (sigma / sqrt(N)) for mu = a^2 n0 and
// sigma = sqrt(a^2 n0 eta). Requires a > 0: with no reflected beam there is
// nothing to test.
double t_statistic(const optics::SplitAmplitudes& split, double mean_rate, double fano,
                   std::uint64_t sample_size);

// Two-sided: |t| >= threshold. One-sided: t <= -threshold (an object can only
// lower the rate). Either way the sample must exceed 30 counts.
bool reject_null(double t, std::uint64_t sample_size, double threshold = two_sided_threshold_99,
                 TestSide side = TestSide::TwoSided);

TestOutcome evaluate_test(double t, std::uint64_t sample_size,
                          double threshold = two_sided_threshold_99, double confidence = 0.99,
                          TestSide side = TestSide::TwoSided);

// Smallest N with |t(N)| >= threshold when the object sits at
// a^2/b^2 = damage_ratio, i.e. ceil(threshold^2 a^2 eta / (n0 b^4)),
// floored at 31.
ExperimentPlan plan_sample_size(double mean_rate, double fano, double damage_ratio,
                                double threshold = two_sided_threshold_99);

// Per-run statistic on an observed count: mu is replaced by the measured rate
// detected/duration, sigma comes from the hypothesized object model, and the
// observed count is the sample size.
double observed_t(std::uint64_t detected, double duration, const optics::SplitAmplitudes& hypothesized,
                  double mean_rate, double fano);

struct PowerEstimate {
    double power = 0.0;            // rejecting fraction with the object in place
    double false_rejection = 0.0;  // rejecting fraction on matched object-absent runs
    std::uint64_t runs = 0;
};

// Monte Carlo check of the analytic test: simulates matched object-present and
// object-absent ensembles from the same seeds and applies the rejection rule
// to each run's observed count. Runs always integrate the full duration.
PowerEstimate empirical_power(const sim::TrialConfig& config, std::uint64_t runs,
                              std::uint64_t base_seed, double threshold = two_sided_threshold_99,
                              TestSide side = TestSide::TwoSided, unsigned threads = 1);

} // namespace qint::stats
