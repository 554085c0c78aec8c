#include "qint/detection_stats.hpp"

#include <cmath>

#include "qint/errors.hpp"

namespace qint::stats {

namespace {

void check_fano(double fano) {
    if (!(fano > 0.0 && fano <= 1.0))
        throw validation_error("fano factor must lie in (0, 1], got " + std::to_string(fano));
}

void check_rate(double mean_rate) {
    if (!(mean_rate > 0.0) || !std::isfinite(mean_rate))
        throw validation_error("mean rate must be positive, got " + std::to_string(mean_rate));
}

} // namespace

double t_statistic(const optics::SplitAmplitudes& split, double mean_rate, double fano,
                   std::uint64_t sample_size) {
    split.validate();
    check_rate(mean_rate);
    check_fano(fano);
    if (sample_size < 1)
        throw validation_error("t_statistic: sample_size must be >= 1");
    if (split.a_reflect == 0.0)
        throw validation_error("t_statistic: a_reflect = 0 leaves no reflected beam to test");
    const double a2 = split.a_reflect * split.a_reflect;
    const double b2 = split.b_tunnel * split.b_tunnel;
    return -std::sqrt(static_cast<double>(sample_size) * mean_rate / (a2 * fano)) * b2;
}

bool reject_null(double t, std::uint64_t sample_size, double threshold, TestSide side) {
    if (sample_size < min_sample_size)
        return false;
    if (side == TestSide::OneSided)
        return t <= -threshold;
    return std::abs(t) >= threshold;
}

TestOutcome evaluate_test(double t, std::uint64_t sample_size, double threshold,
                          double confidence, TestSide side) {
    TestOutcome out;
    out.t_statistic = t;
    out.sample_size = sample_size;
    out.threshold = threshold;
    out.confidence = confidence;
    out.reject_null = reject_null(t, sample_size, threshold, side);
    return out;
}

ExperimentPlan plan_sample_size(double mean_rate, double fano, double damage_ratio,
                                double threshold) {
    check_rate(mean_rate);
    check_fano(fano);
    if (!(damage_ratio > 0.0) || !std::isfinite(damage_ratio))
        throw validation_error("plan_sample_size: damage_ratio must be positive, got " +
                               std::to_string(damage_ratio));
    if (!(threshold > 0.0))
        throw validation_error("plan_sample_size: threshold must be positive");

    const double b2 = 1.0 / (1.0 + damage_ratio);
    const double a2 = damage_ratio / (1.0 + damage_ratio);
    const double raw = threshold * threshold * a2 * fano / (mean_rate * b2 * b2);
    if (!(raw < 9.0e18))
        throw validation_error("plan_sample_size: required sample size overflows; raise the rate or "
                               "lower the damage ratio");

    ExperimentPlan plan;
    plan.required_n = std::max<std::uint64_t>(min_sample_size,
                                              static_cast<std::uint64_t>(std::ceil(raw)));
    const auto n = static_cast<double>(plan.required_n);
    plan.integration_time = n / (a2 * mean_rate);
    plan.paper_time = n / mean_rate;
    plan.expected_triggers = n / damage_ratio;  // n * b^2/a^2, reduced
    plan.damage_ratio = damage_ratio;
    return plan;
}

double observed_t(std::uint64_t detected, double duration, const optics::SplitAmplitudes& hypothesized,
                  double mean_rate, double fano) {
    hypothesized.validate();
    check_rate(mean_rate);
    check_fano(fano);
    if (!(duration > 0.0))
        throw validation_error("observed_t: duration must be positive");
    if (hypothesized.a_reflect == 0.0)
        throw validation_error("observed_t: a_reflect = 0 leaves no reflected beam to test");
    const double a2 = hypothesized.a_reflect * hypothesized.a_reflect;
    const double observed_rate = static_cast<double>(detected) / duration;
    const double sigma = std::sqrt(a2 * mean_rate * fano);
    return (observed_rate - mean_rate) * std::sqrt(static_cast<double>(detected)) / sigma;
}

PowerEstimate empirical_power(const sim::TrialConfig& config, std::uint64_t runs,
                              std::uint64_t base_seed, double threshold, TestSide side,
                              unsigned threads) {
    if (runs < 100)
        throw validation_error("empirical_power: at least 100 runs are needed for a stable fraction");
    const auto split = optics::split_amplitudes(config.stack, config.tunneling_index);

    sim::TrialConfig with_object = config;
    with_object.object_present = true;
    with_object.stop_on_trigger = false;

    sim::TrialConfig without_object = config;
    without_object.object_present = false;
    without_object.stop_on_trigger = false;

    const auto rejecting_fraction = [&](const sim::TrialConfig& c) {
        const sim::EnsembleResult ens = sim::simulate_ensemble(c, runs, base_seed, threads);
        std::uint64_t rejected = 0;
        for (const sim::RunRecord& rec : ens.per_run) {
            const double t = observed_t(rec.detected_s, rec.elapsed, split,
                                        config.source.mean_rate, config.source.fano_factor);
            if (reject_null(t, rec.detected_s, threshold, side))
                ++rejected;
        }
        return static_cast<double>(rejected) / static_cast<double>(runs);
    };

    PowerEstimate estimate;
    estimate.runs = runs;
    estimate.power = rejecting_fraction(with_object);
    estimate.false_rejection = rejecting_fraction(without_object);
    return estimate;
}

} // namespace qint::stats
