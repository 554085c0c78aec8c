#include "qint/interrogation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "qint/errors.hpp"

namespace qint::sim {

void TrialConfig::validate() const {
    stack.validate();
    source.validate();
    background.validate();
    if (!(duration > 0.0) || !std::isfinite(duration))
        throw validation_error("TrialConfig: duration must be positive, got " + std::to_string(duration));
}

double TrialConfig::tunnel_probability() const {
    if (!object_present)
        return 0.0;
    const auto split = optics::split_amplitudes(stack, tunneling_index);
    return split.b_tunnel * split.b_tunnel;
}

std::uint64_t EnsembleResult::total_heralds() const {
    return std::accumulate(per_run.begin(), per_run.end(), std::uint64_t{0},
                           [](std::uint64_t acc, const RunRecord& r) { return acc + r.heralds; });
}

std::uint64_t EnsembleResult::total_detected() const {
    return std::accumulate(per_run.begin(), per_run.end(), std::uint64_t{0},
                           [](std::uint64_t acc, const RunRecord& r) { return acc + r.detected_s; });
}

std::uint64_t EnsembleResult::total_tunneled() const {
    return std::accumulate(per_run.begin(), per_run.end(), std::uint64_t{0},
                           [](std::uint64_t acc, const RunRecord& r) { return acc + r.tunneled; });
}

RunRecord simulate_run(const TrialConfig& config, std::uint64_t seed) {
    config.validate();
    const double p_tunnel = config.tunnel_probability();
    const double p_detect =
        config.background.efficiency_s * config.background.filter_transmission_signal;
    const double acc_rate = photon::accidental_rate(config.source, config.background);
    const bool bomb = config.object_present && config.object_kind == ObjectKind::UltraSensitiveBomb;

    Rng rng = make_rng(seed);
    RunRecord rec;
    rec.elapsed = config.duration;

    const std::uint64_t arrivals = photon::sample_herald_count(config.source, config.duration, rng);

    if (bomb && config.stop_on_trigger && p_tunnel > 0.0) {
        // The run ends at the triggering photon, so arrival times matter:
        // conditioned on the count they are sorted uniforms over the window.
        std::vector<double> times(arrivals);
        for (double& t : times)
            t = uniform_unit(rng) * config.duration;
        std::sort(times.begin(), times.end());
        for (std::uint64_t i = 0; i < arrivals; ++i) {
            ++rec.heralds;
            if (bernoulli(rng, p_tunnel)) {
                ++rec.tunneled;
                rec.triggered = true;
                rec.elapsed = times[i];
                break;
            }
            if (bernoulli(rng, p_detect))
                ++rec.detected_s;
        }
    } else {
        rec.heralds = arrivals;
        for (std::uint64_t i = 0; i < arrivals; ++i) {
            if (config.object_present && bernoulli(rng, p_tunnel)) {
                ++rec.tunneled;
                if (bomb)
                    rec.triggered = true;
            } else if (bernoulli(rng, p_detect)) {
                ++rec.detected_s;
            }
        }
    }

    if (acc_rate > 0.0)
        rec.detected_s += sample_poisson(rng, acc_rate * rec.elapsed);
    return rec;
}

namespace {

EnsembleAggregate aggregate_in_run_order(const std::vector<RunRecord>& per_run) {
    double total_detected = 0.0;
    double total_elapsed = 0.0;
    double total_tunneled = 0.0;
    std::uint64_t triggered = 0;
    for (const RunRecord& r : per_run) {
        total_detected += static_cast<double>(r.detected_s);
        total_elapsed += r.elapsed;
        total_tunneled += static_cast<double>(r.tunneled);
        triggered += r.triggered ? 1 : 0;
    }
    EnsembleAggregate agg;
    const auto runs = static_cast<double>(per_run.size());
    agg.mean_detected_rate = total_elapsed > 0.0 ? total_detected / total_elapsed : 0.0;
    agg.trigger_fraction = static_cast<double>(triggered) / runs;
    agg.mean_tunneled = total_tunneled / runs;
    return agg;
}

} // namespace

EnsembleResult simulate_ensemble(const TrialConfig& config, std::uint64_t runs,
                                 std::uint64_t base_seed, unsigned threads) {
    if (runs < 1)
        throw validation_error("simulate_ensemble: runs must be >= 1");
    config.validate();
    config.tunnel_probability();  // surface singularities before any thread starts

    EnsembleResult result;
    result.runs = runs;
    result.per_run.resize(runs);

    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    if (static_cast<std::uint64_t>(workers) > runs)
        workers = static_cast<unsigned>(runs);

    if (workers <= 1) {
        for (std::uint64_t i = 0; i < runs; ++i)
            result.per_run[i] = simulate_run(config, base_seed + i);
    } else {
        std::mutex error_lock;
        std::exception_ptr first_error;
        auto body = [&](unsigned worker) {
            try {
                for (std::uint64_t i = worker; i < runs; i += workers)
                    result.per_run[i] = simulate_run(config, base_seed + i);
            } catch (...) {
                const std::scoped_lock lock(error_lock);
                if (!first_error)
                    first_error = std::current_exception();
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(body, w);
        for (std::thread& t : pool)
            t.join();
        if (first_error)
            std::rethrow_exception(first_error);
    }

    result.aggregate = aggregate_in_run_order(result.per_run);
    return result;
}

EvBaseline ev_baseline(std::uint64_t runs, std::uint64_t seed, double beamsplitter_reflectivity) {
    if (runs < 1)
        throw validation_error("ev_baseline: runs must be >= 1");
    if (!(beamsplitter_reflectivity > 0.0 && beamsplitter_reflectivity < 1.0))
        throw validation_error("ev_baseline: beamsplitter reflectivity must lie in (0, 1)");

    Rng rng = make_rng(seed);
    std::uint64_t explode = 0;
    std::uint64_t dark = 0;
    for (std::uint64_t i = 0; i < runs; ++i) {
        if (uniform_unit(rng) < beamsplitter_reflectivity)
            ++explode;  // photon took the bomb arm
        else if (uniform_unit(rng) < beamsplitter_reflectivity)
            ++dark;  // blocked arm kills the interference; dark port can click
    }

    EvBaseline out;
    out.explode_fraction = static_cast<double>(explode) / static_cast<double>(runs);
    out.dark_port_fraction = static_cast<double>(dark) / static_cast<double>(runs);
    // Complement keeps the three fractions summing to exactly one.
    out.bright_port_fraction = 1.0 - (out.explode_fraction + out.dark_port_fraction);
    const double informative = out.dark_port_fraction + out.explode_fraction;
    out.efficiency = informative > 0.0 ? out.dark_port_fraction / informative : 0.0;
    return out;
}

EvBaseline ev_baseline_analytic(double beamsplitter_reflectivity) {
    const double r = beamsplitter_reflectivity;
    if (!(r >= 0.0 && r < 1.0))
        throw validation_error("ev_baseline_analytic: beamsplitter reflectivity must lie in [0, 1)");
    EvBaseline out;
    out.explode_fraction = r;
    out.dark_port_fraction = (1.0 - r) * r;
    out.bright_port_fraction = 1.0 - (out.explode_fraction + out.dark_port_fraction);
    // dark/(dark+explode) = (1-R)/(2-R); this form stays finite as R -> 0.
    out.efficiency = (1.0 - r) / (2.0 - r);
    return out;
}

EfficiencyComparison efficiency_comparison(const TrialConfig& config, std::uint64_t runs,
                                           std::uint64_t seed) {
    const auto split = optics::split_amplitudes(config.stack, config.tunneling_index);
    const auto probs = optics::detection_probabilities(split);

    TrialConfig probe = config;
    probe.object_present = true;
    probe.object_kind = ObjectKind::PassiveAbsorber;
    probe.stop_on_trigger = false;
    const EnsembleResult ens = simulate_ensemble(probe, runs, seed);

    const auto heralds = ens.total_heralds();
    const double mc =
        heralds > 0 ? 1.0 - static_cast<double>(ens.total_tunneled()) / static_cast<double>(heralds)
                    : 0.0;
    return EfficiencyComparison{probs.p_damage_free, mc, ev_baseline_analytic(0.5).efficiency};
}

} // namespace qint::sim
