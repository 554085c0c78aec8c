#pragma once

#include <cstdint>
#include <vector>

#include "qint/optics.hpp"
#include "qint/photon_source.hpp"

namespace qint::sim {

// An ultra-sensitive bomb is set off by the first photon that tunnels to it;
// a passive absorber soaks up tunneled photons without consequence.
enum class ObjectKind { UltraSensitiveBomb, PassiveAbsorber };

struct TrialConfig {
    optics::OpticalStack stack;
    optics::TunnelingIndex tunneling_index = optics::TunnelingIndex::Object;
    photon::SourceModel source;
    photon::BackgroundModel background;
    double duration = 1.0;  // seconds per run
    bool object_present = true;
    ObjectKind object_kind = ObjectKind::UltraSensitiveBomb;
    bool stop_on_trigger = false;

    void validate() const;

    // b^2 for the configured stack, or exactly 0 when no object is present.
    double tunnel_probability() const;
};

struct RunRecord {
    std::uint64_t heralds = 0;     // photons that arrived while the run was live
    std::uint64_t detected_s = 0;  // D_S clicks, accidentals included
    std::uint64_t tunneled = 0;    // photons absorbed by the object
    bool triggered = false;
    double elapsed = 0.0;  // seconds; shorter than duration only for stopped runs
};

struct EnsembleAggregate {
    double mean_detected_rate = 0.0;  // total clicks / total elapsed seconds
    double trigger_fraction = 0.0;
    double mean_tunneled = 0.0;  // per run
};

struct EnsembleResult {
    std::uint64_t runs = 0;
    std::vector<RunRecord> per_run;
    EnsembleAggregate aggregate;

    std::uint64_t total_heralds() const;
    std::uint64_t total_detected() const;
    std::uint64_t total_tunneled() const;
};

// One interrogation run. Generator use, in order: herald count, arrival times
// (only when a triggering stop is possible), then per photon the tunnel draw
// followed by the detection draw, then the accidental count. Draws with
// probability 0 or 1 consume nothing.
RunRecord simulate_run(const TrialConfig& config, std::uint64_t seed);

// `runs` independent runs seeded base_seed + index. Records are identical for
// any thread count; aggregation folds in run order. threads = 0 picks the
// hardware concurrency.
EnsembleResult simulate_ensemble(const TrialConfig& config, std::uint64_t runs,
                                 std::uint64_t base_seed, unsigned threads = 1);

// The interferometric bomb-test baseline: photon enters a Mach-Zehnder whose
// one arm holds the bomb. Outcome tree for beamsplitter reflectivity R:
// explode with R, dark-port click with (1-R)R, bright-port with (1-R)^2.
struct EvBaseline {
    double explode_fraction = 0.0;
    double dark_port_fraction = 0.0;
    double bright_port_fraction = 0.0;
    double efficiency = 0.0;  // dark / (dark + explode)
};

EvBaseline ev_baseline(std::uint64_t runs, std::uint64_t seed,
                       double beamsplitter_reflectivity = 0.5);

// Exact outcome tree; efficiency reduces to (1-R)/(2-R), defined down to R=0.
EvBaseline ev_baseline_analytic(double beamsplitter_reflectivity = 0.5);

struct EfficiencyComparison {
    double ftir_damage_free_fraction;     // a^2, analytic
    double ftir_damage_free_fraction_mc;  // 1 - tunneled/heralds over an ensemble
    double ev_efficiency;                 // analytic 50-50 baseline, 1/3
};

// Damage-free detection fraction of the evanescent scheme against the
// interferometric baseline, at the configured operating point.
EfficiencyComparison efficiency_comparison(const TrialConfig& config, std::uint64_t runs,
                                           std::uint64_t seed);

} // namespace qint::sim
