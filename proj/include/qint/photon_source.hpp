#pragma once

#include <cstdint>

#include "qint/errors.hpp"
#include "qint/random.hpp"

namespace qint::photon {

// Counting law of the heralded source. Poissonian models filtered classical
// light; the binomial construction realizes a sub-Poissonian heralded pair
// source with Fano factor eta < 1.
enum class CountDistribution { SubPoissonianBinomial, Poissonian };

struct SourceModel {
    double mean_rate = 672.43;  // heralded pairs per second (n0)
    double fano_factor = 1.0;   // eta = variance / mean of the herald counts
    CountDistribution distribution = CountDistribution::Poissonian;

    void validate() const;
};

// Experimental plumbing around the source: stray pump light, the signal-path
// interference filter, the heralding coincidence window, and the two
// detectors. Defaults are ideal so the bare protocol is the default behavior.
struct BackgroundModel {
    double pump_background_rate = 0.0;       // stray pump photons toward D_S, /s
    double filter_transmission_signal = 1.0; // P(signal photon passes the filter)
    double filter_rejection_pump = 1.0;      // P(pump photon is blocked)
    double coincidence_window = 1e-8;        // herald acceptance window, s
    double dark_rate_s = 0.0;                // D_S dark counts, /s
    double dark_rate_i = 0.0;                // D_I dark counts, /s
    double efficiency_s = 1.0;
    double efficiency_i = 1.0;

    void validate() const;
    bool ideal() const;
};

// Binomial(M, p) with p = 1 - eta and M = round(mean / p) has Fano factor
// exactly eta; realized_mean = M * p reports the rounding residue.
struct BinomialShape {
    std::uint64_t trials;
    double success_prob;
    double realized_mean;
};

BinomialShape binomial_shape(double mean_count, double fano_factor);

// Number of heralded photons arriving in `duration` seconds. Draw order is
// part of the seeding contract: this is always the first consumer of a run's
// generator.
std::uint64_t sample_herald_count(const SourceModel& source, double duration, Rng& rng);

// Rate of spurious D_S counts that land inside a coincidence window with a
// herald (true or dark):
//   (dark_s + pump * (1 - rejection)) * window * (n0 * efficiency_i + dark_i).
double accidental_rate(const SourceModel& source, const BackgroundModel& bg);

// Expected D_S click rate given the probability p_reflect that a photon
// survives to the detector path:
//   p_reflect * n0 * efficiency_s * filter_transmission + accidentals.
// With ideal plumbing this is exactly the product p_reflect * n0.
double effective_detected_rate(const SourceModel& source, const BackgroundModel& bg,
                               double p_reflect);

} // namespace qint::photon
