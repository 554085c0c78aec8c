#pragma once

#include "qint/errors.hpp"

namespace qint::optics {

inline constexpr double pi = 3.14159265358979323846;

// Which refractive index sets the decay length used for the tunnelling
// amplitude: the object's own index (the default) or the gap medium's.
enum class TunnelingIndex { Object, Gap };

// A total internal reflector, the medium behind its back face, and an object
// held a distance gap_distance behind it. Lengths in nanometers, angles in
// radians from the surface normal; wavelength_incident is measured inside the
// incidence medium (see in_medium_wavelength for converting a vacuum value).
struct OpticalStack {
    double n_incident = 1.5;
    double n_gap = 1.0;
    double n_object = 1.33;
    double theta_incidence = 1.2;
    double wavelength_incident = 500.0;
    double gap_distance = 500.0;

    // Throws validation_error naming the violated invariant.
    void validate() const;
};

// Amplitudes of the two mutually exclusive single-photon outcomes: total
// reflection (a) and tunnelling to the object (b), with a^2 + b^2 = 1.
struct SplitAmplitudes {
    double a_reflect = 1.0;
    double b_tunnel = 0.0;

    void validate() const;
};

struct DetectionProbabilities {
    double p_absorb;       // b^2: the photon tunnels out and strikes the object
    double p_damage_free;  // a^2: the photon is reflected and carries the signal
};

// theta_c = asin(n_gap / n_incident). Requires n_incident > n_gap > 0.
double critical_angle(double n_incident, double n_gap);

// Convenience converter lambda_vacuum -> lambda inside the incidence medium.
// Never applied implicitly; stack fields always hold the in-medium value.
double in_medium_wavelength(double wavelength_vacuum, double n_incident);

// 1/e decay length of the evanescent field behind the reflector:
//   xi = lambda_i / (2 pi sqrt(n_i^2 sin^2(theta_i) - n_outer^2)).
// n_outer is the index on the far side; callers pass stack.n_gap or
// stack.n_object depending on which medium the field decays into. Throws
// singularity_error when theta_i is at or below the critical angle for
// n_outer (the depth grows without bound there).
double penetration_depth(const OpticalStack& stack, double n_outer);

// Same quantity via lambda_i / (2 pi n_i sqrt(sin^2(theta_i) - sin^2(theta_c))),
// with sin(theta_c) taken as the exact ratio n_outer / n_incident. Kept as an
// independent route for cross-checking penetration_depth.
double penetration_depth_alt(const OpticalStack& stack, double n_outer);

// Relative field amplitude a depth y into the rarer medium: exp(-y / xi).
double evanescent_amplitude(double depth_y, double xi);

double tunneling_index_value(const OpticalStack& stack, TunnelingIndex which);

// b = exp(-gap_distance / xi), a = sqrt(1 - b^2). The decay length uses the
// object index by default; pass TunnelingIndex::Gap for the alternative.
SplitAmplitudes split_amplitudes(const OpticalStack& stack,
                                 TunnelingIndex which = TunnelingIndex::Object);

// (P_abs, P_dfd) = (b^2, a^2); the pair sums to 1 within 1e-12.
DetectionProbabilities detection_probabilities(const SplitAmplitudes& split);

} // namespace qint::optics
