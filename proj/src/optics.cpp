#include "qint/optics.hpp"

#include <cmath>
#include <sstream>

namespace qint::optics {

namespace {

[[noreturn]] void fail_validation(const std::string& message) {
    throw validation_error(message);
}

std::string num(double v) {
    std::ostringstream out;
    out.precision(12);
    out << v;
    return out.str();
}

} // namespace

void OpticalStack::validate() const {
    if (!(n_incident > 0.0) || !std::isfinite(n_incident))
        fail_validation("OpticalStack: n_incident must be a positive finite index, got " + num(n_incident));
    if (!(n_gap > 0.0) || !std::isfinite(n_gap))
        fail_validation("OpticalStack: n_gap must be a positive finite index, got " + num(n_gap));
    if (!(n_incident > n_gap))
        fail_validation("OpticalStack: total internal reflection requires n_incident > n_gap, got n_incident = " +
                        num(n_incident) + ", n_gap = " + num(n_gap));
    if (!(n_object > 0.0) || !std::isfinite(n_object))
        fail_validation("OpticalStack: n_object must be a positive finite index, got " + num(n_object));
    if (n_object == n_gap)
        fail_validation("OpticalStack: n_object must differ from n_gap; an index-matched object is invisible");
    if (!(theta_incidence > 0.0) || !(theta_incidence < pi / 2.0))
        fail_validation("OpticalStack: theta_incidence must lie in (0, pi/2), got " + num(theta_incidence));
    if (!(wavelength_incident > 0.0) || !std::isfinite(wavelength_incident))
        fail_validation("OpticalStack: wavelength_incident must be positive, got " + num(wavelength_incident));
    if (!(gap_distance >= 0.0) || !std::isfinite(gap_distance))
        fail_validation("OpticalStack: gap_distance must be nonnegative, got " + num(gap_distance));
    const double theta_c = critical_angle(n_incident, n_gap);
    if (!(theta_incidence > theta_c))
        fail_validation("OpticalStack: theta_incidence (" + num(theta_incidence) +
                        ") must exceed the critical angle asin(n_gap/n_incident) = " + num(theta_c) +
                        " for total internal reflection");
}

void SplitAmplitudes::validate() const {
    if (!(b_tunnel >= 0.0 && b_tunnel <= 1.0))
        fail_validation("SplitAmplitudes: b_tunnel must lie in [0, 1], got " + num(b_tunnel));
    if (!(a_reflect >= 0.0))
        fail_validation("SplitAmplitudes: a_reflect must be nonnegative, got " + num(a_reflect));
    const double norm = a_reflect * a_reflect + b_tunnel * b_tunnel;
    if (!(std::abs(norm - 1.0) <= 1e-12))
        fail_validation("SplitAmplitudes: a^2 + b^2 = " + num(norm) + " breaks normalization (tolerance 1e-12)");
}

double critical_angle(double n_incident, double n_gap) {
    if (!(n_incident > 0.0) || !(n_gap > 0.0))
        fail_validation("critical_angle: refractive indices must be positive");
    if (!(n_incident > n_gap))
        fail_validation("critical_angle: no total internal reflection for n_incident <= n_gap (n_incident = " +
                        num(n_incident) + ", n_gap = " + num(n_gap) + ")");
    return std::asin(n_gap / n_incident);
}

double in_medium_wavelength(double wavelength_vacuum, double n_incident) {
    if (!(wavelength_vacuum > 0.0))
        fail_validation("in_medium_wavelength: wavelength must be positive");
    if (!(n_incident > 0.0))
        fail_validation("in_medium_wavelength: index must be positive");
    return wavelength_vacuum / n_incident;
}

namespace {

void check_depth_inputs(const OpticalStack& stack, double n_outer) {
    if (!(n_outer > 0.0) || !std::isfinite(n_outer))
        fail_validation("penetration_depth: n_outer must be a positive finite index");
    if (!(stack.n_incident > 0.0))
        fail_validation("penetration_depth: n_incident must be positive");
    if (!(stack.wavelength_incident > 0.0))
        fail_validation("penetration_depth: wavelength must be positive");
    // pi/2 itself is a legal evaluation point (grazing incidence) even though
    // configured stacks keep theta strictly inside the interval.
    if (!(stack.theta_incidence > 0.0 && stack.theta_incidence <= pi / 2.0))
        fail_validation("penetration_depth: theta_incidence must lie in (0, pi/2]");
}

[[noreturn]] void fail_below_critical(const OpticalStack& stack, double n_outer) {
    throw singularity_error(
        "penetration_depth: theta_incidence (" + num(stack.theta_incidence) +
        ") is at or below the critical angle for n_outer = " + num(n_outer) +
        "; the evanescent decay length diverges there");
}

} // namespace

double penetration_depth(const OpticalStack& stack, double n_outer) {
    check_depth_inputs(stack, n_outer);
    const double s = stack.n_incident * std::sin(stack.theta_incidence);
    const double disc = s * s - n_outer * n_outer;
    if (!(disc > 0.0))
        fail_below_critical(stack, n_outer);
    return stack.wavelength_incident / (2.0 * pi * std::sqrt(disc));
}

double penetration_depth_alt(const OpticalStack& stack, double n_outer) {
    check_depth_inputs(stack, n_outer);
    const double sin_theta = std::sin(stack.theta_incidence);
    const double sin_theta_c = n_outer / stack.n_incident; // exact ratio, no asin round trip
    const double disc = sin_theta * sin_theta - sin_theta_c * sin_theta_c;
    if (!(disc > 0.0))
        fail_below_critical(stack, n_outer);
    return stack.wavelength_incident / (2.0 * pi * stack.n_incident * std::sqrt(disc));
}

double evanescent_amplitude(double depth_y, double xi) {
    if (!(depth_y >= 0.0))
        fail_validation("evanescent_amplitude: depth must be nonnegative, got " + num(depth_y));
    if (!(xi > 0.0))
        fail_validation("evanescent_amplitude: penetration depth must be positive, got " + num(xi));
    return std::exp(-depth_y / xi);
}

double tunneling_index_value(const OpticalStack& stack, TunnelingIndex which) {
    return which == TunnelingIndex::Object ? stack.n_object : stack.n_gap;
}

SplitAmplitudes split_amplitudes(const OpticalStack& stack, TunnelingIndex which) {
    const double xi = penetration_depth(stack, tunneling_index_value(stack, which));
    if (!(stack.gap_distance >= 0.0))
        fail_validation("split_amplitudes: gap_distance must be nonnegative");
    const double ratio = stack.gap_distance / xi;
    const double b = std::exp(-ratio);
    // 1 - b^2 = -expm1(-d/xi) * (1 + b) keeps a accurate for small gaps.
    const double a = std::sqrt(-std::expm1(-ratio) * (1.0 + b));
    return SplitAmplitudes{a, b};
}

DetectionProbabilities detection_probabilities(const SplitAmplitudes& split) {
    split.validate();
    return DetectionProbabilities{split.b_tunnel * split.b_tunnel,
                                  split.a_reflect * split.a_reflect};
}

} // namespace qint::optics
