#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qint/optics.hpp"
#include "qint/random.hpp"

using namespace qint;
using namespace qint::optics;

namespace {

OpticalStack reference_stack() {
    OpticalStack stack;
    stack.n_incident = 1.5;
    stack.n_gap = 1.0;
    stack.n_object = 1.33;
    stack.theta_incidence = 1.2;
    stack.wavelength_incident = 500.0;
    stack.gap_distance = 500.0;
    return stack;
}

double uniform_in(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform_unit(rng); }

} // namespace

TEST_CASE("critical angle matches the index ratio") {
    const double theta_c = critical_angle(1.5, 1.0);
    CHECK(theta_c == doctest::Approx(0.7297276562269663).epsilon(1e-12));
    CHECK(std::sin(theta_c) * 1.5 == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(critical_angle(std::sqrt(2.0), 1.0) == doctest::Approx(pi / 4.0).epsilon(1e-14));
}

TEST_CASE("critical angle rejects degenerate index pairs") {
    CHECK_THROWS_AS(critical_angle(1.0, 1.0), validation_error);
    CHECK_THROWS_AS(critical_angle(1.0, 1.5), validation_error);
    CHECK_THROWS_AS(critical_angle(-1.0, 0.5), validation_error);
    CHECK_THROWS_AS(critical_angle(1.5, 0.0), validation_error);
}

TEST_CASE("critical angle round trip over a random grid") {
    Rng rng = make_rng(11);
    for (int i = 0; i < 10000; ++i) {
        const double n_i = uniform_in(rng, 1.05, 3.0);
        const double n_r = uniform_in(rng, 0.1, 0.99) * n_i;
        const double theta_c = critical_angle(n_i, n_r);
        CHECK(std::sin(theta_c) * n_i == doctest::Approx(n_r).epsilon(1e-12));
    }
}

TEST_CASE("penetration depth at grazing incidence") {
    OpticalStack stack = reference_stack();
    stack.theta_incidence = pi / 2.0;
    const double xi = penetration_depth(stack, 1.0);
    CHECK(xi == doctest::Approx(71.17625434171771).epsilon(1e-12));
    CHECK(penetration_depth_alt(stack, 1.0) == doctest::Approx(xi).epsilon(1e-12));
}

TEST_CASE("penetration depth diverges toward the critical angle") {
    OpticalStack stack = reference_stack();
    const double theta_c = critical_angle(stack.n_incident, 1.0);

    // geometric approach: each thousandfold step toward theta_c grows xi
    // by about sqrt(1000), past any fixed bound
    double previous = 0.0;
    for (const double offset : {1e-3, 1e-6, 1e-9, 1e-12}) {
        stack.theta_incidence = theta_c + offset;
        const double xi = penetration_depth(stack, 1.0);
        CHECK(xi > 10.0 * previous);
        previous = xi;
    }
    CHECK(previous > 1e6);  // nanometers, at theta_c + 1e-12

    stack.theta_incidence = theta_c;
    CHECK_THROWS_AS(penetration_depth(stack, 1.0), singularity_error);
    stack.theta_incidence = theta_c - 0.05;
    CHECK_THROWS_AS(penetration_depth(stack, 1.0), singularity_error);
}

TEST_CASE("penetration depth is strictly decreasing in the incidence angle") {
    OpticalStack stack = reference_stack();
    const double theta_c = critical_angle(stack.n_incident, stack.n_gap);
    const double lo = theta_c + 1e-6;
    const double hi = pi / 2.0;
    double previous = 0.0;
    for (int k = 0; k < 200; ++k) {
        stack.theta_incidence = lo + (hi - lo) * k / 199.0;
        const double xi = penetration_depth(stack, stack.n_gap);
        if (k > 0)
            CHECK(xi < previous);
        previous = xi;
    }
}

TEST_CASE("the two decay-length forms agree on a random grid") {
    Rng rng = make_rng(12);
    for (int i = 0; i < 10000; ++i) {
        OpticalStack stack;
        stack.n_incident = uniform_in(rng, 1.1, 2.5);
        const double n_outer = stack.n_incident * uniform_in(rng, 0.2, 0.95);
        const double theta_c = critical_angle(stack.n_incident, n_outer);
        stack.theta_incidence = theta_c + (pi / 2.0 - theta_c) * uniform_in(rng, 0.01, 1.0);
        stack.wavelength_incident = uniform_in(rng, 200.0, 2000.0);
        const double direct = penetration_depth(stack, n_outer);
        const double alt = penetration_depth_alt(stack, n_outer);
        CHECK(std::abs(direct - alt) <= 1e-12 * direct);
    }
}

TEST_CASE("evanescent amplitude follows the exponential tail") {
    CHECK(evanescent_amplitude(0.0, 123.0) == 1.0);
    CHECK(evanescent_amplitude(80.0, 80.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(evanescent_amplitude(800.0, 80.0) == doctest::Approx(4.5399929762484854e-05).epsilon(1e-12));
    CHECK_THROWS_AS(evanescent_amplitude(-1.0, 80.0), validation_error);
    CHECK_THROWS_AS(evanescent_amplitude(1.0, 0.0), validation_error);
}

TEST_CASE("zero gap sends every photon to the object") {
    OpticalStack stack = reference_stack();
    stack.gap_distance = 0.0;
    const auto split = split_amplitudes(stack);
    CHECK(split.b_tunnel == 1.0);
    CHECK(split.a_reflect == 0.0);
    const auto probs = detection_probabilities(split);
    CHECK(probs.p_absorb == 1.0);
    CHECK(probs.p_damage_free == 0.0);
}

TEST_CASE("a distant object leaves pure reflection") {
    OpticalStack stack = reference_stack();
    const double xi = penetration_depth(stack, stack.n_object);
    stack.gap_distance = 800.0 * xi;
    const auto split = split_amplitudes(stack);
    CHECK(split.b_tunnel == 0.0);
    CHECK(split.a_reflect == 1.0);
}

TEST_CASE("the damage-budget gap distance realizes b^2 = 1/101") {
    OpticalStack stack = reference_stack();
    const double xi = penetration_depth(stack, stack.n_object);
    stack.gap_distance = xi * std::log(101.0) / 2.0;  // 2.3076 xi
    const auto split = split_amplitudes(stack);
    CHECK(split.b_tunnel * split.b_tunnel == doctest::Approx(1.0 / 101.0).epsilon(1e-12));

    const auto probs = detection_probabilities(split);
    CHECK(probs.p_absorb == doctest::Approx(1.0 / 101.0).epsilon(1e-12));
    CHECK(probs.p_damage_free == doctest::Approx(100.0 / 101.0).epsilon(1e-12));
}

TEST_CASE("detection probabilities of a symmetric split") {
    const SplitAmplitudes split{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    const auto probs = detection_probabilities(split);
    CHECK(probs.p_absorb == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(probs.p_damage_free == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(probs.p_absorb + probs.p_damage_free == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("split amplitudes stay normalized over a random grid") {
    Rng rng = make_rng(13);
    for (int i = 0; i < 10000; ++i) {
        OpticalStack stack;
        stack.n_incident = uniform_in(rng, 1.1, 2.5);
        stack.n_gap = stack.n_incident * uniform_in(rng, 0.2, 0.9);
        stack.n_object = stack.n_incident * uniform_in(rng, 0.2, 0.95);
        const double theta_c =
            critical_angle(stack.n_incident, std::max(stack.n_gap, stack.n_object));
        stack.theta_incidence = theta_c + (pi / 2.0 - theta_c) * uniform_in(rng, 1e-4, 1.0);
        stack.wavelength_incident = uniform_in(rng, 200.0, 2000.0);
        const double xi = penetration_depth(stack, stack.n_object);
        stack.gap_distance = uniform_in(rng, 0.0, 10.0) * xi;

        const auto split = split_amplitudes(stack);
        const double norm = split.a_reflect * split.a_reflect + split.b_tunnel * split.b_tunnel;
        CHECK(std::abs(norm - 1.0) <= 1e-12);
        CHECK_NOTHROW(split.validate());
    }
}

TEST_CASE("log b is linear in the gap distance with slope -1/xi") {
    OpticalStack stack = reference_stack();
    const double xi = penetration_depth(stack, stack.n_object);

    auto log_b = [&](double d) {
        OpticalStack s = stack;
        s.gap_distance = d;
        return std::log(split_amplitudes(s).b_tunnel);
    };

    const double d0 = 0.7 * xi;
    const double slope = (log_b(d0 + 2.0 * xi) - log_b(d0)) / (2.0 * xi);
    CHECK(std::abs(slope + 1.0 / xi) <= 1e-9 * (1.0 / xi));

    // monotone decay
    CHECK(log_b(2.0 * xi) < log_b(1.0 * xi));
    CHECK(log_b(1.0 * xi) < log_b(0.5 * xi));
}

TEST_CASE("tunneling amplitude strictly decreases with distance") {
    Rng rng = make_rng(14);
    OpticalStack stack = reference_stack();
    const double xi = penetration_depth(stack, stack.n_object);
    for (int i = 0; i < 500; ++i) {
        const double d1 = uniform_in(rng, 0.0, 20.0) * xi;
        const double d2 = d1 + uniform_in(rng, 0.01, 10.0) * xi;
        OpticalStack near = stack;
        near.gap_distance = d1;
        OpticalStack far = stack;
        far.gap_distance = d2;
        const double b_near = split_amplitudes(near).b_tunnel;
        const double b_far = split_amplitudes(far).b_tunnel;
        if (b_near > 0.0)
            CHECK(b_far < b_near);
    }
}

TEST_CASE("the tunnelling decay length can follow the gap index instead") {
    OpticalStack stack = reference_stack();
    const auto by_object = split_amplitudes(stack, TunnelingIndex::Object);
    const auto by_gap = split_amplitudes(stack, TunnelingIndex::Gap);
    const auto by_default = split_amplitudes(stack);

    CHECK(by_default.b_tunnel == by_object.b_tunnel);
    CHECK(by_object.b_tunnel != by_gap.b_tunnel);

    const double xi_gap = penetration_depth(stack, stack.n_gap);
    CHECK(by_gap.b_tunnel == doctest::Approx(std::exp(-stack.gap_distance / xi_gap)).epsilon(1e-14));
    CHECK(tunneling_index_value(stack, TunnelingIndex::Object) == stack.n_object);
    CHECK(tunneling_index_value(stack, TunnelingIndex::Gap) == stack.n_gap);
}

TEST_CASE("vacuum wavelength conversion is explicit") {
    CHECK(in_medium_wavelength(750.0, 1.5) == doctest::Approx(500.0).epsilon(1e-15));
    CHECK_THROWS_AS(in_medium_wavelength(0.0, 1.5), validation_error);
    CHECK_THROWS_AS(in_medium_wavelength(500.0, -1.0), validation_error);
}

TEST_CASE("stack validation names the violated invariant") {
    OpticalStack stack = reference_stack();
    CHECK_NOTHROW(stack.validate());

    stack.theta_incidence = 0.5;  // below asin(1/1.5) = 0.7297
    CHECK_THROWS_WITH_AS(stack.validate(), doctest::Contains("critical angle"), validation_error);

    stack = reference_stack();
    stack.n_gap = 1.6;
    CHECK_THROWS_AS(stack.validate(), validation_error);

    stack = reference_stack();
    stack.n_object = stack.n_gap;
    CHECK_THROWS_AS(stack.validate(), validation_error);

    stack = reference_stack();
    stack.wavelength_incident = -500.0;
    CHECK_THROWS_AS(stack.validate(), validation_error);

    stack = reference_stack();
    stack.gap_distance = -1.0;
    CHECK_THROWS_AS(stack.validate(), validation_error);

    stack = reference_stack();
    stack.theta_incidence = pi / 2.0;  // configured stacks stay strictly inside
    CHECK_THROWS_AS(stack.validate(), validation_error);
}

TEST_CASE("split amplitudes validation flags broken normalization") {
    SplitAmplitudes bad{0.9, 0.9};
    CHECK_THROWS_AS(bad.validate(), validation_error);
    SplitAmplitudes negative{-0.1, 0.9};
    CHECK_THROWS_AS(negative.validate(), validation_error);
}
