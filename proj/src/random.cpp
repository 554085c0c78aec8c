#include "qint/random.hpp"

#include <cmath>

#include "qint/errors.hpp"

namespace qint {

namespace {

std::uint64_t poisson_multiplication(Rng& rng, double mean) {
    const double limit = std::exp(-mean);
    std::uint64_t count = 0;
    double product = uniform_unit(rng);
    while (product > limit) {
        ++count;
        product *= uniform_unit(rng);
    }
    return count;
}

// Hormann's transformed-rejection sampler (PTRS), valid for mean >= 10.
std::uint64_t poisson_ptrs(Rng& rng, double mean) {
    const double log_mean = std::log(mean);
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        const double u = uniform_unit(rng) - 0.5;
        const double v = uniform_unit(rng);
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r)
            return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us))
            continue;
        const double k = kf;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            k * log_mean - mean - std::lgamma(k + 1.0))
            return static_cast<std::uint64_t>(kf);
    }
}

} // namespace

std::uint64_t sample_poisson(Rng& rng, double mean) {
    if (!(mean >= 0.0))
        throw validation_error("sample_poisson: mean must be nonnegative");
    if (mean == 0.0)
        return 0;
    if (mean < 10.0)
        return poisson_multiplication(rng, mean);
    return poisson_ptrs(rng, mean);
}

std::uint64_t sample_binomial(Rng& rng, std::uint64_t trials, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw validation_error("sample_binomial: p must lie in [0, 1]");
    if (trials == 0 || p == 0.0)
        return 0;
    if (p == 1.0)
        return trials;

    const bool flipped = p > 0.5;
    const double q = flipped ? 1.0 - p : p;
    const double log_miss = std::log1p(-q);

    // Jump over the geometric run of failures before each success.
    std::uint64_t successes = 0;
    std::uint64_t consumed = 0;
    for (;;) {
        const double u = uniform_unit(rng);
        const double gap = std::floor(std::log1p(-u) / log_miss);
        if (gap >= static_cast<double>(trials - consumed))
            break;
        consumed += static_cast<std::uint64_t>(gap) + 1;
        ++successes;
        if (consumed >= trials)
            break;
    }
    return flipped ? trials - successes : successes;
}

} // namespace qint
