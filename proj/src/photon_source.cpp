#include "qint/photon_source.hpp"

#include <cmath>

#include "qint/errors.hpp"

namespace qint::photon {

void SourceModel::validate() const {
    if (!(mean_rate > 0.0) || !std::isfinite(mean_rate))
        throw validation_error("SourceModel: mean_rate must be positive, got " + std::to_string(mean_rate));
    if (!(fano_factor > 0.0 && fano_factor <= 1.0))
        throw validation_error("SourceModel: fano_factor must lie in (0, 1], got " + std::to_string(fano_factor));
    if (distribution == CountDistribution::Poissonian && fano_factor != 1.0)
        throw validation_error("SourceModel: a Poissonian source forces fano_factor = 1");
    if (distribution == CountDistribution::SubPoissonianBinomial && fano_factor == 1.0)
        throw validation_error(
            "SourceModel: the sub-Poissonian binomial law needs fano_factor < 1 (success probability 1 - eta "
            "would vanish)");
}

void BackgroundModel::validate() const {
    auto probability = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0))
            throw validation_error(std::string("BackgroundModel: ") + name + " must lie in [0, 1], got " +
                                   std::to_string(v));
    };
    auto rate = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw validation_error(std::string("BackgroundModel: ") + name + " must be nonnegative, got " +
                                   std::to_string(v));
    };
    rate(pump_background_rate, "pump_background_rate");
    probability(filter_transmission_signal, "filter_transmission_signal");
    probability(filter_rejection_pump, "filter_rejection_pump");
    if (!(coincidence_window > 0.0))
        throw validation_error("BackgroundModel: coincidence_window must be positive, got " +
                               std::to_string(coincidence_window));
    rate(dark_rate_s, "dark_rate_s");
    rate(dark_rate_i, "dark_rate_i");
    probability(efficiency_s, "efficiency_s");
    probability(efficiency_i, "efficiency_i");
}

bool BackgroundModel::ideal() const {
    return pump_background_rate == 0.0 && filter_transmission_signal == 1.0 &&
           filter_rejection_pump == 1.0 && dark_rate_s == 0.0 && dark_rate_i == 0.0 &&
           efficiency_s == 1.0 && efficiency_i == 1.0;
}

BinomialShape binomial_shape(double mean_count, double fano_factor) {
    if (!(mean_count >= 0.0))
        throw validation_error("binomial_shape: mean must be nonnegative");
    if (!(fano_factor > 0.0 && fano_factor < 1.0))
        throw validation_error("binomial_shape: fano_factor must lie in (0, 1)");
    const double p = 1.0 - fano_factor;
    const auto trials = static_cast<std::uint64_t>(std::llround(mean_count / p));
    return BinomialShape{trials, p, static_cast<double>(trials) * p};
}

std::uint64_t sample_herald_count(const SourceModel& source, double duration, Rng& rng) {
    source.validate();
    if (!(duration > 0.0))
        throw validation_error("sample_herald_count: duration must be positive, got " + std::to_string(duration));
    const double mean = source.mean_rate * duration;
    if (source.distribution == CountDistribution::Poissonian)
        return sample_poisson(rng, mean);
    const BinomialShape shape = binomial_shape(mean, source.fano_factor);
    return sample_binomial(rng, shape.trials, shape.success_prob);
}

double accidental_rate(const SourceModel& source, const BackgroundModel& bg) {
    const double stray_s = bg.dark_rate_s + bg.pump_background_rate * (1.0 - bg.filter_rejection_pump);
    const double herald_singles = source.mean_rate * bg.efficiency_i + bg.dark_rate_i;
    return stray_s * bg.coincidence_window * herald_singles;
}

double effective_detected_rate(const SourceModel& source, const BackgroundModel& bg,
                               double p_reflect) {
    source.validate();
    bg.validate();
    if (!(p_reflect >= 0.0 && p_reflect <= 1.0))
        throw validation_error("effective_detected_rate: p_reflect must lie in [0, 1], got " +
                               std::to_string(p_reflect));
    return p_reflect * source.mean_rate * bg.efficiency_s * bg.filter_transmission_signal +
           accidental_rate(source, bg);
}

} // namespace qint::photon
