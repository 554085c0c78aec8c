#include "qint/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace qint::cli {

namespace {

using nlohmann::json;

// Line/column of a byte offset, for parse diagnostics.
std::pair<std::size_t, std::size_t> locate(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

class SectionReader {
public:
    SectionReader(const json& node, std::string path, std::initializer_list<const char*> allowed)
        : node_(node), path_(std::move(path)) {
        if (!node_.is_object())
            throw validation_error("config: " + (path_.empty() ? "the document root" : "'" + path_ + "'") +
                                   " must be an object of key-value pairs");
        // flag typos before anything else; a misspelled key usually also
        // surfaces as a missing required one, and the typo is the real story
        for (const auto& [key, value] : node_.items()) {
            (void)value;
            bool known = false;
            for (const char* candidate : allowed)
                known = known || key == candidate;
            if (!known)
                throw validation_error("config: unknown key '" + where(key) + "'");
        }
    }

    bool has(const std::string& key) const { return node_.contains(key); }

    double number(const std::string& key) {
        const json& v = take(key);
        if (!v.is_number())
            throw validation_error("config: '" + where(key) + "' must be a number");
        return v.get<double>();
    }

    double number_or(const std::string& key, double fallback) {
        return has(key) ? number(key) : fallback;
    }

    bool flag_or(const std::string& key, bool fallback) {
        if (!has(key))
            return fallback;
        const json& v = take(key);
        if (!v.is_boolean())
            throw validation_error("config: '" + where(key) + "' must be true or false");
        return v.get<bool>();
    }

    std::string word_or(const std::string& key, const std::string& fallback) {
        if (!has(key))
            return fallback;
        const json& v = take(key);
        if (!v.is_string())
            throw validation_error("config: '" + where(key) + "' must be a string");
        return v.get<std::string>();
    }

    std::uint64_t unsigned_or(const std::string& key, std::uint64_t fallback) {
        if (!has(key))
            return fallback;
        const json& v = take(key);
        if (!v.is_number_unsigned())
            throw validation_error("config: '" + where(key) + "' must be a nonnegative integer");
        return v.get<std::uint64_t>();
    }

    const json* object_or_null(const std::string& key) {
        if (!has(key))
            return nullptr;
        return &take(key);
    }

private:
    const json& take(const std::string& key) { return node_.at(key); }

    std::string where(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json& node_;
    std::string path_;
};

optics::TunnelingIndex parse_tunneling_index(const std::string& word) {
    if (word == "object")
        return optics::TunnelingIndex::Object;
    if (word == "gap")
        return optics::TunnelingIndex::Gap;
    throw validation_error("config: optics.tunneling_index must be \"object\" or \"gap\", got \"" + word + "\"");
}

photon::CountDistribution parse_distribution(const std::string& word) {
    if (word == "poissonian")
        return photon::CountDistribution::Poissonian;
    if (word == "sub_poissonian_binomial")
        return photon::CountDistribution::SubPoissonianBinomial;
    throw validation_error(
        "config: source.distribution must be \"poissonian\" or \"sub_poissonian_binomial\", got \"" + word + "\"");
}

sim::ObjectKind parse_object_kind(const std::string& word) {
    if (word == "ultra_sensitive_bomb")
        return sim::ObjectKind::UltraSensitiveBomb;
    if (word == "passive_absorber")
        return sim::ObjectKind::PassiveAbsorber;
    throw validation_error(
        "config: trial.object_kind must be \"ultra_sensitive_bomb\" or \"passive_absorber\", got \"" + word + "\"");
}

stats::TestSide parse_side(const std::string& word) {
    if (word == "two_sided")
        return stats::TestSide::TwoSided;
    if (word == "one_sided")
        return stats::TestSide::OneSided;
    throw validation_error("config: stats.test_side must be \"two_sided\" or \"one_sided\", got \"" + word + "\"");
}

void require(const SectionReader& section, const std::string& key, const std::string& path) {
    if (!section.has(key))
        throw validation_error("config: missing required key '" + path + "." + key + "'");
}

std::string canonicalize(const ResolvedConfig& config) {
    const auto& t = config.trial;
    json doc;
    doc["optics"] = {
        {"n_i", t.stack.n_incident},
        {"n_r", t.stack.n_gap},
        {"n_t", t.stack.n_object},
        {"theta_i_rad", t.stack.theta_incidence},
        {"lambda_i_nm", t.stack.wavelength_incident},
        {"d_nm", t.stack.gap_distance},
        {"tunneling_index", t.tunneling_index == optics::TunnelingIndex::Object ? "object" : "gap"},
    };
    doc["source"] = {
        {"n0_rate_hz", t.source.mean_rate},
        {"fano_factor", t.source.fano_factor},
        {"distribution",
         t.source.distribution == photon::CountDistribution::Poissonian ? "poissonian"
                                                                        : "sub_poissonian_binomial"},
    };
    doc["background"] = {
        {"pump_background_rate_hz", t.background.pump_background_rate},
        {"filter_transmission_signal", t.background.filter_transmission_signal},
        {"filter_rejection_pump", t.background.filter_rejection_pump},
        {"coincidence_window_s", t.background.coincidence_window},
        {"dark_rate_s_hz", t.background.dark_rate_s},
        {"dark_rate_i_hz", t.background.dark_rate_i},
        {"efficiency_s", t.background.efficiency_s},
        {"efficiency_i", t.background.efficiency_i},
    };
    doc["trial"] = {
        {"duration_s", t.duration},
        {"object_present", t.object_present},
        {"object_kind",
         t.object_kind == sim::ObjectKind::UltraSensitiveBomb ? "ultra_sensitive_bomb" : "passive_absorber"},
        {"stop_on_trigger", t.stop_on_trigger},
    };
    doc["stats"] = {
        {"threshold", config.stats.threshold},
        {"confidence", config.stats.confidence},
        {"test_side", config.stats.side == stats::TestSide::TwoSided ? "two_sided" : "one_sided"},
        {"damage_ratio", config.stats.damage_ratio},
    };
    doc["seed"] = config.seed;
    return doc.dump();
}

} // namespace

ResolvedConfig parse_config_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        const auto [line, column] = locate(text, err.byte > 0 ? err.byte - 1 : 0);
        throw parse_error(origin + ":" + std::to_string(line) + ":" + std::to_string(column) +
                          ": " + err.what());
    } catch (const json::exception& err) {
        // e.g. a numeric literal too large for a double
        throw parse_error(origin + ": " + err.what());
    }

    ResolvedConfig config;
    SectionReader root(doc, "", {"optics", "source", "background", "trial", "stats", "seed"});

    const json* optics_node = root.object_or_null("optics");
    if (optics_node == nullptr)
        throw validation_error("config: missing required section 'optics'");
    {
        SectionReader optics(*optics_node, "optics",
                             {"n_i", "n_r", "n_t", "theta_i_rad", "lambda_i_nm", "d_nm",
                              "tunneling_index"});
        for (const char* key : {"n_i", "n_r", "n_t", "theta_i_rad", "lambda_i_nm", "d_nm"})
            require(optics, key, "optics");
        config.trial.stack.n_incident = optics.number("n_i");
        config.trial.stack.n_gap = optics.number("n_r");
        config.trial.stack.n_object = optics.number("n_t");
        config.trial.stack.theta_incidence = optics.number("theta_i_rad");
        config.trial.stack.wavelength_incident = optics.number("lambda_i_nm");
        config.trial.stack.gap_distance = optics.number("d_nm");
        config.trial.tunneling_index = parse_tunneling_index(optics.word_or("tunneling_index", "object"));
    }

    const json* source_node = root.object_or_null("source");
    if (source_node == nullptr)
        throw validation_error("config: missing required section 'source'");
    {
        SectionReader source(*source_node, "source", {"n0_rate_hz", "fano_factor", "distribution"});
        require(source, "n0_rate_hz", "source");
        config.trial.source.mean_rate = source.number("n0_rate_hz");
        config.trial.source.fano_factor = source.number_or("fano_factor", 1.0);
        config.trial.source.distribution = parse_distribution(source.word_or("distribution", "poissonian"));
    }

    if (const json* background_node = root.object_or_null("background")) {
        SectionReader background(*background_node, "background",
                                 {"pump_background_rate_hz", "filter_transmission_signal",
                                  "filter_rejection_pump", "coincidence_window_s", "dark_rate_s_hz",
                                  "dark_rate_i_hz", "efficiency_s", "efficiency_i"});
        auto& bg = config.trial.background;
        bg.pump_background_rate = background.number_or("pump_background_rate_hz", bg.pump_background_rate);
        bg.filter_transmission_signal =
            background.number_or("filter_transmission_signal", bg.filter_transmission_signal);
        bg.filter_rejection_pump = background.number_or("filter_rejection_pump", bg.filter_rejection_pump);
        bg.coincidence_window = background.number_or("coincidence_window_s", bg.coincidence_window);
        bg.dark_rate_s = background.number_or("dark_rate_s_hz", bg.dark_rate_s);
        bg.dark_rate_i = background.number_or("dark_rate_i_hz", bg.dark_rate_i);
        bg.efficiency_s = background.number_or("efficiency_s", bg.efficiency_s);
        bg.efficiency_i = background.number_or("efficiency_i", bg.efficiency_i);
    }

    const json* trial_node = root.object_or_null("trial");
    if (trial_node == nullptr)
        throw validation_error("config: missing required section 'trial'");
    {
        SectionReader trial(*trial_node, "trial",
                            {"duration_s", "object_present", "object_kind", "stop_on_trigger"});
        require(trial, "duration_s", "trial");
        config.trial.duration = trial.number("duration_s");
        config.trial.object_present = trial.flag_or("object_present", true);
        config.trial.object_kind = parse_object_kind(trial.word_or("object_kind", "ultra_sensitive_bomb"));
        config.trial.stop_on_trigger = trial.flag_or("stop_on_trigger", false);
    }

    if (const json* stats_node = root.object_or_null("stats")) {
        SectionReader stats_section(*stats_node, "stats",
                                    {"threshold", "confidence", "test_side", "damage_ratio"});
        config.stats.threshold = stats_section.number_or("threshold", config.stats.threshold);
        config.stats.confidence = stats_section.number_or("confidence", config.stats.confidence);
        config.stats.side = parse_side(stats_section.word_or("test_side", "two_sided"));
        config.stats.damage_ratio = stats_section.number_or("damage_ratio", config.stats.damage_ratio);
    }

    config.seed = root.unsigned_or("seed", config.seed);

    config.trial.validate();
    if (!(config.stats.threshold > 0.0))
        throw validation_error("config: stats.threshold must be positive");
    if (!(config.stats.confidence > 0.0 && config.stats.confidence < 1.0))
        throw validation_error("config: stats.confidence must lie in (0, 1)");
    if (!(config.stats.damage_ratio > 0.0))
        throw validation_error("config: stats.damage_ratio must be positive");

    config.canonical_text = canonicalize(config);
    return config;
}

ResolvedConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw parse_error("config: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

ResolvedConfig default_config() {
    ResolvedConfig config;
    config.trial.validate();
    config.canonical_text = canonicalize(config);
    return config;
}

std::string config_digest(const ResolvedConfig& config) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const unsigned char c : config.canonical_text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buffer[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buffer[i] = digits[hash & 0xf];
        hash >>= 4;
    }
    buffer[16] = '\0';
    return std::string(buffer, 16);
}

} // namespace qint::cli
