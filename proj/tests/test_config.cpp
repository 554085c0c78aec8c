#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "qint/config.hpp"
#include "qint/csv.hpp"

using namespace qint;
using namespace qint::cli;

namespace {

const char* minimal_config = R"({
  "optics": {"n_i": 1.5, "n_r": 1.0, "n_t": 1.5, "theta_i_rad": 1.2, "lambda_i_nm": 500, "d_nm": 1000},
  "source": {"n0_rate_hz": 672.43},
  "trial": {"duration_s": 0.15}
})";

} // namespace

TEST_CASE("a minimal config resolves with all defaults applied") {
    const ResolvedConfig config = parse_config_text(minimal_config, "minimal");

    CHECK(config.trial.stack.n_incident == 1.5);
    CHECK(config.trial.stack.n_gap == 1.0);
    CHECK(config.trial.stack.n_object == 1.5);
    CHECK(config.trial.stack.theta_incidence == 1.2);
    CHECK(config.trial.stack.wavelength_incident == 500.0);
    CHECK(config.trial.stack.gap_distance == 1000.0);
    CHECK(config.trial.source.mean_rate == 672.43);
    CHECK(config.trial.duration == 0.15);

    // defaults
    CHECK(config.trial.tunneling_index == optics::TunnelingIndex::Object);
    CHECK(config.trial.source.fano_factor == 1.0);
    CHECK(config.trial.source.distribution == photon::CountDistribution::Poissonian);
    CHECK(config.trial.background.ideal());
    CHECK(config.trial.object_present);
    CHECK(config.trial.object_kind == sim::ObjectKind::UltraSensitiveBomb);
    CHECK_FALSE(config.trial.stop_on_trigger);
    CHECK(config.stats.threshold == 2.58);
    CHECK(config.stats.confidence == 0.99);
    CHECK(config.stats.side == stats::TestSide::TwoSided);
    CHECK(config.stats.damage_ratio == 100.0);
    CHECK(config.seed == 42);
}

TEST_CASE("sub-critical incidence is rejected with the named invariant") {
    const std::string text = R"({
      "optics": {"n_i": 1.5, "n_r": 1.0, "n_t": 1.5, "theta_i_rad": 0.5, "lambda_i_nm": 500, "d_nm": 1000},
      "source": {"n0_rate_hz": 672.43},
      "trial": {"duration_s": 0.15}
    })";
    CHECK_THROWS_WITH_AS(parse_config_text(text, "cfg"), doctest::Contains("critical angle"),
                         validation_error);
}

TEST_CASE("unknown keys are hard errors") {
    const std::string text = R"({
      "optics": {"n_i": 1.5, "n_r": 1.0, "n_t": 1.5, "theta_i_rad": 1.2, "lamda_i_nm": 500, "d_nm": 1000},
      "source": {"n0_rate_hz": 672.43},
      "trial": {"duration_s": 0.15}
    })";
    CHECK_THROWS_WITH_AS(parse_config_text(text, "cfg"), doctest::Contains("lamda_i_nm"),
                         validation_error);

    const std::string stray_root = std::string(minimal_config);
    const std::string with_extra = stray_root.substr(0, stray_root.rfind('}')) + R"(, "notes": 1})";
    CHECK_THROWS_WITH_AS(parse_config_text(with_extra, "cfg"), doctest::Contains("notes"),
                         validation_error);
}

TEST_CASE("syntax errors carry line diagnostics") {
    const std::string text = "{\n  \"optics\": [,\n}";
    CHECK_THROWS_WITH_AS(parse_config_text(text, "broken.json"), doctest::Contains("broken.json:2"),
                         parse_error);
    CHECK_THROWS_AS(parse_config("/nonexistent/qint.json"), parse_error);

    // a numeric literal beyond double range is a parse problem, not a crash
    const std::string overflow = R"({
      "optics": {"n_i": 1e999, "n_r": 1.0, "n_t": 1.5, "theta_i_rad": 1.2, "lambda_i_nm": 500, "d_nm": 1000},
      "source": {"n0_rate_hz": 672.43},
      "trial": {"duration_s": 0.15}
    })";
    CHECK_THROWS_AS(parse_config_text(overflow, "cfg"), parse_error);

    CHECK_THROWS_AS(parse_config_text("[1, 2]", "cfg"), validation_error);
}

TEST_CASE("missing required keys are named") {
    const std::string text = R"({
      "optics": {"n_i": 1.5, "n_r": 1.0, "n_t": 1.5, "theta_i_rad": 1.2, "lambda_i_nm": 500, "d_nm": 1000},
      "source": {"n0_rate_hz": 672.43},
      "trial": {}
    })";
    CHECK_THROWS_WITH_AS(parse_config_text(text, "cfg"), doctest::Contains("trial.duration_s"),
                         validation_error);
    CHECK_THROWS_WITH_AS(parse_config_text("{}", "cfg"), doctest::Contains("optics"), validation_error);
}

TEST_CASE("distribution and fano factor must be consistent") {
    const std::string poissonian_with_fano = R"({
      "optics": {"n_i": 1.5, "n_r": 1.0, "n_t": 1.5, "theta_i_rad": 1.2, "lambda_i_nm": 500, "d_nm": 1000},
      "source": {"n0_rate_hz": 672.43, "fano_factor": 0.9},
      "trial": {"duration_s": 0.15}
    })";
    CHECK_THROWS_AS(parse_config_text(poissonian_with_fano, "cfg"), validation_error);

    const std::string binomial_ok = R"({
      "optics": {"n_i": 1.5, "n_r": 1.0, "n_t": 1.5, "theta_i_rad": 1.2, "lambda_i_nm": 500, "d_nm": 1000},
      "source": {"n0_rate_hz": 672.43, "fano_factor": 0.9, "distribution": "sub_poissonian_binomial"},
      "trial": {"duration_s": 0.15}
    })";
    const auto config = parse_config_text(binomial_ok, "cfg");
    CHECK(config.trial.source.distribution == photon::CountDistribution::SubPoissonianBinomial);
    CHECK(config.trial.source.fano_factor == 0.9);

    const std::string binomial_degenerate = R"({
      "optics": {"n_i": 1.5, "n_r": 1.0, "n_t": 1.5, "theta_i_rad": 1.2, "lambda_i_nm": 500, "d_nm": 1000},
      "source": {"n0_rate_hz": 672.43, "distribution": "sub_poissonian_binomial"},
      "trial": {"duration_s": 0.15}
    })";
    CHECK_THROWS_AS(parse_config_text(binomial_degenerate, "cfg"), validation_error);
}

TEST_CASE("the gap-index decay length is selectable") {
    const std::string text = R"({
      "optics": {"n_i": 1.5, "n_r": 1.0, "n_t": 1.5, "theta_i_rad": 1.2, "lambda_i_nm": 500, "d_nm": 1000,
                 "tunneling_index": "gap"},
      "source": {"n0_rate_hz": 672.43},
      "trial": {"duration_s": 0.15}
    })";
    CHECK(parse_config_text(text, "cfg").trial.tunneling_index == optics::TunnelingIndex::Gap);
}

TEST_CASE("enumerations reject unknown words") {
    const std::string bad_index = R"({
      "optics": {"n_i": 1.5, "n_r": 1.0, "n_t": 1.5, "theta_i_rad": 1.2, "lambda_i_nm": 500, "d_nm": 1000,
                 "tunneling_index": "surface"},
      "source": {"n0_rate_hz": 672.43},
      "trial": {"duration_s": 0.15}
    })";
    CHECK_THROWS_AS(parse_config_text(bad_index, "cfg"), validation_error);
}

TEST_CASE("seeds must be nonnegative integers") {
    const std::string negative = std::string(minimal_config).substr(0, std::string(minimal_config).rfind('}')) +
                                 R"(, "seed": -4})";
    CHECK_THROWS_AS(parse_config_text(negative, "cfg"), validation_error);

    const std::string explicit_seed =
        std::string(minimal_config).substr(0, std::string(minimal_config).rfind('}')) + R"(, "seed": 7})";
    CHECK(parse_config_text(explicit_seed, "cfg").seed == 7);
}

TEST_CASE("digests track the resolved content") {
    const auto one = parse_config_text(minimal_config, "a");
    const auto two = parse_config_text(minimal_config, "b");
    CHECK(config_digest(one) == config_digest(two));
    CHECK(config_digest(one).size() == 16);

    const std::string changed = R"({
      "optics": {"n_i": 1.5, "n_r": 1.0, "n_t": 1.5, "theta_i_rad": 1.2, "lambda_i_nm": 501, "d_nm": 1000},
      "source": {"n0_rate_hz": 672.43},
      "trial": {"duration_s": 0.15}
    })";
    CHECK(config_digest(one) != config_digest(parse_config_text(changed, "c")));
}

TEST_CASE("default config is valid and canonical") {
    const auto config = default_config();
    CHECK_NOTHROW(config.trial.validate());
    CHECK(!config.canonical_text.empty());
    CHECK(config.seed == 42);
}

TEST_CASE("csv numbers use nine significant digits and no grouping") {
    CHECK(format_number(672.43) == "672.43");
    CHECK(format_number(0.15020150796365422) == "0.150201508");
    CHECK(format_number(665.7722772277227) == "665.772277");
    CHECK(format_number(1000000.0) == "1000000");
    CHECK(format_number(-2.580256338482134) == "-2.58025634");
    CHECK(format_number(4.5399929762484854e-05) == "4.53999298e-05");
    CHECK(format_integer(67230) == "67230");
    CHECK(format_flag(true) == "true");
    CHECK(format_flag(false) == "false");
}

TEST_CASE("csv tables enforce a constant column count") {
    CsvTable table({"a", "b"});
    table.add_row({"1", "2"});
    CHECK(table.str() == "a,b\n1,2\n");
    CHECK_THROWS_AS(table.add_row({"only"}), validation_error);
    CHECK(table.columns() == 2);
}
