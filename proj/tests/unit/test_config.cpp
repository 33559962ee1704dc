#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "ddsim/config.hpp"
#include "ddsim/io.hpp"

using namespace ddsim;

namespace {

const char* kSample = R"(# example run
[sequence]
kind = xy8s
tau_us = 100
init = perpendicular

[pulse]
mode = delta
epsilon = 0.01

[noise]
preset = calibrated

[run]
duration_ms = 500
ensemble = 50
dt_ms = 5
seed = 42

[output]
dir = out
)";

}  // namespace

TEST_SUITE("config") {

TEST_CASE("parses a full config with preset") {
    const RunConfig c = parse_config_text(kSample);
    CHECK(c.experiment.kind == SequenceKind::xy8s);
    CHECK(c.experiment.tau == doctest::Approx(100e-6));
    CHECK(c.experiment.init == InitialVariant::perpendicular);
    CHECK(c.experiment.pulse.eps == doctest::Approx(0.01));
    CHECK(c.experiment.noise.sigma_ou == doctest::Approx(32.0));
    CHECK(c.experiment.noise.t2_irr == doctest::Approx(0.276));
    CHECK(c.experiment.noise.seed == 42);
    CHECK(c.experiment.ensemble == 50);
}

TEST_CASE("explicit noise keys override the preset") {
    std::string text = kSample;
    text += "\n[noise]\nsigma_ou_rad_s = 0\nt2_irr_ms = inf\n";
    const RunConfig c = parse_config_text(text);
    CHECK(c.experiment.noise.sigma_ou == 0.0);
    CHECK(std::isinf(c.experiment.noise.t2_irr));
    CHECK(c.experiment.noise.sigma_static > 0);  // still from the preset
}

TEST_CASE("init = default resolves per sequence") {
    RunConfig c = parse_config_text("[sequence]\nkind = cpmg\ntau_us = 1000\n[run]\nensemble = 1\n");
    CHECK(c.experiment.init == InitialVariant::parallel);
    c = parse_config_text("[sequence]\nkind = cp\ntau_us = 1000\n[run]\nensemble = 1\n");
    CHECK(c.experiment.init == InitialVariant::perpendicular);
}

TEST_CASE("field-level errors") {
    CHECK_THROWS_WITH_AS(parse_config_text("[sequence]\nkind = udd\n"),
                         doctest::Contains("[sequence] kind"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[sequence]\nbogus_key = 3\n"),
                         doctest::Contains("unknown key"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[bogus]\nx = 1\n"), doctest::Contains("unknown section"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[run]\nensemble = many\n"),
                         doctest::Contains("[run] ensemble"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[noise]\ntau_corr_ms = -5\n[sequence]\nkind = cpmg\ntau_us = 1000\n"),
                         doctest::Contains("tau_corr"), ConfigError);
    // dt > tau_corr/10 violates the slow-noise resolution invariant
    CHECK_THROWS_AS(parse_config_text("[sequence]\nkind = cpmg\ntau_us = 1000\n[run]\ndt_ms = 100\n"),
                    ConfigError);
}

TEST_CASE("render/parse round trip is exact") {
    const RunConfig a = parse_config_text(kSample);
    const std::string text = render_config(a);
    const RunConfig b = parse_config_text(text);
    CHECK(render_config(b) == text);
    CHECK(a.experiment.tau == b.experiment.tau);
    CHECK(a.experiment.noise.sigma_static == b.experiment.noise.sigma_static);
    CHECK(a.experiment.noise.seed == b.experiment.noise.seed);
}

TEST_CASE("series filenames follow <label>_tau<us>.csv") {
    RunConfig c = parse_config_text(kSample);
    CHECK(series_filename(c) == "xy8s_tau100.csv");
    c.experiment.kind = SequenceKind::cpmg;
    c.experiment.tau = 16e-3;
    CHECK(series_filename(c) == "cpmg_tau16000.csv");
    c.experiment.kind = SequenceKind::hahn;
    CHECK(series_filename(c) == "hahn.csv");
    c.output.label = "demo";
    c.experiment.kind = SequenceKind::xy4a;
    c.experiment.tau = 137.5e-6;
    CHECK(series_filename(c) == "demo_xy4a_tau137.5.csv");
}

TEST_CASE("echo series CSV round trip") {
    EchoSeries s;
    s.times = {0, 1e-3, 2e-3};
    s.amplitudes = {1.0, 0.987654321012345678, -0.25};
    s.stderrs = {0, 1.5e-4, 2e-4};
    const std::string csv = echo_series_csv(s);
    const auto dir = std::filesystem::temp_directory_path() / "ddsim_test_io";
    const auto path = dir / "series.csv";
    atomic_write_file(path, csv);
    const EchoSeries r = read_echo_series_csv(path.string());
    CHECK(r.times == s.times);
    CHECK(r.amplitudes == s.amplitudes);
    CHECK(r.stderrs == s.stderrs);
    std::filesystem::remove_all(dir);
}

TEST_CASE("manifest embeds a replayable config snapshot") {
    const RunConfig a = parse_config_text(kSample);
    const std::string j = manifest_json("simulate", a, {"xy8s_tau100.csv"}, 1.5);
    const auto dir = std::filesystem::temp_directory_path() / "ddsim_test_manifest";
    const auto path = dir / "m.json";
    atomic_write_file(path, j);
    const RunConfig b = config_from_manifest(path.string());
    CHECK(render_config(a) == render_config(b));
    std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
