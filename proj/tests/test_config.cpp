#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "lrfpp/config.hpp"
#include "lrfpp/errors.hpp"

using namespace lrfpp;

namespace {

const char* kSampleConfig = R"(
# growth campaign on the plane
[kernel]
d = 2
alpha = 3.5
gamma = 1.0
slowvary = unit

[run]
mode = dispersal
seed = 424242
replicas = 8
cadence = 1.25
out = runs/demo
accelerate = auto
snapshot = auto

[stop]
max_time = 24
max_volume = 1000000
)";

}  // namespace

TEST_CASE("plain-text configs parse with sections, comments, and defaults") {
    const RunConfig config = parse_config_text(kSampleConfig);
    CHECK(config.kernel.d == 2);
    CHECK(config.kernel.alpha == 3.5);
    CHECK(config.kernel.slowvary == SlowVary::Unit);
    CHECK(config.mode == RunMode::Dispersal);
    CHECK(config.seed == 424242);
    CHECK(config.replicas == 8);
    CHECK(config.cadence == 1.25);
    CHECK(config.out_dir == "runs/demo");
    CHECK(config.accelerate);
    REQUIRE(config.stop.max_time.has_value());
    CHECK(*config.stop.max_time == 24.0);
    REQUIRE(config.stop.max_volume.has_value());
    CHECK(*config.stop.max_volume == 1000000);
    CHECK_FALSE(config.stop.max_diameter.has_value());
    CHECK_FALSE(config.stop.target_site.has_value());
}

TEST_CASE("oracle configs parse probes and enforce the box") {
    const RunConfig config = parse_config_text(R"(
[kernel]
d = 1
alpha = 4

[run]
mode = oracle
seed = 7

[stop]
max_volume = 1000

[oracle]
box_radius = 64
probes = 4; 8; 16
replicas = 2000
)");
    CHECK(config.mode == RunMode::Oracle);
    REQUIRE(config.oracle.probes.size() == 3);
    CHECK(config.oracle.probes[0] == Site{4});
    CHECK(config.oracle.probes[2] == Site{16});
    CHECK(config.oracle.box_radius == 64);
    CHECK(config.oracle.replicas == 2000);

    CHECK_THROWS_AS(parse_config_text(R"(
[kernel]
d = 1
alpha = 4
[run]
mode = oracle
[oracle]
box_radius = 8
probes = 16
)"),
                    DomainError);  // probe outside the box
}

TEST_CASE("log-power kernels and site-valued stops") {
    const RunConfig config = parse_config_text(R"(
[kernel]
d = 2
alpha = 2.0
slowvary = logpower 3.5

[stop]
target = 3, -2
)");
    CHECK(config.kernel.slowvary == SlowVary::LogPower);
    CHECK(config.kernel.logpower_p == 3.5);
    REQUIRE(config.stop.target_site.has_value());
    CHECK(*config.stop.target_site == Site{3, -2});
}

TEST_CASE("config rejections: unknown keys, malformed lines, bad values") {
    CHECK_THROWS_AS(parse_config_text("[kernel]\nd = 1\nalpha = 3\nfoo = 1\n"), DomainError);
    CHECK_THROWS_AS(parse_config_text("[mystery]\nx = 1\n"), DomainError);
    CHECK_THROWS_AS(parse_config_text("[kernel]\nd 1\n"), DomainError);
    CHECK_THROWS_AS(parse_config_text("[kernel]\nd = one\n"), DomainError);
    CHECK_THROWS_AS(parse_config_text("[run]\nmode = warp\n"), DomainError);
    CHECK_THROWS_AS(parse_config_text("[kernel]\nd = 1\nalpha = 3\n[run]\ncadence = 0.5\n"
                                      "[stop]\nmax_volume = 10\n"),
                    DomainError);
    // Dispersal with no stop rule can never terminate.
    CHECK_THROWS_AS(parse_config_text("[kernel]\nd = 1\nalpha = 3\n"), DomainError);
}

TEST_CASE("JSON round trip is lossless, including awkward doubles") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 50; ++trial) {
        RunConfig config;
        config.kernel.d = 1 + static_cast<int>(gen() % 3);
        // Awkward mantissas: derived from random bits, not round decimals.
        config.kernel.alpha =
            config.kernel.d + 0.1 + static_cast<double>(gen() % 100000) / 31013.0;
        config.kernel.gamma = 1.0 + static_cast<double>(gen() % 1000) / 7777.0;
        if (gen() % 2) {
            config.kernel.slowvary = SlowVary::LogPower;
            config.kernel.logpower_p = 1.0 + static_cast<double>(gen() % 1000) / 999.0;
        }
        config.seed = gen();
        config.replicas = 1 + static_cast<int>(gen() % 50);
        config.cadence = 1.0 + static_cast<double>(gen() % 1000 + 1) / 757.0;
        config.out_dir = "runs/trial_" + std::to_string(trial);
        config.accelerate = gen() % 2;
        config.snapshot = (trial % 3 == 0) ? "all" : "auto";
        config.stop.max_time = std::exp(static_cast<double>(gen() % 601) / 100.0 - 3.0);
        if (gen() % 2) config.stop.max_volume = gen() % 1000000 + 1;
        if (gen() % 3 == 0) config.stop.max_diameter = static_cast<std::int64_t>(gen() % 4096 + 1);
        if (gen() % 4 == 0) {
            std::vector<Coord> c(static_cast<std::size_t>(config.kernel.d));
            for (auto& v : c) v = static_cast<Coord>(gen() % 65) - 32;
            if (Site(c).l1() > 0) config.stop.target_site = Site(c);
        }
        config.validate();

        const RunConfig back = config_from_json(config_to_json(config));
        CHECK(back.kernel.d == config.kernel.d);
        CHECK(back.kernel.alpha == config.kernel.alpha);
        CHECK(back.kernel.gamma == config.kernel.gamma);
        CHECK(back.kernel.slowvary == config.kernel.slowvary);
        CHECK(back.kernel.logpower_p == config.kernel.logpower_p);
        CHECK(back.mode == config.mode);
        CHECK(back.seed == config.seed);
        CHECK(back.replicas == config.replicas);
        CHECK(back.cadence == config.cadence);
        CHECK(back.out_dir == config.out_dir);
        CHECK(back.accelerate == config.accelerate);
        CHECK(back.snapshot == config.snapshot);
        CHECK(back.stop.max_time == config.stop.max_time);
        CHECK(back.stop.max_volume == config.stop.max_volume);
        CHECK(back.stop.max_diameter == config.stop.max_diameter);
        CHECK(back.stop.target_site == config.stop.target_site);
        // And the re-serialization is byte-identical.
        CHECK(config_to_json(back) == config_to_json(config));
    }
}

TEST_CASE("oracle configs round-trip probes through JSON") {
    RunConfig config;
    config.kernel.d = 2;
    config.kernel.alpha = 4.0;
    config.mode = RunMode::Oracle;
    config.oracle.box_radius = 32;
    config.oracle.probes = {Site{4, 0}, Site{-3, 5}};
    config.oracle.replicas = 500;
    config.validate();
    const RunConfig back = config_from_json(config_to_json(config));
    REQUIRE(back.oracle.probes.size() == 2);
    CHECK(back.oracle.probes[1] == Site{-3, 5});
    CHECK(back.oracle.box_radius == 32);
    CHECK(back.oracle.replicas == 500);
}

TEST_CASE("load_config sniffs JSON manifests and plain text") {
    const RunConfig config = parse_config_text(kSampleConfig);
    const std::string dir = "/tmp/lrfpp_test_config";
    std::filesystem::create_directories(dir);

    {
        std::ofstream out(dir + "/config.ini");
        out << kSampleConfig;
    }
    {
        std::ofstream out(dir + "/manifest.json");
        out << config_to_json(config);
    }
    const RunConfig from_ini = load_config(dir + "/config.ini");
    const RunConfig from_json = load_config(dir + "/manifest.json");
    CHECK(config_to_json(from_ini) == config_to_json(from_json));
    CHECK_THROWS_AS(load_config(dir + "/does_not_exist.ini"), DomainError);
}
