#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lrfpp/artifacts.hpp"
#include "lrfpp/campaign.hpp"
#include "lrfpp/errors.hpp"
#include "json.hpp"

using namespace lrfpp;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

RunConfig tiny_config(const std::string& out_dir) {
    RunConfig config;
    config.kernel.d = 2;
    config.kernel.alpha = 4.5;
    config.seed = 11;
    config.replicas = 3;
    config.cadence = 1.5;
    config.out_dir = out_dir;
    config.stop.max_volume = 500;
    config.validate();
    return config;
}

}  // namespace

TEST_CASE("format_double round-trips exactly and stays short") {
    for (double v : {0.0, 1.0, 24.0, 0.1, 1.0 / 3.0, 3.141592653589793,
                     1.2345678901234567e-12, 6.02e23, -17.25}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(24.0) == "24");
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("replica CSV: exact header and one data row per trace row") {
    RunTrace trace;
    trace.rows = {{0.0, 1, 0, 0, 0}, {1.5, 7, 3, 2, 4}};
    const std::string path = "/tmp/lrfpp_test_replica.csv";
    write_replica_csv(trace, path);
    const std::string text = slurp(path);
    CHECK(text == "t,volume,diameter,max_jump,thinned\n0,1,0,0,0\n1.5,7,3,2,4\n");
}

TEST_CASE("occupation dumps round-trip sites and times") {
    std::vector<GrowthState::Occupation> occ;
    occ.push_back({Site{0, 0}, 0.0, GrowthState::kNoParent});
    occ.push_back({Site{3, -2}, 0.75, 0});
    occ.push_back({Site{-1, 5}, 1.25, 1});
    const std::string path = "/tmp/lrfpp_test_occupation.csv";
    write_occupation_csv(occ, 2, path);
    const auto back = read_occupation_csv(path);
    REQUIRE(back.size() == 3);
    CHECK(back[0].first == Site{0, 0});
    CHECK(back[0].second == 0.0);
    CHECK(back[1].first == Site{3, -2});
    CHECK(back[1].second == 0.75);
    CHECK(back[2].first == Site{-1, 5});
    CHECK(back[2].second == 1.25);
}

TEST_CASE("run directory: manifest, CSVs, summary, pooled medians") {
    const std::string dir = "/tmp/lrfpp_test_rundir";
    std::filesystem::remove_all(dir);
    RunConfig config = tiny_config(dir);
    RunRecord record = run_campaign(config, 1);
    record.check_invariants();
    write_run_directory(record);

    CHECK(std::filesystem::exists(dir + "/manifest.json"));
    CHECK(std::filesystem::exists(dir + "/replica_0.csv"));
    CHECK(std::filesystem::exists(dir + "/replica_1.csv"));
    CHECK(std::filesystem::exists(dir + "/replica_2.csv"));
    // d = 2, snapshot = auto: replica 0 gets an occupation dump.
    CHECK(std::filesystem::exists(dir + "/occupation_0.csv"));
    CHECK(record.snapshot_path == "occupation_0.csv");
    CHECK_FALSE(std::filesystem::exists(dir + "/occupation_1.csv"));

    // The manifest reproduces the config exactly.
    const RunConfig back = load_config(dir + "/manifest.json");
    CHECK(config_to_json(back) == config_to_json(config));

    // Summary parses, references the snapshot, and pools over all replicas.
    const json summary = json::parse(slurp(dir + "/summary.json"));
    CHECK(summary.at("tool") == "lrfpp");
    CHECK(summary.at("replicas") == 3);
    CHECK(summary.at("snapshot") == "occupation_0.csv");
    CHECK(summary.at("final").at("volume_median") == 500.0);
    CHECK(summary.at("events").at("total").get<std::uint64_t>() == record.total_events);
    const auto& pooled_t = summary.at("pooled").at("volume").at("t");
    const auto& pooled_v = summary.at("pooled").at("volume").at("median");
    REQUIRE(pooled_t.size() == pooled_v.size());
    REQUIRE(pooled_t.size() >= 2);
    for (std::size_t i = 1; i < pooled_v.size(); ++i)
        CHECK(pooled_v[i].get<double>() >= pooled_v[i - 1].get<double>());

    // The CSV header is the fixed five-column schema.
    const std::string csv = slurp(dir + "/replica_0.csv");
    CHECK(csv.rfind("t,volume,diameter,max_jump,thinned\n", 0) == 0);
}

TEST_CASE("identical configs produce byte-identical artifacts") {
    const std::string dir1 = "/tmp/lrfpp_test_det1";
    const std::string dir2 = "/tmp/lrfpp_test_det2";
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
    RunConfig config1 = tiny_config(dir1);
    RunConfig config2 = tiny_config(dir2);
    RunRecord record1 = run_campaign(config1, 1);
    RunRecord record2 = run_campaign(config2, 2);  // worker count must not matter
    write_run_directory(record1);
    write_run_directory(record2);
    for (const char* name : {"replica_0.csv", "replica_1.csv", "replica_2.csv",
                             "occupation_0.csv", "summary.json"}) {
        CHECK(slurp(dir1 + "/" + name) == slurp(dir2 + "/" + name));
    }
}

TEST_CASE("snapshot policies") {
    const std::string dir = "/tmp/lrfpp_test_snapshot_policy";
    std::filesystem::remove_all(dir);
    RunConfig config = tiny_config(dir);
    config.snapshot = "off";
    RunRecord record = run_campaign(config, 1);
    write_run_directory(record);
    CHECK_FALSE(std::filesystem::exists(dir + "/occupation_0.csv"));
    CHECK(record.snapshot_path.empty());

    std::filesystem::remove_all(dir);
    config.snapshot = "all";
    record = run_campaign(config, 1);
    write_run_directory(record);
    CHECK(std::filesystem::exists(dir + "/occupation_0.csv"));
    CHECK(std::filesystem::exists(dir + "/occupation_2.csv"));
}

TEST_CASE("max_volume = 1 stops before the first event: a single data row") {
    const std::string dir = "/tmp/lrfpp_test_onerow";
    std::filesystem::remove_all(dir);
    RunConfig config;
    config.kernel.d = 1;
    config.kernel.alpha = 3.0;
    config.replicas = 1;
    config.out_dir = dir;
    config.stop.max_volume = 1;
    config.validate();
    RunRecord record = run_campaign(config, 1);
    write_run_directory(record);
    const std::string csv = slurp(dir + "/replica_0.csv");
    CHECK(csv == "t,volume,diameter,max_jump,thinned\n0,1,0,0,0\n");
}

TEST_CASE("trace invariant violations are internal errors") {
    RunRecord record;
    record.config = tiny_config("/tmp/lrfpp_unused");
    ReplicaResult bad;
    bad.trace.rows = {{1.0, 5, 2, 1, 0}, {0.5, 6, 2, 1, 0}};
    record.replicas.push_back(bad);
    CHECK_THROWS_AS(record.check_invariants(), InternalError);
    record.replicas[0].trace.rows = {{0.5, 6, 2, 1, 0}, {1.0, 5, 2, 1, 0}};
    CHECK_THROWS_AS(record.check_invariants(), InternalError);
}
