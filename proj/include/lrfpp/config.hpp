// config.hpp — run configuration: parsing, validation, and lossless
// serialization.
//
// Configs are plain text ("key = value" lines under [section] headers) so
// they stay diff-able and hand-editable.  Every run directory gets a JSON
// manifest echoing the full configuration; the same loader accepts either
// format, so a run can be reproduced from its manifest alone.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrfpp/growth.hpp"
#include "lrfpp/kernel.hpp"

namespace lrfpp {

inline constexpr const char* kToolName = "lrfpp";
inline constexpr const char* kToolVersion = "1.0.0";

enum class RunMode { Dispersal, Oracle, Bounds, Classify };

const char* run_mode_name(RunMode mode);
RunMode run_mode_from_name(const std::string& name);  // throws DomainError

// Parameters for the paired dispersal-vs-Dijkstra law check (RunMode::Oracle).
struct OracleSpec {
    std::int64_t box_radius = 64;
    std::vector<Site> probes;            // sites whose hitting law is compared
    int replicas = 2000;                 // samples per arm
    std::uint64_t growth_volume_cap = 10'000'000;  // backstop for lost probes
};

struct RunConfig {
    Kernel kernel;
    RunMode mode = RunMode::Dispersal;
    StopRule stop;
    std::uint64_t seed = 1;
    int replicas = 1;
    double cadence = 1.25;               // geometric row cadence, > 1
    std::string out_dir = "run";
    bool accelerate = true;              // batch provably-thinned events when exact
    std::string snapshot = "auto";       // auto | off | all — occupation dumps
    OracleSpec oracle;

    // Throws DomainError on invalid or inconsistent fields, including
    // mode-specific requirements (a stop rule for Dispersal, probes inside
    // the box for Oracle).
    void validate() const;
};

// Reads a config file; JSON manifests are recognized by a leading '{',
// anything else parses as sectioned key = value text.
RunConfig load_config(const std::string& path);

// Parses the plain-text format directly (used by tests and here-docs).
RunConfig parse_config_text(const std::string& text);

// JSON round-trip.  Doubles serialize shortest-round-trip, so
// config_from_json(config_to_json(c)) reproduces every field exactly.
std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(const std::string& json_text);

}  // namespace lrfpp
