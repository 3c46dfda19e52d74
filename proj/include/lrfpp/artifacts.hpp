// artifacts.hpp — persistence of run results.
//
// A run directory contains:
//   manifest.json       config echo + tool version; re-running the tool on
//                       the manifest reproduces every output byte for byte
//   replica_<i>.csv     time series, header: t,volume,diameter,max_jump,thinned
//   summary.json        pooled medians across replicas + event counts
//   occupation_<i>.csv  terminal occupation times (written for d = 2 by
//                       default; feeds the snapshot renderer)
//   snapshot_<t>.ppm    rendered images (written by the render subcommand)
//
// Determinism contract: artifacts are a pure function of the manifest, so
// wall-clock timing lives only in the in-memory record (and on stderr),
// never in the files.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrfpp/config.hpp"
#include "lrfpp/growth.hpp"

namespace lrfpp {

struct ReplicaResult {
    int index = 0;
    RunTrace trace;
    // Terminal occupation map; filled only when the snapshot policy asks
    // for this replica.
    std::vector<GrowthState::Occupation> occupation;
};

// In-memory result of a simulate campaign: config echo, per-replica traces,
// and run metrics.  Only the deterministic parts are persisted.
struct RunRecord {
    RunConfig config;
    std::vector<ReplicaResult> replicas;  // sorted by index
    double wall_clock_seconds = 0.0;
    std::uint64_t total_events = 0;
    std::uint64_t total_thinned = 0;
    std::uint64_t total_cap_hits = 0;
    std::string snapshot_path;  // first occupation dump, "" if none

    // Rows sorted by t with volume and diameter non-decreasing, per replica.
    void check_invariants() const;  // throws InternalError on violation
};

std::string version_string();  // "lrfpp <version>"

void write_manifest(const RunConfig& config, const std::string& dir);
void write_replica_csv(const RunTrace& trace, const std::string& path);
void write_summary(const RunRecord& record, const std::string& dir);

// Occupation dump: header x0,..,x{d-1},t, one row per occupied site in
// insertion order.  Reader returns (site, time) pairs.
void write_occupation_csv(const std::vector<GrowthState::Occupation>& occupation, int d,
                          const std::string& path);
std::vector<std::pair<Site, double>> read_occupation_csv(const std::string& path);

// Formats a double with enough digits to round-trip exactly (%.17g trimmed
// to the shortest representation that parses back equal).
std::string format_double(double v);

}  // namespace lrfpp
