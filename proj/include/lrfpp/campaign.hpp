// campaign.hpp — replica orchestration on top of the growth engine.
//
// A campaign runs `replicas` independent growth processes; replica i draws
// from the stream (seed, "replica", i), so results are a pure function of
// the config no matter how many workers execute them.  Workers pull replica
// indices from an atomic counter and write into pre-sized slots — the merge
// order is always the replica index.
#pragma once

#include <string>
#include <vector>

#include "lrfpp/artifacts.hpp"
#include "lrfpp/config.hpp"

namespace lrfpp {

// Runs a Dispersal-mode campaign with `jobs` worker threads (values < 1
// clamp to 1).  Fills every ReplicaResult plus the aggregate counters;
// wall_clock_seconds is left at 0 for the caller to stamp.
RunRecord run_campaign(const RunConfig& config, int jobs = 1);

// Writes manifest, per-replica CSVs, occupation dumps, and the summary into
// config.out_dir; sets record.snapshot_path to the first occupation dump.
void write_run_directory(RunRecord& record);

// Paired law check: for each probe x, `oracle.replicas` dispersal hitting
// times of x versus the same number of Dijkstra passage times T(0, x) on
// the comparison box, compared with a two-sample KS test.
struct ProbeVerdict {
    Site probe;
    int samples = 0;          // per arm, after censoring
    int censored = 0;         // growth runs that hit the volume cap first
    double ks_statistic = 0.0;
    double p_value = 0.0;
    double growth_mean = 0.0;
    double dijkstra_mean = 0.0;
};

struct OracleReport {
    std::vector<ProbeVerdict> probes;
    double bonferroni_threshold = 0.0;  // 0.01 / (number of probes)
    bool pass = false;

    std::string to_json() const;
};

OracleReport run_oracle_check(const RunConfig& config, int jobs = 1);

}  // namespace lrfpp
