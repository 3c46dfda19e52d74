#include "lrfpp/campaign.hpp"

#include <atomic>
#include <functional>
#include <limits>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <thread>

#include "json.hpp"
#include "lrfpp/analysis.hpp"
#include "lrfpp/errors.hpp"
#include "lrfpp/exactfpp.hpp"
#include "lrfpp/sampler.hpp"

namespace lrfpp {

using nlohmann::json;

namespace {

// Runs `body(i)` for i in [0, count) on up to `jobs` threads.  The first
// exception (by replica index) wins and is rethrown on the caller's thread.
void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(i)] = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

RunRecord run_campaign(const RunConfig& config, int jobs) {
    config.validate();
    if (config.mode != RunMode::Dispersal)
        throw DomainError("simulate requires mode = dispersal");

    const DisplacementSampler sampler(config.kernel);  // shared, read-only
    RunRecord record;
    record.config = config;
    record.replicas.resize(static_cast<std::size_t>(config.replicas));

    parallel_for(config.replicas, jobs, [&](int i) {
        RngStream rng(config.seed, "replica", static_cast<std::uint64_t>(i));
        GrowthState state(sampler);
        ReplicaResult& result = record.replicas[static_cast<std::size_t>(i)];
        result.index = i;
        result.trace =
            run_growth(state, config.stop, config.cadence, rng, config.accelerate);
        const bool want_occupation =
            config.snapshot == "all" ||
            (config.snapshot == "auto" && config.kernel.d == 2 && i == 0);
        if (want_occupation) result.occupation = state.occupation_times();
    });

    for (const ReplicaResult& result : record.replicas) {
        record.total_events += result.trace.events;
        record.total_thinned += result.trace.thinned;
        record.total_cap_hits += result.trace.cap_hits;
    }
    record.check_invariants();
    return record;
}

void write_run_directory(RunRecord& record) {
    const std::string& dir = record.config.out_dir;
    std::filesystem::create_directories(dir);
    write_manifest(record.config, dir);
    record.snapshot_path.clear();
    for (const ReplicaResult& result : record.replicas) {
        write_replica_csv(result.trace,
                          dir + "/replica_" + std::to_string(result.index) + ".csv");
        if (!result.occupation.empty()) {
            const std::string name =
                "occupation_" + std::to_string(result.index) + ".csv";
            write_occupation_csv(result.occupation, record.config.kernel.d, dir + "/" + name);
            if (record.snapshot_path.empty()) record.snapshot_path = name;
        }
    }
    write_summary(record, dir);
}

OracleReport run_oracle_check(const RunConfig& config, int jobs) {
    config.validate();
    if (config.mode != RunMode::Oracle)
        throw DomainError("oracle-check requires mode = oracle");

    const DisplacementSampler sampler(config.kernel);
    const BoxSpec box{config.kernel.d, config.oracle.box_radius};
    const int n_probes = static_cast<int>(config.oracle.probes.size());
    const int n_rep = config.oracle.replicas;

    // growth_times[j][i] is the dispersal hitting time of probe j in its
    // i-th independent run; NaN when the volume cap fired first.  Each probe
    // gets its own runs so nearer probes are never censored by a stop rule
    // aimed at a farther one.
    std::vector<std::vector<double>> growth_times(
        static_cast<std::size_t>(n_probes),
        std::vector<double>(static_cast<std::size_t>(n_rep)));
    std::vector<std::vector<double>> dijkstra_times_by_probe = growth_times;

    parallel_for(n_rep, jobs, [&](int i) {
        for (int j = 0; j < n_probes; ++j) {
            const Site& probe = config.oracle.probes[static_cast<std::size_t>(j)];
            RngStream rng(config.seed, "oracle-growth",
                          (static_cast<std::uint64_t>(j) << 32) |
                              static_cast<std::uint32_t>(i));
            GrowthState state(sampler);
            StopRule stop;
            stop.target_site = probe;
            stop.max_volume = config.oracle.growth_volume_cap;
            // Cadence is irrelevant here — only the final time is read.
            const RunTrace trace = run_growth(state, stop, 1e12, rng, config.accelerate);
            growth_times[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                state.contains(probe) ? trace.final_time
                                      : std::numeric_limits<double>::quiet_NaN();
        }
        const WeightOracle weights(box, config.kernel,
                                   stream_key(config.seed, "oracle-weights",
                                              static_cast<std::uint64_t>(i)));
        const std::vector<double> all = dijkstra_times(weights, Site::origin(config.kernel.d));
        for (int j = 0; j < n_probes; ++j) {
            const Site& probe = config.oracle.probes[static_cast<std::size_t>(j)];
            dijkstra_times_by_probe[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                all[box.index_of(probe)];
        }
    });

    OracleReport report;
    report.bonferroni_threshold = 0.01 / n_probes;
    report.pass = true;
    for (int j = 0; j < n_probes; ++j) {
        ProbeVerdict verdict;
        verdict.probe = config.oracle.probes[static_cast<std::size_t>(j)];
        std::vector<double> growth;
        growth.reserve(static_cast<std::size_t>(n_rep));
        for (double t : growth_times[static_cast<std::size_t>(j)]) {
            if (std::isnan(t)) ++verdict.censored;
            else growth.push_back(t);
        }
        const std::vector<double>& exact = dijkstra_times_by_probe[static_cast<std::size_t>(j)];
        verdict.samples = static_cast<int>(growth.size());
        verdict.growth_mean =
            std::accumulate(growth.begin(), growth.end(), 0.0) / verdict.samples;
        verdict.dijkstra_mean =
            std::accumulate(exact.begin(), exact.end(), 0.0) / exact.size();
        const KsResult ks = ks_two_sample(growth, exact);
        verdict.ks_statistic = ks.statistic;
        verdict.p_value = ks.p_value;
        // A censored run means the two samples are not drawn from the same
        // conditional law, so any censoring fails the check outright.
        if (verdict.censored > 0 || verdict.p_value <= report.bonferroni_threshold)
            report.pass = false;
        report.probes.push_back(verdict);
    }
    return report;
}

std::string OracleReport::to_json() const {
    json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["bonferroni_threshold"] = bonferroni_threshold;
    j["pass"] = pass;
    json probes_json = json::array();
    for (const ProbeVerdict& verdict : probes) {
        json coords = json::array();
        for (int i = 0; i < verdict.probe.dim(); ++i) coords.push_back(verdict.probe[i]);
        probes_json.push_back({{"probe", coords},
                               {"samples", verdict.samples},
                               {"censored", verdict.censored},
                               {"ks_statistic", verdict.ks_statistic},
                               {"p_value", verdict.p_value},
                               {"growth_mean", verdict.growth_mean},
                               {"dijkstra_mean", verdict.dijkstra_mean}});
    }
    j["probes"] = probes_json;
    return j.dump(2) + "\n";
}

}  // namespace lrfpp
