#include "lrfpp/artifacts.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lrfpp/analysis.hpp"
#include "lrfpp/errors.hpp"

namespace lrfpp {

using nlohmann::json;

std::string version_string() { return std::string(kToolName) + " " + kToolVersion; }

std::string format_double(double v) {
    // Shortest decimal that parses back to the same double: try increasing
    // precision until the round trip is exact.  Keeps CSVs readable without
    // sacrificing bit-level reproducibility.
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write to '" + path + "'");
    return out;
}

double median_of(std::vector<double> values) {
    if (values.empty()) throw InternalError("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

json series_to_json(const Series& series) {
    json t = json::array(), v = json::array();
    for (const auto& [a, b] : series) {
        t.push_back(a);
        v.push_back(b);
    }
    return json{{"t", t}, {"median", v}};
}

}  // namespace

void RunRecord::check_invariants() const {
    for (const ReplicaResult& replica : replicas) {
        double t = -1.0;
        std::uint64_t volume = 0;
        std::int64_t diameter = -1;
        for (const TraceRow& row : replica.trace.rows) {
            if (row.t < t) throw InternalError("trace rows not sorted by t");
            if (row.volume < volume) throw InternalError("volume decreased along a trace");
            if (row.diameter < diameter) throw InternalError("diameter decreased along a trace");
            t = row.t;
            volume = row.volume;
            diameter = row.diameter;
        }
    }
}

void write_manifest(const RunConfig& config, const std::string& dir) {
    std::filesystem::create_directories(dir);
    auto out = open_out(dir + "/manifest.json");
    out << config_to_json(config);
}

void write_replica_csv(const RunTrace& trace, const std::string& path) {
    auto out = open_out(path);
    out << "t,volume,diameter,max_jump,thinned\n";
    char buf[160];
    for (const TraceRow& row : trace.rows) {
        std::snprintf(buf, sizeof buf, ",%" PRIu64 ",%" PRId64 ",%" PRId64 ",%" PRIu64 "\n",
                      row.volume, row.diameter, row.max_jump, row.thinned);
        out << format_double(row.t) << buf;
    }
}

void write_summary(const RunRecord& record, const std::string& dir) {
    const int n = static_cast<int>(record.replicas.size());
    if (n == 0) throw InternalError("summary of a run with no replicas");

    std::vector<Series> volume_series, diameter_series, jump_series;
    std::vector<double> final_volume, final_diameter, final_jump, final_time;
    bool truncated_any = false;
    for (const ReplicaResult& replica : record.replicas) {
        Series sv, sd, sj;
        for (const TraceRow& row : replica.trace.rows) {
            sv.emplace_back(row.t, static_cast<double>(row.volume));
            sd.emplace_back(row.t, static_cast<double>(row.diameter));
            sj.emplace_back(row.t, static_cast<double>(row.max_jump));
        }
        volume_series.push_back(std::move(sv));
        diameter_series.push_back(std::move(sd));
        jump_series.push_back(std::move(sj));
        final_volume.push_back(static_cast<double>(replica.trace.volume));
        final_diameter.push_back(static_cast<double>(replica.trace.diameter));
        final_jump.push_back(static_cast<double>(replica.trace.max_jump));
        final_time.push_back(replica.trace.final_time);
        truncated_any = truncated_any || replica.trace.truncated;
    }

    const double volume_median = median_of(final_volume);
    json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["mode"] = run_mode_name(record.config.mode);
    j["replicas"] = n;
    j["events"] = {{"total", record.total_events},
                   {"thinned", record.total_thinned},
                   {"cap_hits", record.total_cap_hits}};
    j["final"] = {{"time_median", median_of(final_time)},
                  {"volume_median", volume_median},
                  {"log10_volume_median", std::log10(volume_median)},
                  {"diameter_median", median_of(final_diameter)},
                  {"max_jump_median", median_of(final_jump)}};
    constexpr int kGridPoints = 33;
    j["pooled"] = {{"volume", series_to_json(pool_median(volume_series, kGridPoints))},
                   {"diameter", series_to_json(pool_median(diameter_series, kGridPoints))},
                   {"max_jump", series_to_json(pool_median(jump_series, kGridPoints))}};
    j["truncated_any"] = truncated_any;
    j["snapshot"] = record.snapshot_path;

    auto out = open_out(dir + "/summary.json");
    out << j.dump(2) << "\n";
}

void write_occupation_csv(const std::vector<GrowthState::Occupation>& occupation, int d,
                          const std::string& path) {
    if (d < 1 || d > kMaxDim) throw DomainError("occupation dump: bad dimension");
    auto out = open_out(path);
    for (int i = 0; i < d; ++i) out << "x" << i << ",";
    out << "t\n";
    for (const GrowthState::Occupation& occ : occupation) {
        for (int i = 0; i < d; ++i) out << occ.site[i] << ",";
        out << format_double(occ.time) << "\n";
    }
}

std::vector<std::pair<Site, double>> read_occupation_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open occupation dump '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DomainError("occupation dump '" + path + "' is empty");
    int d = 0;
    {
        std::istringstream header(line);
        std::string column;
        while (std::getline(header, column, ',')) {
            if (column == "t") break;
            ++d;
        }
        if (d < 1 || d > kMaxDim)
            throw DomainError("occupation dump '" + path + "' has a malformed header");
    }
    std::vector<std::pair<Site, double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string field;
        std::vector<Coord> coords;
        for (int i = 0; i < d; ++i) {
            if (!std::getline(fields, field, ','))
                throw DomainError("occupation dump '" + path + "' line " +
                                  std::to_string(lineno) + ": too few columns");
            coords.push_back(std::stoll(field));
        }
        if (!std::getline(fields, field))
            throw DomainError("occupation dump '" + path + "' line " + std::to_string(lineno) +
                              ": missing time column");
        rows.emplace_back(Site(coords), std::stod(field));
    }
    if (rows.empty())
        throw DomainError("occupation dump '" + path + "' has no data rows");
    return rows;
}

}  // namespace lrfpp
