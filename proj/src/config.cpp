#include "lrfpp/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "lrfpp/errors.hpp"
#include "json.hpp"

namespace lrfpp {

using nlohmann::json;

const char* run_mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::Dispersal: return "dispersal";
        case RunMode::Oracle: return "oracle";
        case RunMode::Bounds: return "bounds";
        case RunMode::Classify: return "classify";
    }
    throw InternalError("unhandled RunMode");
}

RunMode run_mode_from_name(const std::string& name) {
    if (name == "dispersal") return RunMode::Dispersal;
    if (name == "oracle") return RunMode::Oracle;
    if (name == "bounds") return RunMode::Bounds;
    if (name == "classify") return RunMode::Classify;
    throw DomainError("unknown mode '" + name +
                      "' (expected dispersal, oracle, bounds, or classify)");
}

namespace {

std::string trim(std::string s) {
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw DomainError("");
        return v;
    } catch (const std::exception&) {
        throw DomainError("config key '" + key + "': expected a number, got '" + value + "'");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw DomainError("");
        return v;
    } catch (const std::exception&) {
        throw DomainError("config key '" + key + "': expected an integer, got '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw DomainError("");
        return v;
    } catch (const std::exception&) {
        throw DomainError("config key '" + key + "': expected an unsigned integer, got '" +
                          value + "'");
    }
}

bool parse_switch(const std::string& key, const std::string& value) {
    const std::string v = lower(value);
    if (v == "auto" || v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw DomainError("config key '" + key + "': expected auto/on/off, got '" + value + "'");
}

// A site literal: coordinates separated by commas and/or spaces, e.g. "8" or
// "3, -2".  The dimension is checked against the kernel later in validate().
Site parse_site(const std::string& key, const std::string& value) {
    std::vector<Coord> coords;
    std::string tok;
    std::istringstream in(value);
    std::string normalized = value;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream parts(normalized);
    while (parts >> tok) coords.push_back(parse_int(key, tok));
    if (coords.empty() || coords.size() > static_cast<std::size_t>(kMaxDim))
        throw DomainError("config key '" + key + "': expected 1.." +
                          std::to_string(kMaxDim) + " coordinates, got '" + value + "'");
    return Site(coords);
}

// Probe list: site literals separated by semicolons, e.g. "4; 8; 16" or
// "3,0; 0,5".
std::vector<Site> parse_probes(const std::string& value) {
    std::vector<Site> probes;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ';')) {
        item = trim(item);
        if (!item.empty()) probes.push_back(parse_site("oracle.probes", item));
    }
    if (probes.empty()) throw DomainError("config key 'oracle.probes': no sites given");
    return probes;
}

void apply_key(RunConfig& config, const std::string& section, const std::string& key,
               const std::string& value) {
    const std::string path = section.empty() ? key : section + "." + key;
    if (section == "kernel") {
        if (key == "d") config.kernel.d = static_cast<int>(parse_int(path, value));
        else if (key == "alpha") config.kernel.alpha = parse_double(path, value);
        else if (key == "gamma") config.kernel.gamma = parse_double(path, value);
        else if (key == "logpower_p") config.kernel.logpower_p = parse_double(path, value);
        else if (key == "slowvary") {
            // "unit" or "logpower [p]"
            std::istringstream in(value);
            std::string family;
            in >> family;
            family = lower(family);
            if (family == "unit") {
                config.kernel.slowvary = SlowVary::Unit;
            } else if (family == "logpower") {
                config.kernel.slowvary = SlowVary::LogPower;
                std::string p;
                if (in >> p) config.kernel.logpower_p = parse_double(path, p);
            } else {
                throw DomainError("config key '" + path +
                                  "': expected 'unit' or 'logpower [p]', got '" + value + "'");
            }
        } else {
            throw DomainError("unknown config key '" + path + "'");
        }
    } else if (section == "run" || section.empty()) {
        if (key == "mode") config.mode = run_mode_from_name(lower(value));
        else if (key == "seed") config.seed = parse_u64(path, value);
        else if (key == "replicas") config.replicas = static_cast<int>(parse_int(path, value));
        else if (key == "cadence") config.cadence = parse_double(path, value);
        else if (key == "out") config.out_dir = value;
        else if (key == "accelerate") config.accelerate = parse_switch(path, value);
        else if (key == "snapshot") {
            const std::string v = lower(value);
            if (v != "auto" && v != "off" && v != "all")
                throw DomainError("config key '" + path + "': expected auto/off/all, got '" +
                                  value + "'");
            config.snapshot = v;
        } else {
            throw DomainError("unknown config key '" + path + "'");
        }
    } else if (section == "stop") {
        if (key == "max_time") config.stop.max_time = parse_double(path, value);
        else if (key == "max_volume") config.stop.max_volume = parse_u64(path, value);
        else if (key == "max_diameter") config.stop.max_diameter = parse_int(path, value);
        else if (key == "target") config.stop.target_site = parse_site(path, value);
        else throw DomainError("unknown config key '" + path + "'");
    } else if (section == "oracle") {
        if (key == "box_radius") config.oracle.box_radius = parse_int(path, value);
        else if (key == "probes") config.oracle.probes = parse_probes(value);
        else if (key == "replicas")
            config.oracle.replicas = static_cast<int>(parse_int(path, value));
        else if (key == "growth_volume_cap")
            config.oracle.growth_volume_cap = parse_u64(path, value);
        else throw DomainError("unknown config key '" + path + "'");
    } else {
        throw DomainError("unknown config section [" + section + "]");
    }
}

}  // namespace

void RunConfig::validate() const {
    kernel.validate();
    if (replicas < 1) throw DomainError("replicas must be >= 1");
    if (!(cadence > 1.0)) throw DomainError("cadence must be > 1");
    if (out_dir.empty()) throw DomainError("output directory must be non-empty");
    if (snapshot != "auto" && snapshot != "off" && snapshot != "all")
        throw DomainError("snapshot must be auto, off, or all");
    if (mode == RunMode::Dispersal) {
        if (!stop.max_time && !stop.max_volume && !stop.max_diameter && !stop.target_site)
            throw DomainError("dispersal runs need at least one stop rule "
                              "(max_time, max_volume, max_diameter, or target)");
        if (stop.target_site && stop.target_site->dim() != kernel.d)
            throw DomainError("stop target dimension differs from kernel d");
    }
    if (mode == RunMode::Oracle) {
        if (oracle.probes.empty())
            throw DomainError("oracle mode needs at least one probe site");
        if (oracle.box_radius < 1) throw DomainError("oracle box_radius must be >= 1");
        if (oracle.replicas < 100)
            throw DomainError("oracle replicas must be >= 100 per arm "
                              "(two-sample KS needs that many points)");
        for (const Site& probe : oracle.probes) {
            if (probe.dim() != kernel.d)
                throw DomainError("oracle probe dimension differs from kernel d");
            if (probe.linf() > oracle.box_radius)
                throw DomainError("oracle probe lies outside the comparison box");
        }
    }
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig config;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw DomainError("config line " + std::to_string(lineno) +
                                  ": unterminated section header");
            section = lower(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw DomainError("config line " + std::to_string(lineno) + ": empty key");
        apply_key(config, section, key, value);
    }
    config.validate();
    return config;
}

std::string config_to_json(const RunConfig& config) {
    json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    json& c = j["config"];
    c["kernel"] = {{"d", config.kernel.d},
                   {"alpha", config.kernel.alpha},
                   {"gamma", config.kernel.gamma},
                   {"slowvary", config.kernel.slowvary == SlowVary::Unit ? "unit" : "logpower"},
                   {"logpower_p", config.kernel.logpower_p}};
    c["mode"] = run_mode_name(config.mode);
    c["seed"] = config.seed;
    c["replicas"] = config.replicas;
    c["cadence"] = config.cadence;
    c["out"] = config.out_dir;
    c["accelerate"] = config.accelerate;
    c["snapshot"] = config.snapshot;
    json stop = json::object();
    if (config.stop.max_time) stop["max_time"] = *config.stop.max_time;
    if (config.stop.max_volume) stop["max_volume"] = *config.stop.max_volume;
    if (config.stop.max_diameter) stop["max_diameter"] = *config.stop.max_diameter;
    if (config.stop.target_site) {
        json coords = json::array();
        for (int i = 0; i < config.stop.target_site->dim(); ++i)
            coords.push_back((*config.stop.target_site)[i]);
        stop["target"] = coords;
    }
    c["stop"] = stop;
    if (config.mode == RunMode::Oracle) {
        json probes = json::array();
        for (const Site& probe : config.oracle.probes) {
            json coords = json::array();
            for (int i = 0; i < probe.dim(); ++i) coords.push_back(probe[i]);
            probes.push_back(coords);
        }
        c["oracle"] = {{"box_radius", config.oracle.box_radius},
                       {"probes", probes},
                       {"replicas", config.oracle.replicas},
                       {"growth_volume_cap", config.oracle.growth_volume_cap}};
    }
    return j.dump(2) + "\n";
}

namespace {

Site site_from_json(const json& coords) {
    std::vector<Coord> c;
    for (const auto& v : coords) c.push_back(v.get<Coord>());
    return Site(c);
}

}  // namespace

RunConfig config_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw DomainError(std::string("manifest is not valid JSON: ") + e.what());
    }
    try {
        const json& c = j.contains("config") ? j.at("config") : j;
        RunConfig config;
        const json& k = c.at("kernel");
        config.kernel.d = k.at("d").get<int>();
        config.kernel.alpha = k.at("alpha").get<double>();
        config.kernel.gamma = k.value("gamma", 1.0);
        config.kernel.slowvary =
            k.value("slowvary", std::string("unit")) == "logpower" ? SlowVary::LogPower
                                                                   : SlowVary::Unit;
        config.kernel.logpower_p = k.value("logpower_p", 2.0);
        config.mode = run_mode_from_name(c.value("mode", std::string("dispersal")));
        config.seed = c.value("seed", std::uint64_t{1});
        config.replicas = c.value("replicas", 1);
        config.cadence = c.value("cadence", 1.25);
        config.out_dir = c.value("out", std::string("run"));
        config.accelerate = c.value("accelerate", true);
        config.snapshot = c.value("snapshot", std::string("auto"));
        if (c.contains("stop")) {
            const json& s = c.at("stop");
            if (s.contains("max_time")) config.stop.max_time = s.at("max_time").get<double>();
            if (s.contains("max_volume"))
                config.stop.max_volume = s.at("max_volume").get<std::uint64_t>();
            if (s.contains("max_diameter"))
                config.stop.max_diameter = s.at("max_diameter").get<std::int64_t>();
            if (s.contains("target")) config.stop.target_site = site_from_json(s.at("target"));
        }
        if (c.contains("oracle")) {
            const json& o = c.at("oracle");
            config.oracle.box_radius = o.value("box_radius", std::int64_t{64});
            config.oracle.replicas = o.value("replicas", 2000);
            config.oracle.growth_volume_cap =
                o.value("growth_volume_cap", std::uint64_t{10'000'000});
            if (o.contains("probes"))
                for (const auto& probe : o.at("probes"))
                    config.oracle.probes.push_back(site_from_json(probe));
        }
        config.validate();
        return config;
    } catch (const json::exception& e) {
        throw DomainError(std::string("manifest is missing or mistypes a field: ") + e.what());
    }
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return config_from_json(text);
    return parse_config_text(text);
}

}  // namespace lrfpp
