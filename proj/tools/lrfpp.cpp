// lrfpp — command-line front end.
//
//   lrfpp simulate     --config cfg [--seed N] [--replicas N] [--jobs N] [--out DIR]
//   lrfpp oracle-check --config cfg [--seed N] [--replicas N] [--jobs N] [--out DIR]
//   lrfpp bounds       --op ansatz|envelope|passage ...
//   lrfpp classify     --alpha A --dim D [--gamma G]
//   lrfpp render       --run DIR --times T [--times T ...] [--classes K] [--out DIR]
//
// Exit codes: 0 success, 1 internal error, 2 domain/config error,
// 3 acceptance-check failure (oracle-check verdict), for CI use.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lrfpp/artifacts.hpp"
#include "lrfpp/bounds.hpp"
#include "lrfpp/campaign.hpp"
#include "lrfpp/config.hpp"
#include "lrfpp/errors.hpp"
#include "lrfpp/render.hpp"

namespace {

using nlohmann::json;
using namespace lrfpp;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> replicas;
    std::optional<std::string> out;
    int jobs = 1;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
    auto* opt = cmd->add_option("--config", flags.config_path,
                                "config file (key = value sections, or a manifest.json)");
    if (config_required) opt->required();
    cmd->add_option("--seed", flags.seed, "override the run seed");
    cmd->add_option("--replicas", flags.replicas, "override the replica count");
    cmd->add_option("--jobs", flags.jobs, "worker threads (default 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", flags.out, "override the output directory");
}

RunConfig resolve_config(const CommonFlags& flags) {
    RunConfig config = load_config(flags.config_path);
    if (flags.seed) config.seed = *flags.seed;
    if (flags.replicas) {
        config.replicas = *flags.replicas;
        config.oracle.replicas = *flags.replicas;
    }
    if (flags.out) config.out_dir = *flags.out;
    config.validate();
    return config;
}

int cmd_simulate(const CommonFlags& flags) {
    RunConfig config = resolve_config(flags);
    const auto t0 = std::chrono::steady_clock::now();
    RunRecord record = run_campaign(config, flags.jobs);
    record.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_run_directory(record);
    std::fprintf(stderr, "simulate: %d replica(s), %llu events, %.2fs wall\n",
                 config.replicas, static_cast<unsigned long long>(record.total_events),
                 record.wall_clock_seconds);
    std::cout << config.out_dir << "\n";
    return 0;
}

int cmd_oracle_check(const CommonFlags& flags) {
    RunConfig config = resolve_config(flags);
    OracleReport report = run_oracle_check(config, flags.jobs);
    const std::string text = report.to_json();
    std::cout << text;
    std::filesystem::create_directories(config.out_dir);
    write_manifest(config, config.out_dir);
    std::ofstream out(config.out_dir + "/oracle_check.json", std::ios::binary);
    if (!out) throw DomainError("cannot write to '" + config.out_dir + "'");
    out << text;
    return report.pass ? 0 : 3;
}

json ansatz_to_json(const AnsatzResult& result, double alpha, int d, double n) {
    json j;
    j["op"] = "ansatz";
    j["alpha"] = alpha;
    j["d"] = d;
    j["n"] = n;
    switch (result.scheme.family) {
        case AnsatzFamily::GeometricA:
            j["scheme"] = "GeometricA";
            j["a0"] = result.scheme.param;
            break;
        case AnsatzFamily::SlidingA:
            j["scheme"] = "SlidingA";
            j["a0"] = result.scheme.param;
            break;
        case AnsatzFamily::PowerGamma:
            j["scheme"] = "PowerGamma";
            j["exponent_g"] = result.scheme.param;
            break;
    }
    j["k"] = result.k;
    j["Lambda"] = result.Lambda;
    j["lambda"] = result.lambda_small;
    j["leading_order"] = result.leading_order;
    return j;
}

struct BoundsFlags {
    std::string op;
    double alpha = 2.5;
    int dim = 1;
    double n = 4096.0;
    double theta = 0.25;
    double beta = 1.0;
    double lambda = 1.0;
    double c = 1.0;
    double x_norm = 100.0;
    std::vector<double> times;
};

int cmd_bounds(const BoundsFlags& flags) {
    json j;
    if (flags.op == "ansatz") {
        const AnsatzResult result = ansatz_optimize(flags.alpha, flags.dim, flags.n);
        j = ansatz_to_json(result, flags.alpha, flags.dim, flags.n);
    } else if (flags.op == "envelope") {
        const auto envelope = g_envelope(flags.theta, flags.beta, flags.lambda, flags.c);
        j["op"] = "envelope";
        j["theta"] = flags.theta;
        j["beta"] = flags.beta;
        j["lambda"] = flags.lambda;
        j["c"] = flags.c;
        json values = json::array();
        if (flags.times.empty()) throw DomainError("envelope needs at least one --times value");
        for (double t : flags.times)
            values.push_back({{"t", t}, {"log_g_bound", envelope(t)}});
        j["values"] = values;
    } else if (flags.op == "passage") {
        if (flags.times.size() != 1)
            throw DomainError("passage needs exactly one --times value");
        j["op"] = "passage";
        j["alpha"] = flags.alpha;
        j["d"] = flags.dim;
        j["x_norm"] = flags.x_norm;
        j["t"] = flags.times.front();
        j["log_probability_lower_bound"] =
            passage_lower_tail_bound(flags.alpha, flags.dim, flags.x_norm,
                                     flags.times.front());
    } else {
        throw DomainError("unknown bounds op '" + flags.op +
                          "' (expected ansatz, envelope, or passage)");
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_classify(double alpha, int dim, double gamma) {
    const PhaseReport report = phase_classify(alpha, dim, gamma);
    json j;
    j["regime"] = regime_name(report.regime);
    j["alpha"] = alpha;
    j["d"] = dim;
    j["gamma"] = gamma;
    j["thresholds"] = {{"instantaneous_below", report.threshold_low},
                       {"stretched_to_superlinear", report.threshold_mid},
                       {"linear_above", report.threshold_high}};
    if (report.delta_exponent) j["delta"] = *report.delta_exponent;
    if (report.gamma_exponent) j["gamma_exponent"] = *report.gamma_exponent;
    j["snapped"] = report.snapped;
    j["boundary_l_condition"] = report.boundary_l_condition;
    std::cout << j.dump(2) << "\n";
    return 0;
}

struct RenderFlags {
    std::string run_dir;
    std::string snapshot_file;
    std::string out_dir;
    std::vector<double> times;
    int classes = 6;
};

int cmd_render(const RenderFlags& flags) {
    if (flags.times.empty()) throw DomainError("render needs at least one --times value");
    std::string snapshot = flags.snapshot_file;
    if (snapshot.empty()) {
        // Prefer the dump referenced by the run's summary, else the default name.
        const std::string summary_path = flags.run_dir + "/summary.json";
        std::ifstream in(summary_path, std::ios::binary);
        if (in) {
            try {
                json summary = json::parse(in);
                if (summary.contains("snapshot") && summary["snapshot"].is_string())
                    snapshot = summary["snapshot"].get<std::string>();
            } catch (const json::exception&) {
                throw DomainError("cannot parse '" + summary_path + "'");
            }
        }
        if (snapshot.empty()) snapshot = "occupation_0.csv";
        snapshot = flags.run_dir + "/" + snapshot;
    }
    const auto occupation = read_occupation_csv(snapshot);
    const std::string out_dir = flags.out_dir.empty() ? flags.run_dir : flags.out_dir;
    std::filesystem::create_directories(out_dir);
    for (double t : flags.times) {
        const SnapshotImage image = render_snapshot(occupation, t, flags.classes);
        const std::string path = out_dir + "/snapshot_" + format_double(t) + ".ppm";
        write_ppm(image, path);
        std::cout << path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolName) +
                 " — long-range first-passage growth: simulation, exact oracles, "
                 "rigorous bounds, and snapshot rendering"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_string());

    CommonFlags simulate_flags, oracle_flags;
    auto* simulate = app.add_subcommand(
        "simulate", "run a replica campaign and write a run directory");
    add_common(simulate, simulate_flags, true);

    auto* oracle = app.add_subcommand(
        "oracle-check", "compare dispersal hitting laws against exact Dijkstra times");
    add_common(oracle, oracle_flags, true);

    BoundsFlags bounds_flags;
    auto* bounds = app.add_subcommand("bounds", "evaluate rigorous bound machinery");
    bounds->add_option("--op", bounds_flags.op, "ansatz | envelope | passage")->required();
    bounds->add_option("--alpha", bounds_flags.alpha, "kernel decay exponent");
    bounds->add_option("--dim", bounds_flags.dim, "lattice dimension");
    bounds->add_option("--n", bounds_flags.n, "distance scale (ansatz)");
    bounds->add_option("--theta", bounds_flags.theta, "recursion contraction (envelope)");
    bounds->add_option("--beta", bounds_flags.beta, "seed-bound exponent (envelope)");
    bounds->add_option("--lam", bounds_flags.lambda, "rate parameter (envelope)");
    bounds->add_option("--c", bounds_flags.c, "seed-bound constant (envelope)");
    bounds->add_option("--xnorm", bounds_flags.x_norm, "|x| for passage bounds");
    bounds->add_option("--times", bounds_flags.times, "evaluation times");

    double classify_alpha = 0.0, classify_gamma = 1.0;
    int classify_dim = 1;
    auto* classify = app.add_subcommand(
        "classify", "name the growth regime of (alpha, d, gamma)");
    classify->add_option("--alpha", classify_alpha, "kernel decay exponent")->required();
    classify->add_option("--dim", classify_dim, "lattice dimension")->required();
    classify->add_option("--gamma", classify_gamma, "weight power (default 1)");

    RenderFlags render_flags;
    auto* render = app.add_subcommand("render", "rasterize growth snapshots to PPM");
    render->add_option("--run", render_flags.run_dir, "run directory")->required();
    render->add_option("--times", render_flags.times, "snapshot times")->required();
    render->add_option("--classes", render_flags.classes, "time classes (default 6)");
    render->add_option("--snapshot", render_flags.snapshot_file,
                       "occupation dump (default: the run's own)");
    render->add_option("--out", render_flags.out_dir, "image directory (default: run dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(simulate_flags);
        if (oracle->parsed()) return cmd_oracle_check(oracle_flags);
        if (bounds->parsed()) return cmd_bounds(bounds_flags);
        if (classify->parsed()) return cmd_classify(classify_alpha, classify_dim, classify_gamma);
        if (render->parsed()) return cmd_render(render_flags);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
