// Python bindings for the laboratory's main operations: kernel arithmetic,
// regime classification, certified bounds, growth campaigns, and the paired
// oracle check.  Structured results come back as plain dicts/strings so the
// Python side stays dependency-free.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "lrfpp/analysis.hpp"
#include "lrfpp/artifacts.hpp"
#include "lrfpp/bounds.hpp"
#include "lrfpp/campaign.hpp"
#include "lrfpp/config.hpp"

namespace py = pybind11;
using namespace lrfpp;

namespace {

Kernel make_kernel(int d, double alpha, double gamma, const std::string& slowvary,
                   double logpower_p) {
    Kernel kernel{.d = d, .alpha = alpha, .gamma = gamma};
    if (slowvary == "unit") {
        kernel.slowvary = SlowVary::Unit;
    } else if (slowvary == "logpower") {
        kernel.slowvary = SlowVary::LogPower;
        kernel.logpower_p = logpower_p;
    } else {
        throw DomainError("slowvary must be 'unit' or 'logpower'");
    }
    kernel.validate();
    return kernel;
}

py::dict estimate_to_dict(const ExponentEstimate& est) {
    py::dict out;
    out["value"] = est.value;
    out["std_error"] = est.std_error;
    out["t_lo"] = est.t_lo;
    out["t_hi"] = est.t_hi;
    out["n_points"] = est.n_points;
    out["degenerate"] = est.degenerate;
    if (est.convergence_gap) out["convergence_gap"] = *est.convergence_gap;
    return out;
}

RunConfig prepare_config(const std::string& config_text,
                         std::optional<std::uint64_t> seed,
                         std::optional<int> replicas) {
    RunConfig config = parse_config_text(config_text);
    if (seed) config.seed = *seed;
    if (replicas) {
        config.replicas = *replicas;
        config.oracle.replicas = *replicas;
    }
    return config;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InternalError("cannot read back " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

PYBIND11_MODULE(_lrfpp, m) {
    m.doc() = "Long-range first-passage percolation laboratory (native core)";
    m.attr("__version__") = kToolVersion;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

    m.def(
        "rate",
        [](int d, double alpha, std::int64_t k, double gamma, const std::string& slowvary,
           double logpower_p) {
            return rate(make_kernel(d, alpha, gamma, slowvary, logpower_p), k);
        },
        py::arg("d"), py::arg("alpha"), py::arg("k"), py::arg("gamma") = 1.0,
        py::arg("slowvary") = "unit", py::arg("logpower_p") = 2.0,
        "Communication rate r(k) of the distance-k edge class");

    m.def(
        "total_rate",
        [](int d, double alpha, double gamma, const std::string& slowvary,
           double logpower_p, double rel_tol) {
            return total_rate(make_kernel(d, alpha, gamma, slowvary, logpower_p), rel_tol);
        },
        py::arg("d"), py::arg("alpha"), py::arg("gamma") = 1.0,
        py::arg("slowvary") = "unit", py::arg("logpower_p") = 2.0,
        py::arg("rel_tol") = 1e-12,
        "Total per-site firing rate lambda = sum_x r(|x|_1)");

    m.def(
        "shell_count",
        [](int d, std::int64_t k) { return shell_count(d, k); }, py::arg("d"),
        py::arg("k"), "Number of lattice sites at l1 distance exactly k");

    m.def(
        "classify",
        [](double alpha, int d, double gamma) {
            const PhaseReport report = phase_classify(alpha, d, gamma);
            py::dict out;
            out["regime"] = regime_name(report.regime);
            out["alpha"] = alpha;
            out["d"] = d;
            out["gamma"] = gamma;
            py::dict thresholds;
            thresholds["instantaneous_below"] = report.threshold_low;
            thresholds["stretched_to_superlinear"] = report.threshold_mid;
            thresholds["linear_above"] = report.threshold_high;
            out["thresholds"] = thresholds;
            if (report.delta_exponent) out["delta"] = *report.delta_exponent;
            if (report.gamma_exponent) out["gamma_exponent"] = *report.gamma_exponent;
            out["snapped"] = report.snapped;
            out["boundary_l_condition"] = report.boundary_l_condition;
            return out;
        },
        py::arg("alpha"), py::arg("d"), py::arg("gamma") = 1.0,
        "Growth-regime verdict for the decay exponent alpha");

    m.def(
        "ansatz_optimize",
        [](double alpha, int d, double n) {
            const AnsatzResult result = ansatz_optimize(alpha, d, n);
            py::dict out;
            out["alpha"] = alpha;
            out["d"] = d;
            out["n"] = n;
            switch (result.scheme.family) {
                case AnsatzFamily::GeometricA:
                    out["scheme"] = "GeometricA";
                    out["a0"] = result.scheme.param;
                    break;
                case AnsatzFamily::SlidingA:
                    out["scheme"] = "SlidingA";
                    out["a0"] = result.scheme.param;
                    break;
                case AnsatzFamily::PowerGamma:
                    out["scheme"] = "PowerGamma";
                    out["exponent_g"] = result.scheme.param;
                    break;
            }
            out["k"] = result.k;
            out["Lambda"] = result.Lambda;
            out["lambda"] = result.lambda_small;
            out["leading_order"] = result.leading_order;
            return out;
        },
        py::arg("alpha"), py::arg("d"), py::arg("n"),
        "Optimized multiscale construction and its certified mean bound");

    m.def(
        "recursion_bound", &recursion_bound, py::arg("lam"), py::arg("theta"),
        py::arg("beta"), py::arg("c"), py::arg("t"), py::arg("k"),
        "Depth-k unrolled upper bound on log g(t)");

    m.def(
        "envelope_bound",
        [](double theta, double beta, double lam, double c, std::vector<double> times) {
            const auto env = g_envelope(theta, beta, lam, c);
            std::vector<double> out;
            out.reserve(times.size());
            for (double t : times) out.push_back(env(t));
            return out;
        },
        py::arg("theta"), py::arg("beta"), py::arg("lam"), py::arg("c"),
        py::arg("times"), "Solved envelope log G(t) at the given times");

    m.def("passage_bound", &passage_lower_tail_bound, py::arg("alpha"), py::arg("d"),
          py::arg("x_norm"), py::arg("t"),
          "Leading-order upper bound on log P(T(0,x) <= t)");

    m.def(
        "ks_two_sample",
        [](std::vector<double> a, std::vector<double> b) {
            const KsResult result = ks_two_sample(a, b);
            return py::make_tuple(result.statistic, result.p_value);
        },
        py::arg("a"), py::arg("b"), "Two-sample KS statistic and asymptotic p-value");

    m.def(
        "fit_stretched",
        [](const Series& series) { return estimate_to_dict(fit_stretched(series)); },
        py::arg("series"), "Stretched-exponential exponent from (t, D_t) rows");
    m.def(
        "fit_superlinear",
        [](const Series& series) { return estimate_to_dict(fit_superlinear(series)); },
        py::arg("series"), "Polynomial growth exponent from (t, D_t) rows");
    m.def(
        "fit_linear_speed",
        [](const Series& samples) { return estimate_to_dict(fit_linear_speed(samples)); },
        py::arg("samples"), "Passage-time speed from (n, T(0,n)) samples");

    m.def(
        "simulate",
        [](const std::string& config_text, const std::string& out_dir, int jobs,
           std::optional<std::uint64_t> seed, std::optional<int> replicas) {
            RunConfig config = prepare_config(config_text, seed, replicas);
            config.out_dir = out_dir;
            config.validate();
            std::string summary;
            {
                py::gil_scoped_release release;
                RunRecord record = run_campaign(config, jobs);
                write_run_directory(record);
                summary = slurp(config.out_dir + "/summary.json");
            }
            return summary;
        },
        py::arg("config_text"), py::arg("out_dir"), py::arg("jobs") = 1,
        py::arg("seed") = std::nullopt, py::arg("replicas") = std::nullopt,
        "Run a growth campaign, write the artifact directory, return the "
        "summary JSON text");

    m.def(
        "oracle_check",
        [](const std::string& config_text, int jobs,
           std::optional<std::uint64_t> seed, std::optional<int> replicas) {
            RunConfig config = prepare_config(config_text, seed, replicas);
            // The check writes nothing, but validation insists on a directory.
            if (config.out_dir.empty()) config.out_dir = ".";
            config.validate();
            std::string report;
            {
                py::gil_scoped_release release;
                report = run_oracle_check(config, jobs).to_json();
            }
            return report;
        },
        py::arg("config_text"), py::arg("jobs") = 1, py::arg("seed") = std::nullopt,
        py::arg("replicas") = std::nullopt,
        "Paired growth-vs-shortest-path law check; returns the report JSON text");
}
