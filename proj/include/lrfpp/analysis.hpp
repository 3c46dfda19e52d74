// analysis.hpp — statistical estimators over growth traces and oracle output:
// exact diameters, regression-based growth-exponent estimates, linear-speed
// estimates, scaled shape clouds, and the two-sample Kolmogorov–Smirnov test.
//
// Fit conventions: the asymptotic theorems say nothing about early times, so
// regressions run over the top half of the log-t range of the supplied series
// (burn-in discarded), pooled series are per-time-point medians across seeds
// (robust to the heavy upper tail of the diameter), and every estimate
// reports its standard error, the window actually used, and the point count
// (at least 5 enforced).
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lrfpp/growth.hpp"
#include "lrfpp/site.hpp"

namespace lrfpp {

// A time series of (t, value) rows, or (n, sample) pairs for speed fits.
using Series = std::vector<std::pair<double, double>>;

enum class ExponentKind {
    StretchedInvDelta,      // slope of log log D_t vs log t, targets 1/Delta
    SuperlinearInvGamma,    // slope of log D_t vs log t, targets 1/Gamma
    LogCorrected,           // slope of log D_t vs (log t)^2
    LinearSpeed,            // mean T(0, nx)/n at the largest n, targets nu(x)
    ExponentialVolumeRate,  // slope of log |B_t| vs t
};

struct ExponentEstimate {
    ExponentKind kind = ExponentKind::LinearSpeed;
    double value = 0.0;
    double std_error = 0.0;
    // Fit window actually used: [t_lo, t_hi] (for LinearSpeed, the two scales
    // entering the convergence diagnostic).
    double t_lo = 0.0;
    double t_hi = 0.0;
    int n_points = 0;
    // The response was constant over the window: the slope is pinned at 0
    // and must not be read as a measured exponent.
    bool degenerate = false;
    // LinearSpeed only: |mean T/n at n_max - mean T/n at ~n_max/2|, the
    // finite-size convergence gap.
    std::optional<double> convergence_gap;
};

// Exact max pairwise l1 distance of a nonempty point set, computed as the
// largest spread of the 2^{d-1} signed coordinate functionals (linear in the
// number of points rather than quadratic).
std::int64_t diameter(const std::vector<Site>& sites);

// Slope of log log D_t against log t over the top half of the log-t range;
// rows with D_t < 3 (log log unstable) are excluded.  Targets 1/Delta in the
// stretched-exponential regime.
ExponentEstimate fit_stretched(const Series& series);

// Slope of log D_t against log t over the same window; rows with D_t < 1
// excluded.  Targets 1/Gamma in the superlinear regime.
ExponentEstimate fit_superlinear(const Series& series);

// Slope of log D_t against (log t)^2 over the same window.  The meaningful
// verdict in the critical regime is boundedness of the ratio, not the point
// value; callers should inspect the window ratio as well.
ExponentEstimate fit_log_corrected(const Series& series);

// Slope of log V_t (volume) against t over the same window; targets the
// exponential growth rate at the summability boundary.
ExponentEstimate fit_exponential_rate(const Series& series);

// Passage-time speed from (n, T(0, n x)) samples: the mean of T/n over the
// samples at the largest n, with a bootstrap standard error (deterministic
// resampling) and the gap to the mean at roughly n/2 as a convergence
// diagnostic.  Requires the n values to span at least two doublings and at
// least 5 samples at the largest n.
ExponentEstimate fit_linear_speed(const Series& samples);

struct ShapeCloud {
    int d = 1;
    double t = 0.0;
    // Occupied sites with occupation time <= t, scaled by 1/t.
    std::vector<std::array<double, kMaxDim>> points;
    // d = 2 only: convex hull of the points, counter-clockwise.
    std::vector<std::array<double, 2>> hull;
};

// The scaled occupied cloud t^{-1} B_t from (site, occupation time) pairs.
// Requires 0 < t <= the largest recorded time.
ShapeCloud empirical_shape(const std::vector<std::pair<Site, double>>& times, double t);

// Longest tree link |site - parent|_1 over the occupied set, recomputed from
// the recorded parent links (the state's running functional must agree).
std::int64_t max_jump(const GrowthState& state);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov p-value.
// The asymptotic distribution is unreliable for small samples, so both sides
// must have at least 100 entries.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Two-sided Dvoretzky-Kiefer-Wolfowitz envelope half-width: the empirical
// CDF of n samples stays within this of the truth with the given confidence.
double dkw_epsilon(std::size_t n, double confidence);

// Pools replica series onto a common geometric time grid: each replica is
// read as a right-continuous step function, the grid spans [max of first
// positive row times, min of last row times], and the pooled value is the
// per-grid-point median across replicas.
Series pool_median(const std::vector<Series>& replicas, int grid_points);

}  // namespace lrfpp
