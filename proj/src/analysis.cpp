#include "lrfpp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>

#include "lrfpp/errors.hpp"
#include "lrfpp/rng.hpp"

namespace lrfpp {

std::int64_t diameter(const std::vector<Site>& sites) {
    if (sites.empty()) throw DomainError("diameter of an empty set is undefined");
    const int d = sites.front().dim();
    const int nfun = 1 << (d - 1);
    std::int64_t fmin[128];
    std::int64_t fmax[128];
    for (int f = 0; f < nfun; ++f) {
        fmin[f] = std::numeric_limits<std::int64_t>::max();
        fmax[f] = std::numeric_limits<std::int64_t>::min();
    }
    for (const Site& s : sites) {
        if (s.dim() != d) throw DomainError("sites must share a dimension");
        const Coord* c = s.data();
        for (int f = 0; f < nfun; ++f) {
            std::int64_t dot = c[0];
            for (int i = 1; i < d; ++i) dot += ((f >> (i - 1)) & 1) ? -c[i] : c[i];
            fmin[f] = std::min(fmin[f], dot);
            fmax[f] = std::max(fmax[f], dot);
        }
    }
    std::int64_t best = 0;
    for (int f = 0; f < nfun; ++f) best = std::max(best, fmax[f] - fmin[f]);
    return best;
}

// ---------------------------------------------------------------------------
// Regression fits
// ---------------------------------------------------------------------------

namespace {

struct Regression {
    double slope = 0.0;
    double std_error = 0.0;
    bool degenerate = false;
};

Regression least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xbar += x[i];
        ybar += y[i];
    }
    xbar /= n;
    ybar /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - xbar;
        const double dy = y[i] - ybar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw FitError("fit abscissae are degenerate");
    Regression reg;
    if (syy == 0.0) {
        reg.degenerate = true;
        return reg;
    }
    reg.slope = sxy / sxx;
    const double rss = std::max(0.0, syy - reg.slope * sxy);
    reg.std_error = std::sqrt(rss / (n - 2.0) / sxx);
    return reg;
}

// Shared driver for the growth-exponent fits: keeps the rows in the top half
// of the log-t range whose response passes `min_response`, transforms them,
// and regresses.
ExponentEstimate windowed_fit(const Series& series, ExponentKind kind,
                              double min_response, double (*fx)(double),
                              double (*fy)(double)) {
    std::vector<std::pair<double, double>> rows;
    rows.reserve(series.size());
    for (const auto& [t, v] : series)
        if (t > 0.0 && std::isfinite(v)) rows.emplace_back(t, v);
    if (rows.empty()) throw FitError("no rows with positive time");
    std::sort(rows.begin(), rows.end());
    const double cut =
        0.5 * (std::log(rows.front().first) + std::log(rows.back().first));

    std::vector<double> xs, ys;
    double t_lo = 0.0, t_hi = 0.0;
    for (const auto& [t, v] : rows) {
        if (std::log(t) < cut || v < min_response) continue;
        if (xs.empty()) t_lo = t;
        t_hi = t;
        xs.push_back(fx(t));
        ys.push_back(fy(v));
    }
    if (xs.size() < 5) throw FitError("need at least 5 usable rows in the fit window");

    const Regression reg = least_squares_slope(xs, ys);
    ExponentEstimate est;
    est.kind = kind;
    est.value = reg.slope;
    est.std_error = reg.std_error;
    est.degenerate = reg.degenerate;
    est.t_lo = t_lo;
    est.t_hi = t_hi;
    est.n_points = static_cast<int>(xs.size());
    return est;
}

double id_log(double t) { return std::log(t); }
double id_log_sq(double t) { const double l = std::log(t); return l * l; }
double resp_log(double v) { return std::log(v); }
double resp_loglog(double v) { return std::log(std::log(v)); }

}  // namespace

ExponentEstimate fit_stretched(const Series& series) {
    return windowed_fit(series, ExponentKind::StretchedInvDelta, 3.0, id_log, resp_loglog);
}

ExponentEstimate fit_superlinear(const Series& series) {
    return windowed_fit(series, ExponentKind::SuperlinearInvGamma, 1.0, id_log, resp_log);
}

ExponentEstimate fit_log_corrected(const Series& series) {
    return windowed_fit(series, ExponentKind::LogCorrected, 1.0, id_log_sq, resp_log);
}

ExponentEstimate fit_exponential_rate(const Series& series) {
    return windowed_fit(series, ExponentKind::ExponentialVolumeRate, 1.0,
                        [](double t) { return t; }, resp_log);
}

ExponentEstimate fit_linear_speed(const Series& samples) {
    std::map<double, std::vector<double>> by_n;
    for (const auto& [n, value] : samples) {
        if (!(n > 0.0)) throw FitError("scales n must be positive");
        by_n[n].push_back(value);
    }
    if (by_n.empty()) throw FitError("no samples");
    const double n_min = by_n.begin()->first;
    const double n_max = by_n.rbegin()->first;
    if (!(n_max >= 4.0 * n_min * (1.0 - 1e-12)))
        throw FitError("scales must span at least two doublings");
    const std::vector<double>& top = by_n.rbegin()->second;
    if (top.size() < 5) throw FitError("need at least 5 samples at the largest scale");

    double mean_top = 0.0;
    for (double v : top) mean_top += v / n_max;
    mean_top /= static_cast<double>(top.size());

    // Bootstrap standard error with deterministic resampling.
    RngStream rng(1u, "speed-bootstrap");
    constexpr int kBoot = 1000;
    std::vector<double> boot(kBoot);
    for (int b = 0; b < kBoot; ++b) {
        double m = 0.0;
        for (std::size_t i = 0; i < top.size(); ++i)
            m += top[rng.next_below(top.size())] / n_max;
        boot[static_cast<std::size_t>(b)] = m / static_cast<double>(top.size());
    }
    double bbar = 0.0;
    for (double v : boot) bbar += v;
    bbar /= kBoot;
    double bvar = 0.0;
    for (double v : boot) bvar += (v - bbar) * (v - bbar);
    bvar /= (kBoot - 1);

    // Convergence diagnostic against the group nearest n_max / 2.
    double n_half = n_min;
    for (const auto& [n, vals] : by_n) {
        if (n >= n_max) break;
        if (std::abs(std::log(n / (0.5 * n_max))) <
            std::abs(std::log(n_half / (0.5 * n_max))))
            n_half = n;
    }
    const std::vector<double>& half = by_n.at(n_half);
    double mean_half = 0.0;
    for (double v : half) mean_half += v / n_half;
    mean_half /= static_cast<double>(half.size());

    ExponentEstimate est;
    est.kind = ExponentKind::LinearSpeed;
    est.value = mean_top;
    est.std_error = std::sqrt(bvar);
    est.t_lo = n_half;
    est.t_hi = n_max;
    est.n_points = static_cast<int>(top.size());
    est.convergence_gap = std::abs(mean_top - mean_half);
    return est;
}

// ---------------------------------------------------------------------------
// Shape cloud
// ---------------------------------------------------------------------------

namespace {

double cross(const std::array<double, 2>& o, const std::array<double, 2>& a,
             const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

std::vector<std::array<double, 2>> convex_hull(std::vector<std::array<double, 2>> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<std::array<double, 2>> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace

ShapeCloud empirical_shape(const std::vector<std::pair<Site, double>>& times, double t) {
    if (times.empty()) throw DomainError("no occupation times supplied");
    if (!(t > 0.0)) throw DomainError("shape clouds need t > 0");
    const int d = times.front().first.dim();
    double t_max = 0.0;
    for (const auto& [site, when] : times) {
        if (site.dim() != d) throw DomainError("sites must share a dimension");
        t_max = std::max(t_max, when);
    }
    if (t > t_max) throw DomainError("t exceeds the largest recorded occupation time");

    ShapeCloud cloud;
    cloud.d = d;
    cloud.t = t;
    for (const auto& [site, when] : times) {
        if (when > t) continue;
        std::array<double, kMaxDim> p{};
        for (int i = 0; i < d; ++i) p[static_cast<std::size_t>(i)] = site.data()[i] / t;
        cloud.points.push_back(p);
    }
    if (d == 2) {
        std::vector<std::array<double, 2>> flat;
        flat.reserve(cloud.points.size());
        for (const auto& p : cloud.points) flat.push_back({p[0], p[1]});
        cloud.hull = convex_hull(std::move(flat));
    }
    return cloud;
}

std::int64_t max_jump(const GrowthState& state) {
    std::int64_t best = 0;
    const int d = state.dim();
    for (std::uint32_t idx = 0; idx < state.volume(); ++idx) {
        const std::uint32_t par = state.parent(idx);
        if (par == GrowthState::kNoParent) continue;
        const Site child = state.site(idx);
        const Site parent = state.site(par);
        std::int64_t len = 0;
        for (int i = 0; i < d; ++i) len += std::llabs(child.data()[i] - parent.data()[i]);
        best = std::max(best, len);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Two-sample KS and pooling
// ---------------------------------------------------------------------------

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 100 || b.size() < 100)
        throw DomainError("the asymptotic KS p-value needs at least 100 samples per side");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    KsResult result;
    result.statistic = d;
    if (lambda < 0.2) {
        result.p_value = 1.0;  // the alternating series is numerically useless here
        return result;
    }
    double p = 0.0;
    for (int k = 1; k <= 100; ++k)
        p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    result.p_value = std::clamp(p, 0.0, 1.0);
    return result;
}

double dkw_epsilon(std::size_t n, double confidence) {
    if (n == 0) throw DomainError("the DKW band needs at least one sample");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw DomainError("confidence must lie in (0, 1)");
    const double delta = 1.0 - confidence;
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

Series pool_median(const std::vector<Series>& replicas, int grid_points) {
    if (replicas.empty()) throw DomainError("no series to pool");
    if (grid_points < 1) throw DomainError("the pooled grid needs at least one point");

    std::vector<Series> sorted(replicas);
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    bool any_positive = false;
    for (auto& s : sorted) {
        if (s.empty()) throw DomainError("every replica series must be nonempty");
        std::sort(s.begin(), s.end());
        hi = std::min(hi, s.back().first);
        for (const auto& [t, v] : s)
            if (t > 0.0) {
                lo = std::max(lo, t);
                any_positive = true;
                break;
            }
    }

    // Right-continuous step read-out: the value of the last row at or before t.
    const auto value_at = [](const Series& s, double t) {
        auto it = std::upper_bound(s.begin(), s.end(), t,
                                   [](double x, const auto& row) { return x < row.first; });
        if (it == s.begin()) return s.front().second;
        return std::prev(it)->second;
    };

    std::vector<double> grid;
    if (!any_positive || !(lo < hi) || grid_points == 1) {
        grid.push_back(hi);
    } else {
        const double ratio = hi / lo;
        for (int i = 0; i < grid_points; ++i)
            grid.push_back(lo * std::pow(ratio, static_cast<double>(i) / (grid_points - 1)));
    }

    Series pooled;
    pooled.reserve(grid.size());
    std::vector<double> column(sorted.size());
    for (double g : grid) {
        for (std::size_t r = 0; r < sorted.size(); ++r) column[r] = value_at(sorted[r], g);
        std::sort(column.begin(), column.end());
        const std::size_t n = column.size();
        const double med =
            (n % 2) ? column[n / 2] : 0.5 * (column[n / 2 - 1] + column[n / 2]);
        pooled.emplace_back(g, med);
    }
    return pooled;
}

}  // namespace lrfpp
