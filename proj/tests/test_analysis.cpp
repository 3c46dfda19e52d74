#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "lrfpp/analysis.hpp"
#include "lrfpp/growth.hpp"

using namespace lrfpp;

namespace {

// Plain least-squares slope with its standard error, for test-side checks.
struct Slope {
    double value;
    double se;
};
Slope slope_of(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - my - slope * (x[i] - mx);
        rss += r * r;
    }
    return {slope, std::sqrt(rss / (static_cast<double>(n) - 2.0) / sxx)};
}

}  // namespace

TEST_CASE("diameter: hand example and brute-force equivalence") {
    CHECK(diameter({Site::origin(2)}) == 0);
    CHECK(diameter({Site{0, 0}, Site{3, 0}, Site{0, -2}}) == 5);

    std::mt19937_64 gen(42);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 1 + static_cast<int>(gen() % 4);
        std::vector<Site> cloud;
        for (int i = 0; i < 50; ++i) {
            std::vector<Coord> c(static_cast<std::size_t>(d));
            for (auto& v : c) v = static_cast<Coord>(gen() % 2001) - 1000;
            cloud.push_back(Site(c));
        }
        std::int64_t brute = 0;
        for (std::size_t i = 0; i < cloud.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                brute = std::max(brute, l1_dist(cloud[i], cloud[j]));
        CHECK(diameter(cloud) == brute);
    }
}

TEST_CASE("synthetic exponent fits recover the planted exponents") {
    Series stretched, superlinear, logcorr;
    for (int i = 0; i < 40; ++i) {
        const double t = std::pow(10.0, 0.1 * i + 0.3);
        stretched.emplace_back(t, std::exp(std::pow(t, 0.6)));
        superlinear.emplace_back(t, t * t);
        logcorr.emplace_back(t, std::exp(0.3 * std::log(t) * std::log(t)));
    }
    const auto e1 = fit_stretched(stretched);
    CHECK(e1.kind == ExponentKind::StretchedInvDelta);
    CHECK(e1.value == doctest::Approx(0.600).epsilon(0.02 / 0.6));
    CHECK(e1.n_points >= 5);
    CHECK(e1.t_lo > 0.0);
    CHECK(e1.t_hi > e1.t_lo);

    const auto e2 = fit_superlinear(superlinear);
    CHECK(e2.value == doctest::Approx(2.00).epsilon(0.01 / 2.0));

    const auto e3 = fit_log_corrected(logcorr);
    CHECK(e3.value == doctest::Approx(0.300).epsilon(0.01 / 0.3));

    // The fit window is the top half of the log-t range.
    CHECK(std::log(e2.t_lo) >=
          0.5 * (std::log(superlinear.front().first) + std::log(superlinear.back().first)) -
              1e-9);
}

TEST_CASE("degenerate and underdetermined fits are flagged, not invented") {
    Series flat;
    for (int i = 0; i < 12; ++i) flat.emplace_back(std::pow(2.0, i), 7.0);
    const auto est = fit_superlinear(flat);
    CHECK(est.degenerate);
    CHECK(est.value == doctest::Approx(0.0));

    Series tiny{{1.0, 2.0}, {2.0, 4.0}, {4.0, 8.0}};
    CHECK_THROWS_AS(fit_superlinear(tiny), FitError);
    CHECK_THROWS_AS(fit_stretched(Series{}), FitError);

    // Quadratic data pushed through the log-corrected model leaves visibly
    // structured residuals; the stretched fit is the one that matches.
    Series quad;
    for (int i = 0; i < 40; ++i) {
        const double t = std::pow(10.0, 0.1 * i);
        quad.emplace_back(t, t * t);
    }
    const auto wrong = fit_log_corrected(quad);
    // log v = 2 log t is linear in log t, so against (log t)^2 the slope
    // decays with the window — far from any stable positive constant.
    CHECK(wrong.value < 0.3);
}

TEST_CASE("linear speed: deterministic data and windowing") {
    Series samples;
    for (double n : {16.0, 32.0, 64.0, 128.0})
        for (int i = 0; i < 8; ++i) samples.emplace_back(n, 3.0 * n);
    const auto est = fit_linear_speed(samples);
    CHECK(est.kind == ExponentKind::LinearSpeed);
    CHECK(est.value == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(est.std_error == doctest::Approx(0.0));
    REQUIRE(est.convergence_gap.has_value());
    CHECK(*est.convergence_gap == doctest::Approx(0.0));
    CHECK(est.t_hi == doctest::Approx(128.0));
    CHECK(est.t_lo == doctest::Approx(64.0));

    // Less than two doublings of n is not enough to call it a speed.
    Series narrow;
    for (double n : {16.0, 24.0})
        for (int i = 0; i < 8; ++i) narrow.emplace_back(n, 3.0 * n);
    CHECK_THROWS_AS(fit_linear_speed(narrow), FitError);
}

TEST_CASE("linear speed and subadditivity on simulated passage times") {
    // d=1, alpha=4 sits in the linear regime: collect T(0, n) by running the
    // growth until the target joins, for n and 2n.
    Kernel kernel{.d = 1, .alpha = 4.0};
    const DisplacementSampler sampler(kernel);
    const std::int64_t n = 8;
    std::vector<double> t_n, t_2n;
    constexpr int kSeeds = 200;
    for (int s = 0; s < kSeeds; ++s) {
        for (const std::int64_t target : {n, 2 * n}) {
            RngStream rng(4000 + static_cast<std::uint64_t>(s), "speed-subadd",
                          static_cast<std::uint64_t>(target));
            GrowthState state(sampler);
            StopRule stop;
            stop.target_site = Site{static_cast<Coord>(target)};
            stop.max_volume = 1 << 20;
            const RunTrace trace = run_growth(state, stop, 8.0, rng);
            REQUIRE(state.contains(*stop.target_site));
            (target == n ? t_n : t_2n).push_back(trace.final_time);
        }
    }
    double mean_n = 0.0, mean_2n = 0.0, var_2n = 0.0;
    for (double v : t_n) mean_n += v;
    for (double v : t_2n) mean_2n += v;
    mean_n /= kSeeds;
    mean_2n /= kSeeds;
    for (double v : t_2n) var_2n += (v - mean_2n) * (v - mean_2n);
    var_2n /= (kSeeds - 1);
    // Subadditive structure: mean T(0, 2n) <= 2 mean T(0, n) + 3 sigma.
    CHECK(mean_2n <= 2.0 * mean_n + 3.0 * std::sqrt(var_2n / kSeeds));
}

TEST_CASE("empirical shape: scaling, inclusion monotonicity, hull") {
    std::vector<std::pair<Site, double>> occ{
        {Site{0, 0}, 0.0}, {Site{4, 0}, 1.0},  {Site{0, 4}, 2.0},
        {Site{-4, 0}, 3.0}, {Site{0, -4}, 4.0}, {Site{1, 1}, 0.5}};
    const ShapeCloud at4 = empirical_shape(occ, 4.0);
    CHECK(at4.points.size() == 6);
    CHECK(at4.hull.size() == 4);  // the four axis extremes; (1,1)/4 is interior
    const ShapeCloud at2 = empirical_shape(occ, 2.0);
    CHECK(at2.points.size() == 4);
    // Scaled coordinates are x / t.
    bool found = false;
    for (const auto& p : at2.points)
        if (p[0] == doctest::Approx(2.0) && p[1] == doctest::Approx(0.0)) found = true;
    CHECK(found);
    // Before the first jump only the origin qualifies.
    CHECK(empirical_shape(occ, 0.25).points.size() == 1);
    // Beyond the recorded horizon the cloud is unknown.
    CHECK_THROWS_AS(empirical_shape(occ, 5.0), DomainError);

    // Lattice symmetry: per-axis means of a symmetric cloud vanish.
    const auto& pts = at4.points;
    double sx = 0.0, sy = 0.0;
    for (const auto& p : pts) {
        sx += p[0];
        sy += p[1];
    }
    CHECK(std::abs(sx) / static_cast<double>(pts.size()) <= 0.25);
    CHECK(std::abs(sy) / static_cast<double>(pts.size()) <= 0.25);
}

TEST_CASE("longest tree link scales sublinearly with diameter in the linear phase") {
    // alpha = 4 (linear regime): regression of log max_jump on log diameter
    // across growth snapshots stays strictly below slope 1 (3 sigma).
    // alpha = 1.5 (stretched regime): jumps are of the order of the diameter
    // itself, so the same regression sits far higher.
    auto collect = [](double alpha, std::uint64_t volume_cap) {
        Kernel kernel{.d = 1, .alpha = alpha};
        const DisplacementSampler sampler(kernel);
        std::vector<double> log_d, log_j;
        for (int s = 0; s < 10; ++s) {
            RngStream rng(7000 + static_cast<std::uint64_t>(s), "jump-scaling");
            GrowthState state(sampler);
            StopRule stop;
            stop.max_volume = volume_cap;
            const RunTrace trace = run_growth(state, stop, 1.6, rng);
            for (const TraceRow& row : trace.rows) {
                if (row.diameter >= 8 && row.max_jump >= 1) {
                    log_d.push_back(std::log(static_cast<double>(row.diameter)));
                    log_j.push_back(std::log(static_cast<double>(row.max_jump)));
                }
            }
        }
        return slope_of(log_d, log_j);
    };
    const Slope linear_regime = collect(4.0, 30000);
    CHECK(linear_regime.value + 3.0 * linear_regime.se < 1.0);
    const Slope stretched_regime = collect(1.5, 30000);
    CHECK(stretched_regime.value > linear_regime.value);
}

TEST_CASE("two-sample KS: degeneracy, calibration, separation, guards") {
    std::mt19937_64 gen(7);
    auto unif = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };

    std::vector<double> a(1000);
    for (auto& v : a) v = unif();
    const KsResult same = ks_two_sample(a, a);
    CHECK(same.statistic == doctest::Approx(0.0));
    CHECK(same.p_value == doctest::Approx(1.0));

    // Size-0.01 test rejects ~1% of null pairs: over 100 independent pairs
    // demand at least 98 acceptances.
    int accepted = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(1000), y(1000);
        for (auto& v : x) v = unif();
        for (auto& v : y) v = unif();
        if (ks_two_sample(x, y).p_value > 0.01) ++accepted;
    }
    CHECK(accepted >= 98);

    // A 0.2 shift at n = 1000 is overwhelming evidence.
    std::vector<double> shifted(1000);
    for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = a[i] + 0.2;
    CHECK(ks_two_sample(a, shifted).p_value < 1e-6);

    // Small samples are refused rather than silently unreliable.
    std::vector<double> small(99, 0.5);
    CHECK_THROWS_AS(ks_two_sample(small, a), DomainError);
    CHECK_THROWS_AS(ks_two_sample(a, small), DomainError);
}

TEST_CASE("DKW band width") {
    CHECK(dkw_epsilon(2000, 0.999) ==
          doctest::Approx(std::sqrt(std::log(2.0 / 0.001) / 4000.0)).epsilon(1e-12));
    CHECK(dkw_epsilon(500, 0.95) ==
          doctest::Approx(std::sqrt(std::log(2.0 / 0.05) / 1000.0)).epsilon(1e-12));
}

TEST_CASE("median pooling across replicas on a shared geometric grid") {
    Series r1{{0.0, 0.0}, {1.0, 2.0}, {4.0, 6.0}, {16.0, 10.0}};
    Series r2{{0.0, 0.0}, {2.0, 4.0}, {8.0, 8.0}, {16.0, 12.0}};
    const Series pooled = pool_median({r1, r2}, 3);
    REQUIRE(pooled.size() == 3);
    // Grid spans [max first positive t, min last t] = [2, 16].
    CHECK(pooled.front().first == doctest::Approx(2.0));
    CHECK(pooled.back().first == doctest::Approx(16.0));
    // Right-continuous step evaluation, then the across-replica median.
    CHECK(pooled[0].second == doctest::Approx(3.0));   // median(2, 4)
    CHECK(pooled[1].second == doctest::Approx(5.0));   // t = 5.66: median(6, 4)
    CHECK(pooled[2].second == doctest::Approx(11.0));  // median(10, 12)
}
