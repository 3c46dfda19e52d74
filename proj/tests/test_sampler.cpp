#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "lrfpp/kernel.hpp"
#include "lrfpp/rng.hpp"
#include "lrfpp/sampler.hpp"

using namespace lrfpp;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("radial pmf is the normalized shell mass") {
    Kernel kernel{.d = 1, .alpha = 2.0};
    DisplacementSampler sampler(kernel);
    // d=1, alpha=2: P(|Y| = 1) = 2 / (2 zeta(2)) = 6 / pi^2.
    CHECK(sampler.radial_pmf(1) == doctest::Approx(6.0 / (kPi * kPi)).epsilon(1e-11));
    CHECK(sampler.total_rate() == doctest::Approx(kPi * kPi / 3.0).epsilon(1e-11));
    // pmf sums to 1 over a long prefix + exact tail bucket behaviour.
    double head = 0.0;
    for (std::int64_t k = 1; k <= 200000; ++k) head += sampler.radial_pmf(k);
    CHECK(head > 0.99999);
    CHECK(head < 1.0 + 1e-12);
}

TEST_CASE("radius sampling matches the pmf, including the tail bucket") {
    Kernel kernel{.d = 2, .alpha = 4.5};
    DisplacementSampler sampler(kernel);
    RngStream rng(11, "radius");
    constexpr int n = 400000;
    std::map<std::int64_t, int> counts;
    for (int i = 0; i < n; ++i) ++counts[sampler.sample_radius(rng)];
    // Exact head classes: 5 sigma binomial bands.
    for (std::int64_t k = 1; k <= 8; ++k) {
        const double p = sampler.radial_pmf(k);
        const double sd = std::sqrt(n * p * (1.0 - p));
        CHECK(std::abs(counts[k] - n * p) < 5.0 * sd + 1.0);
    }
    // Aggregate tail beyond the alias table: the bucket mass is exact.
    const std::int64_t head_end = sampler.tail_start();
    double tail_obs = 0.0;
    for (const auto& [k, c] : counts)
        if (k > head_end) tail_obs += c;
    const double p_tail = sampler.tail_probability();
    CHECK(std::abs(tail_obs - n * p_tail) < 5.0 * std::sqrt(n * p_tail) + 1.0);
}

TEST_CASE("shell points are uniform on the l1 sphere") {
    RngStream rng(3, "shell");
    // d=2, k=3: 12 lattice points, each with probability 1/12.
    std::map<std::pair<Coord, Coord>, int> counts;
    constexpr int n = 120000;
    for (int i = 0; i < n; ++i) {
        const Site s = sample_on_shell(2, 3, rng);
        REQUIRE(s.l1() == 3);
        ++counts[{s[0], s[1]}];
    }
    CHECK(counts.size() == 12);
    for (const auto& [xy, c] : counts)
        CHECK(std::abs(c - n / 12) < 5.0 * std::sqrt(n / 12.0));

    // d=3: counts on the sphere k=2 (18 points), all equal.
    std::map<std::vector<Coord>, int> counts3;
    for (int i = 0; i < n; ++i) {
        const Site s = sample_on_shell(3, 2, rng);
        REQUIRE(s.l1() == 2);
        ++counts3[s.coords()];
    }
    CHECK(counts3.size() == 18);
    for (const auto& [xyz, c] : counts3)
        CHECK(std::abs(c - n / 18.0) < 5.0 * std::sqrt(n / 18.0));
}

TEST_CASE("full displacement law: P(Y = x) = r(|x|) / lambda") {
    Kernel kernel{.d = 1, .alpha = 3.0};
    DisplacementSampler sampler(kernel);
    RngStream rng(8, "disp");
    constexpr int n = 300000;
    std::map<Coord, int> counts;
    for (int i = 0; i < n; ++i) ++counts[sampler.sample(rng)[0]];
    const double lambda = sampler.total_rate();
    for (Coord x : {-3, -2, -1, 1, 2, 3}) {
        const double p = rate(kernel, std::abs(x)) / lambda;
        CHECK(std::abs(counts[x] - n * p) < 5.0 * std::sqrt(n * p * (1.0 - p)) + 1.0);
    }
    CHECK(counts.count(0) == 0);  // displacements are never zero
}

TEST_CASE("sampler rejects non-summable kernels") {
    CHECK_THROWS_AS(DisplacementSampler(Kernel{.d = 1, .alpha = 1.0}), InstantaneousRegime);
    CHECK_THROWS_AS(DisplacementSampler(Kernel{.d = 2, .alpha = 1.7}), InstantaneousRegime);
}
