#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "lrfpp/kernel.hpp"
#include "lrfpp/rng.hpp"
#include "lrfpp/site.hpp"

namespace lrfpp {

// Draws displacements Y in Z^d with P(Y = x) = r(|x|_1) / lambda, where
// lambda is the total communication rate of the kernel.  The radial law
// P(|Y|_1 = k) = v_d(k) r(k) / lambda is realised as
//
//   * an alias table over 1 <= k <= tail_start() (exact), plus
//   * a tail bucket inverted on a precomputed log-log grid of the radial
//     tail-mass function (accurate to ~1e-4 relative; the bucket itself
//     carries the exact tail probability).
//
// Conditionally on the radius, the point is uniform on the l1 sphere.
// Radii are capped at 2^61 (per-draw cap probability is negligible except
// at the summability edge alpha = d); cap events are counted.
class DisplacementSampler {
public:
    explicit DisplacementSampler(const Kernel& kernel);

    // Radius with the law P(|Y|_1 = k); consumes RNG draws.
    std::int64_t sample_radius(RngStream& rng) const;

    // Full displacement: radius + uniform shell point.
    Site sample(RngStream& rng) const;

    // Exact pmf of the radial law (any k >= 1).
    double radial_pmf(std::int64_t k) const;

    double total_rate() const { return lambda_; }
    int dimension() const { return kernel_.d; }
    const Kernel& kernel() const { return kernel_; }

    // Last radius covered by the alias table; larger radii go through the
    // tail-inversion path.
    std::int64_t tail_start() const { return alias_max_; }

    // Probability that a single draw lands in the tail bucket.
    double tail_probability() const { return tail_mass_ / lambda_; }

    std::uint64_t cap_hits() const { return cap_hits_.load(std::memory_order_relaxed); }

    static constexpr std::int64_t kRadiusCap = std::int64_t{1} << 61;

private:
    std::int64_t invert_tail(double u) const;

    Kernel kernel_;
    std::int64_t alias_max_ = 0;     // alias table covers k in [1, alias_max_]
    double lambda_ = 0.0;            // head mass + tail mass (sampler-consistent)
    double tail_mass_ = 0.0;         // sum of term(k) for k > alias_max_
    std::vector<double> accept_;     // alias acceptance thresholds (outcome 0 = tail)
    std::vector<std::uint32_t> alias_;
    std::vector<double> knot_log2_x_;  // tail grid: log2 radius
    std::vector<double> knot_log_t_;   // tail grid: log tail mass
    mutable std::atomic<std::uint64_t> cap_hits_{0};
};

// Uniform point on the l1 sphere {x in Z^d : |x|_1 = k}.  Exposed separately
// because it is exact combinatorics worth testing on its own.  The _into
// variant writes d coordinates without constructing a Site (hot-loop use).
Site sample_on_shell(int d, std::int64_t k, RngStream& rng);
void sample_on_shell_into(int d, std::int64_t k, RngStream& rng, Coord* out);

}  // namespace lrfpp
