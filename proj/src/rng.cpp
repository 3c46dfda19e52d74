#include "lrfpp/rng.hpp"

#include <cmath>

#include "lrfpp/errors.hpp"

namespace lrfpp {

double RngStream::next_exponential(double rate) {
    if (!(rate > 0.0)) throw DomainError("exponential draw requires rate > 0");
    // u in [0,1) so 1-u in (0,1]; -log1p(-u) is exact near u = 0 and never
    // produces infinity.
    return -std::log1p(-next_double()) / rate;
}

std::uint64_t RngStream::next_poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw DomainError("poisson draw requires a finite mean >= 0");
    if (mean == 0.0) return 0;
    if (mean < 10.0) {
        // Sequential inversion on a single uniform.
        double p = std::exp(-mean);
        double cum = p;
        const double u = next_double();
        std::uint64_t k = 0;
        while (u > cum) {
            ++k;
            p *= mean / static_cast<double>(k);
            cum += p;
            if (p < 1e-300) break;  // cumulative mass has saturated to 1
        }
        return k;
    }
    // Hormann's PTRD: a floored Laplace-type proposal around the mean with an
    // exact log-pmf acceptance test; only uniform draws are consumed.
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    while (true) {
        const double u = next_double() - 0.5;
        double v = next_double();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        if (lhs <= kf * log_mean - mean - std::lgamma(kf + 1.0))
            return static_cast<std::uint64_t>(kf);
    }
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
    if (n == 0) throw DomainError("next_below requires n >= 1");
    if (n == 1) return 0;  // no entropy needed
    // Lemire's method: accept unless the 128-bit product lands in the biased
    // low fringe.
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
        std::uint64_t threshold = -n % n;
        while (lo < threshold) {
            x = next_u64();
            m = static_cast<__uint128_t>(x) * n;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace lrfpp
