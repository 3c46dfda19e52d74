#include "lrfpp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lrfpp/errors.hpp"

namespace lrfpp {

namespace {

std::uint64_t binom_small(int n, int r) {
    if (r < 0 || r > n) return 0;
    std::uint64_t c = 1;
    for (int j = 1; j <= r; ++j) c = c * static_cast<std::uint64_t>(n - r + j) / static_cast<std::uint64_t>(j);
    return c;
}

// C(k-1, i-1) in floating point, valid for huge k.
double binom_shell_real(std::int64_t k, int i) {
    double c = 1.0;
    for (int j = 1; j <= i - 1; ++j)
        c *= static_cast<double>(k - i + j) / static_cast<double>(j);
    return c;
}

}  // namespace

DisplacementSampler::DisplacementSampler(const Kernel& kernel) : kernel_(kernel) {
    kernel_.validate();
    if (!kernel_.summable())
        throw InstantaneousRegime("displacement law undefined: total communication rate diverges for " +
                                  kernel_.describe());
    RadialMass mass(kernel_);

    // Grow the exactly-tabled head until the tail bucket is small (or the
    // table hits its size cap; a fat bucket just means more tail draws).
    std::int64_t k0 = 1024;
    const std::int64_t k0_cap = std::int64_t{1} << 18;
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(k0));
    double head = 0.0;
    for (std::int64_t k = 1; k <= k0; ++k) {
        terms.push_back(mass.term(k));
        head += terms.back();
    }
    double tail = mass.tail(static_cast<double>(k0));
    while (tail > 1e-3 * (head + tail) && k0 < k0_cap) {
        std::int64_t k2 = k0 * 2;
        for (std::int64_t k = k0 + 1; k <= k2; ++k) {
            terms.push_back(mass.term(k));
            head += terms.back();
        }
        k0 = k2;
        tail = mass.tail(static_cast<double>(k0));
    }
    alias_max_ = k0;
    tail_mass_ = tail;
    lambda_ = head + tail;

    // Vose alias table over outcomes {0 = tail bucket, k = radius k}.
    const std::size_t n = static_cast<std::size_t>(k0) + 1;
    std::vector<double> q(n);
    q[0] = tail_mass_ / lambda_ * static_cast<double>(n);
    for (std::size_t k = 1; k < n; ++k) q[k] = terms[k - 1] / lambda_ * static_cast<double>(n);
    accept_.assign(n, 1.0);
    alias_.resize(n);
    for (std::size_t i = 0; i < n; ++i) alias_[i] = static_cast<std::uint32_t>(i);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) (q[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    while (!small.empty() && !large.empty()) {
        std::uint32_t s = small.back();
        small.pop_back();
        std::uint32_t l = large.back();
        large.pop_back();
        accept_[s] = q[s];
        alias_[s] = l;
        q[l] -= 1.0 - q[s];
        (q[l] < 1.0 ? small : large).push_back(l);
    }
    // Whatever remains is within rounding of probability 1.

    // Tail-inversion grid: log tail mass at radii k0 * 2^{i/2}, out to the
    // radius cap or until the mass has decayed far below anything a 64-bit
    // uniform can ask for.
    const double s_max = 61.0;
    double s0 = std::log2(static_cast<double>(k0));
    double log_t0 = std::log(tail_mass_);
    for (double s = s0;; s += 0.5) {
        if (s > s_max) s = s_max;
        double t = mass.tail(std::exp2(s));
        if (!(t > 0.0)) break;
        knot_log2_x_.push_back(s);
        knot_log_t_.push_back(std::log(t));
        if (s >= s_max || knot_log_t_.back() < log_t0 - 60.0) break;
    }
    if (knot_log2_x_.size() < 2) {
        // Degenerate (extremely steep kernel): synthesise a second knot so the
        // interpolation below always has a segment to work with.
        knot_log2_x_.push_back(s0 + 0.5);
        knot_log_t_.push_back(knot_log_t_.empty() ? -700.0 : knot_log_t_.back() - 60.0);
        if (knot_log2_x_.size() < 2) {
            knot_log2_x_.insert(knot_log2_x_.begin(), s0);
            knot_log_t_.insert(knot_log_t_.begin(), log_t0);
        }
    }
}

std::int64_t DisplacementSampler::invert_tail(double u) const {
    // Solve T(x) = u * T(k0) on the log-log grid; T is the radial mass beyond x.
    u = std::max(u, 0x1.0p-64);
    double target = knot_log_t_.front() + std::log(u);
    // First knot with log T <= target (log T is strictly decreasing).
    auto it = std::lower_bound(knot_log_t_.begin(), knot_log_t_.end(), target, std::greater<double>());
    std::size_t hi = static_cast<std::size_t>(it - knot_log_t_.begin());
    if (hi == 0) hi = 1;
    if (hi >= knot_log_t_.size()) hi = knot_log_t_.size() - 1;  // extrapolate from last segment
    std::size_t lo = hi - 1;
    double denom = knot_log_t_[lo] - knot_log_t_[hi];
    double frac = denom > 0.0 ? (knot_log_t_[lo] - target) / denom : 0.0;
    double s = knot_log2_x_[lo] + frac * (knot_log2_x_[hi] - knot_log2_x_[lo]);
    if (s >= 61.0) {
        cap_hits_.fetch_add(1, std::memory_order_relaxed);
        return kRadiusCap;
    }
    double x = std::exp2(s);
    std::int64_t k = static_cast<std::int64_t>(std::ceil(x));
    if (k <= alias_max_) k = alias_max_ + 1;
    if (k >= kRadiusCap) {
        cap_hits_.fetch_add(1, std::memory_order_relaxed);
        return kRadiusCap;
    }
    return k;
}

std::int64_t DisplacementSampler::sample_radius(RngStream& rng) const {
    std::uint64_t i = rng.next_below(static_cast<std::uint64_t>(accept_.size()));
    double u = rng.next_double();
    std::uint64_t outcome = (u < accept_[i]) ? i : alias_[i];
    if (outcome == 0) return invert_tail(rng.next_double());
    return static_cast<std::int64_t>(outcome);
}

Site DisplacementSampler::sample(RngStream& rng) const {
    return sample_on_shell(kernel_.d, sample_radius(rng), rng);
}

double DisplacementSampler::radial_pmf(std::int64_t k) const {
    if (k < 1) throw DomainError("radial_pmf: k >= 1");
    return shell_count_real(kernel_.d, static_cast<double>(k)) * rate(kernel_, k) / lambda_;
}

Site sample_on_shell(int d, std::int64_t k, RngStream& rng) {
    Coord out[kMaxDim];
    sample_on_shell_into(d, k, rng, out);
    return Site(out, d);
}

void sample_on_shell_into(int d, std::int64_t k, RngStream& rng, Coord* out) {
    if (d < 1 || d > kMaxDim) throw DomainError("sample_on_shell: dimension must be in [1, 8]");
    if (k < 1) throw DomainError("sample_on_shell: radius must be >= 1");

    // Number of nonzero coordinates i, weighted by 2^i C(d,i) C(k-1,i-1).
    int imax = static_cast<int>(std::min<std::int64_t>(d, k));
    int cat = 1;
    if (imax > 1) {
        double w[kMaxDim];
        double wsum = 0.0;
        for (int i = 1; i <= imax; ++i) {
            w[i - 1] = std::ldexp(static_cast<double>(binom_small(d, i)), i) * binom_shell_real(k, i);
            wsum += w[i - 1];
        }
        double u = rng.next_double() * wsum;
        cat = imax;
        for (int i = 1; i <= imax; ++i) {
            if (u < w[i - 1]) {
                cat = i;
                break;
            }
            u -= w[i - 1];
        }
    }

    // Uniform cat-subset of coordinate axes (partial Fisher-Yates).
    int axes[kMaxDim];
    for (int j = 0; j < d; ++j) axes[j] = j;
    for (int j = 0; j < cat; ++j) {
        int pick = j + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(d - j)));
        std::swap(axes[j], axes[pick]);
    }

    // Composition of k into cat positive parts: cat-1 distinct cuts in [1, k-1].
    std::int64_t cuts[kMaxDim + 1];
    int ncuts = cat - 1;
    if (ncuts > 0) {
        if (k - 1 <= 64) {
            std::int64_t pool[64];
            for (std::int64_t j = 0; j < k - 1; ++j) pool[j] = j + 1;
            for (int j = 0; j < ncuts; ++j) {
                std::int64_t pick = j + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(k - 1 - j)));
                std::swap(pool[j], pool[pick]);
                cuts[j] = pool[j];
            }
        } else {
            bool distinct = false;
            while (!distinct) {
                distinct = true;
                for (int j = 0; j < ncuts && distinct; ++j) {
                    cuts[j] = 1 + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(k - 1)));
                    for (int t = 0; t < j; ++t)
                        if (cuts[t] == cuts[j]) distinct = false;
                }
            }
        }
        std::sort(cuts, cuts + ncuts);
    }

    std::uint64_t signs = rng.next_u64();
    for (int i = 0; i < d; ++i) out[i] = 0;
    std::int64_t prev = 0;
    for (int j = 0; j < cat; ++j) {
        std::int64_t next = (j < ncuts) ? cuts[j] : k;
        std::int64_t part = next - prev;
        prev = next;
        if ((signs >> j) & 1u) part = -part;
        out[axes[j]] = part;
    }
}

}  // namespace lrfpp
