// exactfpp.hpp — exact first-passage machinery on finite boxes: a lazily
// realized i.i.d. edge-weight field, complete-graph Dijkstra, and the
// constructive multi-scale path whose passage time certifies an upper bound
// on T(0, x).
#pragma once

#include <cstdint>
#include <vector>

#include "lrfpp/ansatz.hpp"
#include "lrfpp/kernel.hpp"
#include "lrfpp/rng.hpp"
#include "lrfpp/site.hpp"

namespace lrfpp {

// Finite observation window {-R..R}^d with free (non-wrapping) boundary:
// the box restricts which sites participate, it does not alter edge lengths,
// so it matches the infinite lattice locally around the origin.
struct BoxSpec {
    enum class Boundary { FreeBox };

    int d = 1;
    std::int64_t radius = 0;
    Boundary boundary = Boundary::FreeBox;

    static constexpr std::uint64_t kDefaultSiteBudget = 10000;

    // Throws DomainError if d is out of [1,8], radius < 0, or the site
    // count (2R+1)^d exceeds the budget.
    void validate(std::uint64_t site_budget = kDefaultSiteBudget) const;

    std::uint64_t site_count() const;
    bool contains(const Site& s) const;

    // Row-major enumeration of the box, used as the canonical site <-> index
    // bijection for edge keys and distance maps.
    std::uint32_t index_of(const Site& s) const;  // throws DomainError if outside
    Site site_at(std::uint32_t index) const;
};

// Immutable realized weight field on a box: W_{x,y} = omega^gamma / r(|x-y|_1)
// with omega ~ Exp(1) i.i.d. across unordered pairs.  Weights are never
// stored; each query rematerializes the draw from a counter-based stream
// keyed by the canonical (min_index, max_index) pair, so repeated queries
// agree bit-for-bit and memory stays O(1).
class WeightOracle {
public:
    // Validates the box (against the given site budget) and the kernel.
    WeightOracle(const BoxSpec& box, const Kernel& kernel, std::uint64_t seed,
                 std::uint64_t site_budget = BoxSpec::kDefaultSiteBudget);

    // Passage time of the edge {x, y}; symmetric, positive, deterministic
    // per (seed, edge).  Throws DomainError if x = y or either endpoint is
    // outside the box.
    double weight(const Site& x, const Site& y) const;

    const BoxSpec& box() const { return box_; }
    const Kernel& kernel() const { return kernel_; }
    std::uint64_t seed() const { return seed_; }

private:
    double weight_by_index(std::uint32_t i, std::uint32_t j, double inv_rate) const;
    friend std::vector<double> dijkstra_times(const WeightOracle&, const Site&);

    BoxSpec box_;
    Kernel kernel_;
    std::uint64_t seed_;
    std::uint64_t key_;
};

// Exact first-passage times from `source` to every site of the box over the
// complete graph on the box (Dijkstra with lazily realized weights; the box
// boundary biases times upward relative to the full lattice, so probes
// should stay well inside).  Result is indexed by BoxSpec::index_of.
std::vector<double> dijkstra_times(const WeightOracle& oracle, const Site& source);

// The recursive multi-scale path from the origin to x: at every level the
// cheapest single edge between balls B(c0, f_i) and B(c1, f_i) is taken and
// the construction recurses into both balls with the next scale, ending in
// deterministic staircase connectors at the deepest level.  `time` is the
// realized passage time of the path — by construction an upper bound on
// dijkstra_times(oracle, 0)[x].
struct MultiscalePath {
    std::vector<Site> path;  // 0 = path.front(), x = path.back()
    double time = 0.0;
};

// Throws AnsatzInfeasible when k < 1, the scheme violates its contraction
// side conditions at this n = |x|_1, or the balls would protrude from the
// box.  x must differ from the origin.
MultiscalePath multiscale_path(const WeightOracle& oracle, const Site& x,
                               const AnsatzScheme& scheme, int k);

}  // namespace lrfpp
