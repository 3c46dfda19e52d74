#include "lrfpp/exactfpp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "lrfpp/errors.hpp"

namespace lrfpp {

void BoxSpec::validate(std::uint64_t site_budget) const {
    if (d < 1 || d > kMaxDim) throw DomainError("box dimension must be in [1, 8]");
    if (radius < 0) throw DomainError("box radius must be >= 0");
    const double count = std::pow(2.0 * static_cast<double>(radius) + 1.0, d);
    if (count > static_cast<double>(site_budget))
        throw DomainError("box exceeds the exact-solver site budget");
}

std::uint64_t BoxSpec::site_count() const {
    std::uint64_t n = 1;
    const auto side = static_cast<std::uint64_t>(2 * radius + 1);
    for (int i = 0; i < d; ++i) n *= side;
    return n;
}

bool BoxSpec::contains(const Site& s) const {
    if (s.dim() != d) return false;
    for (int i = 0; i < d; ++i)
        if (s.data()[i] < -radius || s.data()[i] > radius) return false;
    return true;
}

std::uint32_t BoxSpec::index_of(const Site& s) const {
    if (!contains(s)) throw DomainError("site outside the box");
    const auto side = static_cast<std::uint64_t>(2 * radius + 1);
    std::uint64_t idx = 0;
    for (int i = d; i-- > 0;) idx = idx * side + static_cast<std::uint64_t>(s.data()[i] + radius);
    return static_cast<std::uint32_t>(idx);
}

Site BoxSpec::site_at(std::uint32_t index) const {
    const auto side = static_cast<std::uint64_t>(2 * radius + 1);
    Coord c[kMaxDim]{};
    std::uint64_t rest = index;
    for (int i = 0; i < d; ++i) {
        c[i] = static_cast<Coord>(rest % side) - radius;
        rest /= side;
    }
    if (rest != 0) throw DomainError("site index outside the box");
    return Site(c, d);
}

WeightOracle::WeightOracle(const BoxSpec& box, const Kernel& kernel, std::uint64_t seed,
                           std::uint64_t site_budget)
    : box_(box), kernel_(kernel), seed_(seed), key_(stream_key(seed, "edge-weights")) {
    box_.validate(site_budget);
    kernel_.validate();
    if (box_.d != kernel_.d) throw DomainError("box and kernel dimensions differ");
}

double WeightOracle::weight_by_index(std::uint32_t i, std::uint32_t j, double inv_rate) const {
    const std::uint64_t a = std::min(i, j);
    const std::uint64_t b = std::max(i, j);
    const std::uint64_t u = stream_value(key_, a * box_.site_count() + b);
    // Map to (0,1) strictly — half-step jitter keeps omega positive — then
    // invert the Exp(1) CDF.
    const double unit = (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
    double omega = -std::log(unit);
    if (kernel_.gamma != 1.0) omega = std::pow(omega, kernel_.gamma);
    return omega * inv_rate;
}

double WeightOracle::weight(const Site& x, const Site& y) const {
    if (!box_.contains(x) || !box_.contains(y)) throw DomainError("edge endpoint outside the box");
    const std::int64_t len = (x - y).l1();
    if (len == 0) throw DomainError("edges join distinct sites");
    return weight_by_index(box_.index_of(x), box_.index_of(y), 1.0 / rate(kernel_, len));
}

std::vector<double> dijkstra_times(const WeightOracle& oracle, const Site& source) {
    const BoxSpec& box = oracle.box_;
    if (!box.contains(source)) throw DomainError("source outside the box");
    const auto n = static_cast<std::uint32_t>(box.site_count());
    const int d = box.d;

    // Flat coordinate cache plus reciprocal rates by l1 length; both keep the
    // O(n^2) relaxation loop free of redundant arithmetic.
    std::vector<Coord> coords(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
    for (std::uint32_t i = 0; i < n; ++i) {
        const Site s = box.site_at(i);
        for (int c = 0; c < d; ++c) coords[static_cast<std::size_t>(i) * d + c] = s.data()[c];
    }
    const auto max_len = static_cast<std::size_t>(2 * box.radius * d);
    std::vector<double> inv_rate(max_len + 1, 0.0);
    for (std::size_t len = 1; len <= max_len; ++len)
        inv_rate[len] = 1.0 / rate(oracle.kernel_, static_cast<std::int64_t>(len));

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kInf);
    std::vector<char> settled(n, 0);
    dist[box.index_of(source)] = 0.0;

    // Dense Dijkstra: every vertex pair is an edge, so the O(n^2) version is
    // already edge-optimal and needs no heap.
    for (std::uint32_t round = 0; round < n; ++round) {
        std::uint32_t u = n;
        double best = kInf;
        for (std::uint32_t i = 0; i < n; ++i)
            if (!settled[i] && dist[i] < best) best = dist[i], u = i;
        if (u == n) break;  // unreachable remainder (cannot happen on a complete graph)
        settled[u] = 1;
        const Coord* uc = &coords[static_cast<std::size_t>(u) * d];
        for (std::uint32_t v = 0; v < n; ++v) {
            if (settled[v]) continue;
            const Coord* vc = &coords[static_cast<std::size_t>(v) * d];
            std::int64_t len = 0;
            for (int c = 0; c < d; ++c) len += std::llabs(uc[c] - vc[c]);
            const double w = oracle.weight_by_index(u, v, inv_rate[static_cast<std::size_t>(len)]);
            if (dist[u] + w < dist[v]) dist[v] = dist[u] + w;
        }
    }
    return dist;
}

namespace {

// All lattice points within l1 distance r of `center` (the box is known to
// contain them; protruding balls were rejected up front).
void enumerate_ball_rec(const Site& center, int axis, std::int64_t budget, Coord* buf,
                        std::vector<Site>& out) {
    const int d = center.dim();
    if (axis == d - 1) {
        for (std::int64_t delta = -budget; delta <= budget; ++delta) {
            buf[axis] = center.data()[axis] + delta;
            out.emplace_back(buf, d);
        }
        return;
    }
    for (std::int64_t delta = -budget; delta <= budget; ++delta) {
        buf[axis] = center.data()[axis] + delta;
        enumerate_ball_rec(center, axis + 1, budget - std::llabs(delta), buf, out);
    }
}

std::vector<Site> enumerate_ball(const Site& center, std::int64_t r) {
    std::vector<Site> out;
    Coord buf[kMaxDim]{};
    enumerate_ball_rec(center, 0, r, buf, out);
    return out;
}

// Deterministic coordinate-by-coordinate nearest-neighbor connector from a
// to b; appends every vertex after `a` to the path and accumulates the
// passage time of the unit edges.
void staircase(const WeightOracle& oracle, const Site& a, const Site& b,
               std::vector<Site>& path, double& time) {
    const int d = a.dim();
    Coord cur[kMaxDim];
    for (int i = 0; i < d; ++i) cur[i] = a.data()[i];
    Site prev = a;
    for (int axis = 0; axis < d; ++axis) {
        const Coord target = b.data()[axis];
        while (cur[axis] != target) {
            cur[axis] += target > cur[axis] ? 1 : -1;
            Site next(cur, d);
            time += oracle.weight(prev, next);
            path.push_back(next);
            prev = next;
        }
    }
}

struct Builder {
    const WeightOracle& oracle;
    const std::vector<std::int64_t>& radii;  // floor(f_i), 1-based level i

    // Path from c0 to c1 using balls of radius radii[level-1] around both;
    // appends vertices after c0 and accumulates time.
    void connect(const Site& c0, const Site& c1, std::size_t level, std::vector<Site>& path,
                 double& time) const {
        if (c0 == c1) return;
        const std::int64_t r = radii[level - 1];
        const std::vector<Site> b0 = enumerate_ball(c0, r);
        const std::vector<Site> b1 = enumerate_ball(c1, r);
        double best = std::numeric_limits<double>::infinity();
        const Site* eu = nullptr;
        const Site* ev = nullptr;
        for (const Site& u : b0) {
            for (const Site& v : b1) {
                if (u == v) continue;
                const double w = oracle.weight(u, v);
                if (w < best) best = w, eu = &u, ev = &v;
            }
        }
        if (eu == nullptr)
            throw AnsatzInfeasible("ball pair admits no edge (coincident single-site balls)");
        if (level == radii.size()) {
            staircase(oracle, c0, *eu, path, time);
        } else {
            connect(c0, *eu, level + 1, path, time);
        }
        time += best;
        path.push_back(*ev);
        if (level == radii.size()) {
            staircase(oracle, *ev, c1, path, time);
        } else {
            connect(*ev, c1, level + 1, path, time);
        }
    }
};

}  // namespace

MultiscalePath multiscale_path(const WeightOracle& oracle, const Site& x,
                               const AnsatzScheme& scheme, int k) {
    const BoxSpec& box = oracle.box();
    if (!box.contains(x)) throw DomainError("path target outside the box");
    const std::int64_t n = x.l1();
    if (n == 0) throw AnsatzInfeasible("path target coincides with the source");
    const std::vector<double> f = scale_sequence(scheme, static_cast<double>(n), k);

    std::vector<std::int64_t> radii;
    radii.reserve(f.size());
    std::int64_t spread = 0;
    for (double fi : f) {
        radii.push_back(static_cast<std::int64_t>(std::floor(fi)));
        spread += radii.back();
    }
    if (x.linf() + spread > box.radius)
        throw AnsatzInfeasible("multi-scale balls protrude from the box; enlarge it or lower k");

    MultiscalePath out;
    Coord origin[kMaxDim]{};
    const Site zero(origin, box.d);
    out.path.push_back(zero);
    Builder builder{oracle, radii};
    builder.connect(zero, x, 1, out.path, out.time);
    return out;
}

}  // namespace lrfpp
