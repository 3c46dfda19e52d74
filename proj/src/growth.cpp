#include "lrfpp/growth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "lrfpp/errors.hpp"
#include "lrfpp/kernel.hpp"

namespace lrfpp {

namespace {
// Coordinates stay below 2^62 so that sums across <= 8 lanes and one more
// capped jump (<= 2^61) cannot overflow a signed 64-bit value.
constexpr std::int64_t kCoordBudget = std::int64_t{1} << 62;

[[noreturn]] void throw_coord_budget() {
    throw InternalError(
        "site coordinate exceeded the 64-bit lattice budget; the displacement "
        "law at these parameters is too heavy-tailed to simulate on this lattice");
}
}  // namespace

GrowthState::GrowthState(const DisplacementSampler& sampler)
    : sampler_(&sampler),
      lambda_(sampler.total_rate()),
      table_(sampler.dimension(), 1024) {
    if (sampler.kernel().gamma != 1.0)
        throw UnsupportedDynamics(
            "event-driven growth requires weight power gamma = 1 (memoryless edge "
            "weights); use the exact shortest-path solver for other powers");
    Coord origin[kMaxDim]{};
    table_.insert(origin);
    times_.push_back(0.0);
    parents_.push_back(kNoParent);
    nfun_ = 1 << (sampler.dimension() - 1);
    for (int f = 0; f < nfun_; ++f) fmin_[f] = fmax_[f] = 0;
}

EventKind GrowthState::commit(const Coord* tgt, std::uint32_t source, std::int64_t jump) {
    ++events_;
    const int d = table_.dim();
    for (int i = 0; i < d; ++i)
        if (tgt[i] > kCoordBudget || tgt[i] < -kCoordBudget) throw_coord_budget();
    auto [idx, inserted] = table_.insert(tgt);
    if (!inserted) {
        ++thinned_;
        return EventKind::Thinned;
    }
    times_.push_back(clock_);
    parents_.push_back(source);
    if (jump > max_jump_) max_jump_ = jump;
    // Diameter of a finite set under l1 is the max spread of the 2^{d-1}
    // signed coordinate functionals; update them incrementally.
    for (int f = 0; f < nfun_; ++f) {
        std::int64_t dot = tgt[0];
        for (int i = 1; i < d; ++i) dot += ((f >> (i - 1)) & 1) ? -tgt[i] : tgt[i];
        if (dot < fmin_[f]) fmin_[f] = dot;
        if (dot > fmax_[f]) fmax_[f] = dot;
        if (fmax_[f] - fmin_[f] > diameter_) diameter_ = fmax_[f] - fmin_[f];
    }
    return EventKind::Occupied;
}

EventKind GrowthState::raw_step(RngStream& rng, Coord* tgt, std::uint32_t* source,
                                std::int64_t* jump) {
    const int d = table_.dim();
    auto src = static_cast<std::uint32_t>(rng.next_below(table_.size()));
    *source = src;
    std::int64_t k = sampler_->sample_radius(rng);
    if (k == DisplacementSampler::kRadiusCap) ++cap_hits_;
    *jump = k;
    Coord disp[kMaxDim];
    sample_on_shell_into(d, k, rng, disp);
    const Coord* sc = table_.coords(src);
    for (int i = 0; i < d; ++i) tgt[i] = sc[i] + disp[i];
    return commit(tgt, src, k);
}

StepEvent GrowthState::step(RngStream& rng) {
    clock_ += rng.next_exponential(lambda_ * static_cast<double>(table_.size()));
    Coord tgt[kMaxDim];
    std::uint32_t src = 0;
    std::int64_t jump = 0;
    EventKind kind = raw_step(rng, tgt, &src, &jump);
    return StepEvent{clock_, kind, src, Site(tgt, table_.dim()), jump};
}

Site GrowthState::site(std::uint32_t idx) const { return Site(table_.coords(idx), table_.dim()); }

bool GrowthState::contains(const Site& s) const {
    if (s.dim() != table_.dim()) throw DomainError("site dimension mismatch");
    return table_.find(s.data()) != detail::SiteTable::npos;
}

std::vector<GrowthState::Occupation> GrowthState::occupation_times() const {
    std::vector<Occupation> out;
    out.reserve(table_.size());
    for (std::uint32_t i = 0; i < table_.size(); ++i)
        out.push_back({site(i), times_[i], parents_[i]});
    return out;
}

// Exact event batching for d = 1 growth under a plain power kernel with
// alpha > 2.  In that regime the occupied set is dominated by a few long
// intervals, and an event whose source and target fall inside the same
// interval is always thinned and changes nothing.  For an interval of
// L + 1 sites, writing T(n) = P(|Y| > n) for a kernel displacement Y, the
// per-site escape mass at offset j from either end is T(j)/2 per side, so
//
//   internal mass  C(L) = (L + 1) - U(L),   U(L) = sum_{j=0..L} T(j),
//
// and the total rate splits as lambda N = lambda W + lambda sum_i C(L_i)
// with W = #untracked sites + sum_i U(L_i).  The loop simulates only the
// state-changing candidates at rate lambda W — escapes from tracked
// intervals (offset ~ T(j), length beyond the end by the exact conditional
// tail law) and everything fired by untracked sites — while the batched
// internal events, which are independent Poisson counts given the
// trajectory, are added to the thinned/event counters by one Poisson draw
// per trace row.  The realized process is equal in law to the naive loop.
//
// T and its partial sums are tabulated up to kTab and continued by the
// analytic Euler-Maclaurin tails: sum_{j>m} T(j) needs the first-moment
// tail sum_{k>m} k p(k), which is the radial mass of the same kernel at
// exponent alpha - 1 (finite precisely when alpha > 2).
class GrowthAccel {
public:
    static bool eligible(const Kernel& k) {
        return k.d == 1 && k.slowvary == SlowVary::Unit && k.alpha > 2.0 && k.gamma == 1.0;
    }

    explicit GrowthAccel(GrowthState& s)
        : s_(&s), rm_(s.sampler_->kernel()), rm2_(shifted(s.sampler_->kernel())),
          lambda_(s.lambda_) {
        build_tables();
        rescan();
    }

    // Residual (simulated) rate is lambda * residual_weight().
    double residual_weight() const { return static_cast<double>(outside_.size()) + sum_u_; }

    // Accumulate batched-thinning intensity for a window of length dt during
    // which the state (and hence w) was constant.
    void accrue(double dt, double w) {
        exposure_ += lambda_ * (static_cast<double>(s_->table_.size()) - w) * dt;
    }

    // Materialize the accumulated batched events.  Counts over disjoint
    // windows are independent Poisson given the trajectory, so drawing them
    // lazily at row boundaries reproduces the exact joint law of every row.
    void flush(RngStream& rng) {
        if (exposure_ <= 0.0) return;
        std::uint64_t n = rng.next_poisson(exposure_);
        s_->events_ += n;
        s_->thinned_ += n;
        exposure_ = 0.0;
    }

    // One simulated (state-changing candidate) event; w must be the value
    // residual_weight() returned when the clock increment was drawn.
    EventKind step(RngStream& rng, double w) {
        double pick = rng.next_double() * w;
        Coord tgt = 0;
        std::uint32_t src = 0;
        std::int64_t k = 0;
        if (pick < static_cast<double>(outside_.size())) {
            // Untracked source: unconditional displacement, as in the naive loop.
            src = outside_[rng.next_below(outside_.size())];
            k = s_->sampler_->sample_radius(rng);
            if (k == DisplacementSampler::kRadiusCap) ++s_->cap_hits_;
            Coord disp = 0;
            sample_on_shell_into(1, k, rng, &disp);
            tgt = s_->table_.coords(src)[0] + disp;
        } else {
            pick -= static_cast<double>(outside_.size());
            std::size_t i = 0;
            while (i + 1 < tracked_.size() && pick >= tracked_[i].u) pick -= tracked_[i].u, ++i;
            const Tracked& tr = tracked_[i];
            const bool rightward = rng.next_below(2) == 1;
            const Coord j = sample_offset(tr.b - tr.a, rng);
            k = sample_escape_radius(j, rng);
            const Coord sc = rightward ? tr.b - j : tr.a + j;
            tgt = rightward ? sc + k : sc - k;
            std::uint32_t sidx = s_->table_.find(&sc);
            if (sidx == detail::SiteTable::npos)
                throw InternalError("growth accelerator lost a tracked site");
            src = sidx;
        }
        EventKind kind = s_->commit(&tgt, src, k);
        if (kind == EventKind::Occupied) on_insert(tgt);
        if (s_->table_.size() >= next_rescan_vol_ ||
            outside_.size() >= 4 * outside_at_rescan_ + 256)
            rescan();
        return kind;
    }

private:
    struct Tracked {
        Coord a, b;  // all sites of [a, b] occupied; both neighbours free
        double u;    // escape weight U(b - a)
    };

    static constexpr std::int64_t kTab = 4096;       // tabulated T / sum-T range
    static constexpr std::size_t kMaxTracked = 48;   // intervals batched at once
    static constexpr Coord kMinTrackLen = 64;        // sites needed to batch a run
    static constexpr std::uint32_t kNone = 0xFFFFFFFFu;

    static Kernel shifted(Kernel k) {
        k.alpha -= 1.0;
        return k;
    }

    void build_tables() {
        ttab_.resize(static_cast<std::size_t>(kTab) + 1);
        s1tab_.resize(static_cast<std::size_t>(kTab) + 1);
        // Anchor at the analytic tail and sum backwards so every entry keeps
        // the tail's relative accuracy (additions only grow the magnitude).
        ttab_[static_cast<std::size_t>(kTab)] = rm_.tail(static_cast<double>(kTab)) / lambda_;
        for (std::int64_t n = kTab; n-- > 0;)
            ttab_[static_cast<std::size_t>(n)] =
                ttab_[static_cast<std::size_t>(n) + 1] + rm_.term(n + 1) / lambda_;
        s1tab_[0] = 0.0;
        for (std::int64_t n = 1; n <= kTab; ++n)
            s1tab_[static_cast<std::size_t>(n)] =
                s1tab_[static_cast<std::size_t>(n) - 1] + ttab_[static_cast<std::size_t>(n)];
        s2_at_tab_ = s2(kTab);
    }

    // T(n) = P(|Y|_1 > n).
    double tail_prob(std::int64_t n) const {
        if (n <= 0) return 1.0;
        if (n <= kTab) return ttab_[static_cast<std::size_t>(n)];
        return rm_.tail(static_cast<double>(n)) / lambda_;
    }

    // S2(m) = sum_{j > m} T(j) = E[|Y| ; |Y| > m+1] - (m+1) T(m+1).
    double s2(std::int64_t m) const {
        return rm2_.tail(static_cast<double>(m + 1)) / lambda_ -
               static_cast<double>(m + 1) * tail_prob(m + 1);
    }

    // U(L) = sum_{j=0..L} T(j): the one-sided escape weight of an interval
    // with L + 1 sites.
    double escape_weight(Coord L) const {
        if (L <= kTab) return 1.0 + s1tab_[static_cast<std::size_t>(L)];
        return 1.0 + s1tab_[static_cast<std::size_t>(kTab)] + (s2_at_tab_ - s2(L));
    }

    // Offset from the escape end, P(j) proportional to T(j) on [0, L].
    Coord sample_offset(Coord L, RngStream& rng) const {
        const double target = rng.next_double() * escape_weight(L);
        const double tabbed = 1.0 + s1tab_[static_cast<std::size_t>(std::min(L, kTab))];
        if (L <= kTab || target <= tabbed) {
            // Smallest j with 1 + S1(j) > target.
            const auto hi = static_cast<std::size_t>(std::min(L, kTab));
            auto it = std::upper_bound(s1tab_.begin(), s1tab_.begin() + hi + 1, target - 1.0);
            auto j = static_cast<std::size_t>(it - s1tab_.begin());
            return static_cast<Coord>(j > hi ? hi : j);
        }
        // Analytic branch: j in (kTab, L] with cumulative mass S2(kTab) - S2(j).
        const double resid = target - tabbed;
        Coord lo = kTab, hi = L;
        while (lo + 1 < hi) {
            const Coord mid = lo + (hi - lo) / 2;
            if (s2_at_tab_ - s2(mid) < resid) lo = mid;
            else hi = mid;
        }
        return hi;
    }

    // Escape length: k > j with P(k) proportional to P(|Y| = k).  Inverts
    // the tail by table bisection, falling back to the analytic tail beyond
    // kTab; radii cap at the sampler's cap and count as cap hits.
    std::int64_t sample_escape_radius(Coord j, RngStream& rng) const {
        const double tau = tail_prob(j) * (1.0 - rng.next_double());  // in (0, T(j)]
        if (tail_prob(j + 1) <= tau) return j + 1;
        if (j + 1 < kTab && tau >= ttab_[static_cast<std::size_t>(kTab)]) {
            auto first = ttab_.begin() + j + 2;  // answer >= j + 2 here
            auto last = ttab_.begin() + kTab + 1;
            auto it = std::lower_bound(first, last, tau, std::greater<double>());
            return static_cast<std::int64_t>(it - ttab_.begin());
        }
        std::int64_t lo = std::max<std::int64_t>(j + 1, kTab);  // T(lo) > tau
        std::int64_t hi = DisplacementSampler::kRadiusCap;
        if (tail_prob(hi) > tau) {
            ++s_->cap_hits_;
            return hi;
        }
        while (lo + 1 < hi) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            if (tail_prob(mid) > tau) lo = mid;
            else hi = mid;
        }
        return hi;
    }

    void refresh_sum() {
        sum_u_ = 0.0;
        for (const Tracked& tr : tracked_) sum_u_ += tr.u;
    }

    void outside_push(std::uint32_t idx) {
        pos_in_outside_[idx] = static_cast<std::uint32_t>(outside_.size());
        outside_.push_back(idx);
    }

    void outside_remove(std::uint32_t idx) {
        const std::uint32_t pos = pos_in_outside_[idx];
        const std::uint32_t last = outside_.back();
        outside_[pos] = last;
        pos_in_outside_[last] = pos;
        outside_.pop_back();
        pos_in_outside_[idx] = kNone;
    }

    // Extend tr leftward through every occupied site (absorbing whole
    // tracked intervals when the run reaches one).
    void absorb_left(Tracked& tr) {
        while (true) {
            const Coord c = tr.a - 1;
            const std::uint32_t idx = s_->table_.find(&c);
            if (idx == detail::SiteTable::npos) return;
            if (pos_in_outside_[idx] != kNone) {
                outside_remove(idx);
                tr.a = c;
                continue;
            }
            // c must be the right end of another tracked interval.
            bool merged = false;
            for (std::size_t i = 0; i < tracked_.size(); ++i) {
                if (tracked_[i].b == c) {
                    tr.a = tracked_[i].a;
                    tracked_[i] = tracked_.back();
                    tracked_.pop_back();
                    merged = true;
                    break;
                }
            }
            if (!merged) throw InternalError("growth accelerator bookkeeping out of sync");
        }
    }

    void absorb_right(Tracked& tr) {
        while (true) {
            const Coord c = tr.b + 1;
            const std::uint32_t idx = s_->table_.find(&c);
            if (idx == detail::SiteTable::npos) return;
            if (pos_in_outside_[idx] != kNone) {
                outside_remove(idx);
                tr.b = c;
                continue;
            }
            bool merged = false;
            for (std::size_t i = 0; i < tracked_.size(); ++i) {
                if (tracked_[i].a == c) {
                    tr.b = tracked_[i].b;
                    tracked_[i] = tracked_.back();
                    tracked_.pop_back();
                    merged = true;
                    break;
                }
            }
            if (!merged) throw InternalError("growth accelerator bookkeeping out of sync");
        }
    }

    // Bookkeeping for a freshly inserted site at coordinate x (record index
    // table_.size() - 1): either it extends a tracked interval — absorbing
    // any occupied run, possibly other tracked intervals, beyond it — or it
    // joins the untracked pool.
    void on_insert(Coord x) {
        pos_in_outside_.push_back(kNone);
        for (std::size_t i = 0; i < tracked_.size(); ++i) {
            if (x == tracked_[i].a - 1 || x == tracked_[i].b + 1) {
                Tracked tr = tracked_[i];
                tracked_[i] = tracked_.back();
                tracked_.pop_back();
                if (x < tr.a) tr.a = x;
                else tr.b = x;
                absorb_left(tr);
                absorb_right(tr);
                tr.u = escape_weight(tr.b - tr.a);
                tracked_.push_back(tr);
                refresh_sum();
                return;
            }
        }
        outside_push(static_cast<std::uint32_t>(s_->table_.size() - 1));
    }

    // Rebuild the tracked set from scratch: sort the occupied coordinates,
    // find maximal runs, batch the longest ones.  Runs at volume-doubling
    // epochs (and when the untracked pool balloons), so the amortized cost
    // is a small multiple of one pass over the final state.
    void rescan() {
        const auto& tb = s_->table_;
        const auto n = static_cast<std::uint32_t>(tb.size());
        std::vector<std::pair<Coord, std::uint32_t>> sites;
        sites.reserve(n);
        for (std::uint32_t i = 0; i < n; ++i) sites.emplace_back(tb.coords(i)[0], i);
        std::sort(sites.begin(), sites.end());

        struct Run {
            std::uint32_t lo, hi;  // index range into `sites`
        };
        std::vector<Run> runs;
        std::uint32_t lo = 0;
        for (std::uint32_t i = 1; i <= n; ++i) {
            if (i == n || sites[i].first != sites[i - 1].first + 1) {
                runs.push_back({lo, i - 1});
                lo = i;
            }
        }
        std::vector<std::uint32_t> order(runs.size());
        for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
        const std::size_t keep = std::min(kMaxTracked, order.size());
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                          order.end(), [&](std::uint32_t x, std::uint32_t y) {
                              return runs[x].hi - runs[x].lo > runs[y].hi - runs[y].lo;
                          });
        std::vector<char> tracked_run(runs.size(), 0);
        tracked_.clear();
        for (std::size_t i = 0; i < keep; ++i) {
            const Run& r = runs[order[i]];
            if (static_cast<Coord>(r.hi - r.lo + 1) < kMinTrackLen) break;
            tracked_.push_back(
                {sites[r.lo].first, sites[r.hi].first, escape_weight(sites[r.hi].first - sites[r.lo].first)});
            tracked_run[order[i]] = 1;
        }
        refresh_sum();
        pos_in_outside_.assign(n, kNone);
        outside_.clear();
        for (std::size_t r = 0; r < runs.size(); ++r) {
            if (tracked_run[r]) continue;
            for (std::uint32_t i = runs[r].lo; i <= runs[r].hi; ++i) outside_push(sites[i].second);
        }
        outside_at_rescan_ = outside_.size();
        next_rescan_vol_ = std::max<std::uint64_t>(2 * static_cast<std::uint64_t>(n), 64);
    }

    GrowthState* s_;
    RadialMass rm_;   // v_1(k) r(k) = 2 k^-alpha
    RadialMass rm2_;  // 2 k^-(alpha-1): first-moment tails of the jump law
    double lambda_;
    std::vector<double> ttab_;   // T(n) for n <= kTab
    std::vector<double> s1tab_;  // sum_{j=1..n} T(j)
    double s2_at_tab_ = 0.0;     // sum_{j > kTab} T(j)
    std::vector<Tracked> tracked_;
    double sum_u_ = 0.0;
    std::vector<std::uint32_t> outside_;         // record indices of untracked sites
    std::vector<std::uint32_t> pos_in_outside_;  // record index -> position, kNone if tracked
    double exposure_ = 0.0;
    std::uint64_t next_rescan_vol_ = 2;
    std::size_t outside_at_rescan_ = 1;
};

RunTrace run_growth(GrowthState& state, const StopRule& stop, double cadence_factor,
                    RngStream& rng, bool accelerate) {
    if (!stop.max_time && !stop.max_volume && !stop.max_diameter && !stop.target_site)
        throw DomainError(
            "stop rule: at least one of max_time/max_volume/max_diameter/target_site required");
    if (stop.max_time && !(*stop.max_time >= 0.0)) throw DomainError("max_time must be >= 0");
    if (stop.max_volume && *stop.max_volume < 1) throw DomainError("max_volume must be >= 1");
    if (stop.max_diameter && *stop.max_diameter < 0) throw DomainError("max_diameter must be >= 0");
    if (stop.target_site && stop.target_site->dim() != state.dim())
        throw DomainError("target site dimension mismatch");
    if (!(cadence_factor > 1.0)) throw DomainError("cadence factor must be > 1");

    std::optional<GrowthAccel> accel;
    if (accelerate && GrowthAccel::eligible(state.sampler_->kernel())) accel.emplace(state);

    RunTrace out;
    auto emit = [&](double t) {
        if (accel) accel->flush(rng);
        out.rows.push_back({t, state.volume(), state.diameter(), state.max_jump(), state.thinned()});
    };
    emit(0.0);

    double next_row = 0.0;
    bool time_stop = false;
    bool target_reached = stop.target_site && state.contains(*stop.target_site);
    Coord tgt[kMaxDim];
    std::uint32_t src = 0;
    std::int64_t jump = 0;
    while (!target_reached) {
        if ((stop.max_volume && state.volume() >= *stop.max_volume) ||
            (stop.max_diameter && state.diameter() >= *stop.max_diameter)) {
            out.truncated = true;
            break;
        }
        const double w = accel ? accel->residual_weight() : static_cast<double>(state.volume());
        const double dt = rng.next_exponential(state.lambda_ * w);
        if (stop.max_time && state.clock_ + dt > *stop.max_time) {
            if (accel) accel->accrue(*stop.max_time - state.clock_, w);
            time_stop = true;
            break;
        }
        if (accel) accel->accrue(dt, w);
        state.clock_ += dt;
        const EventKind kind =
            accel ? accel->step(rng, w) : state.raw_step(rng, tgt, &src, &jump);
        if (kind == EventKind::Occupied && stop.target_site &&
            state.contains(*stop.target_site))
            target_reached = true;
        if (state.clock_ >= next_row) {
            emit(state.clock_);
            next_row = state.clock_ * cadence_factor;
        }
    }

    if (accel) accel->flush(rng);
    out.final_time = time_stop ? *stop.max_time : state.clock();
    out.volume = state.volume();
    out.diameter = state.diameter();
    out.max_jump = state.max_jump();
    out.events = state.events();
    out.thinned = state.thinned();
    out.cap_hits = state.cap_hits();
    const TraceRow& last = out.rows.back();
    if (last.t != out.final_time || last.volume != out.volume || last.diameter != out.diameter ||
        last.max_jump != out.max_jump || last.thinned != out.thinned)
        emit(out.final_time);
    return out;
}

}  // namespace lrfpp
