#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lrfpp/detail/site_table.hpp"
#include "lrfpp/sampler.hpp"

namespace lrfpp {

// Stop rule for a growth run.  Unset fields are inactive; at least one field
// must be set or the run would never terminate.  target_site stops the run
// the moment that site becomes occupied (its occupation time is then the
// exact first-passage time from the origin).
struct StopRule {
    std::optional<double> max_time;
    std::optional<std::uint64_t> max_volume;
    std::optional<std::int64_t> max_diameter;
    std::optional<Site> target_site;
};

enum class EventKind { Occupied, Thinned };

struct StepEvent {
    double time;
    EventKind kind;
    std::uint32_t source;  // record index of the firing site
    Site target;
    std::int64_t jump;  // l1 length of the attempted jump
};

// One time-series row of a growth run.
struct TraceRow {
    double t;
    std::uint64_t volume;
    std::int64_t diameter;
    std::int64_t max_jump;
    std::uint64_t thinned;
};

// In-memory result of run_growth; the artifact layer wraps it with config
// echo and file references.
struct RunTrace {
    std::vector<TraceRow> rows;
    double final_time = 0.0;
    std::uint64_t volume = 1;
    std::int64_t diameter = 0;
    std::int64_t max_jump = 0;
    std::uint64_t events = 0;
    std::uint64_t thinned = 0;
    std::uint64_t cap_hits = 0;
    bool truncated = false;  // stopped by a volume/diameter budget, not by time
};

// Stochastic growth from the origin: every occupied site fires at the total
// communication rate lambda, targets are displaced by the kernel's dispersal
// law, and events onto occupied sites are discarded (thinning).  By
// memorylessness of the exponential edge weights this realises the reachable
// set B_t of the first-passage process exactly, one event per clock tick.
class GrowthState {
public:
    static constexpr std::uint32_t kNoParent = detail::SiteTable::npos;

    // Starts from {origin}.  The sampler must outlive the state; weight
    // powers other than 1 break the memorylessness the event dynamics rely
    // on and are rejected.
    explicit GrowthState(const DisplacementSampler& sampler);

    StepEvent step(RngStream& rng);

    double clock() const { return clock_; }
    double lambda() const { return lambda_; }
    std::uint64_t volume() const { return table_.size(); }
    std::int64_t diameter() const { return diameter_; }
    std::int64_t max_jump() const { return max_jump_; }
    std::uint64_t events() const { return events_; }
    std::uint64_t thinned() const { return thinned_; }
    std::uint64_t cap_hits() const { return cap_hits_; }
    int dim() const { return sampler_->dimension(); }

    Site site(std::uint32_t idx) const;
    double occupation_time(std::uint32_t idx) const { return times_[idx]; }
    std::uint32_t parent(std::uint32_t idx) const { return parents_[idx]; }
    bool contains(const Site& s) const;

    struct Occupation {
        Site site;
        double time;
        std::uint32_t parent;  // kNoParent for the origin
    };
    // Read-only snapshot of the occupied map.
    std::vector<Occupation> occupation_times() const;

private:
    friend RunTrace run_growth(GrowthState&, const StopRule&, double, RngStream&, bool);
    friend class GrowthAccel;

    // Advances the clock and resolves one event; fills target coordinates
    // into `tgt` (dim() entries).  Site construction is left to callers so
    // the thinning-dominated hot loop stays allocation-free.
    EventKind raw_step(RngStream& rng, Coord* tgt, std::uint32_t* source, std::int64_t* jump);

    // Resolves one attempted event with a pre-drawn source/target: inserts,
    // counts, and updates the tracked functionals.  Shared by the naive and
    // the batched event loops.
    EventKind commit(const Coord* tgt, std::uint32_t source, std::int64_t jump);

    const DisplacementSampler* sampler_;
    double lambda_;
    double clock_ = 0.0;
    detail::SiteTable table_;
    std::vector<double> times_;
    std::vector<std::uint32_t> parents_;
    std::int64_t diameter_ = 0;
    std::int64_t max_jump_ = 0;
    std::uint64_t events_ = 0;
    std::uint64_t thinned_ = 0;
    std::uint64_t cap_hits_ = 0;
    int nfun_;                  // 2^{d-1} signed functionals track the diameter
    std::int64_t fmin_[128];
    std::int64_t fmax_[128];
};

// Runs the event loop until the stop rule triggers.  Rows are stamped at
// actual event times on a geometric cadence (every time the clock has grown
// by `cadence_factor` since the last row), starting with the initial state
// at t = 0 and always ending with the final state.  A max_time stop leaves
// the state exactly at the last event before the deadline; volume/diameter
// stops truncate after the violating insertion and flag the trace.
//
// When `accelerate` is set (the default) and the kernel is a plain power
// law on Z^1 with alpha > 2, events that start and end inside one long
// occupied interval — which are always thinned and change nothing — are
// counted in batch (Poisson with the exactly integrated rate, drawn at row
// boundaries) instead of being simulated one by one.  The realized process
// is equal in law to the naive loop; only the mapping from seed to random
// draws differs.  Other kernels always take the naive per-event path.
RunTrace run_growth(GrowthState& state, const StopRule& stop, double cadence_factor,
                    RngStream& rng, bool accelerate = true);

}  // namespace lrfpp
