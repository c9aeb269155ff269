#pragma once

#include "psys/rng.hpp"
#include "psys/system.hpp"
#include "psys/trace.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace psys {

enum class Scheduler : std::uint8_t { UniformRegion, RoundRobin };

struct SimConfig {
    std::uint64_t seed = 0;
    std::uint64_t max_attempts = 1000;
    Scheduler scheduler = Scheduler::UniformRegion;
    std::uint64_t trace_every = 1;
    std::uint64_t halting_check_every = 100;

    /// Throws ParamError when a bound or stride is zero.
    void validate() const;
};

/// Adds and/or removes objects in one region when the global attempt
/// counter reaches `at_attempt`. Removal is clipped at zero.
struct Disturbance {
    std::uint64_t at_attempt = 0;
    RegionId region;
    Multiset add;
    Multiset remove;
};

enum class AttemptOutcome : std::uint8_t { Applied, Rejected, NoRules };

struct AttemptResult {
    AttemptOutcome outcome = AttemptOutcome::NoRules;
    RegionId region;
    const Rule* rule = nullptr;  // the chosen rule; null for NoRules
};

/// Stochastic reactor over a whole membrane system.
///
/// One attempt in a region picks a rule uniformly from the region's rule
/// pool (counting duplicates, plus any rule-valued objects floating in the
/// contents), draws |u| objects uniformly without replacement from the
/// contents and fires the rule only if the draw equals u. Everything else
/// leaves the state untouched.
///
/// Objects are interned to dense indices on construction; counts live in
/// flat per-region vectors.
class Simulator {
public:
    using ObjectIndex = std::uint32_t;
    using EmissionListener = std::function<void(std::uint64_t attempt, ObjectIndex object, std::uint64_t n)>;

    Simulator(const MembraneSystem& system, Rng rng, Scheduler scheduler = Scheduler::UniformRegion);
    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;
    Simulator(Simulator&&) = default;
    Simulator& operator=(Simulator&&) = default;

    /// Picks a region per the scheduler, runs one attempt there and advances
    /// the global attempt counter whatever the outcome.
    AttemptResult step();

    /// One attempt in a given region. Does not advance the counter.
    AttemptResult attempt(RegionId region);

    /// One attempt in a given region that counts as a time step, for callers
    /// doing their own scheduling.
    AttemptResult step(RegionId region) {
        ++attempts_;
        return attempt(region);
    }

    /// Counts a time step in which no reaction was attempted.
    void tick() noexcept { ++attempts_; }

    /// True iff no rule in any region has its left-hand side contained in
    /// the region contents.
    bool is_halted() const;

    void apply(const Disturbance& disturbance);

    std::uint64_t attempts() const noexcept { return attempts_; }
    std::size_t region_count() const noexcept { return regions_.size(); }
    const std::string& label(RegionId region) const;

    std::size_t object_count() const noexcept { return objects_.size(); }
    const ObjectValue& object(ObjectIndex index) const { return objects_.at(index); }
    std::optional<ObjectIndex> find_object(const ObjectValue& object) const;
    ObjectIndex intern(const ObjectValue& object);

    std::uint64_t count(RegionId region, ObjectIndex object) const;
    std::uint64_t count(RegionId region, const ObjectValue& object) const;
    std::uint64_t region_size(RegionId region) const;
    std::uint64_t environment_count(ObjectIndex object) const;
    std::uint64_t environment_count(const ObjectValue& object) const;

    Multiset contents(RegionId region) const;
    Multiset environment() const;
    /// The original system with current contents and environment.
    MembraneSystem snapshot() const;

    void add(RegionId region, ObjectIndex object, std::uint64_t n = 1);
    std::uint64_t remove(RegionId region, ObjectIndex object, std::uint64_t n = 1);
    void clear(RegionId region);
    /// Uniformly random object of the region by multiplicity (draws from the
    /// simulator's generator). With `molecules_only` rule-valued objects are
    /// skipped.
    std::optional<ObjectIndex> random_object(RegionId region, bool molecules_only = false);

    void on_emission(EmissionListener listener) { listeners_.push_back(std::move(listener)); }

    Rng& rng() noexcept { return rng_; }
    const Rng& rng() const noexcept { return rng_; }

    /// Runs `attempts` attempts with `threads` workers. Regions are dealt out
    /// round-robin and each worker runs a share of the attempts proportional
    /// to its number of regions. A worker only touches the counts of regions
    /// it owns and hands products for other regions to per-region inboxes,
    /// which the owner merges before its next attempt there. The interleaving
    /// depends on the OS scheduler, so the result is not reproducible.
    void run_parallel(std::uint64_t attempts, unsigned threads);

private:
    using Counts = std::vector<std::pair<ObjectIndex, std::uint64_t>>;

    struct Destination {
        enum class Kind : std::uint8_t { Local, Region, Environment, RandomLink, Unresolved };
        Kind kind = Kind::Local;
        std::uint32_t region = 0;
    };
    struct CompiledRule {
        const Rule* rule = nullptr;
        Counts lhs;
        std::uint64_t lhs_size = 0;
        std::vector<Counts> clauses;
    };
    struct RegionState {
        std::string label;
        std::vector<std::uint64_t> counts;
        std::uint64_t size = 0;
        std::vector<std::pair<std::uint32_t, std::uint64_t>> pool;  // (rule index, multiplicity)
        std::uint64_t pool_total = 0;
        std::optional<std::uint32_t> parent;
        std::vector<std::uint32_t> links;
        // destinations[rule][clause]
        std::vector<std::vector<Destination>> destinations;
        std::vector<std::string> unresolved;  // per rule, error text when unresolvable
    };

    std::uint32_t intern_rule(const Rule& rule);
    void resolve(std::uint32_t region, std::uint32_t rule);
    Counts compile(const Multiset& m);
    template <typename SinkT>
    AttemptResult attempt_with(std::uint32_t region, Rng& rng, SinkT& sink);
    bool applicable(const RegionState& state, const CompiledRule& rule) const;

    MembraneSystem base_;
    Rng rng_;
    Scheduler scheduler_;
    std::uint64_t attempts_ = 0;
    std::uint32_t round_robin_ = 0;

    std::vector<ObjectValue> objects_;
    std::map<ObjectValue, ObjectIndex> object_index_;
    std::vector<std::optional<std::uint32_t>> object_rule_;  // rule index for rule-valued objects
    std::vector<std::pair<ObjectIndex, std::uint32_t>> rule_objects_;

    std::vector<CompiledRule> rules_;
    std::map<Rule, std::uint32_t> rule_index_;  // keys own the Rule objects CompiledRule points at

    std::vector<RegionState> regions_;
    std::vector<std::uint64_t> environment_;
    std::vector<EmissionListener> listeners_;
};

// Value-type conveniences. Each builds a simulator over `system`, performs the
// operation and writes the resulting contents back.

struct AttemptReport {
    AttemptOutcome outcome = AttemptOutcome::NoRules;
    RegionId region;
    std::optional<Rule> rule;
};

AttemptReport attempt(MembraneSystem& system, RegionId region, Rng& rng);
AttemptReport step(MembraneSystem& system, Rng& rng, Scheduler scheduler = Scheduler::UniformRegion);
bool is_halted(const MembraneSystem& system);

/// Executes attempts until `max_attempts` or until halting is detected
/// (checked every `halting_check_every` attempts once no disturbance is
/// pending). Same inputs give a bit-identical trace.
Trace run(const MembraneSystem& system, const SimConfig& config, std::span<const Disturbance> disturbances = {});

/// The loop behind run() over an existing simulator, with `step` performing
/// each time step. `config.seed` and `config.scheduler` are not used here.
/// Without `check_halting` the run always uses the full budget.
Trace drive(Simulator& sim, const SimConfig& config, std::span<const Disturbance> disturbances,
            const std::function<void(Simulator&)>& step, bool check_halting = true);

/// Records sampled counts and emissions of a running simulator.
class TraceRecorder {
public:
    explicit TraceRecorder(Simulator& sim);

    /// Appends a row per (region, object) for every object that has been
    /// present in that region at some sample so far.
    void sample();
    std::uint64_t last_sample() const noexcept { return last_sample_; }
    Trace& trace() noexcept { return trace_; }
    Trace take() { return std::move(trace_); }

private:
    Simulator& sim_;
    Trace trace_;
    std::vector<std::vector<bool>> seen_;
    std::uint64_t last_sample_ = UINT64_MAX;
};

}  // namespace psys
