#pragma once

#include "psys/engine.hpp"
#include "psys/gates.hpp"
#include "psys/logic.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace psys {

/// Lost molecules and failed reactors.
///
/// `loss_rate` is the probability, per attempt and per region, that one
/// uniformly chosen molecule of the region disappears. `bursts` are fixed
/// removals at given attempts. `node_failure` is the probability that a
/// fabric node fails when failures are applied.
struct FaultModel {
    double loss_rate = 0.0;
    std::vector<Disturbance> bursts;
    double node_failure = 0.0;

    /// ParamError unless every probability lies in [0, 1].
    void validate() const;
};

/// Applies the per-attempt losses of `faults` to every region of `sim`,
/// drawing from `rng`.
void apply_losses(Simulator& sim, const FaultModel& faults, Rng& rng);

struct SweepConfig {
    GateKind kind = GateKind::AND;
    std::vector<std::uint64_t> hs{1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<double> loss_rates{0.0, 0.05, 0.1, 0.2};
    std::uint64_t seeds = 100;
    std::uint64_t budget = 100000;
    std::uint64_t base_seed = 0;
    std::uint64_t logic_multiplier = 1;
    std::uint64_t deletion_multiplier = 0;
    std::vector<Disturbance> bursts;  // applied in the gate region, on top of the rate

    /// Output copies per result: max(h + 1, 2h - 1).
    static std::uint64_t default_m(std::uint64_t h);
    /// Copies injected per operand: 2h - 1, the most that a single operand
    /// can supply without satisfying a two-operand rule on its own.
    static std::uint64_t default_copies(std::uint64_t h);
};

struct SweepRow {
    std::uint64_t h = 0;
    double loss_rate = 0.0;
    std::uint64_t seed = 0;
    std::string inputs;  // e.g. "01"
    bool correct = false;
    std::optional<std::uint64_t> attempts_to_output;
};

/// For every (h, loss rate) cell and every seed, builds the redundant gate,
/// injects the assignment `seed mod 2^arity` at default_copies(h) copies,
/// applies losses in the gate region and checks the readout in the
/// environment against the Boolean result. A run stops at the budget or once
/// the gate has halted.
std::vector<SweepRow> sweep_redundancy(const SweepConfig& config);

/// Fraction of correct rows with the given h and loss rate (NaN if none).
double correctness(const std::vector<SweepRow>& rows, std::uint64_t h, double loss_rate);

void write_sweep(std::ostream& out, const std::vector<SweepRow>& rows, const std::vector<std::string>& preamble = {});

enum class Topology : std::uint8_t { Cycle, Grid, Random };

std::string_view to_string(Topology topology) noexcept;
Topology parse_topology(std::string_view text);

/// Undirected graph of particle reactors. Node i is region i of the system
/// built by make_fabric_system.
struct Fabric {
    std::size_t nodes = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    double p_move = 0.5;
    std::vector<bool> failed;

    static Fabric cycle(std::size_t nodes, double p_move);
    static Fabric grid(std::size_t rows, std::size_t cols, double p_move);
    /// Each pair is joined with probability `edge_probability`; redrawn until
    /// connected (ParamError after 1000 tries).
    static Fabric random(std::size_t nodes, double edge_probability, double p_move, Rng& rng);

    /// ParamError unless the graph is connected and p_move is in (0, 1].
    void validate() const;

    std::vector<std::size_t> neighbours(std::size_t node) const;
    std::vector<std::size_t> live_neighbours(std::size_t node) const;
    std::vector<std::size_t> live_nodes() const;
    /// True when the live nodes form one connected component.
    bool live_connected() const;

    struct LiveView {
        std::vector<bool> failed;
        std::size_t edges = 0;
        std::vector<std::size_t> nodes;
        std::vector<std::vector<std::size_t>> neighbours;
    };
    /// Live nodes and live adjacency, rebuilt when `failed` or the edge
    /// count changed since the last call.
    const LiveView& live_view() const;

    mutable LiveView view_;
};

/// One parentless cell per node, all with the same rule pool, linked along
/// the edges in both directions. Products sent out of a cell land in the
/// environment, which holds the aggregate output.
MembraneSystem make_fabric_system(const Fabric& fabric, const Multiset& rules, const std::set<Symbol>& alphabet);

/// One migration event at `node`: with probability p_move a uniformly chosen
/// object moves to a uniformly chosen live neighbour. Counts as one step.
void migrate(Fabric& fabric, Simulator& sim, std::size_t node);

/// One interleaved action. A live node is drawn uniformly; when it has live
/// neighbours a fair coin decides between a reaction attempt there and a
/// migration event, otherwise it reacts. Failed nodes are never chosen.
void fabric_step(Fabric& fabric, Simulator& sim);

/// Trace of a fabric over `system` (as built by make_fabric_system, with
/// contents filled in), sampled like run(). Halting is only checked when no
/// live node has a live neighbour, since migration can enable rules again.
/// A one-node fabric gives the same trace as run() on the same system.
Trace fabric_trace(Fabric& fabric, const MembraneSystem& system, const SimConfig& config);

/// Marks the node failed and drops its contents.
void fail_node(Fabric& fabric, Simulator& sim, std::size_t node);

struct NodeFailure {
    std::uint64_t at_attempt = 0;
    std::size_t node = 0;
};

struct FabricRunConfig {
    GateKind kind = GateKind::AND;
    /// Empty: cooperative single-copy gate. Otherwise the redundant gate with
    /// these parameters.
    std::optional<RedundancyParams> redundancy;
    std::uint64_t copies = 1;  // molecules per input value
    std::uint64_t logic_multiplier = 1;
    std::uint64_t deletion_multiplier = 0;
    std::uint64_t budget = 1000000;
    std::uint64_t seed = 0;
    std::vector<NodeFailure> failures;
    /// Each node fails with this probability right after injection.
    double node_failure = 0.0;
};

struct FabricReport {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    double p_move = 0.0;
    std::size_t failures = 0;
    LogicLevel expected = LogicLevel::Undefined;
    LogicLevel observed = LogicLevel::Undefined;
    bool correct = false;
    bool timed_out = false;
    bool partitioned = false;  // live nodes disconnected after failures
    /// Molecules of 0 and 1 on live nodes right after the failures, and
    /// whether that is at least h per operand of each value.
    std::uint64_t surviving_zero = 0;
    std::uint64_t surviving_one = 0;
    bool enough_survivors = false;
    std::optional<std::uint64_t> attempts_to_output;
};

/// Injects every input copy at a uniformly chosen live node, applies the
/// failures, and runs until the aggregate output becomes readable or the
/// budget runs out.
FabricReport fabric_run(Fabric fabric, std::span<const bool> inputs, const FabricRunConfig& config);

void write_fabric_reports(std::ostream& out, const std::vector<FabricReport>& reports,
                          const std::vector<std::string>& preamble = {});

}  // namespace psys
