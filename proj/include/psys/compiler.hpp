#pragma once

#include "psys/engine.hpp"
#include "psys/gates.hpp"
#include "psys/netlist.hpp"
#include "psys/system.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace psys {

enum class Backend : std::uint8_t { Tree, Network };

std::string_view to_string(Backend backend) noexcept;

struct CompileOptions {
    Backend backend = Backend::Tree;
    /// Multiplicity-h gates emitting m copies; inputs are injected
    /// `input_copies` times (default m).
    std::optional<RedundancyParams> redundancy;
    std::optional<std::uint64_t> input_copies;
    std::uint64_t logic_multiplier = 1;
    /// Cleanup rules 0^2 -> H 0, 1^2 -> H 1 per gate region. Off by default:
    /// inside a circuit they would thin out an operand that is still waiting
    /// for its partner.
    std::uint64_t deletion_multiplier = 0;
    bool ready_token = false;
};

/// Symbol pair carrying one logic value, indexed by the value.
struct WireSymbols {
    Symbol zero;
    Symbol one;

    const Symbol& operator[](bool v) const { return v ? one : zero; }
};

/// A netlist mapped onto a membrane system plus everything needed to drive
/// it: where inputs are injected and under which names, where outputs appear
/// and how to read them.
struct CompiledCircuit {
    MembraneSystem system;
    Netlist netlist;
    Backend backend = Backend::Tree;
    RegionId injection_region;

    /// Per input wire, one entry per transport namespace. The tree backend
    /// gives every use of a fanned-out input its own namespace.
    std::map<std::string, std::vector<WireSymbols>> input_symbols;
    /// Output species in the environment, per output wire.
    std::map<std::string, WireSymbols> output_symbols;

    std::uint64_t input_copies = 1;
    Thresholds thresholds = Thresholds::single_copy();
    bool redundant = false;

    /// Token companion of every signal symbol (0/1 -> t, transport
    /// symbols -> their token transport, split tags -> split token tags,
    /// output species -> per-output token).
    std::map<Symbol, Symbol> token_of;
    bool ready_token = false;

    /// Token species expected in the environment next to each output.
    std::optional<Symbol> output_token(const std::string& wire) const;
};

/// Gate membranes nested along the circuit tree: each gate's membrane is
/// the parent of the membranes of the gates driving its operands, the root
/// gate is the skin. Inputs enter the skin under renamed symbols and are
/// routed down by `w_v -> IN(child) w_v` hops, then turned back into v.
/// ShapeError unless there is exactly one output, every gate output wire is
/// read exactly once and every gate feeds the output.
CompiledCircuit compile_tree(const Netlist& netlist, const CompileOptions& options = {});

/// One cell per gate plus an injection cell and a splitter cell for every
/// wire read more than once, all joined by labelled links. Results leave
/// cells without parent straight into the environment.
CompiledCircuit compile_network(const Netlist& netlist, const CompileOptions& options = {});

/// Dispatches on options.backend.
CompiledCircuit compile(const Netlist& netlist, const CompileOptions& options = {});

/// Rewrites every rule so each signal molecule travels with its token: one
/// token per consumed signal is added to the left-hand side and one per
/// produced signal to each clause. Rejects redundant circuits (ParamError).
CompiledCircuit attach_ready_token(CompiledCircuit circuit);

/// Places the input molecules (and tokens, if enabled) for an assignment
/// into the injection region of `system`.
void inject(const CompiledCircuit& circuit, MembraneSystem& system, const Assignment& inputs);

/// Reads every output wire from the environment of a running simulation.
std::map<std::string, LogicLevel> read_outputs(const CompiledCircuit& circuit, const Simulator& sim);

struct VerifyOptions {
    std::uint64_t seeds = 100;
    std::uint64_t budget = 100000;
    std::uint64_t base_seed = 0;
    /// Called after every attempt; fault injection goes here.
    std::function<void(Simulator&)> perturb;
};

struct VerificationRun {
    std::string assignment;  // "a=1;b=0"
    std::string expected;    // "1", or "z=1;y=0" for several outputs
    std::string observed;    // same format, "timeout" when nothing arrived
    bool pass = false;
    bool timed_out = false;
    std::optional<std::uint64_t> attempts;  // attempts until every output was readable
    bool token_consistent = true;           // token present iff output present, at every check
};

struct AssignmentSummary {
    std::string assignment;
    std::uint64_t passed = 0;
    std::uint64_t runs = 0;
    std::uint64_t timeouts = 0;
    std::uint64_t worst_attempts = 0;
};

struct VerificationReport {
    std::vector<VerificationRun> runs;
    std::vector<AssignmentSummary> summary;

    bool all_pass() const;
    bool any_timeout() const;
    bool any_mismatch() const;
};

/// Runs every input assignment for `seeds` seeds and compares the outputs
/// with direct Boolean evaluation. A run ends at the budget or once the
/// system halts after all outputs became readable.
VerificationReport verify_against_oracle(const CompiledCircuit& circuit, const VerifyOptions& options = {});

/// `assignment,expected,observed,pass,attempts`, one row per run.
void write_report(std::ostream& out, const VerificationReport& report, const std::vector<std::string>& preamble = {});

/// "a=1;b=0"; wires in `order` first, then any remaining ones in map order.
std::string format_assignment(const Assignment& a, const std::vector<std::string>& order = {});

}  // namespace psys
