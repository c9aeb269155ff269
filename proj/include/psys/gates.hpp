#pragma once

#include "psys/engine.hpp"
#include "psys/logic.hpp"
#include "psys/system.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace psys {

enum class LogicLevel : std::uint8_t { Zero, One, Undefined, Ambiguous };

std::string_view to_string(LogicLevel level) noexcept;

/// Readout thresholds for a concentration: s > high reads as present,
/// s < low as absent, anything in between is undefined.
struct Thresholds {
    std::uint64_t high = 0;
    std::uint64_t low = 1;

    /// One molecule is enough: s >= 1 present, s == 0 absent.
    static Thresholds single_copy() { return {0, 1}; }
};

/// h: molecules consumed per operand; m: molecules produced per result;
/// l: lower readout threshold.
struct RedundancyParams {
    std::uint64_t h = 1;
    std::uint64_t m = 2;
    std::uint64_t l = 0;

    /// l = ceil(h/2), clamped below h.
    static RedundancyParams with_default_low(std::uint64_t h, std::uint64_t m);

    /// ParamError unless h >= 1, m > h and l < h.
    void validate() const;
    Thresholds thresholds() const { return {h, l}; }
};

/// Per species: Present -> One, Absent -> Zero, otherwise Undefined.
LogicLevel read_level(std::uint64_t s, const Thresholds& t);

/// Dual-rail wire: exactly one of the two species present gives its value;
/// both present is Ambiguous; otherwise Undefined.
LogicLevel read_wire(std::uint64_t count0, std::uint64_t count1, const Thresholds& t);

/// A gate chemistry plus where its operands go in and the result comes out.
/// `output_region` empty means the result leaves the skin into the
/// environment.
struct GateChemistry {
    MembraneSystem system;
    RegionId input_region;
    std::optional<RegionId> output_region;
    Symbol zero{"0"};
    Symbol one{"1"};

    /// Adds `copies` molecules of 0 or 1 per input value to the input region.
    void inject(std::span<const bool> inputs, std::uint64_t copies = 1);

    /// Output species counts of a running simulation.
    std::uint64_t output_count(const Simulator& sim, const Symbol& species) const;
    LogicLevel read(const Simulator& sim, const Thresholds& t) const;
};

/// One membrane with the cooperative rule set for `kind`; every rule
/// sends its product out of the membrane.
GateChemistry cooperative_gate(GateKind kind);

/// Multiplicity-h version of the cooperative gate emitting m copies, plus the
/// cleanup rules 0^2 -> H 0 and 1^2 -> H 1. Each logic rule appears
/// `logic_multiplier` times and each cleanup rule `deletion_multiplier` times
/// in the pool (0 drops the cleanup rules).
GateChemistry redundant_gate(GateKind kind, const RedundancyParams& params, std::uint64_t logic_multiplier = 1,
                             std::uint64_t deletion_multiplier = 1);

/// Two-membrane AND with mobile catalysts a, d, e. The two operands go into
/// region 2 and the result is emitted from the skin.
GateChemistry catalyst_and();

/// Two-membrane NOT with mobile catalysts n, x. The operand goes into region
/// 2 and the result stays in the skin region.
GateChemistry catalyst_not();

/// Catalyst symbols of the two catalyst gates.
inline const char* const kCatalystAndCatalysts[] = {"a", "d", "e"};
inline const char* const kCatalystNotCatalysts[] = {"n", "x"};

/// Keeps the count of `species` roughly inside [m - n, m]: a persistent
/// generator g produces one molecule per firing and a cap rule
/// species^m -> species^(m - n) removes n once the count reaches m. The cap
/// rule is put `cap_multiplier` times into the pool. The single region is
/// labelled "1" and starts with g and `initial` molecules of the species.
MembraneSystem concentration_holder(const std::string& species, std::uint64_t m, std::uint64_t n,
                                    std::uint64_t cap_multiplier = 1, std::uint64_t initial = 1);

}  // namespace psys
