#pragma once

#include "psys/logic.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace psys {

struct Gate {
    std::string id;
    GateKind kind = GateKind::NOT;
    std::vector<std::string> inputs;
    std::string output;

    friend bool operator==(const Gate&, const Gate&) = default;
};

/// Combinational Boolean circuit: named input wires, gates, output wires.
struct Netlist {
    std::vector<std::string> inputs;
    std::vector<Gate> gates;
    std::vector<std::string> outputs;

    /// Throws SemanticError for undriven, doubly driven or unknown wires and
    /// arity mismatches; CycleError for combinational loops.
    void validate() const;

    /// Gate indices in dependency order (operands before consumers).
    std::vector<std::size_t> topological_order() const;

    /// Index of the gate driving `wire`, if any.
    const Gate* driver(const std::string& wire) const;

    /// Number of gate operand slots plus output declarations reading `wire`.
    std::size_t fanout(const std::string& wire) const;

    friend bool operator==(const Netlist&, const Netlist&) = default;
};

using Assignment = std::map<std::string, bool>;

/// Direct Boolean evaluation; returns the value of every output wire.
Assignment evaluate(const Netlist& netlist, const Assignment& inputs);

/// All 2^n assignments of the input wires, in binary counting order with
/// the first declared input as the most significant bit.
std::vector<Assignment> all_assignments(const Netlist& netlist);

}  // namespace psys
