#include "psys/logic.hpp"

#include <stdexcept>

namespace psys {

std::string_view to_string(GateKind kind) noexcept {
    switch (kind) {
        case GateKind::NOT:
            return "NOT";
        case GateKind::AND:
            return "AND";
        case GateKind::NAND:
            return "NAND";
        case GateKind::OR:
            return "OR";
    }
    return "?";
}

std::optional<GateKind> parse_gate_kind(std::string_view text) noexcept {
    for (const auto k : kAllGateKinds) {
        if (to_string(k) == text) {
            return k;
        }
    }
    return std::nullopt;
}

bool evaluate(GateKind kind, std::span<const bool> inputs) {
    if (inputs.size() != arity(kind)) {
        throw std::invalid_argument("wrong operand count for " + std::string(to_string(kind)));
    }
    switch (kind) {
        case GateKind::NOT:
            return !inputs[0];
        case GateKind::AND:
            return inputs[0] && inputs[1];
        case GateKind::NAND:
            return !(inputs[0] && inputs[1]);
        case GateKind::OR:
            return inputs[0] || inputs[1];
    }
    return false;
}

}  // namespace psys
