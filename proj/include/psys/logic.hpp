#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace psys {

enum class GateKind : std::uint8_t { NOT, AND, NAND, OR };

inline constexpr GateKind kAllGateKinds[] = {GateKind::NOT, GateKind::AND, GateKind::NAND, GateKind::OR};

std::string_view to_string(GateKind kind) noexcept;
std::optional<GateKind> parse_gate_kind(std::string_view text) noexcept;

constexpr std::size_t arity(GateKind kind) noexcept { return kind == GateKind::NOT ? 1 : 2; }

/// Boolean function of the gate. `inputs.size()` must equal arity(kind).
bool evaluate(GateKind kind, std::span<const bool> inputs);

}  // namespace psys
