#pragma once

#include "psys/multiset.hpp"

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace psys {

/// Where the products of one clause go.
///   Here  - stay in the current region (the H of u -> Hv)
///   Out   - leave the membrane: parent region, or the environment from a
///           region without parent (the L of u -> Lv)
///   In    - into the child region with the given label
///   Link  - along an outgoing link; without a label one link is picked
///           uniformly at random
struct Target {
    enum class Kind : std::uint8_t { Here, Out, In, Link };

    Kind kind = Kind::Here;
    std::optional<std::string> label;

    static Target here() { return {Kind::Here, std::nullopt}; }
    static Target out() { return {Kind::Out, std::nullopt}; }
    static Target in(std::string child) { return {Kind::In, std::move(child)}; }
    static Target link(std::optional<std::string> name = std::nullopt) {
        return {Kind::Link, std::move(name)};
    }

    friend bool operator==(const Target&, const Target&) = default;
    friend std::strong_ordering operator<=>(const Target&, const Target&) = default;
};

struct Product {
    Multiset objects;
    Target target;

    friend bool operator==(const Product&, const Product&) = default;
    friend std::strong_ordering operator<=>(const Product&, const Product&) = default;
};

/// Evolution rule u -> (v_1, t_1) ... (v_k, t_k).
///
/// The left-hand side must be non-empty. Clauses with an empty product
/// multiset are dropped on construction so that `a -> H` and `a ->` denote
/// the same rule; clause order is otherwise preserved because each
/// unlabelled Link clause draws its own random link.
class Rule {
public:
    Rule(Multiset lhs, std::vector<Product> rhs);

    const Multiset& lhs() const noexcept { return lhs_; }
    std::span<const Product> rhs() const noexcept { return rhs_; }

    /// Total number of produced objects over all clauses.
    std::uint64_t rhs_size() const noexcept;

    friend bool operator==(const Rule&, const Rule&) = default;
    friend std::strong_ordering operator<=>(const Rule&, const Rule&) = default;

private:
    Multiset lhs_;
    std::vector<Product> rhs_;
};

enum class RuleClass : std::uint8_t { Cooperative, Noncooperative };

RuleClass classify_rule(const Rule& rule);

// Canonical text forms, shared with the .psys printer.
std::string to_string(const Target& target);
std::string to_string(const ObjectValue& object);
std::string to_string(const Multiset& multiset);
std::string to_string(const Rule& rule);

}  // namespace psys
