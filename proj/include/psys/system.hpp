#pragma once

#include "psys/multiset.hpp"
#include "psys/rule.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace psys {

struct RegionId {
    std::uint32_t value = 0;

    friend bool operator==(RegionId, RegionId) = default;
    friend std::strong_ordering operator<=>(RegionId, RegionId) = default;
};

struct Link {
    std::string label;
    RegionId head;

    friend bool operator==(const Link&, const Link&) = default;
};

/// One compartment: its contents, its rule pool R_i (a multiset of
/// rule-valued objects, so duplicated rules are chosen more often) and its
/// place in the containment tree and the link network.
struct Region {
    RegionId id;
    std::string label;
    Multiset contents;
    Multiset rules;
    std::optional<RegionId> parent;
    std::vector<RegionId> children;
    std::vector<Link> out_links;

    friend bool operator==(const Region&, const Region&) = default;
};

enum class SystemKind : std::uint8_t { Tree, Network, Hybrid };

std::string_view to_string(SystemKind kind) noexcept;

/// A membrane system. Region ids are indices into `regions`.
struct MembraneSystem {
    std::set<Symbol> alphabet;
    std::set<Symbol> output_alphabet;
    std::vector<Region> regions;
    std::optional<RegionId> skin;
    Multiset environment;
    SystemKind kind = SystemKind::Tree;

    /// Appends a region; when `parent` is given the containment edge is
    /// recorded on both ends.
    RegionId add_region(std::string label, std::optional<RegionId> parent = std::nullopt);
    void add_link(RegionId from, RegionId to, std::string label);
    void add_rule(RegionId region, const Rule& rule, std::uint64_t multiplicity = 1);

    Region& region(RegionId id);
    const Region& region(RegionId id) const;
    std::optional<RegionId> find(std::string_view label) const;
    /// Like find() but throws std::out_of_range for unknown labels.
    RegionId at(std::string_view label) const;

    /// Adds every symbol occurring in contents, rules and the environment to
    /// the alphabet.
    void extend_alphabet();

    friend bool operator==(const MembraneSystem&, const MembraneSystem&) = default;
};

enum class ViolationKind : std::uint8_t {
    TargetUnresolvable,
    KindMismatch,
    SymbolNotInAlphabet,
    OutputAlphabetNotSubset,
    StructureInconsistent,
    DuplicateRegionLabel,
    DuplicateLinkLabel,
    SkinInvalid,
    NonRuleInPool,
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
    ViolationKind kind;
    std::string region;  // label, empty when system-wide
    std::string rule;    // rule text when the violation concerns a rule
    std::string message;
};

std::string to_string(const Violation& violation);

/// Structural checks. An empty result means the system is well formed.
std::vector<Violation> validate_system(const MembraneSystem& system);

/// Visits every symbol in a multiset, descending into rule-valued objects.
template <typename Fn>
void for_each_symbol(const Multiset& multiset, Fn&& fn);

template <typename Fn>
void for_each_symbol(const Rule& rule, Fn&& fn) {
    for_each_symbol(rule.lhs(), fn);
    for (const auto& product : rule.rhs()) {
        for_each_symbol(product.objects, fn);
    }
}

template <typename Fn>
void for_each_symbol(const Multiset& multiset, Fn&& fn) {
    for (const auto& [object, count] : multiset.entries()) {
        if (object.is_symbol()) {
            fn(object.symbol());
        } else {
            for_each_symbol(object.rule(), fn);
        }
    }
}

}  // namespace psys
