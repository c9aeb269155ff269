#pragma once

#include "psys/multiset.hpp"
#include "psys/netlist.hpp"
#include "psys/rule.hpp"
#include "psys/system.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace psys::dsl {

/// Bracket notation `[1[2]2[3[4]4]3]1` as a label tree.
struct StructureNode {
    std::string label;
    std::vector<StructureNode> children;

    friend bool operator==(const StructureNode&, const StructureNode&) = default;
};

StructureNode parse_structure(std::string_view text);
std::string print_structure(const StructureNode& node);

struct LinkDecl {
    std::string from;
    std::string to;
    std::string label;

    friend bool operator==(const LinkDecl&, const LinkDecl&) = default;
};

/// Abstract syntax of a `.psys` file.
///
///     kind tree
///     alphabet a b c
///     output a
///     structure [1[2]2[3[4]4]3]1
///     cell spare
///     environment: c
///     contents 2: b^2 c
///     rule 2: b c -> H a
///     rule 3 *2: a -> IN(4) a
///     link spare -> 1 [x]
///
/// Statements are one per line and may appear in any order. Region labels
/// are introduced by `structure` (a containment tree) and `cell` (a region
/// without parent); every other statement refers to them.
struct SystemDoc {
    std::optional<SystemKind> kind;  // inferred on lowering when absent
    std::set<Symbol> alphabet;
    std::set<Symbol> output_alphabet;
    std::vector<StructureNode> trees;
    std::vector<std::string> cells;
    Multiset environment;
    std::map<std::string, Multiset> contents;  // no empty entries
    std::map<std::string, Multiset> rules;     // rule pools; no empty entries
    std::vector<LinkDecl> links;

    friend bool operator==(const SystemDoc&, const SystemDoc&) = default;
};

/// Throws ParseError on malformed text and SemanticError for undeclared
/// symbols or regions, duplicate labels and reserved words used as names.
SystemDoc parse_system(std::string_view text);

/// Canonical text; parse_system(print_system(d)) == d for every valid doc.
std::string print_system(const SystemDoc& doc);
std::string print_system(const MembraneSystem& system);

/// Builds the membrane system. Regions are numbered in pre-order of the
/// trees, then the cells. Without an explicit kind: trees only gives Tree,
/// cells only gives Network, anything else Hybrid. The skin is the root of
/// the only tree, if there is exactly one.
MembraneSystem lower(const SystemDoc& doc);

/// Inverse of lower() up to region numbering.
SystemDoc raise(const MembraneSystem& system);

/// parse_system + lower.
MembraneSystem load_system(std::string_view text);

Multiset parse_multiset(std::string_view text);
Rule parse_rule(std::string_view text);

/// `input a, b; n1 = AND(a, b); z = NOT(n1); output z;`
/// Throws ParseError, SemanticError or CycleError.
Netlist parse_netlist(std::string_view text);
std::string print_netlist(const Netlist& netlist);

}  // namespace psys::dsl
