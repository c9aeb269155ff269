#include "psys/system.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace psys {

std::string_view to_string(SystemKind kind) noexcept {
    switch (kind) {
        case SystemKind::Tree:
            return "tree";
        case SystemKind::Network:
            return "network";
        case SystemKind::Hybrid:
            return "hybrid";
    }
    return "?";
}

RegionId MembraneSystem::add_region(std::string label, std::optional<RegionId> parent) {
    const RegionId id{static_cast<std::uint32_t>(regions.size())};
    Region r;
    r.id = id;
    r.label = std::move(label);
    r.parent = parent;
    regions.push_back(std::move(r));
    if (parent) {
        region(*parent).children.push_back(id);
    }
    return id;
}

void MembraneSystem::add_link(RegionId from, RegionId to, std::string label) {
    region(to);  // bounds check
    region(from).out_links.push_back(Link{std::move(label), to});
}

void MembraneSystem::add_rule(RegionId id, const Rule& rule, std::uint64_t multiplicity) {
    region(id).rules.add(ObjectValue(rule), multiplicity);
}

Region& MembraneSystem::region(RegionId id) {
    if (id.value >= regions.size()) {
        throw std::out_of_range("region id " + std::to_string(id.value) + " out of range");
    }
    return regions[id.value];
}

const Region& MembraneSystem::region(RegionId id) const {
    if (id.value >= regions.size()) {
        throw std::out_of_range("region id " + std::to_string(id.value) + " out of range");
    }
    return regions[id.value];
}

std::optional<RegionId> MembraneSystem::find(std::string_view label) const {
    for (const auto& r : regions) {
        if (r.label == label) {
            return r.id;
        }
    }
    return std::nullopt;
}

RegionId MembraneSystem::at(std::string_view label) const {
    if (auto id = find(label)) {
        return *id;
    }
    throw std::out_of_range("no region labelled '" + std::string(label) + "'");
}

void MembraneSystem::extend_alphabet() {
    auto insert = [this](const Symbol& s) { alphabet.insert(s); };
    for (const auto& r : regions) {
        for_each_symbol(r.contents, insert);
        for_each_symbol(r.rules, insert);
    }
    for_each_symbol(environment, insert);
}

std::string_view to_string(ViolationKind kind) noexcept {
    switch (kind) {
        case ViolationKind::TargetUnresolvable:
            return "TargetUnresolvable";
        case ViolationKind::KindMismatch:
            return "KindMismatch";
        case ViolationKind::SymbolNotInAlphabet:
            return "SymbolNotInAlphabet";
        case ViolationKind::OutputAlphabetNotSubset:
            return "OutputAlphabetNotSubset";
        case ViolationKind::StructureInconsistent:
            return "StructureInconsistent";
        case ViolationKind::DuplicateRegionLabel:
            return "DuplicateRegionLabel";
        case ViolationKind::DuplicateLinkLabel:
            return "DuplicateLinkLabel";
        case ViolationKind::SkinInvalid:
            return "SkinInvalid";
        case ViolationKind::NonRuleInPool:
            return "NonRuleInPool";
    }
    return "?";
}

std::string to_string(const Violation& v) {
    std::string out(to_string(v.kind));
    if (!v.region.empty()) {
        out += " [region " + v.region + "]";
    }
    if (!v.rule.empty()) {
        out += " [rule " + v.rule + "]";
    }
    out += ": " + v.message;
    return out;
}

namespace {

class Validator {
public:
    explicit Validator(const MembraneSystem& sys) : sys_(sys) {}

    std::vector<Violation> run() {
        check_alphabets();
        if (!check_ids()) {
            return std::move(out_);
        }
        check_tree();
        check_labels();
        check_kind();
        check_contents();
        return std::move(out_);
    }

private:
    void report(ViolationKind kind, std::string region, std::string rule, std::string message) {
        out_.push_back(Violation{kind, std::move(region), std::move(rule), std::move(message)});
    }

    bool in_range(RegionId id) const { return id.value < sys_.regions.size(); }

    void check_alphabets() {
        for (const auto& s : sys_.output_alphabet) {
            if (!sys_.alphabet.contains(s)) {
                report(ViolationKind::OutputAlphabetNotSubset, "", "",
                       "output symbol '" + s.name() + "' is not in the alphabet");
            }
        }
    }

    bool check_ids() {
        bool ok = true;
        for (std::size_t i = 0; i < sys_.regions.size(); ++i) {
            const auto& r = sys_.regions[i];
            if (r.id.value != i) {
                report(ViolationKind::StructureInconsistent, r.label, "",
                       "region id " + std::to_string(r.id.value) + " stored at index " + std::to_string(i));
                ok = false;
            }
            if (r.parent && !in_range(*r.parent)) {
                report(ViolationKind::StructureInconsistent, r.label, "", "parent id out of range");
                ok = false;
            }
            for (auto c : r.children) {
                if (!in_range(c)) {
                    report(ViolationKind::StructureInconsistent, r.label, "", "child id out of range");
                    ok = false;
                }
            }
            for (const auto& l : r.out_links) {
                if (!in_range(l.head)) {
                    report(ViolationKind::StructureInconsistent, r.label, "",
                           "link '" + l.label + "' points to a missing region");
                    ok = false;
                }
            }
        }
        if (sys_.skin && !in_range(*sys_.skin)) {
            report(ViolationKind::SkinInvalid, "", "", "skin id out of range");
            ok = false;
        }
        return ok;
    }

    void check_tree() {
        for (const auto& r : sys_.regions) {
            for (auto c : r.children) {
                const auto& child = sys_.region(c);
                if (child.parent != r.id) {
                    report(ViolationKind::StructureInconsistent, r.label, "",
                           "child '" + child.label + "' does not name this region as parent");
                }
            }
            if (r.parent) {
                const auto& parent = sys_.region(*r.parent);
                const auto n = std::count(parent.children.begin(), parent.children.end(), r.id);
                if (n != 1) {
                    report(ViolationKind::StructureInconsistent, r.label, "",
                           "parent '" + parent.label + "' lists this region " + std::to_string(n) + " times");
                }
            }
            // Walk up; more steps than regions means a containment cycle.
            std::size_t steps = 0;
            auto cur = r.parent;
            while (cur && steps <= sys_.regions.size()) {
                cur = sys_.region(*cur).parent;
                ++steps;
            }
            if (cur) {
                report(ViolationKind::StructureInconsistent, r.label, "", "containment cycle");
            }
        }
    }

    void check_labels() {
        std::map<std::string, int> seen;
        for (const auto& r : sys_.regions) {
            if (r.label.empty()) {
                report(ViolationKind::StructureInconsistent, "", "", "region with empty label");
            }
            if (++seen[r.label] == 2) {
                report(ViolationKind::DuplicateRegionLabel, r.label, "", "label used by more than one region");
            }
            std::map<std::string, int> links;
            for (const auto& l : r.out_links) {
                if (++links[l.label] == 2) {
                    report(ViolationKind::DuplicateLinkLabel, r.label, "",
                           "link label '" + l.label + "' used twice");
                }
            }
        }
    }

    void check_kind() {
        std::vector<RegionId> roots;
        bool has_links = false;
        bool has_edges = false;
        for (const auto& r : sys_.regions) {
            if (!r.parent) {
                roots.push_back(r.id);
            } else {
                has_edges = true;
            }
            has_links = has_links || !r.out_links.empty();
        }
        switch (sys_.kind) {
            case SystemKind::Tree:
                if (has_links) {
                    report(ViolationKind::KindMismatch, "", "", "tree system declares links");
                }
                if (roots.size() != 1) {
                    report(ViolationKind::SkinInvalid, "", "",
                           "tree system needs exactly one root, found " + std::to_string(roots.size()));
                } else if (sys_.skin != roots.front()) {
                    report(ViolationKind::SkinInvalid, "", "", "skin is not the root of the membrane tree");
                }
                break;
            case SystemKind::Network:
                if (has_edges) {
                    report(ViolationKind::KindMismatch, "", "", "network system has containment edges");
                }
                if (sys_.skin) {
                    report(ViolationKind::SkinInvalid, "", "", "network system declares a skin");
                }
                break;
            case SystemKind::Hybrid:
                if (sys_.skin && sys_.region(*sys_.skin).parent) {
                    report(ViolationKind::SkinInvalid, "", "", "skin has a parent");
                }
                break;
        }
    }

    void check_symbols(const Multiset& m, const std::string& region, const std::string& what) {
        for_each_symbol(m, [&](const Symbol& s) {
            if (!sys_.alphabet.contains(s)) {
                report(ViolationKind::SymbolNotInAlphabet, region, "",
                       "symbol '" + s.name() + "' in " + what + " is not in the alphabet");
            }
        });
    }

    void check_targets(const Region& r, const Rule& rule) {
        for (const auto& product : rule.rhs()) {
            const auto& t = product.target;
            switch (t.kind) {
                case Target::Kind::Here:
                case Target::Kind::Out:
                    break;
                case Target::Kind::In: {
                    const bool found =
                        t.label && std::any_of(r.children.begin(), r.children.end(), [&](RegionId c) {
                            return sys_.region(c).label == *t.label;
                        });
                    if (!found) {
                        report(ViolationKind::TargetUnresolvable, r.label, to_string(rule),
                               "no child labelled '" + t.label.value_or("") + "'");
                    }
                    break;
                }
                case Target::Kind::Link: {
                    if (sys_.kind == SystemKind::Tree) {
                        report(ViolationKind::KindMismatch, r.label, to_string(rule),
                               "link target in a tree system");
                        break;
                    }
                    const bool found = t.label ? std::any_of(r.out_links.begin(), r.out_links.end(),
                                                             [&](const Link& l) { return l.label == *t.label; })
                                               : !r.out_links.empty();
                    if (!found) {
                        report(ViolationKind::TargetUnresolvable, r.label, to_string(rule),
                               t.label ? "no outgoing link labelled '" + *t.label + "'" : "region has no outgoing links");
                    }
                    break;
                }
            }
        }
    }

    void check_contents() {
        for (const auto& r : sys_.regions) {
            check_symbols(r.contents, r.label, "contents");
            check_symbols(r.rules, r.label, "rules");
            for (const auto& [object, count] : r.rules.entries()) {
                if (!object.is_rule()) {
                    report(ViolationKind::NonRuleInPool, r.label, "",
                           "'" + to_string(object) + "' in the rule pool is not a rule");
                    continue;
                }
                check_targets(r, object.rule());
            }
            // Rule-valued objects floating in the contents are active too.
            for (const auto& [object, count] : r.contents.entries()) {
                if (object.is_rule()) {
                    check_targets(r, object.rule());
                }
            }
        }
        check_symbols(sys_.environment, "", "environment");
    }

    const MembraneSystem& sys_;
    std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> validate_system(const MembraneSystem& system) {
    return Validator(system).run();
}

}  // namespace psys
