#include "psys/rule.hpp"

#include <numeric>
#include <stdexcept>

namespace psys {

Rule::Rule(Multiset lhs, std::vector<Product> rhs) : lhs_(std::move(lhs)) {
    if (lhs_.empty()) {
        throw std::invalid_argument("rule left-hand side must not be empty");
    }
    rhs_.reserve(rhs.size());
    for (auto& product : rhs) {
        if (!product.objects.empty()) {
            rhs_.push_back(std::move(product));
        }
    }
}

std::uint64_t Rule::rhs_size() const noexcept {
    return std::accumulate(rhs_.begin(), rhs_.end(), std::uint64_t{0},
                           [](std::uint64_t acc, const Product& p) { return acc + p.objects.size(); });
}

RuleClass classify_rule(const Rule& rule) {
    return rule.lhs().size() > 1 ? RuleClass::Cooperative : RuleClass::Noncooperative;
}

std::string to_string(const Target& target) {
    switch (target.kind) {
        case Target::Kind::Here:
            return "H";
        case Target::Kind::Out:
            return "L";
        case Target::Kind::In:
            return "IN(" + target.label.value_or("") + ")";
        case Target::Kind::Link:
            return target.label ? "LINK(" + *target.label + ")" : "LINK";
    }
    return "?";
}

std::string to_string(const ObjectValue& object) {
    if (object.is_symbol()) {
        return object.symbol().name();
    }
    return "(" + to_string(object.rule()) + ")";
}

std::string to_string(const Multiset& multiset) {
    std::string out;
    for (const auto& [object, count] : multiset.entries()) {
        if (!out.empty()) {
            out += ' ';
        }
        out += to_string(object);
        if (count != 1) {
            out += '^';
            out += std::to_string(count);
        }
    }
    return out;
}

std::string to_string(const Rule& rule) {
    std::string out = to_string(rule.lhs());
    out += " ->";
    if (rule.rhs().empty()) {
        out += " H";
        return out;
    }
    for (const auto& product : rule.rhs()) {
        out += ' ';
        out += to_string(product.target);
        out += ' ';
        out += to_string(product.objects);
    }
    return out;
}

}  // namespace psys
