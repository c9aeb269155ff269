#include "psys/multiset.hpp"

#include "psys/rule.hpp"

#include <algorithm>
#include <stdexcept>

namespace psys {

bool is_valid_symbol_name(std::string_view name) noexcept {
    if (name.empty()) {
        return false;
    }
    return std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_' || c == '\'';
    });
}

Symbol::Symbol(std::string name) : name_(std::move(name)) {
    if (!is_valid_symbol_name(name_)) {
        throw std::invalid_argument("invalid symbol name '" + name_ + "'");
    }
}

ObjectValue::ObjectValue(Symbol symbol) : value_(std::move(symbol)) {}

ObjectValue::ObjectValue(Rule rule) : value_(std::make_shared<const Rule>(std::move(rule))) {}

const Symbol& ObjectValue::symbol() const {
    if (const auto* s = std::get_if<Symbol>(&value_)) {
        return *s;
    }
    throw std::logic_error("object is a rule, not a symbol");
}

const Rule& ObjectValue::rule() const {
    if (const auto* r = std::get_if<std::shared_ptr<const Rule>>(&value_)) {
        return **r;
    }
    throw std::logic_error("object is a symbol, not a rule");
}

bool operator==(const ObjectValue& a, const ObjectValue& b) {
    return (a <=> b) == std::strong_ordering::equal;
}

// Symbols order before rules; rules compare structurally.
std::strong_ordering operator<=>(const ObjectValue& a, const ObjectValue& b) {
    if (a.is_symbol() != b.is_symbol()) {
        return a.is_symbol() ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (a.is_symbol()) {
        return a.symbol() <=> b.symbol();
    }
    const auto& ra = std::get<std::shared_ptr<const Rule>>(a.value_);
    const auto& rb = std::get<std::shared_ptr<const Rule>>(b.value_);
    if (ra == rb) {
        return std::strong_ordering::equal;
    }
    return *ra <=> *rb;
}

Multiset::Multiset(std::initializer_list<Entry> entries) {
    for (const auto& [object, count] : entries) {
        add(object, count);
    }
}

Multiset Multiset::of(const ObjectValue& object, std::uint64_t count) {
    Multiset m;
    m.add(object, count);
    return m;
}

void Multiset::add(const ObjectValue& object, std::uint64_t count) {
    if (count == 0) {
        return;
    }
    auto it = std::lower_bound(entries_.begin(), entries_.end(), object,
                               [](const Entry& e, const ObjectValue& o) { return e.first < o; });
    if (it != entries_.end() && it->first == object) {
        it->second += count;
    } else {
        entries_.insert(it, Entry{object, count});
    }
    size_ += count;
}

void Multiset::add(const Multiset& other) {
    for (const auto& [object, count] : other.entries_) {
        add(object, count);
    }
}

std::uint64_t Multiset::remove(const ObjectValue& object, std::uint64_t count) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), object,
                               [](const Entry& e, const ObjectValue& o) { return e.first < o; });
    if (it == entries_.end() || it->first != object || count == 0) {
        return 0;
    }
    const std::uint64_t removed = std::min(count, it->second);
    it->second -= removed;
    size_ -= removed;
    if (it->second == 0) {
        entries_.erase(it);
    }
    return removed;
}

std::uint64_t Multiset::count(const ObjectValue& object) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), object,
                               [](const Entry& e, const ObjectValue& o) { return e.first < o; });
    return (it != entries_.end() && it->first == object) ? it->second : 0;
}

bool operator==(const Multiset& a, const Multiset& b) {
    return a.size_ == b.size_ && a.entries_ == b.entries_;
}

std::strong_ordering operator<=>(const Multiset& a, const Multiset& b) {
    const std::size_t n = std::min(a.entries_.size(), b.entries_.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (auto c = a.entries_[i].first <=> b.entries_[i].first; c != 0) {
            return c;
        }
        if (auto c = a.entries_[i].second <=> b.entries_[i].second; c != 0) {
            return c;
        }
    }
    return a.entries_.size() <=> b.entries_.size();
}

Multiset operator+(Multiset a, const Multiset& b) {
    a.add(b);
    return a;
}

bool multiset_subset(const Multiset& a, const Multiset& b) {
    if (a.size() > b.size()) {
        return false;
    }
    // Both sides are sorted, so a single merge pass suffices.
    auto bi = b.entries().begin();
    const auto be = b.entries().end();
    for (const auto& [object, count] : a.entries()) {
        while (bi != be && bi->first < object) {
            ++bi;
        }
        if (bi == be || bi->first != object || bi->second < count) {
            return false;
        }
    }
    return true;
}

}  // namespace psys
