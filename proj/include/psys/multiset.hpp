#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace psys {

/// Name of an object in the alphabet V. Letters, digits, underscore and the
/// prime character are accepted; the name must be non-empty.
class Symbol {
public:
    explicit Symbol(std::string name);

    const std::string& name() const noexcept { return name_; }

    friend bool operator==(const Symbol&, const Symbol&) = default;
    friend std::strong_ordering operator<=>(const Symbol&, const Symbol&) = default;

private:
    std::string name_;
};

bool is_valid_symbol_name(std::string_view name) noexcept;

class Rule;

/// An element of a multiset: either a plain molecule (Symbol) or a reaction
/// carried around as data. Rule-valued objects compare structurally.
class ObjectValue {
public:
    ObjectValue(Symbol symbol);  // NOLINT(google-explicit-constructor)
    ObjectValue(Rule rule);      // NOLINT(google-explicit-constructor)

    bool is_symbol() const noexcept { return std::holds_alternative<Symbol>(value_); }
    bool is_rule() const noexcept { return !is_symbol(); }

    const Symbol& symbol() const;
    const Rule& rule() const;

    friend bool operator==(const ObjectValue& a, const ObjectValue& b);
    friend std::strong_ordering operator<=>(const ObjectValue& a, const ObjectValue& b);

private:
    std::variant<Symbol, std::shared_ptr<const Rule>> value_;
};

/// Counted bag of objects kept in canonical form: entries sorted by object,
/// every stored count strictly positive.
class Multiset {
public:
    using Entry = std::pair<ObjectValue, std::uint64_t>;

    Multiset() = default;
    Multiset(std::initializer_list<Entry> entries);

    static Multiset of(const ObjectValue& object, std::uint64_t count = 1);

    void add(const ObjectValue& object, std::uint64_t count = 1);
    void add(const Multiset& other);

    /// Removes up to `count` copies; returns how many were actually removed.
    std::uint64_t remove(const ObjectValue& object, std::uint64_t count = 1);

    std::uint64_t count(const ObjectValue& object) const;
    std::uint64_t size() const noexcept { return size_; }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t distinct() const noexcept { return entries_.size(); }

    std::span<const Entry> entries() const noexcept { return entries_; }

    Multiset& operator+=(const Multiset& other) {
        add(other);
        return *this;
    }

    friend bool operator==(const Multiset& a, const Multiset& b);
    friend std::strong_ordering operator<=>(const Multiset& a, const Multiset& b);

private:
    std::vector<Entry> entries_;
    std::uint64_t size_ = 0;
};

Multiset operator+(Multiset a, const Multiset& b);

/// Count-wise a <= b.
bool multiset_subset(const Multiset& a, const Multiset& b);

}  // namespace psys
