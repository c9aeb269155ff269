#include "psys/dsl.hpp"
#include "psys/rng.hpp"
#include "psys/system.hpp"

#include <gtest/gtest.h>

#include <algorithm>

namespace psys {
namespace {

Symbol sym(const char* s) { return Symbol(s); }

Multiset random_multiset(Rng& rng, std::size_t alphabet_size = 4) {
    static const char* names[] = {"a", "b", "c", "d", "e", "f"};
    Multiset m;
    const auto distinct = rng.below(alphabet_size + 1);
    for (std::uint64_t i = 0; i < distinct; ++i) {
        m.add(sym(names[rng.below(alphabet_size)]), 1 + rng.below(3));
    }
    return m;
}

TEST(Symbol, RejectsInvalidNames) {
    EXPECT_THROW(Symbol(""), std::invalid_argument);
    EXPECT_THROW(Symbol("a b"), std::invalid_argument);
    EXPECT_NO_THROW(Symbol("a_1'"));
}

TEST(Multiset, CanonicalForm) {
    Multiset m{{sym("c"), 1}, {sym("b"), 2}};
    m.add(sym("a"));
    ASSERT_EQ(m.distinct(), 3U);
    EXPECT_EQ(m.entries()[0].first, ObjectValue(sym("a")));
    EXPECT_EQ(m.size(), 4U);
    EXPECT_EQ(m.remove(sym("b"), 5), 2U);
    EXPECT_EQ(m.count(sym("b")), 0U);
    EXPECT_EQ(m.distinct(), 2U);
    EXPECT_EQ(to_string(m), "a c");
}

TEST(Multiset, SubsetExamples) {
    const Multiset bbc{{sym("b"), 2}, {sym("c"), 1}};
    EXPECT_TRUE(multiset_subset(Multiset{}, Multiset{{sym("a"), 2}}));
    EXPECT_TRUE(multiset_subset(Multiset{{sym("b"), 1}, {sym("c"), 1}}, bbc));
    EXPECT_FALSE(multiset_subset(Multiset{{sym("c"), 2}}, bbc));
}

TEST(Multiset, AddRemoveInverse) {
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const auto m = random_multiset(rng);
        auto copy = m;
        const auto x = random_multiset(rng);
        copy += x;
        for (const auto& [obj, n] : x.entries()) {
            EXPECT_EQ(copy.remove(obj, n), n);
        }
        EXPECT_EQ(copy, m);
    }
}

TEST(Multiset, SubsetIsPartialOrder) {
    Rng rng(12);
    for (int i = 0; i < 2000; ++i) {
        const auto a = random_multiset(rng, 3);
        const auto b = random_multiset(rng, 3);
        const auto c = random_multiset(rng, 3);
        EXPECT_TRUE(multiset_subset(a, a));
        if (multiset_subset(a, b) && multiset_subset(b, a)) {
            EXPECT_EQ(a, b);
        }
        if (multiset_subset(a, b) && multiset_subset(b, c)) {
            EXPECT_TRUE(multiset_subset(a, c));
        }
        EXPECT_TRUE(multiset_subset(a, a + b));
    }
}

TEST(Multiset, RuleObjectsCompareStructurally) {
    const Rule r1(Multiset{{sym("a"), 1}}, {Product{Multiset{{sym("b"), 1}}, Target::here()}});
    const Rule r2(Multiset{{sym("a"), 1}}, {Product{Multiset{{sym("b"), 1}}, Target::here()}});
    Multiset m;
    m.add(r1);
    m.add(r2);
    EXPECT_EQ(m.distinct(), 1U);
    EXPECT_EQ(m.count(r1), 2U);
    // Symbols sort before rules.
    m.add(sym("z"));
    EXPECT_TRUE(m.entries()[0].first.is_symbol());
}

TEST(Rule, DropsEmptyClauses) {
    const Rule r(Multiset{{sym("a"), 2}}, {Product{Multiset{}, Target::out()}});
    EXPECT_TRUE(r.rhs().empty());
    EXPECT_EQ(to_string(r), "a^2 -> H");
    EXPECT_THROW(Rule(Multiset{}, {}), std::invalid_argument);
}

TEST(Rule, Classify) {
    EXPECT_EQ(classify_rule(dsl::parse_rule("b c -> H a")), RuleClass::Cooperative);
    EXPECT_EQ(classify_rule(dsl::parse_rule("1 -> L 0")), RuleClass::Noncooperative);
    EXPECT_EQ(classify_rule(dsl::parse_rule("0^2 -> H 0")), RuleClass::Cooperative);
}

MembraneSystem four_membrane() {
    MembraneSystem sys;
    sys.alphabet = {sym("a"), sym("b"), sym("c")};
    const auto r1 = sys.add_region("1");
    const auto r2 = sys.add_region("2", r1);
    const auto r3 = sys.add_region("3", r1);
    const auto r4 = sys.add_region("4", r3);
    sys.skin = r1;
    sys.region(r1).contents = Multiset{{sym("a"), 1}};
    sys.region(r2).contents = Multiset{{sym("b"), 2}, {sym("c"), 1}};
    sys.region(r4).contents = Multiset{{sym("c"), 1}};
    sys.add_rule(r2, dsl::parse_rule("b c -> H a"));
    return sys;
}

bool has(const std::vector<Violation>& v, ViolationKind kind) {
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == kind; });
}

TEST(Validate, FourMembraneExampleIsClean) { EXPECT_TRUE(validate_system(four_membrane()).empty()); }

TEST(Validate, DanglingInTarget) {
    auto sys = four_membrane();
    sys.add_rule(sys.at("2"), dsl::parse_rule("a -> IN(5) a"));
    const auto v = validate_system(sys);
    ASSERT_EQ(v.size(), 1U);
    EXPECT_EQ(v[0].kind, ViolationKind::TargetUnresolvable);
    EXPECT_EQ(v[0].region, "2");
}

TEST(Validate, NetworkWithParentEdge) {
    MembraneSystem sys;
    sys.kind = SystemKind::Network;
    const auto a = sys.add_region("a");
    sys.add_region("b", a);
    EXPECT_TRUE(has(validate_system(sys), ViolationKind::KindMismatch));
}

TEST(Validate, TreeWithLink) {
    auto sys = four_membrane();
    sys.add_link(sys.at("2"), sys.at("3"), "x");
    EXPECT_TRUE(has(validate_system(sys), ViolationKind::KindMismatch));
}

TEST(Validate, SymbolsAndOutputAlphabet) {
    auto sys = four_membrane();
    sys.region(sys.at("3")).contents.add(sym("q"));
    sys.output_alphabet.insert(sym("z"));
    const auto v = validate_system(sys);
    EXPECT_TRUE(has(v, ViolationKind::SymbolNotInAlphabet));
    EXPECT_TRUE(has(v, ViolationKind::OutputAlphabetNotSubset));
}

TEST(Validate, DuplicateLabelsAndLinks) {
    MembraneSystem sys;
    sys.kind = SystemKind::Network;
    const auto a = sys.add_region("a");
    const auto b = sys.add_region("a");
    sys.add_link(a, b, "x");
    sys.add_link(a, b, "x");
    const auto v = validate_system(sys);
    EXPECT_TRUE(has(v, ViolationKind::DuplicateRegionLabel));
    EXPECT_TRUE(has(v, ViolationKind::DuplicateLinkLabel));
}

TEST(Validate, NonRuleInPool) {
    auto sys = four_membrane();
    sys.region(sys.at("1")).rules.add(sym("a"));
    EXPECT_TRUE(has(validate_system(sys), ViolationKind::NonRuleInPool));
}

TEST(Validate, LinkTargetNeedsLinks) {
    MembraneSystem sys;
    sys.kind = SystemKind::Network;
    sys.alphabet = {sym("a")};
    const auto a = sys.add_region("a");
    const auto b = sys.add_region("b");
    sys.add_rule(a, dsl::parse_rule("a -> LINK a"));
    EXPECT_TRUE(has(validate_system(sys), ViolationKind::TargetUnresolvable));
    sys.add_link(a, b, "1");
    EXPECT_TRUE(validate_system(sys).empty());
    sys.add_rule(a, dsl::parse_rule("a -> LINK(zz) a"));
    EXPECT_TRUE(has(validate_system(sys), ViolationKind::TargetUnresolvable));
}

}  // namespace
}  // namespace psys
