#include "psys/dsl.hpp"
#include "psys/errors.hpp"
#include "psys/rng.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace psys::dsl {
namespace {

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(PSYS_MODELS_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename Fn>
ParseError parse_error(Fn&& fn) {
    try {
        fn();
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no ParseError thrown";
    return ParseError("none", 0, 0);
}

TEST(Structure, FourMembraneTree) {
    const auto root = parse_structure("[1[2]2[3[4]4]3]1");
    EXPECT_EQ(root.label, "1");
    ASSERT_EQ(root.children.size(), 2U);
    EXPECT_EQ(root.children[0].label, "2");
    EXPECT_EQ(root.children[1].label, "3");
    ASSERT_EQ(root.children[1].children.size(), 1U);
    EXPECT_EQ(root.children[1].children[0].label, "4");
    EXPECT_EQ(print_structure(root), "[1[2]2[3[4]4]3]1");
}

TEST(Structure, Minimal) {
    const auto root = parse_structure("[1]1");
    EXPECT_EQ(root.label, "1");
    EXPECT_TRUE(root.children.empty());
}

TEST(Structure, MismatchedLabelPosition) {
    const auto e = parse_error([] { parse_structure("[1[2]3]1"); });
    EXPECT_EQ(e.line(), 1U);
    EXPECT_EQ(e.column(), 6U);  // the '3'
}

TEST(Structure, UnbalancedBrackets) {
    EXPECT_THROW(parse_structure("[1[2]2"), ParseError);
    EXPECT_THROW(parse_structure("[1]1]1"), ParseError);
    EXPECT_THROW(parse_structure("1]1"), ParseError);
}

TEST(Rules, NotRule) {
    const auto r = parse_rule("0 -> L 1");
    EXPECT_EQ(r.lhs(), parse_multiset("0"));
    ASSERT_EQ(r.rhs().size(), 1U);
    EXPECT_EQ(r.rhs()[0].target, Target::out());
    EXPECT_EQ(r.rhs()[0].objects, parse_multiset("1"));
    EXPECT_EQ(parse_rule("0 -> OUT 1"), r);
}

TEST(Rules, InTarget) {
    const auto r = parse_rule("x a -> IN(2) a");
    EXPECT_EQ(r.lhs(), parse_multiset("a x"));
    EXPECT_EQ(r.rhs()[0].target, Target::in("2"));
}

TEST(Rules, MultiClauseAndLinks) {
    const auto r = parse_rule("e z -> H e L 0 LINK(k) q LINK w");
    ASSERT_EQ(r.rhs().size(), 4U);
    EXPECT_EQ(r.rhs()[2].target, Target::link("k"));
    EXPECT_EQ(r.rhs()[3].target, Target::link());
    EXPECT_EQ(parse_rule(to_string(r)), r);
}

TEST(Rules, NestedRuleObjects) {
    const auto m = parse_multiset("a b^2 c (a -> H b) (b -> H c)^2");
    EXPECT_EQ(m.size(), 7U);
    EXPECT_EQ(m.count(parse_rule("b -> H c")), 2U);
    EXPECT_EQ(parse_multiset(to_string(m)), m);
    // `LINK (r)` is a rule object after an unlabelled link.
    const auto r = parse_rule("a -> LINK (a -> H b)");
    EXPECT_EQ(r.rhs()[0].target, Target::link());
    EXPECT_TRUE(r.rhs()[0].objects.entries()[0].first.is_rule());
}

TEST(Rules, Errors) {
    EXPECT_THROW(parse_rule("-> H a"), ParseError);
    EXPECT_THROW(parse_rule("a -> b"), ParseError);
    EXPECT_THROW(parse_rule("a -> IN a"), ParseError);
    EXPECT_THROW(parse_rule("a^0 -> H b"), ParseError);
    EXPECT_THROW(parse_rule("H -> H b"), ParseError);
    const auto e = parse_error([] { parse_rule("a b -> H c $"); });
    EXPECT_EQ(e.column(), 12U);
}

TEST(System, FourMembraneFileLowers) {
    const auto doc = parse_system(slurp("four_membrane.psys"));
    const auto sys = lower(doc);
    EXPECT_EQ(sys.kind, SystemKind::Tree);
    ASSERT_EQ(sys.regions.size(), 4U);
    EXPECT_EQ(sys.skin, RegionId{0});
    EXPECT_EQ(sys.region(sys.at("2")).contents, parse_multiset("b^2 c"));
    EXPECT_EQ(sys.region(sys.at("2")).rules.count(parse_rule("b c -> H a")), 1U);
    EXPECT_EQ(sys.region(sys.at("4")).parent, sys.at("3"));
    EXPECT_TRUE(validate_system(sys).empty());
}

TEST(System, RoundTripFourMembrane) {
    const auto doc = parse_system(slurp("four_membrane.psys"));
    const auto text = print_system(doc);
    EXPECT_EQ(parse_system(text), doc);
    EXPECT_EQ(print_system(parse_system(text)), text);
}

TEST(System, EmptyDoc) {
    SystemDoc doc;
    doc.trees.push_back(StructureNode{"1", {}});
    const auto text = print_system(doc);
    EXPECT_EQ(text, "alphabet\nstructure [1]1\n");
    EXPECT_EQ(parse_system(text), doc);
}

TEST(System, UndeclaredSymbolIsSemantic) {
    EXPECT_THROW(parse_system("alphabet a\nstructure [1]1\ncontents 1: a b\n"), SemanticError);
    EXPECT_THROW(parse_system("alphabet a\nstructure [1]1\nrule 1: a -> H z\n"), SemanticError);
    EXPECT_THROW(parse_system("alphabet a\noutput q\nstructure [1]1\n"), SemanticError);
}

TEST(System, UndeclaredOrDuplicateRegion) {
    EXPECT_THROW(parse_system("alphabet a\nstructure [1]1\ncontents 2: a\n"), SemanticError);
    EXPECT_THROW(parse_system("alphabet a\nstructure [1[1]1]1\n"), SemanticError);
    EXPECT_THROW(parse_system("alphabet a\ncell x\nlink x -> y\n"), SemanticError);
    EXPECT_THROW(parse_system("alphabet a\ncell x y\nlink x -> y [k]\nlink x -> y [k]\n"), SemanticError);
}

TEST(System, ErrorPositionsPointInsideToken) {
    const auto e = parse_error([] { parse_system("alphabet a\nstructure [1]1\nfrobnicate 1\n"); });
    EXPECT_EQ(e.line(), 3U);
    EXPECT_EQ(e.column(), 1U);
    const auto e2 = parse_error([] { parse_system("alphabet a\nstructure [1]1\nrule 1: a -> Q a\n"); });
    EXPECT_EQ(e2.line(), 3U);
    EXPECT_EQ(e2.column(), 14U);
    const auto e3 = parse_error([] { parse_system(slurp("bad_label.psys")); });
    EXPECT_EQ(e3.line(), 3U);
    EXPECT_EQ(e3.column(), 16U);
}

TEST(System, NetworkWithAutoLinkLabels) {
    const auto doc = parse_system("alphabet a\ncell p q r\nlink p -> q\nlink p -> r\nlink q -> r [x]\n");
    ASSERT_EQ(doc.links.size(), 3U);
    EXPECT_EQ(doc.links[0].label, "1");
    EXPECT_EQ(doc.links[1].label, "2");
    EXPECT_EQ(doc.links[2].label, "x");
    const auto sys = lower(doc);
    EXPECT_EQ(sys.kind, SystemKind::Network);
    EXPECT_FALSE(sys.skin.has_value());
    EXPECT_TRUE(validate_system(sys).empty());
}

TEST(System, RuleMultiplicityAndComments) {
    const auto doc = parse_system(
        "# header\nalphabet 0 1   # trailing\nstructure [g]g\nrule g *3: 0 1 -> L 0\nrule g: 0 1 -> L 0\n");
    EXPECT_EQ(doc.rules.at("g").count(parse_rule("0 1 -> L 0")), 4U);
    EXPECT_NE(print_system(doc).find("rule g *4: 0 1 -> L 0"), std::string::npos);
}

TEST(System, RaiseLowerPreservesHybrid) {
    const auto doc = parse_system(
        "kind hybrid\nalphabet a b\nstructure [n[m]m]n\ncell inj\ncontents inj: a\n"
        "rule inj: a -> LINK(k) a\nrule n: a -> IN(m) b\nlink inj -> n [k]\n");
    const auto sys = lower(doc);
    EXPECT_TRUE(validate_system(sys).empty());
    EXPECT_EQ(raise(sys), doc);
    EXPECT_EQ(lower(raise(sys)), sys);
}

// Generated docs for the round-trip property.
SystemDoc random_doc(Rng& rng) {
    static const char* syms[] = {"a", "b", "c", "0", "1", "x_1"};
    auto sym = [&] { return Symbol(syms[rng.below(6)]); };
    auto ms = [&](std::uint64_t max) {
        Multiset m;
        for (std::uint64_t i = 0, n = rng.below(max + 1); i < n; ++i) {
            m.add(sym(), 1 + rng.below(3));
        }
        return m;
    };
    SystemDoc doc;
    if (rng.below(2)) {
        doc.kind = static_cast<SystemKind>(rng.below(3));
    }
    for (const char* s : syms) {
        doc.alphabet.insert(Symbol(s));
    }
    if (rng.below(2)) {
        doc.output_alphabet.insert(sym());
    }
    std::vector<std::string> labels;
    int next = 0;
    auto fresh = [&] {
        labels.push_back("r" + std::to_string(next++));
        return labels.back();
    };
    if (rng.below(3) != 0) {
        StructureNode root{fresh(), {}};
        for (std::uint64_t i = 0, n = rng.below(3); i < n; ++i) {
            StructureNode child{fresh(), {}};
            if (rng.below(2)) {
                child.children.push_back(StructureNode{fresh(), {}});
            }
            root.children.push_back(child);
        }
        doc.trees.push_back(root);
    }
    for (std::uint64_t i = 0, n = rng.below(3); i < n; ++i) {
        doc.cells.push_back(fresh());
    }
    if (labels.empty()) {
        doc.cells.push_back(fresh());
    }
    doc.environment = ms(2);
    auto label = [&] { return labels[rng.below(labels.size())]; };
    for (std::uint64_t i = 0, n = rng.below(4); i < n; ++i) {
        auto m = ms(3);
        if (rng.below(3) == 0) {
            m.add(Rule(Multiset::of(sym()), {Product{ms(2), Target::here()}}));
        }
        if (!m.empty()) {
            doc.contents[label()] += m;
        }
    }
    const Target targets[] = {Target::here(), Target::out(), Target::in("r1"), Target::link(),
                              Target::link("k")};
    for (std::uint64_t i = 0, n = rng.below(5); i < n; ++i) {
        auto lhs = ms(2);
        lhs.add(sym());
        std::vector<Product> rhs;
        for (std::uint64_t k = 0, c = rng.below(3); k < c; ++k) {
            rhs.push_back(Product{ms(2), targets[rng.below(5)]});
        }
        doc.rules[label()].add(Rule(lhs, rhs), 1 + rng.below(2));
    }
    std::map<std::string, int> per_from;
    for (std::uint64_t i = 0, n = rng.below(4); i < n; ++i) {
        const auto from = label();
        doc.links.push_back(LinkDecl{from, label(), "l" + std::to_string(per_from[from]++)});
    }
    return doc;
}

TEST(System, RoundTripProperty) {
    Rng rng(99);
    for (int i = 0; i < 500; ++i) {
        const auto doc = random_doc(rng);
        const auto text = print_system(doc);
        SystemDoc back;
        ASSERT_NO_THROW(back = parse_system(text)) << text;
        EXPECT_EQ(back, doc) << text;
    }
}

TEST(Netlist, TwoGates) {
    const auto net = parse_netlist("input a,b; n1=AND(a,b); z=NOT(n1); output z;");
    EXPECT_EQ(net.inputs, (std::vector<std::string>{"a", "b"}));
    ASSERT_EQ(net.gates.size(), 2U);
    EXPECT_EQ(net.gates[0].kind, GateKind::AND);
    EXPECT_EQ(net.gates[1].inputs, std::vector<std::string>{"n1"});
    EXPECT_EQ(net.outputs, std::vector<std::string>{"z"});
    EXPECT_EQ(parse_netlist(print_netlist(net)), net);
    for (const auto& a : all_assignments(net)) {
        EXPECT_EQ(evaluate(net, a).at("z"), !(a.at("a") && a.at("b")));
    }
}

TEST(Netlist, Passthrough) {
    const auto net = parse_netlist("input a; output a;");
    EXPECT_TRUE(net.gates.empty());
    EXPECT_EQ(evaluate(net, {{"a", true}}).at("a"), true);
}

TEST(Netlist, Errors) {
    EXPECT_THROW(parse_netlist("x=NOT(x);"), CycleError);
    EXPECT_THROW(parse_netlist("input a; p=NOT(q); q=NOT(p); output p;"), CycleError);
    EXPECT_THROW(parse_netlist("input a; z=NOT(b); output z;"), SemanticError);
    EXPECT_THROW(parse_netlist("input a; a=NOT(a2); a2=NOT(a); output a;"), SemanticError);
    EXPECT_THROW(parse_netlist("input a, b; z=NOT(a, b); output z;"), SemanticError);
    EXPECT_THROW(parse_netlist("input a; output q;"), SemanticError);
    const auto e = parse_error([] { parse_netlist("input a;\nz = XOR(a, a);\noutput z;"); });
    EXPECT_EQ(e.line(), 2U);
    EXPECT_EQ(e.column(), 5U);
    EXPECT_THROW(parse_netlist("input a\noutput a;"), ParseError);
}

TEST(Netlist, XorFromNands) {
    const auto net = parse_netlist(slurp("xor.net"));
    EXPECT_EQ(net.gates.size(), 4U);
    EXPECT_EQ(net.fanout("a"), 2U);
    for (const auto& a : all_assignments(net)) {
        EXPECT_EQ(evaluate(net, a).at("z"), a.at("a") != a.at("b"));
    }
}

TEST(Netlist, AssignmentOrder) {
    const auto net = parse_netlist("input a, b; output a;");
    const auto rows = all_assignments(net);
    ASSERT_EQ(rows.size(), 4U);
    EXPECT_FALSE(rows[1].at("a"));
    EXPECT_TRUE(rows[1].at("b"));
    EXPECT_TRUE(rows[2].at("a"));
}

}  // namespace
}  // namespace psys::dsl
