#include "psys/compiler.hpp"
#include "psys/dsl.hpp"
#include "psys/errors.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace psys {
namespace {

Netlist load_net(const std::string& name) {
    std::ifstream in(std::string(PSYS_MODELS_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return dsl::parse_netlist(ss.str());
}

Netlist net(const char* text) { return dsl::parse_netlist(text); }

void expect_valid(const CompiledCircuit& c) {
    const auto v = validate_system(c.system);
    for (const auto& x : v) {
        ADD_FAILURE() << to_string(x);
    }
}

void expect_all_pass(const VerificationReport& r) {
    for (const auto& run : r.runs) {
        ASSERT_TRUE(run.pass) << run.assignment << " expected " << run.expected << " observed " << run.observed;
        ASSERT_TRUE(run.token_consistent) << run.assignment;
    }
}

Multiset environment_after(const CompiledCircuit& c, const Assignment& a, std::uint64_t seed,
                           std::uint64_t budget = 100000) {
    auto sys = c.system;
    inject(c, sys, a);
    Simulator sim(sys, Rng(seed));
    while (sim.attempts() < budget && !sim.is_halted()) {
        sim.step();
    }
    return sim.environment();
}

TEST(CompileTree, NandOfAndInputsOneOneEmitsZero) {
    const auto c = compile_tree(net("input a, b; n = AND(a, b); z = NOT(n); output z;"));
    expect_valid(c);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        EXPECT_EQ(environment_after(c, {{"a", true}, {"b", true}}, seed), dsl::parse_multiset("0")) << seed;
    }
}

TEST(CompileTree, PassthroughEmitsInput) {
    const auto n = net("input a; output a;");
    for (const auto backend : {Backend::Tree, Backend::Network}) {
        const auto c = compile(n, {.backend = backend});
        expect_valid(c);
        EXPECT_EQ(environment_after(c, {{"a", true}}, 1), dsl::parse_multiset("1"));
        EXPECT_EQ(environment_after(c, {{"a", false}}, 1), dsl::parse_multiset("0"));
    }
}

TEST(CompileTree, ThreeGateTreeMatchesOracle) {
    const auto c = compile_tree(load_net("tree3.net"));
    expect_valid(c);
    // Gate membranes nest along the circuit; the skin is the root gate.
    EXPECT_EQ(dsl::print_structure(dsl::raise(c.system).trees.front()), "[z[n1]n1[n2]n2]z");
    // b is read twice, so each use gets its own transport names.
    EXPECT_EQ(c.input_symbols.at("b").size(), 2U);
    const auto report = verify_against_oracle(c, {.seeds = 100});
    EXPECT_EQ(report.runs.size(), 400U);
    expect_all_pass(report);
    EXPECT_TRUE(report.all_pass());
}

TEST(CompileTree, RejectsSharedGateResults) {
    EXPECT_THROW(compile_tree(load_net("xor.net")), ShapeError);
    EXPECT_THROW(compile_tree(net("input a; x = NOT(a); y = NOT(a); output x, y;")), ShapeError);
    EXPECT_THROW(compile_tree(net("input a; x = NOT(a); y = NOT(a); output y;")), ShapeError);
}

TEST(CompileTree, RejectsCyclesAndUndrivenWires) {
    EXPECT_THROW(compile_tree(net("input a; x = AND(a, y); y = NOT(x); output y;")), CycleError);
    EXPECT_THROW(compile_network(net("input a; x = AND(a, y); y = NOT(x); output y;")), CycleError);
    EXPECT_THROW(compile_network(net("input a; x = NOT(q); output x;")), SemanticError);
}

TEST(CompileTree, GeneratedNameClashIsReported) {
    EXPECT_THROW(compile_tree(net("input b, b_1; n1 = AND(b, b_1); n2 = NOT(b); z = OR(n1, n2); output z;")),
                 SemanticError);
}

TEST(CompileTree, TransportSymbolsNeverMeetGateRules) {
    const auto c = compile_tree(load_net("tree3.net"));
    std::set<Symbol> transport;
    for (const auto& [wire, uses] : c.input_symbols) {
        for (const auto& p : uses) {
            transport.insert(p.zero);
            transport.insert(p.one);
        }
    }
    for (const auto& region : c.system.regions) {
        for (const auto& [obj, count] : region.rules.entries()) {
            const auto& lhs = obj.rule().lhs();
            const bool logic = lhs.count(Symbol("0")) + lhs.count(Symbol("1")) > 0;
            std::size_t renamed = 0;
            for (const auto& s : transport) {
                renamed += lhs.count(s);
            }
            EXPECT_FALSE(logic && renamed > 0) << to_string(obj.rule());
        }
    }
}

TEST(CompileTree, LateInjectionGivesSameOutput) {
    const auto c = compile_tree(load_net("tree3.net"));
    const Assignment a{{"a", false}, {"b", true}};
    auto sys = c.system;
    Simulator sim(sys, Rng(3));
    for (int i = 0; i < 500; ++i) {
        EXPECT_NE(sim.step().outcome, AttemptOutcome::Applied);
    }
    MembraneSystem staged = sim.snapshot();
    inject(c, staged, a);
    for (const auto& [obj, n] : staged.region(c.injection_region).contents.entries()) {
        sim.add(c.injection_region, sim.intern(obj), n);
    }
    while (!sim.is_halted()) {
        sim.step();
    }
    EXPECT_EQ(sim.environment(), dsl::parse_multiset("0"));
}

TEST(CompileNetwork, XorMatchesOracle) {
    const auto c = compile_network(load_net("xor.net"));
    expect_valid(c);
    EXPECT_EQ(c.system.kind, SystemKind::Network);
    EXPECT_TRUE(c.system.find("split_a"));
    EXPECT_TRUE(c.system.find("split_n1"));
    const auto report = verify_against_oracle(c, {.seeds = 100});
    expect_all_pass(report);
}

TEST(CompileNetwork, SingleGateAgreesWithTree) {
    for (const auto kind : kAllGateKinds) {
        Netlist n;
        n.inputs = arity(kind) == 1 ? std::vector<std::string>{"a"} : std::vector<std::string>{"a", "b"};
        n.gates.push_back({"z", kind, n.inputs, "z"});
        n.outputs = {"z"};
        const auto tree = verify_against_oracle(compile_tree(n), {.seeds = 100});
        const auto network = verify_against_oracle(compile_network(n), {.seeds = 100});
        ASSERT_EQ(tree.runs.size(), network.runs.size());
        for (std::size_t i = 0; i < tree.runs.size(); ++i) {
            EXPECT_EQ(tree.runs[i].observed, network.runs[i].observed);
        }
        expect_all_pass(tree);
    }
}

TEST(CompileNetwork, SplitterGivesOneCopyPerLink) {
    const auto c = compile_network(net("input a; x = NOT(a); y = NOT(a); output x, y;"));
    expect_valid(c);
    auto sys = c.system;
    const auto split = sys.at("split_a");
    sys.region(split).contents = dsl::parse_multiset("1");
    Simulator sim(sys, Rng(5));
    for (int i = 0; i < 50; ++i) {
        sim.attempt(split);
    }
    EXPECT_EQ(sim.count(sys.at("x"), Symbol("1")), 1U);
    EXPECT_EQ(sim.count(sys.at("y"), Symbol("1")), 1U);
    EXPECT_EQ(sim.region_size(split), 0U);
    // Several outputs get their own species in the environment.
    EXPECT_EQ(environment_after(c, {{"a", true}}, 2), dsl::parse_multiset("x_0 y_0"));
}

TEST(CompileNetwork, OutputThatIsAlsoReadGoesThroughSplitter) {
    const auto c = compile_network(net("input a, b; n = AND(a, b); z = NOT(n); output n, z;"));
    expect_valid(c);
    const auto report = verify_against_oracle(c, {.seeds = 20});
    expect_all_pass(report);
    EXPECT_EQ(report.runs.front().expected, "n=0;z=1");
    expect_all_pass(verify_against_oracle(compile_network(net("input a, b; z = AND(a, b); output a, z;")), {.seeds = 10}));
}

TEST(Compiler, OutputRoundTripsThroughText) {
    for (const auto backend : {Backend::Tree, Backend::Network}) {
        const auto n = backend == Backend::Tree ? load_net("tree3.net") : load_net("xor.net");
        const auto c = compile(n, {.backend = backend, .ready_token = true});
        EXPECT_EQ(dsl::lower(dsl::parse_system(dsl::print_system(c.system))), c.system);
    }
}

TEST(Compiler, CorruptedRuleIsFlagged) {
    auto c = compile_tree(net("input a, b; z = AND(a, b); output z;"));
    // Swap the product of the 1,1 rule.
    auto& pool = c.system.region(*c.system.skin).rules;
    const Rule good(dsl::parse_multiset("1^2"), {Product{dsl::parse_multiset("1"), Target::out()}});
    ASSERT_EQ(pool.remove(good), 1U);
    pool.add(Rule(dsl::parse_multiset("1^2"), {Product{dsl::parse_multiset("0"), Target::out()}}));
    const auto report = verify_against_oracle(c, {.seeds = 10});
    EXPECT_TRUE(report.any_mismatch());
    EXPECT_FALSE(report.all_pass());
    for (const auto& s : report.summary) {
        EXPECT_EQ(s.passed, s.assignment == "a=1;b=1" ? 0U : 10U) << s.assignment;
    }
}

TEST(Compiler, BudgetExhaustionIsATimeout) {
    const auto c = compile_network(load_net("xor.net"));
    const auto report = verify_against_oracle(c, {.seeds = 2, .budget = 3});
    EXPECT_TRUE(report.any_timeout());
    EXPECT_EQ(report.runs.front().observed, "timeout");
    std::ostringstream out;
    write_report(out, report, {"seed=0"});
    EXPECT_EQ(out.str().substr(0, 52), "# seed=0\nassignment,expected,observed,pass,attempts\n");
}

TEST(ReadyToken, AndEmitsResultWithToken) {
    const auto c = compile_tree(net("input a, b; z = AND(a, b); output z;"), {.ready_token = true});
    expect_valid(c);
    EXPECT_EQ(environment_after(c, {{"a", true}, {"b", true}}, 9), dsl::parse_multiset("1 t"));
    EXPECT_EQ(*c.output_token("z"), Symbol("t"));
}

TEST(ReadyToken, NoTokenNoFiring) {
    const auto c = compile_tree(net("input a, b; z = AND(a, b); output z;"), {.ready_token = true});
    auto sys = c.system;
    sys.region(c.injection_region).contents = dsl::parse_multiset("a_1 b_1");
    Simulator sim(sys, Rng(1));
    EXPECT_TRUE(sim.is_halted());
    for (int i = 0; i < 1000; ++i) {
        sim.step();
    }
    EXPECT_TRUE(sim.environment().empty());
}

TEST(ReadyToken, OneTokenLeavesTwoGateTree) {
    const auto c = compile_tree(net("input a, b; n = AND(a, b); z = NOT(n); output z;"), {.ready_token = true});
    for (const auto& a : all_assignments(c.netlist)) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            EXPECT_EQ(environment_after(c, a, seed).count(Symbol("t")), 1U);
        }
    }
}

TEST(ReadyToken, ConsistentOnTreeAndNetwork) {
    expect_all_pass(verify_against_oracle(compile_tree(load_net("tree3.net"), {.ready_token = true}), {.seeds = 30}));
    expect_all_pass(
        verify_against_oracle(compile_network(load_net("xor.net"), {.ready_token = true}), {.seeds = 30}));
}

TEST(ReadyToken, RejectsRedundancy) {
    CompileOptions o;
    o.redundancy = RedundancyParams::with_default_low(3, 5);
    o.ready_token = true;
    EXPECT_THROW(compile_tree(net("input a; z = NOT(a); output z;"), o), ParamError);
}

TEST(Redundant, SurvivesTwoLostMolecules) {
    CompileOptions o;
    o.redundancy = RedundancyParams::with_default_low(3, 5);
    o.logic_multiplier = 10;
    for (const auto backend : {Backend::Tree, Backend::Network}) {
        o.backend = backend;
        const auto c = compile(net("input a, b; n = AND(a, b); z = NOT(n); output z;"), o);
        expect_valid(c);
        EXPECT_EQ(c.input_copies, 5U);
        VerifyOptions v{.seeds = 100};
        v.perturb = [&](Simulator& sim) {
            if (sim.attempts() == 20) {
                for (int i = 0; i < 2; ++i) {
                    if (const auto obj = sim.random_object(c.injection_region, true)) {
                        sim.remove(c.injection_region, *obj);
                    }
                }
            }
        };
        expect_all_pass(verify_against_oracle(c, v));
    }
}

TEST(Redundant, ThresholdsComeFromParams) {
    CompileOptions o;
    o.redundancy = RedundancyParams{3, 5, 1};
    const auto c = compile_tree(net("input a; z = NOT(a); output z;"), o);
    EXPECT_EQ(c.thresholds.high, 3U);
    EXPECT_EQ(c.thresholds.low, 1U);
    EXPECT_EQ(environment_after(c, {{"a", false}}, 4), dsl::parse_multiset("1^5"));
}

}  // namespace
}  // namespace psys
