#include "psys/errors.hpp"
#include "psys/harness.hpp"

#include <algorithm>
#include <numeric>

namespace psys {

namespace {

bool connected(std::size_t nodes, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
               const std::vector<bool>& failed) {
    std::vector<std::size_t> parent(nodes);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    for (const auto& [a, b] : edges) {
        if (!failed[a] && !failed[b]) {
            parent[find(a)] = find(b);
        }
    }
    std::optional<std::size_t> root;
    for (std::size_t i = 0; i < nodes; ++i) {
        if (failed[i]) {
            continue;
        }
        if (!root) {
            root = find(i);
        } else if (find(i) != *root) {
            return false;
        }
    }
    return true;
}

Fabric edgeless(std::size_t nodes, double p_move) {
    Fabric f;
    f.nodes = nodes;
    f.p_move = p_move;
    f.failed.assign(nodes, false);
    return f;
}

std::string node_label(std::size_t i) { return "n" + std::to_string(i); }

}  // namespace

std::string_view to_string(Topology topology) noexcept {
    switch (topology) {
        case Topology::Cycle:
            return "cycle";
        case Topology::Grid:
            return "grid";
        case Topology::Random:
            return "random";
    }
    return "?";
}

Topology parse_topology(std::string_view text) {
    if (text == "cycle") {
        return Topology::Cycle;
    }
    if (text == "grid") {
        return Topology::Grid;
    }
    if (text == "random") {
        return Topology::Random;
    }
    throw ParamError("unknown topology '" + std::string(text) + "' (expected cycle, grid or random)");
}

Fabric Fabric::cycle(std::size_t nodes, double p_move) {
    auto f = edgeless(nodes, p_move);
    if (nodes == 2) {
        f.edges.emplace_back(0, 1);
    } else if (nodes > 2) {
        for (std::size_t i = 0; i < nodes; ++i) {
            f.edges.emplace_back(i, (i + 1) % nodes);
        }
    }
    f.validate();
    return f;
}

Fabric Fabric::grid(std::size_t rows, std::size_t cols, double p_move) {
    auto f = edgeless(rows * cols, p_move);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const auto i = r * cols + c;
            if (c + 1 < cols) {
                f.edges.emplace_back(i, i + 1);
            }
            if (r + 1 < rows) {
                f.edges.emplace_back(i, i + cols);
            }
        }
    }
    f.validate();
    return f;
}

Fabric Fabric::random(std::size_t nodes, double edge_probability, double p_move, Rng& rng) {
    if (!(edge_probability >= 0.0 && edge_probability <= 1.0)) {
        throw ParamError("edge probability must lie in [0, 1]");
    }
    for (int attempt = 0; attempt < 1000; ++attempt) {
        auto f = edgeless(nodes, p_move);
        for (std::size_t a = 0; a < nodes; ++a) {
            for (std::size_t b = a + 1; b < nodes; ++b) {
                if (rng.bernoulli(edge_probability)) {
                    f.edges.emplace_back(a, b);
                }
            }
        }
        if (connected(nodes, f.edges, f.failed)) {
            f.validate();
            return f;
        }
    }
    throw ParamError("no connected random graph with " + std::to_string(nodes) + " nodes after 1000 draws; raise the edge probability");
}

void Fabric::validate() const {
    if (nodes == 0) {
        throw ParamError("a fabric needs at least one node");
    }
    if (!(p_move > 0.0 && p_move <= 1.0)) {
        throw ParamError("p_move must lie in (0, 1], got " + std::to_string(p_move));
    }
    if (failed.size() != nodes) {
        throw ParamError("failed-node flags do not match the node count");
    }
    for (const auto& [a, b] : edges) {
        if (a >= nodes || b >= nodes || a == b) {
            throw ParamError("bad fabric edge " + std::to_string(a) + "-" + std::to_string(b));
        }
    }
    if (!connected(nodes, edges, std::vector<bool>(nodes, false))) {
        throw ParamError("fabric graph is not connected");
    }
}

std::vector<std::size_t> Fabric::neighbours(std::size_t node) const {
    std::vector<std::size_t> out;
    for (const auto& [a, b] : edges) {
        if (a == node) {
            out.push_back(b);
        } else if (b == node) {
            out.push_back(a);
        }
    }
    return out;
}

std::vector<std::size_t> Fabric::live_neighbours(std::size_t node) const {
    auto out = neighbours(node);
    std::erase_if(out, [&](std::size_t n) { return failed[n]; });
    return out;
}

std::vector<std::size_t> Fabric::live_nodes() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes; ++i) {
        if (!failed[i]) {
            out.push_back(i);
        }
    }
    return out;
}

const Fabric::LiveView& Fabric::live_view() const {
    if (view_.failed != failed || view_.edges != edges.size() || view_.neighbours.size() != nodes) {
        view_.failed = failed;
        view_.edges = edges.size();
        view_.nodes = live_nodes();
        view_.neighbours.assign(nodes, {});
        for (std::size_t i = 0; i < nodes; ++i) {
            view_.neighbours[i] = live_neighbours(i);
        }
    }
    return view_;
}

bool Fabric::live_connected() const { return connected(nodes, edges, failed); }

MembraneSystem make_fabric_system(const Fabric& fabric, const Multiset& rules, const std::set<Symbol>& alphabet) {
    MembraneSystem sys;
    sys.kind = fabric.edges.empty() ? SystemKind::Tree : SystemKind::Network;
    sys.alphabet = alphabet;
    for (std::size_t i = 0; i < fabric.nodes; ++i) {
        sys.region(sys.add_region(node_label(i))).rules = rules;
    }
    if (fabric.edges.empty()) {
        sys.skin = RegionId{0};
    }
    for (const auto& [a, b] : fabric.edges) {
        sys.add_link(RegionId{static_cast<std::uint32_t>(a)}, RegionId{static_cast<std::uint32_t>(b)}, node_label(b));
        sys.add_link(RegionId{static_cast<std::uint32_t>(b)}, RegionId{static_cast<std::uint32_t>(a)}, node_label(a));
    }
    return sys;
}

void migrate(Fabric& fabric, Simulator& sim, std::size_t node) {
    sim.tick();
    const auto& nb = fabric.live_view().neighbours.at(node);
    if (nb.empty() || !sim.rng().bernoulli(fabric.p_move)) {
        return;
    }
    const RegionId from{static_cast<std::uint32_t>(node)};
    const auto obj = sim.random_object(from);
    if (!obj) {
        return;
    }
    const auto to = nb[sim.rng().below(nb.size())];
    sim.remove(from, *obj);
    sim.add(RegionId{static_cast<std::uint32_t>(to)}, *obj);
}

void fabric_step(Fabric& fabric, Simulator& sim) {
    const auto& view = fabric.live_view();
    if (view.nodes.empty()) {
        sim.tick();
        return;
    }
    const auto node = view.nodes[sim.rng().below(view.nodes.size())];
    const auto& nb = view.neighbours[node];
    if (!nb.empty() && sim.rng().below(2) == 1) {
        migrate(fabric, sim, node);
        return;
    }
    sim.step(RegionId{static_cast<std::uint32_t>(node)});
}

Trace fabric_trace(Fabric& fabric, const MembraneSystem& system, const SimConfig& config) {
    fabric.validate();
    config.validate();
    Simulator sim(system, Rng(config.seed));
    bool mobile = false;
    for (const auto n : fabric.live_nodes()) {
        mobile = mobile || !fabric.live_neighbours(n).empty();
    }
    return drive(sim, config, {}, [&](Simulator& s) { fabric_step(fabric, s); }, !mobile);
}

void fail_node(Fabric& fabric, Simulator& sim, std::size_t node) {
    fabric.failed.at(node) = true;
    sim.clear(RegionId{static_cast<std::uint32_t>(node)});
}

FabricReport fabric_run(Fabric fabric, std::span<const bool> inputs, const FabricRunConfig& config) {
    fabric.validate();
    if (inputs.size() != arity(config.kind)) {
        throw ParamError(std::string(to_string(config.kind)) + " takes " + std::to_string(arity(config.kind)) +
                         " inputs, got " + std::to_string(inputs.size()));
    }
    if (config.copies == 0) {
        throw ParamError("input copies must be at least 1");
    }
    if (!(config.node_failure >= 0.0 && config.node_failure <= 1.0)) {
        throw ParamError("node failure probability must lie in [0, 1]");
    }
    const auto gate = config.redundancy ? redundant_gate(config.kind, *config.redundancy, config.logic_multiplier,
                                                         config.deletion_multiplier)
                                        : cooperative_gate(config.kind);
    const auto thresholds = config.redundancy ? config.redundancy->thresholds() : Thresholds::single_copy();
    const auto sys =
        make_fabric_system(fabric, gate.system.region(gate.input_region).rules, gate.system.alphabet);

    Simulator sim(sys, Rng(mix_seed(config.seed, 0)));
    Rng placement(mix_seed(config.seed, 1));
    const auto zero = sim.intern(gate.zero);
    const auto one = sim.intern(gate.one);

    FabricReport report;
    report.nodes = fabric.nodes;
    report.edges = fabric.edges.size();
    report.p_move = fabric.p_move;
    report.expected = evaluate(config.kind, inputs) ? LogicLevel::One : LogicLevel::Zero;

    for (const bool v : inputs) {
        for (std::uint64_t c = 0; c < config.copies; ++c) {
            const auto node = placement.below(fabric.nodes);
            sim.add(RegionId{static_cast<std::uint32_t>(node)}, v ? one : zero);
        }
    }

    auto survivors = [&] {
        report.surviving_zero = 0;
        report.surviving_one = 0;
        for (const auto n : fabric.live_nodes()) {
            report.surviving_zero += sim.count(RegionId{static_cast<std::uint32_t>(n)}, zero);
            report.surviving_one += sim.count(RegionId{static_cast<std::uint32_t>(n)}, one);
        }
        const std::uint64_t h = config.redundancy ? config.redundancy->h : 1;
        const auto ones = static_cast<std::uint64_t>(std::count(inputs.begin(), inputs.end(), true));
        const auto zeros = inputs.size() - ones;
        report.enough_survivors = report.surviving_zero >= h * zeros && report.surviving_one >= h * ones;
    };
    auto fail = [&](std::size_t node) {
        if (node >= fabric.nodes) {
            throw ParamError("failure names node " + std::to_string(node) + " of a " + std::to_string(fabric.nodes) +
                             "-node fabric");
        }
        if (!fabric.failed[node]) {
            fail_node(fabric, sim, node);
            ++report.failures;
        }
    };

    if (config.node_failure > 0.0) {
        for (std::size_t n = 0; n < fabric.nodes; ++n) {
            if (placement.bernoulli(config.node_failure)) {
                fail(n);
            }
        }
    }
    auto pending = config.failures;
    std::sort(pending.begin(), pending.end(), [](const auto& a, const auto& b) { return a.at_attempt < b.at_attempt; });
    std::size_t next = 0;
    auto due = [&] {
        while (next < pending.size() && pending[next].at_attempt <= sim.attempts()) {
            fail(pending[next++].node);
            survivors();
        }
    };
    survivors();
    due();

    while (sim.attempts() < config.budget) {
        fabric_step(fabric, sim);
        due();
        const auto level = read_wire(sim.environment_count(zero), sim.environment_count(one), thresholds);
        if (level != LogicLevel::Undefined) {
            report.observed = level;
            report.attempts_to_output = sim.attempts();
            break;
        }
    }
    report.partitioned = !fabric.live_connected();
    report.timed_out = !report.attempts_to_output;
    report.correct = report.observed == report.expected;
    return report;
}

void write_fabric_reports(std::ostream& out, const std::vector<FabricReport>& reports,
                          const std::vector<std::string>& preamble) {
    for (const auto& line : preamble) {
        out << "# " << line << '\n';
    }
    out << "nodes,edges,p_move,failures,correct,attempts_to_output\n";
    for (const auto& r : reports) {
        out << r.nodes << ',' << r.edges << ',' << r.p_move << ',' << r.failures << ',' << (r.correct ? 1 : 0) << ',';
        if (r.attempts_to_output) {
            out << *r.attempts_to_output;
        }
        out << '\n';
    }
}

}  // namespace psys
