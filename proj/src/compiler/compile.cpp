#include "psys/compiler.hpp"
#include "psys/errors.hpp"

#include <functional>

namespace psys {

namespace {

const Symbol kZero{"0"};
const Symbol kOne{"1"};
const Symbol kToken{"t"};

WireSymbols wire_pair(const std::string& prefix) { return {Symbol(prefix + "_0"), Symbol(prefix + "_1")}; }

const WireSymbols& plain() {
    static const WireSymbols p{kZero, kOne};
    return p;
}

// Who reads a wire: a gate operand slot or an output declaration.
struct Sink {
    std::optional<std::size_t> gate;  // empty for an output declaration
    std::string output;
};

std::vector<Sink> sinks_of(const Netlist& n, const std::string& wire) {
    std::vector<Sink> out;
    for (std::size_t g = 0; g < n.gates.size(); ++g) {
        for (const auto& in : n.gates[g].inputs) {
            if (in == wire) {
                out.push_back({g, {}});
            }
        }
    }
    for (const auto& o : n.outputs) {
        if (o == wire) {
            out.push_back({std::nullopt, o});
        }
    }
    return out;
}

class Builder {
public:
    Builder(const Netlist& netlist, const CompileOptions& options) : opt_(options) {
        netlist.validate();
        c_.netlist = netlist;
        c_.backend = options.backend;
        if (options.logic_multiplier == 0) {
            throw ParamError("logic rule multiplier must be at least 1");
        }
        if (options.redundancy) {
            options.redundancy->validate();
            h_ = options.redundancy->h;
            m_ = options.redundancy->m;
            c_.redundant = true;
            c_.thresholds = options.redundancy->thresholds();
            c_.input_copies = options.input_copies.value_or(m_);
        } else {
            c_.input_copies = options.input_copies.value_or(1);
        }
        if (c_.input_copies == 0) {
            throw ParamError("input copies must be at least 1");
        }
        claim(kZero, kToken);
        claim(kOne, kToken);
    }

    CompiledCircuit& circuit() { return c_; }
    MembraneSystem& sys() { return c_.system; }

    // Registers a signal symbol with its token companion. Two roles mapping
    // to the same name would let unrelated signals react with each other.
    void claim(const Symbol& s, const Symbol& token) {
        for (const auto& [signal, t] : c_.token_of) {
            if (t == s) {
                throw SemanticError("generated symbol '" + s.name() + "' is used for two different signals; rename a wire");
            }
        }
        const auto [it, inserted] = c_.token_of.emplace(s, token);
        if (!inserted && it->second != token) {
            throw SemanticError("generated symbol '" + s.name() + "' is used for two different signals; rename a wire");
        }
        if (c_.token_of.count(token) != 0 && token != kToken) {
            throw SemanticError("generated symbol '" + token.name() + "' is used for two different signals; rename a wire");
        }
    }

    WireSymbols claim_pair(const std::string& prefix) {
        auto p = wire_pair(prefix);
        const Symbol t(prefix + "_t");
        for (const auto& s : {p.zero, p.one, t}) {
            if (c_.token_of.count(s) != 0) {
                throw SemanticError("generated symbol '" + s.name() + "' is used for two different signals; rename a wire");
            }
        }
        claim(p.zero, t);
        claim(p.one, t);
        return p;
    }

    RegionId region(const std::string& label, std::optional<RegionId> parent = std::nullopt) {
        if (sys().find(label)) {
            throw SemanticError("generated region label '" + label + "' collides with a wire name; rename the wire");
        }
        return sys().add_region(label, parent);
    }

    // Logic rules of `kind` in `r`; `emit(v, n)` builds the clause carrying
    // n result molecules of value v.
    void gate_rules(RegionId r, GateKind kind, const std::function<Product(bool, std::uint64_t)>& emit) {
        const std::uint64_t n = arity(kind);
        for (std::uint64_t ones = 0; ones <= n; ++ones) {
            Multiset lhs;
            if (n - ones > 0) {
                lhs.add(kZero, (n - ones) * h_);
            }
            if (ones > 0) {
                lhs.add(kOne, ones * h_);
            }
            bool operands[2] = {ones >= 1, ones == 2};
            if (n == 1) {
                operands[0] = ones == 1;
            }
            const bool v = evaluate(kind, std::span<const bool>(operands, n));
            sys().add_rule(r, Rule(lhs, {emit(v, m_)}), opt_.logic_multiplier);
        }
        if (c_.redundant && opt_.deletion_multiplier > 0) {
            for (const auto& s : {kZero, kOne}) {
                sys().add_rule(r, Rule(Multiset::of(s, 2), {Product{Multiset::of(s), Target::here()}}),
                               opt_.deletion_multiplier);
            }
        }
    }

    // Output species in the environment: plain 0/1 for a single output,
    // `<wire>_0/_1` when there are several.
    const WireSymbols& output_symbols(const std::string& wire) {
        auto it = c_.output_symbols.find(wire);
        if (it != c_.output_symbols.end()) {
            return it->second;
        }
        // A passthrough wire simply leaves under its transport name.
        const auto in = c_.input_symbols.find(wire);
        const bool passthrough = in != c_.input_symbols.end() && in->second.size() == 1 &&
                                 in->second.front().zero == wire_pair(wire).zero;
        WireSymbols p = c_.netlist.outputs.size() == 1 ? plain()
                        : passthrough                  ? in->second.front()
                                                       : claim_pair(wire);
        return c_.output_symbols.emplace(wire, p).first->second;
    }

    CompiledCircuit finish() {
        auto& s = sys();
        for (const auto& [wire, p] : c_.output_symbols) {
            s.output_alphabet.insert(p.zero);
            s.output_alphabet.insert(p.one);
        }
        s.alphabet.insert(kZero);
        s.alphabet.insert(kOne);
        s.extend_alphabet();
        if (opt_.ready_token) {
            return attach_ready_token(std::move(c_));
        }
        return std::move(c_);
    }

private:
    const CompileOptions& opt_;
    CompiledCircuit c_;
    std::uint64_t h_ = 1;
    std::uint64_t m_ = 1;
};

Multiset many(const Symbol& s, std::uint64_t n) { return Multiset::of(s, n); }

}  // namespace

std::string_view to_string(Backend backend) noexcept {
    return backend == Backend::Tree ? "tree" : "network";
}

std::optional<Symbol> CompiledCircuit::output_token(const std::string& wire) const {
    if (!ready_token) {
        return std::nullopt;
    }
    return token_of.at(output_symbols.at(wire).zero);
}

CompiledCircuit compile_tree(const Netlist& netlist, const CompileOptions& options) {
    Builder b(netlist, options);
    const auto& n = b.circuit().netlist;
    if (n.outputs.size() != 1) {
        throw ShapeError("tree backend needs exactly one output, got " + std::to_string(n.outputs.size()));
    }
    for (const auto& g : n.gates) {
        const auto k = n.fanout(g.output);
        if (k != 1) {
            throw ShapeError("tree backend needs every gate result read exactly once; '" + g.output + "' is read " +
                             std::to_string(k) + " times (use the network backend)");
        }
    }
    const auto& out = n.outputs.front();
    const auto& env = b.output_symbols(out);
    auto& sys = b.sys();
    sys.kind = SystemKind::Tree;

    const Gate* root = n.driver(out);
    if (root == nullptr) {
        // Passthrough: the input leaves the skin unchanged.
        const auto skin = b.region(out);
        sys.skin = skin;
        b.circuit().injection_region = skin;
        const auto p = b.claim_pair(out);
        b.circuit().input_symbols[out].push_back(p);
        for (const bool v : {false, true}) {
            sys.add_rule(skin, Rule(many(p[v], 1), {Product{many(env[v], 1), Target::out()}}));
        }
        return b.finish();
    }

    // Membranes in pre-order; `path` holds the chain of membranes from the
    // skin down to the gate being placed.
    std::map<std::string, RegionId> region_of;
    std::map<std::string, std::uint64_t> uses;
    std::vector<RegionId> path;
    std::function<void(const Gate&, std::optional<RegionId>)> place = [&](const Gate& g,
                                                                          std::optional<RegionId> parent) {
        const auto r = b.region(g.output, parent);
        region_of[g.output] = r;
        path.push_back(r);
        const bool is_root = !parent.has_value();
        b.gate_rules(r, g.kind, [&](bool v, std::uint64_t copies) {
            return Product{many(is_root ? env[v] : plain()[v], copies), Target::out()};
        });
        for (const auto& in : g.inputs) {
            if (const Gate* child = n.driver(in)) {
                place(*child, r);
                continue;
            }
            const auto k = ++uses[in];
            const auto prefix = n.fanout(in) == 1 ? in : in + "_" + std::to_string(k);
            const auto p = b.claim_pair(prefix);
            b.circuit().input_symbols[in].push_back(p);
            for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                const auto& next = sys.region(path[i + 1]).label;
                for (const bool v : {false, true}) {
                    sys.add_rule(path[i], Rule(many(p[v], 1), {Product{many(p[v], 1), Target::in(next)}}));
                }
            }
            for (const bool v : {false, true}) {
                sys.add_rule(r, Rule(many(p[v], 1), {Product{many(plain()[v], 1), Target::here()}}));
            }
        }
        path.pop_back();
    };
    place(*root, std::nullopt);
    sys.skin = region_of.at(root->output);
    b.circuit().injection_region = *sys.skin;
    return b.finish();
}

CompiledCircuit compile_network(const Netlist& netlist, const CompileOptions& options) {
    Builder b(netlist, options);
    const auto& n = b.circuit().netlist;
    auto& sys = b.sys();
    sys.kind = SystemKind::Network;

    const auto inject = b.region("inject");
    b.circuit().injection_region = inject;
    std::map<std::string, RegionId> cell_of;
    for (const auto gi : n.topological_order()) {
        const auto& g = n.gates[gi];
        cell_of[g.output] = b.region(g.output);
    }

    // Sends value v of `wire` from `from`. With one reader the result goes
    // straight there; with several it goes to a splitter cell which copies
    // every molecule once per reader. `via` names the link out of `from`;
    // empty means `from` has a single outgoing link and uses an unlabelled
    // Leave.
    std::map<std::string, RegionId> splitter_of;
    auto route = [&](RegionId from, const std::string& wire, const std::string& via) {
        const auto sinks = sinks_of(n, wire);
        const std::string link_label = via.empty() ? "1" : via;
        auto link_target = [&] { return via.empty() ? Target::link() : Target::link(via); };
        std::function<Product(bool, std::uint64_t)> emit;
        if (sinks.size() == 1) {
            const auto& s = sinks.front();
            if (s.gate) {
                sys.add_link(from, cell_of.at(n.gates[*s.gate].output), link_label);
                emit = [=](bool v, std::uint64_t k) { return Product{many(plain()[v], k), link_target()}; };
            } else {
                const auto env = b.output_symbols(s.output);
                emit = [=](bool v, std::uint64_t k) { return Product{many(env[v], k), Target::out()}; };
            }
            return emit;
        }
        const auto split = b.region("split_" + wire);
        splitter_of[wire] = split;
        sys.add_link(from, split, link_label);
        for (const bool v : {false, true}) {
            const auto& s = plain()[v];
            Multiset copies;
            for (std::size_t i = 1; i <= sinks.size(); ++i) {
                const Symbol tag(s.name() + "_" + std::to_string(i));
                b.claim(tag, Symbol(kToken.name() + "_" + std::to_string(i)));
                copies.add(tag);
            }
            sys.add_rule(split, Rule(many(s, 1), {Product{copies, Target::here()}}));
        }
        for (std::size_t i = 0; i < sinks.size(); ++i) {
            const auto label = std::to_string(i + 1);
            Target t = Target::out();
            std::optional<WireSymbols> env;
            if (sinks[i].gate) {
                sys.add_link(split, cell_of.at(n.gates[*sinks[i].gate].output), label);
                t = Target::link(label);
            } else {
                env = b.output_symbols(sinks[i].output);
            }
            for (const bool v : {false, true}) {
                const Symbol tag(plain()[v].name() + "_" + label);
                const auto& result = env ? (*env)[v] : plain()[v];
                sys.add_rule(split, Rule(many(tag, 1), {Product{many(result, 1), t}}));
            }
        }
        emit = [=](bool v, std::uint64_t k) { return Product{many(plain()[v], k), link_target()}; };
        return emit;
    };

    for (const auto& in : n.inputs) {
        if (n.fanout(in) == 0) {
            continue;
        }
        const auto p = b.claim_pair(in);
        b.circuit().input_symbols[in].push_back(p);
        const auto emit = route(inject, in, in);
        for (const bool v : {false, true}) {
            sys.add_rule(inject, Rule(many(p[v], 1), {emit(v, 1)}));
        }
    }
    for (const auto gi : n.topological_order()) {
        const auto& g = n.gates[gi];
        const auto cell = cell_of.at(g.output);
        b.gate_rules(cell, g.kind, route(cell, g.output, {}));
    }
    return b.finish();
}

CompiledCircuit compile(const Netlist& netlist, const CompileOptions& options) {
    return options.backend == Backend::Tree ? compile_tree(netlist, options) : compile_network(netlist, options);
}

namespace {

Multiset with_tokens(const Multiset& m, const std::map<Symbol, Symbol>& token_of) {
    Multiset out = m;
    for (const auto& [obj, count] : m.entries()) {
        if (!obj.is_symbol()) {
            continue;
        }
        if (auto it = token_of.find(obj.symbol()); it != token_of.end()) {
            out.add(it->second, count);
        }
    }
    return out;
}

}  // namespace

CompiledCircuit attach_ready_token(CompiledCircuit circuit) {
    if (circuit.redundant) {
        throw ParamError("ready tokens are defined for single-copy circuits only");
    }
    if (circuit.ready_token) {
        return circuit;
    }
    const auto token_of = circuit.token_of;
    for (auto& region : circuit.system.regions) {
        Multiset rules;
        for (const auto& [obj, count] : region.rules.entries()) {
            const auto& r = obj.rule();
            std::vector<Product> rhs;
            for (const auto& p : r.rhs()) {
                rhs.push_back(Product{with_tokens(p.objects, token_of), p.target});
            }
            rules.add(Rule(with_tokens(r.lhs(), token_of), std::move(rhs)), count);
        }
        region.rules = std::move(rules);
    }
    for (const auto& [wire, p] : circuit.output_symbols) {
        circuit.system.output_alphabet.insert(token_of.at(p.zero));
    }
    circuit.system.extend_alphabet();
    circuit.ready_token = true;
    return circuit;
}

void inject(const CompiledCircuit& circuit, MembraneSystem& system, const Assignment& inputs) {
    auto& contents = system.region(circuit.injection_region).contents;
    for (const auto& wire : circuit.netlist.inputs) {
        const auto v = inputs.find(wire);
        if (v == inputs.end()) {
            throw SemanticError("no value given for input '" + wire + "'");
        }
        const auto it = circuit.input_symbols.find(wire);
        if (it == circuit.input_symbols.end()) {
            continue;
        }
        for (const auto& p : it->second) {
            contents.add(p[v->second], circuit.input_copies);
            if (circuit.ready_token) {
                contents.add(circuit.token_of.at(p[v->second]), circuit.input_copies);
            }
        }
    }
}

std::map<std::string, LogicLevel> read_outputs(const CompiledCircuit& circuit, const Simulator& sim) {
    std::map<std::string, LogicLevel> out;
    for (const auto& [wire, p] : circuit.output_symbols) {
        out[wire] = read_wire(sim.environment_count(p.zero), sim.environment_count(p.one), circuit.thresholds);
    }
    return out;
}

}  // namespace psys
