#include "psys/errors.hpp"
#include "psys/netlist.hpp"

#include <map>
#include <set>

namespace psys {

void Netlist::validate() const {
    std::set<std::string> driven;
    for (const auto& w : inputs) {
        if (!driven.insert(w).second) {
            throw SemanticError("wire '" + w + "' is driven more than once");
        }
    }
    for (const auto& g : gates) {
        if (g.inputs.size() != arity(g.kind)) {
            throw SemanticError("gate '" + g.id + "': " + std::string(to_string(g.kind)) + " takes " +
                                std::to_string(arity(g.kind)) + " operand(s)");
        }
        if (!driven.insert(g.output).second) {
            throw SemanticError("wire '" + g.output + "' is driven more than once");
        }
    }
    for (const auto& g : gates) {
        for (const auto& w : g.inputs) {
            if (driven.count(w) == 0) {
                throw SemanticError("wire '" + w + "' has no driver");
            }
        }
    }
    for (const auto& w : outputs) {
        if (driven.count(w) == 0) {
            throw SemanticError("output wire '" + w + "' has no driver");
        }
    }
    (void)topological_order();
}

const Gate* Netlist::driver(const std::string& wire) const {
    for (const auto& g : gates) {
        if (g.output == wire) {
            return &g;
        }
    }
    return nullptr;
}

std::size_t Netlist::fanout(const std::string& wire) const {
    std::size_t n = 0;
    for (const auto& g : gates) {
        for (const auto& w : g.inputs) {
            n += w == wire ? 1 : 0;
        }
    }
    for (const auto& w : outputs) {
        n += w == wire ? 1 : 0;
    }
    return n;
}

std::vector<std::size_t> Netlist::topological_order() const {
    std::map<std::string, std::size_t> by_output;
    for (std::size_t i = 0; i < gates.size(); ++i) {
        by_output.emplace(gates[i].output, i);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    std::vector<int> state(gates.size(), 0);
    std::vector<std::size_t> order;
    order.reserve(gates.size());

    auto visit = [&](auto&& self, std::size_t i) -> void {
        if (state[i] == 2) {
            return;
        }
        if (state[i] == 1) {
            throw CycleError("combinational loop through wire '" + gates[i].output +
                             "'; only feed-forward circuits can be mapped onto membranes");
        }
        state[i] = 1;
        for (const auto& w : gates[i].inputs) {
            if (const auto it = by_output.find(w); it != by_output.end()) {
                self(self, it->second);
            }
        }
        state[i] = 2;
        order.push_back(i);
    };
    for (std::size_t i = 0; i < gates.size(); ++i) {
        visit(visit, i);
    }
    return order;
}

Assignment evaluate(const Netlist& netlist, const Assignment& inputs) {
    Assignment values;
    for (const auto& w : netlist.inputs) {
        const auto it = inputs.find(w);
        if (it == inputs.end()) {
            throw SemanticError("no value for input '" + w + "'");
        }
        values[w] = it->second;
    }
    for (const auto i : netlist.topological_order()) {
        const auto& g = netlist.gates[i];
        bool operands[2] = {false, false};
        for (std::size_t k = 0; k < g.inputs.size(); ++k) {
            operands[k] = values.at(g.inputs[k]);
        }
        values[g.output] = evaluate(g.kind, std::span<const bool>(operands, g.inputs.size()));
    }
    Assignment out;
    for (const auto& w : netlist.outputs) {
        out[w] = values.at(w);
    }
    return out;
}

std::vector<Assignment> all_assignments(const Netlist& netlist) {
    const auto n = netlist.inputs.size();
    std::vector<Assignment> out;
    out.reserve(std::size_t{1} << n);
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
        Assignment a;
        for (std::size_t k = 0; k < n; ++k) {
            a[netlist.inputs[k]] = ((bits >> (n - 1 - k)) & 1U) != 0;
        }
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace psys
