#include "lexer.hpp"
#include "psys/dsl.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace psys::dsl {

using detail::Token;
using detail::TokenStream;

namespace {

std::string where(const Token& t) { return std::to_string(t.line) + ":" + std::to_string(t.column) + ": "; }

const Token& wire_name(TokenStream& ts) {
    const Token& t = ts.expect_word("a wire name");
    if (std::isalpha(static_cast<unsigned char>(t.text[0])) == 0) {
        ts.fail(t, "wire names must start with a letter");
    }
    return t;
}

}  // namespace

Netlist parse_netlist(std::string_view text) {
    TokenStream ts(detail::tokenize(text));
    Netlist net;
    std::map<std::string, Token> drivers;
    std::vector<std::pair<std::string, Token>> reads;

    auto drive = [&](const Token& t) {
        if (!drivers.emplace(t.text, t).second) {
            throw SemanticError(where(t) + "wire '" + t.text + "' is driven more than once");
        }
    };

    while (!ts.at_end()) {
        const Token& head = wire_name(ts);
        if (head.text == "input" && ts.peek().is_word()) {
            do {
                const Token& w = wire_name(ts);
                drive(w);
                net.inputs.push_back(w.text);
            } while (ts.accept(','));
        } else if (head.text == "output" && ts.peek().is_word()) {
            do {
                const Token& w = wire_name(ts);
                reads.emplace_back(w.text, w);
                net.outputs.push_back(w.text);
            } while (ts.accept(','));
        } else {
            const Token out = head;
            ts.expect('=', "'=' after wire name");
            const Token& kind_tok = ts.expect_word("a gate kind (AND, OR, NAND, NOT)");
            const auto kind = parse_gate_kind(kind_tok.text);
            if (!kind) {
                ts.fail(kind_tok, "unknown gate kind '" + kind_tok.text + "'");
            }
            const Token kind_copy = kind_tok;
            ts.expect('(', "'('");
            Gate gate{out.text, *kind, {}, out.text};
            if (!ts.peek().is(')')) {
                do {
                    const Token& w = wire_name(ts);
                    reads.emplace_back(w.text, w);
                    gate.inputs.push_back(w.text);
                } while (ts.accept(','));
            }
            ts.expect(')', "')'");
            if (gate.inputs.size() != arity(*kind)) {
                throw SemanticError(where(kind_copy) + std::string(to_string(*kind)) + " takes " +
                                    std::to_string(arity(*kind)) + " operand(s), got " +
                                    std::to_string(gate.inputs.size()));
            }
            drive(out);
            net.gates.push_back(std::move(gate));
        }
        ts.expect(';', "';'");
    }
    for (const auto& [wire, tok] : reads) {
        if (drivers.count(wire) == 0) {
            throw SemanticError(where(tok) + "wire '" + wire + "' has no driver");
        }
    }
    net.validate();
    return net;
}

std::string print_netlist(const Netlist& netlist) {
    std::ostringstream out;
    auto list = [&](const std::vector<std::string>& wires) {
        for (std::size_t i = 0; i < wires.size(); ++i) {
            out << (i == 0 ? "" : ", ") << wires[i];
        }
    };
    if (!netlist.inputs.empty()) {
        out << "input ";
        list(netlist.inputs);
        out << ";\n";
    }
    for (const auto& g : netlist.gates) {
        out << g.output << " = " << to_string(g.kind) << '(';
        list(g.inputs);
        out << ");\n";
    }
    if (!netlist.outputs.empty()) {
        out << "output ";
        list(netlist.outputs);
        out << ";\n";
    }
    return out.str();
}

}  // namespace psys::dsl
