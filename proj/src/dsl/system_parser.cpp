#include "lexer.hpp"
#include "psys/dsl.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

namespace psys::dsl {

using detail::Token;
using detail::TokenStream;

namespace {

std::string where(const Token& t) { return std::to_string(t.line) + ":" + std::to_string(t.column) + ": "; }

/// Records every symbol occurrence so undeclared ones can be reported with
/// the position of their first use.
using SymbolUses = std::vector<std::pair<Symbol, Token>>;

class Parser {
public:
    Parser(TokenStream& ts, SymbolUses* uses) : ts_(ts), uses_(uses) {}

    const Token& name(std::string_view what) {
        const Token& t = ts_.expect_word(what);
        if (detail::is_reserved(t.text)) {
            ts_.fail(t, "'" + t.text + "' is reserved and cannot be used as " + std::string(what));
        }
        return t;
    }

    Symbol symbol(const Token& t) {
        Symbol s(t.text);
        if (uses_ != nullptr) {
            uses_->emplace_back(s, t);
        }
        return s;
    }

    std::uint64_t multiplicity() {
        if (!ts_.accept('^')) {
            return 1;
        }
        const Token& t = ts_.next();
        const auto n = detail::to_integer(t, ts_);
        if (n == 0) {
            ts_.fail(t, "multiplicity must be positive");
        }
        return n;
    }

    /// Items up to the first token that cannot start one. Reserved words end
    /// the multiset; whether that is legal is the caller's business.
    Multiset multiset() {
        Multiset out;
        for (;;) {
            const Token& t = ts_.peek();
            if (t.is_word() && !detail::is_reserved(t.text)) {
                ts_.next();
                const Symbol s = symbol(t);
                out.add(s, multiplicity());
            } else if (t.is('(')) {
                ts_.next();
                Rule r = rule();
                ts_.expect(')', "')' closing a rule object");
                out.add(ObjectValue(std::move(r)), multiplicity());
            } else {
                return out;
            }
        }
    }

    Target target() {
        const Token& t = ts_.next();
        if (t.text == "H") {
            return Target::here();
        }
        if (t.text == "L" || t.text == "OUT") {
            return Target::out();
        }
        if (t.text == "IN") {
            ts_.expect('(', "'(' after IN");
            const Token& label = name("a region label");
            ts_.expect(')', "')'");
            return Target::in(label.text);
        }
        // LINK(label) only when the parenthesis is glued to the keyword;
        // `LINK (r)` starts a rule object.
        const Token& p = ts_.peek();
        if (p.is('(') && p.line == t.line && p.column == t.column + t.text.size()) {
            ts_.next();
            const Token& label = name("a link label");
            ts_.expect(')', "')'");
            return Target::link(label.text);
        }
        return Target::link();
    }

    Rule rule() {
        Multiset lhs = multiset();
        if (lhs.empty()) {
            ts_.fail(ts_.peek(), "expected a rule left-hand side, found " + detail::describe(ts_.peek()));
        }
        ts_.expect_arrow();
        std::vector<Product> rhs;
        if (!(ts_.peek().is_word() && detail::is_reserved(ts_.peek().text))) {
            ts_.fail(ts_.peek(), "expected a target (H, L, OUT, IN(x), LINK), found " + detail::describe(ts_.peek()));
        }
        while (ts_.peek().is_word() && detail::is_reserved(ts_.peek().text)) {
            Target t = target();
            rhs.push_back(Product{multiset(), std::move(t)});
        }
        return Rule(std::move(lhs), std::move(rhs));
    }

    StructureNode structure() {
        ts_.expect('[', "'['");
        StructureNode node;
        node.label = name("a region label").text;
        while (ts_.peek().is('[')) {
            node.children.push_back(structure());
        }
        ts_.expect(']', "']' or '['");
        const Token& close = name("a closing label");
        if (close.text != node.label) {
            ts_.fail(close, "label mismatch: '" + node.label + "' closed by '" + close.text + "'");
        }
        return node;
    }

private:
    TokenStream& ts_;
    SymbolUses* uses_;
};

std::vector<std::pair<std::size_t, std::string_view>> split_lines(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> lines;
    std::size_t line = 1;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        lines.emplace_back(line++, text.substr(0, nl));
        if (nl == std::string_view::npos) {
            break;
        }
        text.remove_prefix(nl + 1);
    }
    return lines;
}

void collect_labels(const StructureNode& node, std::vector<std::string>& out) {
    out.push_back(node.label);
    for (const auto& c : node.children) {
        collect_labels(c, out);
    }
}

}  // namespace

StructureNode parse_structure(std::string_view text) {
    TokenStream ts(detail::tokenize(text));
    Parser p(ts, nullptr);
    auto node = p.structure();
    ts.expect_end();
    return node;
}

Multiset parse_multiset(std::string_view text) {
    TokenStream ts(detail::tokenize(text));
    Parser p(ts, nullptr);
    auto m = p.multiset();
    ts.expect_end();
    return m;
}

Rule parse_rule(std::string_view text) {
    TokenStream ts(detail::tokenize(text));
    Parser p(ts, nullptr);
    auto r = p.rule();
    ts.expect_end();
    return r;
}

SystemDoc parse_system(std::string_view text) {
    SystemDoc doc;
    SymbolUses uses;
    std::vector<std::pair<std::string, Token>> declared;  // region label, declaring token
    std::vector<std::pair<std::string, Token>> referenced;
    std::vector<std::pair<Symbol, Token>> outputs;
    std::map<std::string, std::set<std::string>> link_labels;
    std::optional<Token> kind_token;

    for (const auto& [line_no, line] : split_lines(text)) {
        TokenStream ts(detail::tokenize(line, line_no));
        if (ts.at_end()) {
            continue;
        }
        Parser p(ts, &uses);
        const Token head = ts.expect_word("a statement keyword");
        const auto& kw = head.text;
        if (kw == "kind") {
            const Token& k = ts.expect_word("tree, network or hybrid");
            if (k.text == "tree") {
                doc.kind = SystemKind::Tree;
            } else if (k.text == "network") {
                doc.kind = SystemKind::Network;
            } else if (k.text == "hybrid") {
                doc.kind = SystemKind::Hybrid;
            } else {
                ts.fail(k, "unknown system kind '" + k.text + "'");
            }
            if (kind_token) {
                ts.fail(head, "kind declared twice");
            }
            kind_token = head;
        } else if (kw == "alphabet") {
            while (!ts.at_end()) {
                doc.alphabet.insert(Symbol(p.name("a symbol").text));
            }
        } else if (kw == "output") {
            while (!ts.at_end()) {
                const Token& t = p.name("a symbol");
                doc.output_alphabet.insert(Symbol(t.text));
                outputs.emplace_back(Symbol(t.text), t);
            }
        } else if (kw == "structure") {
            // Remember the position of every label for duplicate reporting.
            const Token open = ts.peek(1);
            auto tree = p.structure();
            std::vector<std::string> labels;
            collect_labels(tree, labels);
            for (auto& l : labels) {
                declared.emplace_back(std::move(l), open);
            }
            doc.trees.push_back(std::move(tree));
        } else if (kw == "cell" || kw == "region") {
            if (ts.at_end()) {
                ts.fail(ts.peek(), "expected a region label");
            }
            while (!ts.at_end()) {
                const Token& t = p.name("a region label");
                declared.emplace_back(t.text, t);
                doc.cells.push_back(t.text);
            }
        } else if (kw == "environment") {
            ts.expect(':', "':'");
            doc.environment += p.multiset();
        } else if (kw == "contents") {
            const Token label = p.name("a region label");
            ts.expect(':', "':'");
            referenced.emplace_back(label.text, label);
            auto m = p.multiset();
            if (!m.empty()) {
                doc.contents[label.text] += m;
            }
        } else if (kw == "rule") {
            const Token label = p.name("a region label");
            std::uint64_t mult = 1;
            if (ts.accept('*')) {
                const Token& n = ts.next();
                mult = detail::to_integer(n, ts);
                if (mult == 0) {
                    ts.fail(n, "rule multiplicity must be positive");
                }
            }
            ts.expect(':', "':'");
            referenced.emplace_back(label.text, label);
            doc.rules[label.text].add(ObjectValue(p.rule()), mult);
        } else if (kw == "link") {
            const Token from = p.name("a region label");
            ts.expect_arrow();
            const Token to = p.name("a region label");
            referenced.emplace_back(from.text, from);
            referenced.emplace_back(to.text, to);
            auto& taken = link_labels[from.text];
            std::string label;
            if (ts.accept('[')) {
                const Token& l = p.name("a link label");
                ts.expect(']', "']'");
                label = l.text;
                if (taken.count(label) != 0) {
                    throw SemanticError(where(l) + "duplicate link label '" + label + "' on region '" +
                                        from.text + "'");
                }
            } else {
                auto n = taken.size() + 1;
                while (taken.count(std::to_string(n)) != 0) {
                    ++n;
                }
                label = std::to_string(n);
            }
            taken.insert(label);
            doc.links.push_back(LinkDecl{from.text, to.text, label});
        } else {
            ts.fail(head, "unknown statement '" + kw + "'");
        }
        if (!ts.at_end()) {
            // Point at the leftover token with a message that fits the context.
            const Token& t = ts.peek();
            if (t.is_word() && detail::is_reserved(t.text)) {
                ts.fail(t, "target '" + t.text + "' is only valid on the right-hand side of a rule");
            }
            ts.fail(t, "unexpected " + detail::describe(t));
        }
    }

    std::set<std::string> labels;
    for (const auto& [label, tok] : declared) {
        if (!labels.insert(label).second) {
            throw SemanticError(where(tok) + "region label '" + label + "' declared twice");
        }
    }
    for (const auto& [label, tok] : referenced) {
        if (labels.count(label) == 0) {
            throw SemanticError(where(tok) + "undeclared region '" + label + "'");
        }
    }
    for (const auto& [sym, tok] : uses) {
        if (doc.alphabet.count(sym) == 0) {
            throw SemanticError(where(tok) + "symbol '" + sym.name() + "' is not in the alphabet");
        }
    }
    for (const auto& [sym, tok] : outputs) {
        if (doc.alphabet.count(sym) == 0) {
            throw SemanticError(where(tok) + "output symbol '" + sym.name() + "' is not in the alphabet");
        }
    }
    return doc;
}

namespace {

void lower_tree(const StructureNode& node, std::optional<RegionId> parent, MembraneSystem& sys) {
    const auto id = sys.add_region(node.label, parent);
    for (const auto& c : node.children) {
        lower_tree(c, id, sys);
    }
}

SystemKind infer_kind(const SystemDoc& doc) {
    if (doc.kind) {
        return *doc.kind;
    }
    if (doc.trees.empty()) {
        return SystemKind::Network;
    }
    if (doc.trees.size() == 1 && doc.cells.empty() && doc.links.empty()) {
        return SystemKind::Tree;
    }
    return SystemKind::Hybrid;
}

}  // namespace

MembraneSystem lower(const SystemDoc& doc) {
    MembraneSystem sys;
    sys.kind = infer_kind(doc);
    sys.alphabet = doc.alphabet;
    sys.output_alphabet = doc.output_alphabet;
    sys.environment = doc.environment;
    for (const auto& tree : doc.trees) {
        lower_tree(tree, std::nullopt, sys);
    }
    for (const auto& cell : doc.cells) {
        sys.add_region(cell);
    }
    if (doc.trees.size() == 1 && sys.kind != SystemKind::Network) {
        sys.skin = RegionId{0};
    }
    auto lookup = [&](const std::string& label) {
        const auto id = sys.find(label);
        if (!id) {
            throw SemanticError("undeclared region '" + label + "'");
        }
        return *id;
    };
    for (const auto& [label, m] : doc.contents) {
        sys.region(lookup(label)).contents += m;
    }
    for (const auto& [label, pool] : doc.rules) {
        sys.region(lookup(label)).rules += pool;
    }
    for (const auto& l : doc.links) {
        sys.add_link(lookup(l.from), lookup(l.to), l.label);
    }
    return sys;
}

SystemDoc raise(const MembraneSystem& system) {
    SystemDoc doc;
    doc.kind = system.kind;
    doc.alphabet = system.alphabet;
    doc.output_alphabet = system.output_alphabet;
    doc.environment = system.environment;
    std::function<StructureNode(RegionId)> build = [&](RegionId id) {
        const auto& r = system.region(id);
        StructureNode node{r.label, {}};
        for (const auto c : r.children) {
            node.children.push_back(build(c));
        }
        return node;
    };
    for (const auto& r : system.regions) {
        if (r.parent) {
            continue;
        }
        const bool tree = system.kind == SystemKind::Tree || !r.children.empty() || system.skin == r.id;
        if (tree) {
            doc.trees.push_back(build(r.id));
        } else {
            doc.cells.push_back(r.label);
        }
    }
    for (const auto& r : system.regions) {
        if (!r.contents.empty()) {
            doc.contents[r.label] += r.contents;
        }
        if (!r.rules.empty()) {
            doc.rules[r.label] += r.rules;
        }
        for (const auto& l : r.out_links) {
            doc.links.push_back(LinkDecl{r.label, system.region(l.head).label, l.label});
        }
    }
    return doc;
}

MembraneSystem load_system(std::string_view text) { return lower(parse_system(text)); }

std::string print_structure(const StructureNode& node) {
    std::string out = "[" + node.label;
    for (const auto& c : node.children) {
        out += print_structure(c);
    }
    out += "]" + node.label;
    return out;
}

std::string print_system(const SystemDoc& doc) {
    std::ostringstream out;
    if (doc.kind) {
        out << "kind " << to_string(*doc.kind) << '\n';
    }
    out << "alphabet";
    for (const auto& s : doc.alphabet) {
        out << ' ' << s.name();
    }
    out << '\n';
    if (!doc.output_alphabet.empty()) {
        out << "output";
        for (const auto& s : doc.output_alphabet) {
            out << ' ' << s.name();
        }
        out << '\n';
    }
    for (const auto& t : doc.trees) {
        out << "structure " << print_structure(t) << '\n';
    }
    for (const auto& c : doc.cells) {
        out << "cell " << c << '\n';
    }
    if (!doc.environment.empty()) {
        out << "environment: " << to_string(doc.environment) << '\n';
    }
    for (const auto& [label, m] : doc.contents) {
        if (!m.empty()) {
            out << "contents " << label << ": " << to_string(m) << '\n';
        }
    }
    for (const auto& [label, pool] : doc.rules) {
        for (const auto& [object, n] : pool.entries()) {
            out << "rule " << label;
            if (n != 1) {
                out << " *" << n;
            }
            out << ": " << to_string(object.rule()) << '\n';
        }
    }
    for (const auto& l : doc.links) {
        out << "link " << l.from << " -> " << l.to << " [" << l.label << "]\n";
    }
    return out.str();
}

std::string print_system(const MembraneSystem& system) { return print_system(raise(system)); }

}  // namespace psys::dsl
