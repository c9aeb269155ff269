#include "psys/errors.hpp"
#include "psys/gates.hpp"

namespace psys {

namespace {

Multiset ms(const Symbol& s, std::uint64_t n) { return Multiset::of(s, n); }

Rule leave(Multiset lhs, Multiset product) {
    return Rule(std::move(lhs), {Product{std::move(product), Target::out()}});
}

GateChemistry single_membrane() {
    GateChemistry g;
    g.system.kind = SystemKind::Tree;
    g.system.alphabet = {g.zero, g.one};
    g.system.output_alphabet = {g.zero, g.one};
    g.input_region = g.system.add_region("1");
    g.system.skin = g.input_region;
    return g;
}

// Result of `kind` on (count of zeros, count of ones) operands; the
// rule sets list unordered operand pairs.
bool value_for(GateKind kind, std::uint64_t ones) {
    if (arity(kind) == 1) {
        const bool in[] = {ones == 1};
        return evaluate(kind, in);
    }
    const bool in[] = {ones >= 1, ones == 2};
    return evaluate(kind, in);
}

void add_logic_rules(GateChemistry& g, GateKind kind, std::uint64_t h, std::uint64_t m, std::uint64_t mult) {
    const auto n = arity(kind);
    for (std::uint64_t ones = 0; ones <= n; ++ones) {
        Multiset lhs;
        if (n - ones > 0) {
            lhs.add(g.zero, (n - ones) * h);
        }
        if (ones > 0) {
            lhs.add(g.one, ones * h);
        }
        const auto& out = value_for(kind, ones) ? g.one : g.zero;
        g.system.add_rule(g.input_region, leave(lhs, ms(out, m)), mult);
    }
}

}  // namespace

std::string_view to_string(LogicLevel level) noexcept {
    switch (level) {
        case LogicLevel::Zero:
            return "0";
        case LogicLevel::One:
            return "1";
        case LogicLevel::Undefined:
            return "undefined";
        case LogicLevel::Ambiguous:
            return "ambiguous";
    }
    return "?";
}

RedundancyParams RedundancyParams::with_default_low(std::uint64_t h, std::uint64_t m) {
    std::uint64_t l = (h + 1) / 2;
    if (h > 0 && l >= h) {
        l = h - 1;
    }
    return {h, m, l};
}

void RedundancyParams::validate() const {
    if (h == 0) {
        throw ParamError("h must be at least 1");
    }
    if (m <= h) {
        throw ParamError("m must exceed h (m=" + std::to_string(m) + ", h=" + std::to_string(h) + ")");
    }
    if (l >= h) {
        throw ParamError("l must be below h (l=" + std::to_string(l) + ", h=" + std::to_string(h) + ")");
    }
}

LogicLevel read_level(std::uint64_t s, const Thresholds& t) {
    if (s > t.high) {
        return LogicLevel::One;
    }
    if (s < t.low) {
        return LogicLevel::Zero;
    }
    return LogicLevel::Undefined;
}

LogicLevel read_wire(std::uint64_t count0, std::uint64_t count1, const Thresholds& t) {
    const bool zero = read_level(count0, t) == LogicLevel::One;
    const bool one = read_level(count1, t) == LogicLevel::One;
    if (zero && one) {
        return LogicLevel::Ambiguous;
    }
    if (zero) {
        return LogicLevel::Zero;
    }
    if (one) {
        return LogicLevel::One;
    }
    return LogicLevel::Undefined;
}

void GateChemistry::inject(std::span<const bool> inputs, std::uint64_t copies) {
    auto& contents = system.region(input_region).contents;
    for (const bool v : inputs) {
        contents.add(v ? one : zero, copies);
    }
}

std::uint64_t GateChemistry::output_count(const Simulator& sim, const Symbol& species) const {
    return output_region ? sim.count(*output_region, species) : sim.environment_count(species);
}

LogicLevel GateChemistry::read(const Simulator& sim, const Thresholds& t) const {
    return read_wire(output_count(sim, zero), output_count(sim, one), t);
}

GateChemistry cooperative_gate(GateKind kind) {
    auto g = single_membrane();
    add_logic_rules(g, kind, 1, 1, 1);
    return g;
}

GateChemistry redundant_gate(GateKind kind, const RedundancyParams& params, std::uint64_t logic_multiplier,
                             std::uint64_t deletion_multiplier) {
    params.validate();
    if (logic_multiplier == 0) {
        throw ParamError("logic rule multiplier must be at least 1");
    }
    auto g = single_membrane();
    add_logic_rules(g, kind, params.h, params.m, logic_multiplier);
    if (deletion_multiplier > 0) {
        for (const auto& s : {g.zero, g.one}) {
            g.system.add_rule(g.input_region, Rule(ms(s, 2), {Product{ms(s, 1), Target::here()}}),
                              deletion_multiplier);
        }
    }
    return g;
}

GateChemistry catalyst_and() {
    GateChemistry g;
    auto& sys = g.system;
    sys.kind = SystemKind::Tree;
    for (const char* s : {"0", "1", "d", "e", "n", "x", "z", "a"}) {
        sys.alphabet.insert(Symbol(s));
    }
    sys.output_alphabet = {g.zero, g.one};
    const auto r1 = sys.add_region("1");
    const auto r2 = sys.add_region("2", r1);
    sys.skin = r1;
    g.input_region = r2;

    const Symbol a("a"), d("d"), e("e"), n("n"), x("x"), z("z");
    auto pair = [](const Symbol& p, const Symbol& q) { return Multiset{{p, 1}, {q, 1}}; };
    sys.region(r1).contents = pair(d, e);
    sys.region(r2).contents = ms(a, 1);

    // Skin: return the ferry once its cargo has been consumed; send the
    // decision catalyst in; emit the result. The 0-result rule keeps e in the
    // skin so the catalyst count is conserved.
    sys.add_rule(r1, Rule(pair(x, a), {Product{ms(a, 1), Target::in("2")}}));
    sys.add_rule(r1, Rule(pair(e, g.zero), {Product{ms(e, 1), Target::in("2")}, Product{ms(z, 1), Target::here()}}));
    sys.add_rule(r1, Rule(pair(e, z), {Product{ms(e, 1), Target::here()}, Product{ms(g.zero, 1), Target::out()}}));
    sys.add_rule(r1, Rule(pair(d, g.one), {Product{ms(d, 1), Target::in("2")}}));
    sys.add_rule(r1, Rule(pair(d, n), {Product{ms(d, 1), Target::here()}, Product{ms(g.one, 1), Target::out()}}));

    sys.add_rule(r2, leave(pair(g.zero, a), pair(g.zero, a)));
    sys.add_rule(r2, leave(pair(g.one, a), pair(g.one, a)));
    sys.add_rule(r2, leave(pair(e, g.zero), pair(e, x)));
    sys.add_rule(r2, leave(pair(e, g.one), pair(e, x)));
    sys.add_rule(r2, leave(pair(d, g.zero), Multiset{{d, 1}, {z, 1}, {x, 1}}));
    sys.add_rule(r2, leave(pair(d, g.one), Multiset{{d, 1}, {n, 1}, {x, 1}}));
    return g;
}

GateChemistry catalyst_not() {
    GateChemistry g;
    auto& sys = g.system;
    sys.kind = SystemKind::Tree;
    for (const char* s : {"0", "1", "d", "e", "n", "x", "z"}) {
        sys.alphabet.insert(Symbol(s));
    }
    sys.output_alphabet = {g.zero, g.one};
    const auto r1 = sys.add_region("1");
    const auto r2 = sys.add_region("2", r1);
    sys.skin = r1;
    g.input_region = r2;
    g.output_region = r1;

    const Symbol n("n"), x("x");
    sys.region(r1).contents = ms(x, 1);
    sys.region(r2).contents = ms(n, 1);
    sys.add_rule(r1, Rule(Multiset{{n, 1}, {x, 1}}, {Product{ms(n, 1), Target::in("2")}, Product{ms(x, 1), Target::here()}}));
    sys.add_rule(r2, leave(Multiset{{g.zero, 1}, {n, 1}}, Multiset{{g.one, 1}, {n, 1}}));
    sys.add_rule(r2, leave(Multiset{{g.one, 1}, {n, 1}}, Multiset{{g.zero, 1}, {n, 1}}));
    return g;
}

MembraneSystem concentration_holder(const std::string& species, std::uint64_t m, std::uint64_t n,
                                    std::uint64_t cap_multiplier, std::uint64_t initial) {
    if (n == 0 || n > m) {
        throw ParamError("holder needs 0 < n <= m (m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
    }
    if (cap_multiplier == 0) {
        throw ParamError("cap rule multiplier must be at least 1");
    }
    const Symbol a(species);
    const Symbol g("g");
    if (a == g) {
        throw ParamError("species name 'g' is taken by the generator");
    }
    MembraneSystem sys;
    sys.kind = SystemKind::Tree;
    sys.alphabet = {a, g};
    sys.output_alphabet = {a};
    const auto r = sys.add_region("1");
    sys.skin = r;
    sys.region(r).contents = Multiset::of(g);
    if (initial > 0) {
        sys.region(r).contents.add(a, initial);
    }
    sys.add_rule(r, Rule(Multiset::of(g), {Product{Multiset{{g, 1}, {a, 1}}, Target::here()}}));
    sys.add_rule(r, Rule(Multiset::of(a, m), {Product{Multiset::of(a, m - n), Target::here()}}), cap_multiplier);
    return sys;
}

}  // namespace psys
