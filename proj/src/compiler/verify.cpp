#include "psys/compiler.hpp"

#include <algorithm>

namespace psys {

namespace {

struct OutputProbe {
    std::string wire;
    Simulator::ObjectIndex zero;
    Simulator::ObjectIndex one;
    std::optional<Simulator::ObjectIndex> token;
};

std::string format_levels(const std::map<std::string, LogicLevel>& levels) {
    if (levels.size() == 1) {
        return std::string(to_string(levels.begin()->second));
    }
    std::string out;
    for (const auto& [wire, level] : levels) {
        if (!out.empty()) {
            out += ';';
        }
        out += wire + "=" + std::string(to_string(level));
    }
    return out;
}

constexpr std::uint64_t kHaltCheckEvery = 64;

}  // namespace

std::string format_assignment(const Assignment& a, const std::vector<std::string>& order) {
    std::string out;
    auto put = [&](const std::string& wire, bool v) {
        if (!out.empty()) {
            out += ';';
        }
        out += wire + "=" + (v ? "1" : "0");
    };
    for (const auto& w : order) {
        if (auto it = a.find(w); it != a.end()) {
            put(w, it->second);
        }
    }
    for (const auto& [w, v] : a) {
        if (std::find(order.begin(), order.end(), w) == order.end()) {
            put(w, v);
        }
    }
    return out;
}

bool VerificationReport::all_pass() const {
    return std::all_of(runs.begin(), runs.end(), [](const auto& r) { return r.pass && r.token_consistent; });
}

bool VerificationReport::any_timeout() const {
    return std::any_of(runs.begin(), runs.end(), [](const auto& r) { return r.timed_out; });
}

bool VerificationReport::any_mismatch() const {
    return std::any_of(runs.begin(), runs.end(),
                       [](const auto& r) { return !r.timed_out && (!r.pass || !r.token_consistent); });
}

VerificationReport verify_against_oracle(const CompiledCircuit& circuit, const VerifyOptions& options) {
    VerificationReport report;
    const auto assignments = all_assignments(circuit.netlist);
    for (std::size_t ai = 0; ai < assignments.size(); ++ai) {
        const auto& assignment = assignments[ai];
        std::map<std::string, LogicLevel> expected_levels;
        for (const auto& [wire, v] : evaluate(circuit.netlist, assignment)) {
            expected_levels[wire] = v ? LogicLevel::One : LogicLevel::Zero;
        }
        AssignmentSummary summary{format_assignment(assignment, circuit.netlist.inputs)};

        auto system = circuit.system;
        inject(circuit, system, assignment);
        for (std::uint64_t k = 0; k < options.seeds; ++k) {
            Simulator sim(system, Rng(mix_seed(options.base_seed, ai * options.seeds + k)));
            std::vector<OutputProbe> probes;
            for (const auto& [wire, p] : circuit.output_symbols) {
                OutputProbe probe{wire, sim.intern(p.zero), sim.intern(p.one), std::nullopt};
                if (const auto t = circuit.output_token(wire)) {
                    probe.token = sim.intern(*t);
                }
                probes.push_back(probe);
            }
            auto levels = [&] {
                std::map<std::string, LogicLevel> out;
                for (const auto& p : probes) {
                    out[p.wire] = read_wire(sim.environment_count(p.zero), sim.environment_count(p.one),
                                            circuit.thresholds);
                }
                return out;
            };
            auto readable = [&] {
                return std::all_of(probes.begin(), probes.end(), [&](const auto& p) {
                    return read_wire(sim.environment_count(p.zero), sim.environment_count(p.one),
                                     circuit.thresholds) != LogicLevel::Undefined;
                });
            };

            VerificationRun run{summary.assignment, format_levels(expected_levels), {}, false, false, std::nullopt,
                                true};
            while (sim.attempts() < options.budget) {
                sim.step();
                if (options.perturb) {
                    options.perturb(sim);
                }
                for (const auto& p : probes) {
                    if (p.token) {
                        const bool out = sim.environment_count(p.zero) + sim.environment_count(p.one) > 0;
                        const bool tok = sim.environment_count(*p.token) > 0;
                        run.token_consistent = run.token_consistent && out == tok;
                    }
                }
                if (!run.attempts && readable()) {
                    run.attempts = sim.attempts();
                }
                if (sim.attempts() % kHaltCheckEvery == 0 && sim.is_halted()) {
                    break;
                }
            }
            const auto observed = levels();
            if (run.attempts) {
                run.observed = format_levels(observed);
                run.pass = observed == expected_levels;
            } else if (sim.is_halted()) {
                run.observed = format_levels(observed);
            } else {
                run.observed = "timeout";
                run.timed_out = true;
            }
            ++summary.runs;
            summary.passed += run.pass && run.token_consistent ? 1 : 0;
            summary.timeouts += run.timed_out ? 1 : 0;
            summary.worst_attempts = std::max(summary.worst_attempts, run.attempts.value_or(0));
            report.runs.push_back(std::move(run));
        }
        report.summary.push_back(std::move(summary));
    }
    return report;
}

void write_report(std::ostream& out, const VerificationReport& report, const std::vector<std::string>& preamble) {
    for (const auto& line : preamble) {
        out << "# " << line << '\n';
    }
    out << "assignment,expected,observed,pass,attempts\n";
    for (const auto& r : report.runs) {
        out << r.assignment << ',' << r.expected << ',' << r.observed << ',' << (r.pass && r.token_consistent ? 1 : 0)
            << ',';
        if (r.attempts) {
            out << *r.attempts;
        }
        out << '\n';
    }
}

}  // namespace psys
