#include "psys/cli.hpp"

#include "psys/compiler.hpp"
#include "psys/dsl.hpp"
#include "psys/errors.hpp"
#include "psys/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

namespace psys {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// A file when a path was given, `fallback` otherwise.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) {
                throw Error("cannot write '" + path + "'");
            }
            stream_ = file_.get();
        }
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        out.push_back(item);
    }
    return out;
}

std::uint64_t to_u64(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used == s.size() && !s.empty() && s.front() != '-') {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw ParamError("bad " + what + " '" + s + "'");
}

// "1,2,5-8"
std::vector<std::uint64_t> parse_u64_list(const std::string& text, const std::string& what) {
    std::vector<std::uint64_t> out;
    for (const auto& item : split(text, ',')) {
        if (const auto dash = item.find('-'); dash != std::string::npos) {
            const auto lo = to_u64(item.substr(0, dash), what);
            const auto hi = to_u64(item.substr(dash + 1), what);
            if (hi < lo) {
                throw ParamError("bad " + what + " range '" + item + "'");
            }
            for (auto v = lo; v <= hi; ++v) {
                out.push_back(v);
            }
        } else {
            out.push_back(to_u64(item, what));
        }
    }
    return out;
}

RedundancyParams parse_redundancy(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() < 2 || parts.size() > 3) {
        throw ParamError("--redundancy takes h,m or h,m,l, got '" + text + "'");
    }
    auto p = RedundancyParams::with_default_low(to_u64(parts[0], "h"), to_u64(parts[1], "m"));
    if (parts.size() == 3) {
        p.l = to_u64(parts[2], "l");
    }
    p.validate();
    return p;
}

// AT:REGION:+MULTISET or AT:REGION:-MULTISET
Disturbance parse_disturbance(const std::string& text, const MembraneSystem& sys) {
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? first : text.find(':', first + 1);
    if (second == std::string::npos || second + 1 >= text.size()) {
        throw ParamError("--disturb takes AT:REGION:+MULTISET or AT:REGION:-MULTISET, got '" + text + "'");
    }
    Disturbance d;
    d.at_attempt = to_u64(text.substr(0, first), "disturbance attempt");
    const auto label = text.substr(first + 1, second - first - 1);
    const auto region = sys.find(label);
    if (!region) {
        throw ParamError("--disturb names unknown region '" + label + "'");
    }
    d.region = *region;
    const char sign = text[second + 1];
    const auto objects = dsl::parse_multiset(text.substr(second + 2));
    if (sign == '+') {
        d.add = objects;
    } else if (sign == '-') {
        d.remove = objects;
    } else {
        throw ParamError("--disturb multiset must start with + or -, got '" + text + "'");
    }
    return d;
}

std::vector<bool> parse_bits(const std::string& text) {
    std::vector<bool> out;
    for (const char c : text) {
        if (c != '0' && c != '1') {
            throw ParamError("input bits must be 0 or 1, got '" + text + "'");
        }
        out.push_back(c == '1');
    }
    return out;
}

Backend parse_backend(const std::string& text) {
    if (text == "tree") {
        return Backend::Tree;
    }
    if (text == "network") {
        return Backend::Network;
    }
    throw ParamError("unknown backend '" + text + "' (expected tree or network)");
}

GateKind gate_kind(const std::string& text) {
    if (const auto k = parse_gate_kind(text)) {
        return *k;
    }
    throw ParamError("unknown gate '" + text + "' (expected NOT, AND, NAND or OR)");
}

struct Common {
    std::uint64_t seed = 0;
    std::string output;
};

class Cli {
public:
    Cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
        : args_(args), out_(out), err_(err) {
        for (const auto& a : args) {
            command_ += (command_.empty() ? "" : " ") + a;
        }
    }

    int main() {
        CLI::App app{"Stochastic membrane-system simulator and Boolean circuit compiler", "psys"};
        app.require_subcommand(1);
        std::function<int()> action;
        add_validate(app, action);
        add_run(app, action);
        add_compile(app, action);
        add_truth_table(app, action);
        add_fault_sweep(app, action);
        add_fabric_run(app, action);

        std::vector<const char*> argv;
        for (const auto& a : args_) {
            argv.push_back(a.c_str());
        }
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError& e) {
            app.exit(e, out_, err_);
            return e.get_exit_code() == 0 ? kExitOk : kExitInvalid;
        }
        try {
            return action();
        } catch (const ParseError& e) {
            err_ << "error: " << e.what() << '\n';
        } catch (const Error& e) {
            err_ << "error: " << e.what() << '\n';
        }
        return kExitInvalid;
    }

private:
    std::vector<std::string> preamble(std::uint64_t seed) const {
        return {"seed=" + std::to_string(seed) + " command=" + command_};
    }

    void add_common(CLI::App* sub, Common& c, bool with_output = true) {
        sub->add_option("--seed", c.seed, "Base seed (echoed into output headers)")->capture_default_str();
        if (with_output) {
            sub->add_option("-o,--output", c.output, "Output file (default: standard output)");
        }
    }

    void add_validate(CLI::App& app, std::function<int()>& action) {
        auto* sub = app.add_subcommand("validate", "Parse and check a .psys system or a .net netlist");
        auto file = std::make_shared<std::string>();
        sub->add_option("FILE", *file, "System or netlist file")->required();
        sub->callback([this, file, &action] {
            action = [this, file] {
                const auto text = read_file(*file);
                if (ends_with(*file, ".net")) {
                    dsl::parse_netlist(text).validate();
                    out_ << "ok\n";
                    return kExitOk;
                }
                const auto sys = dsl::load_system(text);
                const auto violations = validate_system(sys);
                for (const auto& v : violations) {
                    err_ << *file << ": " << to_string(v) << '\n';
                }
                if (!violations.empty()) {
                    return kExitInvalid;
                }
                out_ << "ok\n";
                return kExitOk;
            };
        });
    }

    void add_run(CLI::App& app, std::function<int()>& action) {
        struct Opts {
            Common common;
            std::string file;
            std::uint64_t max_attempts = 1000;
            std::uint64_t trace_every = 1;
            std::vector<std::string> disturb;
            std::string emitted;
            std::string scheduler = "uniform";
            unsigned parallel = 0;
        };
        auto o = std::make_shared<Opts>();
        auto* sub = app.add_subcommand("run", "Simulate a .psys system and write its trace");
        sub->add_option("FILE", o->file, "System file")->required();
        add_common(sub, o->common, false);
        sub->add_option("--max-attempts", o->max_attempts, "Attempt budget")->capture_default_str();
        sub->add_option("--disturb", o->disturb, "AT:REGION:+MULTISET or AT:REGION:-MULTISET (repeatable)");
        sub->add_option("--trace", o->common.output, "Trace CSV (default: standard output)");
        sub->add_option("--emitted", o->emitted, "CSV of objects emitted to the environment");
        sub->add_option("--trace-every", o->trace_every, "Sample every K attempts")->capture_default_str();
        sub->add_option("--scheduler", o->scheduler, "uniform or round-robin")
            ->check(CLI::IsMember({"uniform", "round-robin"}))
            ->capture_default_str();
        sub->add_option("--parallel", o->parallel, "Worker threads; results are not reproducible");
        sub->callback([this, o, &action] {
            action = [this, o] {
                const auto sys = dsl::load_system(read_file(o->file));
                const auto violations = validate_system(sys);
                for (const auto& v : violations) {
                    err_ << o->file << ": " << to_string(v) << '\n';
                }
                if (!violations.empty()) {
                    return kExitInvalid;
                }
                SimConfig config;
                config.seed = o->common.seed;
                config.max_attempts = o->max_attempts;
                config.trace_every = o->trace_every;
                config.scheduler = o->scheduler == "uniform" ? Scheduler::UniformRegion : Scheduler::RoundRobin;
                std::vector<Disturbance> disturbances;
                for (const auto& d : o->disturb) {
                    disturbances.push_back(parse_disturbance(d, sys));
                }
                Trace trace;
                if (o->parallel > 0) {
                    err_ << "warning: --parallel runs are not reproducible; the seed only fixes the start state\n";
                    if (!disturbances.empty()) {
                        throw ParamError("--disturb cannot be combined with --parallel");
                    }
                    Simulator sim(sys, Rng(config.seed), config.scheduler);
                    TraceRecorder recorder(sim);
                    recorder.sample();
                    sim.run_parallel(config.max_attempts, o->parallel);
                    recorder.sample();
                    trace = recorder.take();
                    if (sim.is_halted()) {
                        trace.halted_at = trace.attempts;
                    }
                } else {
                    trace = run(sys, config, disturbances);
                }
                const auto header = preamble(config.seed);
                Sink sink(o->common.output, out_);
                write_trace_rows(*sink, trace, header);
                if (!o->emitted.empty()) {
                    Sink emitted(o->emitted, out_);
                    write_trace_emitted(*emitted, trace, header);
                }
                err_ << "attempts=" << trace.attempts << " halted="
                     << (trace.halted_at ? std::to_string(*trace.halted_at) : std::string("no")) << '\n';
                return kExitOk;
            };
        });
    }

    struct CompileFlags {
        std::string backend = "tree";
        std::string redundancy;
        bool token = false;
        std::uint64_t copies = 0;
        std::uint64_t logic_multiplier = 1;
        std::uint64_t deletion_multiplier = 0;
    };

    void add_compile_flags(CLI::App* sub, CompileFlags& f) {
        sub->add_option("--backend", f.backend, "tree or network")
            ->check(CLI::IsMember({"tree", "network"}))
            ->capture_default_str();
        sub->add_option("--redundancy", f.redundancy, "h,m or h,m,l: multiplicity-h gates emitting m copies");
        sub->add_flag("--token", f.token, "Attach a ready token to every signal");
        sub->add_option("--copies", f.copies, "Molecules injected per input (default: m, or 1)");
        sub->add_option("--logic-mult", f.logic_multiplier, "Copies of each logic rule in the pool")
            ->capture_default_str();
        sub->add_option("--deletion-mult", f.deletion_multiplier, "Copies of each cleanup rule (0: none)")
            ->capture_default_str();
    }

    static CompileOptions compile_options(const CompileFlags& f) {
        CompileOptions o;
        o.backend = parse_backend(f.backend);
        if (!f.redundancy.empty()) {
            o.redundancy = parse_redundancy(f.redundancy);
        }
        if (f.copies > 0) {
            o.input_copies = f.copies;
        }
        o.ready_token = f.token;
        o.logic_multiplier = f.logic_multiplier;
        o.deletion_multiplier = f.deletion_multiplier;
        return o;
    }

    void add_compile(CLI::App& app, std::function<int()>& action) {
        struct Opts {
            Common common;
            std::string file;
            CompileFlags flags;
        };
        auto o = std::make_shared<Opts>();
        auto* sub = app.add_subcommand("compile", "Compile a .net netlist into a .psys membrane system");
        sub->add_option("NETFILE", o->file, "Netlist file")->required();
        add_common(sub, o->common);
        add_compile_flags(sub, o->flags);
        sub->callback([this, o, &action] {
            action = [this, o] {
                const auto c = compile(dsl::parse_netlist(read_file(o->file)), compile_options(o->flags));
                Sink sink(o->common.output, out_);
                for (const auto& line : preamble(o->common.seed)) {
                    *sink << "# " << line << '\n';
                }
                const auto& region = c.system.region(c.injection_region).label;
                for (const auto& [wire, uses] : c.input_symbols) {
                    *sink << "# input " << wire << ":";
                    for (const auto& p : uses) {
                        *sink << ' ' << p.zero.name() << '/' << p.one.name();
                    }
                    *sink << " x" << c.input_copies << " into " << region << '\n';
                }
                for (const auto& [wire, p] : c.output_symbols) {
                    *sink << "# output " << wire << ": " << p.zero.name() << '/' << p.one.name()
                          << " in the environment\n";
                }
                *sink << dsl::print_system(c.system);
                return kExitOk;
            };
        });
    }

    void add_truth_table(CLI::App& app, std::function<int()>& action) {
        struct Opts {
            Common common;
            std::string file;
            CompileFlags flags;
            std::uint64_t seeds = 100;
            std::uint64_t budget = 100000;
        };
        auto o = std::make_shared<Opts>();
        auto* sub = app.add_subcommand("truth-table", "Compile a netlist and check every input row against Boolean evaluation");
        sub->add_option("NETFILE", o->file, "Netlist file")->required();
        add_common(sub, o->common);
        add_compile_flags(sub, o->flags);
        sub->add_option("--seeds", o->seeds, "Runs per input row")->capture_default_str();
        sub->add_option("--budget", o->budget, "Attempt budget per run")->capture_default_str();
        sub->callback([this, o, &action] {
            action = [this, o] {
                const auto c = compile(dsl::parse_netlist(read_file(o->file)), compile_options(o->flags));
                VerifyOptions v;
                v.seeds = o->seeds;
                v.budget = o->budget;
                v.base_seed = o->common.seed;
                const auto report = verify_against_oracle(c, v);
                Sink sink(o->common.output, out_);
                write_report(*sink, report, preamble(o->common.seed));
                for (const auto& s : report.summary) {
                    err_ << s.assignment << ": " << s.passed << '/' << s.runs << " pass, " << s.timeouts
                         << " timeouts, worst " << s.worst_attempts << " attempts\n";
                }
                if (report.any_mismatch()) {
                    return kExitVerifyFailed;
                }
                if (report.any_timeout()) {
                    return kExitTimeout;
                }
                return kExitOk;
            };
        });
    }

    void add_fault_sweep(CLI::App& app, std::function<int()>& action) {
        struct Opts {
            Common common;
            std::string gate = "AND";
            std::string hs = "1-8";
            std::vector<double> loss_rates{0.0, 0.05, 0.1, 0.2};
            std::uint64_t seeds = 100;
            std::uint64_t budget = 100000;
            std::uint64_t logic_multiplier = 1;
            std::uint64_t deletion_multiplier = 0;
            std::vector<std::string> bursts;
        };
        auto o = std::make_shared<Opts>();
        auto* sub = app.add_subcommand("fault-sweep", "Correctness of redundant gates under molecule loss");
        sub->set_help_flag("--help", "Print this help message and exit");
        add_common(sub, o->common);
        sub->add_option("--gate", o->gate, "NOT, AND, NAND or OR")->capture_default_str();
        sub->add_option("--h", o->hs, "Multiplicities, e.g. 1-8 or 1,2,4")->capture_default_str();
        sub->add_option("--loss-rates", o->loss_rates, "Per-attempt loss probabilities")
            ->delimiter(',')
            ->capture_default_str();
        sub->add_option("--seeds", o->seeds, "Runs per (h, loss rate) cell")->capture_default_str();
        sub->add_option("--budget", o->budget, "Attempt budget per run")->capture_default_str();
        sub->add_option("--logic-mult", o->logic_multiplier, "Copies of each logic rule in the pool")
            ->capture_default_str();
        sub->add_option("--deletion-mult", o->deletion_multiplier, "Copies of each cleanup rule (0: none)")
            ->capture_default_str();
        sub->add_option("--burst", o->bursts, "AT:-MULTISET removed from the gate at attempt AT (repeatable)");
        sub->callback([this, o, &action] {
            action = [this, o] {
                SweepConfig c;
                c.kind = gate_kind(o->gate);
                c.hs = parse_u64_list(o->hs, "h");
                c.loss_rates = o->loss_rates;
                c.seeds = o->seeds;
                c.budget = o->budget;
                c.base_seed = o->common.seed;
                c.logic_multiplier = o->logic_multiplier;
                c.deletion_multiplier = o->deletion_multiplier;
                for (const auto& b : o->bursts) {
                    const auto colon = b.find(':');
                    if (colon == std::string::npos || colon + 1 >= b.size() || b[colon + 1] != '-') {
                        throw ParamError("--burst takes AT:-MULTISET, got '" + b + "'");
                    }
                    c.bursts.push_back(Disturbance{to_u64(b.substr(0, colon), "burst attempt"), RegionId{0}, {},
                                                   dsl::parse_multiset(b.substr(colon + 2))});
                }
                const auto rows = sweep_redundancy(c);
                Sink sink(o->common.output, out_);
                write_sweep(*sink, rows, preamble(o->common.seed));
                for (const auto h : c.hs) {
                    err_ << "h=" << h;
                    for (const auto l : c.loss_rates) {
                        err_ << "  loss " << l << ": " << correctness(rows, h, l);
                    }
                    err_ << '\n';
                }
                return kExitOk;
            };
        });
    }

    void add_fabric_run(CLI::App& app, std::function<int()>& action) {
        struct Opts {
            Common common;
            std::string topology = "random";
            std::size_t nodes = 16;
            std::size_t rows = 4;
            std::size_t cols = 4;
            double edge_probability = 0.25;
            double p_move = 0.5;
            std::string gate = "AND";
            std::vector<std::string> inputs;
            std::uint64_t seeds = 100;
            std::uint64_t budget = 1000000;
            std::string redundancy;
            std::uint64_t copies = 0;
            std::vector<std::string> fail;
            double node_failure = 0.0;
        };
        auto o = std::make_shared<Opts>();
        auto* sub = app.add_subcommand("fabric-run", "Run a gate on a fabric of migrating particle reactors");
        add_common(sub, o->common);
        sub->add_option("--topology", o->topology, "cycle, grid or random")
            ->check(CLI::IsMember({"cycle", "grid", "random"}))
            ->capture_default_str();
        sub->add_option("--nodes", o->nodes, "Nodes (cycle, random)")->capture_default_str();
        sub->add_option("--rows", o->rows, "Grid rows")->capture_default_str();
        sub->add_option("--cols", o->cols, "Grid columns")->capture_default_str();
        sub->add_option("--edge-prob", o->edge_probability, "Edge probability (random)")->capture_default_str();
        sub->add_option("--p-move", o->p_move, "Probability that a migration event moves an object")
            ->capture_default_str();
        sub->add_option("--gate", o->gate, "NOT, AND, NAND or OR")->capture_default_str();
        sub->add_option("--inputs", o->inputs, "Input bits such as 10 (repeatable; default: every row)");
        sub->add_option("--seeds", o->seeds, "Runs per input row")->capture_default_str();
        sub->add_option("--budget", o->budget, "Attempt budget per run")->capture_default_str();
        sub->add_option("--redundancy", o->redundancy, "h,m or h,m,l (default: single-copy cooperative gate)");
        sub->add_option("--copies", o->copies, "Molecules per input value (default: m, or 1)");
        sub->add_option("--fail", o->fail, "AT:NODE node failure (repeatable)");
        sub->add_option("--node-failure", o->node_failure, "Probability that each node fails after injection")
            ->capture_default_str();
        sub->callback([this, o, &action] {
            action = [this, o] {
                Rng graph_rng(mix_seed(o->common.seed, 0));
                Fabric fabric;
                switch (parse_topology(o->topology)) {
                    case Topology::Cycle:
                        fabric = Fabric::cycle(o->nodes, o->p_move);
                        break;
                    case Topology::Grid:
                        fabric = Fabric::grid(o->rows, o->cols, o->p_move);
                        break;
                    case Topology::Random:
                        fabric = Fabric::random(o->nodes, o->edge_probability, o->p_move, graph_rng);
                        break;
                }
                FabricRunConfig c;
                c.kind = gate_kind(o->gate);
                if (!o->redundancy.empty()) {
                    c.redundancy = parse_redundancy(o->redundancy);
                }
                c.copies = o->copies > 0 ? o->copies : (c.redundancy ? c.redundancy->m : 1);
                c.budget = o->budget;
                c.node_failure = o->node_failure;
                for (const auto& f : o->fail) {
                    const auto parts = split(f, ':');
                    if (parts.size() != 2) {
                        throw ParamError("--fail takes AT:NODE, got '" + f + "'");
                    }
                    c.failures.push_back({to_u64(parts[0], "failure attempt"),
                                          static_cast<std::size_t>(to_u64(parts[1], "node"))});
                }
                std::vector<std::vector<bool>> rows;
                for (const auto& bits : o->inputs) {
                    rows.push_back(parse_bits(bits));
                }
                if (rows.empty()) {
                    const auto n = arity(c.kind);
                    for (unsigned v = 0; v < (1U << n); ++v) {
                        std::vector<bool> r;
                        for (std::size_t i = 0; i < n; ++i) {
                            r.push_back(((v >> (n - 1 - i)) & 1U) != 0);
                        }
                        rows.push_back(r);
                    }
                }
                std::vector<FabricReport> reports;
                bool partitioned = false;
                std::uint64_t stream = 1;
                for (const auto& r : rows) {
                    const bool raw[2] = {!r.empty() && r[0], r.size() > 1 && r[1]};
                    for (std::uint64_t s = 0; s < o->seeds; ++s) {
                        c.seed = mix_seed(o->common.seed, stream++);
                        reports.push_back(fabric_run(fabric, std::span<const bool>(raw, r.size()), c));
                        partitioned = partitioned || reports.back().partitioned;
                    }
                }
                if (partitioned) {
                    err_ << "warning: node failures disconnected the live fabric in some runs\n";
                }
                Sink sink(o->common.output, out_);
                write_fabric_reports(*sink, reports, preamble(o->common.seed));
                std::size_t correct = 0;
                std::size_t timeouts = 0;
                for (const auto& r : reports) {
                    correct += r.correct ? 1 : 0;
                    timeouts += r.timed_out ? 1 : 0;
                }
                err_ << correct << '/' << reports.size() << " correct, " << timeouts << " timeouts\n";
                return kExitOk;
            };
        });
    }

    const std::vector<std::string>& args_;
    std::ostream& out_;
    std::ostream& err_;
    std::string command_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    return Cli(args, out, err).main();
}

}  // namespace psys
