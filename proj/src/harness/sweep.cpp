#include "psys/errors.hpp"
#include "psys/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace psys {

namespace {

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParamError(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
    }
}

}  // namespace

void FaultModel::validate() const {
    check_probability(loss_rate, "loss rate");
    check_probability(node_failure, "node failure probability");
}

void apply_losses(Simulator& sim, const FaultModel& faults, Rng& rng) {
    if (faults.loss_rate <= 0.0) {
        return;
    }
    for (std::uint32_t r = 0; r < sim.region_count(); ++r) {
        if (!rng.bernoulli(faults.loss_rate)) {
            continue;
        }
        const RegionId region{r};
        const auto total = sim.region_size(region);
        if (total == 0) {
            continue;
        }
        // Pick by multiplicity with the fault stream, not the simulator's.
        auto idx = rng.below(total);
        for (Simulator::ObjectIndex o = 0; o < sim.object_count(); ++o) {
            const auto n = sim.count(region, o);
            if (idx < n) {
                if (sim.object(o).is_symbol()) {
                    sim.remove(region, o);
                }
                break;
            }
            idx -= n;
        }
    }
}

std::uint64_t SweepConfig::default_m(std::uint64_t h) { return std::max(h + 1, 2 * h - 1); }

std::uint64_t SweepConfig::default_copies(std::uint64_t h) { return 2 * h - 1; }

std::vector<SweepRow> sweep_redundancy(const SweepConfig& config) {
    for (const auto h : config.hs) {
        if (h == 0) {
            throw ParamError("h must be at least 1");
        }
    }
    const auto n = arity(config.kind);
    const std::uint64_t combos = 1ULL << n;
    std::vector<SweepRow> rows;
    for (std::size_t hi = 0; hi < config.hs.size(); ++hi) {
        const auto h = config.hs[hi];
        const auto params = RedundancyParams::with_default_low(h, SweepConfig::default_m(h));
        const auto t = params.thresholds();
        for (std::size_t li = 0; li < config.loss_rates.size(); ++li) {
            const FaultModel faults{config.loss_rates[li], config.bursts, 0.0};
            faults.validate();
            for (std::uint64_t seed = 0; seed < config.seeds; ++seed) {
                auto gate = redundant_gate(config.kind, params, config.logic_multiplier, config.deletion_multiplier);
                bool in[2] = {false, false};
                std::string label;
                for (std::size_t i = 0; i < n; ++i) {
                    in[i] = (((seed % combos) >> (n - 1 - i)) & 1U) != 0;
                    label += in[i] ? '1' : '0';
                }
                const std::span<const bool> inputs(in, n);
                gate.inject(inputs, SweepConfig::default_copies(h));
                const auto expected = evaluate(config.kind, inputs) ? LogicLevel::One : LogicLevel::Zero;

                const auto stream = (hi * config.loss_rates.size() + li) * config.seeds + seed;
                Simulator sim(gate.system, Rng(mix_seed(config.base_seed, 2 * stream)));
                Rng fault_rng(mix_seed(config.base_seed, 2 * stream + 1));
                SweepRow row{h, config.loss_rates[li], seed, label, false, std::nullopt};
                auto apply_bursts = [&] {
                    for (auto d : faults.bursts) {
                        if (d.at_attempt == sim.attempts()) {
                            d.region = gate.input_region;
                            sim.apply(d);
                        }
                    }
                };
                apply_bursts();
                while (sim.attempts() < config.budget) {
                    sim.step();
                    apply_losses(sim, faults, fault_rng);
                    apply_bursts();
                    if (!row.attempts_to_output && gate.read(sim, t) != LogicLevel::Undefined) {
                        row.attempts_to_output = sim.attempts();
                    }
                    if (sim.attempts() % 64 == 0 && sim.is_halted()) {
                        break;
                    }
                }
                row.correct = gate.read(sim, t) == expected;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

double correctness(const std::vector<SweepRow>& rows, std::uint64_t h, double loss_rate) {
    std::uint64_t total = 0;
    std::uint64_t good = 0;
    for (const auto& r : rows) {
        if (r.h == h && r.loss_rate == loss_rate) {
            ++total;
            good += r.correct ? 1 : 0;
        }
    }
    return total == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(good) / total;
}

void write_sweep(std::ostream& out, const std::vector<SweepRow>& rows, const std::vector<std::string>& preamble) {
    for (const auto& line : preamble) {
        out << "# " << line << '\n';
    }
    out << "h,loss_rate,seed,correct,attempts_to_output\n";
    for (const auto& r : rows) {
        out << r.h << ',' << r.loss_rate << ',' << r.seed << ',' << (r.correct ? 1 : 0) << ',';
        if (r.attempts_to_output) {
            out << *r.attempts_to_output;
        }
        out << '\n';
    }
}

}  // namespace psys
