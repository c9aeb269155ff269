#include "psys/engine.hpp"

#include <algorithm>

namespace psys {

TraceRecorder::TraceRecorder(Simulator& sim) : sim_(sim) {
    sim_.on_emission([this](std::uint64_t attempt, Simulator::ObjectIndex object, std::uint64_t n) {
        const auto text = to_string(sim_.object(object));
        for (std::uint64_t i = 0; i < n; ++i) {
            trace_.emitted.push_back(Emission{attempt, text});
        }
    });
}

void TraceRecorder::sample() {
    const auto now = sim_.attempts();
    if (now == last_sample_) {
        return;
    }
    last_sample_ = now;
    seen_.resize(sim_.region_count());
    for (std::uint32_t r = 0; r < sim_.region_count(); ++r) {
        auto& seen = seen_[r];
        seen.resize(sim_.object_count(), false);
        const RegionId id{r};
        for (Simulator::ObjectIndex o = 0; o < sim_.object_count(); ++o) {
            const auto c = sim_.count(id, o);
            if (c > 0) {
                seen[o] = true;
            }
            if (seen[o]) {
                trace_.rows.push_back(TraceRow{now, sim_.label(id), to_string(sim_.object(o)), c});
            }
        }
    }
    trace_.attempts = now;
}

Trace drive(Simulator& sim, const SimConfig& config, std::span<const Disturbance> disturbances,
            const std::function<void(Simulator&)>& step, bool check_halting) {
    config.validate();
    std::vector<Disturbance> pending(disturbances.begin(), disturbances.end());
    std::stable_sort(pending.begin(), pending.end(),
                     [](const Disturbance& a, const Disturbance& b) { return a.at_attempt < b.at_attempt; });

    TraceRecorder recorder(sim);
    std::size_t next = 0;
    auto apply_due = [&] {
        while (next < pending.size() && pending[next].at_attempt <= sim.attempts()) {
            sim.apply(pending[next++]);
        }
    };
    auto halted = [&] { return check_halting && next == pending.size() && sim.is_halted(); };

    std::optional<std::uint64_t> halted_at;
    apply_due();
    recorder.sample();
    while (sim.attempts() < config.max_attempts) {
        if (sim.attempts() % config.halting_check_every == 0 && halted()) {
            halted_at = sim.attempts();
            break;
        }
        step(sim);
        apply_due();
        if (sim.attempts() % config.trace_every == 0) {
            recorder.sample();
        }
    }
    if (!halted_at && halted()) {
        halted_at = sim.attempts();
    }
    recorder.sample();

    Trace trace = recorder.take();
    trace.halted_at = halted_at;
    trace.attempts = sim.attempts();
    return trace;
}

Trace run(const MembraneSystem& system, const SimConfig& config, std::span<const Disturbance> disturbances) {
    config.validate();
    Simulator sim(system, Rng(config.seed), config.scheduler);
    return drive(sim, config, disturbances, [](Simulator& s) { s.step(); });
}

}  // namespace psys
