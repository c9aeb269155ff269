#include "psys/engine.hpp"

#include "psys/errors.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <thread>

namespace psys {

void SimConfig::validate() const {
    if (max_attempts == 0) {
        throw ParamError("max-attempts must be at least 1");
    }
    if (trace_every == 0) {
        throw ParamError("trace-every must be at least 1");
    }
    if (halting_check_every == 0) {
        throw ParamError("halting-check-every must be at least 1");
    }
}

namespace {

void collect_objects(const Multiset& m, std::set<ObjectValue>& out);

void collect_objects(const Rule& rule, std::set<ObjectValue>& out) {
    collect_objects(rule.lhs(), out);
    for (const auto& p : rule.rhs()) {
        collect_objects(p.objects, out);
    }
}

void collect_objects(const Multiset& m, std::set<ObjectValue>& out) {
    for (const auto& [object, count] : m.entries()) {
        out.insert(object);
        if (object.is_rule()) {
            collect_objects(object.rule(), out);
        }
    }
}

}  // namespace

Simulator::Simulator(const MembraneSystem& system, Rng rng, Scheduler scheduler)
    : base_(system), rng_(rng), scheduler_(scheduler) {
    regions_.resize(system.regions.size());
    for (const auto& r : system.regions) {
        auto& st = regions_[r.id.value];
        st.label = r.label;
        if (r.parent) {
            st.parent = r.parent->value;
        }
        for (const auto& l : r.out_links) {
            st.links.push_back(l.head.value);
        }
    }

    // Intern in canonical order so indices follow the object ordering.
    std::set<ObjectValue> universe;
    for (const auto& s : system.alphabet) {
        universe.insert(ObjectValue(s));
    }
    for (const auto& r : system.regions) {
        collect_objects(r.contents, universe);
        for (const auto& [object, count] : r.rules.entries()) {
            if (object.is_rule()) {
                collect_objects(object.rule(), universe);
            }
        }
    }
    collect_objects(system.environment, universe);
    for (const auto& o : universe) {
        intern(o);
    }

    for (const auto& r : system.regions) {
        auto& st = regions_[r.id.value];
        for (const auto& [object, count] : r.rules.entries()) {
            if (!object.is_rule()) {
                continue;  // validate_system reports these
            }
            const auto rule = intern_rule(object.rule());
            st.pool.emplace_back(rule, count);
            st.pool_total += count;
        }
        for (const auto& [object, count] : r.contents.entries()) {
            st.counts[*find_object(object)] += count;
            st.size += count;
        }
    }
    for (const auto& [object, count] : system.environment.entries()) {
        environment_[*find_object(object)] += count;
    }
}

std::optional<Simulator::ObjectIndex> Simulator::find_object(const ObjectValue& object) const {
    auto it = object_index_.find(object);
    if (it == object_index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Simulator::ObjectIndex Simulator::intern(const ObjectValue& object) {
    if (auto it = object_index_.find(object); it != object_index_.end()) {
        return it->second;
    }
    const auto index = static_cast<ObjectIndex>(objects_.size());
    objects_.push_back(object);
    object_index_.emplace(object, index);
    object_rule_.emplace_back();
    for (auto& st : regions_) {
        st.counts.push_back(0);
    }
    environment_.push_back(0);
    if (object.is_rule()) {
        const auto rule = intern_rule(object.rule());
        object_rule_[index] = rule;
        rule_objects_.emplace_back(index, rule);
    }
    return index;
}

Simulator::Counts Simulator::compile(const Multiset& m) {
    Counts out;
    out.reserve(m.distinct());
    for (const auto& [object, count] : m.entries()) {
        out.emplace_back(intern(object), count);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint32_t Simulator::intern_rule(const Rule& rule) {
    if (auto it = rule_index_.find(rule); it != rule_index_.end()) {
        return it->second;
    }
    const auto index = static_cast<std::uint32_t>(rules_.size());
    auto [it, inserted] = rule_index_.emplace(rule, index);
    rules_.emplace_back();
    rules_[index].rule = &it->first;

    // compile() may intern nested rules and grow rules_, so fill by index.
    auto lhs = compile(rule.lhs());
    std::vector<Counts> clauses;
    for (const auto& p : rule.rhs()) {
        clauses.push_back(compile(p.objects));
    }
    rules_[index].lhs = std::move(lhs);
    rules_[index].lhs_size = rule.lhs().size();
    rules_[index].clauses = std::move(clauses);

    for (std::uint32_t r = 0; r < regions_.size(); ++r) {
        resolve(r, index);
    }
    return index;
}

void Simulator::resolve(std::uint32_t region, std::uint32_t rule) {
    auto& st = regions_[region];
    if (st.destinations.size() <= rule) {
        st.destinations.resize(rule + 1);
        st.unresolved.resize(rule + 1);
    }
    const Region& src = base_.regions[region];
    std::vector<Destination> dests;
    std::string problem;
    for (const auto& p : rules_[rule].rule->rhs()) {
        Destination d;
        const auto& t = p.target;
        switch (t.kind) {
            case Target::Kind::Here:
                d.kind = Destination::Kind::Local;
                break;
            case Target::Kind::Out:
                if (src.parent) {
                    d = {Destination::Kind::Region, src.parent->value};
                } else {
                    d.kind = Destination::Kind::Environment;
                }
                break;
            case Target::Kind::In: {
                d.kind = Destination::Kind::Unresolved;
                for (auto c : src.children) {
                    if (t.label && base_.region(c).label == *t.label) {
                        d = {Destination::Kind::Region, c.value};
                        break;
                    }
                }
                if (d.kind == Destination::Kind::Unresolved) {
                    problem = "region '" + src.label + "' has no child '" + t.label.value_or("") + "'";
                }
                break;
            }
            case Target::Kind::Link:
                d.kind = Destination::Kind::Unresolved;
                if (!t.label) {
                    if (!src.out_links.empty()) {
                        d.kind = Destination::Kind::RandomLink;
                    }
                } else {
                    for (const auto& l : src.out_links) {
                        if (l.label == *t.label) {
                            d = {Destination::Kind::Region, l.head.value};
                            break;
                        }
                    }
                }
                if (d.kind == Destination::Kind::Unresolved) {
                    problem = "region '" + src.label + "' has no outgoing link" +
                              (t.label ? " '" + *t.label + "'" : std::string());
                }
                break;
        }
        dests.push_back(d);
    }
    st.destinations[rule] = std::move(dests);
    st.unresolved[rule] = problem.empty() ? std::string() : problem + " (rule " + to_string(*rules_[rule].rule) + ")";
}


template <typename SinkT>
AttemptResult Simulator::attempt_with(std::uint32_t region, Rng& rng, SinkT& sink) {
    auto& st = regions_[region];
    AttemptResult result;
    result.region = RegionId{region};

    std::uint64_t total = st.pool_total;
    for (const auto& [object, rule] : rule_objects_) {
        total += st.counts[object];
    }
    if (total == 0) {
        result.outcome = AttemptOutcome::NoRules;
        return result;
    }

    std::uint64_t pick = rng.below(total);
    std::uint32_t chosen = 0;
    bool found = false;
    for (const auto& [rule, mult] : st.pool) {
        if (pick < mult) {
            chosen = rule;
            found = true;
            break;
        }
        pick -= mult;
    }
    if (!found) {
        for (const auto& [object, rule] : rule_objects_) {
            const auto c = st.counts[object];
            if (pick < c) {
                chosen = rule;
                break;
            }
            pick -= c;
        }
    }

    const CompiledRule& cr = rules_[chosen];
    result.rule = cr.rule;
    result.outcome = AttemptOutcome::Rejected;
    if (!st.unresolved[chosen].empty()) {
        throw TargetUnresolvable(st.unresolved[chosen]);
    }
    if (st.size < cr.lhs_size) {
        return result;
    }

    // Draw |u| objects without replacement. Only the identity of the draw
    // matters, so remaining objects are laid out as [lhs species..., rest]
    // and a draw landing in "rest", or on a species already satisfied,
    // rejects without touching the state.
    constexpr std::size_t kInline = 16;
    std::uint64_t need_inline[kInline];
    std::uint64_t taken_inline[kInline];
    std::vector<std::uint64_t> need_heap;
    std::vector<std::uint64_t> taken_heap;
    std::uint64_t* need = need_inline;
    std::uint64_t* taken = taken_inline;
    const std::size_t k = cr.lhs.size();
    if (k > kInline) {
        need_heap.resize(k);
        taken_heap.resize(k);
        need = need_heap.data();
        taken = taken_heap.data();
    }
    for (std::size_t j = 0; j < k; ++j) {
        need[j] = cr.lhs[j].second;
        taken[j] = 0;
    }
    std::uint64_t remaining = st.size;
    for (std::uint64_t draw = 0; draw < cr.lhs_size; ++draw) {
        std::uint64_t idx = rng.below(remaining);
        std::size_t hit = k;
        for (std::size_t j = 0; j < k; ++j) {
            const std::uint64_t avail = st.counts[cr.lhs[j].first] - taken[j];
            if (idx < avail) {
                hit = j;
                break;
            }
            idx -= avail;
        }
        if (hit == k || need[hit] == 0) {
            return result;
        }
        --need[hit];
        ++taken[hit];
        --remaining;
    }

    for (const auto& [object, n] : cr.lhs) {
        st.counts[object] -= n;
    }
    st.size -= cr.lhs_size;

    const auto& dests = st.destinations[chosen];
    for (std::size_t c = 0; c < cr.clauses.size(); ++c) {
        const Destination& d = dests[c];
        std::uint32_t to = region;
        switch (d.kind) {
            case Destination::Kind::Local:
                for (const auto& [object, n] : cr.clauses[c]) {
                    st.counts[object] += n;
                    st.size += n;
                }
                continue;
            case Destination::Kind::Environment:
                for (const auto& [object, n] : cr.clauses[c]) {
                    sink.emit(object, n);
                }
                continue;
            case Destination::Kind::Region:
                to = d.region;
                break;
            case Destination::Kind::RandomLink:
                to = st.links[rng.below(st.links.size())];
                break;
            case Destination::Kind::Unresolved:
                throw TargetUnresolvable(st.unresolved[chosen]);
        }
        for (const auto& [object, n] : cr.clauses[c]) {
            sink.deliver(to, object, n);
        }
    }
    result.outcome = AttemptOutcome::Applied;
    return result;
}

namespace {

template <typename D, typename E>
struct LambdaSink {
    D deliver;
    E emit;
};

template <typename D, typename E>
LambdaSink<D, E> make_sink(D d, E e) {
    return LambdaSink<D, E>{std::move(d), std::move(e)};
}

}  // namespace

AttemptResult Simulator::attempt(RegionId region) {
    if (region.value >= regions_.size()) {
        throw std::out_of_range("region id out of range");
    }
    auto sink = make_sink(
        [this](std::uint32_t to, ObjectIndex object, std::uint64_t n) {
            regions_[to].counts[object] += n;
            regions_[to].size += n;
        },
        [this](ObjectIndex object, std::uint64_t n) {
            environment_[object] += n;
            for (const auto& l : listeners_) {
                l(attempts_, object, n);
            }
        });
    return attempt_with(region.value, rng_, sink);
}

AttemptResult Simulator::step() {
    ++attempts_;
    std::uint32_t region = 0;
    if (scheduler_ == Scheduler::UniformRegion) {
        region = static_cast<std::uint32_t>(rng_.below(regions_.size()));
    } else {
        region = round_robin_;
        round_robin_ = static_cast<std::uint32_t>((round_robin_ + 1) % regions_.size());
    }
    return attempt(RegionId{region});
}

bool Simulator::applicable(const RegionState& st, const CompiledRule& rule) const {
    if (st.size < rule.lhs_size) {
        return false;
    }
    return std::all_of(rule.lhs.begin(), rule.lhs.end(),
                       [&](const auto& e) { return st.counts[e.first] >= e.second; });
}

bool Simulator::is_halted() const {
    for (const auto& st : regions_) {
        for (const auto& [rule, mult] : st.pool) {
            if (mult > 0 && applicable(st, rules_[rule])) {
                return false;
            }
        }
        for (const auto& [object, rule] : rule_objects_) {
            if (st.counts[object] > 0 && applicable(st, rules_[rule])) {
                return false;
            }
        }
    }
    return true;
}

void Simulator::apply(const Disturbance& d) {
    if (d.region.value >= regions_.size()) {
        throw std::out_of_range("disturbance names a missing region");
    }
    for (const auto& [object, n] : d.add.entries()) {
        add(d.region, intern(object), n);
    }
    for (const auto& [object, n] : d.remove.entries()) {
        if (auto idx = find_object(object)) {
            remove(d.region, *idx, n);
        }
    }
}

const std::string& Simulator::label(RegionId region) const { return regions_.at(region.value).label; }

std::uint64_t Simulator::count(RegionId region, ObjectIndex object) const {
    return regions_.at(region.value).counts.at(object);
}

std::uint64_t Simulator::count(RegionId region, const ObjectValue& object) const {
    auto idx = find_object(object);
    return idx ? count(region, *idx) : 0;
}

std::uint64_t Simulator::region_size(RegionId region) const { return regions_.at(region.value).size; }

std::uint64_t Simulator::environment_count(ObjectIndex object) const { return environment_.at(object); }

std::uint64_t Simulator::environment_count(const ObjectValue& object) const {
    auto idx = find_object(object);
    return idx ? environment_[*idx] : 0;
}

Multiset Simulator::contents(RegionId region) const {
    Multiset m;
    const auto& counts = regions_.at(region.value).counts;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        m.add(objects_[i], counts[i]);
    }
    return m;
}

Multiset Simulator::environment() const {
    Multiset m;
    for (std::size_t i = 0; i < environment_.size(); ++i) {
        m.add(objects_[i], environment_[i]);
    }
    return m;
}

MembraneSystem Simulator::snapshot() const {
    MembraneSystem out = base_;
    for (std::uint32_t r = 0; r < regions_.size(); ++r) {
        out.regions[r].contents = contents(RegionId{r});
    }
    out.environment = environment();
    return out;
}

void Simulator::add(RegionId region, ObjectIndex object, std::uint64_t n) {
    auto& st = regions_.at(region.value);
    st.counts.at(object) += n;
    st.size += n;
}

std::uint64_t Simulator::remove(RegionId region, ObjectIndex object, std::uint64_t n) {
    auto& st = regions_.at(region.value);
    const auto removed = std::min(n, st.counts.at(object));
    st.counts[object] -= removed;
    st.size -= removed;
    return removed;
}

void Simulator::clear(RegionId region) {
    auto& st = regions_.at(region.value);
    std::fill(st.counts.begin(), st.counts.end(), 0);
    st.size = 0;
}

std::optional<Simulator::ObjectIndex> Simulator::random_object(RegionId region, bool molecules_only) {
    const auto& st = regions_.at(region.value);
    std::uint64_t total = st.size;
    if (molecules_only) {
        for (const auto& [object, rule] : rule_objects_) {
            total -= st.counts[object];
        }
    }
    if (total == 0) {
        return std::nullopt;
    }
    std::uint64_t idx = rng_.below(total);
    for (ObjectIndex o = 0; o < st.counts.size(); ++o) {
        if (molecules_only && object_rule_[o]) {
            continue;
        }
        if (idx < st.counts[o]) {
            return o;
        }
        idx -= st.counts[o];
    }
    return std::nullopt;
}

void Simulator::run_parallel(std::uint64_t attempts, unsigned threads) {
    if (regions_.empty() || attempts == 0) {
        return;
    }
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(regions_.size())));

    struct Inbox {
        std::mutex mutex;
        std::vector<std::pair<ObjectIndex, std::uint64_t>> items;
        std::atomic<bool> pending{false};
    };
    std::vector<Inbox> inboxes(regions_.size());
    std::mutex env_mutex;
    std::atomic<std::uint64_t> counter{attempts_};
    const std::uint64_t target = attempts_ + attempts;

    auto drain = [&](std::uint32_t r) {
        auto& box = inboxes[r];
        if (!box.pending.load(std::memory_order_acquire)) {
            return;
        }
        std::lock_guard lock(box.mutex);
        for (const auto& [object, n] : box.items) {
            regions_[r].counts[object] += n;
            regions_[r].size += n;
        }
        box.items.clear();
        box.pending.store(false, std::memory_order_release);
    };

    std::vector<std::uint64_t> seeds(threads);
    for (auto& s : seeds) {
        s = rng_.next();
    }

    auto worker = [&](unsigned t) {
        Rng rng(seeds[t]);
        std::vector<std::uint32_t> owned;
        for (std::uint32_t r = t; r < regions_.size(); r += threads) {
            owned.push_back(r);
        }
        auto owns = [&](std::uint32_t r) { return r % threads == t; };
        auto sink = make_sink(
            [&](std::uint32_t to, ObjectIndex object, std::uint64_t n) {
                if (owns(to)) {
                    regions_[to].counts[object] += n;
                    regions_[to].size += n;
                    return;
                }
                auto& box = inboxes[to];
                std::lock_guard lock(box.mutex);
                box.items.emplace_back(object, n);
                box.pending.store(true, std::memory_order_release);
            },
            [&](ObjectIndex object, std::uint64_t n) {
                std::lock_guard lock(env_mutex);
                environment_[object] += n;
                for (const auto& l : listeners_) {
                    l(counter.load(), object, n);
                }
            });
        // Each region gets attempts / regions on average, as under the
        // uniform scheduler; the remainder goes to the lowest workers.
        const auto regions = static_cast<std::uint64_t>(regions_.size());
        const auto base = attempts * owned.size() / regions;
        const auto spare = attempts - [&] {
            std::uint64_t sum = 0;
            for (unsigned u = 0; u < threads; ++u) {
                sum += attempts * ((regions - u + threads - 1) / threads) / regions;
            }
            return sum;
        }();
        const auto quota = base + (t < spare ? 1 : 0);
        for (std::uint64_t i = 0; i < quota; ++i) {
            counter.fetch_add(1);
            const auto r = owned[rng.below(owned.size())];
            drain(r);
            attempt_with(r, rng, sink);
        }
    };

    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back(worker, t);
    }
    for (auto& th : pool) {
        th.join();
    }
    for (std::uint32_t r = 0; r < regions_.size(); ++r) {
        drain(r);
    }
    attempts_ = target;
}

AttemptReport attempt(MembraneSystem& system, RegionId region, Rng& rng) {
    Simulator sim(system, rng);
    const auto r = sim.attempt(region);
    AttemptReport report{r.outcome, r.region, std::nullopt};
    if (r.rule) {
        report.rule = *r.rule;
    }
    system = sim.snapshot();
    rng = sim.rng();
    return report;
}

AttemptReport step(MembraneSystem& system, Rng& rng, Scheduler scheduler) {
    Simulator sim(system, rng, scheduler);
    const auto r = sim.step();
    AttemptReport report{r.outcome, r.region, std::nullopt};
    if (r.rule) {
        report.rule = *r.rule;
    }
    system = sim.snapshot();
    rng = sim.rng();
    return report;
}

bool is_halted(const MembraneSystem& system) { return Simulator(system, Rng(0)).is_halted(); }

}  // namespace psys
