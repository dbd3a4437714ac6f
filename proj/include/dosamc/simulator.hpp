#ifndef DOSAMC_SIMULATOR_HPP
#define DOSAMC_SIMULATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dosamc/attacker.hpp"
#include "dosamc/error.hpp"
#include "dosamc/network_chain.hpp"
#include "dosamc/node.hpp"
#include "dosamc/rng.hpp"

namespace dosamc {

// Random substreams of a scenario seed. Run k uses stream kRunStreamBase + k.
inline constexpr std::uint64_t kAffectedStream = 0;
inline constexpr std::uint64_t kRunStreamBase = 1;

struct ScenarioConfig {
    NetworkChainParams network;  // N, M and the analytic start state i0
    std::uint64_t max_ticks = 100000;
    std::uint64_t seed = 1;
    NodePolicy policy = default_policy();
    EnergyModel energy;
    AttackModel attack;
    DeathMode death_mode = DeathMode::Energy;
    std::uint64_t runs = 1;
};

inline ScenarioConfig validate_config(const ScenarioConfig& config)
{
    try {
        const auto& net = config.network;
        if (net.n_deployed < 2) throw Error(ErrorCode::TooFewNodes, "n_deployed must be >= 2");
        if (net.m_threshold < 2 || net.m_threshold > net.n_deployed) {
            throw Error(ErrorCode::OutOfRange, "m_threshold must lie in [2, n_deployed]");
        }
        if (net.initial_dead < 0 || net.initial_dead > net.m_threshold) {
            throw Error(ErrorCode::OutOfRange, "initial_dead must lie in [0, M]");
        }
        if (config.max_ticks < 1) throw Error(ErrorCode::ConfigInvalid, "max_ticks must be >= 1");
        if (config.runs < 1) throw Error(ErrorCode::ConfigInvalid, "runs must be >= 1");
        validate_policy(config.policy);
        validate_energy(config.energy);
        validate_attack(config.attack);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigInvalid) throw;
        throw Error(ErrorCode::ConfigInvalid, e.what());
    }
    return config;
}

struct TickRecord {
    std::uint64_t tick = 0;
    long dead = 0;
    long sleep = 0;
    long active = 0;
    long inactive = 0;
    double battery = 0.0; // sum of remaining charge, dead nodes count as 0

    friend bool operator==(const TickRecord&, const TickRecord&) = default;
};

struct SimulationTrace {
    std::vector<TickRecord> per_tick; // tick 0 is the initial state
    std::optional<std::uint64_t> network_death_tick;
    long m_threshold = 0;
    long n_deployed = 0;

    std::uint64_t elapsed_ticks() const { return per_tick.empty() ? 0 : per_tick.back().tick; }

    friend bool operator==(const SimulationTrace&, const SimulationTrace&) = default;
};

namespace detail {
inline TickRecord census(std::uint64_t tick, const std::vector<Node>& nodes)
{
    TickRecord rec;
    rec.tick = tick;
    for (const Node& n : nodes) {
        switch (n.state) {
        case NodeState::Dead: ++rec.dead; break;
        case NodeState::Sleep: ++rec.sleep; break;
        case NodeState::Active: ++rec.active; break;
        case NodeState::Inactive: ++rec.inactive; break;
        }
        if (n.state != NodeState::Dead && n.battery > 0.0) rec.battery += n.battery;
    }
    return rec;
}
} // namespace detail

/// Nodes attacked in this scenario; fixed by the scenario seed, shared by all runs.
inline std::vector<std::size_t> scenario_affected_set(const ScenarioConfig& config)
{
    Rng rng(config.seed, kAffectedStream);
    return affected_set(config.attack, static_cast<std::size_t>(config.network.n_deployed), rng);
}

/// One run. Per tick, for every live node in id order: pick the (possibly
/// attacked) policy row, draw the next state, charge drain, apply the death
/// check; then record counts. Stops at network death or max_ticks.
inline SimulationTrace run_one(const ScenarioConfig& config, std::uint64_t run_index)
{
    validate_config(config);
    if (run_index >= config.runs) {
        throw Error(ErrorCode::ConfigInvalid, "run_index " + std::to_string(run_index) + " >= runs");
    }
    const auto n = static_cast<std::size_t>(config.network.n_deployed);
    const long m = config.network.m_threshold;

    const NodePolicy base =
        config.death_mode == DeathMode::Energy ? energy_mode_policy(config.policy) : config.policy;
    const NodePolicy attacked = transform_policy(base, config.attack);
    std::vector<char> is_affected(n, 0);
    for (std::size_t id : scenario_affected_set(config)) is_affected[id] = 1;

    std::vector<Node> nodes(n);
    for (std::size_t id = 0; id < n; ++id) nodes[id] = Node{id, NodeState::Sleep, config.energy.capacity};

    SimulationTrace trace;
    trace.m_threshold = m;
    trace.n_deployed = config.network.n_deployed;
    trace.per_tick.push_back(detail::census(0, nodes));

    Rng rng(config.seed, kRunStreamBase + run_index);
    for (std::uint64_t tick = 1; tick <= config.max_ticks; ++tick) {
        for (Node& node : nodes) {
            if (node.state == NodeState::Dead) continue;
            const bool hit = is_affected[node.id] != 0;
            const NodePolicy& policy = hit && config.attack.in_window(tick) ? attacked : base;
            const double extra = attack_drain(config.attack, node.state, tick, hit);
            node = step_node(node, policy, config.energy, config.death_mode, rng, extra);
        }
        const TickRecord rec = detail::census(tick, nodes);
        const TickRecord& prev = trace.per_tick.back();
        if (rec.dead < prev.dead || rec.dead + rec.sleep + rec.active + rec.inactive != trace.n_deployed) {
            throw std::logic_error("simulation invariant violated at tick " + std::to_string(tick));
        }
        trace.per_tick.push_back(rec);
        if (rec.dead >= m) {
            trace.network_death_tick = tick;
            break;
        }
    }
    return trace;
}

struct RunSummary {
    std::uint64_t runs = 0;
    std::optional<double> mean_death_tick;
    std::optional<double> std_death_tick; // sample standard deviation over uncensored runs
    std::uint64_t censored_count = 0;
    std::vector<std::optional<std::uint64_t>> death_ticks;
    std::vector<SimulationTrace> traces; // empty unless requested
    std::uint64_t max_ticks = 0;
};

inline RunSummary summarize_death_ticks(std::vector<std::optional<std::uint64_t>> death_ticks, std::uint64_t max_ticks)
{
    RunSummary s;
    s.runs = death_ticks.size();
    s.max_ticks = max_ticks;
    double sum = 0.0;
    std::uint64_t count = 0;
    for (const auto& t : death_ticks) {
        if (!t) {
            ++s.censored_count;
            continue;
        }
        sum += static_cast<double>(*t);
        ++count;
    }
    if (count > 0) {
        const double mean = sum / static_cast<double>(count);
        double ss = 0.0;
        for (const auto& t : death_ticks)
            if (t) ss += (static_cast<double>(*t) - mean) * (static_cast<double>(*t) - mean);
        s.mean_death_tick = mean;
        s.std_death_tick = count > 1 ? std::sqrt(ss / static_cast<double>(count - 1)) : 0.0;
    }
    s.death_ticks = std::move(death_ticks);
    return s;
}

/// Runs 0..runs-1; censored runs are counted but excluded from the mean.
inline RunSummary run_many(const ScenarioConfig& config, bool keep_traces = false)
{
    validate_config(config);
    std::vector<std::optional<std::uint64_t>> deaths;
    std::vector<SimulationTrace> traces;
    deaths.reserve(config.runs);
    for (std::uint64_t k = 0; k < config.runs; ++k) {
        SimulationTrace t = run_one(config, k);
        deaths.push_back(t.network_death_tick);
        if (keep_traces) traces.push_back(std::move(t));
    }
    RunSummary s = summarize_death_ticks(std::move(deaths), config.max_ticks);
    s.traces = std::move(traces);
    return s;
}

/// Per-tick dead count clamped to [0, M].
inline std::vector<long> dead_count_chain_view(const SimulationTrace& trace)
{
    std::vector<long> view;
    view.reserve(trace.per_tick.size());
    for (const TickRecord& r : trace.per_tick) view.push_back(std::clamp(r.dead, 0L, trace.m_threshold));
    return view;
}

// Direct chain simulation: step the (M+1)-state birth-death chain itself.

inline long chain_step(long i, long m, Rng& rng)
{
    const ChainStep s = step_probs(i, m);
    const double u = rng.uniform01();
    if (u < s.up) return i + 1;
    if (u < s.up + s.down) return i - 1;
    return i;
}

struct ChainAbsorption {
    std::optional<std::uint64_t> steps; // absent if max_steps was hit first
    long final_state = 0;
};

inline ChainAbsorption simulate_chain_absorption(long initial, long m, Rng& rng, std::uint64_t max_steps)
{
    detail::check_state(initial, m);
    long i = initial;
    for (std::uint64_t step = 0; step < max_steps; ++step) {
        if (i == 0 || i == m) return {step, i};
        i = chain_step(i, m, rng);
    }
    if (i == 0 || i == m) return {max_steps, i};
    return {std::nullopt, i};
}

/// Chain state sampled once per tick with `steps_per_tick` chain steps in
/// between; element 0 is the initial state. Stops once absorbed.
inline std::vector<long> simulate_chain_view(long initial, long m, unsigned steps_per_tick, std::uint64_t max_ticks,
                                             Rng& rng)
{
    detail::check_state(initial, m);
    std::vector<long> view{initial};
    long i = initial;
    for (std::uint64_t tick = 1; tick <= max_ticks && i != 0 && i != m; ++tick) {
        for (unsigned k = 0; k < steps_per_tick && i != 0 && i != m; ++k) i = chain_step(i, m, rng);
        view.push_back(i);
    }
    return view;
}

} // namespace dosamc

#endif // DOSAMC_SIMULATOR_HPP
