#ifndef DOSAMC_NODE_HPP
#define DOSAMC_NODE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dosamc/amc.hpp"
#include "dosamc/error.hpp"
#include "dosamc/rng.hpp"

namespace dosamc {

enum class NodeState : std::uint8_t { Sleep = 0, Active = 1, Inactive = 2, Dead = 3 };

inline constexpr std::size_t kNodeStates = 4;
inline constexpr std::array<NodeState, kNodeStates> kAllNodeStates{
    NodeState::Sleep, NodeState::Active, NodeState::Inactive, NodeState::Dead};

constexpr std::size_t index(NodeState s) noexcept { return static_cast<std::size_t>(s); }

constexpr std::string_view to_string(NodeState s) noexcept
{
    switch (s) {
    case NodeState::Sleep: return "sleep";
    case NodeState::Active: return "active";
    case NodeState::Inactive: return "inactive";
    case NodeState::Dead: return "dead";
    }
    return "?";
}

inline std::optional<NodeState> parse_node_state(std::string_view name)
{
    for (NodeState s : kAllNodeStates)
        if (to_string(s) == name) return s;
    return std::nullopt;
}

/// Lifecycle edges: Sleep -> {Sleep, Active, Inactive};
/// Active -> any; Inactive -> {Active, Inactive, Dead}; Dead -> Dead.
constexpr bool transition_allowed(NodeState from, NodeState to) noexcept
{
    switch (from) {
    case NodeState::Sleep: return to != NodeState::Dead;
    case NodeState::Active: return true;
    case NodeState::Inactive: return to != NodeState::Sleep;
    case NodeState::Dead: return to == NodeState::Dead;
    }
    return false;
}

enum class DeathMode { Probabilistic, Energy };

struct NodePolicy {
    std::array<std::array<double, kNodeStates>, kNodeStates> probs{};

    double operator()(NodeState from, NodeState to) const { return probs[index(from)][index(to)]; }
    double& operator()(NodeState from, NodeState to) { return probs[index(from)][index(to)]; }

    friend bool operator==(const NodePolicy&, const NodePolicy&) = default;
};

/// Sleep-heavy duty cycle with a small per-tick failure chance when awake.
inline NodePolicy default_policy()
{
    NodePolicy p;
    p.probs = {{
        {0.70, 0.25, 0.05, 0.00},
        {0.35, 0.50, 0.13, 0.02},
        {0.00, 0.38, 0.60, 0.02},
        {0.00, 0.00, 0.00, 1.00},
    }};
    return p;
}

inline NodePolicy validate_policy(const NodePolicy& policy)
{
    for (NodeState from : kAllNodeStates) {
        for (NodeState to : kAllNodeStates) {
            const double p = policy(from, to);
            if (!transition_allowed(from, to) && p != 0.0) {
                throw Error(ErrorCode::ForbiddenTransition,
                            std::string(to_string(from)) + "->" + std::string(to_string(to)) + " must be 0");
            }
            if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
                throw Error(ErrorCode::NotStochastic,
                            std::string(to_string(from)) + "->" + std::string(to_string(to)) + " outside [0,1]");
            }
        }
        double sum = 0.0;
        for (double p : policy.probs[index(from)]) sum += p;
        if (std::abs(sum - 1.0) > kStochasticTol) {
            throw Error(ErrorCode::NotStochastic, std::string(to_string(from)) + " row does not sum to 1");
        }
    }
    return policy;
}

/// Battery-driven variant: live rows lose their Dead mass and are
/// renormalized. A row that was pure Dead becomes a self-loop.
inline NodePolicy energy_mode_policy(const NodePolicy& policy)
{
    NodePolicy out = policy;
    for (NodeState from : {NodeState::Sleep, NodeState::Active, NodeState::Inactive}) {
        auto& row = out.probs[index(from)];
        row[index(NodeState::Dead)] = 0.0;
        const double live = row[0] + row[1] + row[2];
        if (live <= 0.0) {
            row = {};
            row[index(from)] = 1.0;
            continue;
        }
        for (std::size_t k = 0; k < 3; ++k) row[k] /= live;
    }
    return out;
}

struct EnergyModel {
    double capacity = 1000.0;
    std::array<double, kNodeStates> drain{0.1, 5.0, 1.0, 0.0}; // per tick, indexed by NodeState

    double operator[](NodeState s) const { return drain[index(s)]; }
};

inline EnergyModel validate_energy(const EnergyModel& e)
{
    if (!(e.capacity > 0.0) || !std::isfinite(e.capacity)) {
        throw Error(ErrorCode::ConfigInvalid, "battery capacity must be positive");
    }
    for (double d : e.drain) {
        if (!std::isfinite(d) || d < 0.0) throw Error(ErrorCode::ConfigInvalid, "drain values must be >= 0");
    }
    if (e[NodeState::Dead] != 0.0) throw Error(ErrorCode::ConfigInvalid, "drain[dead] must be 0");
    if (!(e[NodeState::Active] >= e[NodeState::Inactive] && e[NodeState::Inactive] >= e[NodeState::Sleep])) {
        throw Error(ErrorCode::ConfigInvalid, "drain must satisfy active >= inactive >= sleep");
    }
    return e;
}

struct Node {
    std::size_t id = 0;
    NodeState state = NodeState::Sleep;
    double battery = 0.0;
};

/// Inverse-CDF draw over one policy row.
inline NodeState sample_next(const std::array<double, kNodeStates>& row, double u) noexcept
{
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t k = 0; k < kNodeStates; ++k) {
        if (row[k] <= 0.0) continue;
        acc += row[k];
        last = k;
        if (u < acc) return static_cast<NodeState>(k);
    }
    return static_cast<NodeState>(last);
}

/// One tick: draw the next state, charge drain[current] + extra_drain, and in
/// Energy mode kill the node once its battery is exhausted. In Energy mode the
/// caller passes the energy_mode_policy() form. Exactly one uniform is drawn
/// per live node.
inline Node step_node(Node node, const NodePolicy& policy, const EnergyModel& energy, DeathMode mode, Rng& rng,
                      double extra_drain = 0.0)
{
    if (node.state == NodeState::Dead) return node;
    const NodeState next = sample_next(policy.probs[index(node.state)], rng.uniform01());
    node.battery -= energy[node.state] + extra_drain;
    node.state = next;
    if (mode == DeathMode::Energy && node.battery <= 0.0) node.state = NodeState::Dead;
    return node;
}

inline TransitionMatrix node_transition_matrix(const NodePolicy& policy)
{
    TransitionMatrix tm{Matrix(kNodeStates, kNodeStates), {index(NodeState::Dead)}};
    for (std::size_t r = 0; r < kNodeStates; ++r)
        for (std::size_t c = 0; c < kNodeStates; ++c) tm.probs(r, c) = policy.probs[r][c];
    return tm;
}

/// Expected ticks until Dead from `start`, with Dead as the only absorbing
/// state. Only states reachable from `start` take part in the solve.
inline double expected_node_lifetime(const NodePolicy& policy, NodeState start = NodeState::Sleep)
{
    validate_policy(policy);
    if (start == NodeState::Dead) return 0.0;

    std::array<bool, kNodeStates> seen{};
    std::vector<std::size_t> stack{index(start)};
    seen[index(start)] = true;
    while (!stack.empty()) {
        const std::size_t s = stack.back();
        stack.pop_back();
        for (std::size_t t = 0; t < kNodeStates; ++t) {
            if (!seen[t] && policy.probs[s][t] > 0.0) {
                seen[t] = true;
                stack.push_back(t);
            }
        }
    }
    if (!seen[index(NodeState::Dead)]) {
        throw Error(ErrorCode::NoAbsorptionPath, std::string("dead is unreachable from ") + std::string(to_string(start)));
    }

    std::vector<std::size_t> states;
    for (std::size_t s = 0; s < kNodeStates; ++s)
        if (seen[s]) states.push_back(s);
    TransitionMatrix sub{Matrix(states.size(), states.size()), {}};
    std::size_t start_slot = 0;
    for (std::size_t r = 0; r < states.size(); ++r) {
        if (states[r] == index(start)) start_slot = r;
        if (states[r] == index(NodeState::Dead)) sub.absorbing.push_back(r);
        for (std::size_t c = 0; c < states.size(); ++c) sub.probs(r, c) = policy.probs[states[r]][states[c]];
    }
    return analyze(sub).steps_from(start_slot);
}

/// P(X_n = Dead | X_0 = start).
inline double n_step_death_probability(const NodePolicy& policy, unsigned long long n,
                                       NodeState start = NodeState::Sleep)
{
    validate_policy(policy);
    const Matrix pn = n_step_matrix(node_transition_matrix(policy), n);
    return pn(index(start), index(NodeState::Dead));
}

} // namespace dosamc

#endif // DOSAMC_NODE_HPP
