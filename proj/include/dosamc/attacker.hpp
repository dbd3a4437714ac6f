#ifndef DOSAMC_ATTACKER_HPP
#define DOSAMC_ATTACKER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dosamc/error.hpp"
#include "dosamc/node.hpp"
#include "dosamc/rng.hpp"

namespace dosamc {

enum class AttackKind { NoAttack, RtsCtsFlood, BroadcastReplay };

constexpr std::string_view to_string(AttackKind k) noexcept
{
    switch (k) {
    case AttackKind::NoAttack: return "none";
    case AttackKind::RtsCtsFlood: return "rts_cts_flood";
    case AttackKind::BroadcastReplay: return "broadcast_replay";
    }
    return "?";
}

inline std::optional<AttackKind> parse_attack_kind(std::string_view name)
{
    for (AttackKind k : {AttackKind::NoAttack, AttackKind::RtsCtsFlood, AttackKind::BroadcastReplay})
        if (to_string(k) == name) return k;
    return std::nullopt;
}

/// Denial-of-sleep attacker. The radio range is abstracted to `coverage`, the
/// fraction of nodes that hear the attacker; the window is inclusive.
struct AttackModel {
    AttackKind kind = AttackKind::NoAttack;
    double coverage = 0.0;
    double sleep_block = 0.0;
    double extra_drain = 0.0;
    std::uint64_t start_tick = 0;
    std::uint64_t end_tick = std::numeric_limits<std::uint64_t>::max();

    bool in_window(std::uint64_t tick) const noexcept { return tick >= start_tick && tick <= end_tick; }

    static AttackModel none() { return {}; }

    /// RTS flooding: forced CTS replies keep nearly every sleep attempt awake.
    static AttackModel rts_cts_flood(double coverage = 1.0)
    {
        return {AttackKind::RtsCtsFlood, coverage, 0.9, 2.0};
    }

    static AttackModel broadcast_replay(double coverage = 1.0)
    {
        return {AttackKind::BroadcastReplay, coverage, 0.6, 1.0};
    }

    static AttackModel defaults_for(AttackKind kind)
    {
        switch (kind) {
        case AttackKind::RtsCtsFlood: return rts_cts_flood();
        case AttackKind::BroadcastReplay: return broadcast_replay();
        case AttackKind::NoAttack: break;
        }
        return none();
    }
};

inline AttackModel validate_attack(const AttackModel& a)
{
    auto unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    if (!unit(a.coverage)) throw Error(ErrorCode::ConfigInvalid, "attack coverage must lie in [0,1]");
    if (!unit(a.sleep_block)) throw Error(ErrorCode::ConfigInvalid, "attack sleep_block must lie in [0,1]");
    if (!std::isfinite(a.extra_drain) || a.extra_drain < 0.0) {
        throw Error(ErrorCode::ConfigInvalid, "attack extra_drain must be >= 0");
    }
    if (a.start_tick > a.end_tick) throw Error(ErrorCode::ConfigInvalid, "attack start_tick exceeds end_tick");
    if (a.kind == AttackKind::NoAttack && (a.coverage != 0.0 || a.sleep_block != 0.0 || a.extra_drain != 0.0)) {
        throw Error(ErrorCode::ConfigInvalid, "kind 'none' requires zero coverage, sleep_block and extra_drain");
    }
    return a;
}

/// round(coverage * node_count) ids drawn without replacement, sorted.
inline std::vector<std::size_t> affected_set(const AttackModel& model, std::size_t node_count, Rng& rng)
{
    if (model.kind == AttackKind::NoAttack || node_count == 0) return {};
    const auto k = static_cast<std::size_t>(std::floor(model.coverage * static_cast<double>(node_count) + 0.5));
    std::vector<std::size_t> ids(node_count);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    for (std::size_t i = 0; i < k && i + 1 < node_count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(node_count - i));
        std::swap(ids[i], ids[j]);
    }
    ids.resize(std::min(k, node_count));
    std::sort(ids.begin(), ids.end());
    return ids;
}

/// Moves a sleep_block fraction of every row's Sleep-bound mass to Active.
/// Dead row and structural zeros are untouched.
inline NodePolicy transform_policy(const NodePolicy& policy, const AttackModel& model)
{
    if (model.sleep_block == 0.0) return policy;
    NodePolicy out = policy;
    for (NodeState from : {NodeState::Sleep, NodeState::Active, NodeState::Inactive}) {
        const double to_sleep = out(from, NodeState::Sleep);
        if (to_sleep == 0.0) continue;
        const double moved = to_sleep * model.sleep_block;
        out(from, NodeState::Sleep) = model.sleep_block == 1.0 ? 0.0 : to_sleep - moved;
        out(from, NodeState::Active) += moved;
    }
    try {
        return validate_policy(out);
    } catch (const Error& e) {
        throw std::logic_error(std::string("transform_policy produced an invalid policy: ") + e.what());
    }
}

/// Extra per-tick drain: only affected, awake, live nodes inside the window.
inline double attack_drain(const AttackModel& model, NodeState state, std::uint64_t tick, bool affected) noexcept
{
    if (model.kind == AttackKind::NoAttack || !affected || !model.in_window(tick)) return 0.0;
    if (state == NodeState::Dead || state == NodeState::Sleep) return 0.0;
    return model.extra_drain;
}

} // namespace dosamc

#endif // DOSAMC_ATTACKER_HPP
