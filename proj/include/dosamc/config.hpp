#ifndef DOSAMC_CONFIG_HPP
#define DOSAMC_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dosamc/detector.hpp"
#include "dosamc/error.hpp"
#include "dosamc/simulator.hpp"

namespace dosamc {

// Scenario file: one JSON object with optional sections
//   network  { n_deployed, initial_dead, m_threshold }
//   policy   { sleep, active, inactive, dead }            rows of 4 probabilities
//   energy   { capacity, drain { sleep, active, inactive, dead } }
//   attack   { kind, coverage, sleep_block, extra_drain, start_tick, end_tick }
//   detector { baseline, ticks_per_chain_step, theta, baseline_runs, baseline_seed,
//              window, stride, min_events }
//   run      { seed, runs, max_ticks, death_mode }
// Unknown keys are rejected. Command-line overrides are applied afterwards.

struct DetectorConfig {
    BaselineSource baseline = BaselineSource::MonteCarlo;
    double ticks_per_chain_step = 1.0;
    double theta = kDefaultThreshold;
    std::uint64_t baseline_runs = 100;
    std::optional<std::uint64_t> baseline_seed; // derived from run.seed when absent
    OnlineOptions online;
};

struct AppConfig {
    ScenarioConfig scenario;
    DetectorConfig detector;

    std::uint64_t resolved_baseline_seed() const
    {
        return detector.baseline_seed.value_or(scenario.seed ^ 0x00BA5E11E5EEDULL);
    }
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> runs;
    std::optional<double> theta;
};

inline constexpr long kDefaultDeployed = 50;
inline constexpr long kDefaultInitialDead = 1;

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!obj.is_object()) throw Error(ErrorCode::ConfigInvalid, where + " must be an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items()) {
        if (!keys.contains(key)) throw Error(ErrorCode::ConfigInvalid, "unknown key '" + where + "." + key + "'");
    }
}

inline double get_number(const json& obj, const std::string& where, const char* key, double fallback)
{
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw Error(ErrorCode::ConfigInvalid, where + "." + key + " must be a number");
    return v.get<double>();
}

inline std::uint64_t get_count(const json& obj, const std::string& where, const char* key, std::uint64_t fallback)
{
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw Error(ErrorCode::ConfigInvalid, where + "." + key + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

inline std::string get_string(const json& obj, const std::string& where, const char* key, const std::string& fallback)
{
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) throw Error(ErrorCode::ConfigInvalid, where + "." + key + " must be a string");
    return v.get<std::string>();
}

inline std::array<double, kNodeStates> get_row(const json& v, const std::string& where)
{
    if (!v.is_array() || v.size() != kNodeStates) {
        throw Error(ErrorCode::ConfigInvalid, where + " must be an array of 4 numbers");
    }
    std::array<double, kNodeStates> row{};
    for (std::size_t k = 0; k < kNodeStates; ++k) {
        if (!v[k].is_number()) throw Error(ErrorCode::ConfigInvalid, where + " must be an array of 4 numbers");
        row[k] = v[k].get<double>();
    }
    return row;
}

} // namespace detail

inline AppConfig parse_config(const nlohmann::json& doc)
{
    using detail::get_count;
    using detail::get_number;
    using detail::get_string;
    using nlohmann::json;

    detail::reject_unknown(doc, "config", {"network", "policy", "energy", "attack", "detector", "run"});
    const json empty = json::object();
    auto section = [&](const char* name) -> const json& { return doc.contains(name) ? doc.at(name) : empty; };

    AppConfig cfg;
    ScenarioConfig& sc = cfg.scenario;

    const json& net = section("network");
    detail::reject_unknown(net, "network", {"n_deployed", "initial_dead", "m_threshold"});
    const auto n = static_cast<long>(get_count(net, "network", "n_deployed", kDefaultDeployed));
    const auto i0 = static_cast<long>(get_count(net, "network", "initial_dead", kDefaultInitialDead));
    sc.network = net.contains("m_threshold")
                     ? make_chain_params(n, static_cast<long>(get_count(net, "network", "m_threshold", 0)), i0)
                     : make_chain_params(n, i0);

    const json& pol = section("policy");
    detail::reject_unknown(pol, "policy", {"sleep", "active", "inactive", "dead"});
    for (NodeState s : kAllNodeStates) {
        const std::string key(to_string(s));
        if (pol.contains(key)) sc.policy.probs[index(s)] = detail::get_row(pol.at(key), "policy." + key);
    }
    validate_policy(sc.policy);

    const json& en = section("energy");
    detail::reject_unknown(en, "energy", {"capacity", "drain"});
    sc.energy.capacity = get_number(en, "energy", "capacity", sc.energy.capacity);
    if (en.contains("drain")) {
        const json& dr = en.at("drain");
        detail::reject_unknown(dr, "energy.drain", {"sleep", "active", "inactive", "dead"});
        for (NodeState s : kAllNodeStates) {
            const std::string key(to_string(s));
            sc.energy.drain[index(s)] = get_number(dr, "energy.drain", key.c_str(), sc.energy.drain[index(s)]);
        }
    }
    validate_energy(sc.energy);

    const json& at = section("attack");
    detail::reject_unknown(at, "attack", {"kind", "coverage", "sleep_block", "extra_drain", "start_tick", "end_tick"});
    const std::string kind_name = get_string(at, "attack", "kind", "none");
    const auto kind = parse_attack_kind(kind_name);
    if (!kind) throw Error(ErrorCode::ConfigInvalid, "unknown attack.kind '" + kind_name + "'");
    sc.attack = AttackModel::defaults_for(*kind);
    sc.attack.coverage = get_number(at, "attack", "coverage", sc.attack.coverage);
    sc.attack.sleep_block = get_number(at, "attack", "sleep_block", sc.attack.sleep_block);
    sc.attack.extra_drain = get_number(at, "attack", "extra_drain", sc.attack.extra_drain);
    sc.attack.start_tick = get_count(at, "attack", "start_tick", sc.attack.start_tick);
    if (at.contains("end_tick") && !at.at("end_tick").is_null()) {
        sc.attack.end_tick = get_count(at, "attack", "end_tick", sc.attack.end_tick);
    }
    validate_attack(sc.attack);

    const json& run = section("run");
    detail::reject_unknown(run, "run", {"seed", "runs", "max_ticks", "death_mode"});
    sc.seed = get_count(run, "run", "seed", sc.seed);
    sc.runs = get_count(run, "run", "runs", sc.runs);
    sc.max_ticks = get_count(run, "run", "max_ticks", sc.max_ticks);
    const std::string mode = get_string(run, "run", "death_mode", "energy");
    if (mode == "energy") {
        sc.death_mode = DeathMode::Energy;
    } else if (mode == "probabilistic") {
        sc.death_mode = DeathMode::Probabilistic;
    } else {
        throw Error(ErrorCode::ConfigInvalid, "run.death_mode must be 'energy' or 'probabilistic'");
    }

    const json& det = section("detector");
    detail::reject_unknown(det, "detector", {"baseline", "ticks_per_chain_step", "theta", "baseline_runs",
                                             "baseline_seed", "window", "stride", "min_events"});
    DetectorConfig& dc = cfg.detector;
    const std::string source = get_string(det, "detector", "baseline", "monte_carlo");
    if (source == "analytic") {
        dc.baseline = BaselineSource::Analytic;
    } else if (source == "monte_carlo") {
        dc.baseline = BaselineSource::MonteCarlo;
    } else {
        throw Error(ErrorCode::ConfigInvalid, "detector.baseline must be 'analytic' or 'monte_carlo'");
    }
    dc.ticks_per_chain_step = get_number(det, "detector", "ticks_per_chain_step", dc.ticks_per_chain_step);
    dc.theta = get_number(det, "detector", "theta", dc.theta);
    dc.baseline_runs = get_count(det, "detector", "baseline_runs", dc.baseline_runs);
    if (det.contains("baseline_seed")) dc.baseline_seed = get_count(det, "detector", "baseline_seed", 0);
    dc.online.window = get_count(det, "detector", "window", dc.online.window);
    dc.online.stride = get_count(det, "detector", "stride", dc.online.stride);
    dc.online.min_events = get_count(det, "detector", "min_events", dc.online.min_events);
    return cfg;
}

/// Command-line values win over file values.
inline AppConfig apply_overrides(AppConfig cfg, const Overrides& o)
{
    if (o.seed) cfg.scenario.seed = *o.seed;
    if (o.runs) cfg.scenario.runs = *o.runs;
    if (o.theta) cfg.detector.theta = *o.theta;
    return cfg;
}

/// Full validation of a parsed (and overridden) config.
inline const AppConfig& check_app_config(const AppConfig& cfg)
{
    validate_config(cfg.scenario);
    const DetectorConfig& dc = cfg.detector;
    if (!(dc.theta > 0.0 && dc.theta <= 1.0)) throw Error(ErrorCode::ConfigInvalid, "detector.theta must lie in (0, 1]");
    if (!(dc.ticks_per_chain_step > 0.0)) {
        throw Error(ErrorCode::ConfigInvalid, "detector.ticks_per_chain_step must be positive");
    }
    if (dc.baseline_runs < 1) throw Error(ErrorCode::ConfigInvalid, "detector.baseline_runs must be >= 1");
    if (dc.online.window < 1 || dc.online.stride < 1) {
        throw Error(ErrorCode::ConfigInvalid, "detector.window and detector.stride must be >= 1");
    }
    return cfg;
}

inline AppConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(doc);
}

/// Scenario used for the Monte Carlo baseline: attacker removed, own seed.
inline ScenarioConfig normal_scenario(const AppConfig& cfg)
{
    ScenarioConfig normal = cfg.scenario;
    normal.attack = AttackModel::none();
    normal.seed = cfg.resolved_baseline_seed();
    normal.runs = cfg.detector.baseline_runs;
    return normal;
}

inline Baseline baseline_for(const AppConfig& cfg)
{
    if (cfg.detector.baseline == BaselineSource::Analytic) {
        return compute_baseline(cfg.scenario.network, cfg.detector.ticks_per_chain_step);
    }
    return compute_baseline(cfg.scenario.network, normal_scenario(cfg));
}

} // namespace dosamc

#endif // DOSAMC_CONFIG_HPP
