#ifndef DOSAMC_COMMANDS_HPP
#define DOSAMC_COMMANDS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dosamc/amc.hpp"
#include "dosamc/config.hpp"
#include "dosamc/detector.hpp"
#include "dosamc/network_chain.hpp"
#include "dosamc/node.hpp"
#include "dosamc/report.hpp"
#include "dosamc/simulator.hpp"

namespace dosamc {

// Subcommand bodies. Each returns the process exit code and throws Error on
// configuration or I/O failure (mapped to exit 1 by the caller).

/// Closed forms next to the fundamental-matrix oracle for every chain state.
inline json analysis_report(const AppConfig& cfg)
{
    const NetworkChainParams& net = cfg.scenario.network;
    const long m = net.m_threshold;
    const AbsorptionAnalysis oracle = analyze(build_matrix(m));

    json chain = json::array();
    double dev_psi = 0.0;
    double dev_time = 0.0;
    double rel_time = 0.0;
    for (long i = 0; i <= m; ++i) {
        const auto s = static_cast<std::size_t>(i);
        const double psi = death_probability(i, m);
        const double psi_oracle = oracle.absorption_probability(s, static_cast<std::size_t>(m));
        const double t = expected_death_time(i, m);
        const double t_oracle = oracle.steps_from(s);
        dev_psi = std::max(dev_psi, std::abs(psi - psi_oracle));
        dev_time = std::max(dev_time, std::abs(t - t_oracle));
        if (t_oracle > 0.0) rel_time = std::max(rel_time, std::abs(t - t_oracle) / t_oracle);
        chain.push_back({{"i", i},
                         {"death_probability", psi},
                         {"death_probability_oracle", psi_oracle},
                         {"expected_death_time", t},
                         {"expected_death_time_oracle", t_oracle}});
    }

    json visits = json::array();
    double dev_visits = 0.0;
    const long i0 = net.initial_dead;
    if (i0 >= 1 && i0 <= m - 1) {
        for (long j = 1; j <= m - 1; ++j) {
            const double closed = expected_visits_closed(i0, j, m);
            const double fund = expected_visits(oracle, static_cast<std::size_t>(i0), static_cast<std::size_t>(j));
            dev_visits = std::max(dev_visits, std::abs(closed - fund));
            visits.push_back({{"j", j}, {"expected_visits", closed}, {"expected_visits_oracle", fund}});
        }
    }

    json node = json::object();
    try {
        node["expected_lifetime_ticks"] = expected_node_lifetime(cfg.scenario.policy);
        node["note"] = "probabilistic-death lifetime from sleep";
    } catch (const Error& e) {
        node["expected_lifetime_ticks"] = nullptr;
        node["note"] = e.what();
    }
    json by_tick = json::object();
    for (unsigned long long n : {10ULL, 100ULL, 1000ULL}) {
        by_tick[std::to_string(n)] = n_step_death_probability(cfg.scenario.policy, n);
    }
    node["death_probability_by_tick"] = by_tick;

    return {{"network",
             {{"n_deployed", net.n_deployed},
              {"m_threshold", m},
              {"threshold_rule", to_string(net.rule)},
              {"initial_dead", i0}}},
            {"initial",
             {{"death_probability", death_probability(i0, m)}, {"expected_death_time", expected_death_time(i0, m)}}},
            {"chain", chain},
            {"visits_from_initial", visits},
            {"max_abs_deviation",
             {{"death_probability", dev_psi}, {"expected_death_time", dev_time}, {"expected_visits", dev_visits}}},
            {"max_rel_deviation_expected_death_time", rel_time},
            {"node", node}};
}

inline int cmd_analyze(const AppConfig& cfg, const std::optional<std::filesystem::path>& out_dir, std::ostream& out)
{
    check_app_config(cfg);
    const std::string text = to_stable_json(analysis_report(cfg));
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        write_file(*out_dir / "analysis.json", text);
    }
    out << text;
    return 0;
}

inline std::string run_file_name(std::uint64_t k)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "run_%03llu.csv", static_cast<unsigned long long>(k));
    return buf;
}

/// Writes run_000.csv ... and summary.json after all runs complete.
inline int cmd_simulate(const AppConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out)
{
    check_app_config(cfg);
    const RunSummary summary = run_many(cfg.scenario, true);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create '" + out_dir.string() + "': " + ec.message());
    for (std::uint64_t k = 0; k < summary.traces.size(); ++k) {
        std::ostringstream csv;
        write_trace_csv(csv, summary.traces[k]);
        write_file(out_dir / run_file_name(k), csv.str());
    }
    const std::string text = to_stable_json(to_json(summary, cfg.scenario));
    write_file(out_dir / "summary.json", text);
    out << text;
    return 0;
}

inline json verdict_record(const Verdict& v, const Baseline& b, const RunSummary& summary)
{
    json j = to_json(v);
    j["baseline_detail"] = to_json(b);
    j["runs"] = summary.runs;
    j["censored_count"] = summary.censored_count;
    return j;
}

/// Exit code follows the decision: 0 Normal, 2 UnderAttack, 3 Inconclusive.
inline int cmd_detect(const AppConfig& cfg, const std::optional<std::filesystem::path>& out_dir, std::ostream& out)
{
    check_app_config(cfg);
    const Baseline baseline = baseline_for(cfg);
    const RunSummary summary = run_many(cfg.scenario);
    const Verdict v = detect(summary, baseline, cfg.detector.theta);
    const std::string text = to_stable_json(verdict_record(v, baseline, summary));
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        write_file(*out_dir / "verdict.json", text);
    }
    out << text;
    return exit_code(v.decision);
}

inline constexpr std::array<const char*, 6> kSweepParameters{"m_threshold", "n_deployed", "theta",
                                                             "coverage",    "sleep_block", "extra_drain"};

inline bool is_sweep_parameter(const std::string& name)
{
    return std::find_if(kSweepParameters.begin(), kSweepParameters.end(),
                        [&](const char* p) { return name == p; }) != kSweepParameters.end();
}

inline AppConfig with_parameter(AppConfig cfg, const std::string& name, double value)
{
    auto as_count = [&]() {
        if (value < 0.0 || value != std::floor(value)) {
            throw Error(ErrorCode::ConfigInvalid, name + " must be a non-negative integer");
        }
        return static_cast<long>(value);
    };
    auto& net = cfg.scenario.network;
    auto require_attack = [&]() {
        if (cfg.scenario.attack.kind == AttackKind::NoAttack) {
            throw Error(ErrorCode::ConfigInvalid, "sweeping " + name + " needs an attack kind other than 'none'");
        }
    };
    if (name == "m_threshold") {
        net = make_chain_params(net.n_deployed, as_count(), net.initial_dead);
    } else if (name == "n_deployed") {
        net = make_chain_params(as_count(), net.initial_dead);
    } else if (name == "theta") {
        cfg.detector.theta = value;
    } else if (name == "coverage") {
        require_attack();
        cfg.scenario.attack.coverage = value;
    } else if (name == "sleep_block") {
        require_attack();
        cfg.scenario.attack.sleep_block = value;
    } else if (name == "extra_drain") {
        require_attack();
        cfg.scenario.attack.extra_drain = value;
    } else {
        throw Error(ErrorCode::ConfigInvalid, "unknown sweep parameter '" + name + "'");
    }
    return cfg;
}

inline constexpr const char* kSweepCsvHeader =
    "value,expected_death_time,baseline,mean_death_tick,normal,under_attack,inconclusive";

/// One row per value: chain-step death time, baseline ticks, mean simulated
/// death tick and per-run verdict counts.
inline std::string sweep_table(const AppConfig& cfg, const std::string& parameter, const std::vector<double>& values)
{
    if (!is_sweep_parameter(parameter)) {
        throw Error(ErrorCode::ConfigInvalid, "unknown sweep parameter '" + parameter + "'");
    }
    std::ostringstream csv;
    csv << kSweepCsvHeader << '\n';
    for (double value : values) {
        const AppConfig row_cfg = with_parameter(cfg, parameter, value);
        check_app_config(row_cfg);
        const NetworkChainParams& net = row_cfg.scenario.network;
        const Baseline baseline = baseline_for(row_cfg);
        const RunSummary summary = run_many(row_cfg.scenario);
        std::array<std::uint64_t, 3> counts{};
        for (const auto& d : summary.death_ticks) {
            Observation obs;
            if (d) obs.death_tick = static_cast<double>(*d);
            obs.elapsed_ticks = static_cast<double>(summary.max_ticks);
            const Verdict v = detect(obs, baseline, row_cfg.detector.theta);
            ++counts[static_cast<std::size_t>(v.decision)];
        }
        csv << format_double(value) << ',' << format_double(expected_death_time(net.initial_dead, net.m_threshold))
            << ',' << format_double(baseline.expected_death_ticks) << ','
            << (summary.mean_death_tick ? format_double(*summary.mean_death_tick) : std::string()) << ','
            << counts[0] << ',' << counts[1] << ',' << counts[2] << '\n';
    }
    return csv.str();
}

inline int cmd_sweep(const AppConfig& cfg, const std::string& parameter, const std::vector<double>& values,
                     const std::optional<std::filesystem::path>& out_dir, std::ostream& out)
{
    check_app_config(cfg);
    const std::string table = sweep_table(cfg, parameter, values);
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        write_file(*out_dir / "sweep.csv", table);
    }
    out << table;
    return 0;
}

} // namespace dosamc

#endif // DOSAMC_COMMANDS_HPP
