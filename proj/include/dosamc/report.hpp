#ifndef DOSAMC_REPORT_HPP
#define DOSAMC_REPORT_HPP

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dosamc/config.hpp"
#include "dosamc/detector.hpp"
#include "dosamc/error.hpp"
#include "dosamc/simulator.hpp"

namespace dosamc {

using nlohmann::json;

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {
inline void write_json(std::ostream& os, const json& j, int indent, int depth)
{
    const auto pad = [&](int d) {
        os << '\n';
        for (int k = 0; k < d * indent; ++k) os << ' ';
    };
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) { // keys are std::map ordered
            if (!first) os << ',';
            first = false;
            pad(depth + 1);
            os << json(it.key()).dump() << ": ";
            write_json(os, it.value(), indent, depth + 1);
        }
        pad(depth);
        os << '}';
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        os << '[';
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (k) os << ',';
            pad(depth + 1);
            write_json(os, j[k], indent, depth + 1);
        }
        pad(depth);
        os << ']';
        return;
    }
    case json::value_t::number_float: {
        const double v = j.get<double>();
        if (std::isfinite(v)) {
            os << format_double(v);
        } else {
            os << "null";
        }
        return;
    }
    default: os << j.dump(); return;
    }
}
} // namespace detail

/// Sorted keys, 2-space indent, doubles as %.17g, trailing newline.
inline std::string to_stable_json(const json& j)
{
    std::ostringstream os;
    detail::write_json(os, j, 2, 0);
    os << '\n';
    return os.str();
}

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json to_json(const Baseline& b)
{
    return {{"expected_death_ticks", b.expected_death_ticks},
            {"source", std::string(to_string(b.source))},
            {"ticks_per_chain_step", b.ticks_per_chain_step},
            {"m_threshold", b.m_threshold},
            {"initial_dead", b.initial_dead},
            {"runs", b.runs}};
}

inline json to_json(const Verdict& v)
{
    return {{"decision", std::string(to_string(v.decision))},
            {"observed", optional_number(v.observed_death_ticks)},
            {"baseline", v.baseline_ticks},
            {"theta", v.threshold_factor},
            {"source", std::string(to_string(v.source))},
            {"detail", v.detail}};
}

inline json to_json(const RunSummary& s, const ScenarioConfig& config)
{
    json deaths = json::array();
    for (const auto& d : s.death_ticks) deaths.push_back(d ? json(*d) : json(nullptr));
    return {{"runs", s.runs},
            {"seed", config.seed},
            {"n_deployed", config.network.n_deployed},
            {"m_threshold", config.network.m_threshold},
            {"threshold_rule", to_string(config.network.rule)},
            {"max_ticks", s.max_ticks},
            {"attack", std::string(to_string(config.attack.kind))},
            {"death_mode", config.death_mode == DeathMode::Energy ? "energy" : "probabilistic"},
            {"mean_death_tick", optional_number(s.mean_death_tick)},
            {"std_death_tick", optional_number(s.std_death_tick)},
            {"censored_count", s.censored_count},
            {"death_ticks", deaths}};
}

inline constexpr const char* kTraceCsvHeader = "tick,dead,sleep,active,inactive,battery";

inline void write_trace_csv(std::ostream& os, const SimulationTrace& trace)
{
    os << kTraceCsvHeader << '\n';
    for (const TickRecord& r : trace.per_tick) {
        os << r.tick << ',' << r.dead << ',' << r.sleep << ',' << r.active << ',' << r.inactive << ','
           << format_double(r.battery) << '\n';
    }
}

inline void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

} // namespace dosamc

#endif // DOSAMC_REPORT_HPP
