#ifndef DOSAMC_DETECTOR_HPP
#define DOSAMC_DETECTOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dosamc/error.hpp"
#include "dosamc/network_chain.hpp"
#include "dosamc/simulator.hpp"

namespace dosamc {

inline constexpr double kDefaultThreshold = 0.8;

enum class BaselineSource { Analytic, MonteCarlo };

constexpr std::string_view to_string(BaselineSource s) noexcept
{
    return s == BaselineSource::Analytic ? "analytic" : "monte_carlo";
}

/// Normal-scenario network lifetime in ticks. ticks_per_chain_step links chain
/// steps to simulator ticks; for a Monte Carlo baseline it is implied by the
/// measured mean.
struct Baseline {
    double expected_death_ticks = 0.0;
    BaselineSource source = BaselineSource::Analytic;
    double ticks_per_chain_step = 1.0;
    long m_threshold = 0;
    long initial_dead = 0;
    std::uint64_t runs = 0;
};

enum class Decision { Normal, UnderAttack, Inconclusive };

constexpr std::string_view to_string(Decision d) noexcept
{
    switch (d) {
    case Decision::Normal: return "Normal";
    case Decision::UnderAttack: return "UnderAttack";
    case Decision::Inconclusive: return "Inconclusive";
    }
    return "?";
}

/// CLI exit code for each decision.
constexpr int exit_code(Decision d) noexcept
{
    switch (d) {
    case Decision::Normal: return 0;
    case Decision::UnderAttack: return 2;
    case Decision::Inconclusive: return 3;
    }
    return 1;
}

struct Verdict {
    Decision decision = Decision::Inconclusive;
    std::optional<double> observed_death_ticks;
    double baseline_ticks = 0.0;
    double threshold_factor = kDefaultThreshold;
    BaselineSource source = BaselineSource::Analytic;
    std::string detail;
};

inline Baseline compute_baseline(const NetworkChainParams& params, double ticks_per_chain_step)
{
    if (!(ticks_per_chain_step > 0.0) || !std::isfinite(ticks_per_chain_step)) {
        throw Error(ErrorCode::ConfigInvalid, "ticks_per_chain_step must be positive");
    }
    const double steps = expected_death_time(params.initial_dead, params.m_threshold);
    if (steps <= 0.0) {
        throw Error(ErrorCode::DegenerateBaseline,
                    "expected death time from i=" + std::to_string(params.initial_dead) + " is 0");
    }
    Baseline b;
    b.expected_death_ticks = ticks_per_chain_step * steps;
    b.source = BaselineSource::Analytic;
    b.ticks_per_chain_step = ticks_per_chain_step;
    b.m_threshold = params.m_threshold;
    b.initial_dead = params.initial_dead;
    return b;
}

/// Mean network death tick of the scenario with the attacker removed.
inline Baseline compute_baseline(const NetworkChainParams& params, ScenarioConfig normal)
{
    normal.attack = AttackModel::none();
    normal.network = params;
    const double steps = expected_death_time(params.initial_dead, params.m_threshold);
    if (steps <= 0.0) {
        throw Error(ErrorCode::DegenerateBaseline,
                    "expected death time from i=" + std::to_string(params.initial_dead) + " is 0");
    }
    const RunSummary summary = run_many(normal);
    if (!summary.mean_death_tick) {
        throw Error(ErrorCode::Uncalibratable, "all " + std::to_string(summary.runs) + " normal runs were censored");
    }
    Baseline b;
    b.expected_death_ticks = *summary.mean_death_tick;
    b.source = BaselineSource::MonteCarlo;
    b.ticks_per_chain_step = *summary.mean_death_tick / steps;
    b.m_threshold = params.m_threshold;
    b.initial_dead = params.initial_dead;
    b.runs = summary.runs;
    return b;
}

struct Observation {
    std::optional<double> death_tick;
    double elapsed_ticks = 0.0;
};

inline Observation observe(const SimulationTrace& trace)
{
    Observation o;
    if (trace.network_death_tick) o.death_tick = static_cast<double>(*trace.network_death_tick);
    o.elapsed_ticks = static_cast<double>(trace.elapsed_ticks());
    return o;
}

/// Mean death tick over uncensored runs; a fully censored batch counts as
/// alive through max_ticks.
inline Observation observe(const RunSummary& summary)
{
    Observation o;
    o.death_tick = summary.mean_death_tick;
    o.elapsed_ticks = static_cast<double>(summary.max_ticks);
    return o;
}

namespace detail {
inline void check_theta(double theta)
{
    if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorCode::ConfigInvalid, "threshold_factor must lie in (0, 1]");
}

inline std::string describe(const Baseline& b, double theta)
{
    std::ostringstream os;
    os.precision(17);
    os << "baseline=" << b.expected_death_ticks << " ticks (" << to_string(b.source)
       << ", ticks_per_chain_step=" << b.ticks_per_chain_step << ", M=" << b.m_threshold
       << ", i0=" << b.initial_dead << "), theta=" << theta;
    return os.str();
}
} // namespace detail

/// A death before theta * baseline is an attack; survival past the baseline
/// is normal; anything else is undecided.
inline Verdict detect(const Observation& obs, const Baseline& baseline, double theta = kDefaultThreshold)
{
    detail::check_theta(theta);
    Verdict v;
    v.baseline_ticks = baseline.expected_death_ticks;
    v.threshold_factor = theta;
    v.source = baseline.source;
    v.observed_death_ticks = obs.death_tick;
    const double limit = theta * baseline.expected_death_ticks;
    std::ostringstream os;
    os.precision(17);
    if (obs.death_tick) {
        const bool attack = *obs.death_tick < limit;
        v.decision = attack ? Decision::UnderAttack : Decision::Normal;
        os << "network death at " << *obs.death_tick << (attack ? " < " : " >= ") << limit;
    } else if (obs.elapsed_ticks >= baseline.expected_death_ticks) {
        v.decision = Decision::Normal;
        os << "alive at " << obs.elapsed_ticks << " >= baseline";
    } else {
        v.decision = Decision::Inconclusive;
        os << "alive at " << obs.elapsed_ticks << ", baseline not yet reached";
    }
    v.detail = os.str() + "; " + detail::describe(baseline, theta);
    return v;
}

inline Verdict detect(const SimulationTrace& trace, const Baseline& baseline, double theta = kDefaultThreshold)
{
    return detect(observe(trace), baseline, theta);
}

inline Verdict detect(const RunSummary& summary, const Baseline& baseline, double theta = kDefaultThreshold)
{
    return detect(observe(summary), baseline, theta);
}

struct OnlineOptions {
    std::uint64_t window = 100;   // ticks per rate-estimation window
    std::uint64_t stride = 10;    // ticks between evaluations
    std::uint64_t min_events = 10; // moves of i required in a window
};

struct WindowVerdict {
    std::uint64_t tick = 0;
    std::optional<double> chain_steps_per_tick;
    Verdict verdict;
};

/// Sliding-window projection of the network death time. A chain step is one
/// death/recovery opportunity, so in each window the chain-step rate is the
/// number of observed moves of i (either direction) divided by the expected
/// moves per step, summed over the states occupied. Remaining time is the
/// expected chain steps from the current state divided by that rate;
/// elapsed + remaining is then judged against theta * baseline. Evaluated
/// every `stride` ticks and at the last tick. Windows with fewer than
/// min_events moves are Inconclusive (WindowTooShort).
inline std::vector<WindowVerdict> online_estimate(const std::vector<long>& chain_view, const NetworkChainParams& params,
                                                  const Baseline& baseline, double theta = kDefaultThreshold,
                                                  const OnlineOptions& opts = {})
{
    detail::check_theta(theta);
    if (chain_view.empty()) throw Error(ErrorCode::WindowTooShort, "empty chain view");
    if (opts.window == 0 || opts.stride == 0) throw Error(ErrorCode::ConfigInvalid, "window and stride must be >= 1");
    const long m = params.m_threshold;

    std::optional<std::uint64_t> death;
    for (std::size_t t = 0; t < chain_view.size(); ++t) {
        if (chain_view[t] >= m) {
            death = t;
            break;
        }
    }

    std::vector<WindowVerdict> out;
    const std::uint64_t last = chain_view.size() - 1;
    for (std::uint64_t t = std::min(opts.stride, last); t >= 1 && t <= last;
         t = (t == last) ? last + 1 : std::min(t + opts.stride, last)) {
        WindowVerdict wv;
        wv.tick = t;
        if (death && *death <= t) {
            wv.verdict = detect(Observation{static_cast<double>(*death), static_cast<double>(t)}, baseline, theta);
            out.push_back(std::move(wv));
            continue;
        }
        const std::uint64_t from = t > opts.window ? t - opts.window : 0;
        std::uint64_t events = 0;
        double exposure = 0.0;
        for (std::uint64_t k = from; k < t; ++k) {
            const long i = std::clamp(chain_view[k], 0L, m);
            const long next = std::clamp(chain_view[k + 1], 0L, m);
            events += static_cast<std::uint64_t>(next > i ? next - i : i - next);
            const ChainStep step = step_probs(i, m);
            exposure += step.up + step.down;
        }
        const long current = std::clamp(chain_view[t], 0L, m);
        if (events < opts.min_events || exposure <= 0.0) {
            Verdict v;
            v.decision = Decision::Inconclusive;
            v.baseline_ticks = baseline.expected_death_ticks;
            v.threshold_factor = theta;
            v.source = baseline.source;
            v.detail = std::string(to_string(ErrorCode::WindowTooShort)) + ": " + std::to_string(events) +
                       " moves in window ending at tick " + std::to_string(t);
            wv.verdict = std::move(v);
            out.push_back(std::move(wv));
            continue;
        }
        const double rate = static_cast<double>(events) / exposure;
        const double projected = static_cast<double>(t) + expected_death_time(current, m) / rate;
        wv.chain_steps_per_tick = rate;
        wv.verdict = detect(Observation{projected, static_cast<double>(t)}, baseline, theta);
        std::ostringstream os;
        os.precision(17);
        os << "projected from i=" << current << " at tick " << t << " with " << rate << " chain steps/tick; ";
        wv.verdict.detail = os.str() + wv.verdict.detail;
        out.push_back(std::move(wv));
    }
    return out;
}

} // namespace dosamc

#endif // DOSAMC_DETECTOR_HPP
