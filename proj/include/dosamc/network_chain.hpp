#ifndef DOSAMC_NETWORK_CHAIN_HPP
#define DOSAMC_NETWORK_CHAIN_HPP

#include <cstddef>
#include <string>

#include "dosamc/amc.hpp"
#include "dosamc/error.hpp"

namespace dosamc {

// Birth-death chain over the number of dead nodes i in [0, M]. Both
// boundaries are absorbing; reaching M is network death.

enum class ThresholdRule { RoundHalfUp, Explicit };

inline std::string to_string(ThresholdRule rule)
{
    return rule == ThresholdRule::RoundHalfUp ? "round_half_up(4N/5)" : "explicit";
}

struct NetworkChainParams {
    long n_deployed = 0;
    long m_threshold = 0;
    long initial_dead = 0;
    ThresholdRule rule = ThresholdRule::RoundHalfUp;
};

struct ChainStep {
    double up = 0.0;
    double down = 0.0;
    double stay = 1.0;
};

/// M = round(4N/5), ties rounded up. Computed in integers: floor((8N + 5) / 10).
inline long threshold_from_deployed(long n)
{
    if (n < 2) throw Error(ErrorCode::TooFewNodes, "need at least 2 deployed nodes, got " + std::to_string(n));
    const long m = (8 * n + 5) / 10;
    if (m < 2) throw Error(ErrorCode::TooFewNodes, "threshold M=" + std::to_string(m) + " is below 2");
    return m;
}

inline NetworkChainParams make_chain_params(long n_deployed, long initial_dead)
{
    NetworkChainParams p;
    p.n_deployed = n_deployed;
    p.m_threshold = threshold_from_deployed(n_deployed);
    p.initial_dead = initial_dead;
    if (initial_dead < 0 || initial_dead > p.m_threshold) {
        throw Error(ErrorCode::OutOfRange, "initial_dead must lie in [0, M]");
    }
    return p;
}

/// Threshold supplied directly (sweeps over M). Requires 2 <= M <= N.
inline NetworkChainParams make_chain_params(long n_deployed, long m_threshold, long initial_dead)
{
    if (n_deployed < 2) throw Error(ErrorCode::TooFewNodes, "need at least 2 deployed nodes");
    if (m_threshold < 2 || m_threshold > n_deployed) {
        throw Error(ErrorCode::OutOfRange, "explicit threshold M must lie in [2, N]");
    }
    if (initial_dead < 0 || initial_dead > m_threshold) {
        throw Error(ErrorCode::OutOfRange, "initial_dead must lie in [0, M]");
    }
    return {n_deployed, m_threshold, initial_dead, ThresholdRule::Explicit};
}

namespace detail {
inline void check_state(long i, long m)
{
    if (m < 2) throw Error(ErrorCode::OutOfRange, "threshold M must be >= 2");
    if (i < 0 || i > m) {
        throw Error(ErrorCode::OutOfRange, "state " + std::to_string(i) + " outside [0, " + std::to_string(m) + "]");
    }
}
} // namespace detail

/// up = down = ((M-i)/M)(i/M), stay = ((M-i)/M)^2 + (i/M)^2.
inline ChainStep step_probs(long i, long m)
{
    detail::check_state(i, m);
    const double mm = static_cast<double>(m) * static_cast<double>(m);
    const double alive = static_cast<double>(m - i);
    const double dead = static_cast<double>(i);
    ChainStep s;
    s.up = alive * dead / mm;
    s.down = alive * dead / mm;
    s.stay = (alive * alive + dead * dead) / mm;
    return s;
}

/// Ratio down/up for 0 < i < M, and 1 at i = 0.
inline double beta(long i, long m)
{
    detail::check_state(i, m);
    if (i == m) throw Error(ErrorCode::OutOfRange, "beta is defined for i < M");
    if (i == 0) return 1.0;
    const ChainStep s = step_probs(i, m);
    return s.down / s.up;
}

/// Probability of absorption at M from i, via the general beta-sum
/// sum_{k<i} beta_k / sum_{k<M} beta_k.
inline double death_probability(long i, long m)
{
    detail::check_state(i, m);
    double num = 0.0;
    double den = 0.0;
    for (long k = 0; k < m; ++k) {
        const double b = beta(k, m);
        if (k < i) num += b;
        den += b;
    }
    return num / den;
}

/// Expected visits to j before absorption, starting from i (both transient).
inline double expected_visits_closed(long i, long j, long m)
{
    detail::check_state(i, m);
    if (i < 1 || i > m - 1 || j < 1 || j > m - 1) {
        throw Error(ErrorCode::OutOfRange, "visit counts need 1 <= i, j <= M-1");
    }
    const double md = static_cast<double>(m);
    if (j <= i) return md * static_cast<double>(m - i) / static_cast<double>(m - j);
    return md * static_cast<double>(i) / static_cast<double>(j);
}

/// Expected chain steps until absorption from i:
/// M(M-i) sum_{j=1..i} 1/(M-j) + M i sum_{j=i+1..M-1} 1/j.
inline double expected_death_time(long i, long m)
{
    detail::check_state(i, m);
    if (i == 0 || i == m) return 0.0;
    double lower = 0.0;
    for (long j = 1; j <= i; ++j) lower += 1.0 / static_cast<double>(m - j);
    double upper = 0.0;
    for (long j = i + 1; j <= m - 1; ++j) upper += 1.0 / static_cast<double>(j);
    const double md = static_cast<double>(m);
    return md * static_cast<double>(m - i) * lower + md * static_cast<double>(i) * upper;
}

/// (M+1)-state tridiagonal matrix with states 0 and M absorbing.
inline TransitionMatrix build_matrix(long m)
{
    detail::check_state(0, m);
    const auto n = static_cast<std::size_t>(m + 1);
    TransitionMatrix tm{Matrix(n, n), {0, n - 1}};
    for (long i = 0; i <= m; ++i) {
        const auto r = static_cast<std::size_t>(i);
        const ChainStep s = step_probs(i, m);
        tm.probs(r, r) = s.stay;
        if (i > 0) tm.probs(r, r - 1) = s.down;
        if (i < m) tm.probs(r, r + 1) = s.up;
    }
    return tm;
}

inline TransitionMatrix build_matrix(const NetworkChainParams& params)
{
    return build_matrix(params.m_threshold);
}

} // namespace dosamc

#endif // DOSAMC_NETWORK_CHAIN_HPP
