#ifndef DOSAMC_AMC_HPP
#define DOSAMC_AMC_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dosamc/dense.hpp"
#include "dosamc/error.hpp"

namespace dosamc {

inline constexpr double kStochasticTol = 1e-9;

/// Discrete-time chain over n states. `absorbing` lists the states declared
/// absorbing; validate() checks that the declaration matches the matrix.
struct TransitionMatrix {
    Matrix probs;
    std::vector<std::size_t> absorbing;

    std::size_t n_states() const noexcept { return probs.rows(); }

    bool is_absorbing(std::size_t s) const
    {
        return std::find(absorbing.begin(), absorbing.end(), s) != absorbing.end();
    }
};

/// Canonical form [Q R; 0 I] with both orderings ascending by original index.
struct CanonicalDecomposition {
    std::vector<std::size_t> transient_order;
    std::vector<std::size_t> absorbing_order;
    Matrix q;
    Matrix r;
};

struct AbsorptionAnalysis {
    std::vector<std::size_t> transient_order;
    std::vector<std::size_t> absorbing_order;
    Matrix fundamental;                 // (I - Q)^-1, expected visit counts
    Matrix absorb_prob;                 // fundamental * R
    std::vector<double> expected_steps; // fundamental row sums

    /// Position of an original state index within transient_order.
    std::optional<std::size_t> transient_slot(std::size_t state) const
    {
        auto it = std::find(transient_order.begin(), transient_order.end(), state);
        if (it == transient_order.end()) return std::nullopt;
        return static_cast<std::size_t>(it - transient_order.begin());
    }

    std::optional<std::size_t> absorbing_slot(std::size_t state) const
    {
        auto it = std::find(absorbing_order.begin(), absorbing_order.end(), state);
        if (it == absorbing_order.end()) return std::nullopt;
        return static_cast<std::size_t>(it - absorbing_order.begin());
    }

    /// Expected steps to absorption from an original state (0 if absorbing).
    double steps_from(std::size_t state) const
    {
        if (auto slot = transient_slot(state)) return expected_steps[*slot];
        if (absorbing_slot(state)) return 0.0;
        throw Error(ErrorCode::OutOfRange, "state " + std::to_string(state) + " not in chain");
    }

    /// Probability of ending in absorbing state `target` starting from `state`.
    double absorption_probability(std::size_t state, std::size_t target) const
    {
        auto a = absorbing_slot(target);
        if (!a) throw Error(ErrorCode::NotTransient, "target " + std::to_string(target) + " is not absorbing");
        if (auto slot = transient_slot(state)) return absorb_prob(*slot, *a);
        if (absorbing_slot(state)) return state == target ? 1.0 : 0.0;
        throw Error(ErrorCode::OutOfRange, "state " + std::to_string(state) + " not in chain");
    }
};

/// Returns the matrix unchanged if it is row-stochastic, every declared
/// absorbing row is an identity row, and every other state can reach some
/// absorbing state through nonzero entries.
inline TransitionMatrix validate(const TransitionMatrix& m)
{
    const std::size_t n = m.n_states();
    if (n == 0 || m.probs.cols() != n) {
        throw Error(ErrorCode::NotStochastic, "transition matrix must be square and non-empty");
    }
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double p = m.probs(r, c);
            if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
                throw Error(ErrorCode::NotStochastic,
                            "entry [" + std::to_string(r) + "][" + std::to_string(c) + "] outside [0,1]");
            }
        }
        if (std::abs(m.probs.row_sum(r) - 1.0) > kStochasticTol) {
            throw Error(ErrorCode::NotStochastic, "row " + std::to_string(r) + " does not sum to 1");
        }
    }
    std::vector<char> absorbing(n, 0);
    for (std::size_t a : m.absorbing) {
        if (a >= n) throw Error(ErrorCode::OutOfRange, "absorbing index " + std::to_string(a) + " out of range");
        for (std::size_t c = 0; c < n; ++c) {
            const double expect = c == a ? 1.0 : 0.0;
            if (std::abs(m.probs(a, c) - expect) > kStochasticTol) {
                throw Error(ErrorCode::BadAbsorbingRow, "row " + std::to_string(a) + " is not an identity row");
            }
        }
        absorbing[a] = 1;
    }

    // Backward search from the absorbing set over nonzero edges.
    std::vector<char> reaches = absorbing;
    std::vector<std::size_t> frontier(m.absorbing.begin(), m.absorbing.end());
    while (!frontier.empty()) {
        const std::size_t target = frontier.back();
        frontier.pop_back();
        for (std::size_t s = 0; s < n; ++s) {
            if (!reaches[s] && m.probs(s, target) > 0.0) {
                reaches[s] = 1;
                frontier.push_back(s);
            }
        }
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (!reaches[s]) {
            throw Error(ErrorCode::NoAbsorptionPath, "state " + std::to_string(s) + " cannot reach an absorbing state");
        }
    }
    return m;
}

inline CanonicalDecomposition canonicalize(const TransitionMatrix& m)
{
    const std::size_t n = m.n_states();
    CanonicalDecomposition d;
    for (std::size_t s = 0; s < n; ++s) {
        (m.is_absorbing(s) ? d.absorbing_order : d.transient_order).push_back(s);
    }
    const std::size_t t = d.transient_order.size();
    const std::size_t a = d.absorbing_order.size();
    d.q = Matrix(t, t);
    d.r = Matrix(t, a);
    for (std::size_t i = 0; i < t; ++i) {
        const std::size_t src = d.transient_order[i];
        for (std::size_t j = 0; j < t; ++j) d.q(i, j) = m.probs(src, d.transient_order[j]);
        for (std::size_t j = 0; j < a; ++j) d.r(i, j) = m.probs(src, d.absorbing_order[j]);
    }
    return d;
}

inline AbsorptionAnalysis analyze(const CanonicalDecomposition& d)
{
    const std::size_t t = d.transient_order.size();
    AbsorptionAnalysis out;
    out.transient_order = d.transient_order;
    out.absorbing_order = d.absorbing_order;
    if (t == 0) {
        out.absorb_prob = Matrix(0, d.absorbing_order.size());
        return out;
    }
    Matrix i_minus_q = Matrix::identity(t);
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = 0; j < t; ++j) i_minus_q(i, j) -= d.q(i, j);

    out.fundamental = LuFactorization(std::move(i_minus_q)).inverse();
    out.absorb_prob = out.fundamental * d.r;
    out.expected_steps.resize(t);
    for (std::size_t i = 0; i < t; ++i) out.expected_steps[i] = out.fundamental.row_sum(i);
    return out;
}

/// validate + canonicalize + analyze.
inline AbsorptionAnalysis analyze(const TransitionMatrix& m)
{
    return analyze(canonicalize(validate(m)));
}

/// m^n by repeated squaring; n = 0 gives the identity.
inline Matrix n_step_matrix(const TransitionMatrix& m, unsigned long long n)
{
    Matrix result = Matrix::identity(m.n_states());
    Matrix base = m.probs;
    while (n > 0) {
        if (n & 1ULL) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

inline double expected_visits(const AbsorptionAnalysis& a, std::size_t from_state, std::size_t to_state)
{
    auto from = a.transient_slot(from_state);
    auto to = a.transient_slot(to_state);
    if (!from || !to) {
        throw Error(ErrorCode::NotTransient, "expected_visits requires two transient states");
    }
    return a.fundamental(*from, *to);
}

} // namespace dosamc

#endif // DOSAMC_AMC_HPP
