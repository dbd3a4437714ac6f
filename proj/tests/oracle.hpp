// Test-only reference computations. Nothing here calls into the library's
// linear algebra; they are the independent side of each cross-check.
#ifndef DOSAMC_TESTS_ORACLE_HPP
#define DOSAMC_TESTS_ORACLE_HPP

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

using Grid = std::vector<std::vector<double>>;

/// Expected steps to absorption by first-step analysis, t = 1 + Q t, solved
/// with Gauss-Seidel sweeps until the update is below tol.
inline std::vector<double> absorption_steps(const Grid& p, const std::vector<bool>& absorbing, double tol = 1e-13)
{
    const std::size_t n = p.size();
    std::vector<double> t(n, 0.0);
    for (int sweep = 0; sweep < 5'000'000; ++sweep) {
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (absorbing[i]) continue;
            double rhs = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && !absorbing[j]) rhs += p[i][j] * t[j];
            const double next = rhs / (1.0 - p[i][i]);
            delta = std::max(delta, std::abs(next - t[i]) / std::max(1.0, std::abs(next)));
            t[i] = next;
        }
        if (delta < tol) break;
    }
    return t;
}

/// Probability of ending in `target`, same iteration with h = Q h + R e.
inline std::vector<double> hitting_probability(const Grid& p, const std::vector<bool>& absorbing, std::size_t target,
                                               double tol = 1e-15)
{
    const std::size_t n = p.size();
    std::vector<double> h(n, 0.0);
    h[target] = 1.0;
    for (int sweep = 0; sweep < 5'000'000; ++sweep) {
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (absorbing[i]) continue;
            double rhs = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) rhs += p[i][j] * h[j];
            const double next = rhs / (1.0 - p[i][i]);
            delta = std::max(delta, std::abs(next - h[i]));
            h[i] = next;
        }
        if (delta < tol) break;
    }
    return h;
}

/// Birth-death chain of the network model written out from its rates.
inline Grid network_chain(long m)
{
    Grid p(static_cast<std::size_t>(m + 1), std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
    for (long i = 0; i <= m; ++i) {
        const double a = double(m - i) / double(m);
        const double d = double(i) / double(m);
        const auto r = static_cast<std::size_t>(i);
        p[r][r] = a * a + d * d;
        if (i > 0) p[r][r - 1] = a * d;
        if (i < m) p[r][r + 1] = a * d;
    }
    return p;
}

/// Probability of being in `target` after n steps, by enumerating every path.
inline double path_enumeration(const Grid& p, std::size_t from, std::size_t target, int n)
{
    if (n == 0) return from == target ? 1.0 : 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p[from][k] > 0.0) total += p[from][k] * path_enumeration(p, k, target, n - 1);
    return total;
}

} // namespace oracle

#endif
