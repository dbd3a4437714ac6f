#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dosamc/node.hpp"

using namespace dosamc;
using S = NodeState;

namespace {
ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorCode::Io;
}

NodePolicy policy_from(std::array<std::array<double, 4>, 4> rows)
{
    NodePolicy p;
    p.probs = rows;
    return p;
}
} // namespace

TEST(ValidatePolicy, DefaultIsValid) { EXPECT_NO_THROW(validate_policy(default_policy())); }

TEST(ValidatePolicy, SleepToDeadForbidden)
{
    NodePolicy p = default_policy();
    p(S::Sleep, S::Sleep) = 0.6;
    p(S::Sleep, S::Dead) = 0.1;
    EXPECT_EQ(code_of([&] { validate_policy(p); }), ErrorCode::ForbiddenTransition);
}

TEST(ValidatePolicy, DeadRowMustBeIdentity)
{
    NodePolicy p = default_policy();
    p.probs[index(S::Dead)] = {0.0, 0.0, 0.5, 0.5};
    EXPECT_EQ(code_of([&] { validate_policy(p); }), ErrorCode::ForbiddenTransition);
}

TEST(ValidatePolicy, InactiveToSleepForbidden)
{
    NodePolicy p = default_policy();
    p(S::Inactive, S::Sleep) = 0.1;
    p(S::Inactive, S::Inactive) = 0.5;
    EXPECT_EQ(code_of([&] { validate_policy(p); }), ErrorCode::ForbiddenTransition);
}

TEST(ValidatePolicy, EveryForbiddenEntryRejected)
{
    for (S from : kAllNodeStates) {
        for (S to : kAllNodeStates) {
            if (transition_allowed(from, to)) continue;
            NodePolicy p = default_policy();
            p(from, to) = 0.01;
            EXPECT_EQ(code_of([&] { validate_policy(p); }), ErrorCode::ForbiddenTransition)
                << to_string(from) << "->" << to_string(to);
        }
    }
}

TEST(ValidatePolicy, NotStochastic)
{
    NodePolicy p = default_policy();
    p(S::Active, S::Active) = 0.6;
    EXPECT_EQ(code_of([&] { validate_policy(p); }), ErrorCode::NotStochastic);
}

TEST(EnergyModePolicy, DropsDeadMassAndRenormalizes)
{
    const NodePolicy e = energy_mode_policy(default_policy());
    EXPECT_NO_THROW(validate_policy(e));
    EXPECT_EQ(e(S::Active, S::Dead), 0.0);
    EXPECT_EQ(e(S::Inactive, S::Dead), 0.0);
    EXPECT_DOUBLE_EQ(e(S::Active, S::Active), 0.50 / 0.98);
    EXPECT_DOUBLE_EQ(e(S::Inactive, S::Active), 0.38 / 0.98);
    EXPECT_EQ(e.probs[index(S::Sleep)], default_policy().probs[index(S::Sleep)]);
}

TEST(StepNode, DeadUnchanged)
{
    Rng rng(1);
    const Node dead{3, S::Dead, -2.0};
    const Node after = step_node(dead, default_policy(), EnergyModel{}, DeathMode::Energy, rng);
    EXPECT_EQ(after.state, S::Dead);
    EXPECT_EQ(after.battery, -2.0);
}

TEST(StepNode, BatteryExhaustionKills)
{
    EnergyModel e;
    e.drain = {0.1, 2.0, 1.0, 0.0};
    Rng rng(1);
    const Node after = step_node(Node{0, S::Active, 1.0}, energy_mode_policy(default_policy()), e, DeathMode::Energy, rng);
    EXPECT_DOUBLE_EQ(after.battery, -1.0);
    EXPECT_EQ(after.state, S::Dead);
}

TEST(StepNode, ProbabilisticModeIgnoresBattery)
{
    NodePolicy p = policy_from({{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}});
    Rng rng(1);
    const Node after = step_node(Node{0, S::Active, 1.0}, p, EnergyModel{}, DeathMode::Probabilistic, rng);
    EXPECT_EQ(after.state, S::Active);
    EXPECT_DOUBLE_EQ(after.battery, -4.0);
}

TEST(StepNode, DeterministicForFixedSeed)
{
    auto sequence = [] {
        Rng rng(42, 7);
        Node n{0, S::Sleep, 1e9};
        std::vector<S> seen;
        for (int k = 0; k < 500; ++k) {
            n = step_node(n, default_policy(), EnergyModel{}, DeathMode::Probabilistic, rng);
            seen.push_back(n.state);
        }
        return seen;
    };
    EXPECT_EQ(sequence(), sequence());
}

TEST(StepNode, EnergyConservation)
{
    const EnergyModel e;
    Rng rng(99);
    Node n{0, S::Sleep, e.capacity};
    const NodePolicy p = energy_mode_policy(default_policy());
    double charged = 0.0;
    while (n.state != S::Dead) {
        charged += e[n.state];
        n = step_node(n, p, e, DeathMode::Energy, rng);
    }
    EXPECT_NEAR(e.capacity - n.battery, charged, 1e-9);
}

TEST(ExpectedNodeLifetime, GeometricFromActive)
{
    const NodePolicy p = policy_from({{{1, 0, 0, 0}, {0, 0.9, 0, 0.1}, {0, 0, 1, 0}, {0, 0, 0, 1}}});
    EXPECT_NEAR(expected_node_lifetime(p, S::Active), 10.0, 1e-12);
}

TEST(ExpectedNodeLifetime, TwoUnknownFirstStep)
{
    // t_S = 1 + t_A, t_A = 1 + t_S / 2  =>  t_A = 3, t_S = 4.
    const NodePolicy p = policy_from({{{0, 1, 0, 0}, {0.5, 0, 0, 0.5}, {0, 0, 1, 0}, {0, 0, 0, 1}}});
    EXPECT_NEAR(expected_node_lifetime(p), 4.0, 1e-12);
    EXPECT_NEAR(expected_node_lifetime(p, S::Active), 3.0, 1e-12);
}

TEST(ExpectedNodeLifetime, DeadUnreachable)
{
    const NodePolicy p = policy_from({{{0.5, 0.5, 0, 0}, {0.5, 0.5, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}});
    EXPECT_EQ(code_of([&] { expected_node_lifetime(p); }), ErrorCode::NoAbsorptionPath);
}

TEST(ExpectedNodeLifetime, AgreesWithSimulatedMean)
{
    const NodePolicy p = default_policy();
    const double analytic = expected_node_lifetime(p);
    const int n = 10'000;
    double sum = 0.0;
    double sumsq = 0.0;
    for (int k = 0; k < n; ++k) {
        Rng rng(2024, std::uint64_t(k));
        Node node{0, S::Sleep, 0.0};
        double ticks = 0.0;
        while (node.state != S::Dead) {
            node = step_node(node, p, EnergyModel{}, DeathMode::Probabilistic, rng);
            ticks += 1.0;
        }
        sum += ticks;
        sumsq += ticks * ticks;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / (n - 1));
    EXPECT_LT(std::abs(mean - analytic), 3.0 * se) << "mean " << mean << " analytic " << analytic;
}

TEST(NStepDeath, Examples)
{
    EXPECT_EQ(n_step_death_probability(default_policy(), 0), 0.0);
    const NodePolicy p = policy_from({{{1, 0, 0, 0}, {0, 0.5, 0, 0.5}, {0, 0, 1, 0}, {0, 0, 0, 1}}});
    EXPECT_DOUBLE_EQ(n_step_death_probability(p, 3, S::Active), 0.875);
}

TEST(NStepDeath, MonotoneAndConverges)
{
    double prev = 0.0;
    for (unsigned long long n = 0; n <= 2000; n += 25) {
        const double p = n_step_death_probability(default_policy(), n);
        EXPECT_GE(p, prev - 1e-15);
        prev = p;
    }
    EXPECT_NEAR(n_step_death_probability(default_policy(), 1ULL << 16), 1.0, 1e-9);
}
