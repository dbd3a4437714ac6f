#include <gtest/gtest.h>

#include <random>

#include "dosamc/detector.hpp"

using namespace dosamc;

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

Baseline fixed_baseline(double ticks)
{
    Baseline b;
    b.expected_death_ticks = ticks;
    b.ticks_per_chain_step = 1.0;
    return b;
}

Observation died(double t) { return {t, t}; }
Observation alive(double t) { return {std::nullopt, t}; }
} // namespace

TEST(Baseline, AnalyticScalesDeathTime)
{
    const Baseline b = compute_baseline(make_chain_params(2, 2, 1), 10.0);
    EXPECT_DOUBLE_EQ(b.expected_death_ticks, 20.0);
    EXPECT_EQ(b.source, BaselineSource::Analytic);
    const NetworkChainParams p = make_chain_params(50, 1);
    EXPECT_DOUBLE_EQ(compute_baseline(p, 3.0).expected_death_ticks, 3.0 * expected_death_time(1, 40));
}

TEST(Baseline, DegenerateStart)
{
    EXPECT_EQ(code_of([] { compute_baseline(make_chain_params(10, 0), 1.0); }), ErrorCode::DegenerateBaseline);
    EXPECT_EQ(code_of([] { compute_baseline(make_chain_params(10, 8), 1.0); }), ErrorCode::DegenerateBaseline);
    EXPECT_EQ(code_of([] { compute_baseline(make_chain_params(10, 1), 0.0); }), ErrorCode::ConfigInvalid);
}

TEST(Baseline, MonteCarloMean)
{
    ScenarioConfig normal;
    normal.network = make_chain_params(20, 1);
    normal.runs = 20;
    normal.seed = 3;
    normal.attack = AttackModel::rts_cts_flood(); // dropped for the baseline
    const Baseline b = compute_baseline(normal.network, normal);
    normal.attack = AttackModel::none();
    const RunSummary s = run_many(normal);
    EXPECT_EQ(b.source, BaselineSource::MonteCarlo);
    EXPECT_DOUBLE_EQ(b.expected_death_ticks, *s.mean_death_tick);
    EXPECT_DOUBLE_EQ(b.ticks_per_chain_step * expected_death_time(1, 16), b.expected_death_ticks);
    EXPECT_EQ(b.runs, 20u);
}

TEST(Baseline, MonteCarloUncalibratable)
{
    ScenarioConfig normal;
    normal.network = make_chain_params(10, 1);
    normal.energy.drain = {0.0, 0.0, 0.0, 0.0};
    normal.max_ticks = 20;
    normal.runs = 4;
    EXPECT_EQ(code_of([&] { compute_baseline(normal.network, normal); }), ErrorCode::Uncalibratable);
}

TEST(Detect, Examples)
{
    const Baseline b = fixed_baseline(1000.0);
    EXPECT_EQ(detect(died(400), b, 0.8).decision, Decision::UnderAttack);
    EXPECT_EQ(detect(died(1000), b, 0.8).decision, Decision::Normal);
    EXPECT_EQ(detect(died(800), b, 0.8).decision, Decision::Normal); // strict <
    EXPECT_EQ(detect(alive(500), b, 0.8).decision, Decision::Inconclusive);
    EXPECT_EQ(detect(alive(1000), b, 0.8).decision, Decision::Normal);
}

TEST(Detect, RejectsBadTheta)
{
    const Baseline b = fixed_baseline(10.0);
    EXPECT_EQ(code_of([&] { detect(died(1), b, 0.0); }), ErrorCode::ConfigInvalid);
    EXPECT_EQ(code_of([&] { detect(died(1), b, 1.5); }), ErrorCode::ConfigInvalid);
    EXPECT_NO_THROW(detect(died(1), b, 1.0));
}

TEST(Detect, VerdictInvariantsAndMonotoneInTheta)
{
    std::mt19937_64 g(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 2000; ++rep) {
        const Baseline b = fixed_baseline(10.0 + 1000.0 * u(g));
        const Observation obs = u(g) < 0.7 ? died(1500.0 * u(g)) : alive(1500.0 * u(g));
        const double theta = 0.01 + 0.99 * u(g);
        const Verdict v = detect(obs, b, theta);
        if (v.decision == Decision::UnderAttack) {
            ASSERT_TRUE(v.observed_death_ticks.has_value());
            EXPECT_LT(*v.observed_death_ticks, theta * b.expected_death_ticks);
            for (double higher : {theta + 1e-6, (theta + 1.0) / 2.0, 1.0})
                if (higher <= 1.0) EXPECT_EQ(detect(obs, b, higher).decision, Decision::UnderAttack);
        }
    }
}

TEST(Detect, ScaleConsistency)
{
    std::mt19937_64 g(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const NetworkChainParams p = make_chain_params(30, 2);
    for (int rep = 0; rep < 500; ++rep) {
        const double c = 0.5 + 5.0 * u(g);
        const double k = 0.1 + 20.0 * u(g);
        const Baseline b1 = compute_baseline(p, c);
        const Baseline b2 = compute_baseline(p, c * k);
        const double t = 2.0 * b1.expected_death_ticks * u(g);
        const bool has_death = u(g) < 0.6;
        const Observation o1 = has_death ? died(t) : alive(t);
        const Observation o2 = has_death ? died(t * k) : alive(t * k);
        EXPECT_EQ(detect(o1, b1).decision, detect(o2, b2).decision);
    }
}

TEST(Detect, TraceAndSummaryOverloads)
{
    SimulationTrace t;
    t.m_threshold = 4;
    t.per_tick.push_back({0, 0, 5, 0, 0, 0.0});
    t.per_tick.push_back({1, 4, 1, 0, 0, 0.0});
    t.network_death_tick = 1;
    EXPECT_EQ(detect(t, fixed_baseline(100.0)).decision, Decision::UnderAttack);

    const RunSummary censored = summarize_death_ticks({std::nullopt, std::nullopt}, 50);
    EXPECT_EQ(detect(censored, fixed_baseline(100.0)).decision, Decision::Inconclusive);
    EXPECT_EQ(detect(censored, fixed_baseline(40.0)).decision, Decision::Normal);
}

TEST(ExitCodes, Contract)
{
    EXPECT_EQ(exit_code(Decision::Normal), 0);
    EXPECT_EQ(exit_code(Decision::UnderAttack), 2);
    EXPECT_EQ(exit_code(Decision::Inconclusive), 3);
}

namespace {
struct OnlineRun {
    bool flagged_early = false;
    std::size_t windows = 0;
    std::size_t flagged = 0;
};

OnlineRun online_run(std::uint64_t seed, unsigned steps_per_tick, const NetworkChainParams& p, const Baseline& b)
{
    Rng rng(seed, 99);
    const auto view = simulate_chain_view(p.initial_dead, p.m_threshold, steps_per_tick, 100000, rng);
    OnlineOptions opts;
    opts.window = 100;
    opts.stride = 10;
    opts.min_events = 10;
    OnlineRun r;
    for (const WindowVerdict& w : online_estimate(view, p, b, 0.8, opts)) {
        if (w.verdict.decision == Decision::Inconclusive) continue;
        ++r.windows;
        if (w.verdict.decision == Decision::UnderAttack) {
            ++r.flagged;
            if (double(w.tick) < 0.6 * b.expected_death_ticks) r.flagged_early = true;
        }
    }
    return r;
}
} // namespace

TEST(OnlineEstimate, BaselineDynamicsStayNormal)
{
    const NetworkChainParams p = make_chain_params(25, 20, 10);
    const Baseline b = compute_baseline(p, 1.0);
    std::size_t windows = 0;
    std::size_t flagged = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const OnlineRun r = online_run(seed, 1, p, b);
        windows += r.windows;
        flagged += r.flagged;
    }
    ASSERT_GT(windows, 1000u);
    EXPECT_LT(double(flagged) / double(windows), 0.10) << flagged << " of " << windows;
}

TEST(OnlineEstimate, DoubledRateFlaggedEarly)
{
    const NetworkChainParams p = make_chain_params(25, 20, 10);
    const Baseline b = compute_baseline(p, 1.0);
    int early = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) early += online_run(seed, 2, p, b).flagged_early;
    EXPECT_GE(early, 190);
}

TEST(OnlineEstimate, ShortWindowIsInconclusive)
{
    const NetworkChainParams p = make_chain_params(25, 20, 10);
    const Baseline b = compute_baseline(p, 1.0);
    const std::vector<long> flat(30, 10);
    const auto out = online_estimate(flat, p, b, 0.8, {20, 10, 5});
    ASSERT_EQ(out.size(), 3u); // ticks 10, 20 and the last tick 29
    for (const auto& w : out) {
        EXPECT_EQ(w.verdict.decision, Decision::Inconclusive);
        EXPECT_NE(w.verdict.detail.find("WindowTooShort"), std::string::npos);
    }
    EXPECT_EQ(code_of([&] { online_estimate({}, p, b); }), ErrorCode::WindowTooShort);
}

TEST(OnlineEstimate, ObservedDeathUsesDeathTick)
{
    const NetworkChainParams p = make_chain_params(5, 4, 1);
    const Baseline b = fixed_baseline(1000.0);
    const std::vector<long> view{1, 2, 3, 4};
    const auto out = online_estimate(view, p, b, 0.8, {10, 1, 1});
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out.back().verdict.decision, Decision::UnderAttack);
    EXPECT_EQ(*out.back().verdict.observed_death_ticks, 3.0);
}
