#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mapfz/bogd.hpp"
#include "mapfz/discretization.hpp"

using namespace mapfz;

namespace {

BogdConfig synthetic_config(std::uint64_t seed) {
    BogdConfig cfg;
    cfg.s_min = 0.1;
    cfg.s_max = 2.0;
    cfg.budget = 25;
    cfg.population = 20;
    cfg.seed = seed;
    return cfg;
}

EvalResult bowl(double s) { return {(s - 0.3) * (s - 0.3) + 0.01, 0.0, true, {}}; }

}  // namespace

TEST(Scores, MinMaxColumns) {
    const std::vector<double> l{1, 3, 2}, c{10, 10, 10};
    EXPECT_EQ(normalized_scores(l, c), (std::vector<double>{0.0, 1.0, 0.5}));
    const std::vector<double> l2{0, 1}, c2{4, 2};
    EXPECT_EQ(normalized_scores(l2, c2), (std::vector<double>{1.0, 1.0}));
    EXPECT_TRUE(normalized_scores({}, {}).empty());
}

TEST(Bogd, DegenerateRangeEvaluatesOnce) {
    BogdConfig cfg;
    cfg.s_min = cfg.s_max = 1.0;
    int calls = 0;
    const auto r = bogd_run(
        [&](double s) {
            ++calls;
            EXPECT_EQ(s, 1.0);
            return EvalResult{0.2, 0.0, true, {}};
        },
        {1.0}, cfg);
    EXPECT_EQ(calls, 1);
    ASSERT_TRUE(r.best_s);
    EXPECT_EQ(*r.best_s, 1.0);
}

TEST(Bogd, FindsBowlMinimum) {
    const auto r = bogd_run(bowl, {}, synthetic_config(1));
    ASSERT_EQ(r.observations.size(), 25u);
    ASSERT_TRUE(r.best_s);
    EXPECT_NEAR(*r.best_s, 0.3, 0.05);
    for (const auto& o : r.observations) {
        EXPECT_GE(o.s, 0.1);
        EXPECT_LE(o.s, 2.0);
    }
}

TEST(Bogd, InitialDesignIsLogSpaced) {
    const auto r = bogd_run(bowl, {}, synthetic_config(2));
    EXPECT_NEAR(r.observations[0].s, std::exp(std::log(0.1) + std::log(20.0) / 3), 1e-12);
    EXPECT_NEAR(r.observations[1].s, std::exp(std::log(0.1) + 2 * std::log(20.0) / 3), 1e-12);
    EXPECT_TRUE(std::isnan(r.observations[0].lcb));
    EXPECT_FALSE(std::isnan(r.observations[2].lcb));
}

TEST(Bogd, DeterministicPerSeed) {
    const auto a = bogd_run(bowl, {}, synthetic_config(5));
    const auto b = bogd_run(bowl, {}, synthetic_config(5));
    ASSERT_EQ(a.observations.size(), b.observations.size());
    for (std::size_t i = 0; i < a.observations.size(); ++i) EXPECT_EQ(a.observations[i].s, b.observations[i].s);
    EXPECT_EQ(format_tuning_report(a), format_tuning_report(b));
}

TEST(Bogd, FailedEvaluationsNeverWin) {
    // Runs below s = 0.8 "time out" with a small recorded runtime.
    auto eval = [](double s) {
        if (s < 0.8) return EvalResult{0.001, 0.0, false, {}};
        return EvalResult{s, 0.0, true, {}};
    };
    const auto r = bogd_run(eval, {}, synthetic_config(3));
    ASSERT_TRUE(r.best_s);
    EXPECT_GE(*r.best_s, 0.8);
    for (const auto& p : r.pareto.points()) EXPECT_GE(p.s, 0.8);
}

TEST(Bogd, NoSuccessMeansNoBest) {
    BogdConfig cfg = synthetic_config(4);
    cfg.budget = 4;
    const auto r = bogd_run([](double) { return EvalResult{1.0, 0.0, false, {}}; }, {}, cfg);
    EXPECT_FALSE(r.best_s);
    EXPECT_NE(format_tuning_report(r).find("best_s=none"), std::string::npos);
}

TEST(Bogd, MissingErrorUsesIncumbentWeights) {
    BogdConfig cfg = synthetic_config(6);
    cfg.budget = 3;
    const std::vector<double> weights{1.0, 1.41421356, 2.5};
    const auto r = bogd_run([](double s) { return EvalResult{s, std::nan(""), true, {}}; }, weights, cfg);
    for (const auto& o : r.observations) {
        double direct = 0;
        for (double w : weights) direct += std::abs(o.s * std::round(w / o.s) - w);
        EXPECT_NEAR(o.error, direct, 1e-9);
    }
}

TEST(Bogd, RegretTraceIsCumulative) {
    const auto r = bogd_run(bowl, {}, synthetic_config(7));
    ASSERT_EQ(r.regret_trace.size(), r.observations.size());
    double best = 1e300;
    for (const auto& o : r.observations) best = std::min(best, o.runtime);
    double acc = 0;
    for (std::size_t i = 0; i < r.observations.size(); ++i) {
        acc += r.observations[i].runtime - best;
        EXPECT_NEAR(r.regret_trace[i].runtime, acc, 1e-12);
        if (i > 0) EXPECT_GE(r.regret_trace[i].runtime, r.regret_trace[i - 1].runtime);
    }
}

TEST(Bogd, RejectsBadConfig) {
    BogdConfig cfg;
    cfg.s_min = 0;
    EXPECT_THROW((void)bogd_run(bowl, {}, cfg), std::invalid_argument);
    cfg = {};
    cfg.s_min = 3;
    EXPECT_THROW((void)bogd_run(bowl, {}, cfg), std::invalid_argument);
    cfg = {};
    cfg.population = 7;
    EXPECT_THROW((void)bogd_run(bowl, {}, cfg), std::invalid_argument);
}

TEST(Bogd, ReportLayout) {
    BogdConfig cfg = synthetic_config(8);
    cfg.budget = 3;
    const std::string text = format_tuning_report(bogd_run(bowl, {}, cfg));
    EXPECT_EQ(text.rfind("t,s,runtime_s,error,success,lcb,score\n1,", 0), 0u);
    EXPECT_NE(text.find("\n# summary\nbest_s="), std::string::npos);
    EXPECT_NE(text.find("# pareto s,runtime_s,error\n"), std::string::npos);
}

TEST(Bogd, SolverBackedRunOnSmallGraph) {
    const RealGraph g({{0, 0, 0}, {1, 1, 0}, {2, 2, 0}, {3, 1, 1}},
                      {{0, 1, 1.0}, {1, 2, 1.0}, {1, 3, 1.41421356}, {0, 3, 1.41421356}});
    const Instance inst{{0, 2}, {2, 0}};
    BogdConfig cfg;
    cfg.budget = 4;
    cfg.eval_timeout_s = 2;
    const auto r = bogd_run(g, inst, cfg);
    ASSERT_EQ(r.observations.size(), 4u);
    ASSERT_TRUE(r.best_s);
    for (const auto& o : r.observations)
        if (o.success) EXPECT_LT(o.runtime, 2.0);
    const auto base = shortest_path_weights(g, inst);
    EXPECT_EQ(base.size(), 4u);
}
