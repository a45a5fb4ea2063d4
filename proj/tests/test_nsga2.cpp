#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "mapfz/nsga2.hpp"

using namespace mapfz;

namespace {

/// Front ranks by repeated peeling with pairwise dominance checks.
std::vector<std::vector<std::size_t>> peel_fronts(const std::vector<Objectives>& pts) {
    const auto dom = [](const Objectives& a, const Objectives& b) {
        return a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2);
    };
    std::vector<bool> taken(pts.size(), false);
    std::vector<std::vector<std::size_t>> fronts;
    std::size_t left = pts.size();
    while (left > 0) {
        std::vector<std::size_t> front;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (taken[i]) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
                dominated = !taken[j] && j != i && dom(pts[j], pts[i]);
            if (!dominated) front.push_back(i);
        }
        for (auto i : front) taken[i] = true;
        left -= front.size();
        fronts.push_back(front);
    }
    return fronts;
}

}  // namespace

TEST(Dominance, Basics) {
    EXPECT_TRUE(dominates({1, 1}, {2, 2}));
    EXPECT_TRUE(dominates({1, 2}, {1, 3}));
    EXPECT_FALSE(dominates({1, 1}, {1, 1}));
    EXPECT_FALSE(dominates({1, 3}, {2, 2}));
}

TEST(Sorting, HandListedPoints) {
    const std::vector<Objectives> pts{{1, 5}, {2, 3}, {3, 1}, {2, 4}, {4, 4}, {5, 5}};
    const auto fronts = non_dominated_sort(pts);
    // (2,4) is beaten only by (2,3); (4,4) also by (2,4); (5,5) by everything.
    ASSERT_EQ(fronts.size(), 4u);
    EXPECT_EQ(fronts[0], (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(fronts[1], (std::vector<std::size_t>{3}));
    EXPECT_EQ(fronts[2], (std::vector<std::size_t>{4}));
    EXPECT_EQ(fronts[3], (std::vector<std::size_t>{5}));
}

TEST(Sorting, RandomSetsMatchPeeling) {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> coarse(0, 6);
    std::uniform_real_distribution<double> fine(0, 1);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 64;
        std::vector<Objectives> pts(n);
        for (auto& p : pts)
            p = trial % 2 ? Objectives{double(coarse(rng)), double(coarse(rng))} : Objectives{fine(rng), fine(rng)};
        EXPECT_EQ(non_dominated_sort(pts), peel_fronts(pts)) << "trial " << trial;
    }
}

TEST(Crowding, BoundariesAreInfinite) {
    const std::vector<Objectives> pts{{0, 4}, {1, 2}, {2, 1}, {4, 0}};
    const std::vector<std::size_t> front{0, 1, 2, 3};
    const auto d = crowding_distance(pts, front);
    EXPECT_TRUE(std::isinf(d[0]));
    EXPECT_TRUE(std::isinf(d[3]));
    // Interior: normalized neighbor gaps summed over both objectives.
    EXPECT_NEAR(d[1], (2.0 - 0.0) / 4 + (4.0 - 1.0) / 4, 1e-12);
    EXPECT_NEAR(d[2], (4.0 - 1.0) / 4 + (2.0 - 0.0) / 4, 1e-12);
}

TEST(Archive, StaysNonDominated) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    ParetoArchive archive;
    std::vector<Objectives> all;
    for (int i = 0; i < 500; ++i) {
        const Objectives o{u(rng), u(rng)};
        all.push_back(o);
        archive.insert({double(i), o});
        for (const auto& a : archive.points())
            for (const auto& b : archive.points()) EXPECT_FALSE(dominates(a.obj, b.obj));
    }
    const auto fronts = peel_fronts(all);
    EXPECT_EQ(archive.size(), fronts[0].size());
    EXPECT_FALSE(archive.insert({0, {2, 2}}));
}

TEST(Evolve, ConflictingObjectivesSpanTheRange) {
    Nsga2Config cfg;
    cfg.seed = 7;
    const auto front = nsga2_evolve({}, [](double s) { return Objectives{s, 1 - s}; }, cfg);
    double lo = 1, hi = 0;
    for (const auto& p : front.points()) {
        lo = std::min(lo, p.s);
        hi = std::max(hi, p.s);
    }
    EXPECT_GE(hi - lo, 0.8);
}

TEST(Evolve, SingleOptimumIsFound) {
    Nsga2Config cfg;
    cfg.seed = 9;
    const auto front = nsga2_evolve({}, [](double s) { return Objectives{(s - 0.5) * (s - 0.5), 0.0}; }, cfg);
    ASSERT_FALSE(front.empty());
    for (const auto& p : front.points()) EXPECT_NEAR(p.s, 0.5, 0.05);
}

TEST(Evolve, StaysInBounds) {
    Nsga2Config cfg;
    cfg.lower = 0.5;
    cfg.upper = 2.0;
    cfg.seed = 2;
    const auto front = nsga2_evolve({0.1, 5.0}, [](double s) { return Objectives{s, -s}; }, cfg);
    for (const auto& p : front.points()) {
        EXPECT_GE(p.s, 0.5);
        EXPECT_LE(p.s, 2.0);
    }
}

TEST(Evolve, DeterministicPerSeed) {
    Nsga2Config cfg;
    cfg.seed = 11;
    const auto f = [](double s) { return Objectives{s * s, (s - 1) * (s - 1)}; };
    const auto a = nsga2_evolve({}, f, cfg), b = nsga2_evolve({}, f, cfg);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.points()[i].s, b.points()[i].s);
}

TEST(Evolve, RejectsOddPopulation) {
    Nsga2Config cfg;
    cfg.population = 5;
    EXPECT_THROW((void)nsga2_evolve({}, [](double s) { return Objectives{s, s}; }, cfg), std::invalid_argument);
}
