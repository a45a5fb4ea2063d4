#include <gtest/gtest.h>

#include <random>

#include "mapfz/conflicts.hpp"
#include "oracles.hpp"

using namespace mapfz;

namespace {

TimedPlan plan(std::initializer_list<std::pair<VertexId, Time>> steps) {
    TimedPlan p;
    for (auto [v, t] : steps) p.steps.push_back({v, t});
    return p;
}

/// Random walk with random waits.
TimedPlan random_plan(std::mt19937_64& rng, const IntGraph& g, VertexId start, int moves) {
    TimedPlan p;
    p.steps.push_back({start, 0});
    std::uniform_int_distribution<int> coin(0, 2), wait(0, 2);
    VertexId at = start;
    Time t = 0;
    for (int i = 0; i < moves; ++i) {
        if (coin(rng) == 0) {
            t += 1;
            p.steps.push_back({at, t});
            continue;
        }
        const auto nbrs = g.neighbors(at);
        const auto& nb = nbrs[std::uniform_int_distribution<std::size_t>(0, nbrs.size() - 1)(rng)];
        t += g.edges()[nb.edge].w + wait(rng) * (coin(rng) == 0);
        at = nb.to;
        p.steps.push_back({at, t});
    }
    return p;
}

void expect_same(const std::vector<Conflict>& lib, const std::vector<oracle::OracleConflict>& ref,
                 const std::string& ctx) {
    ASSERT_EQ(lib.size(), ref.size()) << ctx;
    for (std::size_t i = 0; i < lib.size(); ++i) {
        const auto& a = lib[i];
        const auto& b = ref[i];
        EXPECT_EQ(a.first, b.i) << ctx;
        EXPECT_EQ(a.second, b.j) << ctx;
        EXPECT_EQ(a.time, b.t) << ctx;
        EXPECT_EQ(a.kind == ConflictKind::Edge, b.edge) << ctx;
        if (b.edge) {
            EXPECT_EQ((std::array<Time, 4>{a.first_move.from, a.first_move.to, a.first_move.depart,
                                           a.first_move.arrive}),
                      b.mi)
                << ctx;
            EXPECT_EQ((std::array<Time, 4>{a.second_move.from, a.second_move.to, a.second_move.depart,
                                           a.second_move.arrive}),
                      b.mj)
                << ctx;
        } else {
            EXPECT_EQ(a.vertex, b.v) << ctx;
        }
    }
}

// 0 - 1 - 2 - 3 with weights 1, 2, 3.
IntGraph chain() { return IntGraph({{0, 0, 0}, {1, 1, 0}, {2, 2, 0}, {3, 3, 0}}, {{0, 1, 1}, {1, 2, 2}, {2, 3, 3}}); }

}  // namespace

TEST(Conflicts, VertexConflictOnArrival) {
    const IntGraph g = chain();
    const std::vector<TimedPlan> plans{plan({{0, 0}, {1, 1}, {2, 3}}), plan({{3, 0}, {2, 3}})};
    const auto cs = detect_conflicts(g, plans, 3);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cs[0].kind, ConflictKind::Vertex);
    EXPECT_EQ(cs[0].vertex, 2);
    EXPECT_EQ(cs[0].time, 3);
}

TEST(Conflicts, SwapOverWeightTwoFromZero) {
    const IntGraph g = chain();
    const std::vector<TimedPlan> plans{plan({{1, 0}, {2, 2}}), plan({{2, 0}, {1, 2}})};
    const auto cs = detect_conflicts(g, plans, 2);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cs[0].kind, ConflictKind::Edge);
    EXPECT_EQ(cs[0].time, 0);
    EXPECT_EQ(cs[0].first_move.depart, 0);
    EXPECT_EQ(cs[0].second_move.depart, 0);
    EXPECT_TRUE(traversal_intervals_overlap(cs[0].first_move, cs[0].second_move));
}

TEST(Conflicts, UnitSwapIsCaught) {
    const IntGraph g = chain();
    const std::vector<TimedPlan> plans{plan({{0, 0}, {1, 1}}), plan({{1, 0}, {0, 1}})};
    const auto cs = detect_conflicts(g, plans, 1);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cs[0].kind, ConflictKind::Edge);
}

TEST(Conflicts, DepartOnArrivalIsVertexNotEdge) {
    // i crosses 1->2 over [0,2); j leaves 2 for 1 exactly at t=2.
    const IntGraph g = chain();
    const std::vector<TimedPlan> plans{plan({{1, 0}, {2, 2}, {3, 5}}), plan({{3, 0}, {2, 2}, {1, 4}})};
    const auto cs = detect_conflicts(g, plans, 5);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cs[0].kind, ConflictKind::Vertex);
    EXPECT_EQ(cs[0].vertex, 2);
    EXPECT_EQ(cs[0].time, 2);
    Traversal a{1, 2, 0, 2}, b{2, 1, 2, 4};
    EXPECT_FALSE(traversal_intervals_overlap(a, b));
    EXPECT_FALSE(traversal_intervals_overlap(b, a));
}

TEST(Conflicts, SameDirectionIsNotAConflict) {
    const IntGraph g = chain();
    const std::vector<TimedPlan> plans{plan({{1, 0}, {2, 2}, {3, 5}}), plan({{0, 0}, {1, 1}, {2, 3}})};
    EXPECT_TRUE(detect_conflicts(g, plans, 5).empty());
}

TEST(Conflicts, StayAtGoalIsOccupied) {
    const IntGraph g = chain();
    const std::vector<TimedPlan> plans{plan({{0, 0}, {1, 1}}), plan({{3, 0}, {2, 3}, {1, 5}})};
    const auto cs = detect_conflicts(g, plans, 5);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cs[0].vertex, 1);
    EXPECT_EQ(cs[0].time, 5);
}

TEST(Conflicts, OverlapPredicateCases) {
    EXPECT_TRUE(traversal_intervals_overlap({0, 1, 0, 2}, {1, 0, 0, 2}));
    EXPECT_TRUE(traversal_intervals_overlap({0, 1, 0, 3}, {1, 0, 1, 4}));
    EXPECT_TRUE(traversal_intervals_overlap({0, 1, 1, 4}, {1, 0, 0, 3}));
    EXPECT_FALSE(traversal_intervals_overlap({0, 1, 0, 3}, {1, 0, 3, 6}));
    EXPECT_FALSE(traversal_intervals_overlap({0, 1, 3, 6}, {1, 0, 0, 3}));
}

TEST(Conflicts, MatchesOccupancyOracle) {
    std::mt19937_64 rng(404);
    int edge = 0, vertex = 0, boundary = 0, same_start = 0;
    for (int trial = 0; trial < 1500; ++trial) {
        const int n = 2 + trial % 4;
        const IntGraph g = oracle::random_graph(rng, n, trial % 2, 3);
        std::uniform_int_distribution<int> vd(0, n - 1);
        std::vector<TimedPlan> plans;
        const int agents = 2 + (trial % 3 == 0);
        for (int a = 0; a < agents; ++a) plans.push_back(random_plan(rng, g, vd(rng), 1 + trial % 6));
        const Time t_max = makespan(plans);
        const auto lib = detect_conflicts(g, plans, t_max);
        const auto ref = oracle::occupancy_conflicts(g, plans, t_max);
        std::string ctx = "trial " + std::to_string(trial);
        for (const auto& p : plans) ctx += "\n  " + format_plan(p);
        expect_same(lib, ref, ctx);
        for (const auto& c : ref) (c.edge ? edge : vertex)++;
        // Boundary coverage: traversals where one departs as the other arrives,
        // or both depart together, on opposite directions of one edge.
        const auto a = traversals(g, plans[0]), b = traversals(g, plans[1]);
        for (const auto& x : a)
            for (const auto& y : b)
                if (x.from == y.to && x.to == y.from) {
                    boundary += y.depart == x.arrive;
                    same_start += y.depart == x.depart;
                }
    }
    EXPECT_GT(edge, 50);
    EXPECT_GT(vertex, 50);
    EXPECT_GT(boundary, 20);
    EXPECT_GT(same_start, 20);
}
