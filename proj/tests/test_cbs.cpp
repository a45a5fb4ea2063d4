#include <gtest/gtest.h>

#include <random>

#include "mapfz/cbs.hpp"
#include "oracles.hpp"

using namespace mapfz;

namespace {

IntGraph chain(const std::vector<int>& ws) {
    std::vector<Vertex> vs;
    std::vector<Edge<int>> es;
    for (std::size_t i = 0; i <= ws.size(); ++i) vs.push_back({static_cast<VertexId>(i), double(i), 0});
    for (std::size_t i = 0; i < ws.size(); ++i)
        es.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1), ws[i]});
    return {vs, es};
}

// Corridor 0-1-2-3-4 with a side pocket 5 hanging off 2.
IntGraph corridor_with_pocket() {
    return IntGraph({{0, 0, 0}, {1, 1, 0}, {2, 2, 0}, {3, 3, 0}, {4, 4, 0}, {5, 2, 1}},
                    {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {2, 5, 1}});
}

Solution expect_solved(const SolveResult& r) {
    EXPECT_TRUE(std::holds_alternative<Solution>(r));
    return std::get<Solution>(r);
}

CTNode root_node(const IntGraph& g, const Instance& inst, LowLevel& low) {
    CTNode n;
    for (AgentId a = 0; a < inst.num_agents(); ++a) n.plans.push_back(*low.plan(a, {}));
    n.cost = makespan(n.plans);
    n.sum_of_costs = sum_of_costs(n.plans);
    n.conflicts = detect_conflicts(g, n.plans, n.cost);
    return n;
}

/// Makespan of a branch when every agent is replanned from scratch under the
/// node's constraints plus the branch's.
std::optional<Time> branch_cost_from_scratch(const IntGraph& g, const Instance& inst, const ConstraintSet& c,
                                             Time horizon) {
    Time cost = 0;
    for (AgentId a = 0; a < inst.num_agents(); ++a) {
        const auto p = sipp_plan(g, inst.starts[a], inst.goals[a], c, a, horizon);
        if (!p) return std::nullopt;
        cost = std::max(cost, p->cost());
    }
    return cost;
}

}  // namespace

TEST(Branching, DisjointVertexSplit) {
    Conflict c;
    c.first = 1;
    c.second = 3;
    c.vertex = 7;
    c.time = 4;
    const auto b = make_branch_constraints(c, Splitting::Disjoint);
    ASSERT_EQ(b[0].pos_vertex.size(), 1u);
    EXPECT_EQ(b[0].pos_vertex[0], (PositiveConstraint{1, 7, 4}));
    ASSERT_EQ(b[1].neg_vertex.size(), 1u);
    EXPECT_EQ(b[1].neg_vertex[0], (VertexConstraint{1, 7, 4}));
}

TEST(Branching, NonDisjointVertexSplit) {
    Conflict c;
    c.first = 0;
    c.second = 2;
    c.vertex = 5;
    c.time = 3;
    const auto b = make_branch_constraints(c, Splitting::NonDisjoint);
    EXPECT_EQ(b[0].neg_vertex, (std::vector<VertexConstraint>{{0, 5, 3}}));
    EXPECT_EQ(b[1].neg_vertex, (std::vector<VertexConstraint>{{2, 5, 3}}));
    EXPECT_TRUE(b[0].pos_vertex.empty() && b[1].pos_vertex.empty());
}

TEST(Branching, EdgeConflictGivesIntervalConstraints) {
    Conflict c;
    c.kind = ConflictKind::Edge;
    c.first = 0;
    c.second = 1;
    c.first_move = {4, 5, 2, 4};
    c.second_move = {5, 4, 3, 5};
    for (auto mode : {Splitting::Disjoint, Splitting::NonDisjoint}) {
        const auto b = make_branch_constraints(c, mode);
        EXPECT_EQ(b[0].neg_edge, (std::vector<EdgeConstraint>{{0, 4, 5, 3, 5}}));
        EXPECT_EQ(b[1].neg_edge, (std::vector<EdgeConstraint>{{1, 5, 4, 2, 4}}));
    }
}

TEST(Branching, EdgeConstraintBlocksExactlyTheConflictingDepartures) {
    // With the other agent's traversal fixed, the constrained agent's
    // departures that are still allowed are exactly the conflict-free ones.
    const IntGraph g = chain({3});
    for (Time dj = 0; dj <= 6; ++dj) {
        Conflict c;
        c.kind = ConflictKind::Edge;
        c.first = 0;
        c.second = 1;
        c.first_move = {0, 1, dj, dj + 3};
        c.second_move = {1, 0, dj, dj + 3};
        const auto table = build_safe_intervals(make_branch_constraints(c, Splitting::Disjoint)[0], 0);
        for (Time d = 0; d <= 12; ++d) {
            const Traversal mine{0, 1, d, d + 3}, theirs{1, 0, dj, dj + 3};
            const bool conflict =
                traversal_intervals_overlap(mine, theirs) || traversal_intervals_overlap(theirs, mine);
            EXPECT_EQ(table.departure_allowed(0, 1, 3, d), !conflict) << "dj=" << dj << " d=" << d;
        }
    }
}

TEST(Cbs, SingleAgentIsShortestPath) {
    const IntGraph g = chain({2, 3, 1});
    const Instance inst{{0}, {3}};
    const auto sol = expect_solved(solve(g, inst));
    EXPECT_EQ(sol.makespan, 6);
    EXPECT_EQ(format_plan(sol.plans[0]), "(0,0) (1,2) (2,5) (3,6)");
    EXPECT_EQ(sol.stats.nodes_expanded, 0u);
}

TEST(Cbs, CorridorWithPocketMatchesJointOptimum) {
    const IntGraph g = corridor_with_pocket();
    const Instance inst{{0, 4}, {4, 0}};
    const auto sol = expect_solved(solve(g, inst));
    EXPECT_TRUE(validate_solution(g, inst, sol.plans).empty());
    EXPECT_EQ(sol.makespan, *oracle::joint_optimal_makespan(g, inst, 20));
    EXPECT_EQ(sol.stats.cost_decreases, 0u);
}

TEST(Cbs, UnsolvableSwapIsExhausted) {
    const IntGraph g = chain({1, 1});
    const Instance inst{{0, 2}, {2, 0}};
    const auto r = solve(g, inst);
    ASSERT_TRUE(std::holds_alternative<Failure>(r));
    EXPECT_EQ(std::get<Failure>(r).reason, FailureReason::Exhausted);
    EXPECT_FALSE(oracle::joint_optimal_makespan(g, inst, 30).has_value());
}

TEST(Cbs, ZeroTimeoutReportsTimeout) {
    const IntGraph g = corridor_with_pocket();
    CbsConfig cfg;
    cfg.timeout_s = 0.0;
    const auto r = solve(g, Instance{{0, 4}, {4, 0}}, cfg);
    ASSERT_TRUE(std::holds_alternative<Failure>(r));
    EXPECT_EQ(std::get<Failure>(r).reason, FailureReason::Timeout);
}

TEST(Cbs, RandomInstancesMatchJointOptimum) {
    std::mt19937_64 rng(77);
    int solved = 0;
    for (int trial = 0; trial < 220; ++trial) {
        const int n = 4 + trial % 4;
        const IntGraph g = oracle::random_graph(rng, n, 1 + trial % 3, 2);
        const Instance inst = oracle::random_instance(rng, n, 2 + trial % 2);
        const Time horizon = default_horizon(g, inst);
        const auto ref = oracle::joint_optimal_makespan(g, inst, horizon);
        CbsConfig cfg;
        cfg.splitting = trial % 2 ? Splitting::Disjoint : Splitting::NonDisjoint;
        const auto r = solve(g, inst, cfg);
        if (!ref) {
            EXPECT_TRUE(std::holds_alternative<Failure>(r)) << "trial " << trial;
            continue;
        }
        ASSERT_TRUE(std::holds_alternative<Solution>(r)) << "trial " << trial;
        const auto& sol = std::get<Solution>(r);
        EXPECT_EQ(sol.makespan, *ref) << "trial " << trial << "\n" << format_solution(sol.plans);
        EXPECT_TRUE(validate_solution(g, inst, sol.plans).empty()) << "trial " << trial;
        EXPECT_EQ(sol.stats.cost_decreases, 0u);
        ++solved;
    }
    EXPECT_GT(solved, 150);
}

TEST(Cbs, SplittingAndPrioritizationAgreeOnMakespan) {
    std::mt19937_64 rng(88);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 8;
        const IntGraph g = oracle::random_graph(rng, n, 3, 3);
        const Instance inst = oracle::random_instance(rng, n, 3);
        std::optional<Time> first;
        for (auto mode : {Splitting::Disjoint, Splitting::NonDisjoint})
            for (bool pc : {true, false}) {
                CbsConfig cfg;
                cfg.splitting = mode;
                cfg.prioritize_conflicts = pc;
                const auto r = solve(g, inst, cfg);
                const std::optional<Time> got =
                    std::holds_alternative<Solution>(r) ? std::optional(std::get<Solution>(r).makespan) : std::nullopt;
                if (!first.has_value() && mode == Splitting::Disjoint && pc)
                    first = got.value_or(-1);
                else
                    EXPECT_EQ(got.value_or(-1), *first) << "trial " << trial;
            }
    }
}

TEST(Cbs, ConflictClassificationMatchesRecomputedChildren) {
    std::mt19937_64 rng(99);
    int checked = 0;
    for (int trial = 0; trial < 300 && checked < 120; ++trial) {
        const int n = 6 + trial % 4;
        const IntGraph g = oracle::random_graph(rng, n, 2, 2);
        const Instance inst = oracle::random_instance(rng, n, 3);
        const Time horizon = default_horizon(g, inst);
        LowLevel low(g, inst, horizon);
        const CTNode root = root_node(g, inst, low);
        for (const auto& c : root.conflicts) {
            for (auto mode : {Splitting::Disjoint, Splitting::NonDisjoint}) {
                const ConflictNode cn = classify_pc(root, c, mode, low);
                const auto bundles = make_branch_constraints(c, mode);
                int increased = 0;
                for (int b = 0; b < 2; ++b) {
                    const auto ref = branch_cost_from_scratch(g, inst, bundles[b], horizon);
                    const Time lib = cn.branches[b].cost;
                    EXPECT_EQ(lib, ref.value_or(kInfiniteTime)) << "trial " << trial << " branch " << b;
                    increased += !ref || *ref > root.cost;
                }
                const PcClass expected =
                    increased == 2 ? PcClass::Cardinal : increased == 1 ? PcClass::SemiCardinal : PcClass::NonCardinal;
                EXPECT_EQ(cn.pc, expected) << "trial " << trial;
                ++checked;
            }
        }
    }
    EXPECT_GE(checked, 100);
}

TEST(Validation, SwapIsOneEdgeConflict) {
    const IntGraph g = chain({1, 1, 1});
    const Instance inst{{1, 2}, {2, 1}};
    TimedPlan a, b;
    a.steps = {{1, 0}, {2, 1}};
    b.steps = {{2, 0}, {1, 1}};
    const auto v = validate_solution(g, inst, {a, b});
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].kind, Violation::Kind::EdgeConflict);
}

TEST(Validation, EarlyArrivalIsTiming) {
    const IntGraph g = chain({3});
    const Instance inst{{0}, {1}};
    TimedPlan a;
    a.steps = {{0, 0}, {1, 2}};
    const auto v = validate_solution(g, inst, {a});
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v[0].kind, Violation::Kind::Timing);
}

TEST(Validation, WrongEndpointsAndMissingEdge) {
    const IntGraph g = chain({1, 1});
    const Instance inst{{0}, {2}};
    TimedPlan a;
    a.steps = {{0, 0}, {1, 1}};
    EXPECT_EQ(validate_solution(g, inst, {a})[0].kind, Violation::Kind::Endpoint);
    a.steps = {{0, 0}, {2, 1}};
    EXPECT_EQ(validate_solution(g, inst, {a})[0].kind, Violation::Kind::Structure);
    EXPECT_EQ(validate_solution(g, inst, {})[0].kind, Violation::Kind::Structure);
}

TEST(Serialization, SolutionRoundTrip) {
    const IntGraph g = corridor_with_pocket();
    const auto sol = expect_solved(solve(g, Instance{{0, 4}, {4, 0}}));
    const std::string text = format_solution(sol.plans);
    EXPECT_EQ(parse_solution(text), sol.plans);
    EXPECT_EQ(text.rfind("agent 0: (0,0)", 0), 0u);
    EXPECT_THROW((void)parse_solution("agent 1: (0,0)\n"), ParseError);
}
