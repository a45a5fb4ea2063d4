#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mapfz/graph.hpp"

namespace mapfz {

inline constexpr Time kInfiniteTime = std::numeric_limits<Time>::max();

struct PlanStep {
    VertexId vertex = 0;
    Time arrival = 0;

    friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

/// A timed path. Consecutive equal vertices are waits; a vertex change is a
/// traversal that ends at the recorded arrival time and lasts exactly the
/// edge weight (any extra gap is spent waiting before departure).
struct TimedPlan {
    std::vector<PlanStep> steps;

    [[nodiscard]] bool empty() const { return steps.empty(); }
    [[nodiscard]] Time cost() const { return steps.empty() ? 0 : steps.back().arrival; }
    [[nodiscard]] VertexId start() const { return steps.front().vertex; }
    [[nodiscard]] VertexId end() const { return steps.back().vertex; }

    friend bool operator==(const TimedPlan&, const TimedPlan&) = default;
};

/// One edge traversal inside a plan: departs `from` at `depart`, reaches `to`
/// at `arrive`. The edge is in use over [depart, arrive).
struct Traversal {
    VertexId from = 0;
    VertexId to = 0;
    Time depart = 0;
    Time arrive = 0;
};

/// Traversals of `plan`, in time order. `weight_of(u, v)` gives the duration.
template <typename WeightFn>
std::vector<Traversal> traversals(const TimedPlan& plan, WeightFn&& weight_of) {
    std::vector<Traversal> out;
    for (std::size_t k = 1; k < plan.steps.size(); ++k) {
        const auto& a = plan.steps[k - 1];
        const auto& b = plan.steps[k];
        if (a.vertex == b.vertex) continue;
        const Time w = weight_of(a.vertex, b.vertex);
        out.push_back({a.vertex, b.vertex, b.arrival - w, b.arrival});
    }
    return out;
}

[[nodiscard]] std::vector<Traversal> traversals(const IntGraph& g, const TimedPlan& plan);

/// Vertex occupied at timestep t, or nullopt while the agent is inside an
/// edge. Before time 0 nothing is occupied; after the last step the agent
/// stays at its final vertex.
[[nodiscard]] std::optional<VertexId> position_at(const IntGraph& g, const TimedPlan& plan, Time t);

[[nodiscard]] Time makespan(const std::vector<TimedPlan>& plans);
[[nodiscard]] long long sum_of_costs(const std::vector<TimedPlan>& plans);

/// `(v0,t0) (v1,t1) ...`
[[nodiscard]] std::string format_plan(const TimedPlan& plan);

}  // namespace mapfz
