#pragma once

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "mapfz/constraints.hpp"
#include "mapfz/graph.hpp"
#include "mapfz/plan.hpp"

namespace mapfz {

/// Timesteps t with lo <= t < hi. hi == kInfiniteTime means unbounded.
struct SafeInterval {
    Time lo = 0;
    Time hi = kInfiniteTime;
    friend bool operator==(const SafeInterval&, const SafeInterval&) = default;
};

/// Safe intervals and edge restrictions seen by one agent.
class SafeIntervalTable {
public:
    [[nodiscard]] std::span<const SafeInterval> intervals(VertexId v) const;

    /// Index of the interval of `v` containing t, if t is safe.
    [[nodiscard]] std::optional<int> interval_index(VertexId v, Time t) const;

    [[nodiscard]] bool departure_allowed(VertexId from, VertexId to, int weight, Time depart) const;

    /// Earliest permitted departure in [earliest, latest], if any.
    [[nodiscard]] std::optional<Time> earliest_departure(VertexId from, VertexId to, int weight,
                                                         Time earliest, Time latest) const;

    /// Mandatory (vertex, time) waypoints of this agent, sorted by time.
    [[nodiscard]] const std::vector<std::pair<VertexId, Time>>& waypoints() const { return waypoints_; }

    /// Forbidden open intervals on a directed edge, sorted.
    [[nodiscard]] std::span<const std::pair<Time, Time>> edge_blocks(VertexId from, VertexId to) const;

    [[nodiscard]] bool has_vertex_restrictions() const { return !vertex_.empty(); }

private:
    friend SafeIntervalTable build_safe_intervals(const ConstraintSet&, AgentId);
    static std::uint64_t edge_key(VertexId from, VertexId to) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from)) << 32) |
               static_cast<std::uint32_t>(to);
    }

    std::unordered_map<VertexId, std::vector<SafeInterval>> vertex_;
    std::unordered_map<std::uint64_t, std::vector<std::pair<Time, Time>>> edge_;
    std::vector<std::pair<VertexId, Time>> waypoints_;
};

/// Applies the agent's own negative constraints, its positive constraints as
/// waypoints, and every other agent's positive constraint as a negative
/// vertex constraint on this agent.
[[nodiscard]] SafeIntervalTable build_safe_intervals(const ConstraintSet& constraints, AgentId agent);

/// Exact shortest-path distances to one target, ignoring constraints.
class DistanceTable {
public:
    DistanceTable() = default;
    DistanceTable(const IntGraph& g, VertexId target);
    [[nodiscard]] Time operator[](VertexId v) const { return dist_[v]; }
    [[nodiscard]] VertexId target() const { return target_; }
    [[nodiscard]] bool reachable(VertexId v) const { return dist_[v] != kInfiniteTime; }

private:
    VertexId target_ = -1;
    std::vector<Time> dist_;
};

struct SippQuery {
    VertexId start = 0;
    VertexId goal = 0;
    AgentId agent = 0;
    Time horizon = 0;
    const DistanceTable* goal_distances = nullptr;  // optional cache; must target `goal`
};

/// Earliest-arrival plan to the goal that respects every constraint and can
/// stay at the goal forever afterwards. nullopt when nothing reaches the goal
/// by the horizon.
[[nodiscard]] std::optional<TimedPlan> sipp_plan(const IntGraph& g, const SippQuery& query,
                                                 const SafeIntervalTable& table);

[[nodiscard]] std::optional<TimedPlan> sipp_plan(const IntGraph& g, VertexId start, VertexId goal,
                                                 const ConstraintSet& constraints, AgentId agent, Time horizon);

/// Occupancy replay of one plan against a constraint set. Returns
/// human-readable violations; empty means the plan respects every
/// constraint that applies to `agent`.
[[nodiscard]] std::vector<std::string> constraint_violations(const IntGraph& g, const TimedPlan& plan,
                                                             const ConstraintSet& constraints, AgentId agent);

}  // namespace mapfz
