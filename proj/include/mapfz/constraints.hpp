#pragma once

#include <string>
#include <vector>

#include "mapfz/graph.hpp"

namespace mapfz {

/// Agent must not be at `vertex` at timestep `time`.
struct VertexConstraint {
    AgentId agent = 0;
    VertexId vertex = 0;
    Time time = 0;
    friend auto operator<=>(const VertexConstraint&, const VertexConstraint&) = default;
};

/// Agent must not traverse the directed edge from -> to so that its occupancy
/// (depart, depart + w) meets the open interval (lo, hi).
struct EdgeConstraint {
    AgentId agent = 0;
    VertexId from = 0;
    VertexId to = 0;
    Time lo = 0;
    Time hi = 0;
    friend auto operator<=>(const EdgeConstraint&, const EdgeConstraint&) = default;
};

/// Agent must be at `vertex` at timestep `time`; every other agent must not.
struct PositiveConstraint {
    AgentId agent = 0;
    VertexId vertex = 0;
    Time time = 0;
    friend auto operator<=>(const PositiveConstraint&, const PositiveConstraint&) = default;
};

struct ConstraintSet {
    std::vector<VertexConstraint> neg_vertex;
    std::vector<EdgeConstraint> neg_edge;
    std::vector<PositiveConstraint> pos_vertex;

    [[nodiscard]] bool empty() const { return neg_vertex.empty() && neg_edge.empty() && pos_vertex.empty(); }
    [[nodiscard]] std::size_t size() const { return neg_vertex.size() + neg_edge.size() + pos_vertex.size(); }
    void append(const ConstraintSet& other);

    /// Agents whose plans the constraints in this set restrict directly.
    [[nodiscard]] std::vector<AgentId> constrained_agents() const;

    friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;
};

[[nodiscard]] std::string describe(const ConstraintSet& c);

}  // namespace mapfz
