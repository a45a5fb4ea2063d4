#pragma once

#include <span>
#include <string>
#include <vector>

#include "mapfz/graph.hpp"
#include "mapfz/plan.hpp"

namespace mapfz {

enum class ConflictKind { Vertex, Edge };

/// First conflict between agents `first` < `second`.
///
/// Occupancy model: a traversal departing u at d and arriving at v at a
/// occupies u at step d, the edge (u, v) over [d, a) and v at step a. Waits
/// occupy their vertex, and after its last step an agent stays at its goal.
/// Vertex kind: both agents occupy `vertex` at `time`. Edge kind: `first_move`
/// and `second_move` cross the same edge in opposite directions and their
/// intervals overlap; `time` is the first step at which both are in use.
struct Conflict {
    ConflictKind kind = ConflictKind::Vertex;
    AgentId first = 0;
    AgentId second = 0;
    Time time = 0;
    VertexId vertex = -1;
    Traversal first_move{};
    Traversal second_move{};
};

/// True iff the two traversals overlap in the sense used for edge conflicts:
/// t_i < t_j^e <= t_i^e  or  t_i <= t_j < t_i^e.
[[nodiscard]] bool traversal_intervals_overlap(const Traversal& mine, const Traversal& theirs);

/// Scans timesteps 0..t_max for every agent pair and reports at most one
/// conflict per pair: the earliest, with a vertex conflict preferred over an
/// edge conflict at the same step. Results are ordered by agent pair.
[[nodiscard]] std::vector<Conflict> detect_conflicts(const IntGraph& g, std::span<const TimedPlan> plans,
                                                     Time t_max);

[[nodiscard]] std::string describe(const Conflict& c);

}  // namespace mapfz
