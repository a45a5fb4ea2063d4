#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mapfz/conflicts.hpp"
#include "mapfz/constraints.hpp"
#include "mapfz/graph.hpp"
#include "mapfz/map_io.hpp"
#include "mapfz/plan.hpp"
#include "mapfz/sipp.hpp"

namespace mapfz {

/// How vertex conflicts are split. Edge conflicts always get two negative
/// interval constraints.
enum class Splitting { Disjoint, NonDisjoint };

enum class PcClass { Cardinal = 0, SemiCardinal = 1, NonCardinal = 2 };

struct CbsConfig {
    Splitting splitting = Splitting::Disjoint;
    bool prioritize_conflicts = true;
    /// Classify only this many earliest conflicts per node; 0 classifies all.
    int lazy_pc = 8;
    double timeout_s = 30.0;
    /// Low-level horizon; computed from the instance when absent.
    std::optional<Time> horizon;
};

struct SolveStats {
    std::uint64_t nodes_generated = 0;
    std::uint64_t nodes_expanded = 0;
    std::uint64_t low_level_calls = 0;
    std::uint64_t cost_decreases = 0;  // children cheaper than their parent; must stay 0
    Time horizon = 0;
    double wall_time_s = 0.0;
};

struct Solution {
    std::vector<TimedPlan> plans;
    Time makespan = 0;
    SolveStats stats;
};

enum class FailureReason { Timeout, Exhausted };

struct Failure {
    FailureReason reason = FailureReason::Exhausted;
    SolveStats stats;
};

using SolveResult = std::variant<Solution, Failure>;

/// Two alternative constraint bundles for one conflict.
[[nodiscard]] std::array<ConstraintSet, 2> make_branch_constraints(const Conflict& c, Splitting mode);

/// One child of a split: its constraints, the replanned agents and the
/// resulting node cost (kInfiniteTime when some replanning failed).
struct Branch {
    ConstraintSet added;
    std::vector<std::pair<AgentId, TimedPlan>> replanned;
    Time cost = kInfiniteTime;
    long long sum_of_costs = 0;
};

struct ConflictNode {
    Conflict conflict;
    std::array<Branch, 2> branches;
    PcClass pc = PcClass::NonCardinal;
};

struct CTNode {
    std::shared_ptr<const CTNode> parent;
    ConstraintSet constraints;
    std::vector<TimedPlan> plans;
    Time cost = 0;
    long long sum_of_costs = 0;
    std::vector<Conflict> conflicts;
    std::uint64_t id = 0;
};

/// Low-level planning context shared by one solve call: the graph, the
/// instance, cached goal distances and call counters.
class LowLevel {
public:
    LowLevel(const IntGraph& g, const Instance& inst, Time horizon);

    [[nodiscard]] std::optional<TimedPlan> plan(AgentId agent, const ConstraintSet& constraints);
    [[nodiscard]] const IntGraph& graph() const { return *graph_; }
    [[nodiscard]] const Instance& instance() const { return *instance_; }
    [[nodiscard]] Time horizon() const { return horizon_; }
    [[nodiscard]] std::uint64_t calls() const { return calls_; }

private:
    const IntGraph* graph_;
    const Instance* instance_;
    Time horizon_;
    std::vector<DistanceTable> goal_distances_;
    std::uint64_t calls_ = 0;
};

/// Default low-level horizon: 2 * (max individual shortest-path cost) +
/// agents * (max edge weight).
[[nodiscard]] Time default_horizon(const IntGraph& g, const Instance& inst);

/// Replans each branch of `c` on top of `parent` and classifies the conflict
/// by comparing branch costs to the parent's makespan.
[[nodiscard]] ConflictNode classify_pc(const CTNode& parent, const Conflict& c, Splitting mode, LowLevel& low);

[[nodiscard]] SolveResult solve(const IntGraph& g, const Instance& inst, const CbsConfig& config = {});

struct Violation {
    enum class Kind { Endpoint, Timing, VertexConflict, EdgeConflict, Structure };
    Kind kind;
    std::string message;
};

/// Independent replay of a plan set: endpoints, edge existence and duration,
/// and vertex/edge conflicts under the shared occupancy model.
[[nodiscard]] std::vector<Violation> validate_solution(const IntGraph& g, const Instance& inst,
                                                       const std::vector<TimedPlan>& plans);

/// `agent <id>: (v0,t0) (v1,t1) ...` per agent.
[[nodiscard]] std::string format_solution(const std::vector<TimedPlan>& plans);
/// key=value lines.
[[nodiscard]] std::string format_stats(const SolveStats& stats);
[[nodiscard]] std::vector<TimedPlan> parse_solution(std::string_view text);

[[nodiscard]] const char* to_string(PcClass c);
[[nodiscard]] const char* to_string(FailureReason r);

}  // namespace mapfz
