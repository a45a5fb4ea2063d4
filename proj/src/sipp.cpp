#include "mapfz/sipp.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <tuple>

namespace mapfz {
namespace {

const std::vector<SafeInterval> kAlwaysSafe = {SafeInterval{0, kInfiniteTime}};

std::vector<SafeInterval> intervals_from_blocked(const std::set<Time>& blocked) {
    std::vector<SafeInterval> out;
    Time lo = 0;
    for (Time t : blocked) {
        if (t < 0) continue;
        if (t > lo) out.push_back({lo, t});
        lo = std::max(lo, t + 1);
    }
    out.push_back({lo, kInfiniteTime});
    return out;
}

}  // namespace

std::span<const SafeInterval> SafeIntervalTable::intervals(VertexId v) const {
    auto it = vertex_.find(v);
    if (it == vertex_.end()) return kAlwaysSafe;
    return it->second;
}

std::optional<int> SafeIntervalTable::interval_index(VertexId v, Time t) const {
    const auto ivs = intervals(v);
    for (std::size_t k = 0; k < ivs.size(); ++k) {
        if (ivs[k].lo <= t && t < ivs[k].hi) return static_cast<int>(k);
        if (ivs[k].lo > t) break;
    }
    return std::nullopt;
}

std::span<const std::pair<Time, Time>> SafeIntervalTable::edge_blocks(VertexId from, VertexId to) const {
    auto it = edge_.find(edge_key(from, to));
    if (it == edge_.end()) return {};
    return it->second;
}

bool SafeIntervalTable::departure_allowed(VertexId from, VertexId to, int weight, Time depart) const {
    for (auto [lo, hi] : edge_blocks(from, to)) {
        // (depart, depart + weight) meets (lo, hi)
        if (depart < hi && lo < depart + weight) return false;
    }
    return true;
}

std::optional<Time> SafeIntervalTable::earliest_departure(VertexId from, VertexId to, int weight, Time earliest,
                                                          Time latest) const {
    Time d = earliest;
    // Blocks are sorted by lo, so each forbidden departure range
    // [lo - weight + 1, hi - 1] starts no earlier than the previous one.
    for (auto [lo, hi] : edge_blocks(from, to)) {
        if (d > latest) break;
        const Time first_bad = lo - weight + 1;
        const Time last_bad = hi - 1;
        if (d < first_bad) break;
        if (d <= last_bad) d = last_bad + 1;
    }
    if (d > latest) return std::nullopt;
    return d;
}

SafeIntervalTable build_safe_intervals(const ConstraintSet& constraints, AgentId agent) {
    SafeIntervalTable table;
    std::unordered_map<VertexId, std::set<Time>> blocked;
    for (const auto& c : constraints.neg_vertex)
        if (c.agent == agent) blocked[c.vertex].insert(c.time);
    for (const auto& c : constraints.pos_vertex) {
        if (c.agent == agent)
            table.waypoints_.emplace_back(c.vertex, c.time);
        else
            blocked[c.vertex].insert(c.time);
    }
    for (auto& [v, times] : blocked) table.vertex_[v] = intervals_from_blocked(times);

    for (const auto& c : constraints.neg_edge) {
        if (c.agent != agent || c.hi <= c.lo) continue;
        table.edge_[SafeIntervalTable::edge_key(c.from, c.to)].emplace_back(c.lo, c.hi);
    }
    for (auto& [key, blocks] : table.edge_) {
        std::sort(blocks.begin(), blocks.end());
        blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
    }
    std::sort(table.waypoints_.begin(), table.waypoints_.end(),
              [](const auto& a, const auto& b) { return std::tie(a.second, a.first) < std::tie(b.second, b.first); });
    table.waypoints_.erase(std::unique(table.waypoints_.begin(), table.waypoints_.end()), table.waypoints_.end());
    return table;
}

DistanceTable::DistanceTable(const IntGraph& g, VertexId target)
    : target_(target), dist_(g.num_vertices(), kInfiniteTime) {
    using Item = std::pair<Time, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    dist_.at(target) = 0;
    open.emplace(0, target);
    while (!open.empty()) {
        auto [d, v] = open.top();
        open.pop();
        if (d != dist_[v]) continue;
        for (const auto& nb : g.neighbors(v)) {
            const Time nd = d + g.edges()[nb.edge].w;
            if (nd < dist_[nb.to]) {
                dist_[nb.to] = nd;
                open.emplace(nd, nb.to);
            }
        }
    }
}

namespace {

struct SearchNode {
    VertexId v;
    int interval;
    Time g;       // arrival time
    Time depart;  // departure from the parent vertex
    int parent;
};

/// One leg of the plan: from (from, t0) to `target`. With a deadline the leg
/// must reach the interval of `target` that contains the deadline, no later
/// than the deadline; without one it must reach an unbounded interval, by
/// `arrive_by` when given.
std::optional<std::vector<PlanStep>> search_leg(const IntGraph& g, const SafeIntervalTable& table,
                                                VertexId from, Time t0, VertexId target,
                                                std::optional<Time> deadline, Time horizon,
                                                const DistanceTable& h,
                                                std::optional<Time> arrive_by = std::nullopt) {
    const auto start_iv = table.interval_index(from, t0);
    if (!start_iv || !h.reachable(from)) return std::nullopt;
    std::optional<int> target_iv;
    if (deadline) {
        target_iv = table.interval_index(target, *deadline);
        if (!target_iv) return std::nullopt;
    }
    Time bound = deadline ? std::min(*deadline, horizon) : horizon;
    if (arrive_by) bound = std::min(bound, *arrive_by);

    std::vector<SearchNode> nodes;
    std::unordered_map<std::uint64_t, Time> best;
    auto state_key = [](VertexId v, int iv) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) << 32) | static_cast<std::uint32_t>(iv);
    };
    // (f, -g, vertex, interval, node index): smaller f, then larger g, then smaller vertex id.
    using Entry = std::tuple<Time, Time, VertexId, int, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

    auto push = [&](VertexId v, int iv, Time arrival, Time depart, int parent) {
        if (arrival > bound || !h.reachable(v)) return;
        const Time f = arrival + h[v];
        if (f > bound) return;
        auto [it, inserted] = best.try_emplace(state_key(v, iv), arrival);
        if (!inserted) {
            if (it->second <= arrival) return;
            it->second = arrival;
        }
        nodes.push_back({v, iv, arrival, depart, parent});
        open.emplace(f, -arrival, v, iv, static_cast<int>(nodes.size()) - 1);
    };

    push(from, *start_iv, t0, t0, -1);
    while (!open.empty()) {
        const auto [f, neg_g, v, iv, idx] = open.top();
        open.pop();
        const SearchNode node = nodes[idx];
        if (best[state_key(v, iv)] != node.g) continue;  // stale

        const auto ivs = table.intervals(v);
        const bool at_goal = v == target && (deadline ? iv == *target_iv : ivs[iv].hi == kInfiniteTime);
        if (at_goal) {
            std::vector<PlanStep> steps;
            for (int k = idx; k >= 0; k = nodes[k].parent) {
                const auto& n = nodes[k];
                steps.push_back({n.v, n.g});
                if (n.parent >= 0) {
                    const auto& p = nodes[n.parent];
                    for (Time t = n.depart; t > p.g; --t) steps.push_back({p.v, t});
                }
            }
            std::reverse(steps.begin(), steps.end());
            return steps;
        }

        const Time latest_here = ivs[iv].hi == kInfiniteTime ? bound : std::min<Time>(bound, ivs[iv].hi - 1);
        for (const auto& nb : g.neighbors(v)) {
            const int w = g.edges()[nb.edge].w;
            const auto next_ivs = table.intervals(nb.to);
            for (std::size_t j = 0; j < next_ivs.size(); ++j) {
                const auto& J = next_ivs[j];
                if (J.hi != kInfiniteTime && J.hi - 1 - w < node.g) continue;
                if (J.lo - w > latest_here) break;
                const Time lo = std::max<Time>(node.g, J.lo - w);
                Time hi = latest_here;
                if (J.hi != kInfiniteTime) hi = std::min<Time>(hi, J.hi - 1 - w);
                hi = std::min<Time>(hi, bound - w);
                if (lo > hi) continue;
                const auto d = table.earliest_departure(v, nb.to, w, lo, hi);
                if (d) push(nb.to, static_cast<int>(j), *d + w, *d, idx);
            }
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<TimedPlan> sipp_plan(const IntGraph& g, const SippQuery& q, const SafeIntervalTable& table) {
    if (q.start < 0 || q.goal < 0 || q.start >= g.num_vertices() || q.goal >= g.num_vertices())
        throw GraphError("sipp_plan: start or goal is not a vertex");
    DistanceTable own;
    const DistanceTable* goal_h = q.goal_distances;
    if (!goal_h || goal_h->target() != q.goal) {
        own = DistanceTable(g, q.goal);
        goal_h = &own;
    }

    // Waypoints are visited leg by leg: each intermediate arrival time is
    // fixed, so the legs can be optimized independently. Waypoints at the goal
    // that come after every other waypoint are also met by reaching the goal
    // for good before the first of them, which is tried first.
    const auto& wps = table.waypoints();
    std::size_t goal_suffix = wps.size();
    while (goal_suffix > 0 && wps[goal_suffix - 1].first == q.goal) --goal_suffix;

    TimedPlan plan;
    VertexId at = q.start;
    Time now = 0;
    plan.steps.push_back({at, now});
    for (std::size_t i = 0;; ++i) {
        if (i >= goal_suffix) {
            const std::optional<Time> arrive_by =
                i < wps.size() ? std::optional<Time>(wps[i].second) : std::nullopt;
            if (auto leg = search_leg(g, table, at, now, q.goal, std::nullopt, q.horizon, *goal_h, arrive_by)) {
                plan.steps.insert(plan.steps.end(), leg->begin() + 1, leg->end());
                return plan;
            }
            if (i == wps.size()) return std::nullopt;
        }
        const auto [wv, wt] = wps[i];
        if (wt < now) return std::nullopt;
        const DistanceTable wh(g, wv);
        auto leg = search_leg(g, table, at, now, wv, wt, q.horizon, wh);
        if (!leg) return std::nullopt;
        plan.steps.insert(plan.steps.end(), leg->begin() + 1, leg->end());
        for (Time t = plan.steps.back().arrival + 1; t <= wt; ++t) plan.steps.push_back({wv, t});
        at = wv;
        now = wt;
    }
}

std::optional<TimedPlan> sipp_plan(const IntGraph& g, VertexId start, VertexId goal, const ConstraintSet& constraints,
                                   AgentId agent, Time horizon) {
    const auto table = build_safe_intervals(constraints, agent);
    return sipp_plan(g, SippQuery{start, goal, agent, horizon, nullptr}, table);
}

std::vector<std::string> constraint_violations(const IntGraph& g, const TimedPlan& plan,
                                               const ConstraintSet& constraints, AgentId agent) {
    std::vector<std::string> out;
    auto at = [&](Time t) { return position_at(g, plan, t); };
    for (const auto& c : constraints.neg_vertex) {
        if (c.agent == agent && at(c.time) == c.vertex)
            out.push_back("at forbidden vertex " + std::to_string(c.vertex) + " at t=" + std::to_string(c.time));
    }
    for (const auto& c : constraints.pos_vertex) {
        const auto here = at(c.time);
        if (c.agent == agent && here != c.vertex)
            out.push_back("missed mandatory vertex " + std::to_string(c.vertex) + " at t=" + std::to_string(c.time));
        if (c.agent != agent && here == c.vertex)
            out.push_back("at vertex " + std::to_string(c.vertex) + " reserved for agent " + std::to_string(c.agent) +
                          " at t=" + std::to_string(c.time));
    }
    const auto moves = traversals(g, plan);
    for (const auto& c : constraints.neg_edge) {
        if (c.agent != agent) continue;
        for (const auto& m : moves) {
            if (m.from == c.from && m.to == c.to && m.depart < c.hi && c.lo < m.arrive)
                out.push_back("edge " + std::to_string(c.from) + "->" + std::to_string(c.to) + " used during (" +
                              std::to_string(c.lo) + "," + std::to_string(c.hi) + ")");
        }
    }
    return out;
}

}  // namespace mapfz
