#include "mapfz/cbs.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <sstream>

namespace mapfz {

std::array<ConstraintSet, 2> make_branch_constraints(const Conflict& c, Splitting mode) {
    std::array<ConstraintSet, 2> out;
    if (c.kind == ConflictKind::Vertex) {
        if (mode == Splitting::Disjoint) {
            out[0].pos_vertex.push_back({c.first, c.vertex, c.time});
            out[1].neg_vertex.push_back({c.first, c.vertex, c.time});
        } else {
            out[0].neg_vertex.push_back({c.first, c.vertex, c.time});
            out[1].neg_vertex.push_back({c.second, c.vertex, c.time});
        }
        return out;
    }
    // Each agent is kept off its own directed edge while the other one is on it.
    const auto& mi = c.first_move;
    const auto& mj = c.second_move;
    out[0].neg_edge.push_back({c.first, mi.from, mi.to, mj.depart, mj.arrive});
    out[1].neg_edge.push_back({c.second, mj.from, mj.to, mi.depart, mi.arrive});
    return out;
}

Time default_horizon(const IntGraph& g, const Instance& inst) {
    Time lower_bound = 0;
    for (int a = 0; a < inst.num_agents(); ++a) {
        const DistanceTable d(g, inst.goals[a]);
        if (d.reachable(inst.starts[a])) lower_bound = std::max(lower_bound, d[inst.starts[a]]);
    }
    return 2 * lower_bound + inst.num_agents() * std::max(1, g.max_weight());
}

LowLevel::LowLevel(const IntGraph& g, const Instance& inst, Time horizon)
    : graph_(&g), instance_(&inst), horizon_(horizon) {
    goal_distances_.reserve(inst.num_agents());
    for (VertexId goal : inst.goals) goal_distances_.emplace_back(g, goal);
}

std::optional<TimedPlan> LowLevel::plan(AgentId agent, const ConstraintSet& constraints) {
    ++calls_;
    const auto table = build_safe_intervals(constraints, agent);
    const SippQuery q{instance_->starts[agent], instance_->goals[agent], agent, horizon_, &goal_distances_[agent]};
    return sipp_plan(*graph_, q, table);
}

namespace {

/// Agents that must be replanned when `added` joins a node with `plans`.
std::vector<AgentId> agents_to_replan(const IntGraph& g, const ConstraintSet& added,
                                      const std::vector<TimedPlan>& plans) {
    std::vector<AgentId> out;
    for (AgentId a = 0; a < static_cast<AgentId>(plans.size()); ++a) {
        if (!constraint_violations(g, plans[a], added, a).empty()) out.push_back(a);
    }
    return out;
}

}  // namespace

ConflictNode classify_pc(const CTNode& parent, const Conflict& c, Splitting mode, LowLevel& low) {
    ConflictNode node;
    node.conflict = c;
    const auto bundles = make_branch_constraints(c, mode);
    int increased = 0;
    for (std::size_t b = 0; b < bundles.size(); ++b) {
        Branch& br = node.branches[b];
        br.added = bundles[b];
        ConstraintSet all = parent.constraints;
        all.append(br.added);
        // An agent whose current plan already satisfies the new constraints
        // keeps it: the plan stays optimal under the larger constraint set.
        bool feasible = true;
        for (AgentId a : agents_to_replan(low.graph(), br.added, parent.plans)) {
            auto p = low.plan(a, all);
            if (!p) {
                feasible = false;
                break;
            }
            br.replanned.emplace_back(a, std::move(*p));
        }
        if (feasible) {
            Time cost = 0;
            long long soc = 0;
            for (AgentId a = 0; a < static_cast<AgentId>(parent.plans.size()); ++a) {
                const TimedPlan* p = &parent.plans[a];
                for (const auto& [ra, rp] : br.replanned)
                    if (ra == a) p = &rp;
                cost = std::max(cost, p->cost());
                soc += p->cost();
            }
            br.cost = cost;
            br.sum_of_costs = soc;
        }
        if (br.cost > parent.cost) ++increased;
    }
    node.pc = increased == 2 ? PcClass::Cardinal : increased == 1 ? PcClass::SemiCardinal : PcClass::NonCardinal;
    return node;
}

namespace {

using Clock = std::chrono::steady_clock;

struct NodeOrder {
    bool operator()(const std::shared_ptr<CTNode>& a, const std::shared_ptr<CTNode>& b) const {
        // priority_queue pops the largest; invert for (cost, soc, id) ascending.
        if (a->cost != b->cost) return a->cost > b->cost;
        if (a->sum_of_costs != b->sum_of_costs) return a->sum_of_costs > b->sum_of_costs;
        return a->id > b->id;
    }
};

std::vector<Conflict> by_time(std::vector<Conflict> conflicts) {
    std::stable_sort(conflicts.begin(), conflicts.end(),
                     [](const Conflict& a, const Conflict& b) { return a.time < b.time; });
    return conflicts;
}

}  // namespace

SolveResult solve(const IntGraph& g, const Instance& inst, const CbsConfig& config) {
    const auto started = Clock::now();
    const auto deadline = started + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(std::max(0.0, config.timeout_s)));
    validate_instance(inst, g.num_vertices());

    SolveStats stats;
    stats.horizon = config.horizon.value_or(default_horizon(g, inst));
    LowLevel low(g, inst, stats.horizon);
    auto finish = [&](auto result) -> SolveResult {
        result.stats = stats;
        result.stats.low_level_calls = low.calls();
        result.stats.wall_time_s = std::chrono::duration<double>(Clock::now() - started).count();
        return result;
    };
    auto failure = [&](FailureReason r) { return finish(Failure{r, {}}); };

    std::uint64_t next_id = 0;
    auto make_node = [&](std::shared_ptr<const CTNode> parent, ConstraintSet constraints,
                         std::vector<TimedPlan> plans) {
        auto n = std::make_shared<CTNode>();
        n->parent = std::move(parent);
        n->constraints = std::move(constraints);
        n->plans = std::move(plans);
        n->cost = makespan(n->plans);
        n->sum_of_costs = sum_of_costs(n->plans);
        n->conflicts = detect_conflicts(g, n->plans, n->cost);
        n->id = next_id++;
        ++stats.nodes_generated;
        return n;
    };

    std::vector<TimedPlan> initial;
    for (AgentId a = 0; a < inst.num_agents(); ++a) {
        auto p = low.plan(a, {});
        if (!p) return failure(FailureReason::Exhausted);
        initial.push_back(std::move(*p));
    }

    std::priority_queue<std::shared_ptr<CTNode>, std::vector<std::shared_ptr<CTNode>>, NodeOrder> open;
    open.push(make_node(nullptr, {}, std::move(initial)));

    while (!open.empty()) {
        if (Clock::now() >= deadline) return failure(FailureReason::Timeout);
        auto node = open.top();
        open.pop();
        if (node->conflicts.empty()) {
            Solution sol;
            sol.plans = node->plans;
            sol.makespan = node->cost;
            return finish(std::move(sol));
        }
        ++stats.nodes_expanded;

        const auto ordered = by_time(node->conflicts);
        std::optional<ConflictNode> chosen;
        if (config.prioritize_conflicts) {
            const std::size_t limit =
                config.lazy_pc > 0 ? std::min<std::size_t>(ordered.size(), config.lazy_pc) : ordered.size();
            for (std::size_t k = 0; k < limit; ++k) {
                if (Clock::now() >= deadline) return failure(FailureReason::Timeout);
                auto cn = classify_pc(*node, ordered[k], config.splitting, low);
                // Conflicts are visited in time order, so the first one of the
                // best class found is the one selected.
                if (!chosen || cn.pc < chosen->pc) chosen = std::move(cn);
                if (chosen->pc == PcClass::Cardinal) break;
            }
        } else {
            chosen = classify_pc(*node, ordered.front(), config.splitting, low);
        }

        for (auto& br : chosen->branches) {
            if (br.cost == kInfiniteTime) continue;
            ConstraintSet constraints = node->constraints;
            constraints.append(br.added);
            auto plans = node->plans;
            for (auto& [a, p] : br.replanned) plans[a] = std::move(p);
            auto child = make_node(node, std::move(constraints), std::move(plans));
            if (child->cost < node->cost) ++stats.cost_decreases;
            open.push(std::move(child));
        }
    }
    return failure(FailureReason::Exhausted);
}

std::vector<Violation> validate_solution(const IntGraph& g, const Instance& inst, const std::vector<TimedPlan>& plans) {
    using K = Violation::Kind;
    std::vector<Violation> out;
    if (static_cast<int>(plans.size()) != inst.num_agents()) {
        out.push_back({K::Structure, "expected " + std::to_string(inst.num_agents()) + " plans, got " +
                                         std::to_string(plans.size())});
        return out;
    }
    bool replayable = true;
    for (int a = 0; a < inst.num_agents(); ++a) {
        const auto& p = plans[a];
        const std::string who = "agent " + std::to_string(a) + ": ";
        if (p.steps.empty()) {
            out.push_back({K::Structure, who + "empty plan"});
            replayable = false;
            continue;
        }
        if (p.steps.front().vertex != inst.starts[a] || p.steps.front().arrival != 0)
            out.push_back({K::Endpoint, who + "does not start at its start vertex at t=0"});
        if (p.steps.back().vertex != inst.goals[a]) out.push_back({K::Endpoint, who + "does not end at its goal"});
        for (std::size_t k = 1; k < p.steps.size(); ++k) {
            const auto& prev = p.steps[k - 1];
            const auto& cur = p.steps[k];
            if (cur.vertex < 0 || cur.vertex >= g.num_vertices()) {
                out.push_back({K::Structure, who + "unknown vertex " + std::to_string(cur.vertex)});
                replayable = false;
                continue;
            }
            if (cur.vertex == prev.vertex) {
                if (cur.arrival <= prev.arrival) out.push_back({K::Timing, who + "wait does not advance time"});
                continue;
            }
            const auto w = g.weight(prev.vertex, cur.vertex);
            if (!w) {
                out.push_back({K::Structure, who + "no edge " + std::to_string(prev.vertex) + "-" +
                                                 std::to_string(cur.vertex)});
                replayable = false;
            } else if (cur.arrival < prev.arrival + *w) {
                out.push_back({K::Timing, who + "arrives at " + std::to_string(cur.vertex) + " at t=" +
                                              std::to_string(cur.arrival) + " before finishing an edge of weight " +
                                              std::to_string(*w)});
                replayable = false;
            }
        }
    }
    if (!replayable) return out;

    // Occupancy matrix: vertex held at each step and directed edge in use over
    // each half-open traversal interval.
    const Time horizon = makespan(plans);
    const int n = inst.num_agents();
    std::vector<std::vector<VertexId>> at(n, std::vector<VertexId>(horizon + 1, -1));
    std::vector<std::vector<std::pair<VertexId, VertexId>>> on(n, std::vector<std::pair<VertexId, VertexId>>(horizon + 1, {-1, -1}));
    for (int a = 0; a < n; ++a) {
        for (Time t = 0; t <= horizon; ++t) {
            if (auto v = position_at(g, plans[a], t)) at[a][t] = *v;
        }
        for (const auto& m : traversals(g, plans[a]))
            for (Time t = m.depart; t < m.arrive; ++t) on[a][t] = {m.from, m.to};
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (Time t = 0; t <= horizon; ++t) {
                if (at[i][t] >= 0 && at[i][t] == at[j][t]) {
                    out.push_back({K::VertexConflict, "agents " + std::to_string(i) + "," + std::to_string(j) +
                                                          " share vertex " + std::to_string(at[i][t]) + " at t=" +
                                                          std::to_string(t)});
                    break;
                }
                if (on[i][t].first >= 0 && on[i][t].first == on[j][t].second && on[i][t].second == on[j][t].first) {
                    out.push_back({K::EdgeConflict, "agents " + std::to_string(i) + "," + std::to_string(j) +
                                                        " cross edge " + std::to_string(on[i][t].first) + "-" +
                                                        std::to_string(on[i][t].second) + " at t=" + std::to_string(t)});
                    break;
                }
            }
        }
    }
    return out;
}

std::string format_solution(const std::vector<TimedPlan>& plans) {
    std::ostringstream out;
    for (std::size_t a = 0; a < plans.size(); ++a) out << "agent " << a << ": " << format_plan(plans[a]) << '\n';
    return out.str();
}

std::string format_stats(const SolveStats& s) {
    std::ostringstream out;
    out << "ct_nodes_generated=" << s.nodes_generated << '\n'
        << "ct_nodes_expanded=" << s.nodes_expanded << '\n'
        << "ll_calls=" << s.low_level_calls << '\n'
        << "horizon=" << s.horizon << '\n'
        << "wall_time_s=" << s.wall_time_s << '\n';
    return out.str();
}

std::vector<TimedPlan> parse_solution(std::string_view text) {
    std::vector<TimedPlan> out;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("agent ", 0) != 0) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError("solution: missing ':' in '" + line + "'");
        const int id = std::stoi(line.substr(6, colon - 6));
        if (id != static_cast<int>(out.size())) throw ParseError("solution: agents out of order");
        TimedPlan p;
        std::size_t pos = colon;
        while ((pos = line.find('(', pos)) != std::string::npos) {
            const auto comma = line.find(',', pos);
            const auto close = line.find(')', pos);
            if (comma == std::string::npos || close == std::string::npos || comma > close)
                throw ParseError("solution: malformed step in '" + line + "'");
            p.steps.push_back({std::stoi(line.substr(pos + 1, comma - pos - 1)),
                               std::stoi(line.substr(comma + 1, close - comma - 1))});
            pos = close;
        }
        out.push_back(std::move(p));
    }
    return out;
}

const char* to_string(PcClass c) {
    switch (c) {
        case PcClass::Cardinal: return "cardinal";
        case PcClass::SemiCardinal: return "semi-cardinal";
        case PcClass::NonCardinal: return "non-cardinal";
    }
    return "?";
}

const char* to_string(FailureReason r) { return r == FailureReason::Timeout ? "timeout" : "exhausted"; }

}  // namespace mapfz
