#include "mapfz/conflicts.hpp"

#include <sstream>

namespace mapfz {
namespace {

/// Per-timestep view of one plan: the vertex held at t (or -1 while inside an
/// edge) and the traversal in use at t (or -1).
struct Timeline {
    std::vector<VertexId> vertex;
    std::vector<int> move;
    std::vector<Traversal> moves;
};

Timeline build_timeline(const IntGraph& g, const TimedPlan& plan, Time t_max) {
    Timeline tl;
    tl.vertex.assign(t_max + 1, -1);
    tl.move.assign(t_max + 1, -1);
    tl.moves = traversals(g, plan);
    for (Time t = 0; t <= t_max; ++t) {
        const auto pos = position_at(g, plan, t);
        tl.vertex[t] = pos ? *pos : -1;
    }
    for (int m = 0; m < static_cast<int>(tl.moves.size()); ++m) {
        const auto& mv = tl.moves[m];
        for (Time t = std::max<Time>(0, mv.depart); t < mv.arrive && t <= t_max; ++t) tl.move[t] = m;
    }
    return tl;
}

}  // namespace

bool traversal_intervals_overlap(const Traversal& mine, const Traversal& theirs) {
    const Time ti = mine.depart, tie = mine.arrive;
    const Time tj = theirs.depart, tje = theirs.arrive;
    return (ti < tje && tje <= tie) || (ti <= tj && tj < tie);
}

std::vector<Conflict> detect_conflicts(const IntGraph& g, std::span<const TimedPlan> plans, Time t_max) {
    std::vector<Timeline> timelines;
    timelines.reserve(plans.size());
    for (const auto& p : plans) timelines.push_back(build_timeline(g, p, t_max));

    std::vector<Conflict> out;
    const int k = static_cast<int>(plans.size());
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            const auto& a = timelines[i];
            const auto& b = timelines[j];
            for (Time t = 0; t <= t_max; ++t) {
                if (a.vertex[t] >= 0 && a.vertex[t] == b.vertex[t]) {
                    Conflict c;
                    c.kind = ConflictKind::Vertex;
                    c.first = i;
                    c.second = j;
                    c.time = t;
                    c.vertex = a.vertex[t];
                    out.push_back(c);
                    break;
                }
                if (a.move[t] < 0 || b.move[t] < 0) continue;
                const auto& mi = a.moves[a.move[t]];
                const auto& mj = b.moves[b.move[t]];
                const bool swap = mi.to == mj.from && mj.to == mi.from;
                if (swap && traversal_intervals_overlap(mi, mj)) {
                    Conflict c;
                    c.kind = ConflictKind::Edge;
                    c.first = i;
                    c.second = j;
                    c.time = t;
                    c.first_move = mi;
                    c.second_move = mj;
                    out.push_back(c);
                    break;
                }
            }
        }
    }
    return out;
}

std::string describe(const Conflict& c) {
    std::ostringstream out;
    if (c.kind == ConflictKind::Vertex) {
        out << "vertex <" << c.first << "," << c.second << "," << c.vertex << "," << c.time << ">";
    } else {
        out << "edge <" << c.first << "," << c.second << ",(" << c.first_move.from << "->" << c.first_move.to << ")@["
            << c.first_move.depart << "," << c.first_move.arrive << "),(" << c.second_move.from << "->"
            << c.second_move.to << ")@[" << c.second_move.depart << "," << c.second_move.arrive << ")>";
    }
    return out.str();
}

}  // namespace mapfz
