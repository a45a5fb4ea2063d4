#include "mapfz/plan.hpp"

#include <algorithm>
#include <sstream>

namespace mapfz {

std::vector<Traversal> traversals(const IntGraph& g, const TimedPlan& plan) {
    return traversals(plan, [&](VertexId a, VertexId b) {
        const auto w = g.weight(a, b);
        if (!w) throw GraphError("plan uses a missing edge " + std::to_string(a) + "-" + std::to_string(b));
        return *w;
    });
}

std::optional<VertexId> position_at(const IntGraph& g, const TimedPlan& plan, Time t) {
    if (plan.steps.empty() || t < plan.steps.front().arrival) return std::nullopt;
    auto it = std::upper_bound(plan.steps.begin(), plan.steps.end(), t,
                               [](Time value, const PlanStep& s) { return value < s.arrival; });
    const auto& here = *std::prev(it);
    if (it == plan.steps.end() || it->vertex == here.vertex) return here.vertex;
    const auto w = g.weight(here.vertex, it->vertex);
    if (!w) throw GraphError("plan uses a missing edge");
    if (t <= it->arrival - *w) return here.vertex;
    return std::nullopt;
}

Time makespan(const std::vector<TimedPlan>& plans) {
    Time m = 0;
    for (const auto& p : plans) m = std::max(m, p.cost());
    return m;
}

long long sum_of_costs(const std::vector<TimedPlan>& plans) {
    long long total = 0;
    for (const auto& p : plans) total += p.cost();
    return total;
}

std::string format_plan(const TimedPlan& plan) {
    std::ostringstream out;
    for (std::size_t k = 0; k < plan.steps.size(); ++k) {
        if (k) out << ' ';
        out << '(' << plan.steps[k].vertex << ',' << plan.steps[k].arrival << ')';
    }
    return out.str();
}

}  // namespace mapfz
