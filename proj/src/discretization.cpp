#include "mapfz/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mapfz {

long long scaled_round(double w, double s) { return std::llround(w / s); }

double rounding_residual(double w, double s) {
    return std::abs(w - static_cast<double>(scaled_round(w, s)) * s);
}

static void check_scale(double s) {
    if (!std::isfinite(s) || !(s > 0)) throw GraphError("discretization scale s must be positive and finite");
}

IntGraph discretize(const RealGraph& g, double s) {
    check_scale(s);
    std::vector<Edge<int>> edges;
    edges.reserve(g.edges().size());
    for (const auto& e : g.edges()) {
        const long long w = std::max(1LL, scaled_round(e.w, s));
        if (w > std::numeric_limits<int>::max() / 4) throw GraphError("discretized weight overflows");
        edges.push_back({e.u, e.v, static_cast<int>(w)});
    }
    return {g.vertices(), std::move(edges)};
}

std::vector<double> traversed_weights(const RealGraph& g, std::span<const TimedPlan> plans) {
    std::vector<double> out;
    for (const auto& plan : plans) {
        for (std::size_t k = 1; k < plan.steps.size(); ++k) {
            const VertexId a = plan.steps[k - 1].vertex, b = plan.steps[k].vertex;
            if (a == b) continue;
            const auto w = g.weight(a, b);
            if (!w) throw GraphError("plan uses edge " + std::to_string(a) + "-" + std::to_string(b) +
                                     " which is not in the graph");
            out.push_back(*w);
        }
    }
    return out;
}

double discretization_error(std::span<const double> traversed, double s) {
    check_scale(s);
    double total = 0.0;
    for (double w : traversed) total += rounding_residual(w, s);
    return total;
}

double discretization_error(const RealGraph& g, double s, std::span<const TimedPlan> plans) {
    check_scale(s);
    const auto weights = traversed_weights(g, plans);
    return discretization_error(weights, s);
}

}  // namespace mapfz
