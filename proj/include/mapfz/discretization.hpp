#pragma once

#include <span>

#include "mapfz/graph.hpp"
#include "mapfz/plan.hpp"

namespace mapfz {

/// round(w / s), half away from zero. Not clamped.
[[nodiscard]] long long scaled_round(double w, double s);

/// |w - round(w/s) * s|, using the unclamped rounding.
[[nodiscard]] double rounding_residual(double w, double s);

/// Every weight becomes max(1, round(w / s)). Connectivity is unchanged.
/// Throws GraphError unless s is positive and finite.
[[nodiscard]] IntGraph discretize(const RealGraph& g, double s);

/// Total rounding residual along every edge traversal of every plan. Plans
/// refer to vertex ids of `g`; repeated traversals are counted each time.
/// Throws GraphError when a plan moves along an edge missing from `g`.
[[nodiscard]] double discretization_error(const RealGraph& g, double s,
                                          std::span<const TimedPlan> plans);

/// Real weights of every edge traversal in `plans`, in order. C(s) is then a
/// pure function of this list, which keeps repeated evaluation cheap.
[[nodiscard]] std::vector<double> traversed_weights(const RealGraph& g,
                                                    std::span<const TimedPlan> plans);
[[nodiscard]] double discretization_error(std::span<const double> traversed, double s);

}  // namespace mapfz
