#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mapfz {

/// Two objectives, both minimized.
struct Objectives {
    double f1 = 0.0;
    double f2 = 0.0;
};

[[nodiscard]] bool dominates(const Objectives& a, const Objectives& b);

/// Fronts of indices into `points`, best front first. Indices inside a front
/// are ascending.
[[nodiscard]] std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const Objectives> points);

/// Crowding distance for each member of `front` (same order); boundary points
/// get +inf.
[[nodiscard]] std::vector<double> crowding_distance(std::span<const Objectives> points,
                                                    std::span<const std::size_t> front);

struct ParetoPoint {
    double s = 0.0;
    Objectives obj;
};

/// Set of mutually non-dominated points.
class ParetoArchive {
public:
    /// Adds `p` unless it is dominated; drops members that `p` dominates.
    bool insert(const ParetoPoint& p);
    [[nodiscard]] const std::vector<ParetoPoint>& points() const { return points_; }
    [[nodiscard]] bool empty() const { return points_.empty(); }
    [[nodiscard]] std::size_t size() const { return points_.size(); }

private:
    std::vector<ParetoPoint> points_;
};

struct Nsga2Config {
    int population = 20;
    int generations = 30;
    double lower = 0.0;
    double upper = 1.0;
    double crossover_prob = 0.9;
    double eta_c = 15.0;
    double mutation_prob = 1.0;
    double eta_m = 20.0;
    std::uint64_t seed = 0;
};

using ObjectiveFn = std::function<Objectives(double)>;
/// Evaluates a whole population at once, e.g. to normalize across it.
using BatchObjectiveFn = std::function<std::vector<Objectives>(std::span<const double>)>;

/// Evolves a one-dimensional population and returns the final first front.
/// `initial` is padded with uniform samples or truncated to the population
/// size.
[[nodiscard]] ParetoArchive nsga2_evolve(std::vector<double> initial, const ObjectiveFn& objective,
                                         const Nsga2Config& config);
[[nodiscard]] ParetoArchive nsga2_evolve_batch(std::vector<double> initial, const BatchObjectiveFn& objective,
                                               const Nsga2Config& config);

}  // namespace mapfz
