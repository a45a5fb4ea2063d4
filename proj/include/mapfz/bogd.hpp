#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mapfz/cbs.hpp"
#include "mapfz/gp.hpp"
#include "mapfz/graph.hpp"
#include "mapfz/map_io.hpp"
#include "mapfz/nsga2.hpp"

namespace mapfz {

struct BogdConfig {
    double s_min = 0.5;
    double s_max = 2.0;
    double delta = 0.1;
    /// Number of true evaluations, including the initial design.
    int budget = 25;
    int initial_points = 2;
    int population = 20;
    int generations = 30;
    double crossover_prob = 0.9;
    double mutation_prob = 1.0;
    /// Wall-clock limit for each solver evaluation; also the runtime recorded
    /// for a failed evaluation.
    double eval_timeout_s = 10.0;
    std::uint64_t seed = 0;
};

struct Observation {
    int t = 0;
    double s = 0.0;
    double runtime = 0.0;
    double error = 0.0;
    bool success = false;
    /// Acquisition values at selection time; NaN for the initial design.
    double lcb = 0.0;
    double score = 0.0;
};

/// Outcome of one true evaluation at some s.
struct EvalResult {
    double runtime = 0.0;
    double error = 0.0;
    bool success = false;
    /// Real weights traversed by the solution found, used as the plan set
    /// for C(s) in later iterations. Empty keeps the previous incumbent.
    std::vector<double> traversed;
};

using Evaluator = std::function<EvalResult(double s)>;

struct RegretPoint {
    double runtime = 0.0;
    double error = 0.0;
};

struct BogdResult {
    std::optional<double> best_s;
    std::vector<Observation> observations;
    /// Non-dominated successful observations as (runtime, error).
    ParetoArchive pareto;
    /// Cumulative (runtime - best runtime, error - best error) per iteration.
    std::vector<RegretPoint> regret_trace;
};

/// Min-max normalizes each column over the given candidates and sums them.
/// A constant column contributes 0.
[[nodiscard]] std::vector<double> normalized_scores(std::span<const double> lcb_values,
                                                    std::span<const double> error_values);

/// Tuning loop over a generic evaluator. `incumbent` lists the real weights
/// used for C(s) until an evaluation supplies new ones.
[[nodiscard]] BogdResult bogd_run(const Evaluator& evaluate, std::vector<double> incumbent, const BogdConfig& config);

/// Tuning loop that evaluates s by discretizing `g` and running the solver
/// on `inst` with the configured per-evaluation timeout.
[[nodiscard]] BogdResult bogd_run(const RealGraph& g, const Instance& inst, const BogdConfig& config,
                                  const CbsConfig& solver = {});

/// Real weights along each agent's unconstrained shortest path on `g`.
[[nodiscard]] std::vector<double> shortest_path_weights(const RealGraph& g, const Instance& inst);

/// CSV rows `t,s,runtime_s,error,success,lcb,score` then a summary block.
[[nodiscard]] std::string format_tuning_report(const BogdResult& result);

}  // namespace mapfz
