#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mapfz/bogd.hpp"
#include "mapfz/cbs.hpp"

namespace mapfz {

/// How real weights become integers for one run.
struct DiscretizationMode {
    enum class Kind { Fixed, Baseline, Tuned };
    Kind kind = Kind::Baseline;
    double s = 1.0;  // Fixed only

    /// "fixed:<s>", "baseline" or "bogd".
    static DiscretizationMode parse(std::string_view text);
    [[nodiscard]] std::string label() const;
};

struct MapEntry {
    std::string name;
    std::filesystem::path path;
    bool roadmap = false;
    std::vector<std::filesystem::path> scenarios;
};

struct ExperimentSpec {
    std::vector<MapEntry> maps;
    /// Neighborhood parameters for grid maps; roadmaps run once with k = 0.
    std::vector<int> ks{3};
    std::vector<int> agent_counts{2, 4, 8, 12, 16};
    std::vector<DiscretizationMode> modes;
    CbsConfig solver;
    /// Settings for the tuned mode. The tuning instance is the first scenario
    /// at `tune_agents` agents (largest agent count when unset).
    BogdConfig tuning;
    std::optional<int> tune_agents;
    int repetitions = 1;
    std::uint64_t seed = 0;
    int workers = 1;
};

struct ResultRow {
    std::string map;
    int k = 0;
    int n_agents = 0;
    std::string scenario;
    std::string mode;
    bool success = false;
    std::optional<Time> makespan;
    double runtime_s = 0.0;
    std::uint64_t ct_nodes = 0;
    std::uint64_t ll_calls = 0;
    double s_used = 1.0;
    std::optional<double> error;
};

/// One BOGD tuning pass of the suite, reported apart from the solve rows.
struct TuningRecord {
    std::string map;
    int k = 0;
    std::optional<double> best_s;
    double tuning_time_s = 0.0;
    int evaluations = 0;
};

struct SuiteResult {
    std::vector<ResultRow> rows;
    std::vector<TuningRecord> tuning;
};

/// Runs every (map, k, scenario, agent count, mode) combination. Input
/// errors throw std::runtime_error naming the file; solver failures become
/// rows with success = false.
[[nodiscard]] SuiteResult run_suite(const ExperimentSpec& spec);

struct SummaryRow {
    std::string map;
    int k = 0;
    std::string mode;
    int n_agents = 0;
    int total = 0;
    int solved = 0;
    double success_rate = 0.0;
    std::optional<double> mean_runtime_s;  // successful rows only
    std::optional<double> makespan_q1, makespan_median, makespan_q3;
};

/// Groups by (map, k, mode, n_agents) in first-appearance order.
[[nodiscard]] std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows);

/// Linear-interpolated quantile of a non-empty sample.
[[nodiscard]] double quantile(std::vector<double> values, double q);

inline constexpr const char* kResultHeader =
    "map,k,n_agents,scenario,mode,success,makespan,runtime_s,ct_nodes,ll_calls,s_used,error";

[[nodiscard]] std::string format_results_csv(const std::vector<ResultRow>& rows);
[[nodiscard]] std::vector<ResultRow> parse_results_csv(std::string_view text);
[[nodiscard]] std::string format_summary_csv(const std::vector<SummaryRow>& rows);
[[nodiscard]] std::string format_tuning_csv(const std::vector<TuningRecord>& records);

/// `x y series` lines: success rate and mean runtime against agent count.
[[nodiscard]] std::string format_success_plot(const std::vector<SummaryRow>& rows);
[[nodiscard]] std::string format_runtime_plot(const std::vector<SummaryRow>& rows);

}  // namespace mapfz
