#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mapfz/graph.hpp"

namespace mapfz {

/// Malformed input text. The message names the format and, where known, the
/// 1-based line: "map: line 3: expected 'width <W>'".
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Instance construction rejected the selected agents.
class InstanceError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct CellCoord {
    int x = 0;
    int y = 0;
    friend bool operator==(const CellCoord&, const CellCoord&) = default;
};

struct ScenarioEntry {
    int bucket = 0;
    std::string map_name;
    int map_width = 0;
    int map_height = 0;
    CellCoord start;
    CellCoord goal;
    double optimal_length = 0.0;  // informational only (unit-cost octile length)
};

/// Start and goal vertex per agent; both mappings are injective.
struct Instance {
    std::vector<VertexId> starts;
    std::vector<VertexId> goals;

    [[nodiscard]] int num_agents() const { return static_cast<int>(starts.size()); }
};

// Moving AI .map
[[nodiscard]] GridSpec parse_map(std::string_view text, int k = 3);
[[nodiscard]] std::string serialize_map(const GridSpec& grid);

// Moving AI .scen (version 1)
[[nodiscard]] std::vector<ScenarioEntry> parse_scen(std::string_view text);
[[nodiscard]] std::string serialize_scen(const std::vector<ScenarioEntry>& entries);

// Roadmap edge list: `v <n>`, n vertex lines, `e <m>`, m edge lines.
[[nodiscard]] RealGraph parse_roadmap(std::string_view text);
[[nodiscard]] std::string serialize_roadmap(const RealGraph& g);

/// First `n_agents` scenario entries on a grid graph built from `grid`.
[[nodiscard]] Instance make_instance(const GridSpec& grid, const std::vector<ScenarioEntry>& scen,
                                     int n_agents);

/// Same for roadmaps: the sx/gx columns hold vertex ids, sy/gy are 0.
[[nodiscard]] Instance make_roadmap_instance(const RealGraph& roadmap,
                                             const std::vector<ScenarioEntry>& scen, int n_agents);

/// Checks |A| < |V|, vertex validity and injectivity; throws InstanceError.
void validate_instance(const Instance& inst, int num_vertices);

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace mapfz
