#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mapfz {

using VertexId = int;
using AgentId = int;
using Time = int;

struct Vertex {
    VertexId id = 0;
    double x = 0.0;
    double y = 0.0;
};

template <typename Weight>
struct Edge {
    VertexId u = 0;
    VertexId v = 0;
    Weight w{};
};

struct Neighbor {
    VertexId to = 0;
    int edge = 0;  // index into edges()
};

class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Undirected graph with positive edge weights. Immutable after construction;
/// every edge is traversable both ways at the same cost.
template <typename Weight>
class WeightedGraph {
public:
    using EdgeType = Edge<Weight>;

    WeightedGraph() = default;
    WeightedGraph(std::vector<Vertex> vertices, std::vector<EdgeType> edges);

    [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices_.size()); }
    [[nodiscard]] int num_edges() const { return static_cast<int>(edges_.size()); }
    [[nodiscard]] const std::vector<Vertex>& vertices() const { return vertices_; }
    [[nodiscard]] const std::vector<EdgeType>& edges() const { return edges_; }
    [[nodiscard]] const Vertex& vertex(VertexId id) const { return vertices_.at(id); }

    [[nodiscard]] std::span<const Neighbor> neighbors(VertexId v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }

    /// Index of the edge joining u and v (either orientation), if any.
    [[nodiscard]] std::optional<int> find_edge(VertexId u, VertexId v) const;
    [[nodiscard]] std::optional<Weight> weight(VertexId u, VertexId v) const;
    [[nodiscard]] Weight max_weight() const;

private:
    static std::uint64_t key(VertexId u, VertexId v) {
        if (u > v) std::swap(u, v);
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
               static_cast<std::uint32_t>(v);
    }

    std::vector<Vertex> vertices_;
    std::vector<EdgeType> edges_;
    std::vector<int> offsets_{0};
    std::vector<Neighbor> adjacency_;
    std::unordered_map<std::uint64_t, int> edge_index_;
};

using RealGraph = WeightedGraph<double>;
using IntGraph = WeightedGraph<int>;

extern template class WeightedGraph<double>;
extern template class WeightedGraph<int>;

/// Occupancy grid in Moving AI terms. `terrain` keeps the raw glyphs so a
/// parsed map serializes back unchanged.
struct GridSpec {
    int width = 0;
    int height = 0;
    std::vector<char> terrain;  // row-major, width * height
    int k = 3;

    [[nodiscard]] bool in_bounds(int x, int y) const {
        return x >= 0 && y >= 0 && x < width && y < height;
    }
    [[nodiscard]] bool passable(int x, int y) const;
    [[nodiscard]] int passable_count() const;

    static GridSpec from_rows(const std::vector<std::string>& rows, int k = 3);
};

[[nodiscard]] bool is_passable_glyph(char c);

/// Cell offsets (dx, dy) of the 2^k-connected neighborhood, k in {3, 4, 5}.
[[nodiscard]] std::vector<std::pair<int, int>> neighborhood_offsets(int k);

/// Cells whose closed unit square touches the segment between the centers of
/// (x0, y0) and (x1, y1).
[[nodiscard]] std::vector<std::pair<int, int>> supercover_cells(int x0, int y0, int x1, int y1);

/// Maps grid cells to graph vertices. Vertices are numbered in row-major
/// order over passable cells.
class GridIndex {
public:
    explicit GridIndex(const GridSpec& grid);
    [[nodiscard]] std::optional<VertexId> vertex_at(int x, int y) const;
    [[nodiscard]] int size() const { return count_; }

private:
    int width_ = 0;
    int height_ = 0;
    int count_ = 0;
    std::vector<VertexId> cell_to_vertex_;
};

[[nodiscard]] RealGraph build_grid_graph(const GridSpec& grid);

}  // namespace mapfz
