#include "mapfz/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace mapfz {

template <typename Weight>
WeightedGraph<Weight>::WeightedGraph(std::vector<Vertex> vertices, std::vector<EdgeType> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    const int n = num_vertices();
    for (int i = 0; i < n; ++i) {
        if (vertices_[i].id != i) throw GraphError("vertex ids must be contiguous from 0");
        if (!std::isfinite(vertices_[i].x) || !std::isfinite(vertices_[i].y))
            throw GraphError("vertex " + std::to_string(i) + " has a non-finite position");
    }
    std::vector<int> degree(n, 0);
    for (int e = 0; e < num_edges(); ++e) {
        const auto& edge = edges_[e];
        if (edge.u < 0 || edge.v < 0 || edge.u >= n || edge.v >= n)
            throw GraphError("edge " + std::to_string(e) + " references an unknown vertex");
        if (edge.u == edge.v) throw GraphError("edge " + std::to_string(e) + " is a self-loop");
        if constexpr (std::is_floating_point_v<Weight>) {
            if (!(edge.w > 0) || !std::isfinite(edge.w))
                throw GraphError("edge " + std::to_string(e) + " needs a positive finite weight");
        } else {
            if (edge.w < 1) throw GraphError("edge " + std::to_string(e) + " needs weight >= 1");
        }
        if (!edge_index_.emplace(key(edge.u, edge.v), e).second)
            throw GraphError("duplicate edge " + std::to_string(edge.u) + "-" + std::to_string(edge.v));
        ++degree[edge.u];
        ++degree[edge.v];
    }
    offsets_.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
    adjacency_.resize(offsets_[n]);
    std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
    for (int e = 0; e < num_edges(); ++e) {
        adjacency_[fill[edges_[e].u]++] = {edges_[e].v, e};
        adjacency_[fill[edges_[e].v]++] = {edges_[e].u, e};
    }
    for (int i = 0; i < n; ++i) {
        std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1],
                  [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
    }
}

template <typename Weight>
std::optional<int> WeightedGraph<Weight>::find_edge(VertexId u, VertexId v) const {
    auto it = edge_index_.find(key(u, v));
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

template <typename Weight>
std::optional<Weight> WeightedGraph<Weight>::weight(VertexId u, VertexId v) const {
    auto e = find_edge(u, v);
    if (!e) return std::nullopt;
    return edges_[*e].w;
}

template <typename Weight>
Weight WeightedGraph<Weight>::max_weight() const {
    Weight best{};
    for (const auto& e : edges_) best = std::max(best, e.w);
    return best;
}

template class WeightedGraph<double>;
template class WeightedGraph<int>;

bool is_passable_glyph(char c) { return c == '.' || c == 'G'; }

bool GridSpec::passable(int x, int y) const {
    return in_bounds(x, y) && is_passable_glyph(terrain[static_cast<std::size_t>(y) * width + x]);
}

int GridSpec::passable_count() const {
    return static_cast<int>(std::count_if(terrain.begin(), terrain.end(), is_passable_glyph));
}

GridSpec GridSpec::from_rows(const std::vector<std::string>& rows, int k) {
    GridSpec g;
    g.height = static_cast<int>(rows.size());
    g.width = rows.empty() ? 0 : static_cast<int>(rows.front().size());
    g.k = k;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != g.width) throw GraphError("ragged grid rows");
        g.terrain.insert(g.terrain.end(), row.begin(), row.end());
    }
    return g;
}

std::vector<std::pair<int, int>> neighborhood_offsets(int k) {
    if (k < 3 || k > 5) throw GraphError("neighborhood exponent k must be 3, 4 or 5, got " + std::to_string(k));
    // Each ring adds the primitive (gcd 1) offsets of the next Chebyshev radius
    // that the 2^k neighborhoods use: ring 1 -> 8, (1,2) -> +8, (1,3),(2,3) -> +16.
    std::vector<std::pair<int, int>> bases = {{1, 0}, {1, 1}};
    if (k >= 4) bases.emplace_back(1, 2);
    if (k >= 5) {
        bases.emplace_back(1, 3);
        bases.emplace_back(2, 3);
    }
    std::vector<std::pair<int, int>> out;
    for (auto [a, b] : bases) {
        for (auto [dx, dy] : {std::pair{a, b}, std::pair{b, a}}) {
            for (int sx : {1, -1}) {
                for (int sy : {1, -1}) {
                    std::pair<int, int> off{sx * dx, sy * dy};
                    if (std::find(out.begin(), out.end(), off) == out.end()) out.push_back(off);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<int, int>> supercover_cells(int x0, int y0, int x1, int y1) {
    // Doubled coordinates keep everything integral: the segment runs between
    // (2x0+1, 2y0+1) and (2x1+1, 2y1+1), cell (cx, cy) spans [2cx, 2cx+2]^2.
    const long long ax = 2LL * x0 + 1, ay = 2LL * y0 + 1;
    const long long bx = 2LL * x1 + 1, by = 2LL * y1 + 1;
    const long long dx = bx - ax, dy = by - ay;
    auto side = [&](long long px, long long py) {
        const long long c = dx * (py - ay) - dy * (px - ax);
        return (c > 0) - (c < 0);
    };
    std::vector<std::pair<int, int>> out;
    for (int cy = std::min(y0, y1); cy <= std::max(y0, y1); ++cy) {
        for (int cx = std::min(x0, x1); cx <= std::max(x0, x1); ++cx) {
            const long long lx = 2LL * cx, ly = 2LL * cy;
            const int s1 = side(lx, ly), s2 = side(lx + 2, ly);
            const int s3 = side(lx, ly + 2), s4 = side(lx + 2, ly + 2);
            const bool all_pos = s1 > 0 && s2 > 0 && s3 > 0 && s4 > 0;
            const bool all_neg = s1 < 0 && s2 < 0 && s3 < 0 && s4 < 0;
            if (!all_pos && !all_neg) out.emplace_back(cx, cy);
        }
    }
    return out;
}

GridIndex::GridIndex(const GridSpec& grid)
    : width_(grid.width), height_(grid.height), cell_to_vertex_(grid.terrain.size(), -1) {
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            if (grid.passable(x, y)) cell_to_vertex_[static_cast<std::size_t>(y) * width_ + x] = count_++;
        }
    }
}

std::optional<VertexId> GridIndex::vertex_at(int x, int y) const {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return std::nullopt;
    const VertexId v = cell_to_vertex_[static_cast<std::size_t>(y) * width_ + x];
    if (v < 0) return std::nullopt;
    return v;
}

RealGraph build_grid_graph(const GridSpec& grid) {
    if (grid.width < 0 || grid.height < 0 ||
        grid.terrain.size() != static_cast<std::size_t>(grid.width) * grid.height)
        throw GraphError("grid terrain size does not match width*height");
    const auto offsets = neighborhood_offsets(grid.k);
    const GridIndex index(grid);

    std::vector<Vertex> vertices;
    vertices.reserve(index.size());
    for (int y = 0; y < grid.height; ++y)
        for (int x = 0; x < grid.width; ++x)
            if (auto v = index.vertex_at(x, y)) vertices.push_back({*v, double(x), double(y)});

    std::vector<Edge<double>> edges;
    for (int y = 0; y < grid.height; ++y) {
        for (int x = 0; x < grid.width; ++x) {
            const auto u = index.vertex_at(x, y);
            if (!u) continue;
            for (auto [dx, dy] : offsets) {
                const auto v = index.vertex_at(x + dx, y + dy);
                // Each undirected edge once, from its lower-id endpoint.
                if (!v || *v < *u) continue;
                const auto cells = supercover_cells(x, y, x + dx, y + dy);
                const bool clear = std::all_of(cells.begin(), cells.end(), [&](const auto& c) {
                    return grid.passable(c.first, c.second);
                });
                if (clear) edges.push_back({*u, *v, std::hypot(double(dx), double(dy))});
            }
        }
    }
    return {std::move(vertices), std::move(edges)};
}

}  // namespace mapfz
