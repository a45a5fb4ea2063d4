#include "mapfz/map_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace mapfz {
namespace {

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string line(text.substr(pos, nl - pos));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        pos = nl + 1;
    }
    return lines;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t tab = line.find('\t', pos);
        out.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
        if (tab == std::string::npos) break;
        pos = tab + 1;
    }
    return out;
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

// gcc 11 has no floating from_chars for all locales; strtod is fine here.
bool parse_real(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

[[noreturn]] void fail(std::string_view fmt, std::size_t line, const std::string& what) {
    throw ParseError(std::string(fmt) + ": line " + std::to_string(line) + ": " + what);
}

int header_value(const std::vector<std::string>& lines, std::size_t idx, const char* key) {
    if (idx >= lines.size()) fail("map", idx + 1, std::string("expected '") + key + " <n>'");
    const auto toks = split_ws(lines[idx]);
    int value = 0;
    if (toks.size() != 2 || toks[0] != key) fail("map", idx + 1, std::string("expected '") + key + " <n>'");
    if (!parse_number(toks[1], value) || value <= 0) fail("map", idx + 1, std::string("invalid ") + key + " '" + toks[1] + "'");
    return value;
}

bool known_glyph(char c) {
    return c == '.' || c == 'G' || c == '@' || c == 'O' || c == 'T' || c == 'W';
}

}  // namespace

GridSpec parse_map(std::string_view text, int k) {
    auto lines = split_lines(text);
    if (lines.empty() || split_ws(lines[0]) != std::vector<std::string>{"type", "octile"})
        fail("map", 1, "expected 'type octile'");
    GridSpec grid;
    grid.k = k;
    grid.height = header_value(lines, 1, "height");
    grid.width = header_value(lines, 2, "width");
    if (lines.size() < 4 || split_ws(lines[3]) != std::vector<std::string>{"map"}) fail("map", 4, "expected 'map'");

    // Trailing blank lines are tolerated; anything else must be a grid row.
    std::size_t end = lines.size();
    while (end > 4 && lines[end - 1].empty()) --end;
    const std::size_t rows = end - 4;
    if (rows != static_cast<std::size_t>(grid.height))
        throw ParseError("map: expected " + std::to_string(grid.height) + " rows, found " + std::to_string(rows));
    grid.terrain.reserve(static_cast<std::size_t>(grid.width) * grid.height);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto& row = lines[4 + r];
        if (row.size() != static_cast<std::size_t>(grid.width))
            fail("map", 5 + r, "row has " + std::to_string(row.size()) + " cells, expected " + std::to_string(grid.width));
        for (char c : row) {
            if (!known_glyph(c)) fail("map", 5 + r, std::string("unknown cell character '") + c + "'");
            grid.terrain.push_back(c);
        }
    }
    return grid;
}

std::string serialize_map(const GridSpec& grid) {
    std::string out = "type octile\nheight " + std::to_string(grid.height) + "\nwidth " +
                      std::to_string(grid.width) + "\nmap\n";
    for (int y = 0; y < grid.height; ++y) {
        out.append(grid.terrain.begin() + static_cast<std::ptrdiff_t>(y) * grid.width,
                   grid.terrain.begin() + static_cast<std::ptrdiff_t>(y + 1) * grid.width);
        out.push_back('\n');
    }
    return out;
}

std::vector<ScenarioEntry> parse_scen(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) fail("scen", 1, "expected 'version 1'");
    const auto head = split_ws(lines[0]);
    if (head.size() != 2 || head[0] != "version" || (head[1] != "1" && head[1] != "1.0"))
        fail("scen", 1, "expected 'version 1'");

    static const char* kFields[] = {"bucket", "map", "width", "height", "sx", "sy", "gx", "gy", "optimal"};
    std::vector<ScenarioEntry> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = split_tabs(lines[i]);
        if (f.size() != 9)
            fail("scen", i + 1, "expected 9 tab-separated fields, found " + std::to_string(f.size()));
        ScenarioEntry e;
        int* ints[] = {&e.bucket, nullptr, &e.map_width, &e.map_height, &e.start.x, &e.start.y, &e.goal.x, &e.goal.y};
        for (int c = 0; c < 8; ++c) {
            if (c == 1) continue;
            if (!parse_number(f[c], *ints[c])) fail("scen", i + 1, std::string("field '") + kFields[c] + "' is not an integer");
        }
        e.map_name = f[1];
        if (!parse_real(f[8], e.optimal_length)) fail("scen", i + 1, "field 'optimal' is not a number");
        auto inside = [&](CellCoord c) { return c.x >= 0 && c.y >= 0 && c.x < e.map_width && c.y < e.map_height; };
        if (!inside(e.start) || !inside(e.goal)) fail("scen", i + 1, "coordinates outside the declared map bounds");
        if (e.start == e.goal) fail("scen", i + 1, "start equals goal");
        out.push_back(std::move(e));
    }
    return out;
}

std::string serialize_scen(const std::vector<ScenarioEntry>& entries) {
    std::ostringstream out;
    out << "version 1\n";
    for (const auto& e : entries) {
        out << e.bucket << '\t' << e.map_name << '\t' << e.map_width << '\t' << e.map_height << '\t'
            << e.start.x << '\t' << e.start.y << '\t' << e.goal.x << '\t' << e.goal.y << '\t'
            << std::fixed << std::setprecision(8) << e.optimal_length << '\n';
    }
    return out.str();
}

RealGraph parse_roadmap(std::string_view text) {
    const auto lines = split_lines(text);
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto toks = split_ws(lines[i]);
        if (toks.empty() || toks[0].front() == '#') continue;
        rows.emplace_back(i + 1, std::move(toks));
    }
    std::size_t r = 0;
    auto expect_count = [&](const char* tag) {
        int n = 0;
        if (r >= rows.size()) throw ParseError(std::string("roadmap: missing '") + tag + " <count>' line");
        const auto& [ln, t] = rows[r];
        if (t.size() != 2 || t[0] != tag || !parse_number(t[1], n) || n < 0)
            fail("roadmap", ln, std::string("expected '") + tag + " <count>'");
        ++r;
        return n;
    };
    const int n = expect_count("v");
    std::vector<Vertex> vertices;
    for (int i = 0; i < n; ++i, ++r) {
        if (r >= rows.size()) throw ParseError("roadmap: expected " + std::to_string(n) + " vertex lines");
        const auto& [ln, t] = rows[r];
        Vertex v;
        if (t.size() != 3 || !parse_number(t[0], v.id) || !parse_real(t[1], v.x) || !parse_real(t[2], v.y))
            fail("roadmap", ln, "expected '<id> <x> <y>'");
        if (v.id != i) fail("roadmap", ln, "vertex ids must be 0..n-1 in order");
        vertices.push_back(v);
    }
    const int m = expect_count("e");
    std::vector<Edge<double>> edges;
    for (int i = 0; i < m; ++i, ++r) {
        if (r >= rows.size()) throw ParseError("roadmap: expected " + std::to_string(m) + " edge lines");
        const auto& [ln, t] = rows[r];
        Edge<double> e;
        if (t.size() != 3 || !parse_number(t[0], e.u) || !parse_number(t[1], e.v) || !parse_real(t[2], e.w))
            fail("roadmap", ln, "expected '<u> <v> <w>'");
        if (!(e.w > 0)) fail("roadmap", ln, "edge weight must be positive");
        edges.push_back(e);
    }
    if (r != rows.size()) fail("roadmap", rows[r].first, "unexpected trailing content");
    try {
        return {std::move(vertices), std::move(edges)};
    } catch (const GraphError& err) {
        throw ParseError(std::string("roadmap: ") + err.what());
    }
}

std::string serialize_roadmap(const RealGraph& g) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "v " << g.num_vertices() << '\n';
    for (const auto& v : g.vertices()) out << v.id << ' ' << v.x << ' ' << v.y << '\n';
    out << "e " << g.num_edges() << '\n';
    for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.w << '\n';
    return out.str();
}

void validate_instance(const Instance& inst, int num_vertices) {
    if (inst.starts.size() != inst.goals.size()) throw InstanceError("starts and goals differ in length");
    if (inst.num_agents() >= num_vertices)
        throw InstanceError("need fewer agents than vertices (" + std::to_string(inst.num_agents()) +
                            " agents, " + std::to_string(num_vertices) + " vertices)");
    std::set<VertexId> starts, goals;
    for (int a = 0; a < inst.num_agents(); ++a) {
        for (VertexId v : {inst.starts[a], inst.goals[a]})
            if (v < 0 || v >= num_vertices) throw InstanceError("agent " + std::to_string(a) + " uses unknown vertex " + std::to_string(v));
        if (!starts.insert(inst.starts[a]).second) throw InstanceError("duplicate start vertex for agent " + std::to_string(a));
        if (!goals.insert(inst.goals[a]).second) throw InstanceError("duplicate goal vertex for agent " + std::to_string(a));
    }
}

namespace {

template <typename Locate>
Instance select_agents(const std::vector<ScenarioEntry>& scen, int n_agents, int num_vertices, Locate&& locate) {
    if (n_agents < 0) throw InstanceError("agent count must be non-negative");
    if (static_cast<std::size_t>(n_agents) > scen.size())
        throw InstanceError("requested " + std::to_string(n_agents) + " agents but the scenario has " +
                            std::to_string(scen.size()) + " entries");
    Instance inst;
    for (int a = 0; a < n_agents; ++a) {
        inst.starts.push_back(locate(scen[a].start, a, "start"));
        inst.goals.push_back(locate(scen[a].goal, a, "goal"));
    }
    validate_instance(inst, num_vertices);
    return inst;
}

}  // namespace

Instance make_instance(const GridSpec& grid, const std::vector<ScenarioEntry>& scen, int n_agents) {
    const GridIndex index(grid);
    return select_agents(scen, n_agents, index.size(), [&](CellCoord c, int a, const char* what) {
        const auto v = index.vertex_at(c.x, c.y);
        if (!v)
            throw InstanceError("agent " + std::to_string(a) + " " + what + " (" + std::to_string(c.x) + "," +
                                std::to_string(c.y) + ") is blocked or outside the map");
        return *v;
    });
}

Instance make_roadmap_instance(const RealGraph& roadmap, const std::vector<ScenarioEntry>& scen, int n_agents) {
    return select_agents(scen, n_agents, roadmap.num_vertices(), [&](CellCoord c, int a, const char* what) {
        if (c.y != 0 || c.x < 0 || c.x >= roadmap.num_vertices())
            throw InstanceError("agent " + std::to_string(a) + " " + what + " is not a roadmap vertex id");
        return c.x;
    });
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot write file");
    out << text;
}

}  // namespace mapfz
