#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mapfz/map_io.hpp"

using namespace mapfz;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures{MAPFZ_FIXTURES};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string parse_error_of(const fs::path& p) {
    const std::string text = slurp(p);
    try {
        if (p.extension() == ".map")
            (void)parse_map(text);
        else
            (void)parse_scen(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "<accepted>";
}

}  // namespace

TEST(MapFormat, CountsPassableCells) {
    const GridSpec g = parse_map("type octile\nheight 2\nwidth 2\nmap\n.@\n..\n");
    EXPECT_EQ(g.width, 2);
    EXPECT_EQ(g.height, 2);
    EXPECT_EQ(g.passable_count(), 3);
}

TEST(MapFormat, TooFewRowsIsAnError) {
    EXPECT_THROW((void)parse_map("type octile\nheight 3\nwidth 2\nmap\n..\n..\n"), ParseError);
}

TEST(MapFormat, GlyphSemantics) {
    const GridSpec g = parse_map("type octile\nheight 1\nwidth 6\nmap\n.G@OTW\n");
    EXPECT_TRUE(g.passable(0, 0));
    EXPECT_TRUE(g.passable(1, 0));
    for (int x = 2; x < 6; ++x) EXPECT_FALSE(g.passable(x, 0)) << x;
}

TEST(MapFormat, CrlfAndTrailingBlankLines) {
    const GridSpec g = parse_map("type octile\r\nheight 1\r\nwidth 2\r\nmap\r\n.@\r\n\r\n\n");
    EXPECT_EQ(g.passable_count(), 1);
}

TEST(MapFormat, MiniFixtureRoundTripsByteIdentically) {
    const std::string text = slurp(kFixtures / "mini.map");
    EXPECT_EQ(serialize_map(parse_map(text)), text);
}

TEST(MapFormat, BundledMapsRoundTrip) {
    for (const auto& entry : fs::directory_iterator(fs::path(MAPFZ_DATA) / "maps")) {
        const std::string text = slurp(entry.path());
        EXPECT_EQ(serialize_map(parse_map(text)), text) << entry.path();
    }
}

TEST(ScenFormat, FieldMapping) {
    const auto entries = parse_scen("version 1\n0\tempty.map\t16\t16\t1\t2\t3\t4\t2.82842712\n");
    ASSERT_EQ(entries.size(), 1u);
    EXPECT_EQ(entries[0].bucket, 0);
    EXPECT_EQ(entries[0].map_name, "empty.map");
    EXPECT_EQ(entries[0].start, (CellCoord{1, 2}));
    EXPECT_EQ(entries[0].goal, (CellCoord{3, 4}));
    EXPECT_DOUBLE_EQ(entries[0].optimal_length, 2.82842712);
}

TEST(ScenFormat, EmptyBody) { EXPECT_TRUE(parse_scen("version 1\n").empty()); }

TEST(ScenFormat, OrderPreserved) {
    std::string text = "version 1\n";
    for (int i = 0; i < 25; ++i)
        text += "0\tm.map\t32\t32\t" + std::to_string(i) + "\t0\t" + std::to_string(i) + "\t1\t1\n";
    const auto entries = parse_scen(text);
    ASSERT_EQ(entries.size(), 25u);
    for (int i = 0; i < 25; ++i) EXPECT_EQ(entries[i].start.x, i);
}

TEST(ScenFormat, MiniFixtureRoundTripsByteIdentically) {
    const std::string text = slurp(kFixtures / "mini.scen");
    EXPECT_EQ(serialize_scen(parse_scen(text)), text);
}

TEST(ScenFormat, BundledScenariosRoundTrip) {
    for (const auto& entry : fs::directory_iterator(fs::path(MAPFZ_DATA) / "scen")) {
        const std::string text = slurp(entry.path());
        EXPECT_EQ(serialize_scen(parse_scen(text)), text) << entry.path();
    }
}

TEST(Malformed, DocumentedDiagnostics) {
    std::ifstream manifest(kFixtures / "malformed" / "expected.txt");
    std::string line;
    int checked = 0;
    while (std::getline(manifest, line)) {
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        ASSERT_NE(tab, std::string::npos);
        const std::string file = line.substr(0, tab), expected = line.substr(tab + 1);
        EXPECT_EQ(parse_error_of(kFixtures / "malformed" / file), expected) << file;
        ++checked;
    }
    EXPECT_EQ(checked, 10);
}

TEST(Roadmap, RoundTripIsFixedPoint) {
    const std::string text = "# tiny\nv 3\n0 0 0\n1 1.5 0\n2 1.5 2\ne 2\n0 1 1.5\n1 2 2.25\n";
    const RealGraph g = parse_roadmap(text);
    ASSERT_EQ(g.num_vertices(), 3);
    ASSERT_EQ(g.num_edges(), 2);
    EXPECT_DOUBLE_EQ(*g.weight(1, 2), 2.25);
    const std::string once = serialize_roadmap(g);
    EXPECT_EQ(serialize_roadmap(parse_roadmap(once)), once);
}

TEST(Roadmap, Rejections) {
    EXPECT_THROW((void)parse_roadmap("v 2\n0 0 0\n1 1 1\ne 1\n0 1 -1\n"), ParseError);
    EXPECT_THROW((void)parse_roadmap("v 2\n0 0 0\n2 1 1\ne 0\n"), ParseError);
    EXPECT_THROW((void)parse_roadmap("v 2\n0 0 0\n"), ParseError);
    EXPECT_THROW((void)parse_roadmap("v 2\n0 0 0\n1 1 1\ne 1\n0 0 1\n"), ParseError);
}

TEST(Instances, PrefixSelection) {
    const GridSpec grid = parse_map(slurp(kFixtures / "mini.map"));
    const auto scen = parse_scen(slurp(kFixtures / "mini.scen"));
    const Instance one = make_instance(grid, scen, 1);
    EXPECT_EQ(one.num_agents(), 1);
    const Instance three = make_instance(grid, scen, 3);
    EXPECT_EQ(three.num_agents(), 3);
    EXPECT_EQ(three.starts[0], one.starts[0]);
}

TEST(Instances, Rejections) {
    const GridSpec grid = parse_map("type octile\nheight 2\nwidth 3\nmap\n...\n.@.\n");
    const auto shared_goal = parse_scen("version 1\n0\tm\t3\t2\t0\t0\t2\t1\t1\n0\tm\t3\t2\t1\t0\t2\t1\t1\n");
    EXPECT_THROW((void)make_instance(grid, shared_goal, 2), InstanceError);
    const auto shared_start = parse_scen("version 1\n0\tm\t3\t2\t0\t0\t2\t1\t1\n0\tm\t3\t2\t0\t0\t2\t0\t1\n");
    EXPECT_THROW((void)make_instance(grid, shared_start, 2), InstanceError);
    const auto blocked = parse_scen("version 1\n0\tm\t3\t2\t1\t1\t2\t1\t1\n");
    EXPECT_THROW((void)make_instance(grid, blocked, 1), InstanceError);
    EXPECT_THROW((void)make_instance(grid, shared_goal, 50), InstanceError);
    // |A| < |V|: five passable cells cannot hold five agents.
    std::string many = "version 1\n";
    const int cells[5][2] = {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {2, 1}};
    for (int i = 0; i < 5; ++i)
        many += "0\tm\t3\t2\t" + std::to_string(cells[i][0]) + "\t" + std::to_string(cells[i][1]) + "\t" +
                std::to_string(cells[(i + 1) % 5][0]) + "\t" + std::to_string(cells[(i + 1) % 5][1]) + "\t1\n";
    EXPECT_NO_THROW((void)make_instance(grid, parse_scen(many), 4));
    EXPECT_THROW((void)make_instance(grid, parse_scen(many), 5), InstanceError);
}

TEST(Instances, RoadmapScenarioUsesVertexIds) {
    const RealGraph g = parse_roadmap("v 3\n0 0 0\n1 1 0\n2 2 0\ne 2\n0 1 1\n1 2 1\n");
    const auto scen = parse_scen("version 1\n0\tr\t3\t1\t0\t0\t2\t0\t2\n");
    const Instance inst = make_roadmap_instance(g, scen, 1);
    EXPECT_EQ(inst.starts[0], 0);
    EXPECT_EQ(inst.goals[0], 2);
}
