#include "mapfz/constraints.hpp"

#include <algorithm>
#include <sstream>

namespace mapfz {

void ConstraintSet::append(const ConstraintSet& other) {
    neg_vertex.insert(neg_vertex.end(), other.neg_vertex.begin(), other.neg_vertex.end());
    neg_edge.insert(neg_edge.end(), other.neg_edge.begin(), other.neg_edge.end());
    pos_vertex.insert(pos_vertex.end(), other.pos_vertex.begin(), other.pos_vertex.end());
}

std::vector<AgentId> ConstraintSet::constrained_agents() const {
    std::vector<AgentId> out;
    for (const auto& c : neg_vertex) out.push_back(c.agent);
    for (const auto& c : neg_edge) out.push_back(c.agent);
    for (const auto& c : pos_vertex) out.push_back(c.agent);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string describe(const ConstraintSet& c) {
    std::ostringstream out;
    const char* sep = "";
    for (const auto& v : c.neg_vertex) {
        out << sep << "!<" << v.agent << "," << v.vertex << "," << v.time << ">";
        sep = " ";
    }
    for (const auto& e : c.neg_edge) {
        out << sep << "!<" << e.agent << "," << e.from << "->" << e.to << ",(" << e.lo << "," << e.hi << ")>";
        sep = " ";
    }
    for (const auto& p : c.pos_vertex) {
        out << sep << "<" << p.agent << "," << p.vertex << "," << p.time << ">";
        sep = " ";
    }
    return out.str();
}

}  // namespace mapfz
