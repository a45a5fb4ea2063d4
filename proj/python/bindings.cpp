#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mapfz/bench.hpp"
#include "mapfz/bogd.hpp"
#include "mapfz/cbs.hpp"
#include "mapfz/discretization.hpp"
#include "mapfz/map_io.hpp"
#include "mapfz/nsga2.hpp"

namespace py = pybind11;
using namespace mapfz;

namespace {

template <typename W>
void bind_graph(py::module_& m, const char* name) {
    using G = WeightedGraph<W>;
    py::class_<G>(m, name)
        .def(py::init([](const std::vector<std::tuple<double, double>>& positions,
                         const std::vector<std::tuple<VertexId, VertexId, W>>& edges) {
                 std::vector<Vertex> vs;
                 for (std::size_t i = 0; i < positions.size(); ++i)
                     vs.push_back({static_cast<VertexId>(i), std::get<0>(positions[i]), std::get<1>(positions[i])});
                 std::vector<Edge<W>> es;
                 for (const auto& [u, v, w] : edges) es.push_back({u, v, w});
                 return G(std::move(vs), std::move(es));
             }),
             py::arg("positions"), py::arg("edges"))
        .def_property_readonly("num_vertices", &G::num_vertices)
        .def_property_readonly("num_edges", &G::num_edges)
        .def("edges",
             [](const G& g) {
                 std::vector<std::tuple<VertexId, VertexId, W>> out;
                 for (const auto& e : g.edges()) out.emplace_back(e.u, e.v, e.w);
                 return out;
             })
        .def("weight", &G::weight, py::arg("u"), py::arg("v"));
}

std::vector<std::vector<std::pair<VertexId, Time>>> plans_to_py(const std::vector<TimedPlan>& plans) {
    std::vector<std::vector<std::pair<VertexId, Time>>> out;
    for (const auto& p : plans) {
        auto& row = out.emplace_back();
        for (const auto& s : p.steps) row.emplace_back(s.vertex, s.arrival);
    }
    return out;
}

std::vector<TimedPlan> plans_from_py(const std::vector<std::vector<std::pair<VertexId, Time>>>& plans) {
    std::vector<TimedPlan> out;
    for (const auto& row : plans) {
        auto& p = out.emplace_back();
        for (const auto& [v, t] : row) p.steps.push_back({v, t});
    }
    return out;
}

py::dict stats_to_py(const SolveStats& s) {
    py::dict d;
    d["nodes_generated"] = s.nodes_generated;
    d["nodes_expanded"] = s.nodes_expanded;
    d["low_level_calls"] = s.low_level_calls;
    d["horizon"] = s.horizon;
    d["wall_time_s"] = s.wall_time_s;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Makespan-optimal multi-agent pathfinding on weighted graphs";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<InstanceError>(m, "InstanceError", PyExc_ValueError);
    py::register_exception<GraphError>(m, "GraphError", PyExc_ValueError);

    bind_graph<double>(m, "RealGraph");
    bind_graph<int>(m, "IntGraph");

    py::class_<GridSpec>(m, "Grid")
        .def_readonly("width", &GridSpec::width)
        .def_readonly("height", &GridSpec::height)
        .def_readonly("k", &GridSpec::k)
        .def("passable", &GridSpec::passable, py::arg("x"), py::arg("y"));

    py::class_<ScenarioEntry>(m, "ScenarioEntry")
        .def_readonly("bucket", &ScenarioEntry::bucket)
        .def_readonly("map_name", &ScenarioEntry::map_name)
        .def_property_readonly("start", [](const ScenarioEntry& e) { return std::make_pair(e.start.x, e.start.y); })
        .def_property_readonly("goal", [](const ScenarioEntry& e) { return std::make_pair(e.goal.x, e.goal.y); })
        .def_readonly("optimal_length", &ScenarioEntry::optimal_length);

    py::class_<Instance>(m, "Instance")
        .def(py::init([](std::vector<VertexId> starts, std::vector<VertexId> goals) {
                 Instance i;
                 i.starts = std::move(starts);
                 i.goals = std::move(goals);
                 return i;
             }),
             py::arg("starts"), py::arg("goals"))
        .def_readonly("starts", &Instance::starts)
        .def_readonly("goals", &Instance::goals)
        .def_property_readonly("num_agents", &Instance::num_agents);

    m.def("parse_map", &parse_map, py::arg("text"), py::arg("k") = 3);
    m.def("serialize_map", &serialize_map, py::arg("grid"));
    m.def("parse_scen", &parse_scen, py::arg("text"));
    m.def("serialize_scen", &serialize_scen, py::arg("entries"));
    m.def("parse_roadmap", &parse_roadmap, py::arg("text"));
    m.def("serialize_roadmap", &serialize_roadmap, py::arg("graph"));
    m.def("build_grid_graph", &build_grid_graph, py::arg("grid"));
    m.def("make_instance", &make_instance, py::arg("grid"), py::arg("scenario"), py::arg("n_agents"));
    m.def("make_roadmap_instance", &make_roadmap_instance, py::arg("roadmap"), py::arg("scenario"),
          py::arg("n_agents"));

    m.def("discretize", &discretize, py::arg("graph"), py::arg("s"));
    m.def(
        "discretization_error",
        [](const RealGraph& g, double s, const std::vector<std::vector<std::pair<VertexId, Time>>>& plans) {
            return discretization_error(g, s, plans_from_py(plans));
        },
        py::arg("graph"), py::arg("s"), py::arg("plans"));

    m.def(
        "solve",
        [](const IntGraph& g, const Instance& inst, bool disjoint, bool prioritize, int lazy_pc, double timeout_s,
           std::optional<Time> horizon) {
            CbsConfig cfg;
            cfg.splitting = disjoint ? Splitting::Disjoint : Splitting::NonDisjoint;
            cfg.prioritize_conflicts = prioritize;
            cfg.lazy_pc = lazy_pc;
            cfg.timeout_s = timeout_s;
            cfg.horizon = horizon;
            SolveResult res;
            {
                py::gil_scoped_release release;
                res = solve(g, inst, cfg);
            }
            py::dict d;
            if (const auto* sol = std::get_if<Solution>(&res)) {
                d["success"] = true;
                d["plans"] = plans_to_py(sol->plans);
                d["makespan"] = sol->makespan;
                d["stats"] = stats_to_py(sol->stats);
            } else {
                const auto& f = std::get<Failure>(res);
                d["success"] = false;
                d["reason"] = to_string(f.reason);
                d["stats"] = stats_to_py(f.stats);
            }
            return d;
        },
        py::arg("graph"), py::arg("instance"), py::arg("disjoint") = true, py::arg("prioritize") = true,
        py::arg("lazy_pc") = 8, py::arg("timeout_s") = 30.0, py::arg("horizon") = py::none());

    m.def(
        "validate_solution",
        [](const IntGraph& g, const Instance& inst, const std::vector<std::vector<std::pair<VertexId, Time>>>& plans) {
            std::vector<std::string> out;
            for (const auto& v : validate_solution(g, inst, plans_from_py(plans))) out.push_back(v.message);
            return out;
        },
        py::arg("graph"), py::arg("instance"), py::arg("plans"));

    m.def("lcb", py::overload_cast<double, double, int, double>(&lcb), py::arg("mean"), py::arg("stddev"),
          py::arg("t"), py::arg("delta"));

    m.def(
        "non_dominated_sort",
        [](const std::vector<std::pair<double, double>>& pts) {
            std::vector<Objectives> obj;
            for (const auto& [a, b] : pts) obj.push_back({a, b});
            return non_dominated_sort(obj);
        },
        py::arg("points"));

    m.def(
        "tune",
        [](const std::function<std::tuple<double, double, bool>(double)>& evaluate, double s_min, double s_max,
           int budget, int population, int generations, double delta, std::uint64_t seed) {
            BogdConfig cfg;
            cfg.s_min = s_min;
            cfg.s_max = s_max;
            cfg.budget = budget;
            cfg.population = population;
            cfg.generations = generations;
            cfg.delta = delta;
            cfg.seed = seed;
            const auto res = bogd_run(
                [&](double s) {
                    const auto [runtime, error, ok] = evaluate(s);
                    EvalResult r;
                    r.runtime = runtime;
                    r.error = error;
                    r.success = ok;
                    return r;
                },
                {}, cfg);
            py::dict d;
            d["best_s"] = res.best_s ? py::cast(*res.best_s) : py::none();
            py::list obs;
            for (const auto& o : res.observations) obs.append(py::make_tuple(o.s, o.runtime, o.error, o.success));
            d["observations"] = obs;
            d["report"] = format_tuning_report(res);
            return d;
        },
        py::arg("evaluate"), py::arg("s_min"), py::arg("s_max"), py::arg("budget") = 25, py::arg("population") = 20,
        py::arg("generations") = 30, py::arg("delta") = 0.1, py::arg("seed") = 0);
}
