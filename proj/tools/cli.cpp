#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mapfz/bench.hpp"
#include "mapfz/bogd.hpp"
#include "mapfz/cbs.hpp"
#include "mapfz/discretization.hpp"
#include "mapfz/map_io.hpp"

namespace mapfz::cli {
namespace {

namespace fs = std::filesystem;

/// Input/usage problem detected after CLI11 parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverOptions {
    int k = 3;
    double timeout = 30.0;
    bool ds = true;
    bool pc = true;
    int lazy_pc = 8;
    int horizon = 0;

    [[nodiscard]] CbsConfig config() const {
        CbsConfig c;
        c.splitting = ds ? Splitting::Disjoint : Splitting::NonDisjoint;
        c.prioritize_conflicts = pc;
        c.lazy_pc = lazy_pc;
        c.timeout_s = timeout;
        if (horizon > 0) c.horizon = horizon;
        return c;
    }
};

struct TuneOptions {
    double s_min = 0.5;
    double s_max = 2.0;
    double delta = 0.1;
    int budget = 25;
    int pop = 20;
    int generations = 30;
    double eval_timeout = 10.0;

    [[nodiscard]] BogdConfig config(std::uint64_t seed) const {
        BogdConfig c;
        c.s_min = s_min;
        c.s_max = s_max;
        c.delta = delta;
        c.budget = budget;
        c.population = pop;
        c.generations = generations;
        c.eval_timeout_s = eval_timeout;
        c.seed = seed;
        return c;
    }
};

struct InstanceOptions {
    std::string map, scen, roadmap;
    int agents = 1;
};

void add_solver_options(CLI::App* app, SolverOptions& o, bool with_k = true) {
    if (with_k) app->add_option("--k", o.k, "Grid neighborhood 2^k, k in {3,4,5}")->check(CLI::Range(3, 5));
    app->add_option("--timeout", o.timeout, "Solver wall-clock limit in seconds")->check(CLI::PositiveNumber);
    app->add_flag("--ds,!--no-ds", o.ds, "Disjoint splitting for vertex conflicts");
    app->add_flag("--pc,!--no-pc", o.pc, "Prioritize cardinal conflicts");
    app->add_option("--lazy-pc", o.lazy_pc, "Classify only the K earliest conflicts (0 = all)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--horizon", o.horizon, "Low-level horizon (0 = automatic)")->check(CLI::NonNegativeNumber);
}

void add_tune_options(CLI::App* app, TuneOptions& o) {
    app->add_option("--s-min", o.s_min, "Lower bound of the tuning range")->check(CLI::PositiveNumber);
    app->add_option("--s-max", o.s_max, "Upper bound of the tuning range")->check(CLI::PositiveNumber);
    app->add_option("--delta", o.delta, "Confidence parameter in (0,1)")->check(CLI::Range(1e-12, 1.0 - 1e-12));
    app->add_option("--budget", o.budget, "True evaluations")->check(CLI::Range(1, 100000));
    app->add_option("--pop", o.pop, "GA population size (even, >= 4)")->check(CLI::Range(4, 100000));
    app->add_option("--generations", o.generations, "GA generations")->check(CLI::NonNegativeNumber);
    app->add_option("--eval-timeout", o.eval_timeout, "Solver limit per tuning evaluation, seconds")
        ->check(CLI::PositiveNumber);
}

void add_instance_options(CLI::App* app, InstanceOptions& o) {
    auto* map = app->add_option("--map", o.map, "Moving AI .map file");
    auto* roadmap = app->add_option("--roadmap", o.roadmap, "Roadmap edge-list file");
    map->excludes(roadmap);
    app->add_option("--scen", o.scen, "Scenario file")->required();
    app->add_option("--agents", o.agents, "Number of agents (first N scenario entries)")->check(CLI::PositiveNumber);
}

struct LoadedInstance {
    RealGraph graph;
    Instance instance;
};

std::string read_input(const std::string& path) {
    try {
        return read_text_file(path);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

LoadedInstance load_instance(const InstanceOptions& o, int k) {
    if (o.map.empty() == o.roadmap.empty()) throw UsageError("exactly one of --map or --roadmap is required");
    LoadedInstance li;
    try {
        std::vector<ScenarioEntry> scen;
        try {
            scen = parse_scen(read_input(o.scen));
        } catch (const ParseError& e) {
            throw UsageError(o.scen + ": " + e.what());
        }
        if (!o.map.empty()) {
            GridSpec grid;
            try {
                grid = parse_map(read_input(o.map), k);
            } catch (const ParseError& e) {
                throw UsageError(o.map + ": " + e.what());
            }
            li.graph = build_grid_graph(grid);
            li.instance = make_instance(grid, scen, o.agents);
        } else {
            try {
                li.graph = parse_roadmap(read_input(o.roadmap));
            } catch (const ParseError& e) {
                throw UsageError(o.roadmap + ": " + e.what());
            }
            li.instance = make_roadmap_instance(li.graph, scen, o.agents);
        }
    } catch (const InstanceError& e) {
        throw UsageError(std::string("--agents: ") + e.what());
    } catch (const GraphError& e) {
        throw UsageError(e.what());
    }
    return li;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

void write_or_print(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    write_text_file(path, text);
}


/// Reads key=value files as if every bare key belonged to one subcommand.
class SubcommandConfig : public CLI::ConfigINI {
public:
    explicit SubcommandConfig(std::string name) : name_(std::move(name)) {}
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        auto items = CLI::ConfigINI::from_config(input);
        for (auto& item : items)
            if (item.parents.empty() && item.name != "++" && item.name != "--") item.parents = {name_};
        return items;
    }

private:
    std::string name_;
};

/// Subcommand `--config FILE` is applied by the root app, which is the only
/// level CLI11 reads config files at; move the flag there.
void hoist_config(std::vector<std::string>& argv, CLI::App& app) {
    if (argv.empty()) return;
    const std::string sub = argv.front();
    for (std::size_t i = 1; i < argv.size(); ++i) {
        std::string file;
        std::size_t span = 1;
        if (argv[i] == "--config" && i + 1 < argv.size()) {
            file = argv[i + 1];
            span = 2;
        } else if (argv[i].rfind("--config=", 0) == 0) {
            file = argv[i].substr(9);
        } else {
            continue;
        }
        argv.erase(argv.begin() + static_cast<std::ptrdiff_t>(i), argv.begin() + static_cast<std::ptrdiff_t>(i + span));
        app.set_config("--config", file, "", true);
        app.get_config_ptr()->group("");
        app.config_formatter(std::make_shared<SubcommandConfig>(sub));
        return;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Makespan-optimal multi-agent pathfinding on weighted graphs", "mapfz"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::uint64_t seed = 0;
    std::string config_path;

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Solve one instance and print the plans");
    InstanceOptions solve_inst;
    SolverOptions solve_opts;
    TuneOptions solve_tune;
    double solve_s = 1.0;
    bool solve_baseline = false, solve_tuned = false;
    std::string solve_out;
    solve_cmd->add_option("--config", config_path, "key=value file with defaults for these flags");
    add_instance_options(solve_cmd, solve_inst);
    add_solver_options(solve_cmd, solve_opts);
    auto* s_opt = solve_cmd->add_option("--s", solve_s, "Discretization scale: weights become max(1, round(w/s))")
                      ->check(CLI::PositiveNumber);
    auto* baseline_opt = solve_cmd->add_flag("--baseline", solve_baseline, "Plain integer rounding (s = 1)");
    auto* tune_opt = solve_cmd->add_flag("--tune", solve_tuned, "Choose s by Bayesian tuning first");
    s_opt->excludes(baseline_opt)->excludes(tune_opt);
    baseline_opt->excludes(tune_opt);
    add_tune_options(solve_cmd, solve_tune);
    solve_cmd->add_option("--seed", seed, "Random seed");
    solve_cmd->add_option("--out", solve_out, "Write the solution here instead of stdout");

    // tune
    auto* tune_cmd = app.add_subcommand("tune", "Tune the discretization scale for one instance");
    InstanceOptions tune_inst;
    SolverOptions tune_solver;
    TuneOptions tune_opts;
    std::string tune_report;
    tune_cmd->add_option("--config", config_path, "key=value file with defaults for these flags");
    add_instance_options(tune_cmd, tune_inst);
    add_solver_options(tune_cmd, tune_solver);
    add_tune_options(tune_cmd, tune_opts);
    tune_cmd->add_option("--seed", seed, "Random seed");
    tune_cmd->add_option("--report", tune_report, "Write the tuning report here instead of stdout");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite and write CSV summaries");
    std::vector<std::string> bench_maps, bench_roadmaps, bench_scens;
    std::string bench_ks = "3", bench_agents = "2,4,8,12,16", bench_modes = "baseline,bogd";
    SolverOptions bench_solver;
    bench_solver.timeout = 10.0;
    bench_solver.lazy_pc = 8;
    TuneOptions bench_tune;
    bench_tune.budget = 10;
    bench_tune.eval_timeout = 2.0;
    int bench_workers = 1, bench_reps = 1, bench_tune_agents = 0;
    std::string bench_out = "bench_out";
    bench_cmd->add_option("--config", config_path, "key=value file with defaults for these flags");
    bench_cmd->add_option("--map", bench_maps, "Grid map files (repeatable)");
    bench_cmd->add_option("--roadmap", bench_roadmaps, "Roadmap files (repeatable)");
    bench_cmd->add_option("--scen", bench_scens, "Scenario files, matched to maps by their map column")->required();
    bench_cmd->add_option("--k", bench_ks, "Comma-separated neighborhood parameters");
    bench_cmd->add_option("--agents", bench_agents, "Comma-separated ascending agent counts");
    bench_cmd->add_option("--modes", bench_modes, "Comma-separated modes: baseline, bogd, fixed:<s>");
    add_solver_options(bench_cmd, bench_solver, false);
    add_tune_options(bench_cmd, bench_tune);
    bench_cmd->add_option("--tune-agents", bench_tune_agents, "Agents in the tuning instance (0 = largest count)")
        ->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--workers", bench_workers, "Concurrent solver threads")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--repetitions", bench_reps, "Runs per instance")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", seed, "Random seed");
    bench_cmd->add_option("--out-dir", bench_out, "Directory for results.csv, summary.csv, tuning.csv and plot data");

    // convert
    auto* convert_cmd = app.add_subcommand("convert", "Convert a grid map to the roadmap edge-list format");
    std::string conv_map, conv_out, conv_scen, conv_scen_out;
    int conv_k = 3;
    convert_cmd->add_option("--config", config_path, "key=value file with defaults for these flags");
    convert_cmd->add_option("--map", conv_map, "Moving AI .map file")->required();
    convert_cmd->add_option("--k", conv_k, "Grid neighborhood 2^k, k in {3,4,5}")->check(CLI::Range(3, 5));
    convert_cmd->add_option("--out", conv_out, "Roadmap output path (stdout when empty)");
    auto* cs = convert_cmd->add_option("--scen", conv_scen, "Also convert this scenario to vertex ids");
    convert_cmd->add_option("--scen-out", conv_scen_out, "Output path for the converted scenario")->needs(cs);

    try {
        std::vector<std::string> argv = args;
        hoist_config(argv, app);
        std::vector<std::string> rev(argv.rbegin(), argv.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            app.exit(e, out, err);
            return kOk;
        }
        err << "mapfz: error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*solve_cmd) {
            const auto li = load_instance(solve_inst, solve_opts.k);
            const CbsConfig cfg = solve_opts.config();
            double s = solve_baseline ? 1.0 : solve_s;
            if (solve_tuned) {
                const auto br = bogd_run(li.graph, li.instance, solve_tune.config(seed), cfg);
                if (!br.best_s) {
                    err << "mapfz: tuning found no successful evaluation\n";
                    return kSolverFailure;
                }
                s = *br.best_s;
            }
            const IntGraph ig = discretize(li.graph, s);
            const SolveResult res = solve(ig, li.instance, cfg);
            std::ostringstream text;
            text << std::setprecision(10) << "s=" << s << '\n';
            if (const auto* sol = std::get_if<Solution>(&res)) {
                text << format_solution(sol->plans) << "makespan=" << sol->makespan << '\n'
                     << "error=" << discretization_error(li.graph, s, sol->plans) << '\n'
                     << format_stats(sol->stats);
                write_or_print(solve_out, text.str(), out);
                return kOk;
            }
            const auto& f = std::get<Failure>(res);
            text << "failure=" << to_string(f.reason) << '\n' << format_stats(f.stats);
            write_or_print(solve_out, text.str(), out);
            return kSolverFailure;
        }
        if (*tune_cmd) {
            const auto li = load_instance(tune_inst, tune_solver.k);
            if (tune_opts.s_min > tune_opts.s_max) throw UsageError("--s-min: must not exceed --s-max");
            if (tune_opts.pop % 2) throw UsageError("--pop: must be even");
            const auto br = bogd_run(li.graph, li.instance, tune_opts.config(seed), tune_solver.config());
            write_or_print(tune_report, format_tuning_report(br), out);
            return br.best_s ? kOk : kSolverFailure;
        }
        if (*bench_cmd) {
            ExperimentSpec spec;
            if (bench_maps.empty() && bench_roadmaps.empty()) throw UsageError("--map: at least one map is required");
            for (const auto& p : bench_maps) spec.maps.push_back({fs::path(p).stem().string(), p, false, {}});
            for (const auto& p : bench_roadmaps) spec.maps.push_back({fs::path(p).stem().string(), p, true, {}});
            for (const auto& sp : bench_scens) {
                std::vector<ScenarioEntry> entries;
                try {
                    entries = parse_scen(read_input(sp));
                } catch (const ParseError& e) {
                    throw UsageError(sp + ": " + e.what());
                }
                MapEntry* target = spec.maps.size() == 1 ? &spec.maps.front() : nullptr;
                if (!target && !entries.empty())
                    for (auto& m : spec.maps)
                        if (fs::path(entries.front().map_name).filename() == m.path.filename()) target = &m;
                if (!target) throw UsageError("--scen: no map matches " + sp);
                target->scenarios.push_back(sp);
            }
            try {
                spec.ks.clear();
                for (const auto& k : split_list(bench_ks)) spec.ks.push_back(std::stoi(k));
                spec.agent_counts.clear();
                for (const auto& n : split_list(bench_agents)) spec.agent_counts.push_back(std::stoi(n));
            } catch (const std::exception&) {
                throw UsageError("--k/--agents: expected comma-separated integers");
            }
            for (int k : spec.ks)
                if (k < 3 || k > 5) throw UsageError("--k: values must lie in {3,4,5}");
            try {
                for (const auto& m : split_list(bench_modes)) spec.modes.push_back(DiscretizationMode::parse(m));
            } catch (const std::exception& e) {
                throw UsageError(std::string("--modes: ") + e.what());
            }
            if (bench_tune.pop % 2) throw UsageError("--pop: must be even");
            spec.solver = bench_solver.config();
            spec.tuning = bench_tune.config(seed);
            if (bench_tune_agents > 0) spec.tune_agents = bench_tune_agents;
            spec.workers = bench_workers;
            spec.repetitions = bench_reps;
            spec.seed = seed;
            SuiteResult res;
            try {
                res = run_suite(spec);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            } catch (const std::runtime_error& e) {
                throw UsageError(e.what());
            }
            const auto summary = aggregate(res.rows);
            fs::create_directories(bench_out);
            const fs::path dir(bench_out);
            write_text_file(dir / "results.csv", format_results_csv(res.rows));
            write_text_file(dir / "summary.csv", format_summary_csv(summary));
            write_text_file(dir / "tuning.csv", format_tuning_csv(res.tuning));
            write_text_file(dir / "success.dat", format_success_plot(summary));
            write_text_file(dir / "runtime.dat", format_runtime_plot(summary));
            out << format_summary_csv(summary);
            return kOk;
        }
        if (*convert_cmd) {
            GridSpec grid;
            try {
                grid = parse_map(read_input(conv_map), conv_k);
            } catch (const ParseError& e) {
                throw UsageError(conv_map + ": " + e.what());
            }
            const RealGraph g = build_grid_graph(grid);
            write_or_print(conv_out, serialize_roadmap(g), out);
            if (!conv_scen.empty()) {
                std::vector<ScenarioEntry> entries;
                try {
                    entries = parse_scen(read_input(conv_scen));
                } catch (const ParseError& e) {
                    throw UsageError(conv_scen + ": " + e.what());
                }
                const GridIndex index(grid);
                for (auto& e : entries) {
                    const auto sv = index.vertex_at(e.start.x, e.start.y);
                    const auto gv = index.vertex_at(e.goal.x, e.goal.y);
                    if (!sv || !gv) throw UsageError(conv_scen + ": entry on a blocked cell");
                    e.start = {*sv, 0};
                    e.goal = {*gv, 0};
                    e.map_width = g.num_vertices();
                    e.map_height = 1;
                }
                write_or_print(conv_scen_out, serialize_scen(entries), out);
            }
            return kOk;
        }
    } catch (const UsageError& e) {
        err << "mapfz: error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "mapfz: error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace mapfz::cli
