#include "mapfz/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mapfz/discretization.hpp"
#include "mapfz/map_io.hpp"

namespace mapfz {

DiscretizationMode DiscretizationMode::parse(std::string_view text) {
    DiscretizationMode m;
    if (text == "baseline") return m;
    if (text == "bogd" || text == "tuned") {
        m.kind = Kind::Tuned;
        return m;
    }
    if (text.starts_with("fixed:")) {
        const std::string num(text.substr(6));
        std::size_t used = 0;
        double s = 0;
        try {
            s = std::stod(num, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != num.size() || !(s > 0) || !std::isfinite(s))
            throw std::invalid_argument("mode: invalid scale in '" + std::string(text) + "'");
        m.kind = Kind::Fixed;
        m.s = s;
        return m;
    }
    throw std::invalid_argument("mode: expected 'baseline', 'bogd' or 'fixed:<s>', got '" + std::string(text) + "'");
}

std::string DiscretizationMode::label() const {
    switch (kind) {
        case Kind::Baseline: return "baseline";
        case Kind::Tuned: return "bogd";
        case Kind::Fixed: {
            std::ostringstream o;
            o << "fixed:" << s;
            return o.str();
        }
    }
    return "?";
}

namespace {

struct LoadedScenario {
    std::string id;
    std::vector<ScenarioEntry> entries;
};

/// One (map, k) pair with its graph and scenarios.
struct Workspace {
    std::string map;
    int k = 0;
    bool roadmap = false;
    GridSpec grid;
    RealGraph graph;
    std::vector<LoadedScenario> scenarios;
    std::optional<double> tuned_s;

    [[nodiscard]] Instance instance(const LoadedScenario& sc, int n) const {
        try {
            return roadmap ? make_roadmap_instance(graph, sc.entries, n) : make_instance(grid, sc.entries, n);
        } catch (const std::exception& e) {
            throw std::runtime_error(sc.id + ": " + e.what());
        }
    }
};

template <typename Fn>
auto with_file_context(const std::filesystem::path& path, Fn&& fn) {
    try {
        return fn(read_text_file(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

std::vector<std::unique_ptr<Workspace>> load(const ExperimentSpec& spec) {
    std::vector<std::unique_ptr<Workspace>> out;
    for (const auto& m : spec.maps) {
        std::vector<LoadedScenario> scens;
        for (const auto& p : m.scenarios)
            scens.push_back({p.stem().string(), with_file_context(p, [](const std::string& t) { return parse_scen(t); })});
        const std::vector<int> ks = m.roadmap ? std::vector<int>{0} : spec.ks;
        for (int k : ks) {
            auto ws = std::make_unique<Workspace>();
            ws->map = m.name.empty() ? m.path.stem().string() : m.name;
            ws->k = k;
            ws->roadmap = m.roadmap;
            if (m.roadmap) {
                ws->graph = with_file_context(m.path, [](const std::string& t) { return parse_roadmap(t); });
            } else {
                ws->grid = with_file_context(m.path, [k](const std::string& t) { return parse_map(t, k); });
                ws->graph = build_grid_graph(ws->grid);
            }
            ws->scenarios = scens;
            // Surface agent-count problems before any solving starts.
            for (const auto& sc : ws->scenarios)
                for (int n : spec.agent_counts) (void)ws->instance(sc, n);
            out.push_back(std::move(ws));
        }
    }
    return out;
}

struct Job {
    const Workspace* ws;
    const LoadedScenario* scenario;
    int n_agents;
    int repetition;
    DiscretizationMode mode;
};

ResultRow run_job(const Job& job, const ExperimentSpec& spec) {
    ResultRow row;
    row.map = job.ws->map;
    row.k = job.ws->k;
    row.n_agents = job.n_agents;
    row.scenario = job.scenario->id;
    if (spec.repetitions > 1) row.scenario += "#" + std::to_string(job.repetition);
    row.mode = job.mode.label();

    double s = 1.0;
    if (job.mode.kind == DiscretizationMode::Kind::Fixed) s = job.mode.s;
    if (job.mode.kind == DiscretizationMode::Kind::Tuned) {
        if (!job.ws->tuned_s) {
            // Tuning failed: nothing to run with.
            return row;
        }
        s = *job.ws->tuned_s;
    }
    row.s_used = s;

    const Instance inst = job.ws->instance(*job.scenario, job.n_agents);
    const IntGraph ig = discretize(job.ws->graph, s);
    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult res = solve(ig, inst, spec.solver);
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (const auto* sol = std::get_if<Solution>(&res)) {
        row.ct_nodes = sol->stats.nodes_expanded;
        row.ll_calls = sol->stats.low_level_calls;
        const auto violations = validate_solution(ig, inst, sol->plans);
        if (violations.empty()) {
            row.success = true;
            row.makespan = sol->makespan;
            row.error = discretization_error(job.ws->graph, s, sol->plans);
        } else {
            std::cerr << "bench: " << row.map << " " << row.scenario << " n=" << row.n_agents
                      << ": solution failed validation: " << violations.front().message << '\n';
        }
    } else {
        const auto& f = std::get<Failure>(res);
        row.ct_nodes = f.stats.nodes_expanded;
        row.ll_calls = f.stats.low_level_calls;
    }
    return row;
}

std::string fmt(double v, int precision = 10) {
    std::ostringstream o;
    o << std::setprecision(precision) << v;
    return o.str();
}

std::string fixed(double v, int digits) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(digits) << v;
    return o.str();
}

}  // namespace

SuiteResult run_suite(const ExperimentSpec& spec) {
    if (!(spec.solver.timeout_s > 0)) throw std::invalid_argument("bench: timeout must be positive");
    if (spec.agent_counts.empty() || !std::is_sorted(spec.agent_counts.begin(), spec.agent_counts.end()))
        throw std::invalid_argument("bench: agent counts must be non-empty and ascending");
    if (spec.modes.empty()) throw std::invalid_argument("bench: no modes selected");

    auto workspaces = load(spec);
    SuiteResult result;

    const bool want_tuning = std::any_of(spec.modes.begin(), spec.modes.end(), [](const auto& m) {
        return m.kind == DiscretizationMode::Kind::Tuned;
    });
    if (want_tuning) {
        for (auto& ws : workspaces) {
            TuningRecord rec;
            rec.map = ws->map;
            rec.k = ws->k;
            if (!ws->scenarios.empty()) {
                const int n = spec.tune_agents.value_or(spec.agent_counts.back());
                const Instance tmpl = ws->instance(ws->scenarios.front(), n);
                BogdConfig cfg = spec.tuning;
                cfg.seed = spec.seed;
                CbsConfig solver = spec.solver;
                const auto t0 = std::chrono::steady_clock::now();
                const BogdResult br = bogd_run(ws->graph, tmpl, cfg, solver);
                rec.tuning_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                rec.evaluations = static_cast<int>(br.observations.size());
                rec.best_s = br.best_s;
                ws->tuned_s = br.best_s;
            }
            result.tuning.push_back(rec);
        }
    }

    std::vector<Job> jobs;
    for (const auto& ws : workspaces)
        for (const auto& sc : ws->scenarios)
            for (int rep = 0; rep < std::max(spec.repetitions, 1); ++rep)
                for (int n : spec.agent_counts)
                    for (const auto& m : spec.modes) jobs.push_back({ws.get(), &sc, n, rep, m});

    result.rows.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
            try {
                result.rows[i] = run_job(jobs[i], spec);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = jobs.size();
            }
        }
    };
    const int workers = std::max(1, spec.workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    return result;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows) {
    using Key = std::tuple<std::string, int, std::string, int>;
    std::map<Key, std::size_t> index;
    std::vector<SummaryRow> out;
    std::vector<std::vector<double>> runtimes, makespans;
    for (const auto& r : rows) {
        const Key key{r.map, r.k, r.mode, r.n_agents};
        auto [it, fresh] = index.try_emplace(key, out.size());
        if (fresh) {
            SummaryRow s;
            s.map = r.map;
            s.k = r.k;
            s.mode = r.mode;
            s.n_agents = r.n_agents;
            out.push_back(s);
            runtimes.emplace_back();
            makespans.emplace_back();
        }
        auto& s = out[it->second];
        ++s.total;
        if (r.success) {
            ++s.solved;
            runtimes[it->second].push_back(r.runtime_s);
            if (r.makespan) makespans[it->second].push_back(*r.makespan);
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto& s = out[i];
        s.success_rate = 100.0 * s.solved / s.total;
        if (!runtimes[i].empty()) {
            double sum = 0;
            for (double v : runtimes[i]) sum += v;
            s.mean_runtime_s = sum / static_cast<double>(runtimes[i].size());
        }
        if (!makespans[i].empty()) {
            s.makespan_q1 = quantile(makespans[i], 0.25);
            s.makespan_median = quantile(makespans[i], 0.5);
            s.makespan_q3 = quantile(makespans[i], 0.75);
        }
    }
    return out;
}

std::string format_results_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << kResultHeader << '\n';
    for (const auto& r : rows) {
        out << r.map << ',' << r.k << ',' << r.n_agents << ',' << r.scenario << ',' << r.mode << ','
            << (r.success ? 1 : 0) << ',' << (r.makespan ? std::to_string(*r.makespan) : "") << ','
            << fixed(r.runtime_s, 6) << ',' << r.ct_nodes << ',' << r.ll_calls << ',' << fmt(r.s_used) << ','
            << (r.error ? fmt(*r.error) : "") << '\n';
    }
    return out.str();
}

std::vector<ResultRow> parse_results_csv(std::string_view text) {
    std::vector<ResultRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != kResultHeader)
        throw std::runtime_error("results: missing or unexpected header");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 12)
            throw std::runtime_error("results: line " + std::to_string(lineno) + ": expected 12 fields");
        ResultRow r;
        r.map = f[0];
        r.k = std::stoi(f[1]);
        r.n_agents = std::stoi(f[2]);
        r.scenario = f[3];
        r.mode = f[4];
        r.success = f[5] == "1";
        if (!f[6].empty()) r.makespan = std::stoi(f[6]);
        r.runtime_s = std::stod(f[7]);
        r.ct_nodes = std::stoull(f[8]);
        r.ll_calls = std::stoull(f[9]);
        r.s_used = std::stod(f[10]);
        if (!f[11].empty()) r.error = std::stod(f[11]);
        rows.push_back(r);
    }
    return rows;
}

std::string format_summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "map,k,mode,n_agents,total,solved,success_rate,mean_runtime_s,makespan_q1,makespan_median,makespan_q3\n";
    auto opt = [](const std::optional<double>& v, int digits) { return v ? fixed(*v, digits) : std::string("--"); };
    for (const auto& s : rows)
        out << s.map << ',' << s.k << ',' << s.mode << ',' << s.n_agents << ',' << s.total << ',' << s.solved << ','
            << fixed(s.success_rate, 2) << ',' << opt(s.mean_runtime_s, 6) << ',' << opt(s.makespan_q1, 2) << ','
            << opt(s.makespan_median, 2) << ',' << opt(s.makespan_q3, 2) << '\n';
    return out.str();
}

std::string format_tuning_csv(const std::vector<TuningRecord>& records) {
    std::ostringstream out;
    out << "map,k,best_s,tuning_time_s,evaluations\n";
    for (const auto& r : records)
        out << r.map << ',' << r.k << ',' << (r.best_s ? fmt(*r.best_s) : "") << ',' << fixed(r.tuning_time_s, 6)
            << ',' << r.evaluations << '\n';
    return out.str();
}

namespace {

std::string series_name(const SummaryRow& s) { return s.map + "/k" + std::to_string(s.k) + "/" + s.mode; }

}  // namespace

std::string format_success_plot(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "# x=n_agents y=success_rate series=map/k/mode\n";
    for (const auto& s : rows) out << s.n_agents << ' ' << fixed(s.success_rate, 2) << ' ' << series_name(s) << '\n';
    return out.str();
}

std::string format_runtime_plot(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "# x=n_agents y=mean_runtime_s series=map/k/mode\n";
    for (const auto& s : rows)
        if (s.mean_runtime_s) out << s.n_agents << ' ' << fixed(*s.mean_runtime_s, 6) << ' ' << series_name(s) << '\n';
    return out.str();
}

}  // namespace mapfz
