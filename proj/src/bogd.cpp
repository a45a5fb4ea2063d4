#include "mapfz/bogd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mapfz/discretization.hpp"

namespace mapfz {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> minmax_normalize(std::span<const double> v) {
    std::vector<double> out(v.size(), 0.0);
    if (v.empty()) return out;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double range = *hi - *lo;
    if (!(range > 0)) return out;
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - *lo) / range;
    return out;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

void validate(const BogdConfig& c) {
    if (!(c.s_min > 0) || !(c.s_min <= c.s_max) || !std::isfinite(c.s_max))
        throw std::invalid_argument("bogd: need 0 < s_min <= s_max");
    if (!(c.delta > 0 && c.delta < 1)) throw std::invalid_argument("bogd: delta must lie in (0,1)");
    if (c.budget < 1) throw std::invalid_argument("bogd: budget must be positive");
    if (c.s_min < c.s_max && c.budget < 2) throw std::invalid_argument("bogd: budget must be at least 2");
    if (c.population < 4 || c.population % 2) throw std::invalid_argument("bogd: population must be even and >= 4");
}

}  // namespace

std::vector<double> normalized_scores(std::span<const double> lcb_values, std::span<const double> error_values) {
    if (lcb_values.size() != error_values.size()) throw std::invalid_argument("score: column sizes differ");
    const auto a = minmax_normalize(lcb_values);
    const auto b = minmax_normalize(error_values);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

BogdResult bogd_run(const Evaluator& evaluate, std::vector<double> incumbent, const BogdConfig& cfg) {
    validate(cfg);
    BogdResult result;
    std::mt19937_64 rng(cfg.seed);

    auto record = [&](int t, double s, double lcb_v, double score_v) {
        EvalResult r = evaluate(s);
        Observation o;
        o.t = t;
        o.s = s;
        o.runtime = std::max(0.0, r.runtime);
        o.error = std::isnan(r.error) ? discretization_error(incumbent, s) : r.error;
        o.success = r.success;
        o.lcb = lcb_v;
        o.score = score_v;
        if (r.success && !r.traversed.empty()) incumbent = std::move(r.traversed);
        if (o.success) result.pareto.insert({s, {o.runtime, o.error}});
        result.observations.push_back(o);
    };

    const bool degenerate = cfg.s_min == cfg.s_max;
    const int budget = degenerate ? 1 : cfg.budget;
    const int initial = degenerate ? 1 : std::clamp(cfg.initial_points, 2, budget);
    // Initial design: evenly spaced quantiles in log space.
    for (int i = 0; i < initial; ++i) {
        const double q = (i + 1.0) / (initial + 1.0);
        const double s =
            degenerate ? cfg.s_min : std::exp(std::log(cfg.s_min) + q * (std::log(cfg.s_max) - std::log(cfg.s_min)));
        record(i + 1, s, kNaN, kNaN);
    }

    SurrogateOptions sopt;
    sopt.s_min = cfg.s_min;
    sopt.s_max = cfg.s_max;
    sopt.seed = cfg.seed;
    const auto half = static_cast<std::size_t>(cfg.population / 2);
    const double spread = 0.05 * (cfg.s_max - cfg.s_min);

    for (int t = initial + 1; t <= budget; ++t) {
        std::vector<double> xs, ys;
        for (const auto& o : result.observations) {
            xs.push_back(o.s);
            ys.push_back(o.runtime);
        }
        const Surrogate post = Surrogate::fit(xs, ys, sopt);
        auto objectives = [&](std::span<const double> cand) {
            std::vector<Objectives> out;
            out.reserve(cand.size());
            for (double s : cand) out.push_back({lcb(post, s, t, cfg.delta), discretization_error(incumbent, s)});
            return out;
        };

        // Seed population: half log-uniform, half perturbed elites.
        std::vector<double> pop;
        for (std::size_t i = 0; i < half; ++i) pop.push_back(log_uniform(rng, cfg.s_min, cfg.s_max));
        {
            const auto obj = objectives(xs);
            std::vector<double> l, c;
            for (const auto& o : obj) {
                l.push_back(o.f1);
                c.push_back(o.f2);
            }
            const auto sc = normalized_scores(l, c);
            std::vector<std::size_t> order(xs.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return sc[a] < sc[b]; });
            const std::size_t elites = std::min<std::size_t>(3, order.size());
            std::normal_distribution<double> jitter(0.0, spread);
            for (std::size_t i = 0; pop.size() < static_cast<std::size_t>(cfg.population); ++i)
                pop.push_back(std::clamp(xs[order[i % elites]] + jitter(rng), cfg.s_min, cfg.s_max));
        }

        Nsga2Config gcfg;
        gcfg.population = cfg.population;
        gcfg.generations = cfg.generations;
        gcfg.lower = cfg.s_min;
        gcfg.upper = cfg.s_max;
        gcfg.crossover_prob = cfg.crossover_prob;
        gcfg.mutation_prob = cfg.mutation_prob;
        gcfg.seed = cfg.seed * 1000003ULL + static_cast<std::uint64_t>(t);
        const ParetoArchive front = nsga2_evolve_batch(pop, objectives, gcfg);

        std::vector<double> l, c;
        for (const auto& p : front.points()) {
            l.push_back(p.obj.f1);
            c.push_back(p.obj.f2);
        }
        const auto sc = normalized_scores(l, c);
        std::size_t pick = 0;
        for (std::size_t i = 1; i < sc.size(); ++i)
            if (sc[i] < sc[pick] || (sc[i] == sc[pick] && front.points()[i].s < front.points()[pick].s)) pick = i;
        const auto& chosen = front.points()[pick];
        record(t, chosen.s, chosen.obj.f1, sc[pick]);
    }

    // Best successful observation by (runtime, error).
    const Observation* best = nullptr;
    for (const auto& o : result.observations) {
        if (!o.success) continue;
        if (!best || std::tie(o.runtime, o.error) < std::tie(best->runtime, best->error)) best = &o;
    }
    if (best) result.best_s = best->s;

    double best_rt = std::numeric_limits<double>::infinity(), best_err = best_rt;
    for (const auto& o : result.observations) {
        best_rt = std::min(best_rt, o.runtime);
        best_err = std::min(best_err, o.error);
    }
    RegretPoint acc;
    for (const auto& o : result.observations) {
        acc.runtime += o.runtime - best_rt;
        acc.error += o.error - best_err;
        result.regret_trace.push_back(acc);
    }
    return result;
}

std::vector<double> shortest_path_weights(const RealGraph& g, const Instance& inst) {
    std::vector<double> out;
    const int n = g.num_vertices();
    for (int a = 0; a < inst.num_agents(); ++a) {
        std::vector<double> dist(n, std::numeric_limits<double>::infinity());
        std::vector<VertexId> prev(n, -1);
        using Item = std::pair<double, VertexId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
        dist[inst.starts[a]] = 0;
        open.push({0.0, inst.starts[a]});
        while (!open.empty()) {
            const auto [d, u] = open.top();
            open.pop();
            if (d > dist[u]) continue;
            if (u == inst.goals[a]) break;
            for (const auto& nb : g.neighbors(u)) {
                const double nd = d + g.edges()[nb.edge].w;
                if (nd < dist[nb.to]) {
                    dist[nb.to] = nd;
                    prev[nb.to] = u;
                    open.push({nd, nb.to});
                }
            }
        }
        for (VertexId v = inst.goals[a]; prev[v] != -1; v = prev[v]) out.push_back(*g.weight(prev[v], v));
    }
    return out;
}

BogdResult bogd_run(const RealGraph& g, const Instance& inst, const BogdConfig& cfg, const CbsConfig& solver) {
    auto evaluate = [&](double s) {
        EvalResult r;
        const IntGraph ig = discretize(g, s);
        CbsConfig c = solver;
        c.timeout_s = cfg.eval_timeout_s;
        const auto t0 = std::chrono::steady_clock::now();
        const SolveResult res = solve(ig, inst, c);
        r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (const auto* sol = std::get_if<Solution>(&res)) {
            r.success = true;
            r.traversed = traversed_weights(g, sol->plans);
            r.error = discretization_error(r.traversed, s);
        } else {
            r.runtime = cfg.eval_timeout_s;
            r.error = kNaN;
        }
        return r;
    };
    return bogd_run(evaluate, shortest_path_weights(g, inst), cfg);
}

std::string format_tuning_report(const BogdResult& result) {
    std::ostringstream out;
    out << std::setprecision(10);
    auto num = [&](double v) {
        if (std::isnan(v)) return std::string();
        std::ostringstream o;
        o << std::setprecision(10) << v;
        return o.str();
    };
    out << "t,s,runtime_s,error,success,lcb,score\n";
    for (const auto& o : result.observations)
        out << o.t << ',' << o.s << ',' << o.runtime << ',' << o.error << ',' << (o.success ? 1 : 0) << ','
            << num(o.lcb) << ',' << num(o.score) << '\n';
    out << "\n# summary\n";
    if (result.best_s)
        out << "best_s=" << *result.best_s << '\n';
    else
        out << "best_s=none (no successful evaluation)\n";
    out << "# pareto s,runtime_s,error\n";
    auto pts = result.pareto.points();
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.s < b.s; });
    for (const auto& p : pts) out << p.s << ',' << p.obj.f1 << ',' << p.obj.f2 << '\n';
    return out.str();
}

}  // namespace mapfz
