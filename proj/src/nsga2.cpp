#include "mapfz/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace mapfz {

bool dominates(const Objectives& a, const Objectives& b) {
    return a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2);
}

std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const Objectives> points) {
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<int> count(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(points[p], points[q])) dominated_by[p].push_back(q);
            else if (dominates(points[q], points[p])) ++count[p];
        }
        if (count[p] == 0) fronts[0].push_back(p);
    }
    while (!fronts.back().empty()) {
        std::vector<std::size_t> next;
        for (auto p : fronts.back())
            for (auto q : dominated_by[p])
                if (--count[q] == 0) next.push_back(q);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

std::vector<double> crowding_distance(std::span<const Objectives> points, std::span<const std::size_t> front) {
    const std::size_t m = front.size();
    std::vector<double> dist(m, 0.0);
    if (m <= 2) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        return dist;
    }
    for (int obj = 0; obj < 2; ++obj) {
        auto val = [&](std::size_t i) { return obj == 0 ? points[front[i]].f1 : points[front[i]].f2; };
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return val(a) < val(b); });
        const double range = val(order.back()) - val(order.front());
        dist[order.front()] = dist[order.back()] = std::numeric_limits<double>::infinity();
        if (range <= 0) continue;
        for (std::size_t k = 1; k + 1 < m; ++k) dist[order[k]] += (val(order[k + 1]) - val(order[k - 1])) / range;
    }
    return dist;
}

bool ParetoArchive::insert(const ParetoPoint& p) {
    for (const auto& q : points_)
        if (dominates(q.obj, p.obj)) return false;
    std::erase_if(points_, [&](const ParetoPoint& q) { return dominates(p.obj, q.obj); });
    points_.push_back(p);
    return true;
}

namespace {

double sbx_child(double p1, double p2, double lo, double hi, double eta, std::mt19937_64& rng, bool first) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    if (std::abs(p1 - p2) < 1e-14) return p1;
    const double y1 = std::min(p1, p2), y2 = std::max(p1, p2);
    const double r = u01(rng);
    auto betaq = [&](double beta) {
        const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
        return r <= 1.0 / alpha ? std::pow(r * alpha, 1.0 / (eta + 1.0))
                                : std::pow(1.0 / (2.0 - r * alpha), 1.0 / (eta + 1.0));
    };
    double c;
    if (first) {
        const double beta = 1.0 + 2.0 * (y1 - lo) / (y2 - y1);
        c = 0.5 * ((y1 + y2) - betaq(beta) * (y2 - y1));
    } else {
        const double beta = 1.0 + 2.0 * (hi - y2) / (y2 - y1);
        c = 0.5 * ((y1 + y2) + betaq(beta) * (y2 - y1));
    }
    return std::clamp(c, lo, hi);
}

double polynomial_mutation(double y, double lo, double hi, double eta, std::mt19937_64& rng) {
    if (hi <= lo) return lo;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double d1 = (y - lo) / (hi - lo), d2 = (hi - y) / (hi - lo);
    const double r = u01(rng);
    const double pw = 1.0 / (eta + 1.0);
    double dq;
    if (r < 0.5) {
        const double v = 2.0 * r + (1.0 - 2.0 * r) * std::pow(1.0 - d1, eta + 1.0);
        dq = std::pow(v, pw) - 1.0;
    } else {
        const double v = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * std::pow(1.0 - d2, eta + 1.0);
        dq = 1.0 - std::pow(v, pw);
    }
    return std::clamp(y + dq * (hi - lo), lo, hi);
}

struct Ranked {
    std::vector<int> rank;
    std::vector<double> crowd;
};

Ranked rank_population(std::span<const Objectives> obj) {
    Ranked r;
    r.rank.assign(obj.size(), 0);
    r.crowd.assign(obj.size(), 0.0);
    const auto fronts = non_dominated_sort(obj);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        const auto cd = crowding_distance(obj, fronts[f]);
        for (std::size_t i = 0; i < fronts[f].size(); ++i) {
            r.rank[fronts[f][i]] = static_cast<int>(f);
            r.crowd[fronts[f][i]] = cd[i];
        }
    }
    return r;
}

}  // namespace

ParetoArchive nsga2_evolve_batch(std::vector<double> initial, const BatchObjectiveFn& objective,
                                 const Nsga2Config& cfg) {
    if (cfg.population < 4 || cfg.population % 2 != 0)
        throw std::invalid_argument("nsga2: population must be even and at least 4");
    if (!(cfg.lower <= cfg.upper)) throw std::invalid_argument("nsga2: lower bound exceeds upper bound");
    const auto n = static_cast<std::size_t>(cfg.population);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uni(cfg.lower, cfg.upper);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);

    initial.resize(std::min(initial.size(), n));
    while (initial.size() < n) initial.push_back(uni(rng));
    for (double& s : initial) s = std::clamp(s, cfg.lower, cfg.upper);

    std::vector<double> pop = std::move(initial);
    std::vector<Objectives> obj = objective(pop);

    for (int gen = 0; gen < cfg.generations; ++gen) {
        const Ranked rk = rank_population(obj);
        auto tournament = [&] {
            const std::size_t a = pick(rng), b = pick(rng);
            if (rk.rank[a] != rk.rank[b]) return rk.rank[a] < rk.rank[b] ? a : b;
            return rk.crowd[a] >= rk.crowd[b] ? a : b;
        };
        std::vector<double> kids;
        kids.reserve(n);
        while (kids.size() < n) {
            const double p1 = pop[tournament()], p2 = pop[tournament()];
            double c1 = p1, c2 = p2;
            if (u01(rng) < cfg.crossover_prob) {
                c1 = sbx_child(p1, p2, cfg.lower, cfg.upper, cfg.eta_c, rng, true);
                c2 = sbx_child(p1, p2, cfg.lower, cfg.upper, cfg.eta_c, rng, false);
                if (u01(rng) < 0.5) std::swap(c1, c2);
            }
            for (double* c : {&c1, &c2})
                if (u01(rng) < cfg.mutation_prob) *c = polynomial_mutation(*c, cfg.lower, cfg.upper, cfg.eta_m, rng);
            kids.push_back(c1);
            kids.push_back(c2);
        }

        // (mu + lambda) survival. Objectives are re-evaluated together so
        // batch objectives see the whole merged population.
        std::vector<double> merged = pop;
        merged.insert(merged.end(), kids.begin(), kids.end());
        const std::vector<Objectives> mobj = objective(merged);
        const auto fronts = non_dominated_sort(mobj);
        std::vector<std::size_t> keep;
        for (const auto& front : fronts) {
            if (keep.size() + front.size() <= n) {
                keep.insert(keep.end(), front.begin(), front.end());
                continue;
            }
            const auto cd = crowding_distance(mobj, front);
            std::vector<std::size_t> order(front.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return cd[a] > cd[b]; });
            for (std::size_t i = 0; keep.size() < n; ++i) keep.push_back(front[order[i]]);
            break;
        }
        std::vector<double> next;
        for (auto i : keep) next.push_back(merged[i]);
        pop = std::move(next);
        obj = objective(pop);
    }

    ParetoArchive archive;
    const auto fronts = non_dominated_sort(obj);
    for (auto i : fronts.front()) archive.insert({pop[i], obj[i]});
    return archive;
}

ParetoArchive nsga2_evolve(std::vector<double> initial, const ObjectiveFn& objective, const Nsga2Config& cfg) {
    return nsga2_evolve_batch(
        std::move(initial),
        [&](std::span<const double> xs) {
            std::vector<Objectives> out;
            out.reserve(xs.size());
            for (double x : xs) out.push_back(objective(x));
            return out;
        },
        cfg);
}

}  // namespace mapfz
