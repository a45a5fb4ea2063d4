#include "mapfz/gp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace mapfz {
namespace {

constexpr double kJitter = 1e-8;

// Search box for the log-parameters.
constexpr double kLogEllMin = -4.6, kLogEllMax = 1.0;   // ~0.01 .. 2.7
constexpr double kLogSfMin = -4.6, kLogSfMax = 2.3;     // ~0.01 .. 10
constexpr double kLogSnMin = -18.4, kLogSnMax = 0.0;    // 1e-8 .. 1

Eigen::MatrixXd kernel_matrix(std::span<const double> x, const KernelParams& p) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) k(i, j) = squared_exponential(x[i], x[j], p);
    k.diagonal().array() += std::max(p.noise_variance, 0.0) + kJitter;
    return k;
}

using Simplex = std::vector<std::vector<double>>;

/// Minimizes f over a box with Nelder-Mead; points are clipped into the box.
template <typename F>
std::vector<double> nelder_mead(F&& f, std::vector<double> x0, const std::vector<std::pair<double, double>>& box,
                                int max_iter = 200) {
    const std::size_t d = x0.size();
    auto clip = [&](std::vector<double> x) {
        for (std::size_t i = 0; i < d; ++i) x[i] = std::clamp(x[i], box[i].first, box[i].second);
        return x;
    };
    Simplex pts{clip(x0)};
    for (std::size_t i = 0; i < d; ++i) {
        auto x = x0;
        const double step = 0.25 * (box[i].second - box[i].first);
        x[i] += x[i] + step <= box[i].second ? step : -step;
        pts.push_back(clip(x));
    }
    std::vector<double> val(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) val[i] = f(pts[i]);

    for (int it = 0; it < max_iter; ++it) {
        std::vector<std::size_t> order(pts.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return val[a] < val[b]; });
        Simplex sp;
        std::vector<double> sv;
        for (auto i : order) {
            sp.push_back(pts[i]);
            sv.push_back(val[i]);
        }
        pts = std::move(sp);
        val = std::move(sv);
        if (std::abs(val.back() - val.front()) < 1e-9) break;

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) centroid[j] += pts[i][j] / static_cast<double>(d);
        auto along = [&](double a) {
            std::vector<double> x(d);
            for (std::size_t j = 0; j < d; ++j) x[j] = centroid[j] + a * (pts[d][j] - centroid[j]);
            return clip(x);
        };
        const auto xr = along(-1.0);
        const double fr = f(xr);
        if (fr < val[0]) {
            const auto xe = along(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                pts[d] = xe;
                val[d] = fe;
            } else {
                pts[d] = xr;
                val[d] = fr;
            }
        } else if (fr < val[d - 1]) {
            pts[d] = xr;
            val[d] = fr;
        } else {
            const auto xc = fr < val[d] ? along(-0.5) : along(0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, val[d])) {
                pts[d] = xc;
                val[d] = fc;
            } else {
                for (std::size_t i = 1; i <= d; ++i) {
                    for (std::size_t j = 0; j < d; ++j) pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                    val[i] = f(pts[i]);
                }
            }
        }
    }
    const auto best = std::min_element(val.begin(), val.end()) - val.begin();
    return pts[best];
}

}  // namespace

double squared_exponential(double a, double b, const KernelParams& p) {
    const double r = (a - b) / p.length_scale;
    return p.signal_variance * std::exp(-0.5 * r * r);
}

double log_marginal_likelihood(std::span<const double> x, std::span<const double> y, const KernelParams& p) {
    const Eigen::MatrixXd k = kernel_matrix(x, p);
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    const Eigen::VectorXd alpha = llt.solve(yv);
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return -0.5 * yv.dot(alpha) - 0.5 * log_det - 0.5 * static_cast<double>(y.size()) * std::log(2.0 * std::numbers::pi);
}

double Surrogate::scale_input(double s) const {
    const double span = opt_.s_max - opt_.s_min;
    return span > 0 ? (s - opt_.s_min) / span : 0.0;
}

Surrogate Surrogate::fit(std::span<const double> s, std::span<const double> runtime, const SurrogateOptions& opt) {
    if (s.size() != runtime.size()) throw std::invalid_argument("surrogate: input and target sizes differ");
    std::vector<double> y(runtime.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::log(std::max(runtime[i], 0.0) + opt.runtime_floor);
    double mu = 0;
    for (double v : y) mu += v;
    mu /= static_cast<double>(std::max<std::size_t>(y.size(), 1));
    double var = 0;
    for (double v : y) var += (v - mu) * (v - mu);
    var /= static_cast<double>(std::max<std::size_t>(y.size(), 1));
    const double sd = var > 1e-24 ? std::sqrt(var) : 1.0;
    for (double& v : y) v = (v - mu) / sd;
    return fit_standardized(s, y, opt);
}

Surrogate Surrogate::fit_standardized(std::span<const double> s, std::span<const double> y,
                                      const SurrogateOptions& opt) {
    if (s.empty() || s.size() != y.size()) throw std::invalid_argument("surrogate: need matching, non-empty data");
    Surrogate gp;
    gp.opt_ = opt;
    for (double v : s) gp.x_.push_back(gp.scale_input(v));
    gp.y_.assign(y.begin(), y.end());

    if (opt.fixed_params) {
        gp.params_ = *opt.fixed_params;
    } else {
        const bool pin = opt.pinned_noise.has_value();
        auto unpack = [&](const std::vector<double>& v) {
            KernelParams p;
            p.length_scale = std::exp(v[0]);
            p.signal_variance = std::exp(v[1]);
            p.noise_variance = pin ? *opt.pinned_noise : std::exp(v[2]);
            return p;
        };
        auto objective = [&](const std::vector<double>& v) {
            const double l = mapfz::log_marginal_likelihood(gp.x_, gp.y_, unpack(v));
            return std::isfinite(l) ? -l : 1e30;
        };
        std::vector<std::pair<double, double>> box{{kLogEllMin, kLogEllMax}, {kLogSfMin, kLogSfMax}};
        if (!pin) box.emplace_back(kLogSnMin, kLogSnMax);

        std::mt19937_64 rng(opt.seed);
        std::vector<double> best;
        double best_val = std::numeric_limits<double>::infinity();
        for (int r = 0; r < std::max(opt.restarts, 1); ++r) {
            std::vector<double> x0;
            if (r == 0) {
                x0 = {std::log(0.2), 0.0};
                if (!pin) x0.push_back(std::log(1e-2));
            } else {
                for (const auto& [lo, hi] : box) x0.push_back(std::uniform_real_distribution<double>(lo, hi)(rng));
            }
            const auto x = nelder_mead(objective, x0, box);
            const double v = objective(x);
            if (v < best_val) {
                best_val = v;
                best = x;
            }
        }
        gp.params_ = unpack(best);
    }
    gp.factor();
    return gp;
}

void Surrogate::factor() {
    chol_.compute(kernel_matrix(x_, params_));
    if (chol_.info() != Eigen::Success) {
        // Grow the diagonal until the factorization succeeds.
        double extra = 1e-6;
        while (chol_.info() != Eigen::Success && extra < 1.0) {
            params_.noise_variance += extra;
            chol_.compute(kernel_matrix(x_, params_));
            extra *= 10;
        }
    }
    const Eigen::Map<const Eigen::VectorXd> yv(y_.data(), static_cast<Eigen::Index>(y_.size()));
    alpha_ = chol_.solve(yv);
    lml_ = mapfz::log_marginal_likelihood(x_, y_, params_);
}

double Surrogate::mean(double s) const {
    const double xs = scale_input(s);
    double m = 0;
    for (std::size_t i = 0; i < x_.size(); ++i) m += squared_exponential(xs, x_[i], params_) * alpha_[static_cast<Eigen::Index>(i)];
    return m;
}

double Surrogate::variance(double s) const {
    const double xs = scale_input(s);
    Eigen::VectorXd kv(static_cast<Eigen::Index>(x_.size()));
    for (std::size_t i = 0; i < x_.size(); ++i) kv[static_cast<Eigen::Index>(i)] = squared_exponential(xs, x_[i], params_);
    const Eigen::VectorXd v = chol_.matrixL().solve(kv);
    return std::max(0.0, params_.signal_variance - v.squaredNorm());
}

double Surrogate::stddev(double s) const { return std::sqrt(variance(s)); }

double lcb(double mean, double stddev, int t, double delta) {
    const double arg = 2.0 * std::log(std::pow(static_cast<double>(t), 2.5) * std::numbers::pi * std::numbers::pi /
                                      (3.0 * delta));
    return mean - std::sqrt(std::max(arg, 0.0)) * stddev;
}

double lcb(const Surrogate& post, double s, int t, double delta) { return lcb(post.mean(s), post.stddev(s), t, delta); }

}  // namespace mapfz
