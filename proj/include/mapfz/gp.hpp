#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mapfz {

/// Squared-exponential kernel parameters, on inputs scaled to [0,1].
struct KernelParams {
    double length_scale = 0.2;
    double signal_variance = 1.0;
    double noise_variance = 1e-4;
};

struct SurrogateOptions {
    double s_min = 0.0;
    double s_max = 1.0;
    /// Added to runtimes before taking the log.
    double runtime_floor = 1e-3;
    /// Skip the marginal-likelihood fit and use these parameters.
    std::optional<KernelParams> fixed_params;
    /// Noise variance to hold fixed during fitting, if any.
    std::optional<double> pinned_noise;
    int restarts = 8;
    std::uint64_t seed = 0;
};

/// Gaussian-process posterior over log-runtime. Targets are standardized, so
/// `mean` and `stddev` are in standardized units.
class Surrogate {
public:
    /// Fits on raw runtimes (log-transformed and standardized internally).
    static Surrogate fit(std::span<const double> s, std::span<const double> runtime, const SurrogateOptions& opt);
    /// Fits directly on targets that are already standardized.
    static Surrogate fit_standardized(std::span<const double> s, std::span<const double> y,
                                      const SurrogateOptions& opt);

    [[nodiscard]] double mean(double s) const;
    [[nodiscard]] double variance(double s) const;
    [[nodiscard]] double stddev(double s) const;
    [[nodiscard]] const KernelParams& params() const { return params_; }
    [[nodiscard]] double log_marginal_likelihood() const { return lml_; }
    [[nodiscard]] const std::vector<double>& targets() const { return y_; }
    [[nodiscard]] double scale_input(double s) const;

private:
    SurrogateOptions opt_;
    KernelParams params_;
    std::vector<double> x_;  // scaled inputs
    std::vector<double> y_;  // standardized targets
    Eigen::LLT<Eigen::MatrixXd> chol_;
    Eigen::VectorXd alpha_;
    double lml_ = 0.0;

    void factor();
};

double squared_exponential(double a, double b, const KernelParams& p);

/// Log marginal likelihood of `y` at inputs `x` under `p`; -inf when the
/// kernel matrix cannot be factored.
double log_marginal_likelihood(std::span<const double> x, std::span<const double> y, const KernelParams& p);

/// Lower confidence bound mean - sqrt(max(0, 2 log(t^2.5 pi^2 / (3 delta)))) * std.
double lcb(double mean, double stddev, int t, double delta);
double lcb(const Surrogate& post, double s, int t, double delta);

}  // namespace mapfz
