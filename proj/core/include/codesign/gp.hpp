#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace codesign {

/// Search box and effort for the marginal-likelihood fit, all in natural-log
/// space. Inputs are expected in the unit cube; targets are standardized
/// internally.
struct GpOptions {
    double log_lengthscale_min = -3.0;  ///< ~0.05
    double log_lengthscale_max = 3.0;   ///< ~20
    double log_signal_min = -3.0;
    double log_signal_max = 3.0;
    double log_noise_min = -13.8;  ///< ~1e-6 (std dev)
    double log_noise_max = 0.0;
    std::size_t restarts = 2;
    std::size_t max_evals_per_start = 250;
};

struct GpHyper {
    std::vector<double> log_lengthscales;
    double log_signal = 0.0;
    double log_noise = -6.9;
};

struct GpPrediction {
    double mean = 0.0;
    double variance = 0.0;
};

/// Zero-mean GP on standardized targets with a squared-exponential ARD kernel
///   k(x, x') = s^2 exp(-1/2 sum_i (x_i - x'_i)^2 / l_i^2)
/// plus noise^2 on the diagonal. Predictions are of the latent function in
/// the caller's units.
class GpModel {
public:
    /// Multi-start Nelder-Mead over log hyperparameters, maximizing the log
    /// marginal likelihood. The first start is `warm` when given, otherwise a
    /// fixed default; the rest are drawn from `seed`. Constant targets give a
    /// fallback model that returns the constant with zero variance.
    static GpModel fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GpOptions& options,
                       std::uint64_t seed, const GpHyper* warm = nullptr);

    /// Conditions on the data with fixed hyperparameters (no search).
    static GpModel condition(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GpHyper& hyper);

    /// Appends one observation under the current hyperparameters by extending
    /// the Cholesky factor with a single row. `y` holds every target, the new
    /// one last. Returns false when the model has to be rebuilt with
    /// condition() instead (degenerate targets, loss of positive definiteness).
    bool extend(const Eigen::RowVectorXd& x_new, const Eigen::VectorXd& y);

    GpPrediction predict(const Eigen::VectorXd& x) const;
    /// Rows of `xs` are query points.
    void predict(const Eigen::MatrixXd& xs, Eigen::VectorXd& mean, Eigen::VectorXd& variance) const;

    const GpHyper& hyper() const { return hyper_; }
    double log_marginal_likelihood() const { return lml_; }
    bool degenerate() const { return degenerate_; }
    std::size_t size() const { return static_cast<std::size_t>(x_.rows()); }

    /// Log marginal likelihood of standardized targets; -inf if the kernel
    /// matrix cannot be factored.
    static double log_marginal_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y_std,
                                          const GpHyper& hyper);

private:
    friend class CandidatePosterior;
    void restandardize(const Eigen::VectorXd& y);

    Eigen::MatrixXd x_;
    Eigen::MatrixXd x_scaled_;
    Eigen::VectorXd alpha_;
    Eigen::VectorXd z_;  ///< L^-1 y_std
    Eigen::MatrixXd chol_l_;
    GpHyper hyper_;
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
    double signal2_ = 1.0;
    double lml_ = 0.0;
    double jitter_ = 0.0;  ///< added to the diagonal, in units of signal^2
    std::uint64_t factor_id_ = 0;  ///< shared by models whose factor extends another's
    bool degenerate_ = false;
};

/// Posterior over a fixed candidate set that follows a GpModel as it grows
/// through extend(). Keeps V = L^-1 K(X, C) and its column norms, so each new
/// observation costs O(n |C|) instead of the O(n^2 |C|) of a fresh solve.
class CandidatePosterior {
public:
    explicit CandidatePosterior(Eigen::MatrixXd candidates) : candidates_(std::move(candidates)) {}

    /// Same values as model.predict(candidates) up to rounding.
    void predict(const GpModel& model, Eigen::VectorXd& mean, Eigen::VectorXd& variance);

private:
    void rebuild(const GpModel& model);

    Eigen::MatrixXd candidates_;
    Eigen::MatrixXd scaled_;
    Eigen::MatrixXd v_;
    Eigen::VectorXd col_norm2_;
    Eigen::Index rows_ = 0;
    std::uint64_t factor_id_ = 0;
};

}  // namespace codesign
