#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "codesign/evaluate.hpp"
#include "codesign/gp.hpp"
#include "codesign/pareto.hpp"

namespace codesign {

/// Default LCB gain for m objectives: Phi^-1(0.5^(1/m)), so that with
/// independent Gaussian predictions all m bounds hold jointly with
/// probability one half (0.8193 for m = 3).
double default_gain(std::size_t objectives);

/// SMS-EGO score of an optimistic prediction `yhat` against `front` (all in
/// the normalized all-minimize space):
///   - yhat epsilon-dominated by some front point a (a_j <= yhat_j + eps for
///     all j): -max_a [ -1 + prod_j (1 + max(0, yhat_j - a_j)) ]  (<= 0)
///   - otherwise: hypervolume gain of adding yhat (>= 0).
double sms_ego_score(const Objectives& yhat, const std::vector<Objectives>& front, const Objectives& ref,
                     double epsilon = 0.0);

/// Lower confidence bound mean - gamma * stddev, then sms_ego_score.
double sms_ego_score(const Objectives& mean, const Objectives& stddev, double gamma,
                     const std::vector<Objectives>& front, const Objectives& ref, double epsilon = 0.0);

/// Per-objective min/max used to map objectives into [0,1].
struct Bounds {
    Objectives lo;
    Objectives hi;
    static Bounds of(const std::vector<Objectives>& points);
    Objectives normalize(const Objectives& v) const;
};

/// Hypervolume of the normalized points w.r.t. (ref, ..., ref). Points not
/// strictly inside the reference box are ignored.
double normalized_hypervolume(const std::vector<Objectives>& points, const Bounds& bounds, double ref = 1.1);
/// Entry i is the normalized hypervolume of the first i+1 points.
std::vector<double> hypervolume_trace(const std::vector<Objectives>& points, const Bounds& bounds,
                                      double ref = 1.1);

/// `count` distinct indices in [0, n), in draw order, from a seeded mt19937_64.
std::vector<std::uint64_t> sample_distinct(std::uint64_t n, std::uint64_t count, std::uint64_t seed);

struct MoboOptions {
    std::uint64_t budget = 200;
    std::uint64_t init_samples = 11;
    std::uint64_t seed = 1;
    std::optional<double> gamma;
    double epsilon = 0.0;
    double refit_growth = 1.5;  ///< refit hyperparameters when n grows by this factor
    std::uint64_t subsample_threshold = 100000;
    GpOptions gp;
};

struct MoboResult {
    std::vector<std::uint64_t> order;  ///< candidate ids in evaluation order
    std::vector<Objectives> values;    ///< objective vectors, all-minimize
    std::size_t hyper_fits = 0;
};

using FeatureFn = std::function<std::vector<double>(std::uint64_t)>;
using ObjectiveFn = std::function<Objectives(std::uint64_t)>;

/// Seeded random initial design, then one GP per objective and an exact
/// SMS-EGO argmax over every unevaluated candidate (a seeded uniform subsample
/// when more than subsample_threshold remain). Ties go to the lowest id.
MoboResult run_mobo(std::uint64_t candidates, const FeatureFn& features, const ObjectiveFn& objective,
                    const MoboOptions& options);

/// The first `budget` draws of sample_distinct.
MoboResult random_search(std::uint64_t candidates, const ObjectiveFn& objective, std::uint64_t budget,
                         std::uint64_t seed);

struct ExploreResult {
    std::vector<DesignPoint> points;  ///< in evaluation order
    std::vector<std::size_t> front;   ///< indices into points
    std::vector<double> hv_trace;     ///< normalized, bounds of the final set
    std::size_t hyper_fits = 0;
};

ExploreResult run_bayesopt(const CoDesignProblem& problem);
ExploreResult run_random(const CoDesignProblem& problem);
/// Every point of the space. Throws ModelError when the space exceeds search.sweep_cap.
ExploreResult run_sweep(const CoDesignProblem& problem);

}  // namespace codesign
