#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codesign/pareto.hpp"
#include "codesign/problem.hpp"

namespace codesign {

struct ObjectiveVector {
    double success_rate = 0.0;  ///< maximize
    double latency_s = 0.0;     ///< minimize
    double soc_power_w = 0.0;   ///< minimize

    /// (-success, latency, power).
    Objectives minimize() const { return {-success_rate, latency_s, soc_power_w}; }
    static ObjectiveVector from_minimize(const Objectives& v) { return {-v.at(0), v.at(1), v.at(2)}; }
    bool operator==(const ObjectiveVector&) const = default;
};

/// Transform the optimizer works in: (-success, ln latency, ln power).
Objectives search_objectives(const ObjectiveVector& o);

struct DesignPoint {
    std::uint64_t eval_index = 0;
    std::uint64_t flat = 0;
    std::vector<std::size_t> indices;
    ModelSpec model;
    AccelConfig accel;
    ObjectiveVector objectives;
    double throughput_fps = 0.0;
    std::uint64_t total_cycles = 0;
    std::uint64_t params = 0;
    SuccessSource success_source = SuccessSource::surrogate;
    double accel_power_w = 0.0;
    SocPower soc;
    ComputeMass mass;
    std::uint64_t seed = 0;
    std::string note;
};

/// Maps space points to designs and evaluates them. Pure: the same point
/// always yields the same DesignPoint (apart from eval_index/seed, which the
/// caller sets).
class Evaluator {
public:
    explicit Evaluator(const CoDesignProblem& problem);

    void decode(const std::vector<std::size_t>& point, ModelSpec& model, AccelConfig& accel) const;
    DesignPoint evaluate(const std::vector<std::size_t>& point) const;
    DesignPoint evaluate(std::uint64_t flat) const;
    DesignPoint evaluate_config(const ModelSpec& model, const AccelConfig& accel) const;
    /// Same as evaluate_config but with a separately scaled energy table.
    DesignPoint evaluate_config(const ModelSpec& model, const AccelConfig& accel, const EnergyTable& table) const;

    const CoDesignProblem& problem() const { return *problem_; }
    const ParamSpace& space() const { return problem_->search.space; }

private:
    const CoDesignProblem* problem_;
};

}  // namespace codesign
