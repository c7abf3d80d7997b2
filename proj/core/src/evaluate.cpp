#include "codesign/evaluate.hpp"

#include <cmath>

#include "codesign/errors.hpp"

namespace codesign {

Objectives search_objectives(const ObjectiveVector& o) {
    return {-o.success_rate, std::log(o.latency_s), std::log(o.soc_power_w)};
}

Evaluator::Evaluator(const CoDesignProblem& problem) : problem_(&problem) {}

void Evaluator::decode(const std::vector<std::size_t>& point, ModelSpec& model, AccelConfig& accel) const {
    const auto& sp = space();
    if (point.size() != sp.rank()) throw ModelError("point rank does not match the search space");
    model = problem_->base_model;
    accel = problem_->base_accel;
    for (std::size_t d = 0; d < sp.rank(); ++d) {
        const auto& name = sp.dimensions()[d].name;
        const double v = sp.value(point, d);
        const int iv = static_cast<int>(std::lround(v));
        const auto kb = static_cast<std::uint64_t>(std::llround(v * 1024.0));
        if (name == "conv_layers") model.conv_layers = iv;
        else if (name == "filters") model.filters_per_layer = iv;
        else if (name == "kernel") model.kernel = {iv, iv};
        else if (name == "array_rows") accel.array_rows = iv;
        else if (name == "array_cols") accel.array_cols = iv;
        else if (name == "sram_ifmap_kb") accel.sram_ifmap_bytes = kb;
        else if (name == "sram_filter_kb") accel.sram_filter_bytes = kb;
        else if (name == "sram_ofmap_kb") accel.sram_ofmap_bytes = kb;
        else if (name == "dram_bandwidth") accel.dram_bandwidth = v;
        else if (name == "dataflow") accel.dataflow = iv == 0 ? Dataflow::output_stationary : Dataflow::weight_stationary;
        else if (name == "frequency_mhz") accel.frequency_hz = v * 1e6;
        else if (name == "tech_node_nm") accel.tech_node_nm = v;
        else throw ValidationError("search.dimensions", "unknown dimension '" + name + "'");
    }
}

DesignPoint Evaluator::evaluate(const std::vector<std::size_t>& point) const {
    ModelSpec model;
    AccelConfig accel;
    decode(point, model, accel);
    DesignPoint p = evaluate_config(model, accel);
    p.indices = point;
    p.flat = space().flat(point);
    return p;
}

DesignPoint Evaluator::evaluate(std::uint64_t flat) const { return evaluate(space().point(flat)); }

DesignPoint Evaluator::evaluate_config(const ModelSpec& model, const AccelConfig& accel) const {
    return evaluate_config(model, accel, problem_->energy);
}

DesignPoint Evaluator::evaluate_config(const ModelSpec& model, const AccelConfig& accel,
                                       const EnergyTable& table) const {
    const auto& pr = *problem_;
    DesignPoint p;
    p.model = model;
    p.accel = accel;
    const auto rec = success_of(pr.policy_db, model, pr.environment, pr.surrogate);
    const auto profile = model_latency(model, accel);
    p.params = param_count(model);
    p.success_source = rec.source;
    p.total_cycles = profile.total_cycles;
    p.throughput_fps = profile.throughput_fps;
    p.accel_power_w = accel_power(profile, accel, table);
    p.soc = soc_power(p.accel_power_w, pr.soc_constants());
    p.mass = compute_mass(p.soc.total, pr.heatsink_g_per_w, pr.board_g);
    p.objectives = {rec.success_rate, profile.latency_s, p.soc.total};
    return p;
}

}  // namespace codesign
