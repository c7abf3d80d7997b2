#include "codesign/selection.hpp"

#include <algorithm>
#include <sstream>

#include "codesign/errors.hpp"

namespace codesign {

ComputeCandidate candidate_of(const DesignPoint& p) {
    return {label_of(p), p.objectives.success_rate, p.throughput_fps, p.objectives.soc_power_w, p.mass.total_g};
}

ComputeCandidate candidate_of(const Baseline& b) {
    return {b.label, b.success_rate, b.throughput_fps, b.power_w, b.mass_g};
}

std::string label_of(const DesignPoint& p) {
    std::string s = "e" + std::to_string(p.eval_index) + "/f" + std::to_string(p.flat);
    if (!p.note.empty()) s += "/" + p.note;
    return s;
}

Selection select_design(const std::vector<ComputeCandidate>& cands, const CoDesignProblem& problem) {
    if (cands.empty()) throw ModelError("cannot select from an empty archive");
    Selection sel;
    sel.knee = platform_knee(problem);
    const auto phys = physics_of(problem);

    double best_success = cands.front().success_rate;
    bool any_meets = false;
    for (const auto& c : cands) {
        best_success = std::max(best_success, c.success_rate);
        any_meets = any_meets || c.success_rate >= problem.mission.min_success_rate;
    }
    sel.fallback_tier = !any_meets;

    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        CandidateRow row;
        row.candidate = cands[i];
        row.eligible = any_meets ? cands[i].success_rate >= problem.mission.min_success_rate
                                 : cands[i].success_rate == best_success;
        row.report = mission_report(problem.platform, problem.mission, phys, cands[i]);
        row.assessment = assess(cands[i].throughput_fps, sel.knee, problem.knee.assess_tolerance);
        sel.rows.push_back(row);
        if (!row.eligible) continue;
        if (!best) {
            best = i;
            continue;
        }
        const auto& a = sel.rows[i];
        const auto& b = sel.rows[*best];
        const bool better =
            a.report.n_missions != b.report.n_missions ? a.report.n_missions > b.report.n_missions
            : a.candidate.power_w != b.candidate.power_w ? a.candidate.power_w < b.candidate.power_w
            : a.candidate.mass_g != b.candidate.mass_g ? a.candidate.mass_g < b.candidate.mass_g
                                                        : a.candidate.label < b.candidate.label;
        if (better) best = i;
    }
    sel.chosen = *best;
    return sel;
}

Selection select_design(const std::vector<DesignPoint>& archive, const CoDesignProblem& problem) {
    std::vector<ComputeCandidate> c;
    c.reserve(archive.size());
    for (const auto& p : archive) c.push_back(candidate_of(p));
    return select_design(c, problem);
}

DesignPoint fine_tune(const DesignPoint& design, const KneePoint& knee, const Evaluator& ev, double tolerance,
                      std::optional<double> target_node_nm) {
    const auto a = assess(design.throughput_fps, knee, tolerance);
    if (a.classification != Provisioning::over_provisioned) {
        std::ostringstream msg;
        msg << "fine-tune refused: design runs at " << design.throughput_fps << " FPS against a knee of "
            << knee.throughput_fps << " FPS (" << to_string(a.classification) << ")";
        throw ModelError(msg.str());
    }
    AccelConfig accel = design.accel;
    accel.frequency_hz = design.accel.frequency_hz * knee.throughput_fps / design.throughput_fps;
    if (target_node_nm) accel.tech_node_nm = *target_node_nm;
    DesignPoint tuned = ev.evaluate_config(design.model, accel);
    tuned.eval_index = design.eval_index;
    tuned.flat = design.flat;
    tuned.indices = design.indices;
    tuned.seed = design.seed;
    std::ostringstream note;
    note << "tuned:f=" << accel.frequency_hz / 1e6 << "MHz";
    if (target_node_nm) note << ",node=" << *target_node_nm << "nm";
    tuned.note = note.str();
    return tuned;
}

}  // namespace codesign
