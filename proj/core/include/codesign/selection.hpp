#pragma once

#include <optional>
#include <vector>

#include "codesign/evaluate.hpp"
#include "codesign/f1model.hpp"

namespace codesign {

ComputeCandidate candidate_of(const DesignPoint& p);
ComputeCandidate candidate_of(const Baseline& b);
/// "e<eval>/f<flat>" for archive points.
std::string label_of(const DesignPoint& p);

struct CandidateRow {
    ComputeCandidate candidate;
    MissionReport report;
    DesignAssessment assessment;
    bool eligible = false;  ///< meets the success requirement (or is in the top tier)
};

struct Selection {
    std::size_t chosen = 0;  ///< index into rows (rows follow input order)
    std::vector<CandidateRow> rows;
    KneePoint knee;
    bool fallback_tier = false;  ///< nobody met min_success_rate; top tier used
};

/// Keeps designs meeting mission.min_success_rate (all designs at the highest
/// success rate when none do), computes their mission reports and returns the
/// argmax of N_missions. Ties: lower power, then lower mass, then label.
/// Throws ModelError on empty input.
Selection select_design(const std::vector<ComputeCandidate>& candidates, const CoDesignProblem& problem);
Selection select_design(const std::vector<DesignPoint>& archive, const CoDesignProblem& problem);

/// Retargets an over-provisioned design to the knee by scaling its clock by
/// knee / throughput (cycle counts are frequency independent), optionally
/// moving it to `target_node_nm`, then re-estimates power and mass. Throws
/// ModelError unless assess() classifies the design as over-provisioned.
DesignPoint fine_tune(const DesignPoint& design, const KneePoint& knee, const Evaluator& evaluator,
                      double tolerance = 0.1, std::optional<double> target_node_nm = std::nullopt);

}  // namespace codesign
