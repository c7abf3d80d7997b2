#pragma once

#include <string>
#include <vector>

#include "codesign/f1model.hpp"

namespace cli {

struct Marker {
    std::string label;
    double throughput_fps = 0.0;
    double v_safe = 0.0;
};

/// Standalone SVG of an F-1 curve on a log throughput axis, with the ceiling,
/// the knee and optional design markers.
std::string f1_svg(const codesign::F1Curve& curve, const std::vector<Marker>& markers, const std::string& title);

}  // namespace cli
