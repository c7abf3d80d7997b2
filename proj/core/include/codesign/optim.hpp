#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace codesign {

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    std::size_t evaluations = 0;
};

/// Derivative-free minimization with the standard reflection/expansion/
/// contraction/shrink coefficients (1, 2, 0.5, 0.5). Stops after `max_evals`
/// or when the simplex spread in f falls below `ftol`.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, double step, std::size_t max_evals,
                             double ftol = 1e-8);

/// Inverse standard normal CDF.
double normal_quantile(double p);

}  // namespace codesign
