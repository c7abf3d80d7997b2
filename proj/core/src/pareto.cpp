#include <algorithm>
#include <numeric>

#include "codesign/errors.hpp"
#include "codesign/pareto.hpp"

namespace codesign {

bool dominates(const Objectives& a, const Objectives& b) {
    bool strict = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] > b[j]) return false;
        if (a[j] < b[j]) strict = true;
    }
    return strict;
}

std::vector<std::size_t> pareto_filter(const std::vector<Objectives>& points) {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // A dominator is lexicographically smaller, so one pass over the sorted
    // order only needs to test against the front kept so far.
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a] != points[b]) return points[a] < points[b];
        return a < b;
    });
    std::vector<std::size_t> front;
    for (std::size_t i : order) {
        bool dominated = false;
        for (std::size_t f : front) {
            if (dominates(points[f], points[i])) {
                dominated = true;
                break;
            }
        }
        if (!dominated) front.push_back(i);
    }
    std::sort(front.begin(), front.end());
    return front;
}

}  // namespace codesign
