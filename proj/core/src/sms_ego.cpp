#include <algorithm>
#include <cmath>

#include "codesign/bayesopt.hpp"
#include "codesign/errors.hpp"
#include "codesign/optim.hpp"

namespace codesign {

double default_gain(std::size_t objectives) {
    if (objectives < 1) throw ModelError("default_gain: need at least one objective");
    return normal_quantile(std::pow(0.5, 1.0 / static_cast<double>(objectives)));
}

double sms_ego_score(const Objectives& yhat, const std::vector<Objectives>& front, const Objectives& ref,
                     double epsilon) {
    double worst = -1.0;
    bool dominated = false;
    for (const auto& a : front) {
        bool eps_dom = true;
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (a[j] > yhat[j] + epsilon) {
                eps_dom = false;
                break;
            }
        }
        if (!eps_dom) continue;
        dominated = true;
        double prod = 1.0;
        for (std::size_t j = 0; j < a.size(); ++j) prod *= 1.0 + std::max(0.0, yhat[j] - a[j]);
        worst = std::max(worst, prod - 1.0);
    }
    if (dominated) return -worst;
    return hypervolume_contribution(front, yhat, ref);
}

double sms_ego_score(const Objectives& mean, const Objectives& stddev, double gamma,
                     const std::vector<Objectives>& front, const Objectives& ref, double epsilon) {
    Objectives y(mean.size());
    for (std::size_t j = 0; j < mean.size(); ++j) y[j] = mean[j] - gamma * stddev[j];
    return sms_ego_score(y, front, ref, epsilon);
}

Bounds Bounds::of(const std::vector<Objectives>& points) {
    if (points.empty()) throw ModelError("bounds of an empty set");
    Bounds b{points.front(), points.front()};
    for (const auto& p : points) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            b.lo[j] = std::min(b.lo[j], p[j]);
            b.hi[j] = std::max(b.hi[j], p[j]);
        }
    }
    return b;
}

Objectives Bounds::normalize(const Objectives& v) const {
    Objectives out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double range = hi[j] - lo[j];
        out[j] = range > 0.0 ? (v[j] - lo[j]) / range : 0.0;
    }
    return out;
}

double normalized_hypervolume(const std::vector<Objectives>& points, const Bounds& bounds, double ref) {
    std::vector<Objectives> inside;
    for (const auto& p : points) {
        auto q = bounds.normalize(p);
        if (std::all_of(q.begin(), q.end(), [&](double v) { return v < ref; })) inside.push_back(std::move(q));
    }
    if (inside.empty()) return 0.0;
    return hypervolume(inside, Objectives(inside.front().size(), ref));
}

std::vector<double> hypervolume_trace(const std::vector<Objectives>& points, const Bounds& bounds, double ref) {
    std::vector<double> trace;
    std::vector<Objectives> front;
    double hv = 0.0;
    for (const auto& p : points) {
        auto q = bounds.normalize(p);
        if (std::all_of(q.begin(), q.end(), [&](double v) { return v < ref; })) {
            hv += hypervolume_contribution(front, q, Objectives(q.size(), ref));
            front.push_back(std::move(q));
            std::vector<Objectives> kept;
            for (std::size_t i : pareto_filter(front)) kept.push_back(front[i]);
            front = std::move(kept);
        }
        trace.push_back(hv);
    }
    return trace;
}

}  // namespace codesign
