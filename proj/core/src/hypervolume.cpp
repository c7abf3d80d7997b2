#include <algorithm>
#include <array>
#include <iterator>

#include "codesign/errors.hpp"
#include "codesign/pareto.hpp"

namespace codesign {

namespace {

// 2-D staircase sorted by x with strictly decreasing y; `area` tracks the
// region it dominates up to (rx, ry). Fronts here are small, so a flat vector
// beats a node-based map.
struct Staircase {
    Staircase(double x, double y) : rx(x), ry(y) {}

    double rx;
    double ry;
    double area = 0.0;
    std::vector<std::pair<double, double>> steps;

    void insert(double x, double y) {
        auto it = std::lower_bound(steps.begin(), steps.end(), x,
                                   [](const std::pair<double, double>& s, double v) { return s.first < v; });
        if (it != steps.end() && it->first == x && it->second <= y) return;
        if (it != steps.begin() && std::prev(it)->second <= y) return;
        double cur_x = x;
        double cur_top = it != steps.begin() ? std::prev(it)->second : ry;
        auto last = it;
        while (last != steps.end() && last->second >= y) {
            area += (last->first - cur_x) * (cur_top - y);
            cur_x = last->first;
            cur_top = last->second;
            ++last;
        }
        const double next_x = last == steps.end() ? rx : last->first;
        area += (next_x - cur_x) * (cur_top - y);
        it = steps.erase(it, last);
        steps.insert(it, {x, y});
    }
};

using Point3 = std::array<double, 3>;

double sweep3(std::vector<Point3>& pts, const Objectives& ref) {
    if (pts.empty()) return 0.0;
    std::stable_sort(pts.begin(), pts.end(), [](const Point3& a, const Point3& b) { return a[2] < b[2]; });
    Staircase s(ref[0], ref[1]);
    s.steps.reserve(pts.size());
    double volume = 0.0;
    double z_prev = pts.front()[2];
    for (const auto& p : pts) {
        volume += s.area * (p[2] - z_prev);
        z_prev = p[2];
        s.insert(p[0], p[1]);
    }
    return volume + s.area * (ref[2] - z_prev);
}

}  // namespace

double hypervolume(const std::vector<Objectives>& points, const Objectives& ref) {
    const std::size_t d = ref.size();
    if (d < 1 || d > 3) throw ModelError("hypervolume: only 1 to 3 objectives are supported");
    for (const auto& p : points) {
        if (p.size() != d) throw ModelError("hypervolume: dimension mismatch");
        for (std::size_t j = 0; j < d; ++j)
            if (!(p[j] < ref[j])) throw ModelError("hypervolume: point does not dominate the reference point");
    }
    if (points.empty()) return 0.0;
    if (d == 1) {
        double best = ref[0];
        for (const auto& p : points) best = std::min(best, p[0]);
        return ref[0] - best;
    }
    Staircase s(ref[0], ref[1]);
    if (d == 2) {
        for (const auto& p : points) s.insert(p[0], p[1]);
        return s.area;
    }
    std::vector<Point3> pts;
    pts.reserve(points.size());
    for (const auto& p : points) pts.push_back({p[0], p[1], p[2]});
    return sweep3(pts, ref);
}

double hypervolume_contribution(const std::vector<Objectives>& front, const Objectives& y, const Objectives& ref) {
    double box = 1.0;
    for (std::size_t j = 0; j < ref.size(); ++j) {
        if (!(y[j] < ref[j])) return 0.0;
        box *= ref[j] - y[j];
    }
    // Volume inside y's box already covered: the front clipped to that box.
    if (ref.size() == 3) {
        thread_local std::vector<Point3> clipped;
        clipped.clear();
        for (const auto& p : front) {
            const Point3 q{std::max(p[0], y[0]), std::max(p[1], y[1]), std::max(p[2], y[2])};
            if (q[0] < ref[0] && q[1] < ref[1] && q[2] < ref[2]) clipped.push_back(q);
        }
        return std::max(0.0, box - sweep3(clipped, ref));
    }
    std::vector<Objectives> clipped;
    clipped.reserve(front.size());
    for (const auto& p : front) {
        Objectives q(p.size());
        bool inside = true;
        for (std::size_t j = 0; j < p.size(); ++j) {
            q[j] = std::max(p[j], y[j]);
            if (!(q[j] < ref[j])) inside = false;
        }
        if (inside) clipped.push_back(std::move(q));
    }
    return std::max(0.0, box - hypervolume(clipped, ref));
}

}  // namespace codesign
