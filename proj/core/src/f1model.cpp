#include "codesign/f1model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "codesign/errors.hpp"

namespace codesign {

void validate(const PhysicsParams& p) {
    std::vector<Issue> issues;
    if (!(p.sensing_range_m > 0)) issues.push_back({"physics.sensing_range", "must be > 0"});
    if (!(p.fixed_latency_s >= 0)) issues.push_back({"physics.fixed_latency", "must be >= 0"});
    if (!(p.figure_of_merit > 0 && p.figure_of_merit <= 1)) issues.push_back({"physics.figure_of_merit", "must lie in (0,1]"});
    if (!(p.gravity > 0)) issues.push_back({"physics.gravity", "must be > 0"});
    if (!(p.air_density > 0)) issues.push_back({"physics.air_density", "must be > 0"});
    if (!(p.rotor_disk_area_m2 > 0)) issues.push_back({"physics.rotor_disk_area", "must be > 0"});
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

PhysicsParams physics_of(const CoDesignProblem& pr) {
    PhysicsParams p;
    p.sensing_range_m = pr.platform.sensor.sensing_range_m;
    p.fixed_latency_s = pr.platform.sensor.latency_s + pr.physics.control_latency_s;
    p.gravity = pr.physics.gravity;
    p.air_density = pr.physics.air_density;
    p.figure_of_merit = pr.physics.figure_of_merit;
    p.rotor_disk_area_m2 = pr.platform.rotor_disk_area_m2;
    return p;
}

double max_acceleration(const UavPlatform& platform, double payload_g, double gravity) {
    const double mass_kg = (platform.base_mass_g + platform.sensor.mass_g + payload_g) * 1e-3;
    if (!(mass_kg > 0)) throw ModelError("total mass must be positive");
    const double a = platform.max_thrust_n / mass_kg - gravity;
    if (!(a > 0)) throw ModelError("cannot hover: thrust " + std::to_string(platform.max_thrust_n) +
                                   " N does not exceed the weight of " + std::to_string(mass_kg * 1e3) + " g");
    return a;
}

namespace {

double velocity_for_latency(double t, double range, double a) {
    // Root of v^2/(2a) + v t - range = 0, written to avoid cancellation.
    return 2.0 * range / (t + std::sqrt(t * t + 2.0 * range / a));
}

}  // namespace

double safe_velocity(double throughput_fps, const PhysicsParams& p, double a_max) {
    if (!(throughput_fps > 0)) throw ModelError("throughput must be > 0");
    if (!(a_max > 0)) throw ModelError("acceleration must be > 0");
    const double t = p.fixed_latency_s + (std::isinf(throughput_fps) ? 0.0 : 1.0 / throughput_fps);
    return velocity_for_latency(t, p.sensing_range_m, a_max);
}

double velocity_ceiling(const PhysicsParams& p, double a_max) {
    if (!(a_max > 0)) throw ModelError("acceleration must be > 0");
    return velocity_for_latency(p.fixed_latency_s, p.sensing_range_m, a_max);
}

double action_throughput(double sensor_fps, double compute_fps) {
    if (!(sensor_fps > 0) || !(compute_fps > 0)) throw ModelError("throughputs must be > 0");
    return std::min(sensor_fps, compute_fps);
}

KneePoint knee_point(const PhysicsParams& p, double a_max, const KneeOptions& o) {
    KneePoint k;
    k.ceiling = velocity_ceiling(p, a_max);
    if (o.rule == KneeRule::roofline) {
        k.throughput_fps = k.ceiling / p.sensing_range_m;
    } else {
        if (!(o.epsilon > 0 && o.epsilon <= 0.2)) throw ValidationError("knee.epsilon", "must lie in (0, 0.2]");
        const double target = (1.0 - o.epsilon) * k.ceiling;
        double lo = o.resolution_fps, hi = o.resolution_fps;
        while (safe_velocity(hi, p, a_max) < target) {
            lo = hi;
            hi *= 2.0;
        }
        if (hi == o.resolution_fps) {
            k.throughput_fps = hi;
        } else {
            while (hi - lo > o.resolution_fps) {
                const double mid = 0.5 * (lo + hi);
                (safe_velocity(mid, p, a_max) >= target ? hi : lo) = mid;
            }
            k.throughput_fps = hi;
        }
    }
    k.v_safe = safe_velocity(k.throughput_fps, p, a_max);
    return k;
}

KneeOptions knee_options(const CoDesignProblem& pr) { return {pr.knee.rule, pr.knee.epsilon, 0.1}; }

KneePoint platform_knee(const CoDesignProblem& pr) {
    const auto phys = physics_of(pr);
    const double a = max_acceleration(pr.platform, pr.knee.reference_payload_g, phys.gravity);
    return knee_point(phys, a, knee_options(pr));
}

double rotor_power(double total_mass_g, const PhysicsParams& p) {
    if (!(total_mass_g > 0)) throw ModelError("mass must be > 0");
    const double w = total_mass_g * 1e-3 * p.gravity;
    return std::pow(w, 1.5) / (p.figure_of_merit * std::sqrt(2.0 * p.air_density * p.rotor_disk_area_m2));
}

F1Curve f1_curve(const PhysicsParams& p, double a_max, const KneeOptions& o, std::size_t samples) {
    if (samples < 2) throw ModelError("need at least two curve samples");
    F1Curve c;
    c.knee = knee_point(p, a_max, o);
    c.ceiling = c.knee.ceiling;
    const double top = std::max(1000.0, 4.0 * c.knee.throughput_fps);
    for (std::size_t i = 0; i < samples; ++i) {
        const double f = std::exp(std::log(top) * static_cast<double>(i) / static_cast<double>(samples - 1));
        c.samples.emplace_back(f, safe_velocity(f, p, a_max));
    }
    return c;
}

void write_f1_csv(std::ostream& out, const F1Curve& c) {
    const auto prec = out.precision(10);
    out << "kind,throughput_fps,v_safe_mps\n";
    for (const auto& [f, v] : c.samples) out << "sample," << f << ',' << v << '\n';
    out << "knee," << c.knee.throughput_fps << ',' << c.knee.v_safe << '\n';
    out << "ceiling,," << c.ceiling << '\n';
    out.precision(prec);
}

MissionReport mission_report(const UavPlatform& platform, const MissionSpec& mission, const PhysicsParams& physics,
                             const ComputeCandidate& d) {
    if (!(d.power_w >= 0) || !(d.mass_g >= 0)) throw ModelError("design power and mass must be >= 0");
    if (!(mission.distance_m > 0)) throw ModelError("mission distance must be > 0");
    MissionReport r;
    r.action_throughput_fps = action_throughput(platform.sensor.framerate_fps, d.throughput_fps);
    r.a_max = max_acceleration(platform, d.mass_g, physics.gravity);
    r.total_mass_g = platform.base_mass_g + platform.sensor.mass_g + d.mass_g;
    r.v_safe = safe_velocity(r.action_throughput_fps, physics, r.a_max);
    r.t_mission = mission.distance_m / r.v_safe;
    r.p_rotors = rotor_power(r.total_mass_g, physics);
    r.p_compute = d.power_w;
    r.p_others = platform.other_power_w;
    r.e_mission = (r.p_rotors + r.p_compute + r.p_others) * r.t_mission;
    r.e_battery = platform.battery_energy_j();
    r.n_missions = r.e_battery / r.e_mission;
    r.n_missions_floor = std::floor(r.n_missions);
    return r;
}

std::string_view to_string(Provisioning p) {
    switch (p) {
        case Provisioning::under_provisioned: return "under_provisioned";
        case Provisioning::optimal: return "optimal";
        case Provisioning::over_provisioned: return "over_provisioned";
    }
    return "?";
}

DesignAssessment assess(double throughput, const KneePoint& knee, double tol) {
    DesignAssessment a;
    a.margin = throughput / knee.throughput_fps;
    if (throughput < knee.throughput_fps * (1.0 - tol))
        a.classification = Provisioning::under_provisioned;
    else if (throughput > knee.throughput_fps * (1.0 + tol))
        a.classification = Provisioning::over_provisioned;
    else
        a.classification = Provisioning::optimal;
    return a;
}

}  // namespace codesign
