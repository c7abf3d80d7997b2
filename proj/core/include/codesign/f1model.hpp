#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "codesign/problem.hpp"

namespace codesign {

struct PhysicsParams {
    double sensing_range_m = 1.0;
    double fixed_latency_s = 0.0;  ///< sensor latency + control loop
    double gravity = 9.81;
    double air_density = 1.225;
    double figure_of_merit = 0.5;
    double rotor_disk_area_m2 = 0.01;
};

void validate(const PhysicsParams& physics);
PhysicsParams physics_of(const CoDesignProblem& problem);

/// thrust / (base + sensor + payload) - g, in m/s^2. Throws ModelError when
/// the vehicle cannot hover.
double max_acceleration(const UavPlatform& platform, double payload_g, double gravity = 9.81);

/// Largest v with v*t + v^2/(2 a) <= range, t = fixed_latency + 1/throughput.
double safe_velocity(double throughput_fps, const PhysicsParams& physics, double a_max);
/// Limit of safe_velocity as throughput grows without bound.
double velocity_ceiling(const PhysicsParams& physics, double a_max);

double action_throughput(double sensor_fps, double compute_fps);

struct KneePoint {
    double throughput_fps = 0.0;
    double v_safe = 0.0;
    double ceiling = 0.0;
};

struct KneeOptions {
    KneeRule rule = KneeRule::roofline;
    double epsilon = 0.01;
    double resolution_fps = 0.1;
};

/// roofline: where the low-rate asymptote v = range * throughput meets the
///   ceiling, throughput = ceiling / range.
/// saturation: smallest throughput (bisection to resolution_fps) with
///   v >= (1 - epsilon) * ceiling.
KneePoint knee_point(const PhysicsParams& physics, double a_max, const KneeOptions& options = {});

/// Knee of the platform carrying the reference compute payload.
KneePoint platform_knee(const CoDesignProblem& problem);
KneeOptions knee_options(const CoDesignProblem& problem);

/// Ideal hover power (m g)^1.5 / (FoM sqrt(2 rho A)).
double rotor_power(double total_mass_g, const PhysicsParams& physics);

struct F1Curve {
    std::vector<std::pair<double, double>> samples;  ///< (throughput fps, v_safe m/s)
    double ceiling = 0.0;
    KneePoint knee;
};

/// Log-spaced samples from 1 FPS to max(1000, 4 * knee).
F1Curve f1_curve(const PhysicsParams& physics, double a_max, const KneeOptions& options, std::size_t samples = 200);
/// kind,throughput_fps,v_safe_mps rows; kind is sample, knee or ceiling.
void write_f1_csv(std::ostream& out, const F1Curve& curve);

/// What the mission model needs from a design.
struct ComputeCandidate {
    std::string label;
    double success_rate = 1.0;
    double throughput_fps = 0.0;  ///< compute inference rate
    double power_w = 0.0;         ///< P_compute
    double mass_g = 0.0;          ///< compute payload
};

struct MissionReport {
    double action_throughput_fps = 0.0;
    double a_max = 0.0;
    double total_mass_g = 0.0;
    double v_safe = 0.0;
    double t_mission = 0.0;
    double p_rotors = 0.0;
    double p_compute = 0.0;
    double p_others = 0.0;
    double e_mission = 0.0;
    double e_battery = 0.0;
    double n_missions = 0.0;
    double n_missions_floor = 0.0;
};

/// t = D / v_safe, E_mission = (P_rotors + P_compute + P_others) t,
/// N = E_battery / E_mission.
MissionReport mission_report(const UavPlatform& platform, const MissionSpec& mission, const PhysicsParams& physics,
                             const ComputeCandidate& design);

enum class Provisioning { under_provisioned, optimal, over_provisioned };
std::string_view to_string(Provisioning p);

struct DesignAssessment {
    Provisioning classification = Provisioning::optimal;
    double margin = 1.0;  ///< throughput / knee
};

DesignAssessment assess(double compute_throughput_fps, const KneePoint& knee, double tolerance = 0.1);

}  // namespace codesign
