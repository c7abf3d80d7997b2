#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "codesign/errors.hpp"
#include "codesign/f1model.hpp"

using namespace codesign;

namespace {

UavPlatform nano() {
    UavPlatform p;
    p.name = "nano";
    p.battery_capacity_mah = 500;
    p.battery_voltage_v = 3.7;
    p.base_mass_g = 50;
    p.max_thrust_n = 2.82528;
    p.rotor_disk_area_m2 = 0.00399518;
    p.other_power_w = 0.5;
    p.sensor = {60, 2, 0.1, 0.015021, 0.005};
    return p;
}

PhysicsParams phys() {
    PhysicsParams p;
    p.sensing_range_m = 0.015021;
    p.fixed_latency_s = 0.01;
    p.rotor_disk_area_m2 = 0.00399518;
    return p;
}

}  // namespace

TEST(F1, SafeVelocitySolvesStoppingDistance) {
    const auto p = phys();
    for (double f : {1.0, 10.0, 46.0, 300.0}) {
        const double a = 29.43;
        const double v = safe_velocity(f, p, a);
        const double t = p.fixed_latency_s + 1.0 / f;
        EXPECT_NEAR(v * t + v * v / (2 * a), p.sensing_range_m, 1e-15);
    }
}

TEST(F1, CurveMonotoneAndBelowCeiling) {
    const auto p = phys();
    const auto c = f1_curve(p, 29.43, {}, 300);
    ASSERT_EQ(c.samples.size(), 300u);
    for (std::size_t i = 1; i < c.samples.size(); ++i) {
        EXPECT_GT(c.samples[i].first, c.samples[i - 1].first);
        EXPECT_GE(c.samples[i].second, c.samples[i - 1].second);
        EXPECT_LT(c.samples[i].second, c.ceiling);
    }
    std::ostringstream csv;
    write_f1_csv(csv, c);
    EXPECT_EQ(csv.str().rfind("kind,throughput_fps,v_safe_mps\n", 0), 0u);
    EXPECT_NE(csv.str().find("\nknee,"), std::string::npos);
}

TEST(F1, HeavierPayloadIsPointwiseSlower) {
    const auto plat = nano();
    const auto p = phys();
    const double light = max_acceleration(plat, 20), heavy = max_acceleration(plat, 60);
    EXPECT_GT(light, heavy);
    for (double f = 1; f < 2000; f *= 1.3) EXPECT_LE(safe_velocity(f, p, heavy), safe_velocity(f, p, light));
    EXPECT_LT(knee_point(p, heavy).throughput_fps, knee_point(p, light).throughput_fps);
}

TEST(F1, KneeRules) {
    const auto p = phys();
    const double a = max_acceleration(nano(), 20);
    EXPECT_NEAR(a, 2.82528 / 0.072 - 9.81, 1e-12);
    const auto roof = knee_point(p, a);
    EXPECT_NEAR(roof.throughput_fps, 46.0, 0.01);
    EXPECT_DOUBLE_EQ(roof.throughput_fps, roof.ceiling / p.sensing_range_m);

    KneeOptions sat{KneeRule::saturation, 0.01, 0.1};
    const auto k = knee_point(p, a, sat);
    EXPECT_GE(k.v_safe, 0.99 * k.ceiling);
    EXPECT_LT(safe_velocity(k.throughput_fps - 0.1, p, a), 0.99 * k.ceiling);
    EXPECT_GT(k.throughput_fps, roof.throughput_fps);
    sat.epsilon = 0.5;
    EXPECT_THROW(knee_point(p, a, sat), ValidationError);
}

TEST(F1, KneeMonotoneInAcceleration) {
    const auto p = phys();
    double prev = 0.0;
    for (double a = 1.0; a < 100.0; a *= 1.2) {
        const double k = knee_point(p, a).throughput_fps;
        EXPECT_GT(k, prev);
        prev = k;
    }
}

TEST(F1, CannotHover) {
    auto plat = nano();
    plat.max_thrust_n = 0.5;
    EXPECT_THROW(max_acceleration(plat, 20), ModelError);
}

TEST(Mission, IdentitiesOnRandomInputs) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 2000; ++t) {
        UavPlatform plat = nano();
        plat.base_mass_g = 20 + 2000 * u(rng);
        plat.max_thrust_n = (plat.base_mass_g + 200) * 1e-3 * 9.81 * (1.5 + 3 * u(rng));
        plat.battery_capacity_mah = 100 + 6000 * u(rng);
        plat.rotor_disk_area_m2 = 0.001 + 0.3 * u(rng);
        plat.sensor.framerate_fps = 5 + 120 * u(rng);
        PhysicsParams p = phys();
        p.sensing_range_m = 0.001 + 10 * u(rng);
        p.fixed_latency_s = 0.05 * u(rng);
        p.rotor_disk_area_m2 = plat.rotor_disk_area_m2;
        const ComputeCandidate d{"x", 0.9, 1 + 500 * u(rng), 10 * u(rng), 100 * u(rng)};
        const MissionSpec m{1 + 1000 * u(rng), 0.0};
        const auto r = mission_report(plat, m, p, d);
        const double rel = 1e-9;
        EXPECT_NEAR(r.action_throughput_fps, std::min(plat.sensor.framerate_fps, d.throughput_fps), 0.0);
        EXPECT_NEAR(r.t_mission * r.v_safe, m.distance_m, rel * m.distance_m);
        EXPECT_NEAR(r.e_mission, (r.p_rotors + r.p_compute + r.p_others) * r.t_mission, rel * r.e_mission);
        EXPECT_NEAR(r.n_missions * r.e_mission, r.e_battery, rel * r.e_battery);
        EXPECT_NEAR(r.e_battery, plat.battery_capacity_mah * plat.battery_voltage_v * 3.6, rel * r.e_battery);
        EXPECT_EQ(r.n_missions_floor, std::floor(r.n_missions));
        UavPlatform twice = plat;
        twice.battery_capacity_mah *= 2;
        EXPECT_EQ(mission_report(twice, m, p, d).n_missions, 2 * r.n_missions);
    }
}

TEST(Mission, RotorPowerHandValue) {
    // 72 g at FoM 0.5 over the calibrated disk area: 12 W by construction.
    EXPECT_NEAR(rotor_power(72, phys()), 12.0, 1e-3);
    EXPECT_THROW(rotor_power(0, phys()), ModelError);
}

TEST(Assess, Classification) {
    const KneePoint k{46, 0.69, 0.7};
    EXPECT_EQ(assess(46, k).classification, Provisioning::optimal);
    EXPECT_EQ(assess(50.5, k).classification, Provisioning::optimal);
    EXPECT_EQ(assess(51, k).classification, Provisioning::over_provisioned);
    EXPECT_EQ(assess(41, k).classification, Provisioning::under_provisioned);
    EXPECT_DOUBLE_EQ(assess(92, k).margin, 2.0);
}
