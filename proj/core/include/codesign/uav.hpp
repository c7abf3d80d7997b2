#pragma once

#include <string>
#include <string_view>

namespace codesign {

enum class SizeClass { nano, micro, mini };
enum class EnvClass { low, medium, dense };

std::string_view to_string(SizeClass c);
std::string_view to_string(EnvClass c);
SizeClass parse_size_class(std::string_view s);
EnvClass parse_env_class(std::string_view s);

struct Sensor {
    double framerate_fps = 30.0;
    double mass_g = 0.0;
    double power_w = 0.1;
    double sensing_range_m = 1.0;
    double latency_s = 0.0;  ///< photon to frame available
};

/// Fixed base vehicle: frame, battery, rotors and flight controller.
struct UavPlatform {
    std::string name;
    SizeClass size_class = SizeClass::nano;
    double battery_capacity_mah = 0.0;
    double battery_voltage_v = 3.7;
    double base_mass_g = 0.0;
    double max_thrust_n = 0.0;
    double rotor_disk_area_m2 = 0.0;  ///< summed over all rotors
    double other_power_w = 0.5;       ///< ESCs, flight controller, misc
    Sensor sensor;

    /// capacity_mAh * V * 3.6 J.
    double battery_energy_j() const { return battery_capacity_mah * battery_voltage_v * 3.6; }
};

struct EnvironmentClass {
    EnvClass cls = EnvClass::low;
    double difficulty = 0.0;  ///< in [0,1]; drives the success surrogate
};

struct MissionSpec {
    double distance_m = 0.0;
    double min_success_rate = 0.0;
};

}  // namespace codesign
