#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "codesign/gp.hpp"
#include "codesign/paramspace.hpp"
#include "codesign/perfmodel.hpp"
#include "codesign/policy.hpp"
#include "codesign/powerweight.hpp"
#include "codesign/uav.hpp"

namespace codesign {

inline constexpr int kSchemaVersion = 1;

struct PhysicsConfig {
    double control_latency_s = 0.005;
    double air_density = 1.225;  ///< kg/m^3
    double figure_of_merit = 0.5;
    double gravity = 9.81;
    bool operator==(const PhysicsConfig&) const = default;
};

enum class KneeRule { roofline, saturation };
std::string_view to_string(KneeRule r);
KneeRule parse_knee_rule(std::string_view s);

struct KneeConfig {
    KneeRule rule = KneeRule::roofline;
    double epsilon = 0.01;               ///< saturation rule only
    double reference_payload_g = 20.0;   ///< compute payload the platform knee is quoted at
    double assess_tolerance = 0.1;
    bool operator==(const KneeConfig&) const = default;
};

/// Models that reach the surrogate ceiling exactly at the low and dense
/// difficulties. When present, beta0/beta_slope are derived at load time.
struct SurrogateAnchors {
    ModelSpec low_model;
    ModelSpec dense_model;
    bool operator==(const SurrogateAnchors&) const = default;
};

struct SearchConfig {
    ParamSpace space;
    std::uint64_t budget = 200;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> init_samples;  ///< default max(11, 2*rank+1)
    std::optional<double> gamma;                ///< default Phi^-1(0.5^(1/3))
    double epsilon = 0.0;
    double refit_growth = 1.5;
    std::uint64_t subsample_threshold = 100000;
    std::uint64_t sweep_cap = 10000;
    GpOptions gp;

    std::uint64_t effective_init() const;
};

/// Literal (throughput, power, mass) design, e.g. a published chip.
struct Baseline {
    std::string label;
    double throughput_fps = 0.0;
    double power_w = 0.0;
    double mass_g = 0.0;
    double success_rate = 1.0;
    bool operator==(const Baseline&) const = default;
};

struct CoDesignProblem {
    std::string name;
    UavPlatform platform;
    EnvironmentClass environment;
    std::array<double, 3> difficulties{0.2, 0.5, 0.8};  ///< low, medium, dense
    MissionSpec mission;
    PhysicsConfig physics;
    KneeConfig knee;

    ModelSpec base_model;
    SurrogateCalibration surrogate;
    std::optional<SurrogateAnchors> anchors;
    std::string policy_db_path;  ///< empty: surrogate only
    PolicyDatabase policy_db;

    AccelConfig base_accel;
    EnergyTable energy;
    SocConstants soc;  ///< camera_w is overridden by the sensor power
    double heatsink_g_per_w = kDefaultHeatsinkCoeff;
    double board_g = kDefaultBoardMass;

    SearchConfig search;
    std::vector<Baseline> baselines;

    EnvironmentClass env(EnvClass c) const;
    SocConstants soc_constants() const;
};

/// Reads a JSON config (comments allowed). Relative paths inside resolve
/// against the config's directory. Defaults are applied, then validated.
CoDesignProblem load_problem(const std::filesystem::path& path);
CoDesignProblem parse_problem(std::string_view text, const std::filesystem::path& base_dir);

/// Throws ValidationError carrying one issue per violated invariant.
void validate(const CoDesignProblem& problem);

/// Canonical JSON with every default written out and the energy table inline.
std::string to_json(const CoDesignProblem& problem);

/// FNV-1a 64 of the canonical JSON.
std::uint64_t problem_hash(const CoDesignProblem& problem);
std::string hex64(std::uint64_t v);

}  // namespace codesign
