#pragma once

#include <cstdint>
#include <vector>

#include "codesign/perfmodel.hpp"

namespace codesign {

/// Per-byte SRAM energy for partitions up to `max_bytes`.
struct SramBin {
    std::uint64_t max_bytes = 0;
    double read_j = 0.0;   ///< joules per byte read
    double write_j = 0.0;  ///< joules per byte written
    bool operator==(const SramBin&) const = default;
};

/// Energy-per-operation table at `reference_node_nm`. Bins are sorted by
/// capacity; a partition uses the first bin that holds it.
struct EnergyTable {
    double pe_energy_j = 0.3e-12;  ///< per PE per compute cycle
    std::vector<SramBin> sram_bins{{8 * 1024, 0.5e-12, 0.6e-12},
                                   {32 * 1024, 1.0e-12, 1.2e-12},
                                   {128 * 1024, 2.0e-12, 2.4e-12},
                                   {1024 * 1024, 4.0e-12, 4.8e-12}};
    double dram_j_per_byte = 30e-12;
    double leakage_per_pe_w = 2e-6;
    double reference_node_nm = 28.0;
    double dynamic_exponent = 2.0;
    double leakage_exponent = 1.0;

    const SramBin& bin_for(std::uint64_t bytes) const;
    bool operator==(const EnergyTable&) const = default;
};

void validate(const EnergyTable& table);

/// Dynamic energies * (target/ref)^dynamic_exponent, leakage * (target/ref)^leakage_exponent.
EnergyTable tech_scale(const EnergyTable& table, double target_node_nm);

struct AccelPower {
    double pe_j = 0.0;    ///< per inference
    double sram_j = 0.0;  ///< per inference
    double dram_j = 0.0;  ///< per inference
    double dynamic_w = 0.0;
    double leakage_w = 0.0;
    double total_w = 0.0;
};

/// Energy per inference over latency, plus leakage. The table is scaled to
/// cfg.tech_node_nm first. PE energy is charged per PE-cycle, so idle PEs in a
/// partial fold still burn clock and register energy.
AccelPower accel_power_breakdown(const InferenceProfile& profile, const AccelConfig& cfg,
                                 const EnergyTable& table);
double accel_power(const InferenceProfile& profile, const AccelConfig& cfg, const EnergyTable& table);

struct SocConstants {
    int mcu_cores = 2;
    double mcu_core_w = 0.38e-3;  ///< per core at 100 MHz, 28 nm
    double camera_w = 0.1;
    double dram_standby_w = 0.05;
    bool operator==(const SocConstants&) const = default;
};

struct SocPower {
    double accelerator = 0.0;
    double mcu = 0.0;
    double camera = 0.0;
    double dram = 0.0;
    double total = 0.0;
};

SocPower soc_power(double accel_w, const SocConstants& constants);

struct ComputeMass {
    double board_g = 0.0;
    double heatsink_g = 0.0;
    double total_g = 0.0;
};

inline constexpr double kDefaultHeatsinkCoeff = 5.5;  ///< grams per watt
inline constexpr double kDefaultBoardMass = 20.0;     ///< grams

/// coeff * tdp. Throws ValidationError for negative tdp.
double heatsink_mass(double tdp_w, double coeff_g_per_w = kDefaultHeatsinkCoeff);
ComputeMass compute_mass(double tdp_w, double coeff_g_per_w = kDefaultHeatsinkCoeff,
                         double board_g = kDefaultBoardMass);

}  // namespace codesign
