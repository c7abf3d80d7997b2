#include "codesign/powerweight.hpp"

#include <cmath>
#include <string>

#include "codesign/errors.hpp"

namespace codesign {

const SramBin& EnergyTable::bin_for(std::uint64_t bytes) const {
    for (const auto& b : sram_bins) {
        if (bytes <= b.max_bytes) return b;
    }
    throw ValidationError("energy.sram_bins",
                          "no bin covers a " + std::to_string(bytes) + "-byte partition");
}

void validate(const EnergyTable& t) {
    std::vector<Issue> issues;
    auto nonneg = [&](double v, const std::string& path) {
        if (!(v >= 0.0) || !std::isfinite(v)) issues.push_back({path, "must be finite and >= 0"});
    };
    nonneg(t.pe_energy_j, "energy.pe");
    nonneg(t.dram_j_per_byte, "energy.dram");
    nonneg(t.leakage_per_pe_w, "energy.leakage_per_pe");
    nonneg(t.dynamic_exponent, "energy.dynamic_exponent");
    nonneg(t.leakage_exponent, "energy.leakage_exponent");
    if (!(t.reference_node_nm > 0.0)) issues.push_back({"energy.reference_node", "must be > 0"});
    if (t.sram_bins.empty()) issues.push_back({"energy.sram_bins", "at least one bin required"});
    for (std::size_t i = 0; i < t.sram_bins.size(); ++i) {
        const auto& b = t.sram_bins[i];
        const std::string p = "energy.sram_bins[" + std::to_string(i) + "]";
        nonneg(b.read_j, p + ".read");
        nonneg(b.write_j, p + ".write");
        if (i > 0 && b.max_bytes <= t.sram_bins[i - 1].max_bytes)
            issues.push_back({p + ".max_bytes", "bins must be strictly increasing"});
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

EnergyTable tech_scale(const EnergyTable& table, double target_node_nm) {
    if (!(target_node_nm > 0.0)) throw ValidationError("tech_node", "target node must be > 0");
    const double ratio = target_node_nm / table.reference_node_nm;
    const double dyn = std::pow(ratio, table.dynamic_exponent);
    const double leak = std::pow(ratio, table.leakage_exponent);
    EnergyTable out = table;
    out.pe_energy_j *= dyn;
    out.dram_j_per_byte *= dyn;
    for (auto& b : out.sram_bins) {
        b.read_j *= dyn;
        b.write_j *= dyn;
    }
    out.leakage_per_pe_w *= leak;
    out.reference_node_nm = target_node_nm;
    return out;
}

AccelPower accel_power_breakdown(const InferenceProfile& profile, const AccelConfig& cfg,
                                 const EnergyTable& table) {
    const EnergyTable t = tech_scale(table, cfg.tech_node_nm);
    const auto& bi = t.bin_for(cfg.sram_ifmap_bytes);
    const auto& bf = t.bin_for(cfg.sram_filter_bytes);
    const auto& bo = t.bin_for(cfg.sram_ofmap_bytes);
    const auto& s = profile.sram;

    AccelPower p;
    p.pe_j = static_cast<double>(profile.pe_cycles) * t.pe_energy_j;
    p.sram_j = static_cast<double>(s.ifmap_reads) * bi.read_j + static_cast<double>(s.ifmap_writes) * bi.write_j +
               static_cast<double>(s.filter_reads) * bf.read_j + static_cast<double>(s.filter_writes) * bf.write_j +
               static_cast<double>(s.ofmap_reads) * bo.read_j + static_cast<double>(s.ofmap_writes) * bo.write_j;
    p.dram_j = static_cast<double>(profile.dram_traffic) * t.dram_j_per_byte;
    const double energy = p.pe_j + p.sram_j + p.dram_j;
    p.dynamic_w = profile.latency_s > 0.0 ? energy / profile.latency_s : 0.0;
    p.leakage_w = static_cast<double>(cfg.array_rows) * static_cast<double>(cfg.array_cols) * t.leakage_per_pe_w;
    p.total_w = p.dynamic_w + p.leakage_w;
    return p;
}

double accel_power(const InferenceProfile& profile, const AccelConfig& cfg, const EnergyTable& table) {
    return accel_power_breakdown(profile, cfg, table).total_w;
}

SocPower soc_power(double accel_w, const SocConstants& c) {
    SocPower p;
    p.accelerator = accel_w;
    p.mcu = c.mcu_cores * c.mcu_core_w;
    p.camera = c.camera_w;
    p.dram = c.dram_standby_w;
    p.total = p.accelerator + p.mcu + p.camera + p.dram;
    return p;
}

double heatsink_mass(double tdp_w, double coeff) {
    if (!(tdp_w >= 0.0)) throw ValidationError("tdp", "must be >= 0");
    if (!(coeff >= 0.0)) throw ValidationError("heatsink_coeff", "must be >= 0");
    return coeff * tdp_w;
}

ComputeMass compute_mass(double tdp_w, double coeff, double board_g) {
    if (!(board_g >= 0.0)) throw ValidationError("board_mass", "must be >= 0");
    ComputeMass m;
    m.board_g = board_g;
    m.heatsink_g = heatsink_mass(tdp_w, coeff);
    m.total_g = m.board_g + m.heatsink_g;
    return m;
}

}  // namespace codesign
