#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "codesign/policy.hpp"

namespace codesign {

enum class Dataflow { output_stationary, weight_stationary };

std::string_view to_string(Dataflow d);
/// Accepts "os"/"ws" and the long names.
Dataflow parse_dataflow(std::string_view s);

struct AccelConfig {
    int array_rows = 16;
    int array_cols = 16;
    std::uint64_t sram_ifmap_bytes = 32 * 1024;
    std::uint64_t sram_filter_bytes = 32 * 1024;
    std::uint64_t sram_ofmap_bytes = 16 * 1024;
    Dataflow dataflow = Dataflow::output_stationary;
    double dram_bandwidth = 8.0;  ///< bytes per cycle
    double frequency_hz = 100e6;
    double tech_node_nm = 28.0;
    int bytes_per_element = 1;

    auto operator<=>(const AccelConfig&) const = default;
};

void validate(const AccelConfig& cfg);

/// C[m x n] = A[m x k] * B[k x n]; A is the ifmap (im2col), B the filter.
struct GemmShape {
    std::uint64_t m = 1;
    std::uint64_t n = 1;
    std::uint64_t k = 1;
    auto operator<=>(const GemmShape&) const = default;
};

/// SRAM traffic per partition, in bytes.
struct BufferCounts {
    std::uint64_t ifmap_reads = 0;
    std::uint64_t ifmap_writes = 0;  ///< fills from DRAM
    std::uint64_t filter_reads = 0;
    std::uint64_t filter_writes = 0;
    std::uint64_t ofmap_reads = 0;
    std::uint64_t ofmap_writes = 0;

    std::uint64_t reads() const { return ifmap_reads + filter_reads + ofmap_reads; }
    std::uint64_t writes() const { return ifmap_writes + filter_writes + ofmap_writes; }
    BufferCounts& operator+=(const BufferCounts& o);
    bool operator==(const BufferCounts&) const = default;
};

struct LayerProfile {
    GemmShape gemm;
    std::uint64_t folds = 0;
    std::uint64_t compute_cycles = 0;
    std::uint64_t memory_cycles = 0;
    std::uint64_t total_cycles = 0;
    std::uint64_t dram_traffic = 0;  ///< bytes
    std::uint64_t dram_ifmap = 0;
    std::uint64_t dram_filter = 0;
    std::uint64_t dram_ofmap = 0;
    std::uint64_t macs = 0;       ///< useful multiply-accumulates (m*n*k)
    std::uint64_t pe_cycles = 0;  ///< rows * cols * compute_cycles
    BufferCounts sram;

    std::uint64_t sram_reads() const { return sram.reads(); }
    std::uint64_t sram_writes() const { return sram.writes(); }
};

struct InferenceProfile {
    std::vector<LayerProfile> per_layer;
    std::uint64_t total_cycles = 0;
    std::uint64_t compute_cycles = 0;
    std::uint64_t memory_cycles = 0;
    std::uint64_t dram_traffic = 0;
    std::uint64_t macs = 0;
    std::uint64_t pe_cycles = 0;
    BufferCounts sram;
    double latency_s = 0.0;
    double throughput_fps = 0.0;
};

/// im2col lowering, front to back: conv -> (E*F) x M x (R*S*C), fc -> 1 x out x in.
std::vector<GemmShape> lower_layers(const ModelSpec& model);

/// Closed-form cycle and traffic model.
///
/// Output stationary: folds = ceil(m/R)*ceil(n/C), each k + R + C - 2 cycles.
/// Weight stationary: folds = ceil(k/R)*ceil(n/C), each R (preload) + m + R + C - 2.
///
/// DRAM: an operand that fits its partition whole is fetched once; otherwise it
/// is flushed and refetched every fold. OS never refetches outputs. WS spills
/// partial sums between reduction folds when the ofmap partition is too small
/// (each output written ceil(k/R) times and read back ceil(k/R)-1 times).
/// memory_cycles = ceil(traffic / bandwidth), total = max(compute, memory).
LayerProfile layer_cycles(const GemmShape& g, const AccelConfig& cfg);

InferenceProfile combine(std::vector<LayerProfile> layers, double frequency_hz);
InferenceProfile model_latency(const ModelSpec& model, const AccelConfig& cfg);

/// Per-cycle register-level simulation of the skewed wavefront, used to check
/// layer_cycles. Also multiplies real matrices and verifies the product.
/// Throws ModelError when the instance exceeds 4x4 PEs or any GEMM dim exceeds 8.
LayerProfile oracle_simulate(const GemmShape& g, const AccelConfig& cfg);

/// Comma-separated per-layer dump with a header row.
void write_layer_dump(std::ostream& out, const InferenceProfile& profile);

}  // namespace codesign
