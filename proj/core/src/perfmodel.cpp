#include "codesign/perfmodel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "codesign/errors.hpp"

namespace codesign {

std::string_view to_string(Dataflow d) {
    return d == Dataflow::output_stationary ? "os" : "ws";
}

Dataflow parse_dataflow(std::string_view s) {
    if (s == "os" || s == "output_stationary") return Dataflow::output_stationary;
    if (s == "ws" || s == "weight_stationary") return Dataflow::weight_stationary;
    throw ParseError("unknown dataflow '" + std::string(s) + "'");
}

void validate(const AccelConfig& c) {
    std::vector<Issue> issues;
    if (c.array_rows < 1) issues.push_back({"accel.array_rows", "must be >= 1"});
    if (c.array_cols < 1) issues.push_back({"accel.array_cols", "must be >= 1"});
    if (c.sram_ifmap_bytes < 1) issues.push_back({"accel.sram_ifmap", "must be >= 1 byte"});
    if (c.sram_filter_bytes < 1) issues.push_back({"accel.sram_filter", "must be >= 1 byte"});
    if (c.sram_ofmap_bytes < 1) issues.push_back({"accel.sram_ofmap", "must be >= 1 byte"});
    if (!(c.dram_bandwidth > 0.0) || !std::isfinite(c.dram_bandwidth))
        issues.push_back({"accel.dram_bandwidth", "must be > 0"});
    if (!(c.frequency_hz > 0.0) || !std::isfinite(c.frequency_hz))
        issues.push_back({"accel.frequency", "must be > 0"});
    if (!(c.tech_node_nm > 0.0) || !std::isfinite(c.tech_node_nm))
        issues.push_back({"accel.tech_node", "must be > 0"});
    if (c.bytes_per_element < 1) issues.push_back({"accel.bytes_per_element", "must be >= 1"});
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

BufferCounts& BufferCounts::operator+=(const BufferCounts& o) {
    ifmap_reads += o.ifmap_reads;
    ifmap_writes += o.ifmap_writes;
    filter_reads += o.filter_reads;
    filter_writes += o.filter_writes;
    ofmap_reads += o.ofmap_reads;
    ofmap_writes += o.ofmap_writes;
    return *this;
}

std::vector<GemmShape> lower_layers(const ModelSpec& model) {
    std::vector<GemmShape> out;
    for (const auto& g : layer_walk(model)) {
        if (g.kind == LayerKind::conv) {
            out.push_back({std::uint64_t(g.out.height) * std::uint64_t(g.out.width), std::uint64_t(g.out.channels),
                           std::uint64_t(g.kernel.h) * std::uint64_t(g.kernel.w) * std::uint64_t(g.in.channels)});
        } else {
            out.push_back({1, std::uint64_t(g.out.channels), std::uint64_t(g.in.channels)});
        }
    }
    return out;
}

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

}  // namespace

LayerProfile layer_cycles(const GemmShape& g, const AccelConfig& cfg) {
    if (g.m < 1 || g.n < 1 || g.k < 1) throw ValidationError("gemm", "m, n, k must be >= 1");
    validate(cfg);
    const std::uint64_t R = std::uint64_t(cfg.array_rows);
    const std::uint64_t C = std::uint64_t(cfg.array_cols);
    const std::uint64_t b = std::uint64_t(cfg.bytes_per_element);
    const std::uint64_t a_bytes = g.m * g.k * b;
    const std::uint64_t w_bytes = g.k * g.n * b;
    const std::uint64_t o_bytes = g.m * g.n * b;
    const bool a_fits = a_bytes <= cfg.sram_ifmap_bytes;
    const bool w_fits = w_bytes <= cfg.sram_filter_bytes;
    const bool o_fits = o_bytes <= cfg.sram_ofmap_bytes;

    LayerProfile p;
    p.gemm = g;
    p.macs = g.m * g.n * g.k;
    const std::uint64_t tn = ceil_div(g.n, C);
    if (cfg.dataflow == Dataflow::output_stationary) {
        const std::uint64_t tm = ceil_div(g.m, R);
        p.folds = tm * tn;
        p.compute_cycles = p.folds * (g.k + R + C - 2);
        p.dram_ifmap = a_bytes * (a_fits ? 1 : tn);
        p.dram_filter = w_bytes * (w_fits ? 1 : tm);
        p.dram_ofmap = o_bytes;
        p.sram.ifmap_reads = a_bytes * tn;
        p.sram.filter_reads = w_bytes * tm;
        p.sram.ofmap_writes = o_bytes;
        p.sram.ofmap_reads = o_bytes;
    } else {
        const std::uint64_t tk = ceil_div(g.k, R);
        p.folds = tk * tn;
        p.compute_cycles = p.folds * (R + g.m + R + C - 2);
        p.dram_ifmap = a_bytes * (a_fits ? 1 : tn);
        p.dram_filter = w_bytes;
        p.dram_ofmap = o_bytes * (o_fits ? 1 : 2 * tk - 1);
        p.sram.ifmap_reads = a_bytes * tn;
        p.sram.filter_reads = w_bytes;
        p.sram.ofmap_writes = o_bytes * tk + (o_fits ? 0 : o_bytes * (tk - 1));
        p.sram.ofmap_reads = o_bytes * (tk - 1) + o_bytes * (o_fits ? 1 : tk);
    }
    p.sram.ifmap_writes = p.dram_ifmap;
    p.sram.filter_writes = p.dram_filter;
    p.dram_traffic = p.dram_ifmap + p.dram_filter + p.dram_ofmap;
    p.memory_cycles = static_cast<std::uint64_t>(std::ceil(static_cast<double>(p.dram_traffic) / cfg.dram_bandwidth));
    p.total_cycles = std::max(p.compute_cycles, p.memory_cycles);
    p.pe_cycles = R * C * p.compute_cycles;
    return p;
}

InferenceProfile combine(std::vector<LayerProfile> layers, double frequency_hz) {
    InferenceProfile prof;
    for (const auto& l : layers) {
        prof.total_cycles += l.total_cycles;
        prof.compute_cycles += l.compute_cycles;
        prof.memory_cycles += l.memory_cycles;
        prof.dram_traffic += l.dram_traffic;
        prof.macs += l.macs;
        prof.pe_cycles += l.pe_cycles;
        prof.sram += l.sram;
    }
    prof.per_layer = std::move(layers);
    prof.latency_s = static_cast<double>(prof.total_cycles) / frequency_hz;
    prof.throughput_fps = prof.latency_s > 0.0 ? 1.0 / prof.latency_s : 0.0;
    return prof;
}

InferenceProfile model_latency(const ModelSpec& model, const AccelConfig& cfg) {
    validate(cfg);
    std::vector<LayerProfile> layers;
    for (const auto& g : lower_layers(model)) layers.push_back(layer_cycles(g, cfg));
    return combine(std::move(layers), cfg.frequency_hz);
}

void write_layer_dump(std::ostream& out, const InferenceProfile& p) {
    out << "layer,m,n,k,folds,compute_cycles,memory_cycles,total_cycles,dram_bytes,macs,pe_cycles,"
           "ifmap_reads,ifmap_writes,filter_reads,filter_writes,ofmap_reads,ofmap_writes\n";
    for (std::size_t i = 0; i < p.per_layer.size(); ++i) {
        const auto& l = p.per_layer[i];
        out << i << ',' << l.gemm.m << ',' << l.gemm.n << ',' << l.gemm.k << ',' << l.folds << ','
            << l.compute_cycles << ',' << l.memory_cycles << ',' << l.total_cycles << ',' << l.dram_traffic << ','
            << l.macs << ',' << l.pe_cycles << ',' << l.sram.ifmap_reads << ',' << l.sram.ifmap_writes << ','
            << l.sram.filter_reads << ',' << l.sram.filter_writes << ',' << l.sram.ofmap_reads << ','
            << l.sram.ofmap_writes << '\n';
    }
    out << "total,,,,," << p.compute_cycles << ',' << p.memory_cycles << ',' << p.total_cycles << ','
        << p.dram_traffic << ',' << p.macs << ',' << p.pe_cycles << ',' << p.sram.ifmap_reads << ','
        << p.sram.ifmap_writes << ',' << p.sram.filter_reads << ',' << p.sram.filter_writes << ','
        << p.sram.ofmap_reads << ',' << p.sram.ofmap_writes << '\n';
}

}  // namespace codesign
