#pragma once

#include <cmath>
#include <initializer_list>
#include <string>

#include "codesign/errors.hpp"
#include "codesign/paramspace.hpp"
#include "codesign/perfmodel.hpp"
#include "codesign/policy.hpp"
#include "codesign/powerweight.hpp"
#include "json.hpp"

namespace codesign::jsonio {

using json = nlohmann::ordered_json;

inline std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

inline void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ValidationError(path.empty() ? "<root>" : path, "expected an object");
}

inline void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    require_object(j, path);
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ValidationError(join(path, it.key()), "unknown field");
    }
}

inline double number(const json& j, const char* key, const std::string& path, double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) throw ValidationError(join(path, key), "expected a number");
    return v.get<double>();
}

inline double required_number(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) throw ValidationError(join(path, key), "required field missing");
    return number(j, key, path, 0.0);
}

inline long long integer(const json& j, const char* key, const std::string& path, long long fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (v.is_number_integer() || v.is_number_unsigned()) return v.get<long long>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<long long>(d);
    }
    throw ValidationError(join(path, key), "expected an integer");
}

inline std::string string(const json& j, const char* key, const std::string& path, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_string()) throw ValidationError(join(path, key), "expected a string");
    return v.get<std::string>();
}

inline json to_json(const ModelSpec& m) {
    json j;
    j["input"] = {m.input.height, m.input.width, m.input.channels};
    j["conv_layers"] = m.conv_layers;
    j["filters"] = m.filters_per_layer;
    j["kernel"] = {m.kernel.h, m.kernel.w};
    j["stride"] = {m.stride.h, m.stride.w};
    j["padding"] = std::string(to_string(m.padding));
    j["fc_layers"] = m.fc_layers;
    return j;
}

inline std::vector<int> int_list(const json& j, const char* key, const std::string& path, std::size_t want) {
    const auto& v = j.at(key);
    if (!v.is_array() || (want && v.size() != want))
        throw ValidationError(join(path, key), want ? "expected " + std::to_string(want) + " integers" : "expected a list");
    std::vector<int> out;
    for (const auto& e : v) {
        if (!e.is_number_integer()) throw ValidationError(join(path, key), "expected integers");
        out.push_back(e.get<int>());
    }
    return out;
}

inline ModelSpec model_from_json(const json& j, const ModelSpec& base, const std::string& path) {
    check_keys(j, path, {"input", "conv_layers", "filters", "kernel", "stride", "padding", "fc_layers"});
    ModelSpec m = base;
    if (j.contains("input")) {
        const auto v = int_list(j, "input", path, 3);
        m.input = {v[0], v[1], v[2]};
    }
    m.conv_layers = static_cast<int>(integer(j, "conv_layers", path, m.conv_layers));
    m.filters_per_layer = static_cast<int>(integer(j, "filters", path, m.filters_per_layer));
    if (j.contains("kernel")) {
        const auto v = int_list(j, "kernel", path, 2);
        m.kernel = {v[0], v[1]};
    }
    if (j.contains("stride")) {
        const auto v = int_list(j, "stride", path, 2);
        m.stride = {v[0], v[1]};
    }
    if (j.contains("padding")) {
        try {
            m.padding = parse_padding(string(j, "padding", path, ""));
        } catch (const ParseError& e) {
            throw ValidationError(join(path, "padding"), e.what());
        }
    }
    if (j.contains("fc_layers")) m.fc_layers = int_list(j, "fc_layers", path, 0);
    return m;
}

inline json to_json(const AccelConfig& a) {
    json j;
    j["array_rows"] = a.array_rows;
    j["array_cols"] = a.array_cols;
    j["sram_ifmap_bytes"] = a.sram_ifmap_bytes;
    j["sram_filter_bytes"] = a.sram_filter_bytes;
    j["sram_ofmap_bytes"] = a.sram_ofmap_bytes;
    j["dataflow"] = std::string(to_string(a.dataflow));
    j["dram_bandwidth"] = a.dram_bandwidth;
    j["frequency_hz"] = a.frequency_hz;
    j["tech_node_nm"] = a.tech_node_nm;
    j["bytes_per_element"] = a.bytes_per_element;
    return j;
}

inline AccelConfig accel_from_json(const json& j, const AccelConfig& base, const std::string& path) {
    check_keys(j, path, {"array_rows", "array_cols", "sram_ifmap_bytes", "sram_filter_bytes", "sram_ofmap_bytes",
                         "dataflow", "dram_bandwidth", "frequency_hz", "tech_node_nm", "bytes_per_element"});
    AccelConfig a = base;
    a.array_rows = static_cast<int>(integer(j, "array_rows", path, a.array_rows));
    a.array_cols = static_cast<int>(integer(j, "array_cols", path, a.array_cols));
    a.sram_ifmap_bytes = static_cast<std::uint64_t>(integer(j, "sram_ifmap_bytes", path, (long long)a.sram_ifmap_bytes));
    a.sram_filter_bytes = static_cast<std::uint64_t>(integer(j, "sram_filter_bytes", path, (long long)a.sram_filter_bytes));
    a.sram_ofmap_bytes = static_cast<std::uint64_t>(integer(j, "sram_ofmap_bytes", path, (long long)a.sram_ofmap_bytes));
    if (j.contains("dataflow")) {
        try {
            a.dataflow = parse_dataflow(string(j, "dataflow", path, ""));
        } catch (const ParseError& e) {
            throw ValidationError(join(path, "dataflow"), e.what());
        }
    }
    a.dram_bandwidth = number(j, "dram_bandwidth", path, a.dram_bandwidth);
    a.frequency_hz = number(j, "frequency_hz", path, a.frequency_hz);
    a.tech_node_nm = number(j, "tech_node_nm", path, a.tech_node_nm);
    a.bytes_per_element = static_cast<int>(integer(j, "bytes_per_element", path, a.bytes_per_element));
    return a;
}

inline json to_json(const EnergyTable& t) {
    json j;
    j["pe_energy_j"] = t.pe_energy_j;
    json bins = json::array();
    for (const auto& b : t.sram_bins) bins.push_back({{"max_bytes", b.max_bytes}, {"read_j", b.read_j}, {"write_j", b.write_j}});
    j["sram_bins"] = bins;
    j["dram_j_per_byte"] = t.dram_j_per_byte;
    j["leakage_per_pe_w"] = t.leakage_per_pe_w;
    j["reference_node_nm"] = t.reference_node_nm;
    j["dynamic_exponent"] = t.dynamic_exponent;
    j["leakage_exponent"] = t.leakage_exponent;
    return j;
}

inline EnergyTable energy_from_json(const json& j, const std::string& path) {
    check_keys(j, path, {"pe_energy_j", "sram_bins", "dram_j_per_byte", "leakage_per_pe_w", "reference_node_nm",
                         "dynamic_exponent", "leakage_exponent", "description"});
    EnergyTable t;
    t.pe_energy_j = number(j, "pe_energy_j", path, t.pe_energy_j);
    if (j.contains("sram_bins")) {
        const auto& bins = j.at("sram_bins");
        if (!bins.is_array()) throw ValidationError(join(path, "sram_bins"), "expected a list");
        t.sram_bins.clear();
        for (std::size_t i = 0; i < bins.size(); ++i) {
            const std::string p = join(path, "sram_bins[" + std::to_string(i) + "]");
            check_keys(bins[i], p, {"max_bytes", "read_j", "write_j"});
            const long long mb = integer(bins[i], "max_bytes", p, -1);
            if (mb < 1) throw ValidationError(join(p, "max_bytes"), "must be >= 1");
            t.sram_bins.push_back({static_cast<std::uint64_t>(mb), required_number(bins[i], "read_j", p),
                                   required_number(bins[i], "write_j", p)});
        }
    }
    t.dram_j_per_byte = number(j, "dram_j_per_byte", path, t.dram_j_per_byte);
    t.leakage_per_pe_w = number(j, "leakage_per_pe_w", path, t.leakage_per_pe_w);
    t.reference_node_nm = number(j, "reference_node_nm", path, t.reference_node_nm);
    t.dynamic_exponent = number(j, "dynamic_exponent", path, t.dynamic_exponent);
    t.leakage_exponent = number(j, "leakage_exponent", path, t.leakage_exponent);
    return t;
}

inline json to_json(const ParamSpace& s) {
    json dims = json::array();
    for (const auto& d : s.dimensions()) {
        json values = json::array();
        for (double v : d.values) {
            if (d.name == "dataflow")
                values.push_back(std::string(to_string(v == 0.0 ? Dataflow::output_stationary : Dataflow::weight_stationary)));
            else if (std::floor(v) == v && std::abs(v) < 9e15)
                values.push_back(static_cast<long long>(v));
            else
                values.push_back(v);
        }
        dims.push_back({{"name", d.name}, {"values", values}});
    }
    return dims;
}

inline ParamSpace space_from_json(const json& j, const std::string& path) {
    if (!j.is_array()) throw ValidationError(path, "expected a list of dimensions");
    std::vector<Dimension> dims;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        check_keys(j[i], p, {"name", "values"});
        Dimension d;
        d.name = string(j[i], "name", p, "");
        if (d.name.empty()) throw ValidationError(join(p, "name"), "required field missing");
        if (!j[i].contains("values") || !j[i].at("values").is_array())
            throw ValidationError(join(p, "values"), "expected a list");
        for (const auto& v : j[i].at("values")) {
            if (d.name == "dataflow" && v.is_string()) {
                try {
                    d.values.push_back(parse_dataflow(v.get<std::string>()) == Dataflow::output_stationary ? 0.0 : 1.0);
                } catch (const ParseError& e) {
                    throw ValidationError(join(p, "values"), e.what());
                }
            } else if (v.is_number()) {
                d.values.push_back(v.get<double>());
            } else {
                throw ValidationError(join(p, "values"), "expected numbers");
            }
        }
        dims.push_back(std::move(d));
    }
    return ParamSpace(std::move(dims));
}

}  // namespace codesign::jsonio
