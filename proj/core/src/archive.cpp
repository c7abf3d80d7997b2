#include "codesign/archive.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "json_io.hpp"

namespace codesign {

using jsonio::json;

void ParetoArchive::add(DesignPoint p) {
    const auto y = p.objectives.minimize();
    const std::size_t idx = points_.size();
    points_.push_back(std::move(p));
    for (std::size_t f : front_) {
        if (dominates(points_[f].objectives.minimize(), y)) return;
    }
    std::erase_if(front_, [&](std::size_t f) { return dominates(y, points_[f].objectives.minimize()); });
    front_.push_back(idx);
}

std::vector<std::size_t> ParetoArchive::front() const {
    auto f = front_;
    std::sort(f.begin(), f.end());
    return f;
}

namespace {

json point_to_json(const DesignPoint& p) {
    json j;
    j["eval"] = p.eval_index;
    j["flat"] = p.flat;
    j["indices"] = p.indices;
    j["model"] = jsonio::to_json(p.model);
    j["accel"] = jsonio::to_json(p.accel);
    j["objectives"] = {{"success_rate", p.objectives.success_rate},
                       {"latency_s", p.objectives.latency_s},
                       {"soc_power_w", p.objectives.soc_power_w}};
    j["throughput_fps"] = p.throughput_fps;
    j["total_cycles"] = p.total_cycles;
    j["params"] = p.params;
    j["success_source"] = std::string(to_string(p.success_source));
    j["power"] = {{"accelerator", p.soc.accelerator}, {"mcu", p.soc.mcu}, {"camera", p.soc.camera},
                  {"dram", p.soc.dram}, {"total", p.soc.total}};
    j["mass"] = {{"board_g", p.mass.board_g}, {"heatsink_g", p.mass.heatsink_g}, {"total_g", p.mass.total_g}};
    j["seed"] = p.seed;
    if (!p.note.empty()) j["note"] = p.note;
    return j;
}

DesignPoint point_from_json(const json& j, const std::string& path) {
    DesignPoint p;
    try {
        p.eval_index = j.at("eval").get<std::uint64_t>();
        p.flat = j.at("flat").get<std::uint64_t>();
        p.indices = j.at("indices").get<std::vector<std::size_t>>();
        p.model = jsonio::model_from_json(j.at("model"), ModelSpec{}, path + ".model");
        p.accel = jsonio::accel_from_json(j.at("accel"), AccelConfig{}, path + ".accel");
        const auto& o = j.at("objectives");
        p.objectives = {o.at("success_rate").get<double>(), o.at("latency_s").get<double>(),
                        o.at("soc_power_w").get<double>()};
        p.throughput_fps = j.at("throughput_fps").get<double>();
        p.total_cycles = j.at("total_cycles").get<std::uint64_t>();
        p.params = j.at("params").get<std::uint64_t>();
        p.success_source = j.at("success_source").get<std::string>() == "database" ? SuccessSource::database
                                                                                   : SuccessSource::surrogate;
        const auto& w = j.at("power");
        p.soc = {w.at("accelerator").get<double>(), w.at("mcu").get<double>(), w.at("camera").get<double>(),
                 w.at("dram").get<double>(), w.at("total").get<double>()};
        const auto& m = j.at("mass");
        p.mass = {m.at("board_g").get<double>(), m.at("heatsink_g").get<double>(), m.at("total_g").get<double>()};
        p.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("note")) p.note = j.at("note").get<std::string>();
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return p;
}

}  // namespace

std::string archive_to_jsonl(const ArchiveHeader& h, const std::vector<DesignPoint>& points) {
    json head;
    head["schema_version"] = h.schema_version;
    head["kind"] = h.kind;
    head["problem"] = h.problem;
    head["problem_hash"] = h.problem_hash;
    head["seed"] = h.seed;
    head["budget"] = h.budget;
    head["count"] = points.size();
    head["space"] = jsonio::to_json(h.space);
    std::string out = head.dump() + "\n";
    for (const auto& p : points) out += point_to_json(p).dump() + "\n";
    return out;
}

void parse_archive(std::string_view text, ArchiveHeader& h, std::vector<DesignPoint>& points) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::uint64_t count = 0;
    points.clear();
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError("archive line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!header) {
            try {
                h.schema_version = j.at("schema_version").get<int>();
                if (h.schema_version != 1)
                    throw ParseError("archive schema_version " + std::to_string(h.schema_version) + " is not supported");
                h.kind = j.at("kind").get<std::string>();
                h.problem = j.at("problem").get<std::string>();
                h.problem_hash = j.at("problem_hash").get<std::string>();
                h.seed = j.at("seed").get<std::uint64_t>();
                h.budget = j.at("budget").get<std::uint64_t>();
                count = j.at("count").get<std::uint64_t>();
                h.space = jsonio::space_from_json(j.at("space"), "space");
            } catch (const json::exception& e) {
                throw ParseError(std::string("archive header: ") + e.what());
            }
            header = true;
            continue;
        }
        points.push_back(point_from_json(j, "archive line " + std::to_string(lineno)));
    }
    if (!header) throw ParseError("archive: missing header line");
    if (points.size() != count)
        throw ParseError("archive: header announces " + std::to_string(count) + " designs, found " +
                         std::to_string(points.size()));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void save_archive(const std::filesystem::path& path, const ArchiveHeader& header,
                  const std::vector<DesignPoint>& points) {
    write_file_atomic(path, archive_to_jsonl(header, points));
}

void load_archive(const std::filesystem::path& path, ArchiveHeader& header, std::vector<DesignPoint>& points) {
    parse_archive(read_file(path), header, points);
}

std::string front_csv(const std::vector<DesignPoint>& points, const std::vector<std::size_t>& front) {
    std::ostringstream out;
    out.precision(10);
    out << "eval,flat,conv_layers,filters,array_rows,array_cols,sram_ifmap_bytes,sram_filter_bytes,"
           "sram_ofmap_bytes,dataflow,dram_bandwidth,frequency_hz,success_rate,latency_s,throughput_fps,"
           "soc_power_w,compute_mass_g\n";
    for (std::size_t i : front) {
        const auto& p = points.at(i);
        out << p.eval_index << ',' << p.flat << ',' << p.model.conv_layers << ',' << p.model.filters_per_layer << ','
            << p.accel.array_rows << ',' << p.accel.array_cols << ',' << p.accel.sram_ifmap_bytes << ','
            << p.accel.sram_filter_bytes << ',' << p.accel.sram_ofmap_bytes << ',' << to_string(p.accel.dataflow)
            << ',' << p.accel.dram_bandwidth << ',' << p.accel.frequency_hz << ',' << p.objectives.success_rate
            << ',' << p.objectives.latency_s << ',' << p.throughput_fps << ',' << p.objectives.soc_power_w << ','
            << p.mass.total_g << '\n';
    }
    return out.str();
}

}  // namespace codesign
