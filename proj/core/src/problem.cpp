#include "codesign/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "codesign/archive.hpp"
#include "json_io.hpp"

namespace codesign {

using jsonio::json;
using jsonio::check_keys;
using jsonio::integer;
using jsonio::number;
using jsonio::required_number;
using jsonio::string;

std::string_view to_string(KneeRule r) { return r == KneeRule::roofline ? "roofline" : "saturation"; }

KneeRule parse_knee_rule(std::string_view s) {
    if (s == "roofline") return KneeRule::roofline;
    if (s == "saturation") return KneeRule::saturation;
    throw ParseError("unknown knee rule '" + std::string(s) + "'");
}

std::uint64_t SearchConfig::effective_init() const {
    if (init_samples) return *init_samples;
    const std::uint64_t active = space.active_dimensions().size();
    return std::max<std::uint64_t>(11, 2 * active + 1);
}

EnvironmentClass CoDesignProblem::env(EnvClass c) const {
    return {c, difficulties[static_cast<std::size_t>(c)]};
}

SocConstants CoDesignProblem::soc_constants() const {
    SocConstants c = soc;
    c.camera_w = platform.sensor.power_w;
    return c;
}

namespace {

Sensor sensor_from(const json& j, const std::string& path) {
    check_keys(j, path, {"framerate_fps", "mass_g", "power_w", "sensing_range_m", "latency_s"});
    Sensor s;
    s.framerate_fps = number(j, "framerate_fps", path, s.framerate_fps);
    s.mass_g = number(j, "mass_g", path, s.mass_g);
    s.power_w = number(j, "power_w", path, s.power_w);
    s.sensing_range_m = number(j, "sensing_range_m", path, s.sensing_range_m);
    s.latency_s = number(j, "latency_s", path, s.latency_s);
    return s;
}

UavPlatform platform_from(const json& j, const std::string& path) {
    check_keys(j, path, {"name", "size_class", "battery_capacity_mah", "battery_voltage_v", "base_mass_g",
                         "max_thrust_n", "rotor_disk_area_m2", "other_power_w", "sensor"});
    UavPlatform p;
    p.name = string(j, "name", path, "");
    try {
        p.size_class = parse_size_class(string(j, "size_class", path, "nano"));
    } catch (const ParseError& e) {
        throw ValidationError(path + ".size_class", e.what());
    }
    p.battery_capacity_mah = required_number(j, "battery_capacity_mah", path);
    p.battery_voltage_v = number(j, "battery_voltage_v", path, p.battery_voltage_v);
    p.base_mass_g = required_number(j, "base_mass_g", path);
    p.max_thrust_n = required_number(j, "max_thrust_n", path);
    p.rotor_disk_area_m2 = required_number(j, "rotor_disk_area_m2", path);
    p.other_power_w = number(j, "other_power_w", path, p.other_power_w);
    if (j.contains("sensor")) p.sensor = sensor_from(j.at("sensor"), path + ".sensor");
    return p;
}

GpOptions gp_from(const json& j, const std::string& path) {
    check_keys(j, path, {"log_lengthscale_min", "log_lengthscale_max", "log_signal_min", "log_signal_max",
                         "log_noise_min", "log_noise_max", "restarts", "max_evals_per_start"});
    GpOptions o;
    o.log_lengthscale_min = number(j, "log_lengthscale_min", path, o.log_lengthscale_min);
    o.log_lengthscale_max = number(j, "log_lengthscale_max", path, o.log_lengthscale_max);
    o.log_signal_min = number(j, "log_signal_min", path, o.log_signal_min);
    o.log_signal_max = number(j, "log_signal_max", path, o.log_signal_max);
    o.log_noise_min = number(j, "log_noise_min", path, o.log_noise_min);
    o.log_noise_max = number(j, "log_noise_max", path, o.log_noise_max);
    o.restarts = static_cast<std::size_t>(integer(j, "restarts", path, (long long)o.restarts));
    o.max_evals_per_start = static_cast<std::size_t>(integer(j, "max_evals_per_start", path, (long long)o.max_evals_per_start));
    return o;
}

json gp_to(const GpOptions& o) {
    return {{"log_lengthscale_min", o.log_lengthscale_min}, {"log_lengthscale_max", o.log_lengthscale_max},
            {"log_signal_min", o.log_signal_min},           {"log_signal_max", o.log_signal_max},
            {"log_noise_min", o.log_noise_min},             {"log_noise_max", o.log_noise_max},
            {"restarts", o.restarts},                       {"max_evals_per_start", o.max_evals_per_start}};
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative()) path = base / path;
    return std::filesystem::absolute(path).lexically_normal();
}

json parse_json(std::string_view text, const std::string& what) {
    try {
        return json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ParseError(what + ": " + e.what());
    }
}

}  // namespace

CoDesignProblem parse_problem(std::string_view text, const std::filesystem::path& base_dir) {
    const json root = parse_json(text, "config");
    check_keys(root, "", {"schema_version", "name", "platform", "environment", "mission", "physics", "knee",
                          "policy", "accelerator", "energy", "soc", "compute_mass", "search", "baselines"});
    if (!root.contains("schema_version")) throw ValidationError("schema_version", "required field missing");
    if (integer(root, "schema_version", "", 0) != kSchemaVersion)
        throw ValidationError("schema_version", "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");

    CoDesignProblem p;
    p.name = string(root, "name", "", "");
    if (!root.contains("platform")) throw ValidationError("platform", "required field missing");
    p.platform = platform_from(root.at("platform"), "platform");

    if (root.contains("environment")) {
        const auto& e = root.at("environment");
        check_keys(e, "environment", {"class", "difficulties"});
        try {
            p.environment.cls = parse_env_class(string(e, "class", "environment", "low"));
        } catch (const ParseError& err) {
            throw ValidationError("environment.class", err.what());
        }
        if (e.contains("difficulties")) {
            const auto& d = e.at("difficulties");
            check_keys(d, "environment.difficulties", {"low", "medium", "dense"});
            p.difficulties[0] = number(d, "low", "environment.difficulties", p.difficulties[0]);
            p.difficulties[1] = number(d, "medium", "environment.difficulties", p.difficulties[1]);
            p.difficulties[2] = number(d, "dense", "environment.difficulties", p.difficulties[2]);
        }
    }
    p.environment.difficulty = p.difficulties[static_cast<std::size_t>(p.environment.cls)];

    if (!root.contains("mission")) throw ValidationError("mission", "required field missing");
    {
        const auto& m = root.at("mission");
        check_keys(m, "mission", {"distance_m", "min_success_rate"});
        p.mission.distance_m = required_number(m, "distance_m", "mission");
        p.mission.min_success_rate = number(m, "min_success_rate", "mission", 0.0);
    }

    if (root.contains("physics")) {
        const auto& ph = root.at("physics");
        check_keys(ph, "physics", {"control_latency_s", "air_density", "figure_of_merit", "gravity"});
        p.physics.control_latency_s = number(ph, "control_latency_s", "physics", p.physics.control_latency_s);
        p.physics.air_density = number(ph, "air_density", "physics", p.physics.air_density);
        p.physics.figure_of_merit = number(ph, "figure_of_merit", "physics", p.physics.figure_of_merit);
        p.physics.gravity = number(ph, "gravity", "physics", p.physics.gravity);
    }

    if (root.contains("knee")) {
        const auto& k = root.at("knee");
        check_keys(k, "knee", {"rule", "epsilon", "reference_payload_g", "assess_tolerance"});
        try {
            p.knee.rule = parse_knee_rule(string(k, "rule", "knee", "roofline"));
        } catch (const ParseError& e) {
            throw ValidationError("knee.rule", e.what());
        }
        p.knee.epsilon = number(k, "epsilon", "knee", p.knee.epsilon);
        p.knee.reference_payload_g = number(k, "reference_payload_g", "knee", p.knee.reference_payload_g);
        p.knee.assess_tolerance = number(k, "assess_tolerance", "knee", p.knee.assess_tolerance);
    }

    if (root.contains("policy")) {
        const auto& pol = root.at("policy");
        check_keys(pol, "policy", {"template", "surrogate", "database"});
        if (pol.contains("template")) p.base_model = jsonio::model_from_json(pol.at("template"), p.base_model, "policy.template");
        if (pol.contains("surrogate")) {
            const auto& s = pol.at("surrogate");
            const std::string sp = "policy.surrogate";
            check_keys(s, sp, {"floor", "top", "alpha", "beta0", "beta_slope", "smax0", "smax_slope", "anchors"});
            auto& c = p.surrogate;
            c.floor = number(s, "floor", sp, c.floor);
            c.top = number(s, "top", sp, c.top);
            c.alpha = number(s, "alpha", sp, c.alpha);
            c.beta0 = number(s, "beta0", sp, c.beta0);
            c.beta_slope = number(s, "beta_slope", sp, c.beta_slope);
            c.smax0 = number(s, "smax0", sp, c.smax0);
            c.smax_slope = number(s, "smax_slope", sp, c.smax_slope);
            if (s.contains("anchors")) {
                const auto& a = s.at("anchors");
                check_keys(a, sp + ".anchors", {"low", "dense"});
                if (!a.contains("low") || !a.contains("dense"))
                    throw ValidationError(sp + ".anchors", "both 'low' and 'dense' models are required");
                p.anchors = SurrogateAnchors{
                    jsonio::model_from_json(a.at("low"), p.base_model, sp + ".anchors.low"),
                    jsonio::model_from_json(a.at("dense"), p.base_model, sp + ".anchors.dense")};
            }
        }
        if (pol.contains("database")) {
            const auto db = string(pol, "database", "policy", "");
            if (!db.empty()) p.policy_db_path = resolve(base_dir, db).string();
        }
    }

    if (root.contains("accelerator")) p.base_accel = jsonio::accel_from_json(root.at("accelerator"), p.base_accel, "accelerator");

    if (root.contains("energy")) {
        const auto& e = root.at("energy");
        if (e.is_string()) {
            const auto path = resolve(base_dir, e.get<std::string>());
            std::string text;
            try {
                text = read_file(path);
            } catch (const Error&) {
                throw ParseError("cannot read energy table " + path.string());
            }
            p.energy = jsonio::energy_from_json(parse_json(text, "energy table " + path.string()), "energy");
        } else {
            p.energy = jsonio::energy_from_json(e, "energy");
        }
    }

    if (root.contains("soc")) {
        const auto& s = root.at("soc");
        check_keys(s, "soc", {"mcu_cores", "mcu_core_w", "dram_standby_w"});
        p.soc.mcu_cores = static_cast<int>(integer(s, "mcu_cores", "soc", p.soc.mcu_cores));
        p.soc.mcu_core_w = number(s, "mcu_core_w", "soc", p.soc.mcu_core_w);
        p.soc.dram_standby_w = number(s, "dram_standby_w", "soc", p.soc.dram_standby_w);
    }

    if (root.contains("compute_mass")) {
        const auto& c = root.at("compute_mass");
        check_keys(c, "compute_mass", {"board_g", "heatsink_g_per_w"});
        p.board_g = number(c, "board_g", "compute_mass", p.board_g);
        p.heatsink_g_per_w = number(c, "heatsink_g_per_w", "compute_mass", p.heatsink_g_per_w);
    }

    if (!root.contains("search")) throw ValidationError("search", "required field missing");
    {
        const auto& s = root.at("search");
        const std::string sp = "search";
        check_keys(s, sp, {"dimensions", "budget", "seed", "init_samples", "gamma", "epsilon", "refit_growth",
                           "subsample_threshold", "sweep_cap", "gp"});
        if (!s.contains("dimensions")) throw ValidationError("search.dimensions", "required field missing");
        p.search.space = jsonio::space_from_json(s.at("dimensions"), "search.dimensions");
        const long long budget = integer(s, "budget", sp, (long long)p.search.budget);
        const long long seed = integer(s, "seed", sp, (long long)p.search.seed);
        if (budget < 1) throw ValidationError("search.budget", "must be >= 1");
        if (seed < 0) throw ValidationError("search.seed", "must be >= 0");
        p.search.budget = static_cast<std::uint64_t>(budget);
        p.search.seed = static_cast<std::uint64_t>(seed);
        if (s.contains("init_samples") && !s.at("init_samples").is_null()) {
            const long long init = integer(s, "init_samples", sp, 0);
            if (init < 1) throw ValidationError("search.init_samples", "must be >= 1");
            p.search.init_samples = static_cast<std::uint64_t>(init);
        }
        if (s.contains("gamma") && !s.at("gamma").is_null()) p.search.gamma = number(s, "gamma", sp, 0.0);
        p.search.epsilon = number(s, "epsilon", sp, p.search.epsilon);
        p.search.refit_growth = number(s, "refit_growth", sp, p.search.refit_growth);
        p.search.subsample_threshold =
            static_cast<std::uint64_t>(integer(s, "subsample_threshold", sp, (long long)p.search.subsample_threshold));
        p.search.sweep_cap = static_cast<std::uint64_t>(integer(s, "sweep_cap", sp, (long long)p.search.sweep_cap));
        if (s.contains("gp")) p.search.gp = gp_from(s.at("gp"), "search.gp");
    }

    if (root.contains("baselines")) {
        const auto& b = root.at("baselines");
        if (!b.is_array()) throw ValidationError("baselines", "expected a list");
        for (std::size_t i = 0; i < b.size(); ++i) {
            const std::string bp = "baselines[" + std::to_string(i) + "]";
            check_keys(b[i], bp, {"label", "throughput_fps", "power_w", "mass_g", "success_rate"});
            Baseline x;
            x.label = string(b[i], "label", bp, "");
            x.throughput_fps = required_number(b[i], "throughput_fps", bp);
            x.power_w = required_number(b[i], "power_w", bp);
            x.mass_g = required_number(b[i], "mass_g", bp);
            x.success_rate = number(b[i], "success_rate", bp, 1.0);
            p.baselines.push_back(x);
        }
    }

    if (p.anchors) {
        validate(p.anchors->low_model);
        validate(p.anchors->dense_model);
        validate(p.surrogate);
        p.surrogate = anchor_surrogate(p.surrogate, static_cast<double>(param_count(p.anchors->low_model)),
                                       p.difficulties[0], static_cast<double>(param_count(p.anchors->dense_model)),
                                       p.difficulties[2]);
    }
    validate(p.base_model);
    if (!p.policy_db_path.empty()) p.policy_db = ingest_database(p.policy_db_path, p.base_model);

    validate(p);
    return p;
}

CoDesignProblem load_problem(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error&) {
        throw ParseError("cannot read config " + path.string());
    }
    return parse_problem(text, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

void validate(const CoDesignProblem& p) {
    std::vector<Issue> issues;
    auto need = [&](bool ok, const std::string& path, const std::string& msg) {
        if (!ok) issues.push_back({path, msg});
    };
    auto absorb = [&](auto&& fn) {
        try {
            fn();
        } catch (const ValidationError& e) {
            issues.insert(issues.end(), e.issues().begin(), e.issues().end());
        }
    };
    auto finite = [](double v) { return std::isfinite(v); };

    const auto& pl = p.platform;
    const auto& s = pl.sensor;
    need(finite(s.framerate_fps) && s.framerate_fps > 0, "platform.sensor.framerate_fps", "must be > 0");
    need(finite(s.sensing_range_m) && s.sensing_range_m > 0, "platform.sensor.sensing_range_m", "must be > 0");
    need(finite(s.mass_g) && s.mass_g >= 0, "platform.sensor.mass_g", "must be >= 0");
    need(finite(s.power_w) && s.power_w >= 0, "platform.sensor.power_w", "must be >= 0");
    need(finite(s.latency_s) && s.latency_s >= 0, "platform.sensor.latency_s", "must be >= 0");
    need(finite(pl.battery_capacity_mah) && pl.battery_capacity_mah > 0, "platform.battery_capacity_mah", "must be > 0");
    need(finite(pl.battery_voltage_v) && pl.battery_voltage_v > 0, "platform.battery_voltage_v", "must be > 0");
    need(finite(pl.base_mass_g) && pl.base_mass_g > 0, "platform.base_mass_g", "must be > 0");
    need(finite(pl.rotor_disk_area_m2) && pl.rotor_disk_area_m2 > 0, "platform.rotor_disk_area_m2", "must be > 0");
    need(finite(pl.other_power_w) && pl.other_power_w >= 0, "platform.other_power_w", "must be >= 0");
    need(finite(pl.max_thrust_n) && pl.max_thrust_n > p.physics.gravity * 1e-3 * (pl.base_mass_g + s.mass_g),
         "platform.max_thrust_n", "cannot hover: thrust does not exceed the weight of base and sensor");

    need(p.difficulties[0] >= 0 && p.difficulties[2] <= 1, "environment.difficulties", "must lie in [0,1]");
    need(p.difficulties[0] < p.difficulties[1] && p.difficulties[1] < p.difficulties[2], "environment.difficulties",
         "must be strictly increasing low < medium < dense");

    need(finite(p.mission.distance_m) && p.mission.distance_m > 0, "mission.distance_m", "must be > 0");
    need(p.mission.min_success_rate >= 0 && p.mission.min_success_rate <= 1, "mission.min_success_rate",
         "must lie in [0,1]");

    need(p.physics.figure_of_merit > 0 && p.physics.figure_of_merit <= 1, "physics.figure_of_merit", "must lie in (0,1]");
    need(finite(p.physics.air_density) && p.physics.air_density > 0, "physics.air_density", "must be > 0");
    need(finite(p.physics.gravity) && p.physics.gravity > 0, "physics.gravity", "must be > 0");
    need(finite(p.physics.control_latency_s) && p.physics.control_latency_s >= 0, "physics.control_latency_s",
         "must be >= 0");

    need(p.knee.epsilon > 0 && p.knee.epsilon <= 0.2, "knee.epsilon", "must lie in (0, 0.2]");
    need(p.knee.assess_tolerance >= 0 && p.knee.assess_tolerance < 1, "knee.assess_tolerance", "must lie in [0,1)");
    need(finite(p.knee.reference_payload_g) && p.knee.reference_payload_g >= 0, "knee.reference_payload_g",
         "must be >= 0");

    absorb([&] { validate(p.base_model); });
    absorb([&] { validate(p.surrogate); });
    absorb([&] { validate(p.base_accel); });
    absorb([&] { validate(p.energy); });

    need(p.soc.mcu_cores >= 0, "soc.mcu_cores", "must be >= 0");
    need(p.soc.mcu_core_w >= 0, "soc.mcu_core_w", "must be >= 0");
    need(p.soc.dram_standby_w >= 0, "soc.dram_standby_w", "must be >= 0");
    need(p.board_g >= 0, "compute_mass.board_g", "must be >= 0");
    need(p.heatsink_g_per_w >= 0, "compute_mass.heatsink_g_per_w", "must be >= 0");

    const auto& sr = p.search;
    need(sr.space.rank() > 0, "search.dimensions", "at least one dimension required");
    need(sr.budget >= 1, "search.budget", "must be >= 1");
    need(sr.budget >= sr.effective_init(), "search.budget",
         "must be >= the initial sample count (" + std::to_string(sr.effective_init()) + ")");
    need(sr.refit_growth >= 1.0, "search.refit_growth", "must be >= 1");
    need(sr.subsample_threshold >= 1, "search.subsample_threshold", "must be >= 1");
    need(sr.epsilon >= 0, "search.epsilon", "must be >= 0");
    if (sr.gamma) need(finite(*sr.gamma) && *sr.gamma >= 0, "search.gamma", "must be >= 0");
    need(sr.gp.log_lengthscale_min < sr.gp.log_lengthscale_max && sr.gp.log_signal_min < sr.gp.log_signal_max &&
             sr.gp.log_noise_min < sr.gp.log_noise_max,
         "search.gp", "every lower bound must be below its upper bound");

    // Each dimension value must produce a valid design on its own.
    std::vector<std::uint64_t> sram_sizes{p.base_accel.sram_ifmap_bytes, p.base_accel.sram_filter_bytes,
                                          p.base_accel.sram_ofmap_bytes};
    for (std::size_t d = 0; d < sr.space.rank(); ++d) {
        const auto& dim = sr.space.dimensions()[d];
        const std::string path = "search.dimensions[" + std::to_string(d) + "]";
        static const std::set<std::string> known{"conv_layers",   "filters",       "kernel",        "array_rows",
                                                 "array_cols",    "sram_ifmap_kb", "sram_filter_kb", "sram_ofmap_kb",
                                                 "dram_bandwidth", "dataflow",     "frequency_mhz", "tech_node_nm"};
        if (!known.contains(dim.name)) {
            issues.push_back({path, "unknown dimension '" + dim.name + "'"});
            continue;
        }
        for (double v : dim.values) {
            absorb([&] {
                ModelSpec m = p.base_model;
                AccelConfig a = p.base_accel;
                const int iv = static_cast<int>(std::lround(v));
                const bool integral = std::floor(v) == v;
                const auto kb = static_cast<std::uint64_t>(std::llround(v * 1024.0));
                if (dim.name == "conv_layers") m.conv_layers = iv;
                else if (dim.name == "filters") m.filters_per_layer = iv;
                else if (dim.name == "kernel") m.kernel = {iv, iv};
                else if (dim.name == "array_rows") a.array_rows = iv;
                else if (dim.name == "array_cols") a.array_cols = iv;
                else if (dim.name == "sram_ifmap_kb") a.sram_ifmap_bytes = kb, sram_sizes.push_back(kb);
                else if (dim.name == "sram_filter_kb") a.sram_filter_bytes = kb, sram_sizes.push_back(kb);
                else if (dim.name == "sram_ofmap_kb") a.sram_ofmap_bytes = kb, sram_sizes.push_back(kb);
                else if (dim.name == "dram_bandwidth") a.dram_bandwidth = v;
                else if (dim.name == "dataflow") {
                    if (v != 0.0 && v != 1.0) throw ValidationError(path, "dataflow must be os or ws");
                } else if (dim.name == "frequency_mhz") a.frequency_hz = v * 1e6;
                else if (dim.name == "tech_node_nm") a.tech_node_nm = v;
                const bool needs_int = dim.name == "conv_layers" || dim.name == "filters" || dim.name == "kernel" ||
                                       dim.name == "array_rows" || dim.name == "array_cols";
                if (needs_int && !integral) throw ValidationError(path, "'" + dim.name + "' values must be integers");
                validate(m);
                validate(a);
            });
        }
    }
    const auto last_bin = p.energy.sram_bins.empty() ? 0 : p.energy.sram_bins.back().max_bytes;
    for (auto sz : sram_sizes) {
        if (sz > last_bin) {
            issues.push_back({"energy.sram_bins", "no bin covers a " + std::to_string(sz) + "-byte partition"});
            break;
        }
    }

    std::set<std::string> labels;
    for (std::size_t i = 0; i < p.baselines.size(); ++i) {
        const auto& b = p.baselines[i];
        const std::string path = "baselines[" + std::to_string(i) + "]";
        need(!b.label.empty(), path + ".label", "must not be empty");
        need(labels.insert(b.label).second, path + ".label", "duplicate label '" + b.label + "'");
        need(finite(b.throughput_fps) && b.throughput_fps > 0, path + ".throughput_fps", "must be > 0");
        need(finite(b.power_w) && b.power_w >= 0, path + ".power_w", "must be >= 0");
        need(finite(b.mass_g) && b.mass_g >= 0, path + ".mass_g", "must be >= 0");
        need(b.success_rate >= 0 && b.success_rate <= 1, path + ".success_rate", "must lie in [0,1]");
    }

    if (!issues.empty()) throw ValidationError(std::move(issues));
}

std::string to_json(const CoDesignProblem& p) {
    json root;
    root["schema_version"] = kSchemaVersion;
    root["name"] = p.name;
    const auto& pl = p.platform;
    root["platform"] = {{"name", pl.name},
                        {"size_class", std::string(to_string(pl.size_class))},
                        {"battery_capacity_mah", pl.battery_capacity_mah},
                        {"battery_voltage_v", pl.battery_voltage_v},
                        {"base_mass_g", pl.base_mass_g},
                        {"max_thrust_n", pl.max_thrust_n},
                        {"rotor_disk_area_m2", pl.rotor_disk_area_m2},
                        {"other_power_w", pl.other_power_w},
                        {"sensor",
                         {{"framerate_fps", pl.sensor.framerate_fps},
                          {"mass_g", pl.sensor.mass_g},
                          {"power_w", pl.sensor.power_w},
                          {"sensing_range_m", pl.sensor.sensing_range_m},
                          {"latency_s", pl.sensor.latency_s}}}};
    root["environment"] = {{"class", std::string(to_string(p.environment.cls))},
                           {"difficulties",
                            {{"low", p.difficulties[0]}, {"medium", p.difficulties[1]}, {"dense", p.difficulties[2]}}}};
    root["mission"] = {{"distance_m", p.mission.distance_m}, {"min_success_rate", p.mission.min_success_rate}};
    root["physics"] = {{"control_latency_s", p.physics.control_latency_s},
                       {"air_density", p.physics.air_density},
                       {"figure_of_merit", p.physics.figure_of_merit},
                       {"gravity", p.physics.gravity}};
    root["knee"] = {{"rule", std::string(to_string(p.knee.rule))},
                    {"epsilon", p.knee.epsilon},
                    {"reference_payload_g", p.knee.reference_payload_g},
                    {"assess_tolerance", p.knee.assess_tolerance}};
    json sur = {{"floor", p.surrogate.floor},         {"top", p.surrogate.top},
                {"alpha", p.surrogate.alpha},         {"beta0", p.surrogate.beta0},
                {"beta_slope", p.surrogate.beta_slope}, {"smax0", p.surrogate.smax0},
                {"smax_slope", p.surrogate.smax_slope}};
    if (p.anchors)
        sur["anchors"] = {{"low", jsonio::to_json(p.anchors->low_model)},
                          {"dense", jsonio::to_json(p.anchors->dense_model)}};
    root["policy"] = {{"template", jsonio::to_json(p.base_model)}, {"surrogate", sur}};
    if (!p.policy_db_path.empty()) root["policy"]["database"] = p.policy_db_path;
    root["accelerator"] = jsonio::to_json(p.base_accel);
    root["energy"] = jsonio::to_json(p.energy);
    root["soc"] = {{"mcu_cores", p.soc.mcu_cores}, {"mcu_core_w", p.soc.mcu_core_w},
                   {"dram_standby_w", p.soc.dram_standby_w}};
    root["compute_mass"] = {{"board_g", p.board_g}, {"heatsink_g_per_w", p.heatsink_g_per_w}};
    json search = {{"dimensions", jsonio::to_json(p.search.space)},
                   {"budget", p.search.budget},
                   {"seed", p.search.seed}};
    search["init_samples"] = p.search.init_samples ? json(*p.search.init_samples) : json(nullptr);
    search["gamma"] = p.search.gamma ? json(*p.search.gamma) : json(nullptr);
    search["epsilon"] = p.search.epsilon;
    search["refit_growth"] = p.search.refit_growth;
    search["subsample_threshold"] = p.search.subsample_threshold;
    search["sweep_cap"] = p.search.sweep_cap;
    search["gp"] = gp_to(p.search.gp);
    root["search"] = search;
    json base = json::array();
    for (const auto& b : p.baselines)
        base.push_back({{"label", b.label},
                        {"throughput_fps", b.throughput_fps},
                        {"power_w", b.power_w},
                        {"mass_g", b.mass_g},
                        {"success_rate", b.success_rate}});
    root["baselines"] = base;
    return root.dump(2) + "\n";
}

std::uint64_t problem_hash(const CoDesignProblem& p) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : to_json(p)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace codesign
