#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "codesign/archive.hpp"
#include "codesign/bayesopt.hpp"
#include "codesign/errors.hpp"
#include "codesign/f1model.hpp"
#include "codesign/selection.hpp"
#include "manifest.hpp"
#include "svg.hpp"

namespace cli {

using namespace codesign;
using clock = std::chrono::system_clock;

namespace {

CoDesignProblem load(const fs::path& config) {
    if (!fs::exists(config)) throw ParseError("config not found: " + config.string());
    return load_problem(config);
}

void make_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
}

std::string str(const fs::path& p) { return p.lexically_normal().string(); }

ArchiveHeader header_for(const CoDesignProblem& p, const std::string& kind) {
    ArchiveHeader h;
    h.kind = kind;
    h.problem = p.name;
    h.problem_hash = hex64(problem_hash(p));
    h.seed = p.search.seed;
    h.budget = p.search.budget;
    h.space = p.search.space;
    return h;
}

std::string trace_csv(const std::vector<double>& trace) {
    std::ostringstream s;
    s.precision(12);
    s << "evaluations,hypervolume\n";
    for (std::size_t i = 0; i < trace.size(); ++i) s << i + 1 << ',' << trace[i] << '\n';
    return s.str();
}

void write_run(const fs::path& out, const CoDesignProblem& p, const ExploreResult& r, const std::string& kind,
               RunManifest& m) {
    make_dir(out);
    save_archive(out / "archive.jsonl", header_for(p, kind), r.points);
    write_file_atomic(out / "front.csv", front_csv(r.points, r.front));
    write_file_atomic(out / "hv_trace.csv", trace_csv(r.hv_trace));
    m.outputs = {str(out / "archive.jsonl"), str(out / "front.csv"), str(out / "hv_trace.csv"),
                 str(out / "manifest.json")};
}

void summarize(std::ostream& log, const ExploreResult& r) {
    const bool monotone = std::is_sorted(r.hv_trace.begin(), r.hv_trace.end());
    log << "evaluated " << r.points.size() << " designs, " << r.front.size() << " on the front\n";
    if (!r.hv_trace.empty())
        log << "normalized hypervolume " << r.hv_trace.back() << (monotone ? " (trace monotone)" : " (trace NOT monotone)")
            << '\n';
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream s;
    s << std::setprecision(prec) << v;
    return s.str();
}

// key=value onto the template model and base accelerator.
void apply_override(const std::string& kv, ModelSpec& model, AccelConfig& accel) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("expected key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    if (key == "dataflow") {
        accel.dataflow = parse_dataflow(val);
        return;
    }
    double v = 0;
    try {
        std::size_t used = 0;
        v = std::stod(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
        throw std::invalid_argument("'" + key + "' needs a number, got '" + val + "'");
    }
    const int iv = static_cast<int>(std::lround(v));
    const auto kb = static_cast<std::uint64_t>(std::llround(v * 1024.0));
    if (key == "conv_layers") model.conv_layers = iv;
    else if (key == "filters") model.filters_per_layer = iv;
    else if (key == "kernel") model.kernel = {iv, iv};
    else if (key == "array_rows") accel.array_rows = iv;
    else if (key == "array_cols") accel.array_cols = iv;
    else if (key == "sram_ifmap_kb") accel.sram_ifmap_bytes = kb;
    else if (key == "sram_filter_kb") accel.sram_filter_bytes = kb;
    else if (key == "sram_ofmap_kb") accel.sram_ofmap_bytes = kb;
    else if (key == "dram_bandwidth") accel.dram_bandwidth = v;
    else if (key == "frequency_mhz") accel.frequency_hz = v * 1e6;
    else if (key == "tech_node_nm") accel.tech_node_nm = v;
    else throw std::invalid_argument("unknown parameter '" + key + "'");
}

std::string selection_csv(const Selection& sel, const std::vector<CandidateRow>& extra) {
    std::ostringstream s;
    s.precision(10);
    s << "label,success_rate,throughput_fps,power_w,mass_g,action_fps,v_safe_mps,n_missions,assessment,margin,"
         "eligible,chosen\n";
    auto row = [&](const CandidateRow& r, bool chosen) {
        const auto& c = r.candidate;
        s << c.label << ',' << c.success_rate << ',' << c.throughput_fps << ',' << c.power_w << ',' << c.mass_g << ','
          << r.report.action_throughput_fps << ',' << r.report.v_safe << ',' << r.report.n_missions << ','
          << to_string(r.assessment.classification) << ',' << r.assessment.margin << ',' << (r.eligible ? 1 : 0)
          << ',' << (chosen ? 1 : 0) << '\n';
    };
    for (std::size_t i = 0; i < sel.rows.size(); ++i) row(sel.rows[i], i == sel.chosen);
    for (const auto& r : extra) row(r, false);
    return s.str();
}

void print_rows(std::ostream& log, const std::vector<CandidateRow>& rows, std::optional<std::size_t> chosen) {
    log << std::left << std::setw(28) << "design" << std::right << std::setw(9) << "success" << std::setw(10) << "fps"
        << std::setw(10) << "power_w" << std::setw(10) << "mass_g" << std::setw(10) << "v_safe" << std::setw(11)
        << "missions" << "  assessment\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        log << std::left << std::setw(28) << r.candidate.label.substr(0, 27) << std::right << std::setw(9)
            << fmt(r.candidate.success_rate, 3) << std::setw(10) << fmt(r.candidate.throughput_fps) << std::setw(10)
            << fmt(r.candidate.power_w) << std::setw(10) << fmt(r.candidate.mass_g) << std::setw(10)
            << fmt(r.report.v_safe) << std::setw(11) << fmt(r.report.n_missions, 5) << "  "
            << to_string(r.assessment.classification) << (r.eligible ? "" : " (below success floor)")
            << (chosen && *chosen == i ? "  <- chosen" : "") << '\n';
    }
}

}  // namespace

int cmd_explore(const ExploreArgs& a, std::ostream& log) {
    RunManifest m;
    m.started = clock::now();
    CoDesignProblem p = load(a.config);
    if (a.seed) p.search.seed = *a.seed;
    if (a.budget) p.search.budget = *a.budget;
    validate(p);
    if (a.method != "bayesopt" && a.method != "random") throw std::invalid_argument("unknown method " + a.method);

    log << "exploring " << p.name << ": " << p.search.space.size() << " candidates, budget " << p.search.budget
        << ", seed " << p.search.seed << " (" << a.method << ")\n";
    const ExploreResult r = a.method == "bayesopt" ? run_bayesopt(p) : run_random(p);
    write_run(a.out, p, r, a.method, m);
    summarize(log, r);

    m.command = "explore";
    m.method = a.method;
    m.configs = {str(fs::absolute(a.config))};
    m.problem_hashes = {hex64(problem_hash(p))};
    m.seed = p.search.seed;
    m.budget = p.search.budget;
    m.finished = clock::now();
    write_manifest(a.out, m);
    log << "wrote " << str(a.out / "archive.jsonl") << '\n';
    return ok;
}

int cmd_sweep(const SweepArgs& a, std::ostream& log) {
    RunManifest m;
    m.started = clock::now();
    const CoDesignProblem p = load(a.config);
    log << "sweeping " << p.name << ": " << p.search.space.size() << " points (cap " << p.search.sweep_cap << ")\n";
    const ExploreResult r = run_sweep(p);
    write_run(a.out, p, r, "sweep", m);
    std::vector<std::size_t> all(r.points.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    write_file_atomic(a.out / "sweep.csv", front_csv(r.points, all));
    m.outputs.push_back(str(a.out / "sweep.csv"));
    summarize(log, r);

    m.command = "sweep";
    m.configs = {str(fs::absolute(a.config))};
    m.problem_hashes = {hex64(problem_hash(p))};
    m.seed = p.search.seed;
    m.budget = r.points.size();
    m.finished = clock::now();
    write_manifest(a.out, m);
    return ok;
}

int cmd_select(const SelectArgs& a, std::ostream& log) {
    RunManifest m;
    m.started = clock::now();
    const CoDesignProblem p = load(a.config);
    const std::string hash = hex64(problem_hash(p));

    std::vector<DesignPoint> points;
    std::vector<ComputeCandidate> cands;
    if (a.archive) {
        ArchiveHeader h;
        load_archive(*a.archive, h, points);
        if (h.problem_hash != hash)
            log << "note: archive was produced for problem " << h.problem << " (" << h.problem_hash
                << "), selecting under " << p.name << " (" << hash << ")\n";
        for (const auto& d : points) cands.push_back(candidate_of(d));
        m.inputs.push_back(str(fs::absolute(*a.archive)));
    } else {
        for (const auto& b : p.baselines) cands.push_back(candidate_of(b));
    }
    if (cands.empty()) throw ModelError("nothing to select from: the archive is empty");

    const Selection sel = select_design(cands, p);
    log << "platform knee " << fmt(sel.knee.throughput_fps) << " FPS, ceiling " << fmt(sel.knee.ceiling)
        << " m/s; sensor " << p.platform.sensor.framerate_fps << " FPS\n";
    if (sel.fallback_tier) log << "no design meets success >= " << p.mission.min_success_rate << "; using the top tier\n";

    std::vector<CandidateRow> tuned_rows;
    std::vector<DesignPoint> tuned_points;
    if (a.fine_tune) {
        const auto& chosen = sel.rows[sel.chosen];
        if (!a.archive) {
            log << "fine-tune skipped: baselines carry no accelerator configuration\n";
        } else if (chosen.assessment.classification != Provisioning::over_provisioned) {
            log << "fine-tune skipped: chosen design is " << to_string(chosen.assessment.classification) << '\n';
        } else {
            const Evaluator ev(p);
            DesignPoint t = fine_tune(points[sel.chosen], sel.knee, ev, p.knee.assess_tolerance, a.target_node_nm);
            CandidateRow row;
            row.candidate = candidate_of(t);
            row.report = mission_report(p.platform, p.mission, physics_of(p), row.candidate);
            row.assessment = assess(row.candidate.throughput_fps, sel.knee, p.knee.assess_tolerance);
            row.eligible = chosen.eligible;
            tuned_rows.push_back(row);
            tuned_points.push_back(std::move(t));
            const double before = chosen.report.n_missions, after = row.report.n_missions;
            log << "fine-tuned " << chosen.candidate.label << ": " << fmt(before, 5) << " -> " << fmt(after, 5)
                << " missions (" << (after >= before ? "kept" : "worse; original stays chosen") << ")\n";
        }
    }

    auto rows = sel.rows;
    rows.insert(rows.end(), tuned_rows.begin(), tuned_rows.end());
    print_rows(log, rows, sel.chosen);

    make_dir(a.out);
    write_file_atomic(a.out / "selection.csv", selection_csv(sel, tuned_rows));
    m.outputs = {str(a.out / "selection.csv")};
    if (!tuned_points.empty()) {
        save_archive(a.out / "tuned.jsonl", header_for(p, "tuned"), tuned_points);
        m.outputs.push_back(str(a.out / "tuned.jsonl"));
    }
    m.outputs.push_back(str(a.out / "manifest.json"));
    m.command = a.fine_tune ? "select --fine-tune" : "select";
    m.configs = {str(fs::absolute(a.config))};
    m.problem_hashes = {hash};
    m.seed = p.search.seed;
    m.budget = cands.size();
    m.finished = clock::now();
    write_manifest(a.out, m);
    return ok;
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& log) {
    const CoDesignProblem p = load(a.config);
    ModelSpec model = p.base_model;
    AccelConfig accel = p.base_accel;
    for (const auto& kv : a.overrides) apply_override(kv, model, accel);
    validate(model);
    validate(accel);

    const Evaluator ev(p);
    const DesignPoint d = ev.evaluate_config(model, accel);
    const auto phys = physics_of(p);
    const auto knee = platform_knee(p);
    const auto cand = candidate_of(d);
    const auto rep = mission_report(p.platform, p.mission, phys, cand);
    const auto as = assess(d.throughput_fps, knee, p.knee.assess_tolerance);

    log << "model          " << model.conv_layers << " conv x " << model.filters_per_layer << " filters, "
        << d.params << " parameters\n"
        << "accelerator    " << accel.array_rows << "x" << accel.array_cols << " " << to_string(accel.dataflow)
        << ", SRAM " << accel.sram_ifmap_bytes / 1024 << "/" << accel.sram_filter_bytes / 1024 << "/"
        << accel.sram_ofmap_bytes / 1024 << " KiB, " << accel.dram_bandwidth << " B/cycle, "
        << accel.frequency_hz / 1e6 << " MHz, " << accel.tech_node_nm << " nm\n"
        << "success        " << fmt(d.objectives.success_rate) << " (" << to_string(d.success_source) << ")\n"
        << "latency        " << fmt(d.objectives.latency_s * 1e3, 6) << " ms (" << d.total_cycles << " cycles, "
        << fmt(d.throughput_fps, 6) << " FPS)\n"
        << "power          accelerator " << fmt(d.soc.accelerator) << " W, SoC " << fmt(d.soc.total) << " W\n"
        << "compute mass   " << fmt(d.mass.total_g) << " g (heatsink " << fmt(d.mass.heatsink_g) << " g)\n"
        << "knee           " << fmt(knee.throughput_fps) << " FPS -> " << to_string(as.classification)
        << " (margin " << fmt(as.margin) << ")\n"
        << "mission        action " << fmt(rep.action_throughput_fps) << " FPS, v_safe " << fmt(rep.v_safe)
        << " m/s, rotors " << fmt(rep.p_rotors) << " W, " << fmt(rep.n_missions, 6) << " missions\n";

    if (a.dump_layers) {
        const auto profile = model_latency(model, accel);
        std::ostringstream dump;
        write_layer_dump(dump, profile);
        if (a.out) {
            make_dir(*a.out);
            write_file_atomic(*a.out / "layers.csv", dump.str());
            log << "wrote " << str(*a.out / "layers.csv") << '\n';
        } else {
            log << dump.str();
        }
    }
    return ok;
}

int cmd_f1(const F1Args& a, std::ostream& log) {
    RunManifest m;
    m.started = clock::now();
    const CoDesignProblem p = load(a.config);
    const auto phys = physics_of(p);
    const double payload = a.payload_g.value_or(p.knee.reference_payload_g);
    if (!(payload >= 0)) throw std::invalid_argument("payload must be >= 0 g");
    const double amax = max_acceleration(p.platform, payload, p.physics.gravity);
    const F1Curve curve = f1_curve(phys, amax, knee_options(p), a.samples);

    make_dir(a.out);
    std::ostringstream csv;
    write_f1_csv(csv, curve);
    write_file_atomic(a.out / "f1.csv", csv.str());
    m.outputs = {str(a.out / "f1.csv")};
    log << p.name << " at " << payload << " g payload: a_max " << fmt(amax) << " m/s^2, ceiling " << fmt(curve.ceiling)
        << " m/s, knee " << fmt(curve.knee.throughput_fps) << " FPS (" << to_string(p.knee.rule) << ")\n";

    if (a.svg) {
        std::vector<Marker> markers;
        auto add = [&](const ComputeCandidate& c) {
            const double act = action_throughput(p.platform.sensor.framerate_fps, c.throughput_fps);
            const double am = max_acceleration(p.platform, c.mass_g, p.physics.gravity);
            markers.push_back({c.label, act, safe_velocity(act, phys, am)});
        };
        if (a.archive) {
            ArchiveHeader h;
            std::vector<DesignPoint> pts;
            load_archive(*a.archive, h, pts);
            std::vector<Objectives> ys;
            for (const auto& d : pts) ys.push_back(d.objectives.minimize());
            for (std::size_t i : pareto_filter(ys)) add(candidate_of(pts[i]));
            m.inputs.push_back(str(fs::absolute(*a.archive)));
        } else {
            for (const auto& b : p.baselines) add(candidate_of(b));
        }
        std::ostringstream title;
        title << "F-1: " << p.name << ", " << payload << " g payload";
        write_file_atomic(a.out / "f1.svg", f1_svg(curve, markers, title.str()));
        m.outputs.push_back(str(a.out / "f1.svg"));
    }
    m.outputs.push_back(str(a.out / "manifest.json"));
    m.command = "f1";
    m.configs = {str(fs::absolute(a.config))};
    m.problem_hashes = {hex64(problem_hash(p))};
    m.seed = p.search.seed;
    m.finished = clock::now();
    write_manifest(a.out, m);
    return ok;
}

int cmd_report(const ReportArgs& a, std::ostream& log) {
    RunManifest m;
    m.started = clock::now();
    if (a.configs.empty()) throw std::invalid_argument("at least one --config is required");
    if (!a.archives.empty() && a.archives.size() != a.configs.size())
        throw std::invalid_argument("give one --archive per --config, or none");

    struct Row {
        std::string scenario;
        ComputeCandidate cand;
        MissionReport rep;
    };
    std::vector<Row> rows;
    std::map<std::string, double> base_n;
    const std::string selected = "selected";
    for (std::size_t i = 0; i < a.configs.size(); ++i) {
        const CoDesignProblem p = load(a.configs[i]);
        m.configs.push_back(str(fs::absolute(a.configs[i])));
        m.problem_hashes.push_back(hex64(problem_hash(p)));
        const auto phys = physics_of(p);
        std::vector<ComputeCandidate> cands;
        for (const auto& b : p.baselines) cands.push_back(candidate_of(b));
        if (!a.archives.empty()) {
            ArchiveHeader h;
            std::vector<DesignPoint> pts;
            load_archive(a.archives[i], h, pts);
            if (pts.empty()) throw ModelError("archive " + a.archives[i].string() + " is empty");
            const Selection sel = select_design(pts, p);
            ComputeCandidate c = sel.rows[sel.chosen].candidate;
            c.label = selected;
            cands.push_back(c);
            m.inputs.push_back(str(fs::absolute(a.archives[i])));
        }
        if (cands.empty()) throw ModelError(p.name + ": no baselines and no archive to report on");
        const std::string label = a.baseline.value_or(cands.front().label);
        std::optional<double> ref;
        for (const auto& c : cands) {
            const auto rep = mission_report(p.platform, p.mission, phys, c);
            rows.push_back({p.name, c, rep});
            if (c.label == label) ref = rep.n_missions;
        }
        if (!ref) throw std::invalid_argument(p.name + ": baseline '" + label + "' not found");
        base_n[p.name] = *ref;
    }

    std::ostringstream csv;
    csv.precision(10);
    csv << "scenario,design,throughput_fps,power_w,mass_g,v_safe_mps,n_missions,ratio\n";
    log << std::left << std::setw(12) << "scenario" << std::setw(12) << "design" << std::right << std::setw(10) << "fps"
        << std::setw(10) << "power_w" << std::setw(10) << "mass_g" << std::setw(11) << "missions" << std::setw(9)
        << "ratio\n";
    for (const auto& r : rows) {
        const double ratio = r.rep.n_missions / base_n[r.scenario];
        csv << r.scenario << ',' << r.cand.label << ',' << r.cand.throughput_fps << ',' << r.cand.power_w << ','
            << r.cand.mass_g << ',' << r.rep.v_safe << ',' << r.rep.n_missions << ',' << ratio << '\n';
        log << std::left << std::setw(12) << r.scenario << std::setw(12) << r.cand.label << std::right << std::setw(10)
            << fmt(r.cand.throughput_fps) << std::setw(10) << fmt(r.cand.power_w) << std::setw(10)
            << fmt(r.cand.mass_g) << std::setw(11) << fmt(r.rep.n_missions, 5) << std::setw(9) << fmt(ratio) << '\n';
    }
    make_dir(a.out);
    write_file_atomic(a.out / "report.csv", csv.str());
    m.outputs = {str(a.out / "report.csv"), str(a.out / "manifest.json")};
    m.command = "report";
    m.finished = clock::now();
    write_manifest(a.out, m);
    return ok;
}

}  // namespace cli
