// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails. Tolerances are pinned below.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "codesign/archive.hpp"
#include "codesign/bayesopt.hpp"
#include "codesign/evaluate.hpp"
#include "codesign/f1model.hpp"
#include "codesign/gp.hpp"
#include "codesign/pareto.hpp"
#include "codesign/perfmodel.hpp"
#include "codesign/problem.hpp"
#include "codesign/selection.hpp"

using namespace codesign;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = CODESIGN_CONFIG_DIR;
const fs::path kScratch = CODESIGN_SCRATCH;

// Pinned tolerances and limits.
constexpr double kHvMcRelTol = 0.01;
constexpr std::uint64_t kHvMcSamples = 10'000'000;
constexpr double kHvSeconds = 60.0;
constexpr double kGpInterpTol = 1e-6;
constexpr double kOracleSeconds = 60.0;
constexpr double kBoSeconds = 300.0;
constexpr double kBoQuality = 0.9;
constexpr int kBoSeeds = 20;
constexpr int kBoRequired = 16;
constexpr double kIdentityRelTol = 1e-9;
constexpr double kRatioTol = 0.25;
constexpr double kKneeTarget = 46.0;
constexpr double kKneeTol = 2.0;
constexpr double kGatingLoss = 0.10;
constexpr double kKneeResolution = 0.1;
constexpr std::uint64_t kNanoExploreBudget = 40;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

// ---------------------------------------------------------------- 1

Outcome hypervolume_oracle() {
    const auto t0 = Clock::now();
    std::ostringstream why;
    bool ok = true;

    if (hypervolume({{0, 0}}, {1, 1}) != 1.0) ok = false, why << "unit square wrong; ";
    if (hypervolume({{0, 0.5}, {0.5, 0}}, {1, 1}) != 0.75) ok = false, why << "staircase wrong; ";

    std::mt19937_64 gen(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> size(1, 10);
    const Objectives ref{1.1, 1.1, 1.1};
    double worst = 0.0;
    for (int f = 0; f < 100; ++f) {
        std::vector<Objectives> pts(std::size_t(size(gen)));
        for (auto& p : pts) p = {u(gen), u(gen), u(gen)};
        const double exact = hypervolume(pts, ref);

        // Sample the box spanned by the front's ideal corner and the reference.
        double lo[3] = {1, 1, 1};
        for (const auto& p : pts)
            for (int j = 0; j < 3; ++j) lo[j] = std::min(lo[j], p[std::size_t(j)]);
        const double box = (ref[0] - lo[0]) * (ref[1] - lo[1]) * (ref[2] - lo[2]);
        std::vector<double> flat;
        for (const auto& p : pts) flat.insert(flat.end(), p.begin(), p.end());
        std::uint64_t hits = 0;
        std::uint64_t s = gen();
        auto next = [&s] {
            // splitmix64
            std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return double((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
        };
        const double w0 = ref[0] - lo[0], w1 = ref[1] - lo[1], w2 = ref[2] - lo[2];
        for (std::uint64_t i = 0; i < kHvMcSamples; ++i) {
            const double x = lo[0] + w0 * next(), y = lo[1] + w1 * next(), z = lo[2] + w2 * next();
            for (std::size_t k = 0; k < flat.size(); k += 3) {
                if (flat[k] <= x && flat[k + 1] <= y && flat[k + 2] <= z) {
                    ++hits;
                    break;
                }
            }
        }
        const double mc = box * double(hits) / double(kHvMcSamples);
        worst = std::max(worst, rel_err(exact, mc));
    }
    const double secs = seconds_since(t0);
    if (worst > kHvMcRelTol) ok = false, why << "MC disagreement; ";
    if (secs > kHvSeconds) ok = false, why << "too slow; ";
    std::ostringstream d;
    d << why.str() << "max rel err vs MC " << worst << " over 100 fronts, " << secs << " s";
    return {ok, d.str()};
}

// ---------------------------------------------------------------- 2

Outcome pareto_oracle() {
    std::mt19937_64 gen(77);
    std::uniform_int_distribution<int> n_dist(0, 200), d_dist(1, 4), grid(0, 12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int mismatches = 0;
    for (int s = 0; s < 1000; ++s) {
        const auto n = std::size_t(n_dist(gen));
        const auto d = std::size_t(d_dist(gen));
        const bool coarse = s % 2 == 0;  // coarse grids force ties and duplicates
        std::vector<Objectives> pts(n, Objectives(d));
        for (auto& p : pts)
            for (auto& v : p) v = coarse ? double(grid(gen)) : u(gen);
        std::vector<std::size_t> oracle;
        for (std::size_t i = 0; i < n; ++i) {
            bool dominated = false;
            for (std::size_t j = 0; j < n && !dominated; ++j) {
                bool le = true, lt = false;
                for (std::size_t k = 0; k < d; ++k) {
                    le = le && pts[j][k] <= pts[i][k];
                    lt = lt || pts[j][k] < pts[i][k];
                }
                dominated = le && lt;
            }
            if (!dominated) oracle.push_back(i);
        }
        if (pareto_filter(pts) != oracle) ++mismatches;
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatching sets of 1000"};
}

// ---------------------------------------------------------------- 3

Outcome gp_sanity() {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = 30;
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = u(gen);
        x(i, 1) = u(gen);
        y[i] = std::sin(6 * x(i, 0)) + 0.5 * std::cos(4 * x(i, 1)) + x(i, 0) * x(i, 1);
    }
    GpOptions o;
    o.log_noise_min = o.log_noise_max = std::log(1e-6);  // noise-free up to a numerical floor
    const GpModel gp = GpModel::fit(x, y, o, 11);

    Eigen::VectorXd mean, var;
    gp.predict(x, mean, var);
    const double interp = (mean - y).cwiseAbs().maxCoeff();

    Eigen::MatrixXd grid(1000, 2);
    for (int i = 0; i < 1000; ++i) {
        grid(i, 0) = -0.25 + 1.5 * double(i % 40) / 39.0;
        grid(i, 1) = -0.25 + 1.5 * double(i / 40) / 24.0;
    }
    gp.predict(grid, mean, var);
    const double min_var = var.minCoeff();
    std::ostringstream d;
    d << "max |mean - y| at training points " << interp << ", min probe variance " << min_var;
    return {interp <= kGpInterpTol && min_var >= 0.0, d.str()};
}

// ---------------------------------------------------------------- 4

bool same(const LayerProfile& a, const LayerProfile& b) {
    return a.folds == b.folds && a.compute_cycles == b.compute_cycles && a.memory_cycles == b.memory_cycles &&
           a.total_cycles == b.total_cycles && a.dram_traffic == b.dram_traffic && a.dram_ifmap == b.dram_ifmap &&
           a.dram_filter == b.dram_filter && a.dram_ofmap == b.dram_ofmap && a.macs == b.macs &&
           a.pe_cycles == b.pe_cycles && a.sram == b.sram;
}

Outcome latency_oracle() {
    const auto t0 = Clock::now();
    std::uint64_t cases = 0, mismatches = 0;
    std::string first;
    for (int df = 0; df < 2; ++df)
        for (int r = 1; r <= 4; ++r)
            for (int c = 1; c <= 4; ++c)
                for (std::uint64_t m = 1; m <= 8; ++m)
                    for (std::uint64_t n = 1; n <= 8; ++n)
                        for (std::uint64_t k = 1; k <= 8; ++k) {
                            const GemmShape g{m, n, k};
                            // Each partition either just fits its operand or is one byte short.
                            for (int fit = 0; fit < 8; ++fit) {
                                AccelConfig a;
                                a.array_rows = r;
                                a.array_cols = c;
                                a.dataflow = df ? Dataflow::weight_stationary : Dataflow::output_stationary;
                                a.dram_bandwidth = fit % 2 ? 1.0 : 4.0;
                                auto part = [&](std::uint64_t bytes, bool fits) {
                                    return fits ? bytes : std::max<std::uint64_t>(1, bytes - 1);
                                };
                                a.sram_ifmap_bytes = part(m * k, fit & 1);
                                a.sram_filter_bytes = part(k * n, fit & 2);
                                a.sram_ofmap_bytes = part(m * n, fit & 4);
                                ++cases;
                                if (!same(layer_cycles(g, a), oracle_simulate(g, a))) {
                                    if (mismatches++ == 0) {
                                        std::ostringstream s;
                                        s << "first mismatch m=" << m << " n=" << n << " k=" << k << " array " << r
                                          << "x" << c << " " << to_string(a.dataflow) << "; ";
                                        first = s.str();
                                    }
                                }
                            }
                        }
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << first << mismatches << " mismatches in " << cases << " cases, " << secs << " s";
    return {mismatches == 0 && secs < kOracleSeconds, d.str()};
}

// ---------------------------------------------------------------- 5

Outcome bo_effectiveness() {
    const auto t0 = Clock::now();
    auto p = load_problem(kConfigs / "nano-60.json");
    p.search.space = p.search.space.capped(4096);
    p.search.sweep_cap = 4096;
    const auto truth_run = run_sweep(p);
    std::vector<Objectives> all;
    for (const auto& x : truth_run.points) all.push_back(search_objectives(x.objectives));
    const Bounds bounds = Bounds::of(all);
    const double truth = normalized_hypervolume(all, bounds);
    const std::uint64_t budget = truth_run.points.size() / 10;

    int quality = 0, wins = 0;
    double worst = 1.0;
    for (int seed = 1; seed <= kBoSeeds; ++seed) {
        auto q = p;
        q.search.seed = std::uint64_t(seed);
        q.search.budget = budget;
        std::vector<Objectives> bo, rnd;
        for (const auto& x : run_bayesopt(q).points) bo.push_back(search_objectives(x.objectives));
        for (const auto& x : run_random(q).points) rnd.push_back(search_objectives(x.objectives));
        const double hb = normalized_hypervolume(bo, bounds), hr = normalized_hypervolume(rnd, bounds);
        worst = std::min(worst, hb / truth);
        quality += hb >= kBoQuality * truth;
        wins += hb >= hr;
    }
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << truth_run.points.size() << " points, budget " << budget << ": >=90% of true HV in " << quality << "/"
      << kBoSeeds << " seeds (worst " << worst << "), >= random in " << wins << "/" << kBoSeeds << ", " << secs
      << " s";
    return {quality >= kBoRequired && wins >= kBoRequired && secs < kBoSeconds, d.str()};
}

// ---------------------------------------------------------------- 6

Outcome mission_identities() {
    std::mt19937_64 gen(6);
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); };
    double worst = 0.0;
    int doubling_failures = 0;
    for (int i = 0; i < 10000; ++i) {
        UavPlatform pl;
        pl.battery_capacity_mah = u(100, 10000);
        pl.battery_voltage_v = u(3.0, 25.0);
        pl.base_mass_g = u(20, 3000);
        pl.sensor.mass_g = u(0, 50);
        pl.sensor.framerate_fps = u(5, 240);
        pl.other_power_w = u(0, 5);
        const double payload = u(0, 200);
        const double weight_n = (pl.base_mass_g + pl.sensor.mass_g + payload) * 1e-3 * 9.81;
        pl.max_thrust_n = weight_n * u(1.2, 5.0);
        PhysicsParams ph;
        ph.sensing_range_m = u(0.005, 20);
        ph.fixed_latency_s = u(0, 0.05);
        ph.figure_of_merit = u(0.3, 0.9);
        ph.rotor_disk_area_m2 = u(0.001, 0.5);
        pl.rotor_disk_area_m2 = ph.rotor_disk_area_m2;
        MissionSpec ms{u(1, 1000), 0.0};
        ComputeCandidate c{"x", 1.0, u(1, 500), u(0, 10), payload};

        const auto r = mission_report(pl, ms, ph, c);
        const double t = ph.fixed_latency_s + 1.0 / std::min(pl.sensor.framerate_fps, c.throughput_fps);
        const double m = pl.base_mass_g + pl.sensor.mass_g + payload;
        const double a = pl.max_thrust_n / (m * 1e-3) - 9.81;
        const double rotor =
            std::pow(m * 1e-3 * 9.81, 1.5) / (ph.figure_of_merit * std::sqrt(2 * ph.air_density * ph.rotor_disk_area_m2));
        const double errs[] = {
            rel_err(r.a_max, a),
            rel_err(r.v_safe * t + r.v_safe * r.v_safe / (2 * a), ph.sensing_range_m),
            rel_err(r.t_mission * r.v_safe, ms.distance_m),
            rel_err(r.p_rotors, rotor),
            rel_err(r.e_mission, (r.p_rotors + c.power_w + pl.other_power_w) * r.t_mission),
            rel_err(r.n_missions * r.e_mission, pl.battery_energy_j()),
            rel_err(r.e_battery, pl.battery_capacity_mah * pl.battery_voltage_v * 3.6),
        };
        for (double e : errs) worst = std::max(worst, e);

        auto doubled = pl;
        doubled.battery_capacity_mah *= 2.0;
        if (mission_report(doubled, ms, ph, c).n_missions != 2.0 * r.n_missions) ++doubling_failures;
    }
    std::ostringstream d;
    d << "max relative identity error " << worst << " over 10000 inputs, " << doubling_failures
      << " inexact battery doublings";
    return {worst <= kIdentityRelTol && doubling_failures == 0, d.str()};
}

// ---------------------------------------------------------------- 7

double missions(const CoDesignProblem& p, const ComputeCandidate& c) {
    return mission_report(p.platform, p.mission, physics_of(p), c).n_missions;
}

bool within(double got, double want, double tol) { return std::abs(got - want) <= tol * want; }

Outcome nano_reproduction() {
    const auto p = load_problem(kConfigs / "nano-60.json");
    const double knee = platform_knee(p).throughput_fps;
    // PO and LP masses follow the shipped heatsink rule: board + coeff * TDP.
    const ComputeCandidate hp{"HP", 1, 205, 8.24, 65}, ap{"AP", 1, 46, 0.7, 24},
        po{"PO", 1, 96, 1.8, p.board_g + p.heatsink_g_per_w * 1.8},
        lp{"LP", 1, 18, 0.35, p.board_g + p.heatsink_g_per_w * 0.35};
    const double n_hp = missions(p, hp), n_ap = missions(p, ap), n_po = missions(p, po), n_lp = missions(p, lp);
    const bool order = n_ap > n_po && n_po > n_lp && n_ap > n_hp;
    const bool ratios = within(n_ap / n_hp, 2.25, kRatioTol) && within(n_ap / n_lp, 1.8, kRatioTol) &&
                        within(n_ap / n_po, 1.3, kRatioTol);
    const bool knee_ok = std::abs(knee - kKneeTarget) <= kKneeTol;
    std::ostringstream d;
    d << "knee " << knee << " FPS; N: HP " << n_hp << ", AP " << n_ap << ", PO " << n_po << ", LP " << n_lp
      << "; AP/HP " << n_ap / n_hp << ", AP/LP " << n_ap / n_lp << ", AP/PO " << n_ap / n_po;
    return {order && ratios && knee_ok, d.str()};
}

// ---------------------------------------------------------------- 8

Outcome sensor_gating() {
    const auto p30 = load_problem(kConfigs / "mini-30.json");
    const auto p60 = load_problem(kConfigs / "mini-60.json");
    auto find = [](const CoDesignProblem& p, const std::string& label) {
        for (const auto& b : p.baselines)
            if (b.label == label) return candidate_of(b);
        throw std::runtime_error("mini config lacks baseline " + label);
    };
    const auto d30 = find(p30, "AP30"), d60 = find(p60, "AP60");
    const double a = missions(p30, d30), b = missions(p30, d60);  // 30 FPS sensor row
    const double c = missions(p60, d30), e = missions(p60, d60);  // 60 FPS sensor row
    const double loss = (e - c) / e;
    std::ostringstream d;
    d << "sensor 30: AP30 " << a << " vs AP60 " << b << "; sensor 60: AP60 " << e << " vs AP30 " << c
      << " (loss " << 100 * loss << "%)";
    return {a > b && e > c && loss >= kGatingLoss, d.str()};
}

// ---------------------------------------------------------------- 9

Outcome agility() {
    const auto nano = load_problem(kConfigs / "nano-60.json");
    const auto micro = load_problem(kConfigs / "micro-60.json");
    const double kn = platform_knee(nano).throughput_fps, km = platform_knee(micro).throughput_fps;
    const auto phys = physics_of(nano);
    bool monotone = true;
    double prev = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double a = 0.5 * std::pow(1.05, i);
        const double k = knee_point(phys, a, knee_options(nano)).throughput_fps;
        if (i > 0 && !(k > prev)) monotone = false;
        prev = k;
    }
    std::ostringstream d;
    d << "knee nano " << kn << " FPS, micro " << km << " FPS; knee " << (monotone ? "" : "NOT ")
      << "strictly increasing over 201 a_max values";
    return {kn > km && monotone, d.str()};
}

// ---------------------------------------------------------------- 11 helpers

int run_cli(const std::string& args) {
    const std::string cmd = "\"" CODESIGN_CLI "\" " + args + " > \"" + (kScratch / "cli.log").string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path nano_explore(const std::string& name) {
    const fs::path out = kScratch / name;
    fs::remove_all(out);
    fs::create_directories(out);
    const std::string cfg = (kConfigs / "nano-60.json").string();
    if (run_cli("explore -c \"" + cfg + "\" -b " + std::to_string(kNanoExploreBudget) + " -o \"" + out.string() +
                "\"") != 0)
        throw std::runtime_error("codesign explore failed, see " + (kScratch / "cli.log").string());
    return out;
}

// ---------------------------------------------------------------- 10

Outcome fine_tuning() {
    const auto p = load_problem(kConfigs / "nano-60.json");
    const auto dir = fs::exists(kScratch / "explore-a" / "archive.jsonl") ? kScratch / "explore-a"
                                                                         : nano_explore("explore-a");
    ArchiveHeader h;
    std::vector<DesignPoint> pts;
    load_archive(dir / "archive.jsonl", h, pts);
    const Evaluator ev(p);
    const auto knee = platform_knee(p);
    int over = 0, improved = 0, on_knee = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& x : pts) {
        if (assess(x.throughput_fps, knee, p.knee.assess_tolerance).classification != Provisioning::over_provisioned)
            continue;
        ++over;
        const auto tuned = fine_tune(x, knee, ev, p.knee.assess_tolerance);
        const double before = missions(p, candidate_of(x)), after = missions(p, candidate_of(tuned));
        improved += after > before;
        worst = std::min(worst, after / before);
        on_knee += std::abs(tuned.throughput_fps - knee.throughput_fps) <= kKneeResolution;
    }
    std::ostringstream d;
    d << over << " over-provisioned of " << pts.size() << " archive points; N increased for " << improved
      << ", tuned throughput on the knee for " << on_knee << "; worst N ratio after/before " << worst;
    return {over > 0 && improved == over && on_knee == over, d.str()};
}

// ---------------------------------------------------------------- 11

Outcome determinism() {
    const auto a = fs::exists(kScratch / "explore-a" / "archive.jsonl") ? kScratch / "explore-a"
                                                                       : nano_explore("explore-a");
    const auto b = nano_explore("explore-b");
    const bool nano_same = read_file(a / "archive.jsonl") == read_file(b / "archive.jsonl");

    const std::string tiny = (kConfigs / "tiny.json").string();
    bool tiny_same = true;
    std::string first;
    for (int i = 0; i < 2; ++i) {
        const fs::path out = kScratch / ("tiny-" + std::to_string(i));
        fs::remove_all(out);
        fs::create_directories(out);
        if (run_cli("explore -c \"" + tiny + "\" -b 40 -s 3 -o \"" + out.string() + "\"") != 0) tiny_same = false;
        const auto text = read_file(out / "archive.jsonl");
        if (i == 0) first = text;
        else tiny_same = tiny_same && text == first;
    }
    std::ostringstream d;
    d << "nano-60 (budget " << kNanoExploreBudget << ") archives " << (nano_same ? "identical" : "DIFFER")
      << ", tiny archives " << (tiny_same ? "identical" : "DIFFER");
    return {nano_same && tiny_same, d.str()};
}

}  // namespace

int main() {
    fs::remove_all(kScratch);
    fs::create_directories(kScratch);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"hypervolume-oracle", hypervolume_oracle},
        {"pareto-oracle", pareto_oracle},
        {"gp-sanity", gp_sanity},
        {"latency-model-oracle", latency_oracle},
        {"bo-effectiveness", bo_effectiveness},
        {"mission-identities", mission_identities},
        {"nano-reproduction", nano_reproduction},
        {"sensor-gating", sensor_gating},
        {"agility", agility},
        {"fine-tuning", fine_tuning},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %2zu %-22s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
