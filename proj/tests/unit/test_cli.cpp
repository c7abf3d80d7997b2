#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "codesign/archive.hpp"
#include "codesign/pareto.hpp"

using namespace codesign;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = CODESIGN_CONFIG_DIR;
const fs::path kScratch = CODESIGN_SCRATCH;

fs::path scratch(const std::string& name) {
    const fs::path p = kScratch / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(const std::string& args, const std::string& env = "") {
    const fs::path log = kScratch / "last.log";
    fs::create_directories(kScratch);
    const std::string cmd = env + (env.empty() ? "" : " ") + "\"" CODESIGN_CLI "\" " + args + " > \"" +
                            log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string cfg(const std::string& name) { return "\"" + (kConfigs / name).string() + "\""; }

using Row = std::map<std::string, std::string>;

std::vector<Row> read_csv(const fs::path& p) {
    std::istringstream in(read_file(p));
    std::string line;
    std::vector<std::string> head;
    std::vector<Row> rows;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(cell);
        if (!s.empty() && s.back() == ',') out.emplace_back();
        return out;
    };
    std::getline(in, line);
    head = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        Row r;
        for (std::size_t i = 0; i < head.size() && i < cells.size(); ++i) r[head[i]] = cells[i];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<DesignPoint> load_points(const fs::path& p) {
    ArchiveHeader h;
    std::vector<DesignPoint> pts;
    load_archive(p, h, pts);
    return pts;
}

}  // namespace

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("--help"), 0);
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("frobnicate"), 1);
    EXPECT_EQ(run("explore -o " + scratch("codes").string()), 1);  // missing --config
    EXPECT_EQ(run("explore -c /nonexistent/x.json -o " + scratch("codes").string()), 2);

    const fs::path bad = scratch("bad") / "bad.json";
    std::ofstream(bad) << "{ \"name\": \"x\", \"platform\": { \"battery_capacity_mah\": -5 } }";
    EXPECT_EQ(run("explore -c " + bad.string() + " -o " + scratch("codes").string()), 2);
    std::ofstream(bad) << "{ not json";
    EXPECT_EQ(run("explore -c " + bad.string() + " -o " + scratch("codes").string()), 2);

    // The full nano space is far above the sweep cap: a runtime failure.
    EXPECT_EQ(run("sweep -c " + cfg("nano-60.json") + " -o " + scratch("codes").string()), 3);
    EXPECT_EQ(run("evaluate -c " + cfg("nano-60.json") + " --set no_such_key=1"), 1);
    EXPECT_EQ(run("evaluate -c " + cfg("nano-60.json") + " --set array_rows=0"), 2);
}

TEST(Cli, TinyExploreVisitsEverythingAndMatchesPairwiseFront) {
    const auto out = scratch("tiny");
    ASSERT_EQ(run("explore -c " + cfg("tiny.json") + " -o " + out.string()), 0);
    for (const char* f : {"archive.jsonl", "front.csv", "hv_trace.csv", "manifest.json"})
        EXPECT_TRUE(fs::exists(out / f)) << f;
    const auto pts = load_points(out / "archive.jsonl");
    ASSERT_EQ(pts.size(), 64u);
    std::vector<std::uint64_t> flats;
    for (const auto& p : pts) flats.push_back(p.flat);
    std::sort(flats.begin(), flats.end());
    for (std::uint64_t i = 0; i < 64; ++i) EXPECT_EQ(flats[i], i);

    std::vector<Objectives> obj;
    for (const auto& p : pts) obj.push_back(p.objectives.minimize());
    std::size_t oracle = 0;
    for (std::size_t i = 0; i < obj.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < obj.size() && !dominated; ++j) dominated = dominates(obj[j], obj[i]);
        oracle += !dominated;
    }
    EXPECT_EQ(read_csv(out / "front.csv").size(), oracle);

    const auto sw = scratch("tiny-sweep");
    ASSERT_EQ(run("sweep -c " + cfg("tiny.json") + " -o " + sw.string()), 0);
    EXPECT_EQ(read_csv(sw / "front.csv").size(), oracle);
    EXPECT_EQ(read_csv(sw / "sweep.csv").size(), 64u);
}

TEST(Cli, ExploreIsDeterministic) {
    const auto a = scratch("det-a"), b = scratch("det-b"), c = scratch("det-c");
    ASSERT_EQ(run("explore -c " + cfg("tiny.json") + " -b 30 -s 7 -o " + a.string()), 0);
    ASSERT_EQ(run("explore -c " + cfg("tiny.json") + " -o " + b.string(), "CODESIGN_SEED=7 CODESIGN_BUDGET=30"), 0);
    ASSERT_EQ(run("explore -c " + cfg("tiny.json") + " -b 30 -s 8 -o " + c.string()), 0);
    EXPECT_EQ(read_file(a / "archive.jsonl"), read_file(b / "archive.jsonl"));
    EXPECT_NE(read_file(a / "archive.jsonl"), read_file(c / "archive.jsonl"));
}

TEST(Cli, RandomMethod) {
    const auto out = scratch("random");
    ASSERT_EQ(run("explore -c " + cfg("tiny.json") + " -m random -b 20 -o " + out.string()), 0);
    EXPECT_EQ(load_points(out / "archive.jsonl").size(), 20u);
    EXPECT_EQ(run("explore -c " + cfg("tiny.json") + " -m annealing -o " + out.string()), 1);
}

TEST(Cli, SelectBaselinesPicksTheKneeDesign) {
    const auto out = scratch("select");
    ASSERT_EQ(run("select -c " + cfg("nano-60.json") + " -o " + out.string()), 0);
    const auto rows = read_csv(out / "selection.csv");
    ASSERT_EQ(rows.size(), 4u);
    const auto chosen = std::find_if(rows.begin(), rows.end(), [](const Row& r) { return r.at("chosen") == "1"; });
    ASSERT_NE(chosen, rows.end());
    EXPECT_EQ(chosen->at("label"), "AP");
}

TEST(Cli, SelectFromArchiveWithFineTune) {
    const auto ex = scratch("select-archive");
    ASSERT_EQ(run("explore -c " + cfg("tiny.json") + " -o " + ex.string()), 0);
    const auto out = scratch("select-tuned");
    ASSERT_EQ(run("select -c " + cfg("tiny.json") + " -a " + (ex / "archive.jsonl").string() + " --fine-tune -o " +
                  out.string()),
              0);
    const auto rows = read_csv(out / "selection.csv");
    EXPECT_EQ(rows.size(), 64u + (fs::exists(out / "tuned.jsonl") ? 1u : 0u));
    EXPECT_EQ(std::count_if(rows.begin(), rows.end(), [](const Row& r) { return r.at("chosen") == "1"; }), 1);
}

TEST(Cli, ReportRatios) {
    const auto a = scratch("report-a"), b = scratch("report-b");
    ASSERT_EQ(run("report -c " + cfg("nano-60.json") + " --baseline HP -o " + a.string()), 0);
    ASSERT_EQ(run("report -c " + cfg("nano-60.json") + " --baseline AP -o " + b.string()), 0);
    const auto ra = read_csv(a / "report.csv"), rb = read_csv(b / "report.csv");
    ASSERT_EQ(ra.size(), 4u);
    ASSERT_EQ(rb.size(), 4u);
    std::map<std::string, double> by_hp, by_ap;
    for (const auto& r : ra) by_hp[r.at("design")] = std::stod(r.at("ratio"));
    for (const auto& r : rb) by_ap[r.at("design")] = std::stod(r.at("ratio"));
    EXPECT_NEAR(by_hp["HP"], 1.0, 1e-9);
    EXPECT_NEAR(by_ap["AP"], 1.0, 1e-9);
    EXPECT_NEAR(by_hp["AP"] * by_ap["HP"], 1.0, 1e-6);
    EXPECT_GT(by_hp["AP"], 1.0);
    EXPECT_EQ(run("report -c " + cfg("nano-60.json") + " --baseline nobody -o " + a.string()), 1);
}

TEST(Cli, F1Outputs) {
    const auto out = scratch("f1");
    ASSERT_EQ(run("f1 -c " + cfg("nano-60.json") + " --svg --samples 50 -o " + out.string()), 0);
    const auto rows = read_csv(out / "f1.csv");
    EXPECT_EQ(std::count_if(rows.begin(), rows.end(), [](const Row& r) { return r.at("kind") == "sample"; }), 50);
    const auto knee = std::find_if(rows.begin(), rows.end(), [](const Row& r) { return r.at("kind") == "knee"; });
    ASSERT_NE(knee, rows.end());
    EXPECT_NEAR(std::stod(knee->at("throughput_fps")), 46.0, 2.0);
    EXPECT_NE(read_file(out / "f1.svg").find("<svg"), std::string::npos);
}

TEST(Cli, EvaluateDumpsLayers) {
    const auto out = scratch("evaluate");
    ASSERT_EQ(run("evaluate -c " + cfg("nano-60.json") + " --set dataflow=ws --dump-layers -o " + out.string()), 0);
    const auto rows = read_csv(out / "layers.csv");
    ASSERT_EQ(rows.size(), 8u);  // 5 conv + 2 fc in the template, then the total row
    EXPECT_EQ(rows.back().at("layer"), "total");
}

TEST(Cli, NanoExploreHasMonotoneTrace) {
    const auto out = scratch("nano");
    ASSERT_EQ(run("explore -c " + cfg("nano-60.json") + " -b 40 -o " + out.string()), 0);
    const auto rows = read_csv(out / "hv_trace.csv");
    ASSERT_EQ(rows.size(), 40u);
    double prev = -1.0;
    for (const auto& r : rows) {
        const double hv = std::stod(r.at("hypervolume"));
        EXPECT_GE(hv, prev);
        prev = hv;
    }
}
