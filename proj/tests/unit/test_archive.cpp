#include <gtest/gtest.h>

#include <filesystem>

#include "codesign/archive.hpp"
#include "codesign/bayesopt.hpp"
#include "codesign/errors.hpp"

using namespace codesign;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs{CODESIGN_CONFIG_DIR};

ExploreResult tiny_sweep() { return run_sweep(load_problem(kConfigs / "tiny.json")); }

}  // namespace

TEST(Archive, JsonlRoundTripIsExact) {
    const auto p = load_problem(kConfigs / "tiny.json");
    const auto r = tiny_sweep();
    ArchiveHeader h;
    h.kind = "sweep";
    h.problem = p.name;
    h.problem_hash = hex64(problem_hash(p));
    h.space = p.search.space;
    const auto text = archive_to_jsonl(h, r.points);
    ArchiveHeader h2;
    std::vector<DesignPoint> pts;
    parse_archive(text, h2, pts);
    EXPECT_EQ(h2.kind, "sweep");
    EXPECT_EQ(h2.problem_hash, h.problem_hash);
    EXPECT_EQ(h2.space, h.space);
    ASSERT_EQ(pts.size(), r.points.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        EXPECT_EQ(pts[i].objectives, r.points[i].objectives);
        EXPECT_EQ(pts[i].accel, r.points[i].accel);
        EXPECT_EQ(pts[i].model, r.points[i].model);
        EXPECT_EQ(pts[i].mass.total_g, r.points[i].mass.total_g);
    }
    EXPECT_EQ(archive_to_jsonl(h2, pts), text);
}

TEST(Archive, RejectsMalformed) {
    ArchiveHeader h;
    std::vector<DesignPoint> pts;
    EXPECT_THROW(parse_archive("", h, pts), ParseError);
    EXPECT_THROW(parse_archive("{\"schema_version\": 99}\n", h, pts), ParseError);
    EXPECT_THROW(parse_archive("not json\n", h, pts), ParseError);
}

TEST(Archive, IncrementalFrontMatchesFilter) {
    const auto r = tiny_sweep();
    ParetoArchive a;
    for (const auto& p : r.points) a.add(p);
    EXPECT_EQ(a.front(), r.front);
    std::vector<Objectives> ys;
    for (const auto& p : r.points) ys.push_back(p.objectives.minimize());
    EXPECT_EQ(a.front(), pareto_filter(ys));
}

TEST(Archive, AtomicWriteReplacesFile) {
    const fs::path dir = fs::temp_directory_path() / "codesign-archive-test";
    fs::create_directories(dir);
    write_file_atomic(dir / "x.txt", "one");
    write_file_atomic(dir / "x.txt", "two");
    EXPECT_EQ(read_file(dir / "x.txt"), "two");
    for (const auto& e : fs::directory_iterator(dir)) EXPECT_EQ(e.path().filename(), "x.txt");
    fs::remove_all(dir);
    EXPECT_THROW(read_file(dir / "missing"), Error);
}

TEST(Archive, FrontCsvHasHeaderAndRows) {
    const auto r = tiny_sweep();
    const auto csv = front_csv(r.points, r.front);
    EXPECT_EQ(csv.rfind("eval,flat,", 0), 0u);
    EXPECT_EQ(std::size_t(std::count(csv.begin(), csv.end(), '\n')), r.front.size() + 1);
}

TEST(Sweep, CoversSpaceAndEnforcesCap) {
    auto p = load_problem(kConfigs / "tiny.json");
    const auto r = run_sweep(p);
    EXPECT_EQ(r.points.size(), p.search.space.size());
    for (std::size_t i = 0; i < r.points.size(); ++i) EXPECT_EQ(r.points[i].flat, i);
    EXPECT_EQ(tiny_sweep().points.size(), r.points.size());
    p.search.sweep_cap = 10;
    EXPECT_THROW(run_sweep(p), ModelError);
}

TEST(Evaluate, PureAndConsistent) {
    const auto p = load_problem(kConfigs / "nano-60.json");
    const Evaluator ev(p);
    const auto a = ev.evaluate(std::uint64_t{12345});
    const auto b = ev.evaluate(std::uint64_t{12345});
    EXPECT_EQ(a.objectives, b.objectives);
    EXPECT_EQ(a.flat, 12345u);
    EXPECT_DOUBLE_EQ(a.throughput_fps, 1.0 / a.objectives.latency_s);
    EXPECT_DOUBLE_EQ(a.mass.total_g, p.board_g + p.heatsink_g_per_w * a.objectives.soc_power_w);
    EXPECT_DOUBLE_EQ(a.soc.total, a.objectives.soc_power_w);
    const auto obj = search_objectives(a.objectives);
    EXPECT_DOUBLE_EQ(obj[0], -a.objectives.success_rate);
    EXPECT_DOUBLE_EQ(obj[1], std::log(a.objectives.latency_s));
}
