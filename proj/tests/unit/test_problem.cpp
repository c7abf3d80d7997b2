#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

#include "codesign/errors.hpp"
#include "codesign/f1model.hpp"
#include "codesign/problem.hpp"

using namespace codesign;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs{CODESIGN_CONFIG_DIR};

bool has_issue(const ValidationError& e, const std::string& path) {
    return std::any_of(e.issues().begin(), e.issues().end(), [&](const Issue& i) { return i.path == path; });
}

}  // namespace

TEST(Problem, ShippedConfigsLoadAndValidate) {
    for (const char* name : {"nano-60", "nano-30", "micro-60", "micro-30", "mini-60", "mini-30", "tiny"}) {
        SCOPED_TRACE(name);
        const auto p = load_problem(kConfigs / (std::string(name) + ".json"));
        EXPECT_EQ(p.name, name);
        EXPECT_NO_THROW(validate(p));
        EXPECT_FALSE(p.policy_db.empty());
        EXPECT_TRUE(p.anchors.has_value());
    }
}

TEST(Problem, CalibratedKnees) {
    EXPECT_NEAR(platform_knee(load_problem(kConfigs / "nano-60.json")).throughput_fps, 46.0, 0.05);
    EXPECT_NEAR(platform_knee(load_problem(kConfigs / "micro-60.json")).throughput_fps, 27.0, 0.05);
    EXPECT_NEAR(platform_knee(load_problem(kConfigs / "mini-60.json")).throughput_fps, 46.0, 0.05);
}

TEST(Problem, CanonicalJsonRoundTrip) {
    const auto p = load_problem(kConfigs / "nano-60.json");
    const auto text = to_json(p);
    const auto q = parse_problem(text, kConfigs);
    EXPECT_EQ(to_json(q), text);
    EXPECT_EQ(problem_hash(q), problem_hash(p));
    EXPECT_EQ(hex64(problem_hash(p)).size(), 16u);
    auto r = p;
    r.search.seed += 1;
    EXPECT_NE(problem_hash(r), problem_hash(p));
}

TEST(Problem, SocCameraFollowsSensor) {
    const auto p = load_problem(kConfigs / "mini-60.json");
    EXPECT_DOUBLE_EQ(p.soc_constants().camera_w, p.platform.sensor.power_w);
}

TEST(Problem, CommentsAndDefaults) {
    const std::string text = R"({
      // minimal problem
      "schema_version": 1,
      "platform": { "battery_capacity_mah": 500, "base_mass_g": 50, "max_thrust_n": 3,
                    "rotor_disk_area_m2": 0.004 },
      "mission": { "distance_m": 10 },
      "search": { "dimensions": [ { "name": "array_rows", "values": [4, 8] } ], "budget": 20 }
    })";
    const auto p = parse_problem(text, kConfigs);
    EXPECT_EQ(p.search.effective_init(), 11u);
    EXPECT_EQ(p.knee.rule, KneeRule::roofline);
    EXPECT_EQ(p.search.refit_growth, 1.5);
}

TEST(Problem, CollectsEveryIssue) {
    const std::string text = R"({
      "schema_version": 1,
      "platform": { "battery_capacity_mah": -5, "base_mass_g": 50, "max_thrust_n": 0.1,
                    "rotor_disk_area_m2": 0.004 },
      "mission": { "distance_m": 10, "min_success_rate": 2 },
      "search": { "dimensions": [ { "name": "array_rows", "values": [0, 8] },
                                  { "name": "wings", "values": [1] } ], "budget": 5 }
    })";
    try {
        parse_problem(text, kConfigs);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_TRUE(has_issue(e, "platform.battery_capacity_mah"));
        EXPECT_TRUE(has_issue(e, "platform.max_thrust_n"));
        EXPECT_TRUE(has_issue(e, "mission.min_success_rate"));
        EXPECT_TRUE(has_issue(e, "search.budget"));
        EXPECT_TRUE(has_issue(e, "search.dimensions[1]"));
        EXPECT_TRUE(has_issue(e, "accel.array_rows"));
    }
}

TEST(Problem, RejectsUnknownKeysAndBadSyntax) {
    EXPECT_THROW(parse_problem(R"({"schema_version": 1, "colour": "red"})", kConfigs), Error);
    EXPECT_THROW(parse_problem("{ not json", kConfigs), ParseError);
    EXPECT_THROW(parse_problem(R"({"schema_version": 7})", kConfigs), ValidationError);
    EXPECT_THROW(load_problem(kConfigs / "does-not-exist.json"), ParseError);
}

TEST(ParamSpace, FlatIndexRoundTripAndUnit) {
    ParamSpace s({{"a", {1, 2, 3}}, {"b", {5}}, {"c", {0, 1}}});
    EXPECT_EQ(s.size(), 6u);
    for (std::uint64_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.flat(s.point(i)), i);
    EXPECT_EQ(s.point(1), (std::vector<std::size_t>{0, 0, 1}));
    EXPECT_EQ(s.active_dimensions(), (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(s.unit({2, 0, 1}), (std::vector<double>{1.0, 1.0}));
    EXPECT_EQ(s.find("c"), 2u);
    EXPECT_EQ(s.find("z"), 3u);
}

TEST(ParamSpace, CappedKeepsEndpoints) {
    const auto p = load_problem(kConfigs / "nano-60.json");
    const auto c = p.search.space.capped(4096);
    EXPECT_LE(c.size(), 4096u);
    EXPECT_GT(c.size(), 2048u);
    for (std::size_t d = 0; d < c.rank(); ++d) {
        const auto& full = p.search.space.dimensions()[d].values;
        const auto& kept = c.dimensions()[d].values;
        EXPECT_EQ(kept.front(), full.front());
        EXPECT_EQ(kept.back(), full.back());
        EXPECT_TRUE(std::includes(full.begin(), full.end(), kept.begin(), kept.end()));
    }
}
