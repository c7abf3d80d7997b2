#include "manifest.hpp"

#include <ctime>
#include <iomanip>
#include <sstream>

#include "codesign/archive.hpp"
#include "json.hpp"

#ifndef CODESIGN_VERSION
#define CODESIGN_VERSION "unknown"
#endif

namespace cli {

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& m) {
    nlohmann::ordered_json j;
    j["tool"] = "codesign";
    j["version"] = CODESIGN_VERSION;
    j["command"] = m.command;
    j["configs"] = m.configs;
    j["problem_hashes"] = m.problem_hashes;
    j["seed"] = m.seed;
    j["budget"] = m.budget;
    if (!m.method.empty()) j["method"] = m.method;
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    j["started_at"] = utc_timestamp(m.started);
    j["finished_at"] = utc_timestamp(m.finished);
    codesign::write_file_atomic(dir / "manifest.json", j.dump(2) + "\n");
}

}  // namespace cli
