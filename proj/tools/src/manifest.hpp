#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cli {

/// Everything needed to re-run a command. Written as manifest.json next to
/// the outputs.
struct RunManifest {
    std::string command;
    std::vector<std::string> configs;
    std::vector<std::string> problem_hashes;
    std::uint64_t seed = 0;
    std::uint64_t budget = 0;
    std::string method;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::chrono::system_clock::time_point started;
    std::chrono::system_clock::time_point finished;
};

std::string utc_timestamp(std::chrono::system_clock::time_point t);
void write_manifest(const std::filesystem::path& dir, const RunManifest& m);

}  // namespace cli
