#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cli {

namespace fs = std::filesystem;

/// Exit codes shared by every subcommand.
enum ExitCode : int { ok = 0, usage = 1, config = 2, runtime = 3 };

struct ExploreArgs {
    fs::path config;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> budget;
    fs::path out;
    std::string method = "bayesopt";  ///< bayesopt | random
};

struct SweepArgs {
    fs::path config;
    fs::path out;
};

struct SelectArgs {
    fs::path config;
    std::optional<fs::path> archive;  ///< absent: the config's baselines
    fs::path out;
    bool fine_tune = false;
    std::optional<double> target_node_nm;
};

struct EvaluateArgs {
    fs::path config;
    std::vector<std::string> overrides;  ///< key=value
    std::optional<fs::path> out;
    bool dump_layers = false;
};

struct F1Args {
    fs::path config;
    std::optional<double> payload_g;
    std::optional<double> payload_w;
    fs::path out;
    bool svg = false;
    std::optional<fs::path> archive;  ///< designs to overlay
    std::size_t samples = 200;
};

struct ReportArgs {
    std::vector<fs::path> configs;
    std::vector<fs::path> archives;  ///< one per config, or none
    std::optional<std::string> baseline;
    fs::path out;
};

int cmd_explore(const ExploreArgs& a, std::ostream& log);
int cmd_sweep(const SweepArgs& a, std::ostream& log);
int cmd_select(const SelectArgs& a, std::ostream& log);
int cmd_evaluate(const EvaluateArgs& a, std::ostream& log);
int cmd_f1(const F1Args& a, std::ostream& log);
int cmd_report(const ReportArgs& a, std::ostream& log);

}  // namespace cli
