#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "codesign/evaluate.hpp"
#include "codesign/paramspace.hpp"

namespace codesign {

/// Evaluated designs plus their nondominated subset, maintained on insert.
class ParetoArchive {
public:
    void add(DesignPoint p);
    const std::vector<DesignPoint>& points() const { return points_; }
    /// Indices into points(), ascending.
    std::vector<std::size_t> front() const;
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }

private:
    std::vector<DesignPoint> points_;
    std::vector<std::size_t> front_;
};

struct ArchiveHeader {
    int schema_version = 1;
    std::string kind = "bayesopt";  ///< bayesopt | random | sweep | tuned
    std::string problem;
    std::string problem_hash;
    std::uint64_t seed = 0;
    std::uint64_t budget = 0;
    ParamSpace space;
};

/// Line-delimited JSON: the header object, then one design per line.
std::string archive_to_jsonl(const ArchiveHeader& header, const std::vector<DesignPoint>& points);
void parse_archive(std::string_view text, ArchiveHeader& header, std::vector<DesignPoint>& points);

/// Written to a temporary sibling, then renamed into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

void save_archive(const std::filesystem::path& path, const ArchiveHeader& header,
                  const std::vector<DesignPoint>& points);
void load_archive(const std::filesystem::path& path, ArchiveHeader& header, std::vector<DesignPoint>& points);

/// Comma-separated front summary with a header row.
std::string front_csv(const std::vector<DesignPoint>& points, const std::vector<std::size_t>& front);

}  // namespace codesign
