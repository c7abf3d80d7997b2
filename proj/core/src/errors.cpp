#include "codesign/errors.hpp"

namespace codesign {

namespace {

std::string describe(const std::vector<Issue>& issues) {
    if (issues.empty()) {
        return "validation failed";
    }
    std::string msg = issues.front().path + ": " + issues.front().message;
    if (issues.size() > 1) {
        msg += " (+" + std::to_string(issues.size() - 1) + " more)";
    }
    return msg;
}

}  // namespace

ValidationError::ValidationError(std::vector<Issue> issues)
    : Error(describe(issues)), issues_(std::move(issues)) {}

ValidationError::ValidationError(std::string path, std::string message)
    : ValidationError(std::vector<Issue>{Issue{std::move(path), std::move(message)}}) {}

}  // namespace codesign
