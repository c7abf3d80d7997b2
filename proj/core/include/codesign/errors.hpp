#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace codesign {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (config, database, archive).
class ParseError : public Error {
public:
    using Error::Error;
};

/// One violated invariant, addressed by a dotted field path.
struct Issue {
    std::string path;
    std::string message;
};

/// A value parsed fine but violates an invariant. Carries every issue found;
/// what() names the first one.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Issue> issues);
    ValidationError(std::string path, std::string message);

    const std::vector<Issue>& issues() const noexcept { return issues_; }

private:
    std::vector<Issue> issues_;
};

/// Failure while running a model (cannot hover, empty archive, instance too large...).
class ModelError : public Error {
public:
    using Error::Error;
};

}  // namespace codesign
