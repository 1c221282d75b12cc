#pragma once

#include <stdexcept>
#include <string>

namespace mdist {

// Exit codes used by the CLI. Library code throws; tools map to these.
enum class ExitCode : int {
    ok = 0,
    config = 2,
    data = 3,
    theorem = 4,
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const noexcept { return ExitCode::data; }
};

// Bad parameters or flag combinations.
class ConfigError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::config; }
};

// Malformed input files, dimension mismatches, violated preconditions on data.
class DataError : public Error {
public:
    using Error::Error;
};

// A preference relation contains a cycle after closure.
class InconsistentPreferences : public DataError {
public:
    using DataError::DataError;
};

// LP solver could not certify a result.
class SolverError : public Error {
public:
    using Error::Error;
};

// A structure guaranteed to exist (a 2-hop king, a perfect matching, ...)
// was not found. Either the input broke a precondition silently or the
// implementation is wrong; callers treat it as a first-class outcome.
class TheoremViolation : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::theorem; }
};

}  // namespace mdist
