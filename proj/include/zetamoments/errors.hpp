#pragma once

#include <stdexcept>
#include <string>

namespace zm {

// Exit codes used by the command-line driver; the numeric values are part of
// the tool's external contract.
enum class ExitCode : int {
    ok = 0,
    tolerance_failure = 1,
    config_error = 2,
    refinement_failure = 3,
    resource_limit = 4,
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const { return ExitCode::tolerance_failure; }
};

// Two shifts are too close for a partial-fraction formula to be trusted.
class DegenerateShiftError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const override { return ExitCode::config_error; }
};

// An argument sits within the guard distance of a pole of zeta or Gamma.
class PoleProximityError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const override { return ExitCode::config_error; }
};

class DomainError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const override { return ExitCode::config_error; }
};

class ResourceError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const override { return ExitCode::resource_limit; }
};

// A numerical refinement check (step halving, truncation doubling) failed.
class RefinementError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const override { return ExitCode::refinement_failure; }
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& param, const std::string& what)
        : Error("config: " + param + ": " + what), param_(param) {}
    const std::string& param() const { return param_; }
    ExitCode exit_code() const override { return ExitCode::config_error; }

private:
    std::string param_;
};

}  // namespace zm
