#pragma once

#include <stdexcept>
#include <string>

namespace fngcn {

/// Base error carrying the pipeline stage that raised it, so the CLI can
/// report `[stage] message` and exit nonzero.
class Error : public std::runtime_error {
public:
    Error(std::string stage, const std::string& what)
        : std::runtime_error(what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class DegenerateGraphError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DivergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace fngcn
