#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qmc {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Model or scheme parameters violate a documented invariant.
class InvalidParameterError : public Error {
public:
    using Error::Error;
};

/// Config file or flag problem (missing key, bad value, unknown tag).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input data problem (CSV parse failure, misaligned series, empty sample).
class DataError : public Error {
public:
    using Error::Error;
};

/// A correlation bump cannot fit inside the SC model's admissible domain.
class DomainSaturationError : public Error {
public:
    using Error::Error;
};

/// A simulated process produced a non-finite value. Carries enough context
/// to identify the offending process, path, and step.
class NumericalBlowupError : public Error {
public:
    NumericalBlowupError(std::string process, std::uint64_t path, std::uint64_t step)
        : Error("numerical blowup in process '" + process + "' at path " +
                std::to_string(path) + " step " + std::to_string(step)),
          process_(std::move(process)),
          path_(path),
          step_(step) {}

    const std::string& process() const noexcept { return process_; }
    std::uint64_t path() const noexcept { return path_; }
    std::uint64_t step() const noexcept { return step_; }

private:
    std::string process_;
    std::uint64_t path_ = 0;
    std::uint64_t step_ = 0;
};

/// A state value escaped its admissible domain after clamping. Indicates an
/// internal bug; checked on every sub-step.
class BoundsViolationError : public Error {
public:
    BoundsViolationError(std::string process, std::uint64_t path, std::uint64_t step, double value)
        : Error("bounds violation in process '" + process + "' at path " +
                std::to_string(path) + " step " + std::to_string(step) +
                " value " + std::to_string(value)),
          process_(std::move(process)),
          path_(path),
          step_(step),
          value_(value) {}

    const std::string& process() const noexcept { return process_; }
    std::uint64_t path() const noexcept { return path_; }
    std::uint64_t step() const noexcept { return step_; }
    double value() const noexcept { return value_; }

private:
    std::string process_;
    std::uint64_t path_ = 0;
    std::uint64_t step_ = 0;
    double value_ = 0.0;
};

}  // namespace qmc
