#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ablab {

// Base class for everything we throw on purpose. Catching ablab::Error at the
// CLI boundary separates our own failures from genuine programming errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input: construction parameters, scenario files, mismatched grids.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Input outside the mathematical domain of an operation (e.g. elliptic
// parameter m >= 1, or so close to a singular value that no double-precision
// answer exists).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// An iterative scheme hit its subdivision or iteration cap before reaching the
// requested tolerance. Carries the best value obtained so callers can decide
// whether it is still usable.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double best, double err)
        : Error(msg), best_estimate(best), error_estimate(err) {}

    double best_estimate;
    double error_estimate;
};

// Field evaluation requested closer to a wire than the exclusion distance.
// For multi-loop sources the offending loop index is recorded.
class NearWireError : public Error {
public:
    NearWireError(const std::string& msg, double dist,
                  std::optional<std::size_t> loop = std::nullopt)
        : Error(msg), distance(dist), loop_index(loop) {}

    double distance;
    std::optional<std::size_t> loop_index;
};

// A path passes through (or touches, within tolerance) the surface used for
// crossing counting, so its linking number is not well defined numerically.
class AmbiguousTopologyError : public Error {
public:
    explicit AmbiguousTopologyError(const std::string& msg) : Error(msg) {}
};

}  // namespace ablab
