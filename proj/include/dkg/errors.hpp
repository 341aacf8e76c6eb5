#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dkg {

/// Bad constructor or configuration arguments (grid too small, radii out of
/// order, CFL violation, unknown config key, ...).  The message names the
/// offending parameter.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite value found in numeric data.  Carries the grid node where the
/// first bad sample was seen (-1 when no single node applies).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what, std::ptrdiff_t node = -1)
        : std::runtime_error(what), node_(node) {}
    std::ptrdiff_t node() const noexcept { return node_; }

private:
    std::ptrdiff_t node_;
};

/// An iterative solver failed to converge or could not bracket a root.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computed quantity missed its accuracy target.
class AccuracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input is degenerate for the requested operation (e.g. a ratio of an
/// identically-zero field).
class DegenerateInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown by the single-step API when the pointwise blowup guard trips.
/// Carries the time of the last stable level.
class BlowupSignal : public std::runtime_error {
public:
    explicit BlowupSignal(double t)
        : std::runtime_error("pointwise blowup guard tripped"), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

} // namespace dkg
