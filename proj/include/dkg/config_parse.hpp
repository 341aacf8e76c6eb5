#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dkg/evolve.hpp"

namespace dkg {

/// Parsed key = value document.  Either a single run or a sweep (any
/// sweep.* key present).  Grid defaults are sized from the causal domain
/// bound when grid.* keys are absent.
struct ParsedConfig {
    RunConfig run; // base config

    bool is_sweep = false;
    std::vector<double> sweep_amplitude;
    std::vector<double> sweep_lambda; // data.lambda for scaled_ground_state
    std::vector<double> sweep_lambda0;
    std::vector<double> sweep_lambda1;
    std::vector<double> sweep_R;
    std::vector<double> sweep_dt;
    std::vector<DampingShape> sweep_shape;
    std::size_t sweep_max_runs = 256;

    std::vector<double> observe_horizons; // default: {T}
    double fit_t_a = 5.0;
    double fit_t_b = -1.0; // -1 -> run horizon
    double gs_tol = 1e-9;

    bool radii_explicit = false; // audit.R given, so R sweeps keep it

    /// Cross product of the sweep axes over the base config (a single config
    /// when no axis is set).  Re-derives the audit radii from swept R unless
    /// audit.R was explicit.  Throws when the product exceeds sweep_max_runs.
    std::vector<RunConfig> instantiate() const;
};

/// Parse a config document.  Unknown keys, missing required keys
/// (damping.shape, data.family, run.T), CFL violations and domain sizing
/// problems all raise ValidationError with the offending key named.
ParsedConfig parse_config(const std::string& text);

/// Ground-state support-radius estimate used when sizing grids before any
/// ground state exists (conservative; the exact scan runs at init time).
double ground_state_support_estimate();

} // namespace dkg
