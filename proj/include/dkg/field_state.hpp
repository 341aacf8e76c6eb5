#pragma once

#include <vector>

#include "dkg/grid.hpp"

namespace dkg {

/// Snapshot of the radial field at one time level, stored in the reduced
/// variables v = r*u and w = r*du/dt.  The reduction turns the 3-d radial
/// wave operator into the 1-d one, and the Dirichlet conditions
/// v(0) = v(r_max) = 0 encode regularity at the origin and the (causally
/// inert) outer wall.
struct FieldState {
    double t = 0.0;
    std::vector<double> v;
    std::vector<double> w;
};

/// All-zero state on g at time t.
FieldState zero_state(const RadialGrid& g, double t = 0.0);

/// Check size, finiteness (NumericError with the node index) and the
/// boundary conditions (ValidationError).
void validate_state(const FieldState& s, const RadialGrid& g);

/// u at the origin by one-sided extrapolation of u = v/r:
/// u(0) ~= (4 v_1 - v_2) / (2 dr), second-order accurate for smooth radial u.
double u_at_origin(const std::vector<double>& v, const RadialGrid& g);

/// sup_i |u(r_i)| over nodes i >= 1 together with the origin extrapolation.
double sup_abs_u(const std::vector<double>& v, const RadialGrid& g);

/// Recover u samples from v samples (origin by extrapolation).
std::vector<double> u_samples(const std::vector<double>& v, const RadialGrid& g);

} // namespace dkg
