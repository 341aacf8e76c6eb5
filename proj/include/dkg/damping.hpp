#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dkg/grid.hpp"

namespace dkg {

/// Node-sampled damping coefficients alpha(r) >= 0.
///
/// Shapes (all C^2, built from quintic smoothsteps):
///   none             alpha == 0 everywhere; undamped control runs.  Exempt
///                    from the exterior lower bound below.
///   constant         alpha == lambda1 everywhere.
///   exterior_plateau alpha == 0 near the origin, rises across a width-R
///                    ramp placed so that alpha(R) == lambda0 exactly, and
///                    holds lambda1 from the end of the ramp on.
///   exterior_band    same rise, plateau lambda1 up to 3R, then descends to
///                    lambda0 across [3R, 4R] and stays lambda0 beyond.
///
/// Every shape except `none` is checked at construction to satisfy the
/// exterior bound lambda0 <= alpha(r) <= lambda1 at all nodes with r >= R.
enum class DampingShape { none, constant, exterior_plateau, exterior_band };

struct DampingProfile {
    DampingShape shape = DampingShape::none;
    double lambda0 = 0.0;
    double lambda1 = 0.0;
    double R = 0.0;
    std::vector<double> alpha; // one entry per grid node

    bool is_zero() const { return shape == DampingShape::none; }
};

DampingProfile make_damping(DampingShape shape, double lambda0, double lambda1,
                            double R, const RadialGrid& g);

/// Check lambda0 - tol <= alpha_i <= lambda1 + tol at every node with
/// r_i >= R (tol = 1e-12 * lambda1).  Throws ValidationError on violation.
/// No-op for shape `none`.
void check_exterior_bound(const DampingProfile& p, const RadialGrid& g);

DampingShape damping_shape_from_string(std::string_view s);
std::string to_string(DampingShape s);

} // namespace dkg
