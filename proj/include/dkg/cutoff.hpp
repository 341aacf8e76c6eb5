#pragma once

#include <vector>

#include "dkg/functionals.hpp"
#include "dkg/grid.hpp"

namespace dkg {

/// Smooth radial cutoffs used by the space-time audits, sampled on the grid
/// with analytic first derivatives and Laplacians.
///
///   phi: interior cutoff, phi == 1 on |x| <= r1, descends to 0 across
///        [r1, r2], zero outside.  Built as the 4th power of a quintic
///        smoothstep descent so that |grad phi| <= 4*gamma*phi^{7/8} holds
///        with a finite measured gamma.
///   psi: exterior cutoff, psi == 0 on |x| <= R, rises across [R, 2R] to 1,
///        equal to 1 outside B_2R.  Also a 4th power: psi = kappa^4.
enum class CutoffKind { phi, psi };

struct Cutoff {
    CutoffKind kind = CutoffKind::phi;
    AuditRadii radii;
    std::vector<double> value;
    std::vector<double> deriv; // d/dr
    std::vector<double> lap;   // d^2/dr^2 + (2/r) d/dr

    // measured shape constants (see build_cutoff)
    double gamma = 0.0;      // phi: sup |grad phi| / phi^{7/8} / 4 over {phi > 1e-8}
    double beta1 = 0.0;      // psi: sup |kappa'|
    double beta2 = 0.0;      // psi: sup |Delta kappa|
    double beta_tilde = 0.0; // psi: sup |Delta psi|  (<= 4*beta2 + 12*beta1^2)
};

Cutoff build_cutoff(CutoffKind kind, const AuditRadii& radii, const RadialGrid& g);

} // namespace dkg
