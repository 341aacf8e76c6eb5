#pragma once

#include <vector>

#include "dkg/damping.hpp"
#include "dkg/field_state.hpp"
#include "dkg/grid.hpp"

namespace dkg {

/// Radii at which restricted integrals and cutoffs are anchored.  R is the
/// damping radius; r1 < r2 delimit the interior cutoff's descent.
struct AuditRadii {
    double R = 2.0;
    double r1 = 3.0;
    double r2 = 5.0;

    static AuditRadii from_R(double R) { return AuditRadii{R, 1.5 * R, 2.5 * R}; }
    /// Requires 0 < R <= r1 < r2 <= r_max and 4R <= r_max.
    void validate(const RadialGrid& g) const;
};

/// Integrals over balls/annuli/exteriors anchored at R, 2R, 4R.  Region
/// boundaries are snapped to grid nodes, so complementary pieces add up to
/// the full-domain integral to round-off.
struct RestrictedIntegrals {
    double u2_in_R = 0.0;        // |u|^2 over |x| <= R
    double u2_in_2R = 0.0;
    double u2_in_4R = 0.0;
    double grad2_in_2R = 0.0;    // |grad u|^2 over |x| <= 2R
    double grad2_ann_R_2R = 0.0; // |grad u|^2 over R <= |x| <= 2R
    double grad2_ann_2R_4R = 0.0;
    double grad2_out_2R = 0.0;   // |grad u|^2 over |x| >= 2R
    double h1_out_2R = 0.0;      // |grad u|^2 + u^2 over |x| >= 2R
    double u4_in_2R = 0.0;       // u^4 over |x| <= 2R
    double u4_out_2R = 0.0;
};

/// Every functional of one snapshot.  All integrals are over R^3 via the
/// radial reduction (e.g. int u^2 dx = 4 pi int v^2 dr); the gradient
/// integrand is (v_r - v/r)^2 with the node-0 value 0.
struct FunctionalRecord {
    double E = 0.0;        // energy: E_L - L4/4
    double E_L = 0.0;      // free energy: (1/2) int (u_t^2 + |grad u|^2 + u^2)
    double J = 0.0;        // static energy: E at u_t = 0
    double K = 0.0;        // Nehari functional: ||u||_H1^2 - int u^4
    double L4 = 0.0;       // int u^4
    double l2 = 0.0;       // int u^2
    double grad2 = 0.0;    // int |grad u|^2
    double ut2 = 0.0;      // int (u_t)^2
    double alpha_ut2 = 0.0; // int alpha (u_t)^2 (energy decrement density)
    RestrictedIntegrals restricted;
};

FunctionalRecord evaluate_functionals(const FieldState& s, const DampingProfile& damping,
                                      const RadialGrid& g, const AuditRadii& radii);

/// Gagliardo-Nirenberg-type ratio  int u^4 / (||u||_H1^2 * ||u||_L2^2).
/// Throws DegenerateInputError for an identically-zero field.
double gn_ratio(const FieldState& s, const RadialGrid& g);

/// ---- u-sample path ------------------------------------------------------
/// The classifier and the ground-state module work from plain u samples.
/// Both must land on bitwise-identical numbers for the same samples, so they
/// share these routines (gradient by finite differences on u itself).

struct H1Norms {
    double l2 = 0.0;    // int u^2
    double grad2 = 0.0; // int |grad u|^2
    double l4 = 0.0;    // int u^4
};

H1Norms norms_from_u(const std::vector<double>& u, const RadialGrid& g);

/// Static energy J and Nehari K from norms, in the exact expression shared
/// by classify() and the ground-state threshold.
inline double static_energy(const H1Norms& n) {
    return 0.5 * (n.grad2 + n.l2) - 0.25 * n.l4;
}
inline double nehari(const H1Norms& n) { return (n.grad2 + n.l2) - n.l4; }

double gn_ratio_u(const std::vector<double>& u, const RadialGrid& g);

} // namespace dkg
