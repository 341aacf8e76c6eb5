#pragma once

#include <limits>
#include <vector>

#include "dkg/cutoff.hpp"
#include "dkg/damping.hpp"
#include "dkg/evolve.hpp"
#include "dkg/functionals.hpp"
#include "dkg/grid.hpp"

namespace dkg {

/// ---- energy identity -------------------------------------------------------

/// Residual of the exact decrement identity E(t) = E(0) - A[0, t] at every
/// sample.  For a blown-up series the result simply covers [0, t_star].
struct EnergyIdentityReport {
    std::vector<double> t;
    std::vector<double> residual; // E(t_k) - E(0) + A[0, t_k]
    double max_abs = 0.0;
    double max_rel = 0.0; // max_abs / E(0); 0 when E(0) == 0
};

EnergyIdentityReport energy_identity_residual(const RunSeries& series);

/// ---- multiplier identity ---------------------------------------------------

/// Space-time terms of the interior-multiplier identity
///   0 = I + II + III + IV + V1 + V2 + VI
/// obtained by multiplying the equation with phi (x . grad u + u):
///   I   boundary evaluation of  int u_t phi (x . grad u + u) dx  at T and 0
///   II  int int alpha u_t phi (x . grad u + u)
///   III space-time quadrature of the pure divergence (vanishes for exact
///       solutions; reported as a discretization diagnostic)
///   IV  int int [ (x . grad u + u)(grad u . grad phi)
///                 - (x . grad phi)/2 (|grad u|^2 - u_t^2 + u^2) ]
///   V1  -1/4 int int phi u^4
///   V2  +1/4 int int (x . grad phi) u^4
///   VI  1/2 int int phi (|grad u|^2 + u_t^2 - u^2)
/// All integrals use the dense trace (trapezoid in time, radial trapezoid
/// with the 4 pi r^2 weight in space).
struct MultiplierLedger {
    double I = 0.0, II = 0.0, III = 0.0, IV = 0.0;
    double V1 = 0.0, V2 = 0.0, VI = 0.0;
    double sum = 0.0; // I + II + III + IV + V1 + V2 + VI
    double psi_residual = std::numeric_limits<double>::quiet_NaN();
};

MultiplierLedger multiplier_terms(const Trace& trace, const Cutoff& phi,
                                  const DampingProfile& damping, const RadialGrid& g);

/// Residual of the exterior identity obtained from the equation against
/// psi u (with the damping cross term kept explicitly):
///   int int psi (|grad u|^2 + u^2 - u^4)
///     - int int ((Delta psi)/2 u^2 + psi u_t^2)
///     + [ int psi u u_t dx ]_0^T
///     + int int psi alpha u u_t
/// which vanishes for exact solutions.
double psi_identity_residual(const Trace& trace, const Cutoff& psi,
                             const DampingProfile& damping, const RadialGrid& g);

/// ---- Morawetz-type estimates ------------------------------------------------

struct MorawetzEstimate {
    double lhs = 0.0;
    double bracket = 0.0;
    // lhs / bracket, or lhs / (eps * bracket) for the quartic estimates;
    // NaN when the bracket vanishes (flagged not applicable)
    double constant = std::numeric_limits<double>::quiet_NaN();
    bool applicable = false;
};

/// Empirical constants for the four small-data estimates over [0, T]:
///   u4_interior:   int int_{<=2R} u^4
///                    <= C eps [ int int_{<=4R} u^2 + int int_{2R<=.<=4R} |grad u|^2 ]
///   grad_interior: int int_{<=2R} |grad u|^2
///                    <= C [ A + E(T) + int int_{<=4R} u^2 + int int_{2R<=.<=4R} |grad u|^2 ]
///   u4_exterior:   int int_{>=2R} u^4
///                    <= C eps [ int int_{<=2R} u^2 + int int_{>=2R} |grad u|^2 ]
///   h1_exterior:   int int_{>=2R} (|grad u|^2 + u^2)
///                    <= C [ A + E(T) + int int_{<=2R} u^2
///                           + eps int int_{R<=.<=2R} |grad u|^2 ]
/// with eps = E_L(0).
struct MorawetzReport {
    double eps = 0.0;
    double T = 0.0;
    MorawetzEstimate u4_interior;
    MorawetzEstimate grad_interior;
    MorawetzEstimate u4_exterior;
    MorawetzEstimate h1_exterior;
};

MorawetzReport morawetz_report(const RunSeries& series);

/// ---- observation inequality --------------------------------------------------

enum class ObservationFlag { ok, unbounded, degenerate };
std::string to_string(ObservationFlag f);

struct ObservationPoint {
    double T_requested = 0.0;
    double T = 0.0;   // sample time actually used
    double E_T = 0.0; // energy at T
    double A_T = 0.0; // decrement over [0, T]
    double l2_time_integral = 0.0; // int_0^T ||u||^2_{L2(<=4R)} dt
    double strong_ratio = std::numeric_limits<double>::quiet_NaN(); // E(T)/A
    double weak_ratio = std::numeric_limits<double>::quiet_NaN();
    ObservationFlag flag = ObservationFlag::ok;
};

struct ObservationReport {
    std::vector<ObservationPoint> points;
};

ObservationReport observation_report(const RunSeries& series,
                                     const std::vector<double>& horizons);

/// ---- decay fit ---------------------------------------------------------------

struct DecayFit {
    double t_a = 0.0, t_b = 0.0;
    double rate = 0.0;        // -slope of log E
    double coefficient = 0.0; // exp(intercept)
    double r2 = 0.0;
    bool degenerate = false;  // log E had (numerically) zero variance
};

/// Least squares of log E(t) over samples with t in [t_a, t_b].  E must be
/// strictly positive there (ValidationError otherwise).
DecayFit fit_decay(const RunSeries& series, double t_a, double t_b);

} // namespace dkg
