#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dkg/damping.hpp"
#include "dkg/field_state.hpp"
#include "dkg/functionals.hpp"
#include "dkg/grid.hpp"
#include "dkg/ground_state.hpp"

namespace dkg {

/// ---- initial data families ----------------------------------------------

enum class DataFamily { gaussian, velocity_bump, scaled_ground_state };

/// gaussian:            u0 = a exp(-(r/sigma)^2),       u1 = 0
/// velocity_bump:       u0 = 0,                          u1 = a exp(-(r/sigma)^2)
/// scaled_ground_state: u0 = lambda Q,                   u1 = 0
struct InitialData {
    DataFamily family = DataFamily::gaussian;
    double amplitude = 0.0; // a
    double sigma = 1.0;
    double lambda = 1.0;
};

DataFamily data_family_from_string(std::string_view s);
std::string to_string(DataFamily f);

/// Radius beyond which the data is below 1e-12 of its peak.
double effective_support_radius(const InitialData& d, const GroundState* gs);

/// Domain size needed so the outer wall stays causally inert up to time T:
/// support + T + margin (unit propagation speed).
inline double required_domain(double support_radius, double T, double margin) {
    return support_radius + T + margin;
}

/// Sample the data on the grid.  Requires the effective support to fit in
/// r_max/2; gs is needed only for scaled_ground_state.
FieldState init_state(const InitialData& d, const RadialGrid& g, const GroundState* gs);

/// ---- stepper --------------------------------------------------------------

struct StepperConfig {
    double dt = 0.0;
    double M_blow = 1e3; // pointwise guard on |u|
    bool nonlinear = true;
};

/// Three-level leapfrog for  v_tt = v_rr - v + v^3/r^2 - alpha v_t  with the
/// damping term time-centred:
///   (1 + a dt/2) v+ = 2 v0 - (1 - a dt/2) v- + dt^2 (D2 v0 - v0 + v0^3/r^2)
/// started by a second-order Taylor step.  The stepper keeps one level of
/// lookahead so the reported velocity is always the centred difference
/// (v+ - v-) / (2 dt); at t = 0 the virtual level v- = v+ - 2 dt w0 makes the
/// centred formula reproduce the given w0 exactly.
class Stepper {
public:
    Stepper(const FieldState& initial, const DampingProfile& damping,
            const RadialGrid& g, const StepperConfig& cfg);

    /// Shift to the next level and compute a new lookahead.  Returns false
    /// (and freezes) when the lookahead trips the blowup guard.
    bool advance();

    double time() const { return t_; }
    const std::vector<double>& v() const { return vc_; }
    std::vector<double> w_centred() const;
    FieldState state() const;

    bool blown_up() const { return blown_; }
    /// Time of the last level whose lookahead was still finite and bounded.
    double blowup_time() const { return t_blow_; }

private:
    void compute_lookahead();

    RadialGrid grid_;
    StepperConfig cfg_;
    std::vector<double> alpha_;
    std::vector<double> vm_, vc_, vn_; // v at t-dt, t, t+dt
    std::vector<double> coef_old_, coef_new_inv_, inv_r2_;
    double t_ = 0.0;
    bool blown_ = false;
    double t_blow_ = 0.0;
};

/// Single second-order step; throws BlowupSignal if the guard trips.
FieldState step(const FieldState& s, const DampingProfile& damping,
                const RadialGrid& g, const StepperConfig& cfg);

/// ---- full runs -------------------------------------------------------------

struct RunConfig {
    RadialGrid grid;
    DampingShape shape = DampingShape::constant;
    double lambda0 = 1.0;
    double lambda1 = 1.0;
    double R = 2.0;
    InitialData data;
    double T = 10.0;
    double dt = 0.0;      // 0 -> default dt = dr/2
    double M_blow = 1e3;
    std::size_t output_every = 10; // sample cadence in steps
    std::size_t trace_every = 1;   // trace cadence when a trace is requested
    double margin = 2.0;
    bool nonlinear = true;
    AuditRadii radii = AuditRadii::from_R(2.0);

    double dt_effective() const { return dt > 0.0 ? dt : 0.5 * grid.dr; }
    /// CFL (dt <= dr), domain sizing, radii and data checks.
    void validate(const GroundState* gs) const;
};

enum class Outcome { global, blowup };
std::string to_string(Outcome o);

/// Functional samples along a run.  On blowup the series simply stops: no
/// samples are recorded past the last stable cadence point t_star.
struct RunSeries {
    std::vector<double> t;
    std::vector<FunctionalRecord> rec;
    std::vector<double> A; // cumulative damping decrement  int_0^t int alpha u_t^2
    Outcome outcome = Outcome::global;
    double t_star = 0.0;   // last recorded sample time when outcome == blowup
    double dt_used = 0.0;
    double eps0 = 0.0;     // E_L at t = 0
    AuditRadii radii;
};

/// Dense space-time history for the audit integrals.
struct Trace {
    std::vector<double> t;
    std::vector<std::vector<double>> v;
    std::vector<std::vector<double>> w;
    std::size_t cadence = 1; // steps between stored levels
    double dt = 0.0;         // time between stored levels
};

RunSeries run(const RunConfig& cfg, const GroundState* gs = nullptr, Trace* trace = nullptr);

} // namespace dkg
