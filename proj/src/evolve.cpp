#include "dkg/evolve.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dkg/errors.hpp"
#include "dkg/quadrature.hpp"

namespace dkg {

namespace {
constexpr double four_pi = 4.0 * std::numbers::pi;
constexpr double support_cut = 1e-12;
// |u| < 1e-12 * peak  when  r/sigma > sqrt(ln 1e12)
const double gaussian_support_factor = std::sqrt(std::log(1e12));
} // namespace

DataFamily data_family_from_string(std::string_view s) {
    if (s == "gaussian") return DataFamily::gaussian;
    if (s == "velocity_bump") return DataFamily::velocity_bump;
    if (s == "scaled_ground_state") return DataFamily::scaled_ground_state;
    throw ValidationError("unknown data family '" + std::string(s) +
                          "' (expected gaussian|velocity_bump|scaled_ground_state)");
}

std::string to_string(DataFamily f) {
    switch (f) {
    case DataFamily::gaussian: return "gaussian";
    case DataFamily::velocity_bump: return "velocity_bump";
    case DataFamily::scaled_ground_state: return "scaled_ground_state";
    }
    return "?";
}

std::string to_string(Outcome o) { return o == Outcome::global ? "global" : "blowup"; }

double effective_support_radius(const InitialData& d, const GroundState* gs) {
    switch (d.family) {
    case DataFamily::gaussian:
    case DataFamily::velocity_bump:
        if (d.amplitude == 0.0) return 0.0;
        if (!(d.sigma > 0.0)) throw ValidationError("initial data: sigma must be positive");
        return d.sigma * gaussian_support_factor;
    case DataFamily::scaled_ground_state: {
        if (d.lambda == 0.0) return 0.0;
        if (gs == nullptr)
            throw ValidationError("scaled_ground_state data needs a ground state");
        // scan from the outside for the last sample above the cut
        for (std::size_t i = gs->grid.n; i-- > 1;) {
            if (std::fabs(gs->q[i]) > support_cut * gs->q0) return gs->grid.r(i);
        }
        return 0.0;
    }
    }
    throw ValidationError("initial data: unknown family");
}

FieldState init_state(const InitialData& d, const RadialGrid& g, const GroundState* gs) {
    const double support = effective_support_radius(d, gs);
    if (!(support <= 0.5 * g.r_max))
        throw ValidationError("initial data spreads past r_max/2 (support radius " +
                              std::to_string(support) + ", r_max " + std::to_string(g.r_max) + ")");

    FieldState s = zero_state(g);
    const std::size_t last = g.n - 1;
    switch (d.family) {
    case DataFamily::gaussian:
        for (std::size_t i = 1; i < last; ++i) {
            const double r = g.r(i);
            const double x = r / d.sigma;
            s.v[i] = d.amplitude * r * std::exp(-x * x);
        }
        break;
    case DataFamily::velocity_bump:
        for (std::size_t i = 1; i < last; ++i) {
            const double r = g.r(i);
            const double x = r / d.sigma;
            s.w[i] = d.amplitude * r * std::exp(-x * x);
        }
        break;
    case DataFamily::scaled_ground_state:
        if (gs == nullptr)
            throw ValidationError("scaled_ground_state data needs a ground state");
        if (!(gs->grid == g))
            throw ValidationError("ground state was built on a different grid");
        for (std::size_t i = 1; i < last; ++i) s.v[i] = d.lambda * g.r(i) * gs->q[i];
        break;
    }
    validate_state(s, g);
    return s;
}

/// ---- stepper ---------------------------------------------------------------

Stepper::Stepper(const FieldState& initial, const DampingProfile& damping,
                 const RadialGrid& g, const StepperConfig& cfg)
    : grid_(g), cfg_(cfg), alpha_(damping.alpha) {
    validate_state(initial, g);
    if (alpha_.size() != g.n)
        throw ValidationError("stepper: damping profile does not match grid");
    if (!(cfg_.dt > 0.0)) throw ValidationError("stepper: dt must be positive");
    if (!(cfg_.dt <= g.dr * (1.0 + 1e-12)))
        throw ValidationError("stepper: CFL requires dt <= dr");
    if (!(cfg_.M_blow > 0.0)) throw ValidationError("stepper: M_blow must be positive");

    const std::size_t n = g.n;
    const double dt = cfg_.dt;
    coef_old_.resize(n);
    coef_new_inv_.resize(n);
    inv_r2_.resize(n);
    inv_r2_[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ad2 = 0.5 * alpha_[i] * dt;
        coef_old_[i] = 1.0 - ad2;
        coef_new_inv_[i] = 1.0 / (1.0 + ad2);
        if (i >= 1) inv_r2_[i] = 1.0 / (g.r(i) * g.r(i));
    }

    vc_ = initial.v;
    t_ = initial.t;

    // Taylor bootstrap: v1 = v0 + dt w0 + (dt^2/2)(F(v0) - alpha w0)
    const double inv_dr2 = 1.0 / (g.dr * g.dr);
    vn_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double lap = (vc_[i + 1] - 2.0 * vc_[i] + vc_[i - 1]) * inv_dr2;
        double f = lap - vc_[i];
        if (cfg_.nonlinear) f += vc_[i] * vc_[i] * vc_[i] * inv_r2_[i];
        vn_[i] = vc_[i] + dt * initial.w[i] + 0.5 * dt * dt * (f - alpha_[i] * initial.w[i]);
    }

    // Virtual level below t = 0 so that the centred velocity at t = 0 is w0.
    vm_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) vm_[i] = vn_[i] - 2.0 * dt * initial.w[i];

    const double m = sup_abs_u(vn_, grid_);
    if (!(m <= cfg_.M_blow)) {
        blown_ = true;
        t_blow_ = t_;
    }
}

void Stepper::compute_lookahead() {
    const std::size_t n = grid_.n;
    const double dt2 = cfg_.dt * cfg_.dt;
    const double inv_dr2 = 1.0 / (grid_.dr * grid_.dr);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double lap = (vc_[i + 1] - 2.0 * vc_[i] + vc_[i - 1]) * inv_dr2;
        double f = lap - vc_[i];
        if (cfg_.nonlinear) f += vc_[i] * vc_[i] * vc_[i] * inv_r2_[i];
        vn_[i] = (2.0 * vc_[i] - coef_old_[i] * vm_[i] + dt2 * f) * coef_new_inv_[i];
    }
    vn_[0] = 0.0;
    vn_[n - 1] = 0.0;

    const double m = sup_abs_u(vn_, grid_);
    if (!(m <= cfg_.M_blow)) {
        blown_ = true;
        t_blow_ = t_;
    }
}

bool Stepper::advance() {
    if (blown_) return false;
    std::vector<double> scratch = std::move(vm_);
    vm_ = std::move(vc_);
    vc_ = std::move(vn_);
    vn_ = std::move(scratch);
    t_ += cfg_.dt;
    compute_lookahead();
    return !blown_;
}

std::vector<double> Stepper::w_centred() const {
    std::vector<double> w(grid_.n);
    const double inv = 1.0 / (2.0 * cfg_.dt);
    for (std::size_t i = 0; i < grid_.n; ++i) w[i] = (vn_[i] - vm_[i]) * inv;
    return w;
}

FieldState Stepper::state() const {
    FieldState s;
    s.t = t_;
    s.v = vc_;
    s.w = w_centred();
    return s;
}

FieldState step(const FieldState& s, const DampingProfile& damping,
                const RadialGrid& g, const StepperConfig& cfg) {
    Stepper st(s, damping, g, cfg);
    if (st.blown_up()) throw BlowupSignal(st.blowup_time());
    if (!st.advance()) throw BlowupSignal(st.blowup_time());
    return st.state();
}

/// ---- full runs -------------------------------------------------------------

void RunConfig::validate(const GroundState* gs) const {
    if (grid.n < 16 || !(grid.r_max > 0.0))
        throw ValidationError("run config: grid is not initialised");
    const double dt_eff = dt_effective();
    if (!(dt_eff > 0.0)) throw ValidationError("run.dt must be positive");
    if (!(dt_eff <= grid.dr * (1.0 + 1e-12)))
        throw ValidationError("run.dt violates the CFL bound dt <= dr");
    if (!(T > 0.0)) throw ValidationError("run.T must be positive");
    if (std::llround(T / dt_eff) < 1)
        throw ValidationError("run.T shorter than one step");
    if (output_every < 1) throw ValidationError("run.output_every must be >= 1");
    if (trace_every < 1) throw ValidationError("run.trace_every must be >= 1");
    if (!(M_blow > 0.0)) throw ValidationError("run.M_blow must be positive");
    if (!(margin >= 0.0)) throw ValidationError("run.margin must be >= 0");
    radii.validate(grid);

    if (data.family == DataFamily::scaled_ground_state && gs == nullptr)
        throw ValidationError("scaled_ground_state data needs a ground state");
    const double support = effective_support_radius(data, gs);
    const auto steps = static_cast<double>(std::llround(T / dt_eff));
    const double needed = required_domain(support, steps * dt_eff, margin);
    if (!(needed <= grid.r_max))
        throw ValidationError("domain too small: need r_max >= " + std::to_string(needed) +
                              " (support " + std::to_string(support) + " + T + margin)");
}

RunSeries run(const RunConfig& cfg, const GroundState* gs, Trace* trace) {
    cfg.validate(gs);
    const RadialGrid& g = cfg.grid;
    const DampingProfile damping =
        make_damping(cfg.shape, cfg.lambda0, cfg.lambda1, cfg.R, g);
    const double dt = cfg.dt_effective();
    const auto B = static_cast<std::size_t>(std::llround(cfg.T / dt));

    FieldState state0 = init_state(cfg.data, g, gs);
    Stepper st(state0, damping, g, StepperConfig{dt, cfg.M_blow, cfg.nonlinear});

    RunSeries out;
    out.dt_used = dt;
    out.radii = cfg.radii;

    if (trace) {
        trace->t.clear();
        trace->v.clear();
        trace->w.clear();
        trace->cadence = cfg.trace_every;
        trace->dt = dt * static_cast<double>(cfg.trace_every);
    }

    // per-step damping density for the cumulative decrement A
    std::vector<double> damp_int(g.n);
    auto damping_density = [&](const std::vector<double>& w) {
        for (std::size_t i = 0; i < g.n; ++i) damp_int[i] = damping.alpha[i] * w[i] * w[i];
        return four_pi * trapezoid(damp_int, g, 0, g.n - 1);
    };

    // sample 0 comes straight from the validated initial data
    out.t.push_back(0.0);
    out.rec.push_back(evaluate_functionals(state0, damping, g, cfg.radii));
    out.A.push_back(0.0);
    out.eps0 = out.rec[0].E_L;
    if (trace) {
        trace->t.push_back(0.0);
        trace->v.push_back(state0.v);
        trace->w.push_back(state0.w);
    }

    double A_running = 0.0;
    double d_prev = damping_density(state0.w);
    std::vector<double> w_buf;

    for (std::size_t k = 1; k <= B; ++k) {
        if (!st.advance()) {
            out.outcome = Outcome::blowup;
            out.t_star = out.t.back();
            return out;
        }
        const double tk = dt * static_cast<double>(k);
        w_buf = st.w_centred();
        const double d_k = damping_density(w_buf);
        A_running += 0.5 * dt * (d_prev + d_k);
        d_prev = d_k;

        const bool sample = (k % cfg.output_every == 0) || k == B;
        const bool store = trace && ((k % cfg.trace_every == 0) || k == B);
        if (sample || store) {
            FieldState s;
            s.t = tk;
            s.v = st.v();
            s.w = w_buf;
            if (sample) {
                out.t.push_back(tk);
                out.rec.push_back(evaluate_functionals(s, damping, g, cfg.radii));
                out.A.push_back(A_running);
            }
            if (store) {
                trace->t.push_back(tk);
                trace->v.push_back(std::move(s.v));
                trace->w.push_back(std::move(s.w));
            }
        }
    }
    out.outcome = Outcome::global;
    out.t_star = 0.0;
    return out;
}

} // namespace dkg
