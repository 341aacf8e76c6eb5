#include "dkg/audit.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dkg/errors.hpp"
#include "dkg/field_state.hpp"
#include "dkg/quadrature.hpp"

namespace dkg {

namespace {
constexpr double four_pi = 4.0 * std::numbers::pi;

/// Trapezoid in time over per-level values s_k at times t_k.
double time_trapezoid(const std::vector<double>& t, const std::vector<double>& s) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < t.size(); ++k)
        acc += 0.5 * (s[k] + s[k + 1]) * (t[k + 1] - t[k]);
    return acc;
}

void require_dense(const Trace& trace) {
    if (trace.cadence != 1)
        throw ValidationError("audit needs a dense trace (cadence 1); re-run with --dense");
    if (trace.t.size() < 2)
        throw ValidationError("audit trace has fewer than two levels");
}

/// Per-level geometry shared by the two space-time audits.
struct LevelFields {
    std::vector<double> u, ur, ut;
    void compute(const std::vector<double>& v, const std::vector<double>& w,
                 const RadialGrid& g) {
        const std::size_t n = g.n;
        u.resize(n);
        ur.resize(n);
        ut.resize(n);
        const std::vector<double> vr = radial_derivative(v, g);
        u[0] = u_at_origin(v, g);
        ur[0] = 0.0;
        ut[0] = (4.0 * w[1] - w[2]) / (2.0 * g.dr);
        for (std::size_t i = 1; i < n; ++i) {
            const double r = g.r(i);
            u[i] = v[i] / r;
            ur[i] = (vr[i] - u[i]) / r;
            ut[i] = w[i] / r;
        }
    }
};

/// 4 pi int f r^2 dr over the whole grid (plain trapezoid).
double space_integral(const std::vector<double>& f, const RadialGrid& g) {
    double acc = 0.0;
    const std::size_t last = g.n - 1;
    for (std::size_t i = 0; i <= last; ++i) {
        const double w = (i == 0 || i == last) ? 0.5 : 1.0;
        acc += w * f[i] * g.r(i) * g.r(i);
    }
    return four_pi * acc * g.dr;
}

} // namespace

EnergyIdentityReport energy_identity_residual(const RunSeries& series) {
    if (series.t.empty())
        throw ValidationError("energy_identity_residual: empty series");
    EnergyIdentityReport rep;
    rep.t = series.t;
    rep.residual.resize(series.t.size());
    const double E0 = series.rec[0].E;
    for (std::size_t k = 0; k < series.t.size(); ++k) {
        rep.residual[k] = series.rec[k].E - E0 + series.A[k];
        rep.max_abs = std::max(rep.max_abs, std::fabs(rep.residual[k]));
    }
    rep.max_rel = E0 != 0.0 ? rep.max_abs / std::fabs(E0) : 0.0;
    return rep;
}

MultiplierLedger multiplier_terms(const Trace& trace, const Cutoff& phi,
                                  const DampingProfile& damping, const RadialGrid& g) {
    require_dense(trace);
    if (phi.kind != CutoffKind::phi)
        throw ValidationError("multiplier_terms: expected the interior cutoff phi");
    if (damping.alpha.size() != g.n)
        throw ValidationError("multiplier_terms: damping profile does not match grid");

    const std::size_t levels = trace.t.size();
    const std::size_t n = g.n;
    LevelFields F;
    std::vector<double> f_bnd(n), f_II(n), f_IV(n), f_V1(n), f_V2(n), f_VI(n), flux(n);
    std::vector<double> sII(levels), sIV(levels), sV1(levels), sV2(levels), sVI(levels),
        sIII(levels);
    double bnd_first = 0.0, bnd_last = 0.0;

    for (std::size_t k = 0; k < levels; ++k) {
        F.compute(trace.v[k], trace.w[k], g);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = g.r(i);
            const double u = F.u[i], ur = F.ur[i], ut = F.ut[i];
            const double u2 = u * u, ur2 = ur * ur, ut2 = ut * ut;
            const double u4 = u2 * u2;
            const double p = phi.value[i], dp = phi.deriv[i];
            const double xgp = r * dp; // x . grad phi
            const double mult = p * (r * ur + u);

            f_bnd[i] = ut * mult;
            f_II[i] = damping.alpha[i] * ut * mult;
            f_IV[i] = (r * ur + u) * (ur * dp) - 0.5 * xgp * (ur2 - ut2 + u2);
            f_V1[i] = -0.25 * p * u4;
            f_V2[i] = 0.25 * xgp * u4;
            f_VI[i] = 0.5 * p * (ur2 + ut2 - u2);
            // radial component of the divergence flux, times r^2
            const double Gr = -mult * ur + 0.5 * p * r * (ur2 + u2 - ut2) - 0.25 * p * r * u4;
            flux[i] = r * r * Gr;
        }
        const double b = space_integral(f_bnd, g);
        if (k == 0) bnd_first = b;
        if (k + 1 == levels) bnd_last = b;
        sII[k] = space_integral(f_II, g);
        sIV[k] = space_integral(f_IV, g);
        sV1[k] = space_integral(f_V1, g);
        sV2[k] = space_integral(f_V2, g);
        sVI[k] = space_integral(f_VI, g);
        const std::vector<double> dflux = radial_derivative(flux, g);
        sIII[k] = four_pi * trapezoid(dflux, g, 0, n - 1);
    }

    MultiplierLedger led;
    led.I = bnd_last - bnd_first;
    led.II = time_trapezoid(trace.t, sII);
    led.III = time_trapezoid(trace.t, sIII);
    led.IV = time_trapezoid(trace.t, sIV);
    led.V1 = time_trapezoid(trace.t, sV1);
    led.V2 = time_trapezoid(trace.t, sV2);
    led.VI = time_trapezoid(trace.t, sVI);
    led.sum = led.I + led.II + led.III + led.IV + led.V1 + led.V2 + led.VI;
    return led;
}

double psi_identity_residual(const Trace& trace, const Cutoff& psi,
                             const DampingProfile& damping, const RadialGrid& g) {
    require_dense(trace);
    if (psi.kind != CutoffKind::psi)
        throw ValidationError("psi_identity_residual: expected the exterior cutoff psi");
    if (damping.alpha.size() != g.n)
        throw ValidationError("psi_identity_residual: damping profile does not match grid");

    const std::size_t levels = trace.t.size();
    const std::size_t n = g.n;
    LevelFields F;
    std::vector<double> f1(n), f2(n), fa(n), fb(n);
    std::vector<double> s1(levels), s2(levels), sa(levels);
    double b_first = 0.0, b_last = 0.0;

    for (std::size_t k = 0; k < levels; ++k) {
        F.compute(trace.v[k], trace.w[k], g);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = F.u[i], ur = F.ur[i], ut = F.ut[i];
            const double u2 = u * u;
            f1[i] = psi.value[i] * (ur * ur + u2 - u2 * u2);
            f2[i] = 0.5 * psi.lap[i] * u2 + psi.value[i] * ut * ut;
            fa[i] = psi.value[i] * damping.alpha[i] * u * ut;
            fb[i] = psi.value[i] * u * ut;
        }
        s1[k] = space_integral(f1, g);
        s2[k] = space_integral(f2, g);
        sa[k] = space_integral(fa, g);
        const double b = space_integral(fb, g);
        if (k == 0) b_first = b;
        if (k + 1 == levels) b_last = b;
    }

    return time_trapezoid(trace.t, s1) - time_trapezoid(trace.t, s2) + (b_last - b_first) +
           time_trapezoid(trace.t, sa);
}

namespace {
MorawetzEstimate make_estimate(double lhs, double bracket, double eps_factor) {
    MorawetzEstimate e;
    e.lhs = lhs;
    e.bracket = bracket;
    const double den = eps_factor * bracket;
    if (den > 0.0) {
        e.constant = lhs / den;
        e.applicable = true;
    }
    return e;
}
} // namespace

MorawetzReport morawetz_report(const RunSeries& series) {
    if (series.outcome != Outcome::global)
        throw ValidationError("morawetz_report: estimates apply to global runs only");
    if (series.t.size() < 2)
        throw ValidationError("morawetz_report: series needs at least two samples");

    const std::size_t m = series.t.size();
    auto time_int = [&](auto&& field) {
        std::vector<double> s(m);
        for (std::size_t k = 0; k < m; ++k) s[k] = field(series.rec[k]);
        return time_trapezoid(series.t, s);
    };

    const double u2_4R = time_int([](const FunctionalRecord& r) { return r.restricted.u2_in_4R; });
    const double u2_2R = time_int([](const FunctionalRecord& r) { return r.restricted.u2_in_2R; });
    const double g_ann24 =
        time_int([](const FunctionalRecord& r) { return r.restricted.grad2_ann_2R_4R; });
    const double g_annR2 =
        time_int([](const FunctionalRecord& r) { return r.restricted.grad2_ann_R_2R; });
    const double g_in2R =
        time_int([](const FunctionalRecord& r) { return r.restricted.grad2_in_2R; });
    const double g_out2R =
        time_int([](const FunctionalRecord& r) { return r.restricted.grad2_out_2R; });
    const double h1_out = time_int([](const FunctionalRecord& r) { return r.restricted.h1_out_2R; });
    const double u4_in = time_int([](const FunctionalRecord& r) { return r.restricted.u4_in_2R; });
    const double u4_out = time_int([](const FunctionalRecord& r) { return r.restricted.u4_out_2R; });

    MorawetzReport rep;
    rep.eps = series.eps0;
    rep.T = series.t.back();
    const double A_T = series.A.back();
    const double E_T = series.rec.back().E;

    rep.u4_interior = make_estimate(u4_in, u2_4R + g_ann24, rep.eps);
    rep.grad_interior = make_estimate(g_in2R, A_T + E_T + u2_4R + g_ann24, 1.0);
    rep.u4_exterior = make_estimate(u4_out, u2_2R + g_out2R, rep.eps);
    rep.h1_exterior = make_estimate(h1_out, A_T + E_T + u2_2R + rep.eps * g_annR2, 1.0);
    return rep;
}

std::string to_string(ObservationFlag f) {
    switch (f) {
    case ObservationFlag::ok: return "ok";
    case ObservationFlag::unbounded: return "unbounded";
    case ObservationFlag::degenerate: return "degenerate";
    }
    return "?";
}

ObservationReport observation_report(const RunSeries& series,
                                     const std::vector<double>& horizons) {
    if (series.outcome != Outcome::global)
        throw ValidationError("observation_report: needs a global run");
    if (series.t.size() < 2)
        throw ValidationError("observation_report: series needs at least two samples");

    // running time-integral of the 4R-ball mass at every sample
    const std::size_t m = series.t.size();
    std::vector<double> l2int(m, 0.0);
    for (std::size_t k = 1; k < m; ++k) {
        l2int[k] = l2int[k - 1] + 0.5 *
                                      (series.rec[k - 1].restricted.u2_in_4R +
                                       series.rec[k].restricted.u2_in_4R) *
                                      (series.t[k] - series.t[k - 1]);
    }

    ObservationReport rep;
    for (const double Treq : horizons) {
        if (!(Treq > 0.0) || Treq > series.t.back() * (1.0 + 1e-9))
            throw ValidationError("observation horizon outside the run: T = " +
                                  std::to_string(Treq));
        // nearest sample
        std::size_t best = 0;
        for (std::size_t k = 1; k < m; ++k)
            if (std::fabs(series.t[k] - Treq) < std::fabs(series.t[best] - Treq)) best = k;

        ObservationPoint p;
        p.T_requested = Treq;
        p.T = series.t[best];
        p.E_T = series.rec[best].E;
        p.A_T = series.A[best];
        p.l2_time_integral = l2int[best];
        const double weak_den = p.A_T + p.l2_time_integral;
        if (p.A_T > 0.0) {
            p.strong_ratio = p.E_T / p.A_T;
            p.flag = ObservationFlag::ok;
        } else {
            p.flag = p.E_T > 0.0 ? ObservationFlag::unbounded : ObservationFlag::degenerate;
        }
        if (weak_den > 0.0) p.weak_ratio = p.E_T / weak_den;
        rep.points.push_back(p);
    }
    return rep;
}

DecayFit fit_decay(const RunSeries& series, double t_a, double t_b) {
    if (!(t_a < t_b)) throw ValidationError("fit_decay: need t_a < t_b");
    if (t_a < series.t.front() - 1e-9 || t_b > series.t.back() + 1e-9)
        throw ValidationError("fit_decay: window outside the run");

    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < series.t.size(); ++k) {
        const double t = series.t[k];
        if (t < t_a - 1e-12 || t > t_b + 1e-12) continue;
        const double E = series.rec[k].E;
        if (!(E > 0.0))
            throw ValidationError("fit_decay: nonpositive energy inside the window at t = " +
                                  std::to_string(t));
        xs.push_back(t);
        ys.push_back(std::log(E));
    }
    if (xs.size() < 2) throw ValidationError("fit_decay: window contains fewer than two samples");

    const auto msize = static_cast<double>(xs.size());
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        xbar += xs[k];
        ybar += ys[k];
    }
    xbar /= msize;
    ybar /= msize;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double dx = xs[k] - xbar, dy = ys[k] - ybar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double slope = sxy / sxx;

    DecayFit fit;
    fit.t_a = t_a;
    fit.t_b = t_b;
    fit.rate = -slope;
    fit.coefficient = std::exp(ybar - slope * xbar);
    if (syy <= 1e-18 * msize) {
        fit.degenerate = true;
        fit.r2 = 0.0;
    } else {
        double ssres = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const double pred = ybar + slope * (xs[k] - xbar);
            const double d = ys[k] - pred;
            ssres += d * d;
        }
        fit.r2 = 1.0 - ssres / syy;
    }
    return fit;
}

} // namespace dkg
