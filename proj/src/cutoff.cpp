#include "dkg/cutoff.hpp"

#include <cmath>

#include "dkg/detail/smoothstep.hpp"
#include "dkg/errors.hpp"

namespace dkg {

namespace {

struct Profile {
    double val, d1, d2;
};

/// Descent 1 -> 0 across [r1, r2], raised to the 4th power.
Profile phi_profile(double r, double r1, double r2) {
    const double base = 1.0 - detail::ramp_up(r, r1, r2);
    const double b1 = -detail::ramp_up_d1(r, r1, r2);
    const double b2 = -detail::ramp_up_d2(r, r1, r2);
    const double b_sq = base * base;
    return Profile{b_sq * b_sq, 4.0 * b_sq * base * b1,
                   12.0 * b_sq * b1 * b1 + 4.0 * b_sq * base * b2};
}

/// Rise 0 -> 1 across [R, 2R]; kappa itself, before the 4th power.
Profile kappa_profile(double r, double R) {
    return Profile{detail::ramp_up(r, R, 2.0 * R), detail::ramp_up_d1(r, R, 2.0 * R),
                   detail::ramp_up_d2(r, R, 2.0 * R)};
}

Profile fourth_power(const Profile& p) {
    const double sq = p.val * p.val;
    return Profile{sq * sq, 4.0 * sq * p.val * p.d1,
                   12.0 * sq * p.d1 * p.d1 + 4.0 * sq * p.val * p.d2};
}

} // namespace

Cutoff build_cutoff(CutoffKind kind, const AuditRadii& radii, const RadialGrid& g) {
    radii.validate(g);
    if (kind == CutoffKind::psi && !(2.0 * radii.R <= g.r_max))
        throw ValidationError("build_cutoff: psi needs 2R <= r_max");

    Cutoff c;
    c.kind = kind;
    c.radii = radii;
    c.value.assign(g.n, 0.0);
    c.deriv.assign(g.n, 0.0);
    c.lap.assign(g.n, 0.0);

    for (std::size_t i = 0; i < g.n; ++i) {
        const double r = g.r(i);
        Profile p;
        if (kind == CutoffKind::phi) {
            p = phi_profile(r, radii.r1, radii.r2);
        } else {
            p = fourth_power(kappa_profile(r, radii.R));
        }
        c.value[i] = p.val;
        c.deriv[i] = p.d1;
        // Delta f = f'' + (2/r) f'; both cutoffs are flat near the origin
        // (r1 > 0, R > 0), so the r = 0 node carries a zero derivative.
        c.lap[i] = (r > 0.0) ? p.d2 + 2.0 * p.d1 / r : p.d2;
    }

    if (kind == CutoffKind::phi) {
        double worst = 0.0;
        for (std::size_t i = 0; i < g.n; ++i) {
            if (c.value[i] <= 1e-8) continue;
            const double ratio = std::fabs(c.deriv[i]) / std::pow(c.value[i], 7.0 / 8.0);
            if (ratio > worst) worst = ratio;
        }
        c.gamma = worst / 4.0;
    } else {
        double b1 = 0.0, b2 = 0.0, bt = 0.0;
        for (std::size_t i = 0; i < g.n; ++i) {
            const double r = g.r(i);
            const Profile k = kappa_profile(r, radii.R);
            const double klap = (r > 0.0) ? k.d2 + 2.0 * k.d1 / r : k.d2;
            b1 = std::max(b1, std::fabs(k.d1));
            b2 = std::max(b2, std::fabs(klap));
            bt = std::max(bt, std::fabs(c.lap[i]));
        }
        c.beta1 = b1;
        c.beta2 = b2;
        c.beta_tilde = bt;
    }
    return c;
}

} // namespace dkg
