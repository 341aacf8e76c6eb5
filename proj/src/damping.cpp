#include "dkg/damping.hpp"

#include <cmath>

#include "dkg/detail/smoothstep.hpp"
#include "dkg/errors.hpp"

namespace dkg {

namespace {

/// Invert the quintic smoothstep on [0, 1] by bisection (s is strictly
/// increasing there).  Used to place the ramp so that alpha(R) is exact.
double smoothstep_inverse(double y) {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (detail::smoothstep(mid) < y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double band_alpha(double r, double lambda0, double lambda1, double R, double ramp_start) {
    // rise to lambda1, hold until 3R, descend to lambda0 across [3R, 4R]
    if (r <= 3.0 * R) return lambda1 * detail::ramp_up(r, ramp_start, ramp_start + R);
    return lambda0 + (lambda1 - lambda0) * (1.0 - detail::ramp_up(r, 3.0 * R, 4.0 * R));
}

} // namespace

DampingProfile make_damping(DampingShape shape, double lambda0, double lambda1,
                            double R, const RadialGrid& g) {
    DampingProfile p;
    p.shape = shape;
    p.alpha.assign(g.n, 0.0);

    if (shape == DampingShape::none) {
        p.lambda0 = 0.0;
        p.lambda1 = 0.0;
        p.R = R > 0.0 ? R : 0.0;
        return p;
    }

    if (!(lambda0 > 0.0) || !std::isfinite(lambda0))
        throw ValidationError("make_damping: lambda0 must be positive");
    if (!(lambda1 >= lambda0) || !std::isfinite(lambda1))
        throw ValidationError("make_damping: need lambda1 >= lambda0");
    if (!(R > 0.0) || !(R < g.r_max))
        throw ValidationError("make_damping: need 0 < R < r_max");

    p.lambda0 = lambda0;
    p.lambda1 = lambda1;
    p.R = R;

    switch (shape) {
    case DampingShape::constant:
        for (std::size_t i = 0; i < g.n; ++i) p.alpha[i] = lambda1;
        break;
    case DampingShape::exterior_plateau: {
        const double xstar = smoothstep_inverse(lambda0 / lambda1);
        const double a = R * (1.0 - xstar); // ramp spans [a, a + R]
        for (std::size_t i = 0; i < g.n; ++i)
            p.alpha[i] = lambda1 * detail::ramp_up(g.r(i), a, a + R);
        break;
    }
    case DampingShape::exterior_band: {
        const double xstar = smoothstep_inverse(lambda0 / lambda1);
        const double a = R * (1.0 - xstar);
        for (std::size_t i = 0; i < g.n; ++i)
            p.alpha[i] = band_alpha(g.r(i), lambda0, lambda1, R, a);
        break;
    }
    case DampingShape::none:
        break; // handled above
    }

    check_exterior_bound(p, g);
    return p;
}

void check_exterior_bound(const DampingProfile& p, const RadialGrid& g) {
    if (p.shape == DampingShape::none) return;
    if (p.alpha.size() != g.n)
        throw ValidationError("check_exterior_bound: profile does not match grid");
    const double tol = 1e-12 * p.lambda1;
    for (std::size_t i = 0; i < g.n; ++i) {
        if (g.r(i) < p.R) continue;
        if (p.alpha[i] < p.lambda0 - tol || p.alpha[i] > p.lambda1 + tol)
            throw ValidationError("damping profile violates the exterior bound at r = " +
                                  std::to_string(g.r(i)));
    }
}

DampingShape damping_shape_from_string(std::string_view s) {
    if (s == "none") return DampingShape::none;
    if (s == "constant") return DampingShape::constant;
    if (s == "exterior_plateau") return DampingShape::exterior_plateau;
    if (s == "exterior_band") return DampingShape::exterior_band;
    throw ValidationError("unknown damping shape '" + std::string(s) +
                          "' (expected none|constant|exterior_plateau|exterior_band)");
}

std::string to_string(DampingShape s) {
    switch (s) {
    case DampingShape::none: return "none";
    case DampingShape::constant: return "constant";
    case DampingShape::exterior_plateau: return "exterior_plateau";
    case DampingShape::exterior_band: return "exterior_band";
    }
    return "?";
}

} // namespace dkg
