#include "dkg/functionals.hpp"

#include <cmath>
#include <numbers>

#include "dkg/errors.hpp"
#include "dkg/quadrature.hpp"

namespace dkg {

namespace {
constexpr double four_pi = 4.0 * std::numbers::pi;

/// 4 pi * trapezoid of a pre-weighted (v-form) integrand over node range.
double line_integral(const std::vector<double>& s, const RadialGrid& g,
                     std::size_t i0, std::size_t i1) {
    return four_pi * trapezoid(s, g, i0, i1);
}
} // namespace

void AuditRadii::validate(const RadialGrid& g) const {
    if (!(R > 0.0)) throw ValidationError("audit radii: need R > 0");
    if (!(r1 >= R) || !(r2 > r1))
        throw ValidationError("audit radii: need R <= r1 < r2");
    if (!(r2 <= g.r_max))
        throw ValidationError("audit radii: need r2 <= r_max");
    if (!(4.0 * R <= g.r_max))
        throw ValidationError("audit radii: need 4R <= r_max for restricted integrals");
}

FunctionalRecord evaluate_functionals(const FieldState& s, const DampingProfile& damping,
                                      const RadialGrid& g, const AuditRadii& radii) {
    validate_state(s, g);
    radii.validate(g);
    if (damping.alpha.size() != g.n)
        throw ValidationError("evaluate_functionals: damping profile does not match grid");

    const std::size_t n = g.n;
    const std::vector<double> vr = radial_derivative(s.v, g);

    std::vector<double> a_u2(n), a_ut2(n), a_u4(n), a_grad(n), a_damp(n);
    a_u4[0] = 0.0;
    a_grad[0] = 0.0; // limit of (v_r - v/r)^2 at the origin
    for (std::size_t i = 0; i < n; ++i) {
        a_u2[i] = s.v[i] * s.v[i];
        a_ut2[i] = s.w[i] * s.w[i];
        a_damp[i] = damping.alpha[i] * a_ut2[i];
        if (i >= 1) {
            const double r = g.r(i);
            const double u2 = a_u2[i];
            a_u4[i] = u2 * u2 / (r * r);
            const double d = vr[i] - s.v[i] / r;
            a_grad[i] = d * d;
        }
    }

    FunctionalRecord rec;
    const std::size_t last = n - 1;
    rec.l2 = line_integral(a_u2, g, 0, last);
    rec.ut2 = line_integral(a_ut2, g, 0, last);
    rec.L4 = line_integral(a_u4, g, 0, last);
    rec.grad2 = line_integral(a_grad, g, 0, last);
    rec.alpha_ut2 = line_integral(a_damp, g, 0, last);

    rec.E_L = 0.5 * (rec.ut2 + rec.grad2 + rec.l2);
    rec.E = rec.E_L - 0.25 * rec.L4;
    rec.J = 0.5 * (rec.grad2 + rec.l2) - 0.25 * rec.L4;
    rec.K = (rec.grad2 + rec.l2) - rec.L4;

    const std::size_t iR = nearest_node(g, radii.R);
    const std::size_t i2R = nearest_node(g, 2.0 * radii.R);
    const std::size_t i4R = nearest_node(g, 4.0 * radii.R);

    RestrictedIntegrals& ri = rec.restricted;
    ri.u2_in_R = line_integral(a_u2, g, 0, iR);
    ri.u2_in_2R = line_integral(a_u2, g, 0, i2R);
    ri.u2_in_4R = line_integral(a_u2, g, 0, i4R);
    ri.grad2_in_2R = line_integral(a_grad, g, 0, i2R);
    ri.grad2_ann_R_2R = line_integral(a_grad, g, iR, i2R);
    ri.grad2_ann_2R_4R = line_integral(a_grad, g, i2R, i4R);
    ri.grad2_out_2R = line_integral(a_grad, g, i2R, last);
    ri.h1_out_2R = ri.grad2_out_2R + line_integral(a_u2, g, i2R, last);
    ri.u4_in_2R = line_integral(a_u4, g, 0, i2R);
    ri.u4_out_2R = line_integral(a_u4, g, i2R, last);
    return rec;
}

double gn_ratio(const FieldState& s, const RadialGrid& g) {
    const DampingProfile zero_damping{DampingShape::none, 0.0, 0.0, 0.0,
                                      std::vector<double>(g.n, 0.0)};
    // radii play no role in the ratio; use defaults scaled into the domain
    const FunctionalRecord rec =
        evaluate_functionals(s, zero_damping, g, AuditRadii::from_R(g.r_max / 10.0));
    const double h1 = rec.grad2 + rec.l2;
    if (!(rec.l2 > 0.0) || !(h1 > 0.0))
        throw DegenerateInputError("gn_ratio: field is identically zero");
    return rec.L4 / (h1 * rec.l2);
}

H1Norms norms_from_u(const std::vector<double>& u, const RadialGrid& g) {
    if (u.size() != g.n)
        throw ValidationError("norms_from_u: sample count does not match grid");
    const std::vector<double> ur = radial_derivative(u, g);
    std::vector<double> f_u2(g.n), f_grad(g.n), f_u4(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        f_u2[i] = u[i] * u[i];
        f_grad[i] = ur[i] * ur[i];
        f_u4[i] = f_u2[i] * f_u2[i];
    }
    H1Norms n;
    n.l2 = integrate_radial(f_u2, g);
    n.grad2 = integrate_radial(f_grad, g);
    n.l4 = integrate_radial(f_u4, g);
    return n;
}

double gn_ratio_u(const std::vector<double>& u, const RadialGrid& g) {
    const H1Norms n = norms_from_u(u, g);
    const double h1 = n.grad2 + n.l2;
    if (!(n.l2 > 0.0) || !(h1 > 0.0))
        throw DegenerateInputError("gn_ratio_u: field is identically zero");
    return n.l4 / (h1 * n.l2);
}

} // namespace dkg
