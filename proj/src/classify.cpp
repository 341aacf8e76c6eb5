#include "dkg/classify.hpp"

#include <cmath>

#include "dkg/errors.hpp"
#include "dkg/quadrature.hpp"

namespace dkg {

std::string to_string(PsLabel l) {
    switch (l) {
    case PsLabel::ps_plus: return "PS_plus";
    case PsLabel::ps_minus: return "PS_minus";
    case PsLabel::not_covered: return "NotCovered";
    }
    return "?";
}

Classification classify(const std::vector<double>& u0, const std::vector<double>& u1,
                        double h0, const RadialGrid& g) {
    if (u0.size() != g.n || u1.size() != g.n)
        throw ValidationError("classify: sample count does not match grid");
    for (std::size_t i = 0; i < g.n; ++i) {
        if (!std::isfinite(u0[i]) || !std::isfinite(u1[i]))
            throw NumericError("classify: non-finite sample", static_cast<std::ptrdiff_t>(i));
    }
    if (!(h0 > 0.0))
        throw ValidationError("classify: threshold h0 must be positive");

    const H1Norms n = norms_from_u(u0, g);
    std::vector<double> f_ut2(g.n);
    for (std::size_t i = 0; i < g.n; ++i) f_ut2[i] = u1[i] * u1[i];
    const double ut2 = integrate_radial(f_ut2, g);

    Classification c;
    c.h0 = h0;
    c.K = nehari(n);
    // same expression as static_energy(), with the kinetic term added inside
    // the same parenthesis, so that ut2 == 0 reproduces it bitwise
    c.E = 0.5 * (ut2 + (n.grad2 + n.l2)) - 0.25 * n.l4;
    if (c.E < h0)
        c.label = c.K >= 0.0 ? PsLabel::ps_plus : PsLabel::ps_minus;
    else
        c.label = PsLabel::not_covered;
    return c;
}

PsLabel classify_record(const FunctionalRecord& rec, double h0) {
    if (rec.E < h0) return rec.K >= 0.0 ? PsLabel::ps_plus : PsLabel::ps_minus;
    return PsLabel::not_covered;
}

} // namespace dkg
