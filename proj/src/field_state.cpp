#include "dkg/field_state.hpp"

#include <cmath>
#include <string>

#include "dkg/errors.hpp"

namespace dkg {

FieldState zero_state(const RadialGrid& g, double t) {
    FieldState s;
    s.t = t;
    s.v.assign(g.n, 0.0);
    s.w.assign(g.n, 0.0);
    return s;
}

void validate_state(const FieldState& s, const RadialGrid& g) {
    if (s.v.size() != g.n || s.w.size() != g.n)
        throw ValidationError("state size does not match grid");
    for (std::size_t i = 0; i < g.n; ++i) {
        if (!std::isfinite(s.v[i]))
            throw NumericError("non-finite v sample at node " + std::to_string(i),
                               static_cast<std::ptrdiff_t>(i));
        if (!std::isfinite(s.w[i]))
            throw NumericError("non-finite w sample at node " + std::to_string(i),
                               static_cast<std::ptrdiff_t>(i));
    }
    if (s.v.front() != 0.0 || s.v.back() != 0.0)
        throw ValidationError("state violates v(0) = v(r_max) = 0");
}

double u_at_origin(const std::vector<double>& v, const RadialGrid& g) {
    return (4.0 * v[1] - v[2]) / (2.0 * g.dr);
}

double sup_abs_u(const std::vector<double>& v, const RadialGrid& g) {
    double m = std::fabs(u_at_origin(v, g));
    if (std::isnan(m)) return m;
    for (std::size_t i = 1; i < g.n; ++i) {
        const double a = std::fabs(v[i]) / g.r(i);
        if (std::isnan(a)) return a;
        if (a > m) m = a;
    }
    return m;
}

std::vector<double> u_samples(const std::vector<double>& v, const RadialGrid& g) {
    std::vector<double> u(g.n);
    u[0] = u_at_origin(v, g);
    for (std::size_t i = 1; i < g.n; ++i) u[i] = v[i] / g.r(i);
    return u;
}

} // namespace dkg
