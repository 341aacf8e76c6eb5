#include "dkg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dkg/errors.hpp"

namespace dkg {

std::pair<std::size_t, std::size_t> snap_region(const RadialGrid& g, RadialInterval iv) {
    if (!(iv.a >= 0.0) || !(iv.b <= g.r_max * (1.0 + 1e-12)) || !(iv.a <= iv.b))
        throw ValidationError("snap_region: need 0 <= a <= b <= r_max");
    return {nearest_node(g, iv.a), nearest_node(g, iv.b)};
}

double trapezoid(const std::vector<double>& s, const RadialGrid& g,
                 std::size_t i0, std::size_t i1) {
    if (i1 <= i0) return 0.0;
    double acc = 0.5 * (s[i0] + s[i1]);
    for (std::size_t i = i0 + 1; i < i1; ++i) acc += s[i];
    return acc * g.dr;
}

double integrate_radial(const std::vector<double>& f, const RadialGrid& g, RadialInterval region) {
    if (f.size() != g.n)
        throw ValidationError("integrate_radial: sample count does not match grid");
    const auto [i0, i1] = snap_region(g, region);
    if (i1 <= i0) return 0.0;
    double acc = 0.0;
    for (std::size_t i = i0; i <= i1; ++i) {
        if (!std::isfinite(f[i]))
            throw NumericError("non-finite integrand at node " + std::to_string(i),
                               static_cast<std::ptrdiff_t>(i));
        const double w = (i == i0 || i == i1) ? 0.5 : 1.0;
        acc += w * f[i] * g.r(i) * g.r(i);
    }
    return 4.0 * std::numbers::pi * acc * g.dr;
}

double integrate_radial(const std::vector<double>& f, const RadialGrid& g) {
    return integrate_radial(f, g, RadialInterval{0.0, g.r_max});
}

} // namespace dkg
