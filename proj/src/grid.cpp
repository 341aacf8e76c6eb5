#include "dkg/grid.hpp"

#include <cmath>

#include "dkg/errors.hpp"

namespace dkg {

std::vector<double> RadialGrid::nodes() const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = r(i);
    return out;
}

RadialGrid make_grid(double r_max, std::size_t n) {
    if (!(r_max > 0.0) || !std::isfinite(r_max))
        throw ValidationError("make_grid: r_max must be positive and finite");
    if (n < 16)
        throw ValidationError("make_grid: need at least 16 nodes");
    RadialGrid g;
    g.r_max = r_max;
    g.n = n;
    g.dr = r_max / static_cast<double>(n - 1);
    return g;
}

std::size_t nearest_node(const RadialGrid& g, double r) {
    if (r <= 0.0) return 0;
    auto i = static_cast<long long>(std::llround(r / g.dr));
    if (i < 0) i = 0;
    if (i > static_cast<long long>(g.n - 1)) i = static_cast<long long>(g.n - 1);
    return static_cast<std::size_t>(i);
}

std::vector<double> radial_derivative(const std::vector<double>& f, const RadialGrid& g) {
    const std::size_t n = f.size();
    if (n != g.n || n < 5)
        throw ValidationError("radial_derivative: sample count does not match grid");
    const double dr = g.dr;
    std::vector<double> d(n);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dr);
    d[1] = (f[2] - f[0]) / (2.0 * dr);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * dr);
    d[n - 2] = (f[n - 1] - f[n - 3]) / (2.0 * dr);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dr);
    return d;
}

std::vector<double> radial_second_derivative(const std::vector<double>& f, const RadialGrid& g) {
    const std::size_t n = f.size();
    if (n != g.n || n < 6)
        throw ValidationError("radial_second_derivative: sample count does not match grid");
    const double dr2 = g.dr * g.dr;
    std::vector<double> d(n);
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / dr2;
    d[1] = (f[0] - 2.0 * f[1] + f[2]) / dr2;
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * dr2);
    d[n - 2] = (f[n - 3] - 2.0 * f[n - 2] + f[n - 1]) / dr2;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / dr2;
    return d;
}

} // namespace dkg
