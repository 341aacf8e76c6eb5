#pragma once

#include <cstddef>
#include <vector>

namespace dkg {

/// Uniform radial grid on [0, r_max] with n nodes, r_i = i * dr,
/// dr = r_max / (n - 1).  Node 0 sits at the origin, node n-1 at r_max.
struct RadialGrid {
    double r_max = 0.0;
    std::size_t n = 0;
    double dr = 0.0;

    double r(std::size_t i) const { return dr * static_cast<double>(i); }
    std::vector<double> nodes() const;

    bool operator==(const RadialGrid&) const = default;
};

/// Build a grid after validating r_max > 0 and n >= 16.
RadialGrid make_grid(double r_max, std::size_t n);

/// Index of the grid node nearest to radius r (clamped to [0, n-1]).
std::size_t nearest_node(const RadialGrid& g, double r);

/// Radial derivative of node samples: 4th-order centred stencil in the
/// interior, 2nd-order centred at i = 1 and i = n-2, 2nd-order one-sided at
/// the ends.  Used for gradient integrands and cutoff checks.
std::vector<double> radial_derivative(const std::vector<double>& f, const RadialGrid& g);

/// Second radial derivative, 4th-order centred in the interior with the same
/// order reduction near the ends as radial_derivative.
std::vector<double> radial_second_derivative(const std::vector<double>& f, const RadialGrid& g);

} // namespace dkg
