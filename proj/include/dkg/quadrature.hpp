#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dkg/grid.hpp"

namespace dkg {

/// Radial interval [a, b], a subset of [0, r_max].
struct RadialInterval {
    double a = 0.0;
    double b = 0.0;
};

/// Snap an interval to grid nodes (nearest node for each endpoint).  Snapping
/// makes complementary regions tile the domain exactly, so interior plus
/// exterior integrals reproduce the full integral to round-off.
std::pair<std::size_t, std::size_t> snap_region(const RadialGrid& g, RadialInterval iv);

/// Trapezoid sum of node samples s over node index range [i0, i1]:
/// dr * (s_i0/2 + s_{i0+1} + ... + s_{i1-1} + s_i1/2).  Returns 0 when
/// i1 <= i0.  No weighting is applied; callers pre-weight.
double trapezoid(const std::vector<double>& s, const RadialGrid& g,
                 std::size_t i0, std::size_t i1);

/// Integral of a radial function over a region of R^3:
/// 4 pi * integral of f(r) r^2 dr over the snapped region, by trapezoid.
/// f holds node samples of the radial profile.  Non-finite samples inside the
/// region raise NumericError carrying the node index.
double integrate_radial(const std::vector<double>& f, const RadialGrid& g, RadialInterval region);

/// Whole-domain version of the above.
double integrate_radial(const std::vector<double>& f, const RadialGrid& g);

} // namespace dkg
