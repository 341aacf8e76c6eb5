#pragma once

namespace dkg::detail {

/// Quintic smoothstep s(x) = 6x^5 - 15x^4 + 10x^3 clamped to [0, 1].
/// s(0) = 0, s(1) = 1, and s', s'' vanish at both ends, so profiles glued
/// from it are C^2 across the joins.
inline double smoothstep(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

inline double smoothstep_d1(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double y = x * (1.0 - x);
    return 30.0 * y * y;
}

inline double smoothstep_d2(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
}

/// Rising ramp on [a, b]: 0 left of a, 1 right of b.
inline double ramp_up(double r, double a, double b) {
    return smoothstep((r - a) / (b - a));
}

inline double ramp_up_d1(double r, double a, double b) {
    const double w = b - a;
    return smoothstep_d1((r - a) / w) / w;
}

inline double ramp_up_d2(double r, double a, double b) {
    const double w = b - a;
    return smoothstep_d2((r - a) / w) / (w * w);
}

} // namespace dkg::detail
