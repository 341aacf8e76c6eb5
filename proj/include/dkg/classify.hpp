#pragma once

#include <string>
#include <vector>

#include "dkg/field_state.hpp"
#include "dkg/functionals.hpp"
#include "dkg/grid.hpp"

namespace dkg {

/// Payne-Sattinger sets below the static threshold h0 = J[Q]:
///   ps_plus  : E < h0 and K >= 0   (global + decay side)
///   ps_minus : E < h0 and K <  0   (blowup side)
///   not_covered : E >= h0          (the dichotomy makes no claim)
/// Comparisons are exact; no tolerance is applied.
enum class PsLabel { ps_plus, ps_minus, not_covered };

std::string to_string(PsLabel l);

struct Classification {
    PsLabel label = PsLabel::not_covered;
    double E = 0.0;
    double K = 0.0;
    double h0 = 0.0;
};

/// Classify plain radial data (u0, u1) given the threshold h0.  Energy and
/// K go through the same discrete operators that produced h0 from the
/// ground-state samples, so classify(Q, 0) sits exactly on E == h0 and
/// lands in not_covered.
Classification classify(const std::vector<double>& u0, const std::vector<double>& u1,
                        double h0, const RadialGrid& g);

/// Classify a trajectory snapshot from its functional record.
PsLabel classify_record(const FunctionalRecord& rec, double h0);

} // namespace dkg
