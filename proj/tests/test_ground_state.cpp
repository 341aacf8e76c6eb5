#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dkg/errors.hpp"
#include "dkg/functionals.hpp"
#include "dkg/grid.hpp"
#include "dkg/ground_state.hpp"
#include "oracles.hpp"

using namespace dkg;

namespace {

// frozen reference values for the default tolerance 1e-9 on r_max = 30,
// n = 3001 (regression anchors; independently confirmed by the Verlet
// shooter in oracles.hpp)
constexpr double frozen_q0 = 4.3373876794779775;
constexpr double frozen_h0 = 18.897252527992212;
constexpr double frozen_l2 = 18.89725131702652;
constexpr double frozen_grad2 = 56.691756346928941;
constexpr double frozen_l4 = 75.589005215942066;
constexpr double frozen_graft = 6.1808164592366026;
constexpr double frozen_tail = 2.7128141127560568;
constexpr double frozen_gn = 0.05291774718120812;

const GroundState& reference_gs() {
    static const GroundState gs = shoot_ground_state(make_grid(30.0, 3001));
    return gs;
}

} // namespace

TEST_CASE("shooting reproduces the frozen center value and threshold") {
    const GroundState& gs = reference_gs();
    CHECK(gs.q0 == doctest::Approx(frozen_q0).epsilon(1e-9));
    CHECK(gs.h0 == doctest::Approx(frozen_h0).epsilon(1e-10));
    CHECK(gs.l2 == doctest::Approx(frozen_l2).epsilon(1e-10));
    CHECK(gs.grad2 == doctest::Approx(frozen_grad2).epsilon(1e-10));
    CHECK(gs.l4 == doctest::Approx(frozen_l4).epsilon(1e-10));
    CHECK(gs.graft_radius == doctest::Approx(frozen_graft).epsilon(1e-12));
    CHECK(gs.tail_coeff == doctest::Approx(frozen_tail).epsilon(1e-6));
    CHECK(gs.tol == 1e-9);
}

TEST_CASE("independent velocity-Verlet shooter confirms the center value") {
    const double ref = oracles::shoot_center_value_reference(1e-4, 1e-10);
    CHECK(std::fabs(ref - reference_gs().q0) <= 1e-6);
}

TEST_CASE("center value is independent of the output grid") {
    const GroundState a = shoot_ground_state(make_grid(16.0, 801));
    CHECK(a.q0 == reference_gs().q0); // bisection never touches the grid
    // the threshold is a quadrature value, so it only agrees approximately
    CHECK(a.h0 == doctest::Approx(reference_gs().h0).epsilon(1e-6));
}

TEST_CASE("profile is positive, decreasing, with the exact exponential tail") {
    const GroundState& gs = reference_gs();
    const RadialGrid& g = gs.grid;
    REQUIRE(gs.q.size() == g.n);
    REQUIRE(gs.qp.size() == g.n);
    CHECK(gs.q[0] == gs.q0);
    for (std::size_t i = 0; i < g.n; ++i) CHECK(gs.q[i] > 0.0);
    for (std::size_t i = 1; i < g.n; ++i) CHECK(gs.q[i] < gs.q[i - 1]);
    // beyond the graft window the samples are exactly c e^{-r} / r
    for (std::size_t i = nearest_node(g, gs.graft_radius + 1.5); i < g.n; ++i) {
        const double r = g.r(i);
        const double tail = gs.tail_coeff * std::exp(-r) / r;
        CHECK(gs.q[i] == doctest::Approx(tail).epsilon(1e-12));
    }
}

TEST_CASE("certified substitution residual meets its bound") {
    const GroundState& gs = reference_gs();
    CHECK(gs.residual_sup > 0.0);
    CHECK(gs.residual_sup <= 1e3 * gs.tol);
    // the coarse node-grid check is far weaker but must stay sane
    const double coarse = ground_state_residual(gs.q, gs.grid, gs.graft_radius);
    CHECK(coarse <= 1e-3);
}

TEST_CASE("verification report: stationarity, identities, quartic ratio") {
    const GroundState& gs = reference_gs();
    const GroundStateReport rep = verify_ground_state(gs);
    CHECK(rep.q0 == gs.q0);
    CHECK(rep.stationary);
    CHECK(rep.K_rel <= 1e-3);
    CHECK(rep.h0_identity_rel <= 1e-3);
    CHECK(rep.pohozaev_rel <= 1e-3);
    CHECK(rep.residual_sup == gs.residual_sup);
    CHECK(rep.gn == doctest::Approx(frozen_gn).epsilon(1e-9));
    // the quartic integral of a stationary profile equals its H1 norm, so
    // the ratio collapses to 1 / l2
    CHECK(rep.gn == doctest::Approx(1.0 / rep.l2).epsilon(1e-6));
    CHECK(rep.J == doctest::Approx(gs.h0).epsilon(1e-14));
}

TEST_CASE("rescaled profiles are flagged non-stationary with the right sign of K") {
    const GroundState& gs = reference_gs();
    for (double lam : {1.01, 0.99}) {
        GroundState scaled = gs;
        for (auto& x : scaled.q) x *= lam;
        for (auto& x : scaled.qp) x *= lam;
        const GroundStateReport rep = verify_ground_state(scaled);
        CHECK_FALSE(rep.stationary);
        if (lam > 1.0)
            CHECK(rep.K < 0.0);
        else
            CHECK(rep.K > 0.0);
    }
}

TEST_CASE("norm scaling identities for the rescaled family") {
    const GroundState& gs = reference_gs();
    const RadialGrid& g = gs.grid;
    for (double lam : {0.5, 1.3, 2.0}) {
        std::vector<double> u(g.n);
        for (std::size_t i = 0; i < g.n; ++i) u[i] = lam * gs.q[i];
        const H1Norms n = norms_from_u(u, g);
        const double scale = lam * lam * std::max(1.0, lam * lam) * gs.l4;
        // K[lam Q] = (lam^2 - lam^4) int Q^4, using stationarity
        const double k_pred = (lam * lam - lam * lam * lam * lam) * gs.l4;
        CHECK(std::fabs(nehari(n) - k_pred) <= 1e-6 * scale);
        // J[lam Q] = (lam^2/2 - lam^4/4) ||Q||_H1^2 = (2 lam^2 - lam^4) h0
        const double j_pred = (2.0 * lam * lam - lam * lam * lam * lam) * gs.h0;
        CHECK(std::fabs(static_energy(n) - j_pred) <= 1e-6 * scale);
    }
}

TEST_CASE("tightening the tolerance moves the center value by at most the old one") {
    const RadialGrid g = make_grid(16.0, 801);
    ShootOptions a;
    a.tol = 1e-8;
    ShootOptions b;
    b.tol = 1e-9;
    const double qa = shoot_ground_state(g, a).q0;
    const double qb = shoot_ground_state(g, b).q0;
    CHECK(std::fabs(qa - qb) <= 10.0 * a.tol);
}

TEST_CASE("different valid brackets land on the same center value") {
    const RadialGrid g = make_grid(16.0, 801);
    ShootOptions a; // default [0.1, 20]
    ShootOptions b;
    b.bracket_lo = 1.0;
    b.bracket_hi = 8.0;
    ShootOptions c;
    c.bracket_lo = 4.0;
    c.bracket_hi = 5.0;
    const double qa = shoot_ground_state(g, a).q0;
    const double qb = shoot_ground_state(g, b).q0;
    const double qc = shoot_ground_state(g, c).q0;
    CHECK(std::fabs(qa - qb) <= 2.0 * a.tol);
    CHECK(std::fabs(qa - qc) <= 2.0 * a.tol);
}

TEST_CASE("halving the integrator step leaves the center value within tolerance") {
    const RadialGrid g = make_grid(16.0, 801);
    ShootOptions fine;
    fine.substep = 0.001;
    const double qa = shoot_ground_state(g, {}).q0;
    const double qb = shoot_ground_state(g, fine).q0;
    CHECK(std::fabs(qa - qb) <= 2e-9);
}

TEST_CASE("bad brackets and bad grids are rejected") {
    const RadialGrid g = make_grid(16.0, 801);
    ShootOptions lo_crosses;
    lo_crosses.bracket_lo = 5.0; // already above the separatrix
    CHECK_THROWS_AS(shoot_ground_state(g, lo_crosses), SolverError);
    ShootOptions hi_stays;
    hi_stays.bracket_hi = 2.0; // below the separatrix
    CHECK_THROWS_AS(shoot_ground_state(g, hi_stays), SolverError);
    ShootOptions bad_tol;
    bad_tol.tol = 0.0;
    CHECK_THROWS_AS(shoot_ground_state(g, bad_tol), ValidationError);
    // the tail graft needs room beyond the blend window
    CHECK_THROWS_AS(shoot_ground_state(make_grid(7.0, 351)), ValidationError);
}
