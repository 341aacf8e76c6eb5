#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dkg/errors.hpp"
#include "dkg/evolve.hpp"
#include "dkg/field_state.hpp"
#include "dkg/grid.hpp"
#include "dkg/ground_state.hpp"
#include "oracles.hpp"

using namespace dkg;

namespace {

RunConfig small_gaussian_run(double amplitude, DampingShape shape, double T) {
    RunConfig cfg;
    cfg.grid = make_grid(16.0, 801);
    cfg.shape = shape;
    cfg.lambda0 = shape == DampingShape::exterior_plateau ? 0.5 : 1.0;
    cfg.lambda1 = 1.0;
    cfg.R = 2.0;
    cfg.data = InitialData{DataFamily::gaussian, amplitude, 1.0, 1.0};
    cfg.T = T;
    cfg.dt = 0.01;
    cfg.output_every = 10;
    return cfg;
}

} // namespace

TEST_CASE("initial data families sample as documented") {
    const RadialGrid g = make_grid(16.0, 801);
    const InitialData bump{DataFamily::gaussian, 0.1, 1.0, 1.0};
    const FieldState s = init_state(bump, g, nullptr);
    CHECK(s.v[0] == 0.0);
    CHECK(s.v[g.n - 1] == 0.0);
    for (std::size_t i = 1; i + 1 < g.n; ++i) {
        const double r = g.r(i);
        CHECK(s.v[i] == doctest::Approx(r * 0.1 * std::exp(-r * r)).epsilon(1e-13));
        CHECK(s.w[i] == 0.0);
    }

    const InitialData kick{DataFamily::velocity_bump, 0.1, 0.5, 1.0};
    const FieldState k = init_state(kick, g, nullptr);
    for (std::size_t i = 1; i + 1 < g.n; ++i) {
        const double r = g.r(i);
        CHECK(k.v[i] == 0.0);
        CHECK(k.w[i] == doctest::Approx(r * 0.1 * std::exp(-r * r / 0.25)).epsilon(1e-13));
    }
}

TEST_CASE("data whose support does not fit in half the domain is rejected") {
    const RadialGrid g = make_grid(16.0, 801);
    // sigma = 2 puts the 1e-12 support radius at ~10.5 > r_max / 2
    CHECK_THROWS_AS(init_state(InitialData{DataFamily::gaussian, 0.1, 2.0, 1.0}, g, nullptr),
                    ValidationError);
    // scaled stationary data needs the profile
    CHECK_THROWS_AS(
        init_state(InitialData{DataFamily::scaled_ground_state, 0.0, 1.0, 0.5}, g, nullptr),
        ValidationError);
}

TEST_CASE("zero data is a fixed point of the full run") {
    RunConfig cfg = small_gaussian_run(0.0, DampingShape::constant, 5.0);
    const RunSeries s = run(cfg);
    CHECK(s.outcome == Outcome::global);
    REQUIRE(!s.t.empty());
    for (std::size_t k = 0; k < s.t.size(); ++k) {
        CHECK(s.rec[k].E == 0.0);
        CHECK(s.rec[k].l2 == 0.0);
        CHECK(s.A[k] == 0.0);
    }
}

TEST_CASE("a discrete Laplacian eigenmode follows the exact scalar recurrence") {
    const RadialGrid g = make_grid(10.0, 501); // dr = 0.02
    const int k = 3;
    const double x = static_cast<double>(k) * oracles::pi / static_cast<double>(g.n - 1);
    const double omega_sq = 1.0 + oracles::discrete_mode_mu(k, g.r_max, g.dr);
    const double dt = 0.01;
    const std::size_t steps = 1000;

    FieldState s0 = zero_state(g);
    for (std::size_t i = 1; i + 1 < g.n; ++i)
        s0.v[i] = std::sin(x * static_cast<double>(i));

    const DampingProfile damping = make_damping(DampingShape::constant, 1.0, 1.0, 2.0, g);
    Stepper st(s0, damping, g, StepperConfig{dt, 1e3, /*nonlinear=*/false});
    for (std::size_t n = 0; n < steps; ++n) REQUIRE(st.advance());

    const auto c = oracles::mode_coefficients(omega_sq, 1.0, dt, steps + 1);
    const auto& v = st.v();
    const auto w = st.w_centred();
    const double w_coef = (c[steps + 1] - c[steps - 1]) / (2.0 * dt);
    double verr = 0.0, werr = 0.0;
    for (std::size_t i = 1; i + 1 < g.n; ++i) {
        const double mode = std::sin(x * static_cast<double>(i));
        verr = std::max(verr, std::fabs(v[i] - c[steps] * mode));
        werr = std::max(werr, std::fabs(w[i] - w_coef * mode));
    }
    CHECK(verr <= 1e-9);
    CHECK(werr <= 1e-7);
    // the mode has genuinely decayed (damping at work), not collapsed
    CHECK(std::fabs(c[steps]) > 1e-5);
    CHECK(std::fabs(c[steps]) < 0.05);
}

TEST_CASE("reported velocity at t = 0 reproduces the initial velocity exactly for resting data") {
    const RadialGrid g = make_grid(16.0, 801);
    const FieldState s0 = init_state(InitialData{DataFamily::gaussian, 0.05, 1.0, 1.0}, g, nullptr);
    const DampingProfile damping = make_damping(DampingShape::constant, 1.0, 1.0, 2.0, g);
    Stepper st(s0, damping, g, StepperConfig{0.01, 1e3, true});
    const auto w = st.w_centred();
    for (double wi : w) CHECK(wi == 0.0);
}

TEST_CASE("single-step helper agrees with the stepper") {
    const RadialGrid g = make_grid(16.0, 801);
    const FieldState s0 = init_state(InitialData{DataFamily::gaussian, 0.05, 1.0, 1.0}, g, nullptr);
    const DampingProfile damping =
        make_damping(DampingShape::exterior_plateau, 0.5, 1.0, 2.0, g);
    const StepperConfig sc{0.01, 1e3, true};

    Stepper st(s0, damping, g, sc);
    REQUIRE(st.advance());
    const FieldState a = st.state();
    const FieldState b = step(s0, damping, g, sc);
    CHECK(a.t == b.t);
    for (std::size_t i = 0; i < g.n; ++i) {
        CHECK(a.v[i] == b.v[i]);
        CHECK(a.w[i] == b.w[i]);
    }
}

TEST_CASE("time convergence of the stepper is second order") {
    // fixed grid, halved time steps: Richardson ratio of the final energy
    auto energy_at_T = [](double dt, std::size_t output_every) {
        RunConfig cfg;
        cfg.grid = make_grid(12.0, 601);
        cfg.shape = DampingShape::constant;
        cfg.lambda0 = cfg.lambda1 = 1.0;
        cfg.R = 2.0;
        cfg.data = InitialData{DataFamily::gaussian, 0.05, 1.0, 1.0};
        cfg.T = 4.0;
        cfg.dt = dt;
        cfg.output_every = output_every;
        const RunSeries s = run(cfg);
        return s.rec.back().E;
    };
    const double e1 = energy_at_T(0.02, 100);
    const double e2 = energy_at_T(0.01, 200);
    const double e3 = energy_at_T(0.005, 400);
    const double ratio = std::fabs(e1 - e2) / std::fabs(e2 - e3);
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("undamped runs conserve energy to the discretization tolerance") {
    RunConfig cfg = small_gaussian_run(0.05, DampingShape::none, 8.0);
    cfg.lambda0 = cfg.lambda1 = 0.0;
    cfg.dt = 0.005;
    const RunSeries s = run(cfg);
    REQUIRE(s.outcome == Outcome::global);
    const double E0 = s.rec[0].E;
    CHECK(E0 > 0.0);
    for (std::size_t k = 0; k < s.t.size(); ++k) {
        CHECK(std::fabs(s.rec[k].E - E0) <= 5e-4 * E0);
        CHECK(s.A[k] == 0.0); // no damping, no decrement
    }
}

TEST_CASE("disturbances stay inside the numerical light cone") {
    RunConfig cfg;
    cfg.grid = make_grid(20.0, 1001); // dr = 0.02
    cfg.shape = DampingShape::none;
    cfg.lambda0 = cfg.lambda1 = 0.0;
    cfg.data = InitialData{DataFamily::velocity_bump, 0.1, 0.5, 1.0};
    cfg.T = 5.0;
    cfg.dt = 0.01;
    cfg.output_every = 100;
    cfg.margin = 2.0;

    Trace tr;
    RunConfig traced = cfg;
    traced.trace_every = 500; // final level only
    const RunSeries s = run(traced, nullptr, &tr);
    REQUIRE(s.outcome == Outcome::global);
    const auto& v = tr.v.back();

    const double support = effective_support_radius(cfg.data, nullptr);
    CHECK(support < 3.0);

    double sup_all = 0.0;
    for (double x : v) sup_all = std::max(sup_all, std::fabs(x));
    CHECK(sup_all > 0.0);

    // numerically negligible beyond the physical cone (speed <= ~1, with a
    // small dispersive allowance)
    const double soft_edge = support + 1.2 * cfg.T + 0.5;
    double sup_out = 0.0;
    for (std::size_t i = nearest_node(cfg.grid, soft_edge); i < cfg.grid.n; ++i)
        sup_out = std::max(sup_out, std::fabs(v[i]));
    CHECK(sup_out <= 1e-8 * sup_all);
}

TEST_CASE("super-threshold scaled data blows up with a sane truncated series") {
    const RadialGrid g = make_grid(50.0, 1251); // dr = 0.04
    const GroundState gs = shoot_ground_state(g);
    RunConfig cfg;
    cfg.grid = g;
    cfg.shape = DampingShape::exterior_plateau;
    cfg.lambda0 = 0.5;
    cfg.lambda1 = 1.0;
    cfg.R = 2.0;
    cfg.data = InitialData{DataFamily::scaled_ground_state, 0.0, 1.0, 1.3};
    cfg.T = 3.0;
    cfg.dt = 0.02;
    cfg.output_every = 5; // cadence 0.1
    const RunSeries s = run(cfg, &gs);

    CHECK(s.outcome == Outcome::blowup);
    REQUIRE(s.t.size() >= 2);
    CHECK(s.t_star == s.t.back());
    CHECK(s.t_star > 0.0);
    CHECK(s.t_star < 3.0);
    for (std::size_t k = 0; k < s.t.size(); ++k) {
        CHECK(std::isfinite(s.rec[k].E));
        CHECK(std::isfinite(s.rec[k].L4));
        if (k > 0) {
            CHECK(s.t[k] > s.t[k - 1]);
            CHECK(s.A[k] >= s.A[k - 1]);
        }
    }
    // the quartic integral grows monotonically near the end: genuine focusing
    const std::size_t m = s.t.size();
    REQUIRE(m >= 4);
    CHECK(s.rec[m - 1].L4 > s.rec[m - 2].L4);
    CHECK(s.rec[m - 2].L4 > s.rec[m - 3].L4);

    // a tiny pointwise guard trips immediately for the same data
    RunConfig tight = cfg;
    tight.M_blow = 4.0; // initial peak is ~5.6
    const RunSeries s2 = run(tight, &gs);
    CHECK(s2.outcome == Outcome::blowup);
    CHECK(s2.t_star == 0.0);
    CHECK(s2.t.size() == 1);
}

TEST_CASE("the single-step API signals blowup instead of freezing") {
    const RadialGrid g = make_grid(16.0, 801);
    FieldState huge = zero_state(g);
    for (std::size_t i = 1; i + 1 < g.n; ++i)
        huge.v[i] = 2e3 * g.r(i) * std::exp(-g.r(i) * g.r(i));
    const DampingProfile damping = make_damping(DampingShape::constant, 1.0, 1.0, 2.0, g);
    CHECK_THROWS_AS(step(huge, damping, g, StepperConfig{0.01, 1e3, true}),
                    BlowupSignal);
}

TEST_CASE("run configuration validation catches unstable or undersized setups") {
    RunConfig cfg = small_gaussian_run(0.05, DampingShape::constant, 5.0);
    CHECK_NOTHROW(cfg.validate(nullptr));

    RunConfig cfl = cfg;
    cfl.dt = 0.05; // dr = 0.02
    CHECK_THROWS_AS(cfl.validate(nullptr), ValidationError);

    RunConfig horizon = cfg;
    horizon.T = 50.0; // support + T + margin far beyond r_max = 16
    CHECK_THROWS_AS(horizon.validate(nullptr), ValidationError);

    RunConfig guard = cfg;
    guard.M_blow = 0.0;
    CHECK_THROWS_AS(guard.validate(nullptr), ValidationError);

    RunConfig needs_profile = cfg;
    needs_profile.data = InitialData{DataFamily::scaled_ground_state, 0.0, 1.0, 0.5};
    CHECK_THROWS_AS(needs_profile.validate(nullptr), ValidationError);
}

TEST_CASE("trace cadence stores the requested levels plus the final one") {
    RunConfig cfg = small_gaussian_run(0.05, DampingShape::constant, 2.0);
    cfg.trace_every = 20; // dt = 0.01 -> stored every 0.2
    Trace tr;
    run(cfg, nullptr, &tr);
    REQUIRE(!tr.t.empty());
    CHECK(tr.t.front() == 0.0);
    CHECK(tr.t.back() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(tr.cadence == 20);
    CHECK(tr.dt == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(tr.t.size() == 11);
    for (const auto& level : tr.v) CHECK(level.size() == cfg.grid.n);
}

TEST_CASE("family names round-trip") {
    for (auto f : {DataFamily::gaussian, DataFamily::velocity_bump,
                   DataFamily::scaled_ground_state})
        CHECK(data_family_from_string(to_string(f)) == f);
    CHECK_THROWS_AS(data_family_from_string("square"), ValidationError);
    CHECK(to_string(Outcome::global) == "global");
    CHECK(to_string(Outcome::blowup) == "blowup");
}
