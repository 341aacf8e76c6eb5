#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dkg/audit.hpp"
#include "dkg/cutoff.hpp"
#include "dkg/errors.hpp"
#include "dkg/evolve.hpp"
#include "dkg/grid.hpp"
#include "dkg/ground_state.hpp"

using namespace dkg;

namespace {

RunSeries synthetic_series(std::size_t m, double dt,
                           double (*energy)(double)) {
    RunSeries s;
    s.outcome = Outcome::global;
    for (std::size_t k = 0; k < m; ++k) {
        const double t = dt * static_cast<double>(k);
        s.t.push_back(t);
        FunctionalRecord rec;
        rec.E = energy(t);
        s.rec.push_back(rec);
        s.A.push_back(0.0);
    }
    return s;
}

RunConfig audited_gaussian(std::size_t n, double dt) {
    RunConfig cfg;
    cfg.grid = make_grid(16.0, n);
    cfg.shape = DampingShape::constant;
    cfg.lambda0 = cfg.lambda1 = 1.0;
    cfg.R = 2.0;
    cfg.data = InitialData{DataFamily::gaussian, 0.05, 1.0, 1.0};
    cfg.T = 6.0;
    cfg.dt = dt;
    cfg.output_every = 10;
    cfg.trace_every = 1;
    return cfg;
}

} // namespace

TEST_CASE("decay fit recovers a synthetic exponential exactly") {
    const RunSeries s = synthetic_series(41, 0.5, [](double t) { return 7.0 * std::exp(-0.3 * t); });
    const DecayFit fit = fit_decay(s, 5.0, 20.0);
    CHECK(fit.rate == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(fit.coefficient == doctest::Approx(7.0).epsilon(1e-10));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(fit.degenerate);
}

TEST_CASE("decay fit flags constant energy as degenerate") {
    const RunSeries s = synthetic_series(41, 0.5, [](double) { return 5.0; });
    const DecayFit fit = fit_decay(s, 5.0, 20.0);
    CHECK(fit.degenerate);
    CHECK(fit.rate == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fit.r2 == 0.0);
}

TEST_CASE("decay fit validates the window and the energy sign") {
    const RunSeries s = synthetic_series(41, 0.5, [](double t) { return std::exp(-t); });
    CHECK_THROWS_AS(fit_decay(s, 10.0, 5.0), ValidationError);  // reversed
    CHECK_THROWS_AS(fit_decay(s, 5.0, 99.0), ValidationError);  // outside the run
    CHECK_THROWS_AS(fit_decay(s, 19.9, 20.0), ValidationError); // single sample

    RunSeries bad = synthetic_series(41, 0.5, [](double t) { return 1.0 - 0.09 * t; });
    bad.rec[40].E = -0.8; // negative inside the window
    CHECK_THROWS_AS(fit_decay(bad, 5.0, 20.0), ValidationError);
}

TEST_CASE("energy identity residual is tiny on a damped run and exact without damping") {
    RunConfig cfg = audited_gaussian(801, 0.01);
    const RunSeries s = run(cfg);
    const EnergyIdentityReport rep = energy_identity_residual(s);
    REQUIRE(rep.residual.size() == s.t.size());
    CHECK(rep.max_rel <= 1e-3);
    CHECK(rep.max_abs <= rep.max_rel * s.rec[0].E * (1.0 + 1e-12));

    // without damping A vanishes, so the residual is literally E(t) - E(0)
    RunConfig undamped = cfg;
    undamped.shape = DampingShape::none;
    undamped.T = 4.0;
    const RunSeries su = run(undamped);
    const EnergyIdentityReport ru = energy_identity_residual(su);
    for (std::size_t k = 0; k < su.t.size(); ++k)
        CHECK(ru.residual[k] == su.rec[k].E - su.rec[0].E);
}

TEST_CASE("energy identity residual shrinks at second order under refinement") {
    const RunSeries coarse = run(audited_gaussian(801, 0.01));
    const RunSeries fine = run(audited_gaussian(1601, 0.005));
    const double a = energy_identity_residual(coarse).max_rel;
    const double b = energy_identity_residual(fine).max_rel;
    CHECK(a / b > 3.3);
    CHECK(a / b < 4.7);
}

TEST_CASE("multiplier ledger on a trace of zeros is identically zero") {
    const RadialGrid g = make_grid(16.0, 801);
    const DampingProfile damping = make_damping(DampingShape::constant, 1.0, 1.0, 2.0, g);
    const Cutoff phi = build_cutoff(CutoffKind::phi, AuditRadii::from_R(2.0), g);
    Trace tr;
    tr.cadence = 1;
    tr.dt = 0.01;
    for (int k = 0; k < 5; ++k) {
        tr.t.push_back(0.01 * k);
        tr.v.emplace_back(g.n, 0.0);
        tr.w.emplace_back(g.n, 0.0);
    }
    const MultiplierLedger led = multiplier_terms(tr, phi, damping, g);
    CHECK(led.I == 0.0);
    CHECK(led.II == 0.0);
    CHECK(led.III == 0.0);
    CHECK(led.IV == 0.0);
    CHECK(led.V1 == 0.0);
    CHECK(led.V2 == 0.0);
    CHECK(led.VI == 0.0);
    CHECK(led.sum == 0.0);

    const Cutoff psi = build_cutoff(CutoffKind::psi, AuditRadii::from_R(2.0), g);
    CHECK(psi_identity_residual(tr, psi, damping, g) == 0.0);
}

TEST_CASE("multiplier ledger balances on a dense-trace run and refines at second order") {
    RunConfig cfg = audited_gaussian(801, 0.01);
    Trace tr;
    const RunSeries s = run(cfg, nullptr, &tr);
    REQUIRE(s.outcome == Outcome::global);

    const Cutoff phi = build_cutoff(CutoffKind::phi, cfg.radii, cfg.grid);
    const Cutoff psi = build_cutoff(CutoffKind::psi, cfg.radii, cfg.grid);
    const DampingProfile damping =
        make_damping(cfg.shape, cfg.lambda0, cfg.lambda1, cfg.R, cfg.grid);
    const MultiplierLedger led = multiplier_terms(tr, phi, damping, cfg.grid);
    const double psi_res = psi_identity_residual(tr, psi, damping, cfg.grid);

    // scale of the largest term in the identity
    const double scale =
        std::max({std::fabs(led.I), std::fabs(led.II), std::fabs(led.IV),
                  std::fabs(led.V1), std::fabs(led.V2), std::fabs(led.VI)});
    CHECK(scale > 0.0);
    CHECK(std::fabs(led.III) <= 1e-4 * scale); // pure divergence, near-exact
    CHECK(std::fabs(led.sum) <= 1e-2 * scale);

    RunConfig fine_cfg = audited_gaussian(1601, 0.005);
    Trace tr2;
    run(fine_cfg, nullptr, &tr2);
    const Cutoff phi2 = build_cutoff(CutoffKind::phi, fine_cfg.radii, fine_cfg.grid);
    const Cutoff psi2 = build_cutoff(CutoffKind::psi, fine_cfg.radii, fine_cfg.grid);
    const DampingProfile damping2 =
        make_damping(fine_cfg.shape, fine_cfg.lambda0, fine_cfg.lambda1, fine_cfg.R,
                     fine_cfg.grid);
    const MultiplierLedger led2 = multiplier_terms(tr2, phi2, damping2, fine_cfg.grid);
    const double psi_res2 = psi_identity_residual(tr2, psi2, damping2, fine_cfg.grid);

    const double r_sum = std::fabs(led.sum) / std::fabs(led2.sum);
    CHECK(r_sum > 3.3);
    CHECK(r_sum < 4.7);
    const double r_psi = std::fabs(psi_res) / std::fabs(psi_res2);
    CHECK(r_psi > 3.3);
    CHECK(r_psi < 4.7);
}

TEST_CASE("multiplier ledger is quadrature-small on a frozen stationary trace") {
    const RadialGrid g = make_grid(16.0, 801);
    const GroundState gs = shoot_ground_state(g);
    const DampingProfile damping = make_damping(DampingShape::constant, 1.0, 1.0, 2.0, g);

    Trace tr;
    tr.cadence = 1;
    tr.dt = 0.02;
    std::vector<double> v(g.n, 0.0);
    for (std::size_t i = 1; i + 1 < g.n; ++i) v[i] = g.r(i) * gs.q[i];
    for (int k = 0; k <= 50; ++k) {
        tr.t.push_back(tr.dt * k);
        tr.v.push_back(v);
        tr.w.emplace_back(g.n, 0.0);
    }

    const Cutoff phi = build_cutoff(CutoffKind::phi, AuditRadii::from_R(2.0), g);
    const MultiplierLedger led = multiplier_terms(tr, phi, damping, g);
    // no motion: the boundary and damping terms vanish identically
    CHECK(led.I == 0.0);
    CHECK(led.II == 0.0);
    // the rest cancels up to spatial quadrature error ~ dr^2 * scale
    const double scale = std::max({std::fabs(led.IV), std::fabs(led.V1),
                                   std::fabs(led.V2), std::fabs(led.VI)});
    const double tol = 2.0 * g.dr * g.dr * scale;
    CHECK(std::fabs(led.sum) <= tol);
    CHECK(std::fabs(led.III) <= tol);

    const Cutoff psi = build_cutoff(CutoffKind::psi, AuditRadii::from_R(2.0), g);
    const double psi_res = psi_identity_residual(tr, psi, damping, g);
    CHECK(std::fabs(psi_res) <= 1e-3);
}

TEST_CASE("audits insist on a dense trace") {
    const RadialGrid g = make_grid(16.0, 801);
    const DampingProfile damping = make_damping(DampingShape::constant, 1.0, 1.0, 2.0, g);
    const Cutoff phi = build_cutoff(CutoffKind::phi, AuditRadii::from_R(2.0), g);
    Trace tr;
    tr.cadence = 10; // not dense
    tr.dt = 0.1;
    for (int k = 0; k < 3; ++k) {
        tr.t.push_back(0.1 * k);
        tr.v.emplace_back(g.n, 0.0);
        tr.w.emplace_back(g.n, 0.0);
    }
    CHECK_THROWS_AS(multiplier_terms(tr, phi, damping, g), ValidationError);
    // and with the wrong cutoff kind
    Trace dense = tr;
    dense.cadence = 1;
    const Cutoff psi = build_cutoff(CutoffKind::psi, AuditRadii::from_R(2.0), g);
    CHECK_THROWS_AS(multiplier_terms(dense, psi, damping, g), ValidationError);
    CHECK_THROWS_AS(psi_identity_residual(dense, phi, damping, g), ValidationError);
}

TEST_CASE("space-time estimate report on a small damped run is finite and applicable") {
    RunConfig cfg = audited_gaussian(801, 0.01);
    const RunSeries s = run(cfg);
    const MorawetzReport rep = morawetz_report(s);
    CHECK(rep.eps == s.eps0);
    CHECK(rep.T == doctest::Approx(s.t.back()).epsilon(1e-12));
    for (const MorawetzEstimate* e :
         {&rep.u4_interior, &rep.grad_interior, &rep.u4_exterior, &rep.h1_exterior}) {
        CHECK(std::isfinite(e->lhs));
        CHECK(e->lhs >= 0.0);
        CHECK(e->applicable);
        CHECK(std::isfinite(e->constant));
        CHECK(e->constant >= 0.0);
    }
}

TEST_CASE("space-time estimates refuse blown-up series and degenerate brackets") {
    RunSeries blown;
    blown.outcome = Outcome::blowup;
    blown.t = {0.0, 0.1};
    blown.rec.resize(2);
    blown.A = {0.0, 0.0};
    CHECK_THROWS_AS(morawetz_report(blown), ValidationError);

    // all-zero global series: brackets vanish, estimates flagged not applicable
    RunSeries zero = synthetic_series(5, 0.1, [](double) { return 0.0; });
    const MorawetzReport rep = morawetz_report(zero);
    CHECK_FALSE(rep.u4_interior.applicable);
    CHECK(std::isnan(rep.u4_interior.constant));
}

TEST_CASE("observation report flags undamped and degenerate runs") {
    // undamped with energy: decrement is zero, ratio unbounded
    RunConfig cfg = audited_gaussian(801, 0.01);
    cfg.shape = DampingShape::none;
    cfg.T = 4.0;
    const RunSeries s = run(cfg);
    const ObservationReport rep = observation_report(s, {2.0, 4.0});
    REQUIRE(rep.points.size() == 2);
    for (const auto& p : rep.points) {
        CHECK(p.flag == ObservationFlag::unbounded);
        CHECK(std::isnan(p.strong_ratio));
        CHECK(p.A_T == 0.0);
        CHECK(p.E_T > 0.0);
    }

    // zero data: degenerate
    RunConfig zcfg = audited_gaussian(801, 0.01);
    zcfg.data.amplitude = 0.0;
    zcfg.T = 2.0;
    const RunSeries zs = run(zcfg);
    const ObservationReport zrep = observation_report(zs, {1.0});
    CHECK(zrep.points[0].flag == ObservationFlag::degenerate);
}

TEST_CASE("observation report on a damped run: finite ratios at snapped horizons") {
    RunConfig cfg = audited_gaussian(801, 0.01);
    const RunSeries s = run(cfg);
    const ObservationReport rep = observation_report(s, {3.0, 5.96, 6.0});
    REQUIRE(rep.points.size() == 3);
    for (const auto& p : rep.points) {
        CHECK(p.flag == ObservationFlag::ok);
        CHECK(std::isfinite(p.strong_ratio));
        CHECK(p.strong_ratio >= 0.0);
        CHECK(std::isfinite(p.weak_ratio));
        CHECK(p.weak_ratio <= p.strong_ratio * (1.0 + 1e-12));
    }
    // horizons snap to the nearest recorded sample
    CHECK(rep.points[0].T == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rep.points[1].T == doctest::Approx(6.0).epsilon(1e-9));
    // out-of-range horizons are rejected
    CHECK_THROWS_AS(observation_report(s, {99.0}), ValidationError);
    CHECK_THROWS_AS(observation_report(s, {-1.0}), ValidationError);
    RunSeries blown;
    blown.outcome = Outcome::blowup;
    blown.t = {0.0, 0.1};
    blown.rec.resize(2);
    blown.A = {0.0, 0.0};
    CHECK_THROWS_AS(observation_report(blown, {0.1}), ValidationError);
}

TEST_CASE("strong observation ratios are scale-invariant in the linear regime") {
    // halving the amplitude of a linear run scales the state by an exact
    // power of two, so purely quadratic functionals (A) scale bitwise by
    // 1/4; E also subtracts the quartic term, which breaks exactness at the
    // last-ulp level, so E and the ratios are compared at 1e-12 relative
    auto make = [](double a) {
        RunConfig cfg = audited_gaussian(801, 0.01);
        cfg.data.amplitude = a;
        cfg.nonlinear = false;
        cfg.T = 4.0;
        return run(cfg);
    };
    const RunSeries s1 = make(0.04);
    const RunSeries s2 = make(0.02);
    const ObservationReport r1 = observation_report(s1, {2.0, 4.0});
    const ObservationReport r2 = observation_report(s2, {2.0, 4.0});
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(r1.points[i].A_T == 4.0 * r2.points[i].A_T);
        // E is not purely quadratic: E(lambda u) = lambda^2 quad - lambda^4
        // L4/4, so E1 - 4 E2 = -(3/16) L4_1 up to rounding
        std::size_t k = 0;
        while (s1.t[k] != r1.points[i].T) ++k;
        const double quartic = (3.0 / 16.0) * s1.rec[k].L4;
        CHECK(std::fabs(r1.points[i].E_T - 4.0 * r2.points[i].E_T) <=
              1.5 * quartic + 1e-12 * r1.points[i].E_T);
        CHECK(std::fabs(r1.points[i].strong_ratio - r2.points[i].strong_ratio) <=
              1.5 * quartic / r1.points[i].A_T + 1e-12 * r1.points[i].strong_ratio);
    }
}
