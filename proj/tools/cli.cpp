#include "cli.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dkg/artifacts.hpp"
#include "dkg/audit.hpp"
#include "dkg/classify.hpp"
#include "dkg/config_parse.hpp"
#include "dkg/cutoff.hpp"
#include "dkg/errors.hpp"
#include "dkg/evolve.hpp"
#include "dkg/ground_state.hpp"

namespace dkg::cli {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct Opts {
    std::string config;
    std::string out = "out";
    std::string cache;
    std::size_t workers = 1;
    bool dense = false;
    bool linear = false;
    long long seed = 0; // reserved; every run is deterministic
};

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream f(p);
    if (!f) throw ValidationError("cannot write '" + p.string() + "'");
    f << body;
    f.flush();
    if (!f) throw ValidationError("short write to '" + p.string() + "'");
}

ordered_json grid_json(const RadialGrid& g) {
    return ordered_json{{"r_max", g.r_max}, {"n", g.n}, {"dr", g.dr}};
}

ordered_json config_json(const RunConfig& c) {
    return ordered_json{
        {"grid", grid_json(c.grid)},
        {"damping",
         {{"shape", to_string(c.shape)},
          {"lambda0", c.lambda0},
          {"lambda1", c.lambda1},
          {"R", c.R}}},
        {"data",
         {{"family", to_string(c.data.family)},
          {"amplitude", c.data.amplitude},
          {"sigma", c.data.sigma},
          {"lambda", c.data.lambda}}},
        {"run",
         {{"T", c.T},
          {"dt", c.dt_effective()},
          {"output_every", c.output_every},
          {"M_blow", c.M_blow},
          {"linear", !c.nonlinear}}},
        {"audit_radii", {{"R", c.radii.R}, {"r1", c.radii.r1}, {"r2", c.radii.r2}}},
    };
}

/// Full per-run summary: outcome, endpoint functionals, decay fit over the
/// configured window (null when the run blew up, the window is empty, or the
/// energy is not strictly positive there), and the observation ratios at the
/// configured horizons (default: the final time).
ordered_json summary_json(const RunConfig& cfg, const RunSeries& s,
                          const std::vector<double>& horizons, double fit_a, double fit_b) {
    ordered_json j;
    j["config"] = config_json(cfg);
    j["outcome"] = to_string(s.outcome);
    j["partial"] = s.outcome == Outcome::blowup;
    if (s.outcome == Outcome::blowup) j["t_star"] = s.t_star;
    j["samples"] = s.t.size();
    j["t_end"] = s.t.back();
    j["E0"] = s.rec.front().E;
    j["E_end"] = s.rec.back().E;
    j["A_end"] = s.A.back();
    j["eps0"] = s.eps0;

    j["decay_fit"] = nullptr;
    j["observation"] = ordered_json::array();
    if (s.outcome != Outcome::global) return j;

    const double tb = fit_b > 0.0 ? fit_b : s.t.back();
    bool any = false, positive = true;
    for (std::size_t k = 0; k < s.t.size(); ++k) {
        if (s.t[k] < fit_a - 1e-12 || s.t[k] > tb + 1e-12) continue;
        any = true;
        if (!(s.rec[k].E > 0.0)) positive = false;
    }
    if (any && positive && tb > fit_a) {
        const DecayFit f = fit_decay(s, fit_a, tb);
        j["decay_fit"] = ordered_json{{"t_a", f.t_a},
                                      {"t_b", f.t_b},
                                      {"rate", f.rate},
                                      {"coefficient", f.coefficient},
                                      {"r2", f.r2},
                                      {"degenerate", f.degenerate}};
    }

    const std::vector<double> hz =
        horizons.empty() ? std::vector<double>{s.t.back()} : horizons;
    const ObservationReport obs = observation_report(s, hz);
    for (const ObservationPoint& p : obs.points) {
        j["observation"].push_back(ordered_json{{"T_requested", p.T_requested},
                                                {"T", p.T},
                                                {"E_T", p.E_T},
                                                {"A_T", p.A_T},
                                                {"l2_time_integral", p.l2_time_integral},
                                                {"strong_ratio", p.strong_ratio},
                                                {"weak_ratio", p.weak_ratio},
                                                {"flag", to_string(p.flag)}});
    }
    return j;
}

/// Data sampled directly in u form (not through the v = r u reduction), so a
/// pure ground-state profile classifies bitwise against its own threshold.
std::pair<std::vector<double>, std::vector<double>>
initial_u_samples(const InitialData& d, const RadialGrid& g, const GroundState& gs) {
    std::vector<double> u0(g.n, 0.0), u1(g.n, 0.0);
    switch (d.family) {
    case DataFamily::gaussian:
        for (std::size_t i = 0; i < g.n; ++i) {
            const double x = g.r(i) / d.sigma;
            u0[i] = d.amplitude * std::exp(-x * x);
        }
        break;
    case DataFamily::velocity_bump:
        for (std::size_t i = 0; i < g.n; ++i) {
            const double x = g.r(i) / d.sigma;
            u1[i] = d.amplitude * std::exp(-x * x);
        }
        break;
    case DataFamily::scaled_ground_state:
        if (!(gs.grid == g))
            throw ValidationError("ground state was built on a different grid");
        for (std::size_t i = 0; i < g.n; ++i) u0[i] = d.lambda * gs.q[i];
        break;
    }
    return {std::move(u0), std::move(u1)};
}

std::string series_csv_text(const RunSeries& s) {
    std::ostringstream csv;
    write_series_csv(s, csv);
    return csv.str();
}

int cmd_ground_state(const Opts& o) {
    const ParsedConfig pc = parse_config(slurp(o.config));
    const GroundState gs = obtain_ground_state(pc.run.grid, pc.gs_tol, o.cache);
    const GroundStateReport rep = verify_ground_state(gs);

    ordered_json j;
    j["grid"] = grid_json(gs.grid);
    j["tol"] = gs.tol;
    j["q0"] = gs.q0;
    j["h0"] = gs.h0;
    j["l2"] = rep.l2;
    j["grad2"] = rep.grad2;
    j["l4"] = rep.l4;
    j["J"] = rep.J;
    j["K"] = rep.K;
    j["K_rel"] = rep.K_rel;
    j["h0_identity_rel"] = rep.h0_identity_rel;
    j["pohozaev_rel"] = rep.pohozaev_rel;
    j["h1_sq"] = rep.grad2 + rep.l2;
    j["gn_ratio"] = rep.gn;
    j["residual_sup"] = rep.residual_sup;
    j["graft_radius"] = gs.graft_radius;
    j["tail_coeff"] = gs.tail_coeff;
    j["stationary"] = rep.stationary;

    fs::create_directories(o.out);
    write_file(fs::path(o.out) / "ground_state.json", j.dump(2) + "\n");

    std::ostringstream csv;
    csv << "r,q,qp\n";
    for (std::size_t i = 0; i < gs.grid.n; ++i)
        csv << format_g17(gs.grid.r(i)) << ',' << format_g17(gs.q[i]) << ','
            << format_g17(gs.qp[i]) << '\n';
    write_file(fs::path(o.out) / "profile.csv", csv.str());
    return 0;
}

int cmd_simulate(const Opts& o) {
    const ParsedConfig pc = parse_config(slurp(o.config));
    if (pc.is_sweep)
        throw ValidationError("config declares sweep axes; use the sweep subcommand");
    RunConfig cfg = pc.run;
    if (o.linear) cfg.nonlinear = false;

    std::optional<GroundState> gs;
    if (cfg.data.family == DataFamily::scaled_ground_state)
        gs = obtain_ground_state(cfg.grid, pc.gs_tol, o.cache);

    const RunSeries s = run(cfg, gs ? &*gs : nullptr, nullptr);

    fs::create_directories(o.out);
    write_file(fs::path(o.out) / "series.csv", series_csv_text(s));
    const ordered_json j = summary_json(cfg, s, pc.observe_horizons, pc.fit_t_a, pc.fit_t_b);
    write_file(fs::path(o.out) / "summary.json", j.dump(2) + "\n");
    return 0;
}

int cmd_classify(const Opts& o) {
    const ParsedConfig pc = parse_config(slurp(o.config));
    const RunConfig& cfg = pc.run;
    const GroundState gs = obtain_ground_state(cfg.grid, pc.gs_tol, o.cache);
    const auto [u0, u1] = initial_u_samples(cfg.data, cfg.grid, gs);
    const Classification c = classify(u0, u1, gs.h0, cfg.grid);

    ordered_json j;
    j["grid"] = grid_json(cfg.grid);
    j["data"] = ordered_json{{"family", to_string(cfg.data.family)},
                             {"amplitude", cfg.data.amplitude},
                             {"sigma", cfg.data.sigma},
                             {"lambda", cfg.data.lambda}};
    j["label"] = to_string(c.label);
    j["E"] = c.E;
    j["K"] = c.K;
    j["h0"] = c.h0;
    j["E_over_h0"] = c.E / c.h0;
    j["q0"] = gs.q0;

    fs::create_directories(o.out);
    write_file(fs::path(o.out) / "classify.json", j.dump(2) + "\n");
    return 0;
}

ordered_json estimate_json(const MorawetzEstimate& e) {
    return ordered_json{{"lhs", e.lhs},
                        {"bracket", e.bracket},
                        {"constant", e.constant},
                        {"applicable", e.applicable}};
}

int cmd_audit(const Opts& o) {
    const ParsedConfig pc = parse_config(slurp(o.config));
    if (pc.is_sweep)
        throw ValidationError("config declares sweep axes; use the sweep subcommand");
    RunConfig cfg = pc.run;
    if (o.linear) cfg.nonlinear = false;
    if (o.dense) cfg.trace_every = 1;

    std::optional<GroundState> gs;
    if (cfg.data.family == DataFamily::scaled_ground_state)
        gs = obtain_ground_state(cfg.grid, pc.gs_tol, o.cache);

    Trace tr;
    const RunSeries s = run(cfg, gs ? &*gs : nullptr, &tr);

    const DampingProfile damping =
        make_damping(cfg.shape, cfg.lambda0, cfg.lambda1, cfg.R, cfg.grid);
    const Cutoff phi = build_cutoff(CutoffKind::phi, s.radii, cfg.grid);
    const Cutoff psi = build_cutoff(CutoffKind::psi, s.radii, cfg.grid);

    const EnergyIdentityReport er = energy_identity_residual(s);
    MultiplierLedger led = multiplier_terms(tr, phi, damping, cfg.grid);
    led.psi_residual = psi_identity_residual(tr, psi, damping, cfg.grid);

    ordered_json a;
    a["energy_identity"] = ordered_json{{"max_abs", er.max_abs}, {"max_rel", er.max_rel}};
    a["multiplier"] = ordered_json{{"I", led.I},
                                   {"II", led.II},
                                   {"III", led.III},
                                   {"IV", led.IV},
                                   {"V1", led.V1},
                                   {"V2", led.V2},
                                   {"VI", led.VI},
                                   {"sum", led.sum},
                                   {"psi_residual", led.psi_residual}};
    a["cutoffs"] = ordered_json{{"gamma", phi.gamma},
                                {"beta1", psi.beta1},
                                {"beta2", psi.beta2},
                                {"beta_tilde", psi.beta_tilde}};
    if (s.outcome == Outcome::global) {
        const MorawetzReport m = morawetz_report(s);
        a["morawetz"] = ordered_json{{"eps", m.eps},
                                     {"T", m.T},
                                     {"u4_interior", estimate_json(m.u4_interior)},
                                     {"grad_interior", estimate_json(m.grad_interior)},
                                     {"u4_exterior", estimate_json(m.u4_exterior)},
                                     {"h1_exterior", estimate_json(m.h1_exterior)}};
    } else {
        a["morawetz"] = nullptr;
    }

    fs::create_directories(o.out);
    write_file(fs::path(o.out) / "series.csv", series_csv_text(s));
    const ordered_json j = summary_json(cfg, s, pc.observe_horizons, pc.fit_t_a, pc.fit_t_b);
    write_file(fs::path(o.out) / "summary.json", j.dump(2) + "\n");
    write_file(fs::path(o.out) / "audit.json", a.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const Opts& o) {
    const ParsedConfig pc = parse_config(slurp(o.config));
    if (!pc.is_sweep)
        throw ValidationError("config declares no sweep axes; use the simulate subcommand");
    std::vector<RunConfig> cfgs = pc.instantiate();
    if (o.linear)
        for (RunConfig& c : cfgs) c.nonlinear = false;

    // every instantiated config shares the base grid, so at most one profile
    std::optional<GroundState> gs;
    for (const RunConfig& c : cfgs)
        if (c.data.family == DataFamily::scaled_ground_state) {
            gs = obtain_ground_state(c.grid, pc.gs_tol, o.cache);
            break;
        }

    fs::create_directories(o.out);

    struct Row {
        bool ok = false;
        std::string error;
        std::string dir;
        std::string outcome;
        double t_star = 0.0;
        double E0 = 0.0, E_end = 0.0, A_end = 0.0;
        bool has_fit = false;
        double fit_rate = 0.0, fit_r2 = 0.0;
    };
    std::vector<Row> rows(cfgs.size());
    std::atomic<std::size_t> next{0};

    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cfgs.size()) return;
            Row& row = rows[i];
            char name[32];
            std::snprintf(name, sizeof name, "run_%03zu", i);
            row.dir = name;
            try {
                const RunConfig& cfg = cfgs[i];
                const fs::path dir = fs::path(o.out) / name;
                fs::create_directories(dir);
                const RunSeries s = run(cfg, gs ? &*gs : nullptr, nullptr);
                write_file(dir / "series.csv", series_csv_text(s));
                const ordered_json j =
                    summary_json(cfg, s, pc.observe_horizons, pc.fit_t_a, pc.fit_t_b);
                write_file(dir / "summary.json", j.dump(2) + "\n");

                row.outcome = to_string(s.outcome);
                row.t_star = s.t_star;
                row.E0 = s.rec.front().E;
                row.E_end = s.rec.back().E;
                row.A_end = s.A.back();
                if (!j["decay_fit"].is_null()) {
                    row.has_fit = true;
                    row.fit_rate = j["decay_fit"]["rate"].get<double>();
                    row.fit_r2 = j["decay_fit"]["r2"].get<double>();
                }
                row.ok = true;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };

    const std::size_t workers =
        std::min(std::max<std::size_t>(1, o.workers), std::max<std::size_t>(1, cfgs.size()));
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k + 1 < workers; ++k) pool.emplace_back(work);
    work();
    for (std::thread& th : pool) th.join();

    std::ostringstream sum;
    sum << "run,dir,shape,lambda0,lambda1,R,dt,family,amplitude,sigma,lambda,"
           "outcome,t_star,E0,E_end,A_end,fit_rate,fit_r2\n";
    bool any_failed = false;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        const RunConfig& c = cfgs[i];
        const Row& row = rows[i];
        sum << i << ',' << row.dir << ',' << to_string(c.shape) << ','
            << format_g17(c.lambda0) << ',' << format_g17(c.lambda1) << ','
            << format_g17(c.R) << ',' << format_g17(c.dt_effective()) << ','
            << to_string(c.data.family) << ',' << format_g17(c.data.amplitude) << ','
            << format_g17(c.data.sigma) << ',' << format_g17(c.data.lambda) << ',';
        if (!row.ok) {
            any_failed = true;
            std::fprintf(stderr, "error: %s failed: %s\n", row.dir.c_str(),
                         row.error.c_str());
            sum << "error,,,,,,\n";
            continue;
        }
        sum << row.outcome << ',' << format_g17(row.t_star) << ',' << format_g17(row.E0)
            << ',' << format_g17(row.E_end) << ',' << format_g17(row.A_end) << ',';
        if (row.has_fit)
            sum << format_g17(row.fit_rate) << ',' << format_g17(row.fit_r2);
        else
            sum << ',';
        sum << '\n';
    }
    write_file(fs::path(o.out) / "summary.csv", sum.str());
    return any_failed ? 1 : 0;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"radial damped cubic Klein-Gordon laboratory"};
    app.require_subcommand(1);
    Opts o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "config document (key = value lines)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory (default: out)");
        sub->add_option("--cache", o.cache, "ground-state cache file (optional)");
    };
    auto add_run_flags = [&](CLI::App* sub) {
        sub->add_flag("--linear", o.linear, "drop the cubic nonlinearity");
        sub->add_option("--seed", o.seed, "reserved; every run is deterministic");
    };

    CLI::App* cgs =
        app.add_subcommand("ground-state", "shoot the stationary profile and report");
    add_common(cgs);
    CLI::App* csim = app.add_subcommand("simulate", "run, write series.csv + summary.json");
    add_common(csim);
    add_run_flags(csim);
    CLI::App* ccls = app.add_subcommand("classify", "label the configured initial data");
    add_common(ccls);
    CLI::App* caud =
        app.add_subcommand("audit", "dense-trace run, additionally write audit.json");
    add_common(caud);
    add_run_flags(caud);
    caud->add_flag("--dense", o.dense, "force every-step trace cadence");
    CLI::App* cswp = app.add_subcommand("sweep", "run the cross product of the sweep axes");
    add_common(cswp);
    add_run_flags(cswp);
    cswp->add_option("--workers", o.workers, "concurrent runs (default 1)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (app.got_subcommand(cgs)) return cmd_ground_state(o);
        if (app.got_subcommand(csim)) return cmd_simulate(o);
        if (app.got_subcommand(ccls)) return cmd_classify(o);
        if (app.got_subcommand(caud)) return cmd_audit(o);
        if (app.got_subcommand(cswp)) return cmd_sweep(o);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

} // namespace dkg::cli
