#include "dkg/config_parse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "dkg/errors.hpp"

namespace dkg {

namespace {

constexpr double default_dr = 0.01;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& val) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(val, &pos);
        if (pos != val.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key + "': cannot parse number '" + val + "'");
    }
}

std::size_t parse_size(const std::string& key, const std::string& val) {
    const double x = parse_double(key, val);
    if (!(x >= 0.0) || x != std::floor(x) || x > 1e12)
        throw ValidationError("config key '" + key + "': expected a nonnegative integer");
    return static_cast<std::size_t>(x);
}

bool parse_bool(const std::string& key, const std::string& val) {
    if (val == "true" || val == "1" || val == "yes" || val == "on") return true;
    if (val == "false" || val == "0" || val == "no" || val == "off") return false;
    throw ValidationError("config key '" + key + "': expected a boolean, got '" + val + "'");
}

std::vector<std::string> split_list(const std::string& val) {
    std::vector<std::string> out;
    std::stringstream ss(val);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& val) {
    std::vector<double> out;
    for (const auto& item : split_list(val)) out.push_back(parse_double(key, item));
    if (out.empty()) throw ValidationError("config key '" + key + "': empty list");
    return out;
}

} // namespace

double ground_state_support_estimate() { return 28.0; }

ParsedConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": empty key or value");
        if (kv.count(key))
            throw ValidationError("config key '" + key + "' given twice");
        kv[key] = val;
    }

    ParsedConfig pc;
    RunConfig& rc = pc.run;
    double grid_r_max = 0.0, grid_dr = 0.0;
    std::size_t grid_n = 0;
    double audit_R = 0.0, audit_r1 = 0.0, audit_r2 = 0.0;

    auto take = [&](const char* key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) return "";
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("grid.r_max"); !v.empty()) grid_r_max = parse_double("grid.r_max", v);
    if (auto v = take("grid.n"); !v.empty()) grid_n = parse_size("grid.n", v);
    if (auto v = take("grid.dr"); !v.empty()) grid_dr = parse_double("grid.dr", v);

    std::string shape_str = take("damping.shape");
    if (shape_str.empty()) throw ValidationError("missing required config key 'damping.shape'");
    rc.shape = damping_shape_from_string(shape_str);
    if (auto v = take("damping.lambda0"); !v.empty()) rc.lambda0 = parse_double("damping.lambda0", v);
    if (auto v = take("damping.lambda1"); !v.empty()) rc.lambda1 = parse_double("damping.lambda1", v);
    if (auto v = take("damping.R"); !v.empty()) rc.R = parse_double("damping.R", v);

    std::string family_str = take("data.family");
    if (family_str.empty()) throw ValidationError("missing required config key 'data.family'");
    rc.data.family = data_family_from_string(family_str);
    if (auto v = take("data.amplitude"); !v.empty())
        rc.data.amplitude = parse_double("data.amplitude", v);
    if (auto v = take("data.sigma"); !v.empty()) rc.data.sigma = parse_double("data.sigma", v);
    if (auto v = take("data.lambda"); !v.empty()) rc.data.lambda = parse_double("data.lambda", v);

    std::string T_str = take("run.T");
    if (T_str.empty()) throw ValidationError("missing required config key 'run.T'");
    rc.T = parse_double("run.T", T_str);
    if (auto v = take("run.dt"); !v.empty()) rc.dt = parse_double("run.dt", v);
    if (auto v = take("run.output_every"); !v.empty())
        rc.output_every = parse_size("run.output_every", v);
    if (auto v = take("run.trace_every"); !v.empty())
        rc.trace_every = parse_size("run.trace_every", v);
    if (auto v = take("run.M_blow"); !v.empty()) rc.M_blow = parse_double("run.M_blow", v);
    if (auto v = take("run.margin"); !v.empty()) rc.margin = parse_double("run.margin", v);
    if (auto v = take("run.linear"); !v.empty()) rc.nonlinear = !parse_bool("run.linear", v);

    if (auto v = take("audit.R"); !v.empty()) audit_R = parse_double("audit.R", v);
    if (auto v = take("audit.r1"); !v.empty()) audit_r1 = parse_double("audit.r1", v);
    if (auto v = take("audit.r2"); !v.empty()) audit_r2 = parse_double("audit.r2", v);

    if (auto v = take("observe.horizons"); !v.empty())
        pc.observe_horizons = parse_double_list("observe.horizons", v);
    if (auto v = take("fit.t_a"); !v.empty()) pc.fit_t_a = parse_double("fit.t_a", v);
    if (auto v = take("fit.t_b"); !v.empty()) pc.fit_t_b = parse_double("fit.t_b", v);
    if (auto v = take("gs.tol"); !v.empty()) pc.gs_tol = parse_double("gs.tol", v);

    if (auto v = take("sweep.amplitude"); !v.empty())
        pc.sweep_amplitude = parse_double_list("sweep.amplitude", v);
    if (auto v = take("sweep.lambda"); !v.empty())
        pc.sweep_lambda = parse_double_list("sweep.lambda", v);
    if (auto v = take("sweep.lambda0"); !v.empty())
        pc.sweep_lambda0 = parse_double_list("sweep.lambda0", v);
    if (auto v = take("sweep.lambda1"); !v.empty())
        pc.sweep_lambda1 = parse_double_list("sweep.lambda1", v);
    if (auto v = take("sweep.R"); !v.empty()) pc.sweep_R = parse_double_list("sweep.R", v);
    if (auto v = take("sweep.dt"); !v.empty()) pc.sweep_dt = parse_double_list("sweep.dt", v);
    if (auto v = take("sweep.shape"); !v.empty()) {
        for (const auto& s : split_list(v)) pc.sweep_shape.push_back(damping_shape_from_string(s));
    }
    if (auto v = take("sweep.max_runs"); !v.empty())
        pc.sweep_max_runs = parse_size("sweep.max_runs", v);

    if (!kv.empty())
        throw ValidationError("unknown config key '" + kv.begin()->first + "'");

    pc.is_sweep = !pc.sweep_amplitude.empty() || !pc.sweep_lambda.empty() ||
                  !pc.sweep_lambda0.empty() || !pc.sweep_lambda1.empty() ||
                  !pc.sweep_R.empty() || !pc.sweep_dt.empty() || !pc.sweep_shape.empty();

    // ---- grid defaults: causal sizing support + T + margin, the init-time
    // requirement support <= r_max / 2, and room for the audit windows (4R).
    // A sweep is sized once for its worst axis values so every instantiated
    // config fits the shared grid. ----
    auto any_nonzero = [](const std::vector<double>& axis, double base) {
        if (axis.empty()) return base != 0.0;
        for (const double x : axis)
            if (x != 0.0) return true;
        return false;
    };
    double support = 0.0;
    if (rc.data.family == DataFamily::scaled_ground_state) {
        if (any_nonzero(pc.sweep_lambda, rc.data.lambda))
            support = ground_state_support_estimate();
    } else if (any_nonzero(pc.sweep_amplitude, rc.data.amplitude)) {
        if (!(rc.data.sigma > 0.0))
            throw ValidationError("config key 'data.sigma' must be positive");
        support = rc.data.sigma * std::sqrt(std::log(1e12));
    }
    double sizing_R = rc.R;
    for (const double R : pc.sweep_R) sizing_R = std::max(sizing_R, R);
    if (grid_r_max <= 0.0) {
        if (!(rc.T > 0.0)) throw ValidationError("config key 'run.T' must be positive");
        const double dr = grid_dr > 0.0 ? grid_dr : default_dr;
        double needed = std::max(required_domain(support, rc.T, rc.margin), 2.0 * support);
        needed = std::max(needed, 4.0 * sizing_R);
        if (audit_r2 > 0.0) needed = std::max(needed, audit_r2);
        grid_r_max = std::ceil(needed / dr) * dr;
    }
    if (grid_n == 0) {
        const double dr = grid_dr > 0.0 ? grid_dr : default_dr;
        const double cells = grid_r_max / dr;
        if (std::fabs(cells - std::round(cells)) > 1e-9 * std::max(1.0, cells))
            throw ValidationError("config key 'grid.dr' does not divide grid.r_max");
        grid_n = static_cast<std::size_t>(std::llround(cells)) + 1;
    } else if (grid_dr > 0.0) {
        throw ValidationError("config keys 'grid.n' and 'grid.dr' are mutually exclusive");
    }
    rc.grid = make_grid(grid_r_max, grid_n);

    // ---- audit radii defaults tied to the damping radius ----
    pc.radii_explicit = audit_R > 0.0;
    const double base_R = pc.radii_explicit ? audit_R : rc.R;
    rc.radii = AuditRadii::from_R(base_R);
    if (audit_r1 > 0.0) rc.radii.r1 = audit_r1;
    if (audit_r2 > 0.0) rc.radii.r2 = audit_r2;

    if (pc.fit_t_b < 0.0) pc.fit_t_b = rc.T;
    if (pc.observe_horizons.empty()) pc.observe_horizons = {rc.T};

    // validate what does not need the ground state yet
    if (rc.data.family != DataFamily::scaled_ground_state && !pc.is_sweep)
        rc.validate(nullptr);
    return pc;
}

std::vector<RunConfig> ParsedConfig::instantiate() const {
    auto axis = [](const std::vector<double>& v, double base) {
        return v.empty() ? std::vector<double>{base} : v;
    };
    const std::vector<DampingShape> shapes =
        sweep_shape.empty() ? std::vector<DampingShape>{run.shape} : sweep_shape;
    const auto l0s = axis(sweep_lambda0, run.lambda0);
    const auto l1s = axis(sweep_lambda1, run.lambda1);
    const auto Rs = axis(sweep_R, run.R);
    const auto dts = axis(sweep_dt, run.dt);
    const auto amps = axis(sweep_amplitude, run.data.amplitude);
    const auto lambdas = axis(sweep_lambda, run.data.lambda);

    const std::size_t count = shapes.size() * l0s.size() * l1s.size() * Rs.size() *
                              dts.size() * amps.size() * lambdas.size();
    if (count > sweep_max_runs)
        throw ValidationError("sweep would produce " + std::to_string(count) +
                              " runs, above the cap sweep.max_runs = " +
                              std::to_string(sweep_max_runs));

    std::vector<RunConfig> out;
    out.reserve(count);
    for (const auto shape : shapes)
        for (const double l0 : l0s)
            for (const double l1 : l1s)
                for (const double R : Rs)
                    for (const double dt : dts)
                        for (const double a : amps)
                            for (const double lam : lambdas) {
                                RunConfig c = run;
                                c.shape = shape;
                                c.lambda0 = l0;
                                c.lambda1 = l1;
                                c.R = R;
                                c.dt = dt;
                                c.data.amplitude = a;
                                c.data.lambda = lam;
                                if (!radii_explicit) c.radii = AuditRadii::from_R(R);
                                // configs that need the ground state finish
                                // validation at run time, profile in hand
                                if (c.data.family != DataFamily::scaled_ground_state)
                                    c.validate(nullptr);
                                out.push_back(c);
                            }
    return out;
}

} // namespace dkg
