#include "horoflow/runconfig.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace horoflow {

using nlohmann::json;
namespace fs = std::filesystem;

const char* command_name(Command c) {
    switch (c) {
    case Command::catenoid: return "catenoid";
    case Command::grim_reaper: return "grim-reaper";
    case Command::flow: return "flow";
    case Command::stability: return "stability";
    case Command::verify: return "verify";
    }
    return "?";
}

std::string format_double(double value) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& ctx) {
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            fail("unknown key \"" + item.key() + "\" in " + ctx);
}

double get_number(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) fail("\"" + key + "\" must be a number");
    return j[key].get<double>();
}

void require_positive(double v, const std::string& key) {
    if (!(v > 0.0)) fail("\"" + key + "\" must be > 0 (got " + format_double(v) + ")");
}

Perturbation parse_perturbation(const json& j) {
    if (!j.is_object()) fail("\"perturbation\" must be an object");
    check_keys(j, { "kind", "amplitude", "center", "width" }, "\"perturbation\"");
    if (!j.contains("kind") || !j["kind"].is_string()) fail("perturbation \"kind\" must be a string");
    Perturbation p;
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "gaussian-bump") p.kind = PerturbationKind::gaussian_bump;
    else if (kind == "compact-bump") p.kind = PerturbationKind::compact_bump;
    else if (kind == "decaying-tail") p.kind = PerturbationKind::decaying_tail;
    else fail("perturbation \"kind\" must be gaussian-bump, compact-bump or decaying-tail");
    p.amplitude = get_number(j, "amplitude", 0.1);
    p.center = get_number(j, "center", 0.0);
    p.width = get_number(j, "width", 0.3);
    require_positive(p.width, "perturbation.width");
    return p;
}

void parse_controls(const json& j, IntegratorControls& c) {
    if (!j.is_object()) fail("\"controls\" must be an object");
    check_keys(j, { "rel_tol", "abs_tol", "max_step", "s_max", "alpha_switch" }, "\"controls\"");
    c.rel_tol = get_number(j, "rel_tol", c.rel_tol);
    c.abs_tol = get_number(j, "abs_tol", c.abs_tol);
    c.max_step = get_number(j, "max_step", c.max_step);
    c.s_max = get_number(j, "s_max", c.s_max);
    c.alpha_switch = get_number(j, "alpha_switch", c.alpha_switch);
    try {
        c.validate();
    } catch (const std::exception& e) {
        fail(std::string("controls: ") + e.what());
    }
}

void parse_grid(const json& j, GridConfig& g) {
    if (!j.is_object()) fail("\"grid\" must be an object");
    check_keys(j, { "M", "theta_max" }, "\"grid\"");
    if (j.contains("M")) {
        if (!j["M"].is_number_integer()) fail("grid \"M\" must be an integer");
        g.M = j["M"].get<int>();
    }
    if (g.M < 8) fail("grid \"M\" must be >= 8");
    g.theta_max = get_number(j, "theta_max", g.theta_max);
    if (!(g.theta_max > 0.0 && g.theta_max < 1.5707963267948966))
        fail("grid \"theta_max\" must lie in (0, pi/2)");
}

void write_atomic(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw NumericalError("cannot open output file " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

struct MergedRow {
    double sigma, s, z, alpha, H, support;
};

// single left-to-right traversal of a catenoid: lower branch reversed (with
// the orientation flip that reversal induces), then the upper branch
std::vector<MergedRow> merged_catenoid_rows(const CatenoidProfile& cat) {
    std::vector<MergedRow> rows;
    auto eval = [&](const ProfileCurve& curve, std::size_t i, double sign, double sigma,
                    double alpha) {
        const ProfilePoint& p = curve.samples[i].point;
        const double hbar = rotational_euclidean_mean_curvature(p, curve.kappa[i], curve.n, curve.kind);
        const double h = hyperbolic_mean_curvature(p.z, hbar, std::cos(p.alpha));
        rows.push_back({ sigma, p.s, p.z, alpha, sign * h, sign * soliton_support(p) });
    };
    const auto& lo = cat.lower_branch;
    for (std::size_t i = lo.samples.size(); i-- > 1;) {
        double alpha = lo.samples[i].point.alpha + 3.141592653589793238462643383279502884;
        eval(lo, i, -1.0, -lo.samples[i].sigma, alpha);
    }
    const auto& up = cat.upper_branch;
    for (std::size_t i = 0; i < up.samples.size(); ++i)
        eval(up, i, +1.0, up.samples[i].sigma, up.samples[i].point.alpha);
    return rows;
}

std::vector<MergedRow> grim_reaper_rows(const GrimReaperProfile& g) {
    std::vector<MergedRow> rows;
    const ProfileCurve& c = g.curve;
    for (std::size_t i = 0; i < c.samples.size(); ++i) {
        const ProfilePoint& p = c.samples[i].point;
        const double hbar = rotational_euclidean_mean_curvature(p, c.kappa[i], c.n, c.kind);
        const double h = hyperbolic_mean_curvature(p.z, hbar, std::cos(p.alpha));
        rows.push_back({ c.samples[i].sigma, p.s, p.z, p.alpha, h, soliton_support(p) });
    }
    return rows;
}

std::string profile_csv(const std::vector<MergedRow>& rows) {
    std::string out = "sigma,s,z,alpha,H,support,residual\n";
    for (const auto& r : rows) {
        out += format_double(r.sigma);
        out += ',';
        out += format_double(r.s);
        out += ',';
        out += format_double(r.z);
        out += ',';
        out += format_double(r.alpha);
        out += ',';
        out += format_double(r.H);
        out += ',';
        out += format_double(r.support);
        out += ',';
        out += format_double(std::abs(r.H - r.support));
        out += '\n';
    }
    return out;
}

json verify_suite(Dimension n, std::uint64_t seed, int tuples) {
    json out;
    out["seed"] = seed;

    // arclength formulas against the vertical-graph chart expressions
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> us(0.1, 10.0), uphi(0.2, 5.0), ud(-3.0, 3.0),
            udd(-5.0, 5.0);
        double err_h = 0.0, err_sup = 0.0;
        for (int k = 0; k < tuples; ++k) {
            const double s = us(rng), phi = uphi(rng), dphi = ud(rng), ddphi = udd(rng);
            const double rho = 1.0 / std::sqrt(1.0 + dphi * dphi);
            const double alpha = std::atan(dphi);
            const double kappa = ddphi * rho * rho * rho;
            const ProfilePoint p{ s, phi, alpha };
            const double h_arc = rotational_euclidean_mean_curvature(p, kappa, n);
            const double h_chart = rho / n.n * (ddphi / (1.0 + dphi * dphi) + (n.n - 1) * dphi / s);
            err_h = std::max(err_h, std::abs(h_arc - h_chart) / std::max(1.0, std::abs(h_chart)));
            const double sup_arc = soliton_support(p);
            const double sup_chart = rho * (phi - s * dphi) / phi;
            err_sup = std::max(err_sup, std::abs(sup_arc - sup_chart) / std::max(1.0, std::abs(sup_chart)));
        }
        json block;
        block["tuples"] = tuples;
        block["max_rel_err_mean_curvature"] = err_h;
        block["max_rel_err_support"] = err_sup;
        block["tolerance"] = 1e-10;
        block["pass"] = err_h < 1e-10 && err_sup < 1e-10;
        out["chart_equivalence"] = block;
    }

    // horosphere: H = <p,N> = 1 exactly at any height
    {
        double err = 0.0;
        for (double h : { 0.1, 1.0, 10.0 })
            for (double s : { 0.5, 1.0, 5.0 }) {
                const ProfilePoint p{ s, h, 0.0 };
                err = std::max(err, std::abs(hyperbolic_mean_curvature(
                                        p.z, rotational_euclidean_mean_curvature(p, 0.0, n), 1.0) -
                                    1.0));
                err = std::max(err, std::abs(soliton_support(p) - 1.0));
            }
        out["horosphere_identity"] = { { "max_abs_err", err }, { "pass", err == 0.0 } };
    }

    // unit upper hemisphere is totally geodesic: H = 0
    {
        double err = 0.0;
        for (int j = 0; j < 100; ++j) {
            const double theta = (j + 0.5) / 100.0 * 1.5707963267948966;
            const ProfilePoint p{ std::sin(theta), std::cos(theta), -theta };
            const double hbar = rotational_euclidean_mean_curvature(p, -1.0, n);
            err = std::max(err, std::abs(hyperbolic_mean_curvature(p.z, hbar, std::cos(p.alpha))));
        }
        out["hemisphere_minimal"] = { { "max_abs_H", err }, { "tolerance", 1e-12 },
                                      { "pass", err < 1e-12 } };
    }

    // orientation flip negates H and <p,N>
    {
        std::mt19937_64 rng(seed + 1);
        std::uniform_real_distribution<double> us(0.1, 5.0), uz(0.2, 5.0), ua(-1.4, 1.4),
            uk(-3.0, 3.0);
        double err = 0.0;
        for (int k = 0; k < 200; ++k) {
            const double s = us(rng), z = uz(rng), a = ua(rng), kap = uk(rng);
            const ProfilePoint p{ s, z, a };
            const ProfilePoint q{ s, z, a + 3.141592653589793238462643383279502884 };
            const double h_p = hyperbolic_mean_curvature(
                z, rotational_euclidean_mean_curvature(p, kap, n), std::cos(p.alpha));
            const double h_q = hyperbolic_mean_curvature(
                z, rotational_euclidean_mean_curvature(q, -kap, n), std::cos(q.alpha));
            err = std::max(err, std::abs(h_p + h_q));
            err = std::max(err, std::abs(soliton_support(p) + soliton_support(q)));
        }
        out["orientation_flip"] = { { "max_abs_err", err }, { "pass", err < 1e-12 } };
    }

    // integrated translators: residual of H = <p,N>, and its invariance under
    // the vertical translations
    {
        IntegratorControls c;
        const CatenoidProfile cat = integrate_catenoid(n, 1.0, c);
        const GrimReaperProfile grim = integrate_grim_reaper(n, 1.0, 1.0, c);
        const double res_up = translator_residual(cat.upper_branch);
        const double res_lo = translator_residual(cat.lower_branch);
        const double res_grim = translator_residual(grim.curve);
        const double res_shift =
            std::abs(translator_residual(translate_profile(cat.upper_branch, 0.7)) - res_up);

        ProfileCurve sphere{ CurveKind::rotational, n, {}, {} };
        for (int j = 1; j < 100; ++j) {
            const double theta = j / 100.0 * 1.5;
            sphere.samples.push_back({ theta, { std::sin(theta), std::cos(theta), -theta } });
        }
        const double res_sphere = translator_residual(sphere);

        json block;
        block["catenoid_max"] = std::max(res_up, res_lo);
        block["grim_reaper_max"] = res_grim;
        block["sphere_profile_min_expected"] = 0.5;
        block["sphere_profile"] = res_sphere;
        block["translation_shift_change"] = res_shift;
        block["tolerance"] = 1e-8;
        block["pass"] = std::max(res_up, res_lo) < 1e-8 && res_grim < 1e-8 && res_sphere > 0.5 &&
                        res_shift < 1e-10;
        out["translator_residuals"] = block;
    }

    bool all = true;
    for (const auto& item : out.items())
        if (item.value().is_object() && item.value().contains("pass"))
            all = all && item.value()["pass"].get<bool>();
    out["pass"] = all;
    return out;
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("top-level document must be an object");
    if (!j.contains("command") || !j["command"].is_string())
        fail("\"command\" must be one of catenoid, grim-reaper, flow, stability, verify");

    RunConfig cfg;
    const std::string cmd = j["command"].get<std::string>();
    if (cmd == "catenoid") cfg.command = Command::catenoid;
    else if (cmd == "grim-reaper") cfg.command = Command::grim_reaper;
    else if (cmd == "flow") cfg.command = Command::flow;
    else if (cmd == "stability") cfg.command = Command::stability;
    else if (cmd == "verify") cfg.command = Command::verify;
    else fail("unknown command \"" + cmd + "\"");

    std::set<std::string> allowed = { "command", "n", "output_dir", "seed" };
    switch (cfg.command) {
    case Command::catenoid: allowed.insert({ "r", "radii", "controls" }); break;
    case Command::grim_reaper: allowed.insert({ "h0", "lambda", "controls" }); break;
    case Command::flow:
        allowed.insert({ "grid", "t_end", "cfl", "record_every", "boundary", "perturbation" });
        break;
    case Command::stability:
        allowed.insert(
            { "grid", "t_end", "cfl", "record_every", "boundary", "perturbation", "eps_list" });
        break;
    case Command::verify: allowed.insert({ "tuples", "controls" }); break;
    }
    check_keys(j, allowed, "the top-level object");

    if (j.contains("n")) {
        if (!j["n"].is_number_integer()) fail("\"n\" must be an integer");
        const int n = j["n"].get<int>();
        if (n < 2) fail("\"n\" must be >= 2 (got " + std::to_string(n) + ")");
        cfg.n = Dimension(n);
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) fail("\"output_dir\" must be a string");
        cfg.output_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) fail("\"seed\" must be an integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("controls")) parse_controls(j["controls"], cfg.controls);

    switch (cfg.command) {
    case Command::catenoid:
        if (j.contains("r") && j.contains("radii")) fail("give either \"r\" or \"radii\", not both");
        if (j.contains("radii")) {
            if (!j["radii"].is_array() || j["radii"].empty()) fail("\"radii\" must be a nonempty array");
            std::vector<double> radii;
            for (const auto& v : j["radii"]) {
                if (!v.is_number()) fail("\"radii\" entries must be numbers");
                radii.push_back(v.get<double>());
                require_positive(radii.back(), "radii");
            }
            cfg.radii = std::move(radii);
        } else {
            cfg.r = get_number(j, "r", cfg.r);
            require_positive(cfg.r, "r");
        }
        break;
    case Command::grim_reaper:
        cfg.h0 = get_number(j, "h0", cfg.h0);
        require_positive(cfg.h0, "h0");
        cfg.lambda = get_number(j, "lambda", cfg.lambda);
        if (cfg.lambda < 0.0) fail("\"lambda\" must be >= 0");
        break;
    case Command::flow:
    case Command::stability:
        if (j.contains("grid")) parse_grid(j["grid"], cfg.grid);
        cfg.t_end = get_number(j, "t_end", cfg.t_end);
        if (!(cfg.t_end >= 0.0)) fail("\"t_end\" must be >= 0");
        cfg.cfl = get_number(j, "cfl", cfg.cfl);
        if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) fail("\"cfl\" must lie in (0, 1]");
        cfg.record_every = get_number(j, "record_every", cfg.record_every);
        if (cfg.record_every < 0.0) fail("\"record_every\" must be >= 0");
        if (j.contains("boundary")) {
            const std::string b = j["boundary"].is_string() ? j["boundary"].get<std::string>() : "";
            if (b == "pin-to-soliton") cfg.boundary = BoundaryMode::pin_to_soliton;
            else if (b == "fixed-dirichlet") cfg.boundary = BoundaryMode::fixed_dirichlet;
            else fail("\"boundary\" must be pin-to-soliton or fixed-dirichlet");
        }
        if (j.contains("perturbation")) cfg.perturbation = parse_perturbation(j["perturbation"]);
        if (cfg.command == Command::stability) {
            if (!cfg.perturbation) fail("stability requires a \"perturbation\" object");
            if (j.contains("eps_list")) {
                if (!j["eps_list"].is_array()) fail("\"eps_list\" must be an array");
                cfg.eps_list.clear();
                for (const auto& v : j["eps_list"]) {
                    if (!v.is_number()) fail("\"eps_list\" entries must be numbers");
                    cfg.eps_list.push_back(v.get<double>());
                    require_positive(cfg.eps_list.back(), "eps_list");
                }
            }
        }
        break;
    case Command::verify:
        if (j.contains("tuples")) {
            if (!j["tuples"].is_number_integer()) fail("\"tuples\" must be an integer");
            cfg.verify_tuples = j["tuples"].get<int>();
            if (cfg.verify_tuples < 1) fail("\"tuples\" must be >= 1");
        }
        break;
    }
    return cfg;
}

std::string report_to_json(const StabilityReport& report) {
    json j;
    j["times"] = report.times;
    j["sup_omega"] = report.sup_omega;
    j["monotone_after"] = report.monotone_after;
    json eps = json::object();
    for (const auto& [e, t] : report.time_to_eps) eps[format_double(e)] = t;
    j["time_to_eps"] = eps;
    j["barrier_ok"] = report.barrier_ok;
    j["barrier_margin"] = report.barrier_margin;
    return j.dump(2) + "\n";
}

StabilityReport report_from_json(const std::string& json_text) {
    json j = json::parse(json_text);
    StabilityReport rep;
    rep.times = j.at("times").get<std::vector<double>>();
    rep.sup_omega = j.at("sup_omega").get<std::vector<double>>();
    rep.monotone_after = j.at("monotone_after").get<double>();
    for (const auto& item : j.at("time_to_eps").items())
        rep.time_to_eps[std::strtod(item.key().c_str(), nullptr)] = item.value().get<double>();
    rep.barrier_ok = j.at("barrier_ok").get<bool>();
    rep.barrier_margin = j.at("barrier_margin").get<double>();
    return rep;
}

void run(const RunConfig& cfg) {
    const fs::path dir = cfg.output_dir;
    fs::create_directories(dir);
    auto note = [&](const std::string& line) {
        if (!cfg.quiet) std::fputs((line + "\n").c_str(), stdout);
    };

    switch (cfg.command) {
    case Command::catenoid: {
        if (cfg.radii) {
            const auto rows = catenoid_family_table(cfg.n, *cfg.radii, cfg.controls);
            std::string csv = "r,r_minus,r_plus,asym_err\n";
            for (const auto& row : rows)
                csv += format_double(row.r) + ',' + format_double(row.r_minus) + ',' +
                       format_double(row.r_plus) + ',' + format_double(row.asymptote_error) + '\n';
            write_atomic(dir / "family.csv", csv);
            note("family.csv: " + std::to_string(rows.size()) + " radii");
        } else {
            IntegratorControls c = cfg.controls;
            c.s_max = std::max(c.s_max, cfg.r + 40.0);
            const CatenoidProfile cat = integrate_catenoid(cfg.n, cfg.r, c);
            write_atomic(dir / "profile.csv", profile_csv(merged_catenoid_rows(cat)));
            note("profile.csv: r-=" + format_double(cat.r_minus) +
                 " r+=" + format_double(cat.r_plus));
        }
        break;
    }
    case Command::grim_reaper: {
        const GrimReaperProfile g = integrate_grim_reaper(cfg.n, cfg.h0, cfg.lambda, cfg.controls);
        write_atomic(dir / "profile.csv", profile_csv(grim_reaper_rows(g)));
        note("profile.csv: lambda-=" + format_double(g.lambda_minus) +
             " lambda+=" + format_double(g.lambda_plus));
        break;
    }
    case Command::flow: {
        auto grid = make_grid(cfg.n, cfg.grid.M, cfg.grid.theta_max);
        RadialGraphState state0 =
            cfg.perturbation ? make_initial(*cfg.perturbation, grid)
                             : make_initial(Perturbation{ PerturbationKind::gaussian_bump, 0.0,
                                                          0.0, 0.3 },
                                            grid);
        FlowControls fc;
        fc.cfl = cfg.cfl;
        fc.t_end = cfg.t_end;
        fc.record_every = cfg.record_every;
        fc.boundary = cfg.boundary;
        const auto traj = evolve(state0, fc);
        std::string csv = "t,theta,u,omega\n";
        for (const auto& st : traj) {
            const OmegaField w = omega(st);
            for (int i = 0; i <= grid->M; ++i)
                csv += format_double(st.t) + ',' + format_double(grid->theta[i]) + ',' +
                       format_double(st.u[i]) + ',' + format_double(w.values[i]) + '\n';
        }
        write_atomic(dir / "trajectory.csv", csv);
        note("trajectory.csv: " + std::to_string(traj.size()) + " records, final sup|omega|=" +
             format_double(omega(traj.back()).sup));
        break;
    }
    case Command::stability: {
        auto grid = make_grid(cfg.n, cfg.grid.M, cfg.grid.theta_max);
        FlowControls fc;
        fc.cfl = cfg.cfl;
        fc.t_end = cfg.t_end;
        fc.record_every = cfg.record_every;
        fc.boundary = cfg.boundary;
        const StabilityReport rep =
            run_stability_experiment(*cfg.perturbation, grid, fc, cfg.eps_list);
        write_atomic(dir / "report.json", report_to_json(rep));
        note("report.json: final sup|omega|=" + format_double(rep.sup_omega.back()) +
             " barrier_ok=" + (rep.barrier_ok ? "true" : "false"));
        break;
    }
    case Command::verify: {
        const json v = verify_suite(cfg.n, cfg.seed, cfg.verify_tuples);
        write_atomic(dir / "verify.json", v.dump(2) + "\n");
        note(std::string("verify.json: pass=") + (v["pass"].get<bool>() ? "true" : "false"));
        break;
    }
    }
}

} // namespace horoflow
