#include "horoflow/translators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <thread>

namespace horoflow {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
// chord-fidelity cap: kappa^2 h^2 / 12 <= 5e-7  =>  h <= sqrt(6e-6)/kappa
constexpr double kChordCap = 2.4494897427831781e-3;

struct OdeState {
    double s, z, a;
};

OdeState axpy(const OdeState& y, double h, const ProfileDerivative& d) {
    return { y.s + h * d.ds, y.z + h * d.dz, y.a + h * d.dalpha };
}

struct BranchResult {
    std::vector<ProfileSample> samples;
    std::vector<double> kappa;
};

// Embedded Dormand-Prince 5(4) with curvature-limited steps, integrating the
// arclength translator system until |s| reaches s_target.  dir = +-1 selects
// the traversal direction in sigma.
BranchResult integrate_branch(OdeState y0, double dir, double s_target, Dimension n,
                              CurveKind kind, const IntegratorControls& c) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    auto rhs = [&](const OdeState& y) { return profile_ode_rhs(y.s, y.z, y.a, n, kind); };

    BranchResult out;
    double sigma = 0.0;
    OdeState y = y0;
    ProfileDerivative k1 = rhs(y);
    out.samples.push_back({ sigma, { y.s, y.z, y.a } });
    out.kappa.push_back(k1.dalpha);

    const double sigma_cap = 10.0 + 4.0 * s_target;
    auto step_cap = [&](double kappa_now) {
        double h = c.max_step;
        const double ak = std::abs(kappa_now);
        if (ak > 1e-12) h = std::min(h, kChordCap / ak);
        return h;
    };

    double h = std::min(1e-4, step_cap(k1.dalpha));
    int consecutive_rejects = 0;

    while (std::abs(y.s) < s_target * (1.0 - 1e-12)) {
        if (sigma > sigma_cap || out.samples.size() > 5'000'000)
            throw IntegrationError("translator ODE: arclength budget exceeded before reaching s_max",
                                   sigma, y.s, y.z, y.a);
        h = std::min(h, step_cap(k1.dalpha));
        const double hs = dir * h;

        OdeState ynew;
        ProfileDerivative k7;
        double errnorm;
        try {
            const ProfileDerivative k2 = rhs(axpy(y, hs * a21, k1));
            const ProfileDerivative k3 =
                rhs({ y.s + hs * (a31 * k1.ds + a32 * k2.ds), y.z + hs * (a31 * k1.dz + a32 * k2.dz),
                      y.a + hs * (a31 * k1.dalpha + a32 * k2.dalpha) });
            const ProfileDerivative k4 = rhs({ y.s + hs * (a41 * k1.ds + a42 * k2.ds + a43 * k3.ds),
                                               y.z + hs * (a41 * k1.dz + a42 * k2.dz + a43 * k3.dz),
                                               y.a + hs * (a41 * k1.dalpha + a42 * k2.dalpha + a43 * k3.dalpha) });
            const ProfileDerivative k5 =
                rhs({ y.s + hs * (a51 * k1.ds + a52 * k2.ds + a53 * k3.ds + a54 * k4.ds),
                      y.z + hs * (a51 * k1.dz + a52 * k2.dz + a53 * k3.dz + a54 * k4.dz),
                      y.a + hs * (a51 * k1.dalpha + a52 * k2.dalpha + a53 * k3.dalpha + a54 * k4.dalpha) });
            const ProfileDerivative k6 =
                rhs({ y.s + hs * (a61 * k1.ds + a62 * k2.ds + a63 * k3.ds + a64 * k4.ds + a65 * k5.ds),
                      y.z + hs * (a61 * k1.dz + a62 * k2.dz + a63 * k3.dz + a64 * k4.dz + a65 * k5.dz),
                      y.a + hs * (a61 * k1.dalpha + a62 * k2.dalpha + a63 * k3.dalpha + a64 * k4.dalpha +
                                  a65 * k5.dalpha) });
            ynew = { y.s + hs * (b1 * k1.ds + b3 * k3.ds + b4 * k4.ds + b5 * k5.ds + b6 * k6.ds),
                     y.z + hs * (b1 * k1.dz + b3 * k3.dz + b4 * k4.dz + b5 * k5.dz + b6 * k6.dz),
                     y.a + hs * (b1 * k1.dalpha + b3 * k3.dalpha + b4 * k4.dalpha + b5 * k5.dalpha +
                                 b6 * k6.dalpha) };
            k7 = rhs(ynew);
            const double es = hs * (e1 * k1.ds + e3 * k3.ds + e4 * k4.ds + e5 * k5.ds + e6 * k6.ds + e7 * k7.ds);
            const double ez = hs * (e1 * k1.dz + e3 * k3.dz + e4 * k4.dz + e5 * k5.dz + e6 * k6.dz + e7 * k7.dz);
            const double ea = hs * (e1 * k1.dalpha + e3 * k3.dalpha + e4 * k4.dalpha + e5 * k5.dalpha +
                                    e6 * k6.dalpha + e7 * k7.dalpha);
            auto sc = [&](double a, double b) { return c.abs_tol + c.rel_tol * std::max(std::abs(a), std::abs(b)); };
            const double r1 = es / sc(y.s, ynew.s), r2 = ez / sc(y.z, ynew.z), r3 = ea / sc(y.a, ynew.a);
            errnorm = std::sqrt((r1 * r1 + r2 * r2 + r3 * r3) / 3.0);
        } catch (const DomainError&) {
            // trial step left the domain; treat as a rejected step
            errnorm = std::numeric_limits<double>::infinity();
            ynew = y;
            k7 = k1;
        }

        if (errnorm > 1.0) {
            h *= std::isfinite(errnorm) ? std::max(0.2, 0.9 * std::pow(errnorm, -0.2)) : 0.25;
            if (++consecutive_rejects > 200 || h < 1e-14 * (1.0 + std::abs(sigma)))
                throw IntegrationError("translator ODE: step size underflow", sigma, y.s, y.z, y.a);
            continue;
        }

        if (std::abs(ynew.s) > s_target) {
            // shrink onto the s = s_max section instead of overshooting
            const double frac = (s_target - std::abs(y.s)) / (std::abs(ynew.s) - std::abs(y.s));
            if (frac > 1e-15 && std::abs(ynew.s) - s_target > 1e-9 * (1.0 + s_target)) {
                h *= std::min(0.95, std::max(frac, 1e-3));
                if (++consecutive_rejects > 200)
                    throw IntegrationError("translator ODE: failed to land on s_max", sigma, y.s, y.z, y.a);
                continue;
            }
        }

        consecutive_rejects = 0;
        sigma += hs;
        y = ynew;
        k1 = k7; // FSAL
        out.samples.push_back({ sigma, { y.s, y.z, y.a } });
        out.kappa.push_back(k1.dalpha);
        h = std::min(c.max_step, h * std::clamp(0.9 * std::pow(std::max(errnorm, 1e-10), -0.2), 0.2, 5.0));
    }
    return out;
}

double asymptote_floor(const IntegratorControls& c, double limit) {
    return 10.0 * c.rel_tol * (1.0 + std::abs(limit));
}

} // namespace

void IntegratorControls::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("integrator: tolerances must be positive");
    if (!(max_step > 0.0)) throw ConfigError("integrator: max_step must be positive");
    if (!(s_max > 0.0)) throw ConfigError("integrator: s_max must be positive");
    if (!(alpha_switch > 0.0) || alpha_switch >= kPi / 2)
        throw ConfigError("integrator: alpha_switch must lie in (0, pi/2)");
}

ProfileDerivative profile_ode_rhs(double s, double z, double alpha, Dimension n, CurveKind kind) {
    if (!(z > 0.0)) throw DomainError("profile ODE: left the half-space (z <= 0)");
    if (kind == CurveKind::rotational && !(s > 0.0))
        throw DomainError("profile ODE: rotation axis is singular (s <= 0)");
    const double sa = std::sin(alpha);
    const double coeff = kind == CurveKind::rotational ? n.n * s / (z * z) + (n.n - 1) / s
                                                       : n.n * s / (z * z);
    return { std::cos(alpha), sa, -sa * coeff };
}

CatenoidProfile integrate_catenoid(Dimension n, double r, const IntegratorControls& controls) {
    controls.validate();
    if (!(r > 0.0)) throw DomainError("integrate_catenoid: neck radius must be positive");
    if (!(controls.s_max > r)) throw DomainError("integrate_catenoid: s_max must exceed the neck radius");

    CatenoidProfile cat;
    cat.n = n;
    cat.neck_radius = r;

    BranchResult up = integrate_branch({ r, 1.0, kPi / 2 }, +1.0, controls.s_max, n,
                                       CurveKind::rotational, controls);
    BranchResult lo = integrate_branch({ r, 1.0, -kPi / 2 }, +1.0, controls.s_max, n,
                                       CurveKind::rotational, controls);
    cat.upper_branch = ProfileCurve{ CurveKind::rotational, n, std::move(up.samples), std::move(up.kappa) };
    cat.lower_branch = ProfileCurve{ CurveKind::rotational, n, std::move(lo.samples), std::move(lo.kappa) };

    const AsymptoteEstimate plus = estimate_asymptote(cat.upper_branch);
    const AsymptoteEstimate minus = estimate_asymptote(cat.lower_branch);
    cat.r_plus = plus.limit;
    cat.r_minus = minus.limit;
    cat.asymptote_error = std::max({ plus.error, minus.error, asymptote_floor(controls, plus.limit) });

    if (!(cat.r_minus > 0.0 && cat.r_minus < 1.0 && cat.r_plus > 1.0))
        throw NumericalError("integrate_catenoid: asymptote heights violate 0 < r- < 1 < r+");
    return cat;
}

GrimReaperProfile integrate_grim_reaper(Dimension n, double h0, double lambda,
                                        const IntegratorControls& controls) {
    controls.validate();
    if (!(h0 > 0.0)) throw DomainError("integrate_grim_reaper: h0 must be positive");
    if (lambda < 0.0) throw DomainError("integrate_grim_reaper: lambda must be >= 0");

    const OdeState center{ 0.0, h0, std::atan(lambda) };
    BranchResult right = integrate_branch(center, +1.0, controls.s_max, n,
                                          CurveKind::parabolic_cylinder, controls);
    BranchResult left = integrate_branch(center, -1.0, controls.s_max, n,
                                         CurveKind::parabolic_cylinder, controls);

    GrimReaperProfile g;
    g.n = n;
    g.h0 = h0;
    g.lambda = lambda;

    // left integration runs sigma downward; reverse and drop the duplicate center
    ProfileCurve merged{ CurveKind::parabolic_cylinder, n, {}, {} };
    merged.samples.reserve(left.samples.size() + right.samples.size() - 1);
    merged.kappa.reserve(left.samples.size() + right.samples.size() - 1);
    for (std::size_t i = left.samples.size(); i-- > 1;) {
        merged.samples.push_back(left.samples[i]);
        merged.kappa.push_back(left.kappa[i]);
    }
    for (std::size_t i = 0; i < right.samples.size(); ++i) {
        merged.samples.push_back(right.samples[i]);
        merged.kappa.push_back(right.kappa[i]);
    }
    g.curve = std::move(merged);

    g.samples.reserve(g.curve.samples.size());
    for (const auto& sm : g.curve.samples)
        g.samples.push_back({ sm.point.s, sm.point.z, std::tan(sm.point.alpha) });

    if (lambda == 0.0) {
        g.lambda_plus = g.lambda_minus = h0;
        g.asymptote_error = 0.0;
        return g;
    }

    std::vector<double> xs, zs;
    xs.reserve(right.samples.size());
    zs.reserve(right.samples.size());
    for (const auto& sm : right.samples) {
        xs.push_back(sm.point.s);
        zs.push_back(sm.point.z);
    }
    const AsymptoteEstimate plus = estimate_asymptote(xs, zs);
    if (std::abs(std::sin(right.samples.back().point.alpha)) >= 1e-6)
        throw AsymptoteError("grim reaper: right tail still sloped at s_max; increase s_max");

    xs.clear();
    zs.clear();
    for (const auto& sm : left.samples) {
        xs.push_back(-sm.point.s);
        zs.push_back(sm.point.z);
    }
    const AsymptoteEstimate minus = estimate_asymptote(xs, zs);
    if (std::abs(std::sin(left.samples.back().point.alpha)) >= 1e-6)
        throw AsymptoteError("grim reaper: left tail still sloped at s_max; increase s_max");

    g.lambda_plus = plus.limit;
    g.lambda_minus = minus.limit;
    g.asymptote_error = std::max({ plus.error, minus.error, asymptote_floor(controls, plus.limit) });

    if (!(g.lambda_minus > 0.0 && g.lambda_minus < h0 && g.lambda_plus > h0))
        throw NumericalError("integrate_grim_reaper: asymptotes violate 0 < lambda- < h0 < lambda+");
    return g;
}

AsymptoteEstimate estimate_asymptote(std::span<const double> x, std::span<const double> z) {
    if (x.size() != z.size() || x.size() < 8)
        throw DomainError("estimate_asymptote: need at least 8 (x, z) samples");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw DomainError("estimate_asymptote: x must be strictly increasing");

    const double x_end = x.back();
    const double x_front = x.front();
    if (!(x_end > 0.0) || !(x_front >= 0.0))
        throw DomainError("estimate_asymptote: tail abscissae must be positive");

    // six-point geometric ladder anchored at the tail end; exact doublings
    // when the branch starts early enough
    double x_lo = x_end / 32.0;
    if (x_lo <= x_front) x_lo = std::max(x_front, x_end / 32.0);
    if (x_lo < x_front || x_lo >= x_end) x_lo = x_front;
    const double q = std::pow(x_end / std::max(x_lo, 1e-300), 1.0 / 5.0);
    if (!(q > 1.0)) throw DomainError("estimate_asymptote: tail range too short for a ladder");

    auto interp = [&](double xt) {
        auto it = std::lower_bound(x.begin(), x.end(), xt);
        if (it == x.begin()) return z.front();
        if (it == x.end()) return z.back();
        const std::size_t j = static_cast<std::size_t>(it - x.begin());
        const double w = (xt - x[j - 1]) / (x[j] - x[j - 1]);
        return z[j - 1] + w * (z[j] - z[j - 1]);
    };

    double lad[6];
    for (int k = 0; k < 6; ++k) lad[k] = interp(x_lo * std::pow(q, k));
    lad[5] = z.back();

    // settled increments sit at the integrator's roundoff-noise scale, well
    // above machine epsilon for long runs
    const double floor_inc =
        2048.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(lad[5]));
    double d[5];
    for (int k = 0; k < 5; ++k) d[k] = lad[k + 1] - lad[k];
    for (int k = 1; k < 5; ++k) {
        if (std::abs(d[k]) <= floor_inc) continue;
        const bool decaying = std::abs(d[k - 1]) > floor_inc && d[k] * d[k - 1] > 0.0 &&
                              std::abs(d[k]) <= 0.9 * std::abs(d[k - 1]) + floor_inc;
        if (!decaying)
            throw AsymptoteError("estimate_asymptote: tail increments not yet decaying geometrically");
    }

    const double denom = d[4] - d[3];
    if (std::abs(denom) <= floor_inc) return { lad[5], std::abs(d[4]) };
    const double corr = d[4] * d[4] / denom;
    if (std::abs(corr) > 10.0 * std::abs(d[4])) return { lad[5], std::abs(d[4]) };
    return { lad[5] - corr, std::abs(corr) };
}

AsymptoteEstimate estimate_asymptote(const ProfileCurve& branch) {
    if (branch.samples.size() < 8) throw DomainError("estimate_asymptote: branch too short");
    if (std::abs(std::sin(branch.samples.back().point.alpha)) >= 1e-6)
        throw AsymptoteError("estimate_asymptote: branch tail still sloped; increase s_max");
    std::vector<double> xs, zs;
    xs.reserve(branch.samples.size());
    zs.reserve(branch.samples.size());
    for (const auto& sm : branch.samples) {
        xs.push_back(sm.point.s);
        zs.push_back(sm.point.z);
    }
    return estimate_asymptote(xs, zs);
}

double chart_residual_vertical(const ProfileCurve& curve, double alpha_switch) {
    const std::vector<double> kappa = profile_curvature(curve);
    double worst = -1.0;
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
        const ProfilePoint& p = curve.samples[i].point;
        if (std::abs(p.alpha) >= alpha_switch) continue;
        if (curve.kind == CurveKind::rotational && p.s == 0.0) continue;
        const double ca = std::cos(p.alpha);
        const double dphi = std::tan(p.alpha);
        const double ddphi = kappa[i] / (ca * ca * ca);
        const double coeff = curve.kind == CurveKind::rotational
                                 ? curve.n.n * p.s / (p.z * p.z) + (curve.n.n - 1) / p.s
                                 : curve.n.n * p.s / (p.z * p.z);
        worst = std::max(worst, std::abs(ddphi + dphi * (1.0 + dphi * dphi) * coeff));
    }
    if (worst < 0.0) throw DomainError("chart_residual_vertical: no samples in the graph region");
    return worst;
}

HorizontalChartResidual chart_residual_horizontal(const ProfileCurve& curve, double alpha_switch) {
    const std::vector<double> kappa = profile_curvature(curve);
    double worst = -1.0;
    double min_conv = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
        const ProfilePoint& p = curve.samples[i].point;
        const double off = std::min(std::abs(p.alpha - kPi / 2), std::abs(p.alpha + kPi / 2));
        if (off >= alpha_switch) continue;
        if (curve.kind == CurveKind::rotational && p.s == 0.0) continue;
        const double sa = std::sin(p.alpha);
        const double dd = std::cos(p.alpha) / sa;      // d' = ds/dz
        const double ddd = -kappa[i] / (sa * sa * sa); // d'' over the chart
        // with d = s the chart ODE coefficient equals n d/z^2 + (n-1)/d
        const double coeff = curve.kind == CurveKind::rotational
                                 ? curve.n.n * p.s / (p.z * p.z) + (curve.n.n - 1) / p.s
                                 : curve.n.n * p.s / (p.z * p.z);
        worst = std::max(worst, std::abs(ddd - (1.0 + dd * dd) * coeff));
        min_conv = std::min(min_conv, ddd);
    }
    if (worst < 0.0) throw DomainError("chart_residual_horizontal: no samples in the neck region");
    return { worst, min_conv };
}

unsigned thread_cap() {
    if (const char* env = std::getenv("HOROFLOW_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

std::vector<CatenoidFamilyRow> catenoid_family_table(Dimension n, std::span<const double> radii,
                                                     const IntegratorControls& controls) {
    controls.validate();
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw DomainError("catenoid_family_table: radii must be positive");
        if (i > 0 && !(radii[i] > radii[i - 1]))
            throw DomainError("catenoid_family_table: radii must be sorted increasing");
    }

    std::vector<CatenoidFamilyRow> rows(radii.size());
    std::atomic<std::size_t> next{ 0 };
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= radii.size()) return;
            IntegratorControls c = controls;
            c.s_max = std::max(controls.s_max, radii[i] + 40.0);
            const CatenoidProfile cat = integrate_catenoid(n, radii[i], c);
            rows[i] = { radii[i], cat.r_minus, cat.r_plus, cat.asymptote_error };
        }
    };

    const unsigned workers = std::min<std::size_t>(thread_cap(), radii.size());
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::future<void>> futs;
        for (unsigned w = 0; w < workers; ++w) futs.push_back(std::async(std::launch::async, worker));
        for (auto& f : futs) f.get();
    }
    return rows;
}

} // namespace horoflow
