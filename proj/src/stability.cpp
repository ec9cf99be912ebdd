#include "horoflow/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace horoflow {

namespace {

double perturbation_value(const Perturbation& p, double theta, double theta_max) {
    switch (p.kind) {
    case PerturbationKind::gaussian_bump: {
        const double x = (theta - p.center) / p.width;
        return p.amplitude * std::exp(-0.5 * x * x);
    }
    case PerturbationKind::compact_bump: {
        const double x = (theta - p.center) / p.width;
        if (std::abs(x) >= 1.0) return 0.0;
        return p.amplitude * std::exp(1.0 - 1.0 / (1.0 - x * x));
    }
    case PerturbationKind::decaying_tail: {
        const double c = std::cos(theta);
        double taper = 1.0;
        const double ramp = 0.1 * theta_max;
        if (theta > theta_max - ramp) {
            const double x = (theta - (theta_max - ramp)) / ramp; // 0 at ramp start, 1 at theta_max
            const double y = 1.0 - x * x;
            taper = y * y;
            if (theta >= theta_max) taper = 0.0;
        }
        return p.amplitude * c * c * taper;
    }
    }
    throw DomainError("perturbation: unknown kind");
}

double interp_branch_height(const ProfileCurve& branch, double s) {
    const auto& sm = branch.samples;
    if (s <= sm.front().point.s) return sm.front().point.z;
    if (s >= sm.back().point.s) return sm.back().point.z;
    auto it = std::lower_bound(sm.begin(), sm.end(), s, [](const ProfileSample& a, double v) {
        return a.point.s < v;
    });
    const auto hi = it;
    const auto lo = it - 1;
    const double w = (s - lo->point.s) / (hi->point.s - lo->point.s);
    return lo->point.z + w * (hi->point.z - lo->point.z);
}

constexpr double kBarrierTableRadii[] = { 1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1, 2e-1, 5e-1, 1.0 };

struct SupSeries {
    std::vector<double> times, sup;
};

double monotone_after_time(const SupSeries& series, std::span<const double> pos, double slack) {
    // latest violation of pos_{k+1} <= pos_k + slack decides the onset
    double onset = series.times.front();
    for (std::size_t k = 0; k + 1 < pos.size(); ++k)
        if (pos[k + 1] > pos[k] + slack) onset = series.times[k + 1];
    return onset;
}

void fill_report_series(StabilityReport& rep, const SupSeries& series, std::span<const double> eps_list,
                        double slack) {
    rep.times = series.times;
    rep.sup_omega = series.sup;
    std::vector<double> pos(series.sup.begin(), series.sup.end());
    rep.monotone_after = monotone_after_time(series, pos, slack);
    for (double eps : eps_list) {
        for (std::size_t k = 0; k < series.sup.size(); ++k) {
            if (series.sup[k] < eps) {
                rep.time_to_eps[eps] = series.times[k];
                break;
            }
        }
    }
}

} // namespace

RadialGraphState make_initial(const Perturbation& pert, std::shared_ptr<const HemisphereGrid> grid) {
    if (!grid) throw DomainError("make_initial: null grid");
    if (!std::isfinite(pert.amplitude)) throw DomainError("make_initial: amplitude must be finite");
    if (!(pert.width > 0.0)) throw DomainError("make_initial: width must be positive");
    if (pert.center < 0.0 || pert.center > grid->theta_max)
        throw DomainError("make_initial: center must lie in [0, theta_max]");

    const double tail = std::abs(perturbation_value(pert, grid->theta_max, grid->theta_max));
    if (pert.kind == PerturbationKind::decaying_tail && !(tail < 1e-12))
        throw DomainError("make_initial: decaying-tail perturbation must vanish at theta_max");

    std::vector<double> u(grid->M + 1);
    for (int i = 0; i <= grid->M; ++i)
        u[i] = exact_soliton(grid->theta[i], 0.0) +
               perturbation_value(pert, grid->theta[i], grid->theta_max);
    return make_state(grid, std::move(u), 0.0);
}

BarrierEnvelope::BarrierEnvelope(double epsilon, CatenoidProfile lower_catenoid,
                                 CatenoidProfile upper_catenoid)
    : minus_(std::move(lower_catenoid)), plus_(std::move(upper_catenoid)), eps_(epsilon) {
    if (!(epsilon > 0.0)) throw DomainError("barrier envelope: epsilon must be positive (no catenoid fits a degenerate slab)");
    auto center_in_slab = [&](const CatenoidProfile& cat, double slab_lo, double slab_hi) {
        const double lo = std::log(cat.r_minus), hi = std::log(cat.r_plus);
        const double scale = 0.5 * (slab_lo + slab_hi) - 0.5 * (lo + hi);
        if (!(scale + lo > slab_lo && scale + hi < slab_hi))
            throw DomainError("barrier envelope: catenoid slab does not fit inside the eps/2 slab");
        return scale;
    };
    log_scale_plus_ = center_in_slab(plus_, epsilon / 2, epsilon);
    log_scale_minus_ = center_in_slab(minus_, -epsilon, -epsilon / 2);
}

BarrierBounds BarrierEnvelope::heights_at(double s, double t) const {
    BarrierBounds b;
    const double m_plus = std::exp(log_scale_plus_ + t);
    const double m_minus = std::exp(log_scale_minus_ + t);
    if (s > m_plus * plus_.neck_radius) {
        b.upper_in_domain = true;
        b.upper = m_plus * interp_branch_height(plus_.lower_branch, s / m_plus);
    }
    if (s > m_minus * minus_.neck_radius) {
        b.lower_in_domain = true;
        b.lower = m_minus * interp_branch_height(minus_.upper_branch, s / m_minus);
    }
    return b;
}

double BarrierEnvelope::lower_neck_radius(double t) const {
    return std::exp(log_scale_minus_ + t) * minus_.neck_radius;
}

double BarrierEnvelope::upper_neck_radius(double t) const {
    return std::exp(log_scale_plus_ + t) * plus_.neck_radius;
}

BarrierEnvelope barrier_envelope(double epsilon, const CatenoidProfile& lower_catenoid,
                                 const CatenoidProfile& upper_catenoid) {
    return BarrierEnvelope(epsilon, lower_catenoid, upper_catenoid);
}

double select_barrier_radius(std::span<const CatenoidFamilyRow> table, double epsilon) {
    if (!(epsilon > 0.0)) throw DomainError("select_barrier_radius: epsilon must be positive");
    for (const auto& row : table) {
        const double lo = std::abs(std::log(row.r_minus));
        const double hi = std::abs(std::log(row.r_plus));
        if (lo < epsilon / 2 && hi < epsilon / 2 && lo + hi < epsilon / 2) return row.r;
    }
    throw DomainError("select_barrier_radius: no catenoid in the table fits the eps/2 slab");
}

StabilityReport run_stability_experiment(const Perturbation& pert,
                                         std::shared_ptr<const HemisphereGrid> grid,
                                         const FlowControls& controls,
                                         std::span<const double> eps_list) {
    const RadialGraphState state0 = make_initial(pert, grid);
    const double sup0 = omega(state0).sup;
    const double eps_b = std::max(2.5 * sup0, 0.05);

    const std::vector<CatenoidFamilyRow> table =
        catenoid_family_table(grid->n, kBarrierTableRadii, IntegratorControls{});
    const double r_b = select_barrier_radius(table, eps_b);
    const CatenoidProfile barrier_cat = integrate_catenoid(grid->n, r_b, IntegratorControls{});
    const BarrierEnvelope env(eps_b, barrier_cat, barrier_cat);

    const std::vector<RadialGraphState> traj = evolve(state0, controls);

    SupSeries series;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const RadialGraphState& st : traj) {
        const OmegaField w = omega(st);
        series.times.push_back(st.t);
        series.sup.push_back(w.sup);
        for (int i = 1; i <= grid->M; ++i) {
            const double s = std::exp(st.u[i]) * grid->sin_theta[i];
            const double log_z = st.u[i] + std::log(grid->cos_theta[i]);
            const BarrierBounds b = env.heights_at(s, st.t);
            if (b.upper_in_domain) min_margin = std::min(min_margin, std::log(b.upper) - log_z);
            if (b.lower_in_domain) min_margin = std::min(min_margin, log_z - std::log(b.lower));
        }
    }

    StabilityReport rep;
    const double slack = 10.0 * grid->dtheta * grid->dtheta;
    fill_report_series(rep, series, eps_list, slack);
    rep.barrier_margin = min_margin;
    rep.barrier_ok = min_margin >= -grid->dtheta; // one grid cell of log-height slack
    return rep;
}

StabilityReport run_stability_experiment_mirrored(const Perturbation& pert,
                                                  std::shared_ptr<const HemisphereGrid> grid,
                                                  const FlowControls& controls,
                                                  std::span<const double> eps_list) {
    RadialGraphState state0 = make_initial(pert, grid);
    for (double& v : state0.u) v = -v;

    FlowControls mirrored = controls;
    const double theta_b = grid->theta_max;
    mirrored.boundary_value = [theta_b](double t) { return -exact_soliton(theta_b, t); };

    const std::vector<RadialGraphState> traj = evolve(state0, mirrored);

    SupSeries series;
    for (const RadialGraphState& st : traj) {
        double sup = 0.0;
        for (int i = 0; i <= grid->M; ++i)
            sup = std::max(sup, std::abs(st.u[i] + exact_soliton(grid->theta[i], st.t)));
        series.times.push_back(st.t);
        series.sup.push_back(sup);
    }

    StabilityReport rep;
    const double slack = 10.0 * grid->dtheta * grid->dtheta;
    fill_report_series(rep, series, eps_list, slack);
    rep.barrier_ok = true;
    rep.barrier_margin = std::numeric_limits<double>::infinity();
    return rep;
}

double epsilon_radius_calibration(const RadialGraphState& state0, double eps) {
    if (!(eps > 0.0)) throw DomainError("epsilon_radius_calibration: eps must be positive");
    const OmegaField w = omega(state0);
    const HemisphereGrid& g = *state0.grid;
    double radius = 0.0;
    for (int i = 0; i <= g.M; ++i)
        if (std::abs(w.values[i]) > eps / 2)
            radius = std::max(radius, std::exp(state0.u[i]) * g.sin_theta[i]);
    return radius;
}

} // namespace horoflow
