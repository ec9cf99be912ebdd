#include "horoflow/radial_flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace horoflow {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

double boundary_value_at(const RadialGraphState& state, const FlowControls& c, double t) {
    if (c.boundary_value) return c.boundary_value(t);
    if (c.boundary == BoundaryMode::pin_to_soliton)
        return exact_soliton(state.grid->theta.back(), t);
    return state.u.back(); // fixed Dirichlet: keep the initial boundary value
}
} // namespace

HemisphereGrid::HemisphereGrid(Dimension n, int node_count, double theta_max)
    : n(n), M(node_count), theta_max(theta_max) {
    if (M < 8) throw DomainError("hemisphere grid: need at least 8 intervals");
    if (!(theta_max > 0.0) || !(theta_max < kPi / 2))
        throw DomainError("hemisphere grid: theta_max must lie in (0, pi/2)");
    dtheta = theta_max / M;
    theta.resize(M + 1);
    cos_theta.resize(M + 1);
    sin_theta.resize(M + 1);
    cot_theta.resize(M + 1);
    for (int i = 0; i <= M; ++i) {
        theta[i] = i * dtheta;
        cos_theta[i] = std::cos(theta[i]);
        sin_theta[i] = std::sin(theta[i]);
        cot_theta[i] = i == 0 ? 0.0 : cos_theta[i] / sin_theta[i];
    }
}

std::shared_ptr<const HemisphereGrid> make_grid(Dimension n, int node_count, double theta_max) {
    return std::make_shared<const HemisphereGrid>(n, node_count, theta_max);
}

RadialGraphState make_state(std::shared_ptr<const HemisphereGrid> grid, std::vector<double> u,
                            double t) {
    if (!grid) throw DomainError("radial graph state: null grid");
    if (static_cast<int>(u.size()) != grid->M + 1)
        throw DomainError("radial graph state: u must have one value per grid node");
    for (double v : u)
        if (!std::isfinite(v)) throw DomainError("radial graph state: u must be finite");
    return { std::move(grid), std::move(u), t };
}

void FlowControls::validate() const {
    if (!(cfl > 0.0) || cfl > 1.0) throw ConfigError("flow: cfl must lie in (0, 1]");
    if (!(record_every >= 0.0)) throw ConfigError("flow: record_every must be >= 0");
}

double exact_soliton(double theta, double t) {
    if (!(theta >= 0.0) || theta >= kPi / 2)
        throw DomainError("exact_soliton: theta must lie in [0, pi/2)");
    return t - std::log(std::cos(theta));
}

ProfileCurve radial_profile(const RadialGraphState& state) {
    const HemisphereGrid& g = *state.grid;
    const int M = g.M;
    std::vector<double> s(M + 1), z(M + 1);
    for (int i = 0; i <= M; ++i) {
        const double r = std::exp(state.u[i]);
        s[i] = r * g.sin_theta[i];
        z[i] = r * g.cos_theta[i];
    }
    ProfileCurve curve;
    curve.kind = CurveKind::rotational;
    curve.n = g.n;
    curve.samples.reserve(M);
    double sigma = 0.0;
    for (int i = 1; i <= M; ++i) {
        double ds, dz;
        if (i < M) {
            ds = (s[i + 1] - s[i - 1]) / (2.0 * g.dtheta);
            dz = (z[i + 1] - z[i - 1]) / (2.0 * g.dtheta);
        } else {
            ds = (3.0 * s[M] - 4.0 * s[M - 1] + s[M - 2]) / (2.0 * g.dtheta);
            dz = (3.0 * z[M] - 4.0 * z[M - 1] + z[M - 2]) / (2.0 * g.dtheta);
        }
        sigma += std::hypot(s[i] - s[i - 1], z[i] - z[i - 1]);
        curve.samples.push_back({ sigma, { s[i], z[i], std::atan2(dz, ds) } });
    }
    return curve;
}

std::vector<double> flow_rhs(const RadialGraphState& state) {
    const HemisphereGrid& g = *state.grid;
    const int M = g.M;
    const int n = g.n.n;
    const std::vector<double>& u = state.u;
    const double idt = 1.0 / g.dtheta;
    const double idt2 = idt * idt;

    std::vector<double> out(M + 1, 0.0);

    // pole node: even reflection gives u_theta = 0 and the rotational
    // curvature term collapses onto the profile curvature (axis limit), so
    // the right-hand side reduces to the second difference
    out[0] = 2.0 * (u[1] - u[0]) * idt2;

    for (int i = 1; i < M; ++i) {
        double g1;
        if (i == 1)
            g1 = (-u[3] + 8.0 * u[2] - 8.0 * u[0] + u[1]) / 12.0 * idt; // u[-1] := u[1]
        else if (i == M - 1)
            g1 = (-u[i - 3] + 6.0 * u[i - 2] - 18.0 * u[i - 1] + 10.0 * u[i] + 3.0 * u[i + 1]) / 12.0 * idt;
        else
            g1 = (-u[i + 2] + 8.0 * u[i + 1] - 8.0 * u[i - 1] + u[i - 2]) / 12.0 * idt;
        const double g2 = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * idt2;
        const double q = 1.0 + g1 * g1;
        const double c = g.cos_theta[i];
        // z * Hbar = (cos/n) [ g2/q - 1 + (n-1)(g1 cot - 1) ],  cos(alpha) =
        // (cos + g1 sin)/sqrt(q);  rhs = cos * sqrt(q) * (z Hbar + cos alpha)
        out[i] = c * ((c / n) * (g2 / q - 1.0 + (n - 1) * (g1 * g.cot_theta[i] - 1.0)) + c +
                      g1 * g.sin_theta[i]);
    }

    for (int i = 0; i <= M; ++i)
        if (!std::isfinite(out[i]))
            throw NumericalError("flow_rhs: non-finite curvature at node " + std::to_string(i));
    return out;
}

namespace {

RadialGraphState rk4_step(const RadialGraphState& state, double dt, const FlowControls& controls) {
    const int M = state.grid->M;
    RadialGraphState next = state;
    if (dt == 0.0) return next;

    next.u[M] = boundary_value_at(state, controls, state.t);
    const std::vector<double> k1 = flow_rhs(next);

    RadialGraphState stage = state;
    for (int i = 0; i < M; ++i) stage.u[i] = state.u[i] + 0.5 * dt * k1[i];
    stage.u[M] = boundary_value_at(state, controls, state.t + 0.5 * dt);
    const std::vector<double> k2 = flow_rhs(stage);

    for (int i = 0; i < M; ++i) stage.u[i] = state.u[i] + 0.5 * dt * k2[i];
    const std::vector<double> k3 = flow_rhs(stage);

    for (int i = 0; i < M; ++i) stage.u[i] = state.u[i] + dt * k3[i];
    stage.u[M] = boundary_value_at(state, controls, state.t + dt);
    const std::vector<double> k4 = flow_rhs(stage);

    for (int i = 0; i < M; ++i)
        next.u[i] = state.u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    next.t = state.t + dt;
    next.u[M] = boundary_value_at(state, controls, next.t);
    return next;
}

} // namespace

RadialGraphState step(const RadialGraphState& state, double dt, const FlowControls& controls) {
    controls.validate();
    const double dt_max = controls.cfl * state.grid->dtheta * state.grid->dtheta;
    if (dt > dt_max * (1.0 + 1e-12))
        throw NumericalError("step rejected: dt exceeds cfl * dtheta^2");
    if (dt < 0.0) throw DomainError("step: dt must be >= 0");
    return rk4_step(state, dt, controls);
}

std::vector<RadialGraphState> evolve(const RadialGraphState& state, const FlowControls& controls) {
    controls.validate();
    if (!(controls.t_end >= state.t)) throw DomainError("evolve: t_end must be >= state.t");

    std::vector<RadialGraphState> trajectory;
    const double span = controls.t_end - state.t;
    if (span == 0.0) {
        trajectory.push_back(state);
        return trajectory;
    }

    const double dt_max = controls.cfl * state.grid->dtheta * state.grid->dtheta;
    const long steps = static_cast<long>(std::ceil(span / dt_max));
    const double dt = span / steps;

    long record_stride = steps; // record only the endpoints by default
    if (controls.record_every > 0.0)
        record_stride = std::max(1L, static_cast<long>(std::llround(controls.record_every / dt)));

    RadialGraphState current = state;
    trajectory.push_back(current);
    for (long k = 1; k <= steps; ++k) {
        current = rk4_step(current, dt, controls);
        current.t = state.t + k * dt; // keep recorded times exact multiples
        if (k % record_stride == 0 || k == steps) trajectory.push_back(current);
    }
    return trajectory;
}

OmegaField omega(const RadialGraphState& state) {
    const HemisphereGrid& g = *state.grid;
    OmegaField w;
    w.values.resize(g.M + 1);
    w.sup = 0.0;
    for (int i = 0; i <= g.M; ++i) {
        w.values[i] = state.u[i] - exact_soliton(g.theta[i], state.t);
        w.sup = std::max(w.sup, std::abs(w.values[i]));
    }
    return w;
}

} // namespace horoflow
