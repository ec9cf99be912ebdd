#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "horoflow/radial_flow.hpp"

using namespace horoflow;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kThetaMax = 0.495 * kPi;

RadialGraphState soliton_state(std::shared_ptr<const HemisphereGrid> grid, double t = 0.0) {
    std::vector<double> u(grid->M + 1);
    for (int i = 0; i <= grid->M; ++i) u[i] = exact_soliton(grid->theta[i], t);
    return make_state(grid, std::move(u), t);
}
} // namespace

TEST_CASE("exact soliton graph function") {
    CHECK(exact_soliton(0.0, 0.0) == 0.0);
    CHECK(exact_soliton(kPi / 3, 1.0) == doctest::Approx(1.0 + std::log(2.0)).epsilon(1e-15));
    // the graph is the horosphere at height e^t
    for (double theta : { 0.1, 0.7, 1.4 })
        CHECK(std::exp(exact_soliton(theta, 0.8)) * std::cos(theta) ==
              doctest::Approx(std::exp(0.8)).epsilon(1e-14));
    CHECK_THROWS_AS(exact_soliton(kPi / 2, 0.0), DomainError);
    CHECK_THROWS_AS(exact_soliton(-0.1, 0.0), DomainError);
}

TEST_CASE("radial profile of basic states") {
    auto grid = make_grid(Dimension(2), 64, kThetaMax);

    // u = 0: quarter circle of the unit hemisphere
    RadialGraphState flat = make_state(grid, std::vector<double>(65, 0.0), 0.0);
    ProfileCurve qc = radial_profile(flat);
    for (const auto& sm : qc.samples) {
        CHECK(sm.point.s * sm.point.s + sm.point.z * sm.point.z == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(sm.point.z > 0.0);
    }

    // u = c: radial dilation by e^c
    RadialGraphState dilated = make_state(grid, std::vector<double>(65, 0.7), 0.0);
    for (const auto& sm : radial_profile(dilated).samples)
        CHECK(std::hypot(sm.point.s, sm.point.z) == doctest::Approx(std::exp(0.7)).epsilon(1e-13));

    // the soliton graph is the height-1 horosphere at t = 0
    RadialGraphState hs = soliton_state(grid);
    for (const auto& sm : radial_profile(hs).samples) {
        CHECK(sm.point.z == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(sm.point.alpha) < 1e-10);
    }
}

TEST_CASE("flow rhs is exactly stationary on the totally geodesic hemisphere") {
    auto grid = make_grid(Dimension(2), 200, kThetaMax);
    RadialGraphState flat = make_state(grid, std::vector<double>(201, 0.0), 0.0);
    for (double v : flow_rhs(flat)) CHECK(v == 0.0);
}

TEST_CASE("flow rhs equals 1 on the exact soliton, order >= 1.9") {
    // refinement sequence dtheta = {2e-3, 1e-3, 5e-4} * pi/2
    std::vector<double> devs;
    for (int M : { 495, 990, 1980 }) {
        auto grid = make_grid(Dimension(2), M, kThetaMax);
        const RadialGraphState st = soliton_state(grid, 0.3);
        const std::vector<double> rhs = flow_rhs(st);
        double dev = 0.0;
        for (int i = 0; i < M; ++i) dev = std::max(dev, std::abs(rhs[i] - 1.0));
        devs.push_back(dev);
    }
    CHECK(devs[0] < 1e-2);
    CHECK(std::log2(devs[0] / devs[1]) > 1.9);
    CHECK(std::log2(devs[1] / devs[2]) > 1.9);
}

TEST_CASE("flow rhs drops below 1 at the peak of an upward bump") {
    for (int M : { 400, 800 }) { // the refined grid acts as the one-step cross-check
        auto grid = make_grid(Dimension(2), M, kThetaMax);
        std::vector<double> u(M + 1);
        int peak = 0;
        for (int i = 0; i <= M; ++i) {
            const double bump = 0.05 * std::exp(-0.5 * std::pow(grid->theta[i] / 0.3, 2));
            u[i] = exact_soliton(grid->theta[i], 0.0) + bump;
            if (u[i] - exact_soliton(grid->theta[i], 0.0) >
                u[peak] - exact_soliton(grid->theta[peak], 0.0))
                peak = i;
        }
        const std::vector<double> rhs = flow_rhs(make_state(grid, std::move(u), 0.0));
        CHECK(rhs[peak] < 1.0);
    }
}

TEST_CASE("flow rhs depends on u only through its differences") {
    auto grid = make_grid(Dimension(2), 200, kThetaMax);
    std::vector<double> u(201), shifted(201);
    for (int i = 0; i <= 200; ++i) {
        u[i] = exact_soliton(grid->theta[i], 0.0) +
               0.1 * std::exp(-0.5 * std::pow(grid->theta[i] / 0.4, 2));
        shifted[i] = u[i] + 0.5;
    }
    const std::vector<double> a = flow_rhs(make_state(grid, u, 0.0));
    const std::vector<double> b = flow_rhs(make_state(grid, shifted, 0.0));
    // only the rounding of the stored u_i + c values separates the two
    for (int i = 0; i <= 200; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
}

TEST_CASE("flow rhs matches the literal profile-and-convert path") {
    const int M = 800;
    auto grid = make_grid(Dimension(2), M, kThetaMax);
    std::vector<double> u(M + 1);
    for (int i = 0; i <= M; ++i)
        u[i] = exact_soliton(grid->theta[i], 0.0) +
               0.08 * std::exp(-0.5 * std::pow((grid->theta[i] - 0.4) / 0.25, 2));
    const RadialGraphState st = make_state(grid, std::move(u), 0.0);
    const std::vector<double> rhs = flow_rhs(st);

    const ProfileCurve prof = radial_profile(st); // samples are nodes 1..M
    const std::vector<double> kappa = profile_curvature(prof);
    double worst = 0.0;
    for (int i = 2; i < M - 2; ++i) {
        const ProfilePoint& p = prof.samples[i - 1].point;
        const double hbar = rotational_euclidean_mean_curvature(p, kappa[i - 1], grid->n);
        const double h = hyperbolic_mean_curvature(p.z, hbar, std::cos(p.alpha));
        const double ut = (st.u[i + 1] - st.u[i - 1]) / (2.0 * grid->dtheta);
        const double literal = grid->cos_theta[i] * std::sqrt(1.0 + ut * ut) * h;
        worst = std::max(worst, std::abs(rhs[i] - literal));
    }
    CHECK(worst < 5e-4); // both are O(dtheta^2) discretizations of the same operator
}

TEST_CASE("step: identity at dt = 0, CFL guard, NaN detection") {
    auto grid = make_grid(Dimension(2), 64, kThetaMax);
    const RadialGraphState st = soliton_state(grid);
    FlowControls fc;
    const RadialGraphState same = step(st, 0.0, fc);
    CHECK(same.u == st.u);
    CHECK(same.t == st.t);

    CHECK_THROWS_AS(step(st, 1.0, fc), NumericalError); // dt far above cfl * dtheta^2

    RadialGraphState bad = st;
    bad.u[10] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(flow_rhs(bad), NumericalError);
}

TEST_CASE("evolving the hemisphere is exactly stationary") {
    auto grid = make_grid(Dimension(2), 100, kThetaMax);
    RadialGraphState flat = make_state(grid, std::vector<double>(101, 0.0), 0.0);
    FlowControls fc;
    fc.t_end = 0.25;
    fc.cfl = 0.5;
    fc.boundary = BoundaryMode::fixed_dirichlet;
    const auto traj = evolve(flat, fc);
    for (double v : traj.back().u) CHECK(v == 0.0);
}

TEST_CASE("evolved soliton self-converges at second order or better") {
    double errs[2];
    int k = 0;
    for (int M : { 100, 200 }) {
        auto grid = make_grid(Dimension(2), M, kThetaMax);
        FlowControls fc;
        fc.t_end = 0.25;
        fc.cfl = 0.5;
        fc.record_every = 0.0;
        const auto traj = evolve(soliton_state(grid), fc);
        errs[k++] = omega(traj.back()).sup;
    }
    CHECK(errs[0] > errs[1]);
    CHECK(errs[0] / errs[1] > 3.0); // about 4 at second order, more with the wide stencil
}

TEST_CASE("discrete comparison principle up to truncation slack") {
    const int M = 200;
    auto grid = make_grid(Dimension(2), M, kThetaMax);
    std::vector<double> lo(M + 1), hi(M + 1);
    for (int i = 0; i <= M; ++i) {
        const double v0 = exact_soliton(grid->theta[i], 0.0);
        const double bump = std::exp(-0.5 * std::pow(grid->theta[i] / 0.3, 2));
        lo[i] = v0 - 0.03 * bump;
        hi[i] = v0 + 0.05 * bump;
    }
    FlowControls fc;
    fc.t_end = 0.3;
    fc.cfl = 0.5;
    fc.record_every = 0.05;
    const auto ta = evolve(make_state(grid, lo, 0.0), fc);
    const auto tb = evolve(make_state(grid, hi, 0.0), fc);
    REQUIRE(ta.size() == tb.size());
    const double slack = 10.0 * grid->dtheta * grid->dtheta;
    for (std::size_t k = 0; k < ta.size(); ++k)
        for (int i = 0; i <= M; ++i) CHECK(ta[k].u[i] <= tb[k].u[i] + slack);
}

TEST_CASE("translation equivariance of the evolved flow") {
    const int M = 200;
    auto grid = make_grid(Dimension(2), M, kThetaMax);
    std::vector<double> u(M + 1), v(M + 1);
    for (int i = 0; i <= M; ++i) {
        u[i] = exact_soliton(grid->theta[i], 0.0) +
               0.1 * std::exp(-0.5 * std::pow(grid->theta[i] / 0.3, 2));
        v[i] = u[i] + 0.5;
    }
    FlowControls fc;
    fc.t_end = 0.3;
    fc.cfl = 0.5;
    fc.record_every = 0.0;
    // shifting u by c shifts the soliton pin too
    FlowControls fc_shift = fc;
    fc_shift.boundary_value = [&](double t) { return exact_soliton(grid->theta.back(), t) + 0.5; };
    const auto base = evolve(make_state(grid, u, 0.0), fc);
    const auto shifted = evolve(make_state(grid, v, 0.0), fc_shift);
    double worst = 0.0;
    for (int i = 0; i <= M; ++i)
        worst = std::max(worst, std::abs(shifted.back().u[i] - base.back().u[i] - 0.5));
    CHECK(worst < 1e-10);
}

TEST_CASE("omega diagnostics") {
    auto grid = make_grid(Dimension(2), 64, kThetaMax);
    const RadialGraphState st = soliton_state(grid, 0.4);
    const OmegaField w0 = omega(st);
    CHECK(w0.sup == 0.0);

    RadialGraphState up = st;
    for (double& v : up.u) v += 0.1;
    const OmegaField w1 = omega(up);
    CHECK(w1.sup == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(make_grid(Dimension(2), 4, kThetaMax), DomainError);
    CHECK_THROWS_AS(make_grid(Dimension(2), 100, kPi / 2), DomainError);
    CHECK_THROWS_AS(make_state(make_grid(Dimension(2), 100, kThetaMax), std::vector<double>(5), 0.0),
                    DomainError);
}
