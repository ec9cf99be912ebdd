#pragma once

// Method-of-lines simulator for the graphical mean-curvature-flow equation on
// rotationally symmetric radial graphs F(x, t) = e^{u(theta, t)} x over the
// unit upper hemisphere,
//
//   du/dt = cos(theta) * sqrt(1 + u_theta^2) * H,
//
// H the hyperbolic mean curvature of the flowed graph with the upward
// orientation.  The exact translating solution v(theta, t) = t - log cos(theta)
// (the horosphere at height e^t) is kept alongside for comparison.

#include <functional>
#include <memory>
#include <vector>

#include "horoflow/geometry.hpp"

namespace horoflow {

/// Uniform grid theta_i = i * dtheta on [0, theta_max], theta measured from
/// the pole so the hemisphere point has height cos(theta); theta_max < pi/2
/// keeps the boundary height positive.
struct HemisphereGrid {
    HemisphereGrid(Dimension n, int node_count, double theta_max);

    Dimension n;
    int M;             // nodes are 0..M
    double theta_max;
    double dtheta;
    std::vector<double> theta, cos_theta, sin_theta, cot_theta;
};

std::shared_ptr<const HemisphereGrid> make_grid(Dimension n, int node_count, double theta_max);

/// Radial log-height per node at flow time t.  Value type: step/evolve
/// produce new states.
struct RadialGraphState {
    std::shared_ptr<const HemisphereGrid> grid;
    std::vector<double> u;
    double t = 0.0;
};

RadialGraphState make_state(std::shared_ptr<const HemisphereGrid> grid,
                            std::vector<double> u, double t = 0.0);

enum class BoundaryMode { pin_to_soliton, fixed_dirichlet };

struct FlowControls {
    double cfl = 0.2; // dt = cfl * dtheta^2, cfl in (0, 1]
    double t_end = 1.0;
    double record_every = 0.05;
    BoundaryMode boundary = BoundaryMode::pin_to_soliton;
    // Optional override of the boundary value u_M(t); used for flows around a
    // base graph other than the upward soliton (e.g. the inverted one).
    std::function<double(double)> boundary_value;

    void validate() const;
};

/// Graph function of the translating horosphere: v(theta, t) = t - log cos(theta).
double exact_soliton(double theta, double t);

/// Profile curve (s, z)(theta) = e^u (sin theta, cos theta) of the flowed
/// graph, tangent angles from centered dtheta-differences (one-sided at the
/// outer end).  The axis node is used for differencing but not emitted.
ProfileCurve radial_profile(const RadialGraphState& state);

/// Per-node du/dt.  The curvature path is the profile-geometry one (profile
/// angle and curvature -> Euclidean mean curvature -> conversion identity),
/// assembled in a form that depends on u only through its theta-differences,
/// so the right-hand side is exactly invariant under u -> u + c.  First
/// derivatives use a 4th-order stencil (even reflection across the pole,
/// biased at the last interior node), second derivatives the 3-point one.
/// The boundary entry is 0 (the boundary node is driven by FlowControls).
std::vector<double> flow_rhs(const RadialGraphState& state);

/// One classical RK4 step of size dt (dt <= cfl * dtheta^2 enforced).
RadialGraphState step(const RadialGraphState& state, double dt, const FlowControls& controls);

/// March from state.t to t_end, recording every record_every time units
/// (always includes the initial and final states).
std::vector<RadialGraphState> evolve(const RadialGraphState& state, const FlowControls& controls);

struct OmegaField {
    std::vector<double> values; // u_i - v(theta_i, t)
    double sup;                 // max |values|
};

/// Deviation from the exact soliton at the state's own time.
OmegaField omega(const RadialGraphState& state);

} // namespace horoflow
