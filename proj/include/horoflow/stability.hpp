#pragma once

// Empirical stability experiments: perturb the horosphere soliton, evolve the
// radial graph flow, and check convergence in space against translating
// catenoid barriers and convergence in time through sup|omega_t|.

#include <map>
#include <memory>
#include <span>
#include <vector>

#include "horoflow/radial_flow.hpp"
#include "horoflow/translators.hpp"

namespace horoflow {

enum class PerturbationKind { gaussian_bump, compact_bump, decaying_tail };

/// Initial deviation u_0 - v_0.  compact_bump vanishes identically outside
/// |theta - center| < width; decaying_tail is amplitude * cos^2(theta) tapered
/// to exactly zero over the last tenth of the domain (the boundary-decay
/// hypothesis made literal on a truncated grid).
struct Perturbation {
    PerturbationKind kind = PerturbationKind::gaussian_bump;
    double amplitude = 0.1;
    double center = 0.0; // theta value
    double width = 0.3;
};

RadialGraphState make_initial(const Perturbation& pert, std::shared_ptr<const HemisphereGrid> grid);

struct BarrierBounds {
    double lower = 0.0;
    double upper = 0.0;
    bool lower_in_domain = false; // s beyond the lower barrier's neck
    bool upper_in_domain = false;
};

/// Pair of translating catenoids scaled into the slabs adjacent to
/// Lambda_eps: the lower barrier lives in (e^{-eps}, e^{-eps/2}), the upper in
/// (e^{eps/2}, e^{eps}), each centered in its slab; at time t both are scaled
/// by e^t.  The flow must pass below the upper catenoid's lower sheet and
/// above the lower catenoid's upper sheet wherever s clears the necks.
class BarrierEnvelope {
public:
    BarrierEnvelope(double epsilon, CatenoidProfile lower_catenoid, CatenoidProfile upper_catenoid);

    BarrierBounds heights_at(double s, double t) const;
    double lower_neck_radius(double t) const;
    double upper_neck_radius(double t) const;
    double epsilon() const { return eps_; }

private:
    CatenoidProfile minus_, plus_;
    double log_scale_minus_ = 0.0, log_scale_plus_ = 0.0;
    double eps_ = 0.0;
};

BarrierEnvelope barrier_envelope(double epsilon, const CatenoidProfile& lower_catenoid,
                                 const CatenoidProfile& upper_catenoid);

/// Smallest table radius whose catenoid fits an eps/2-wide slab:
/// |log r+-| < eps/2 and log(r+/r-) < eps/2.
double select_barrier_radius(std::span<const CatenoidFamilyRow> table, double epsilon);

struct StabilityReport {
    std::vector<double> times;
    std::vector<double> sup_omega;
    double monotone_after = 0.0;             // first time from which the positive
                                             // part is nonincreasing within slack
    std::map<double, double> time_to_eps;    // eps -> first recorded t with sup < eps
    bool barrier_ok = false;
    double barrier_margin = 0.0;             // min log-height margin to the barriers

    friend bool operator==(const StabilityReport&, const StabilityReport&) = default;
};

/// Evolve the perturbed soliton, recording sup|omega_t| and checking barrier
/// containment for every node whose profile radius clears the barrier necks.
/// Barriers are built at eps_b = max(2.5 sup|omega_0|, 0.05) from the smallest
/// fitting catenoid of an internal family table; containment tolerance is one
/// grid cell in log-height.
StabilityReport run_stability_experiment(const Perturbation& pert,
                                         std::shared_ptr<const HemisphereGrid> grid,
                                         const FlowControls& controls,
                                         std::span<const double> eps_list);

/// Same experiment pushed through the graph inversion u -> -u (the mirrored
/// initial state evolved around the mirrored soliton -v).  Barrier containment
/// is not checked in the mirrored chart (barrier_ok = true, margin = +inf);
/// the sup series must match the direct run to roundoff.
StabilityReport run_stability_experiment_mirrored(const Perturbation& pert,
                                                  std::shared_ptr<const HemisphereGrid> grid,
                                                  const FlowControls& controls,
                                                  std::span<const double> eps_list);

/// Smallest profile radius R outside which |omega_0| < eps/2 (0 when the
/// perturbation is below eps/2 everywhere).
double epsilon_radius_calibration(const RadialGraphState& state0, double eps);

} // namespace horoflow
