#pragma once

// Construction of the rotationally invariant and parabolic-cylinder
// translators: the translating catenoids (annular, neck of radius r on the
// height-1 horosphere, asymptotic to horospheres at heights r- and r+) and the
// grim reapers (entire vertical graphs asymptotic to horospheres at heights
// lambda- and lambda+).
//
// Both families satisfy one arclength ODE for (s, z, alpha),
//   ds/dsigma = cos(alpha),  dz/dsigma = sin(alpha),
//   dalpha/dsigma = -sin(alpha) * (n s / z^2 + (n-1)/s)   (rotational)
//   dalpha/dsigma = -sin(alpha) * (n s / z^2)             (parabolic cylinder)
// integrated through the vertical tangent at the catenoid neck; the two chart
// ODEs (graphs z = phi(s) and s = d(z)) are used as residual checks.

#include <span>
#include <vector>

#include "horoflow/geometry.hpp"

namespace horoflow {

struct IntegratorControls {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.25;
    double s_max = 50.0;               // horizontal truncation of each branch
    double alpha_switch = 0.78539816339744831; // pi/4, chart-residual bookkeeping

    void validate() const;
};

struct ProfileDerivative {
    double ds, dz, dalpha;
};

/// Right-hand side of the arclength translator system.
ProfileDerivative profile_ode_rhs(double s, double z, double alpha, Dimension n, CurveKind kind);

/// Rotational annular translator with neck circle (s, z) = (r, 1).
/// Both branches are parametrized from the neck outward (s increasing);
/// alpha runs from +pi/2 to 0 on the upper branch, -pi/2 to 0 on the lower.
struct CatenoidProfile {
    Dimension n{2};
    double neck_radius = 1.0;
    ProfileCurve upper_branch;
    ProfileCurve lower_branch;
    double r_plus = 1.0;          // upper asymptotic horosphere height
    double r_minus = 1.0;         // lower asymptotic horosphere height
    double asymptote_error = 0.0;
};

CatenoidProfile integrate_catenoid(Dimension n, double r, const IntegratorControls& controls = {});

/// Parabolic-cylinder translator through (0, h0) with initial slope lambda.
struct GrimReaperSample {
    double s, phi, dphi;
};

struct GrimReaperProfile {
    Dimension n{2};
    double h0 = 1.0;
    double lambda = 0.0;
    std::vector<GrimReaperSample> samples; // ordered by s over [-s_max, s_max]
    ProfileCurve curve;                    // same data as an arclength curve
    double lambda_plus = 1.0;
    double lambda_minus = 1.0;
    double asymptote_error = 0.0;
};

GrimReaperProfile integrate_grim_reaper(Dimension n, double h0, double lambda,
                                        const IntegratorControls& controls = {});

struct AsymptoteEstimate {
    double limit;
    double error; // last extrapolation increment
};

/// Extrapolated limit of z(x) as x grows, from tail samples (x increasing).
/// Uses a geometric ladder of tail abscissae (doublings when the range allows)
/// and Aitken acceleration; throws AsymptoteError when the tail increments are
/// not yet settled (caller should increase s_max).
AsymptoteEstimate estimate_asymptote(std::span<const double> x, std::span<const double> z);

/// Convenience overload for an integrated branch; additionally requires the
/// final tangent to be nearly horizontal (|sin alpha| < 1e-6).
AsymptoteEstimate estimate_asymptote(const ProfileCurve& branch);

/// Max defect of the vertical-chart ODE over samples with |alpha| below the
/// switch threshold, with phi', phi'' recovered from (s, z, alpha, kappa):
///   rotational:  phi'' + phi'(1+phi'^2)(n s/phi^2 + (n-1)/s)
///   parabolic:   phi'' + phi'(1+phi'^2)(n s/phi^2)
double chart_residual_vertical(const ProfileCurve& curve,
                               double alpha_switch = IntegratorControls{}.alpha_switch);

struct HorizontalChartResidual {
    double residual;      // max defect of d'' = (1+d'^2)(n d/z^2 + (n-1)/d)
    double min_convexity; // min d'' over the chart region
};

/// Horizontal-chart (s = d(z)) residual over samples with alpha within the
/// switch threshold of +-pi/2 (the neck region).
HorizontalChartResidual chart_residual_horizontal(const ProfileCurve& curve,
                                                  double alpha_switch = IntegratorControls{}.alpha_switch);

struct CatenoidFamilyRow {
    double r;
    double r_minus;
    double r_plus;
    double asymptote_error;
};

/// Asymptote table over a family of neck radii (radii positive, sorted).
/// s_max is raised to r + 40 per entry when the default would not clear the
/// neck.  Entries may be integrated in parallel (capped by HOROFLOW_THREADS).
std::vector<CatenoidFamilyRow> catenoid_family_table(Dimension n, std::span<const double> radii,
                                                     const IntegratorControls& controls = {});

/// Thread cap for internal parallel sweeps: HOROFLOW_THREADS when set,
/// otherwise the hardware concurrency.
unsigned thread_cap();

} // namespace horoflow
