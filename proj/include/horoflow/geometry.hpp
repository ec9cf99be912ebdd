#pragma once

// Core geometric types and curvature computations in the upper half-space
// model of hyperbolic space H^{n+1} (x_{n+1} > 0, metric = Euclidean / x_{n+1}^2).
//
// Profile convention used throughout: a hypersurface with rotational or
// parabolic-cylinder symmetry is generated by a planar curve in the (s, z)
// plane, s = distance from the x_{n+1} axis (or the x_n coordinate for
// parabolic cylinders), z = height.  The curve is sampled by arclength sigma
// with tangent angle alpha, tangent = (cos alpha, sin alpha), and the
// Euclidean unit normal is nu = (-sin alpha, cos alpha), i.e. the tangent
// rotated by +90 degrees.  On upward-oriented graphs (|alpha| < pi/2) this is
// the upward-pointing normal.

#include <span>
#include <vector>

#include "horoflow/errors.hpp"

namespace horoflow {

/// Hypersurface dimension n; the ambient hyperbolic space is H^{n+1}, n >= 2.
struct Dimension {
    explicit Dimension(int n) : n(n) {
        if (n < 2) throw DomainError("dimension: n must be >= 2");
    }
    int n;
    friend bool operator==(Dimension a, Dimension b) { return a.n == b.n; }
};

/// Point of the upper half-space in rotational coordinates.
struct HalfSpacePoint {
    double horizontal = 0.0; // Euclidean distance from the x_{n+1} axis, >= 0
    double height = 1.0;     // x_{n+1} coordinate, > 0
};

/// Distance between two points of H^{n+1} lying in a common profile plane.
double hyperbolic_distance(const HalfSpacePoint& p, const HalfSpacePoint& q);

/// Profile-curve sample: position and tangent angle in the (s, z) plane.
/// s >= 0 for rotational profiles (s = 0 only as the axis sample of a radial
/// graph; curvature operations reject it), any real s for parabolic cylinders.
struct ProfilePoint {
    double s = 0.0;
    double z = 1.0;
    double alpha = 0.0; // tangent angle, in (-pi, pi]
};

enum class CurveKind { rotational, parabolic_cylinder };

struct ProfileSample {
    double sigma; // arclength parameter, strictly increasing along the curve
    ProfilePoint point;
};

/// Arclength-sampled generating curve of a rotational hypersurface or a
/// parabolic cylinder.  `kappa`, when nonempty, stores dalpha/dsigma at each
/// sample (the integrator keeps the ODE right-hand side); otherwise profile
/// curvature is estimated by centered differences of alpha over sigma.
struct ProfileCurve {
    CurveKind kind = CurveKind::rotational;
    Dimension n{2};
    std::vector<ProfileSample> samples;
    std::vector<double> kappa;

    bool has_kappa() const { return kappa.size() == samples.size() && !samples.empty(); }

    /// Checks sigma monotonicity, z > 0 and (rotational) s >= 0.
    void validate() const;

    /// Largest relative chord defect |(ds^2+dz^2) - dsigma^2| / dsigma^2
    /// between consecutive samples.
    double max_chord_defect() const;
};

/// Profile curvature dalpha/dsigma per sample: stored values if present,
/// otherwise centered finite differences of alpha over sigma (one-sided at
/// the ends).
std::vector<double> profile_curvature(const ProfileCurve& curve);

/// Mean curvature conversion between the Euclidean and hyperbolic metrics:
/// H = z * Hbar + Nbar_vertical for the hyperbolic normal N = z * Nbar.
double hyperbolic_mean_curvature(double z, double euclid_mean_curvature,
                                 double euclid_normal_vertical);

/// Euclidean mean curvature of the symmetric hypersurface generated by the
/// profile point with profile curvature kappa:
///   rotational:          (kappa + (n-1) sin(alpha)/s) / n
///   parabolic cylinder:  kappa / n
double rotational_euclidean_mean_curvature(const ProfilePoint& p, double kappa_profile,
                                           Dimension n,
                                           CurveKind kind = CurveKind::rotational);

/// Soliton support <p, N> in the hyperbolic metric with N = z * nu:
/// (-s sin(alpha) + z cos(alpha)) / z.  The generating vector field of the
/// vertical hyperbolic translations is p itself.
double soliton_support(const ProfilePoint& p);

/// Max over samples of |H - <p,N>|, the defect of the translator equation
/// along the curve.  Axis samples (s = 0) of rotational curves are skipped.
double translator_residual(const ProfileCurve& curve);

/// Image of the curve under the hyperbolic translation p -> e^t p:
/// (s, z, sigma) scale by e^t, alpha is unchanged, kappa scales by e^{-t}.
ProfileCurve translate_profile(const ProfileCurve& curve, double t);

} // namespace horoflow
