#include "horoflow/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace horoflow {

double hyperbolic_distance(const HalfSpacePoint& p, const HalfSpacePoint& q) {
    if (p.height <= 0.0 || q.height <= 0.0)
        throw DomainError("hyperbolic_distance: heights must be positive");
    const double ds = p.horizontal - q.horizontal;
    const double dz = p.height - q.height;
    return std::acosh(1.0 + (ds * ds + dz * dz) / (2.0 * p.height * q.height));
}

void ProfileCurve::validate() const {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& sm = samples[i];
        if (!(sm.point.z > 0.0)) throw DomainError("profile curve: sample height must be positive");
        if (kind == CurveKind::rotational && sm.point.s < 0.0)
            throw DomainError("profile curve: rotational sample must have s >= 0");
        if (i > 0 && !(sm.sigma > samples[i - 1].sigma))
            throw DomainError("profile curve: arclength must be strictly increasing");
    }
    if (!kappa.empty() && kappa.size() != samples.size())
        throw DomainError("profile curve: kappa array must match the sample count");
}

double ProfileCurve::max_chord_defect() const {
    double worst = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double ds = samples[i].point.s - samples[i - 1].point.s;
        const double dz = samples[i].point.z - samples[i - 1].point.z;
        const double dsig = samples[i].sigma - samples[i - 1].sigma;
        worst = std::max(worst, std::abs((ds * ds + dz * dz) / (dsig * dsig) - 1.0));
    }
    return worst;
}

std::vector<double> profile_curvature(const ProfileCurve& curve) {
    if (curve.has_kappa()) return curve.kappa;
    const auto& sm = curve.samples;
    std::vector<double> k(sm.size(), 0.0);
    if (sm.size() < 2) return k;
    auto slope = [&](std::size_t a, std::size_t b) {
        return (sm[b].point.alpha - sm[a].point.alpha) / (sm[b].sigma - sm[a].sigma);
    };
    // second-order one-sided ends when three points exist
    if (sm.size() == 2) {
        k.front() = slope(0, 1);
        k.back() = slope(0, 1);
    } else {
        auto one_sided = [&](std::size_t i0, std::size_t i1, std::size_t i2) {
            const double h1 = sm[i1].sigma - sm[i0].sigma;
            const double h2 = sm[i2].sigma - sm[i1].sigma;
            const double a0 = sm[i0].point.alpha, a1 = sm[i1].point.alpha, a2 = sm[i2].point.alpha;
            return -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * a0 + (h1 + h2) / (h1 * h2) * a1 -
                   h1 / (h2 * (h1 + h2)) * a2;
        };
        k.front() = one_sided(0, 1, 2);
        const std::size_t m = sm.size() - 1;
        k.back() = one_sided(m, m - 1, m - 2);
    }
    for (std::size_t i = 1; i + 1 < sm.size(); ++i) {
        // three-point derivative on a nonuniform stencil
        const double hm = sm[i].sigma - sm[i - 1].sigma;
        const double hp = sm[i + 1].sigma - sm[i].sigma;
        k[i] = (hm * hm * sm[i + 1].point.alpha - hp * hp * sm[i - 1].point.alpha +
                (hp * hp - hm * hm) * sm[i].point.alpha) /
               (hm * hp * (hm + hp));
    }
    return k;
}

double hyperbolic_mean_curvature(double z, double euclid_mean_curvature,
                                 double euclid_normal_vertical) {
    if (!(z > 0.0)) throw DomainError("hyperbolic_mean_curvature: point outside the half-space (z <= 0)");
    if (std::abs(euclid_normal_vertical) > 1.0 + 1e-14)
        throw DomainError("hyperbolic_mean_curvature: |normal component| must be <= 1");
    return z * euclid_mean_curvature + euclid_normal_vertical;
}

double rotational_euclidean_mean_curvature(const ProfilePoint& p, double kappa_profile,
                                           Dimension n, CurveKind kind) {
    if (kind == CurveKind::parabolic_cylinder) return kappa_profile / n.n;
    if (!(p.s > 0.0))
        throw DomainError("rotational_euclidean_mean_curvature: rotation axis is singular (s = 0)");
    return (kappa_profile + (n.n - 1) * std::sin(p.alpha) / p.s) / n.n;
}

double soliton_support(const ProfilePoint& p) {
    if (!(p.z > 0.0)) throw DomainError("soliton_support: point outside the half-space (z <= 0)");
    return (-p.s * std::sin(p.alpha) + p.z * std::cos(p.alpha)) / p.z;
}

double translator_residual(const ProfileCurve& curve) {
    if (curve.samples.size() < 3)
        throw DomainError("translator_residual: need at least 3 samples to estimate curvature");
    curve.validate();
    const std::vector<double> kappa = profile_curvature(curve);
    double worst = 0.0;
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
        const ProfilePoint& p = curve.samples[i].point;
        if (curve.kind == CurveKind::rotational && p.s == 0.0) continue;
        const double hbar = rotational_euclidean_mean_curvature(p, kappa[i], curve.n, curve.kind);
        const double h = hyperbolic_mean_curvature(p.z, hbar, std::cos(p.alpha));
        worst = std::max(worst, std::abs(h - soliton_support(p)));
    }
    return worst;
}

ProfileCurve translate_profile(const ProfileCurve& curve, double t) {
    const double scale = std::exp(t);
    ProfileCurve out = curve;
    for (auto& sm : out.samples) {
        sm.sigma *= scale;
        sm.point.s *= scale;
        sm.point.z *= scale;
    }
    for (auto& k : out.kappa) k /= scale;
    return out;
}

} // namespace horoflow
