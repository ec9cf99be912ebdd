#include <cmath>
#include <random>

#include <doctest.h>

#include "horoflow/geometry.hpp"

using namespace horoflow;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

ProfileCurve horosphere_profile(double h, int count = 40) {
    ProfileCurve c{ CurveKind::rotational, Dimension(2), {}, {} };
    for (int i = 0; i < count; ++i) {
        const double s = 0.1 + 0.1 * i;
        c.samples.push_back({ 0.1 * i, { s, h, 0.0 } });
    }
    return c;
}
} // namespace

TEST_CASE("mean curvature conversion identity") {
    CHECK(hyperbolic_mean_curvature(2.5, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(hyperbolic_mean_curvature(2.0, 0.5, 0.3) == doctest::Approx(1.3).epsilon(1e-15));
    // unit hemisphere with inward normal is totally geodesic
    for (int j = 1; j < 10; ++j) {
        const double z = std::sin(j * 0.15);
        CHECK(hyperbolic_mean_curvature(z, 1.0, -z) == doctest::Approx(0.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(hyperbolic_mean_curvature(0.0, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(hyperbolic_mean_curvature(-1.0, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(hyperbolic_mean_curvature(1.0, 1.0, 1.5), DomainError);
}

TEST_CASE("euclidean mean curvature of symmetric hypersurfaces") {
    // cylinder of radius r, inward-ish normal
    CHECK(rotational_euclidean_mean_curvature({ 2.0, 1.0, kPi / 2 }, 0.0, Dimension(2)) ==
          doctest::Approx(1.0 / 4.0).epsilon(1e-14));
    // flat horizontal profile
    CHECK(rotational_euclidean_mean_curvature({ 1.5, 1.0, 0.0 }, 0.0, Dimension(3)) == 0.0);
    // parabolic cylinders only carry the profile curvature
    CHECK(rotational_euclidean_mean_curvature({ -1.0, 1.0, 0.3 }, 0.9, Dimension(3),
                                              CurveKind::parabolic_cylinder) ==
          doctest::Approx(0.3).epsilon(1e-14));
    CHECK_THROWS_AS(rotational_euclidean_mean_curvature({ 0.0, 1.0, 0.0 }, 1.0, Dimension(2)),
                    DomainError);
}

TEST_CASE("vertical-graph chart equivalence on random tuples") {
    std::mt19937_64 rng(20240517);
    std::uniform_real_distribution<double> us(0.1, 10.0), uphi(0.2, 5.0), ud(-3.0, 3.0),
        udd(-5.0, 5.0);
    double worst_h = 0.0, worst_sup = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const int n = 2 + (k % 2);
        const double s = us(rng), phi = uphi(rng), dphi = ud(rng), ddphi = udd(rng);
        const double rho = 1.0 / std::sqrt(1.0 + dphi * dphi);
        const ProfilePoint p{ s, phi, std::atan(dphi) };
        const double kappa = ddphi * rho * rho * rho;

        const double h_chart = rho / n * (ddphi / (1.0 + dphi * dphi) + (n - 1) * dphi / s);
        const double h_arc = rotational_euclidean_mean_curvature(p, kappa, Dimension(n));
        worst_h = std::max(worst_h, std::abs(h_arc - h_chart) / std::max(1.0, std::abs(h_chart)));

        const double sup_chart = rho * (phi - s * dphi) / phi;
        worst_sup = std::max(worst_sup,
                             std::abs(soliton_support(p) - sup_chart) / std::max(1.0, std::abs(sup_chart)));
    }
    CHECK(worst_h < 1e-10);
    CHECK(worst_sup < 1e-10);
}

TEST_CASE("soliton support values") {
    CHECK(soliton_support({ 3.7, 0.5, 0.0 }) == 1.0);  // horosphere at any height
    CHECK(soliton_support({ 2.0, 1.0, kPi / 2 }) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK_THROWS_AS(soliton_support({ 1.0, 0.0, 0.0 }), DomainError);
}

TEST_CASE("horosphere identity at several heights") {
    for (double h : { 0.1, 1.0, 10.0 }) {
        const ProfileCurve c = horosphere_profile(h);
        CHECK(translator_residual(c) == doctest::Approx(0.0).epsilon(1e-15));
        for (const auto& sm : c.samples) {
            const double hbar = rotational_euclidean_mean_curvature(sm.point, 0.0, c.n);
            CHECK(hyperbolic_mean_curvature(sm.point.z, hbar, 1.0) == 1.0);
            CHECK(soliton_support(sm.point) == 1.0);
        }
    }
}

TEST_CASE("hemisphere profile is minimal and far from a translator") {
    ProfileCurve sphere{ CurveKind::rotational, Dimension(2), {}, {} };
    for (int j = 0; j < 100; ++j) {
        const double theta = (j + 0.5) / 100.0 * (kPi / 2);
        sphere.samples.push_back({ theta, { std::sin(theta), std::cos(theta), -theta } });
    }
    double worst = 0.0;
    for (const auto& sm : sphere.samples) {
        const double hbar = rotational_euclidean_mean_curvature(sm.point, -1.0, sphere.n);
        worst = std::max(worst,
                         std::abs(hyperbolic_mean_curvature(sm.point.z, hbar, std::cos(sm.point.alpha))));
    }
    CHECK(worst < 1e-12);
    CHECK(translator_residual(sphere) > 0.5); // sup support = 1/cos(theta) >= 1
}

TEST_CASE("translator residual needs enough samples") {
    ProfileCurve c{ CurveKind::rotational, Dimension(2), {}, {} };
    c.samples.push_back({ 0.0, { 1.0, 1.0, 0.0 } });
    c.samples.push_back({ 0.1, { 1.1, 1.0, 0.0 } });
    CHECK_THROWS_AS(translator_residual(c), DomainError);
}

TEST_CASE("orientation flip negates curvature and support") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> us(0.1, 5.0), uz(0.2, 5.0), ua(-1.4, 1.4), uk(-3.0, 3.0);
    for (int k = 0; k < 300; ++k) {
        const double s = us(rng), z = uz(rng), a = ua(rng), kap = uk(rng);
        const ProfilePoint p{ s, z, a };
        const ProfilePoint q{ s, z, a + kPi };
        const double hp =
            hyperbolic_mean_curvature(z, rotational_euclidean_mean_curvature(p, kap, Dimension(2)),
                                      std::cos(p.alpha));
        const double hq =
            hyperbolic_mean_curvature(z, rotational_euclidean_mean_curvature(q, -kap, Dimension(2)),
                                      std::cos(q.alpha));
        CHECK(std::abs(hp + hq) < 1e-12);
        CHECK(std::abs(soliton_support(p) + soliton_support(q)) < 1e-12);
    }
}

TEST_CASE("translate_profile scales the profile and keeps residuals") {
    const ProfileCurve c = horosphere_profile(1.0);
    const ProfileCurve same = translate_profile(c, 0.0);
    CHECK(same.samples.back().point.z == 1.0);
    const ProfileCurve doubled = translate_profile(c, std::log(2.0));
    for (const auto& sm : doubled.samples) CHECK(sm.point.z == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(translator_residual(doubled) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("hyperbolic distance along the vertical geodesic") {
    CHECK(hyperbolic_distance({ 0.0, 1.0 }, { 0.0, std::exp(1.0) }) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // neck escape proxy grows with the neck radius
    double prev = 0.0;
    for (double r : { 1.0, 10.0, 100.0 }) {
        const double d = hyperbolic_distance({ r, 1.0 }, { 0.0, 1.0 });
        CHECK(d > prev);
        prev = d;
    }
}

TEST_CASE("profile curve validation") {
    ProfileCurve bad{ CurveKind::rotational, Dimension(2), {}, {} };
    bad.samples.push_back({ 0.0, { 1.0, 1.0, 0.0 } });
    bad.samples.push_back({ 0.0, { 1.1, 1.0, 0.0 } }); // sigma not increasing
    CHECK_THROWS_AS(bad.validate(), DomainError);

    ProfileCurve neg{ CurveKind::rotational, Dimension(2), {}, {} };
    neg.samples.push_back({ 0.0, { 1.0, -1.0, 0.0 } });
    CHECK_THROWS_AS(neg.validate(), DomainError);
}
