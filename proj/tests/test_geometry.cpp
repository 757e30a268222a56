#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "vortexlab/geometry.hpp"

using namespace vortexlab;

TEST_CASE("ellipse angular velocity") {
    CHECK(ellipse_angular_velocity(2.0, 1.0) == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK(ellipse_angular_velocity(1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(ellipse_angular_velocity(3.0, 1.0) == doctest::Approx(3.0 / 16.0).epsilon(1e-14));
    CHECK_THROWS_AS(ellipse_angular_velocity(0.0, 1.0), InvalidGeometry);
    CHECK_THROWS_AS(ellipse_angular_velocity(1.0, -2.0), InvalidGeometry);
}

TEST_CASE("containment basics") {
    auto disk = PatchBoundary::disk(1.0);
    CHECK(disk.contains({0.0, 0.0}));
    CHECK_FALSE(disk.contains({2.0, 0.0}));
    CHECK_FALSE(disk.contains({1.0, 0.0}));  // boundary resolves to outside

    auto ell = PatchBoundary::ellipse(2.0, 1.0);
    CHECK(ell.contains({1.5, 0.5}));
    CHECK_FALSE(ell.contains({2.0, 0.0}));

    auto ann = PatchBoundary::annulus(0.5);
    CHECK(ann.contains({0.75, 0.0}));
    CHECK_FALSE(ann.contains({0.25, 0.0}));
    CHECK_FALSE(ann.contains({0.0, 0.0}));
}

TEST_CASE("areas of exact families") {
    CHECK(PatchBoundary::disk(1.0).area() == doctest::Approx(pi).epsilon(1e-12));
    CHECK(PatchBoundary::disk(2.5).area() == doctest::Approx(pi * 6.25).epsilon(1e-12));
    CHECK(PatchBoundary::ellipse(2.0, 1.0).area() == doctest::Approx(2.0 * pi).epsilon(1e-12));
    CHECK(PatchBoundary::annulus(0.5).area() == doctest::Approx(0.75 * pi).epsilon(1e-12));
}

TEST_CASE("fourier patch radius and area") {
    auto p = PatchBoundary::fourier(1.0, {0.0, 0.0}, {0.0, 0.1}, {});
    CHECK(p.radius(0.0) == doctest::Approx(1.1).epsilon(1e-14));
    // Parseval: area = pi R0^2 (1 + (1/2) sum of squared coefficients).
    CHECK(p.area() == doctest::Approx(pi * 1.005).epsilon(1e-12));

    CHECK_THROWS_AS(PatchBoundary::fourier(1.0, {0.0, 0.0}, {-1.2}, {}), InvalidGeometry);
    CHECK_THROWS_AS(PatchBoundary::fourier(-1.0, {0.0, 0.0}, {}, {}), InvalidGeometry);
}

TEST_CASE("boundary sampling hits the analytic curves") {
    auto disk = PatchBoundary::disk(1.0);
    auto s = disk.sample_boundary(4);
    REQUIRE(s.size() == 4);
    CHECK(s[0].point.x1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s[1].point.x2 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s[2].point.x1 == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(s[3].point.x2 == doctest::Approx(-1.0).epsilon(1e-15));

    auto ell = PatchBoundary::ellipse(2.0, 1.0);
    auto se = ell.sample_boundary(4);
    CHECK(se[0].point.x1 == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(se[1].point.x2 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(se[2].point.x1 == doctest::Approx(-2.0).epsilon(1e-15));

    for (const auto& kind : {disk, ell}) {
        for (const auto& bs : kind.sample_boundary(64)) {
            // residual of the implicit equation, scaled to a distance
            double r = norm(bs.point - kind.center());
            double t = std::atan2(bs.point.x2, bs.point.x1);
            CHECK(std::abs(r - kind.radius(t)) < 1e-10);
            CHECK(norm(bs.tangent) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    auto fp = PatchBoundary::fourier(1.0, {0.2, -0.1}, {0.05, 0.1, 0.0, 0.02}, {0.0, 0.03});
    for (const auto& bs : fp.sample_boundary(64)) {
        Point q = bs.point - fp.center();
        double t = std::atan2(q.x2, q.x1);
        CHECK(std::abs(norm(q) - fp.radius(t)) < 1e-10);
    }
}

TEST_CASE("containment agrees with a winding-number oracle") {
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    auto& gen = oracles::rng();

    auto check_kind = [&](const PatchBoundary& p, Point center, auto radius_fn) {
        int tested = 0;
        while (tested < 2500) {
            Point q{u(gen), u(gen)};
            // skip points too close to the curve for the polygon oracle
            Point rel = q - center;
            double t = std::atan2(rel.x2, rel.x1);
            if (std::abs(norm(rel) - radius_fn(t)) < 2e-3) continue;
            ++tested;
            bool expect = oracles::winding_inside(radius_fn, center, q);
            CHECK(p.contains(q) == expect);
        }
    };

    auto disk = PatchBoundary::disk(1.3);
    check_kind(disk, {0, 0}, [&](double) { return 1.3; });

    auto ell = PatchBoundary::ellipse(2.0, 1.0);
    check_kind(ell, {0, 0}, [&](double t) { return ell.radius(t); });

    auto fp = PatchBoundary::fourier(1.0, {0.2, -0.1}, {0.05, 0.1}, {0.0, 0.03});
    check_kind(fp, fp.center(), [&](double t) { return fp.radius(t); });

    // annulus: compare against two circles
    auto ann = PatchBoundary::annulus(0.6);
    int tested = 0;
    while (tested < 2500) {
        Point q{u(gen), u(gen)};
        double r = norm(q);
        if (std::abs(r - 0.6) < 2e-3 || std::abs(r - 1.0) < 2e-3) continue;
        ++tested;
        CHECK(ann.contains(q) == (r > 0.6 && r < 1.0));
    }
}

TEST_CASE("invalid geometry is rejected") {
    CHECK_THROWS_AS(PatchBoundary::disk(-1.0), InvalidGeometry);
    CHECK_THROWS_AS(PatchBoundary::ellipse(1.0, 2.0), InvalidGeometry);
    CHECK_THROWS_AS(PatchBoundary::annulus(1.5), InvalidGeometry);
    CHECK_THROWS_AS(PatchBoundary::annulus(0.0), InvalidGeometry);
}
