#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "vortexlab/vstate.hpp"
#include "vortexlab/weiss.hpp"

using namespace vortexlab;

TEST_CASE("weiss functional vanishes on the zero field") {
    auto z = ScalarField::sample([](Point) { return 0.0; }, {-1, 1, -1, 1}, 1.0 / 64, 0.25);
    CHECK(weiss_value(z, {0, 0}, 0.3) == 0.0);
    CHECK(weiss_value(z, {0.1, -0.2}, 0.5) == 0.0);
}

TEST_CASE("weiss value of homogeneous cusp profiles matches the angular oracle") {
    double omega = 0.25;
    auto ray = synthetic_field("cusp_ray", omega, {-1, 1, -1, 1}, 1.0 / 128);
    double phi_oracle = oracles::homogeneous_weiss(
        [&](double t) { return omega * std::sin(t) * std::sin(t); },
        [&](double t) { return omega * std::sin(2.0 * t); },
        [&](double) { return -2.0 * omega; });
    // closed form for this profile: pi omega^2 / 2
    CHECK(phi_oracle == doctest::Approx(pi * omega * omega / 2.0).epsilon(1e-8));
    for (double r : {0.1, 0.2, 0.4})
        CHECK(weiss_value(ray, {0, 0}, r) == doctest::Approx(phi_oracle).epsilon(2e-4));

    auto comp = synthetic_field("cusp_complement", omega, {-1, 1, -1, 1}, 1.0 / 128);
    double c = 0.5 * (1.0 - 2.0 * omega);
    double phi_comp = oracles::homogeneous_weiss(
        [&](double t) { return -c * std::sin(t) * std::sin(t); },
        [&](double t) { return -c * std::sin(2.0 * t); },
        [&](double) { return 1.0 - 2.0 * omega; });
    CHECK(phi_comp == doctest::Approx(pi * c * c / 2.0).epsilon(1e-8));
    CHECK(weiss_value(comp, {0, 0}, 0.25) == doctest::Approx(phi_comp).epsilon(2e-4));
}

TEST_CASE("scale invariance of homogeneous profiles is exact") {
    for (const char* id : {"cusp_ray", "cusp_complement", "saddle"}) {
        auto f = synthetic_field(id, 0.25, {-1, 1, -1, 1}, 1.0 / 128);
        double base = weiss_value(f, {0, 0}, 0.1);
        for (double r : {0.2, 0.4})
            CHECK(std::abs(weiss_value(f, {0, 0}, r) - base) <= 1e-6);
    }
}

TEST_CASE("shell norm closed forms") {
    auto saddle = synthetic_field("saddle", 0.25, {-1, 1, -1, 1}, 1.0 / 128);
    for (double r : {0.2, 0.5})
        CHECK(shell_norm(saddle, {0, 0}, r) ==
              doctest::Approx(std::sqrt(pi) * r * r).epsilon(1e-10));

    auto constant =
        ScalarField::sample([](Point) { return 0.7; }, {-1, 1, -1, 1}, 1.0 / 64, 0.25);
    CHECK(shell_norm(constant, {0, 0}, 0.4) ==
          doctest::Approx(0.7 * std::sqrt(two_pi)).epsilon(1e-10));
}

TEST_CASE("rankine profile is monotone at a boundary point") {
    auto f = relative_stream(PatchBoundary::disk(1.0), 0.25, {-3, 3, -3, 3}, 1.0 / 128);
    auto prof = weiss_profile(f, {1.0, 0.0}, 0.05, 0.4, 12);
    double maxphi = 0.0;
    for (double p : prof.phi) maxphi = std::max(maxphi, std::abs(p));
    double slack = 1e-3 * maxphi;
    for (std::size_t k = 1; k < prof.phi.size(); ++k)
        CHECK(prof.phi[k] >= prof.phi[k - 1] - slack);
    CHECK(weiss_value(f, {1, 0}, 0.1) <= weiss_value(f, {1, 0}, 0.2) + slack);
    CHECK(weiss_value(f, {1, 0}, 0.2) <= weiss_value(f, {1, 0}, 0.4) + slack);
}

TEST_CASE("monotonicity across the solution corpus") {
    // each solution field, probed at the patch center and at a boundary
    // point, yields a nondecreasing profile within the stated slack
    struct Probe {
        ScalarField field;
        std::vector<Point> centers;
    };
    std::vector<Probe> corpus;
    corpus.push_back({relative_stream(PatchBoundary::disk(1.0), 0.25, {-3, 3, -3, 3},
                                      1.0 / 128),
                      {{0.0, 0.0}, {1.0, 0.0}}});
    corpus.push_back({relative_stream(PatchBoundary::ellipse(2.0, 1.0), 2.0 / 9.0,
                                      {-6, 6, -5, 5}, 1.0 / 128),
                      {{0.0, 0.0}, {2.0, 0.0}, {0.0, 1.0}}});
    {
        VStateOptions opt;
        opt.modes = 16;
        std::vector<double> cosc(3 * 16, 0.0);
        cosc[2] = 0.1;
        auto sol = newton_solve(PatchBoundary::fourier(1.0, {0, 0}, cosc, {}),
                                1.0 / 3.0 - 0.005, 3, 1e-9, 15, opt);
        double boundary_r = sol.patch.radius(0.0);
        corpus.push_back({relative_stream(sol.patch, sol.omega, {-3.5, 3.5, -3.5, 3.5},
                                          1.0 / 128),
                          {{0.0, 0.0}, {boundary_r, 0.0}}});
    }
    for (const auto& probe : corpus)
        for (Point x0 : probe.centers) {
            auto prof = weiss_profile(probe.field, x0, 0.06, 0.4, 8);
            double maxphi = 0.0;
            for (double p : prof.phi) maxphi = std::max(maxphi, std::abs(p));
            double slack = 1e-3 * (maxphi + 1.0);
            for (std::size_t k = 1; k < prof.phi.size(); ++k)
                CHECK(prof.phi[k] >= prof.phi[k - 1] - slack);
        }
}

TEST_CASE("growth indicator separates log-divergent from homogeneous fields") {
    auto corner = synthetic_field("corner_log", 0.25, {-1, 1, -1, 1}, 1.0 / 128);
    auto prof = weiss_profile(corner, {0, 0}, 0.05, 0.4, 6);
    // T(r) = sqrt(pi) log(1/r) grows as r decreases
    for (std::size_t k = 1; k < prof.growth.size(); ++k)
        CHECK(prof.growth[k] < prof.growth[k - 1]);
    CHECK(prof.growth.front() ==
          doctest::Approx(std::sqrt(pi) * std::log(1.0 / 0.05)).epsilon(1e-3));

    auto ray = synthetic_field("cusp_ray", 0.25, {-1, 1, -1, 1}, 1.0 / 128);
    auto prof2 = weiss_profile(ray, {0, 0}, 0.05, 0.4, 6);
    double lo = 1e300, hi = 0.0;
    for (double t : prof2.growth) {
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    CHECK(hi / lo < 1.01);  // bounded growth across scales
}

TEST_CASE("derivative identity") {
    SUBCASE("zero for exactly homogeneous fields") {
        auto ray = synthetic_field("cusp_ray", 0.25, {-1, 1, -1, 1}, 1.0 / 128);
        CHECK(derivative_identity_residual(ray, {0, 0}, 0.1, 0.3) < 1e-8);
    }
    SUBCASE("rankine solution passes, non-solution fails") {
        auto f = relative_stream(PatchBoundary::disk(1.0), 0.25, {-3, 3, -3, 3}, 1.0 / 128);
        double lhs = std::abs(weiss_value(f, {1, 0}, 0.3) - weiss_value(f, {1, 0}, 0.1));
        double res = derivative_identity_residual(f, {1, 0}, 0.1, 0.3);
        CHECK(res <= 0.02 * lhs + 1e-8);

        auto bad = ScalarField::sample([](Point p) { return p.x1 * p.x1 * p.x1; },
                                       {-3, 3, -3, 3}, 1.0 / 128, 0.25,
                                       [](Point p) { return norm(p) < 1.0; });
        double res_bad = derivative_identity_residual(bad, {1, 0}, 0.1, 0.3);
        CHECK(res_bad > 10.0 * res);
    }
}

TEST_CASE("domain variation identity") {
    auto f = relative_stream(PatchBoundary::disk(1.0), 0.25, {-3, 3, -3, 3}, 1.0 / 128);
    auto zero = GridVectorField::sample(f, [](Point) { return Point{0.0, 0.0}; });
    CHECK(variation_residual(f, zero) == 0.0);

    auto bump = [](Point p) {
        double r = norm(p) / 2.5;
        if (r >= 1.0) return Point{0.0, 0.0};
        double b = std::pow(1.0 - r * r, 4);
        return Point{b * p.x1, b * p.x2};
    };
    auto X = GridVectorField::sample(f, bump);
    double xmax = 0.0;
    for (std::size_t k = 0; k < X.x1.size(); ++k)
        xmax = std::max(xmax, std::hypot(X.x1[k], X.x2[k]));
    double res = variation_residual(f, X);
    CHECK(std::abs(res) <= 1e-2 * xmax);

    auto bad = ScalarField::sample([](Point p) { return p.x1 * p.x1 * p.x1; }, {-3, 3, -3, 3},
                                   1.0 / 128, 0.25, [](Point p) { return norm(p) < 1.0; });
    CHECK(std::abs(variation_residual(bad, X)) > 10.0 * std::abs(res));

    auto shifted = GridVectorField::sample(
        f, [](Point p) { return Point{1.0 + 0.0 * p.x1, 0.0}; });
    CHECK_THROWS_AS(variation_residual(f, shifted), InvalidTestField);
}
