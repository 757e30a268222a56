#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "vortexlab/blowup.hpp"

using namespace vortexlab;

namespace {
const Box unit{-1, 1, -1, 1};

ScalarField saddle_with_quadrant(double h) {
    return ScalarField::sample([](Point p) { return p.x1 * p.x1 - p.x2 * p.x2; }, unit, h,
                               0.25, [](Point p) { return p.x1 > 0 && p.x2 > 0; });
}
}  // namespace

TEST_CASE("characteristic rescaling") {
    auto saddle = synthetic_field("saddle", 0.25, unit, 1.0 / 128);
    for (double r : {0.1, 0.35}) {
        auto v = rescale_characteristic(saddle, {0, 0}, r, 101);
        for (int i = 10; i < 90; i += 17)
            for (int j = 10; j < 90; j += 13) {
                Point p = v.node(i, j);
                CHECK(v.value(i, j) ==
                      doctest::Approx(p.x1 * p.x1 - p.x2 * p.x2).epsilon(1e-10));
            }
    }

    auto ray = synthetic_field("cusp_ray", 0.25, unit, 1.0 / 128);
    auto v = rescale_characteristic(ray, {0, 0}, 0.1, 101);
    for (int i = 5; i < 95; i += 11) {
        Point p = v.node(i, 50);
        CHECK(std::abs(v.value(i, 50) - 0.25 * p.x2 * p.x2) < 1e-10);
    }

    // exterior closed form of the rotating disk under rescaling at (1,0)
    CHECK(oracles::rankine_psi(1.1, 0.25) / 0.01 ==
          doctest::Approx(-2.1405089902162443).epsilon(1e-12));
    auto rank = synthetic_field("rankine", 0.25, {-3, 3, -3, 3}, 1.0 / 128);
    auto w = rescale_characteristic(rank, {1.0, 0.0}, 0.1, 201);
    for (double x : {0.9, 0.5, -0.4}) {
        double expect = oracles::rankine_psi(std::abs(1.0 + 0.1 * x), 0.25) / 0.01;
        CHECK(w.eval({x, 0.0}) == doctest::Approx(expect).epsilon(1e-6));
    }

    CHECK_THROWS_AS(rescale_characteristic(saddle, {0, 0}, 0.01, 101), OutOfDomain);
    CHECK_THROWS_AS(rescale_characteristic(saddle, {0.9, 0}, 0.5, 101), OutOfDomain);
}

TEST_CASE("super-characteristic rescaling normalizes the shell norm") {
    auto big = ScalarField::sample(
        [](Point p) { return 5.0 * (p.x1 * p.x1 - p.x2 * p.x2); }, unit, 1.0 / 128, 0.25);
    auto v = rescale_supercharacteristic(big, {0, 0}, 0.2, 201);
    double inv_sqrt_pi = 1.0 / std::sqrt(pi);
    for (int i = 20; i < 180; i += 23) {
        Point p = v.node(i, 77);
        CHECK(v.value(i, 77) ==
              doctest::Approx((p.x1 * p.x1 - p.x2 * p.x2) * inv_sqrt_pi).epsilon(1e-8));
    }
    // unit L2 norm on circles: S_v(rho)/rho^2 = 1 for homogeneous inputs
    CHECK(shell_norm(v, {0, 0}, 0.9) == doctest::Approx(0.81).epsilon(1e-6));

    auto zero = ScalarField::sample([](Point) { return 0.0; }, unit, 1.0 / 64, 0.25);
    CHECK_THROWS_AS(rescale_supercharacteristic(zero, {0, 0}, 0.2, 101),
                    DegenerateNormalization);

    // log-corrected corner converges to the pure quadratic under shell
    // normalization, with error decreasing in the scale
    auto corner = synthetic_field("corner_log", 0.25, unit, 1.0 / 512);
    std::vector<double> errs;
    for (double r : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
        auto u = rescale_supercharacteristic(corner, {0, 0}, r, 201);
        double err = 0.0;
        for (int i = 0; i < u.nx; ++i)
            for (int j = 0; j < u.ny; ++j) {
                Point p = u.node(i, j);
                if (p.x1 * p.x1 + p.x2 * p.x2 > 1.0) continue;
                double target = (p.x1 * p.x1 - p.x2 * p.x2) * inv_sqrt_pi;
                err = std::max(err, std::abs(u.value(i, j) - target));
            }
        errs.push_back(err);
    }
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
}

TEST_CASE("harmonic projection closed forms") {
    auto proj_of = [](const std::function<double(Point)>& fn) {
        auto v = ScalarField::sample(fn, unit, 1.0 / 200, 0.25);
        return harmonic_projection(v);
    };
    auto p1 = proj_of([](Point p) { return p.x1 * p.x1 - p.x2 * p.x2; });
    CHECK(p1.a == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(p1.b) < 1e-12);

    auto p2 = proj_of([](Point p) { return p.x1 * p.x1 + p.x2 * p.x2; });
    CHECK(std::abs(p2.a) < 1e-12);
    CHECK(std::abs(p2.b) < 1e-12);

    auto p3 = proj_of([](Point p) { return std::pow(p.x1, 4); });
    CHECK(p3.a == doctest::Approx(1.5).epsilon(2e-4));
    CHECK(std::abs(p3.b) < 1e-10);
}

TEST_CASE("projection is idempotent, linear, and kills affine parts") {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    auto& gen = oracles::rng();
    for (int trial = 0; trial < 5; ++trial) {
        HarmonicQuadratic q{u(gen), u(gen)};
        auto v = ScalarField::sample([&](Point p) { return q.eval(p); }, unit, 1.0 / 128, 0.25);
        auto back = harmonic_projection(v);
        CHECK(back.a == doctest::Approx(q.a).epsilon(1e-12));
        CHECK(back.b == doctest::Approx(q.b).epsilon(1e-12));
    }

    for (auto fn : {std::function<double(Point)>([](Point) { return 1.0; }),
                    std::function<double(Point)>([](Point p) { return p.x1; }),
                    std::function<double(Point)>([](Point p) { return p.x2; }),
                    std::function<double(Point)>([](Point p) { return dot(p, p); })}) {
        auto v = ScalarField::sample(fn, unit, 1.0 / 128, 0.25);
        auto p = harmonic_projection(v);
        CHECK(std::abs(p.a) < 1e-10);
        CHECK(std::abs(p.b) < 1e-10);
    }

    // linearity on a pair of smooth fields
    auto f1 = [](Point p) { return std::sin(2.0 * p.x1) * std::cos(p.x2); };
    auto f2 = [](Point p) { return p.x1 * p.x2 + 0.3 * std::cos(3.0 * p.x2); };
    double al = 1.7, be = -0.6;
    auto va = ScalarField::sample(f1, unit, 1.0 / 128, 0.25);
    auto vb = ScalarField::sample(f2, unit, 1.0 / 128, 0.25);
    auto vc = ScalarField::sample(
        [&](Point p) { return al * f1(p) + be * f2(p); }, unit, 1.0 / 128, 0.25);
    auto pa = harmonic_projection(va), pb = harmonic_projection(vb),
         pc = harmonic_projection(vc);
    CHECK(pc.a == doctest::Approx(al * pa.a + be * pb.a).epsilon(1e-10));
    CHECK(pc.b == doctest::Approx(al * pa.b + be * pb.b).epsilon(1e-10));
}

TEST_CASE("tau normalization") {
    auto make = [](const std::function<double(Point)>& fn) {
        return ScalarField::sample(fn, unit, 1.0 / 128, 0.25);
    };
    auto t1 = tau(make([](Point p) { return p.x1 * p.x1 - p.x2 * p.x2; }));
    CHECK(t1.tau == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(t1.direction.a == doctest::Approx(2.0).epsilon(1e-10));

    auto t2 = tau(make([](Point p) { return 3.0 * p.x1 * p.x2; }));
    CHECK(t2.tau == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(t2.direction.b == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(t2.direction.eval({1.0, 1.0}) == doctest::Approx(2.0).epsilon(1e-10));

    auto t3 = tau(make([](Point p) { return dot(p, p); }));
    CHECK(t3.tau == doctest::Approx(0.0).epsilon(1e-12));

    HarmonicQuadratic q{1.3, -0.7};
    double sup_sampled = 0.0;
    for (int k = 0; k < 4096; ++k) {
        double t = two_pi * k / 4096;
        sup_sampled = std::max(sup_sampled, std::abs(q.eval({std::cos(t), std::sin(t)})));
    }
    CHECK(q.sup_norm() == doctest::Approx(sup_sampled).epsilon(1e-8));
}

TEST_CASE("rotation equivariance of the tau direction") {
    for (double deg : {15.0, 30.0, 45.0}) {
        double gamma = deg * pi / 180.0;
        auto v = ScalarField::sample(
            [&](Point p) {
                double x = std::cos(gamma) * p.x1 + std::sin(gamma) * p.x2;
                double y = -std::sin(gamma) * p.x1 + std::cos(gamma) * p.x2;
                return x * x - y * y;
            },
            unit, 1.0 / 128, 0.25);
        double ang = harmonic_projection(v).orientation();
        double expect = std::fmod(gamma, 0.5 * pi);
        CHECK(std::abs(ang - expect) < 0.5 * pi / 180.0);
    }
}

TEST_CASE("density of reference configurations") {
    auto quadrant = saddle_with_quadrant(1.0 / 256);
    CHECK(std::abs(density(quadrant, {0, 0}, 0.5) - 0.25) <= 1e-3);

    auto full = synthetic_field("cusp_complement", 0.25, unit, 1.0 / 128);
    CHECK(density(full, {0, 0}, 0.5) == 1.0);

    auto half = ScalarField::sample([](Point p) { return p.x2; }, unit, 1.0 / 256, 0.25,
                                    [](Point p) { return p.x2 > 0; });
    CHECK(std::abs(density(half, {0, 0}, 0.5) - 0.5) <= 1e-3);

    CHECK_THROWS_AS(density(full, {0.9, 0}, 0.5), OutOfDomain);
}

TEST_CASE("classifier verdicts") {
    std::vector<double> scales{0.7, 0.35, 0.175, 0.0875};

    auto corner = synthetic_field("corner_log", 0.25, unit, 1.0 / 128);
    auto c1 = classify(corner, {0, 0}, scales);
    CHECK(c1.verdict == Verdict::Corner90);
    double dist = std::min(c1.orientation, 0.5 * pi - c1.orientation);
    CHECK(dist < pi / 180.0);

    auto ray = synthetic_field("cusp_ray", 0.25, unit, 1.0 / 128);
    auto c2 = classify(ray, {0, 0}, scales);
    CHECK((c2.verdict == Verdict::DegenerateEmpty || c2.verdict == Verdict::Cusp0));

    auto comp = synthetic_field("cusp_complement", 0.25, unit, 1.0 / 128);
    auto c3 = classify(comp, {0, 0}, scales);
    CHECK((c3.verdict == Verdict::DegenerateFull || c3.verdict == Verdict::Cusp0));

    auto rank = synthetic_field("rankine", 0.25, {-3, 3, -3, 3}, 1.0 / 128);
    auto c4 = classify(rank, {1.0, 0.0}, {0.4, 0.2, 0.1});
    CHECK(c4.verdict == Verdict::NotSingular);

    // thin wedge concentrated along the positive x1-axis: cusp with axis 0
    auto wedge = ScalarField::sample(
        [](Point p) { return 0.25 * p.x2 * p.x2; }, unit, 1.0 / 256,
        0.25, [](Point p) { return p.x1 > 0 && std::abs(p.x2) < 0.3 * p.x1; });
    auto c5 = classify(wedge, {0, 0}, scales);
    CHECK(c5.verdict == Verdict::Cusp0);
    CHECK(std::min(c5.orientation, pi - c5.orientation) < 0.05);

    // quarter-density configuration with an exact quadratic: corner branch
    auto c6 = classify(saddle_with_quadrant(1.0 / 128), {0, 0}, scales);
    CHECK(c6.verdict == Verdict::Corner90);
}

TEST_CASE("rate probe") {
    std::vector<double> scales{0.25, 0.125, 0.0625, 0.03125};

    auto corner = synthetic_field("corner_log", 0.25, unit, 1.0 / 256);
    auto pr = rate_probe(corner, {0, 0}, scales);
    REQUIRE(pr.corner_evidence);
    REQUIRE(pr.errors.size() == scales.size());
    for (std::size_t k = 1; k < pr.errors.size(); ++k)
        CHECK(pr.errors[k] < pr.errors[k - 1]);

    auto exact = saddle_with_quadrant(1.0 / 256);
    auto pe = rate_probe(exact, {0, 0}, scales);
    REQUIRE(pe.corner_evidence);
    for (double e : pe.errors) CHECK(e <= 1e-10);

    auto ray = synthetic_field("cusp_ray", 0.25, unit, 1.0 / 256);
    auto pc = rate_probe(ray, {0, 0}, scales);
    CHECK_FALSE(pc.corner_evidence);
    CHECK(pc.errors.empty());
}
