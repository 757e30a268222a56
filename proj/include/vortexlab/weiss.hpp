#ifndef VORTEXLAB_WEISS_HPP
#define VORTEXLAB_WEISS_HPP

#include <cmath>
#include <vector>

#include "vortexlab/common.hpp"
#include "vortexlab/field.hpp"

namespace vortexlab {

/// Scale-energy profile at a center point: radii with the Weiss functional
/// Phi, the shell norm S, and the growth indicator T = S / r^2.
struct WeissProfile {
    Point x0;
    std::vector<double> radii;
    std::vector<double> phi;
    std::vector<double> s;
    std::vector<double> growth;
};

struct WeissOptions {
    // Tensor-midpoint resolution for the disk integrals. The node pattern
    // lives in unit coordinates and is rescaled to each radius, so node
    // placement relative to r is identical across scales.
    int disk_nodes = 512;
};

namespace detail {

inline void require_ball_inside(const ScalarField& f, Point x0, double r) {
    if (!(r >= 4.0 * f.h)) throw OutOfDomain("radius below 4h resolution floor");
    Box b = f.box();
    double m = r + 2.5 * f.h;
    if (x0.x1 - m < b.x_min || x0.x1 + m > b.x_max || x0.x2 - m < b.y_min ||
        x0.x2 + m > b.y_max)
        throw OutOfDomain("ball not contained in the field box");
}

inline int shell_nodes(const ScalarField& f, double r) {
    return std::max(256, (int)std::ceil(4.0 * pi * r / f.h));
}

// integral over the circle of radius r of u^2, by angular trapezoid
inline double shell_u2(const ScalarField& f, Point x0, double r) {
    int n = shell_nodes(f, r);
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        double t = two_pi * k / n;
        double u = f.eval({x0.x1 + r * std::cos(t), x0.x2 + r * std::sin(t)});
        acc += u * u;
    }
    return acc * (two_pi * r / n);
}

}  // namespace detail

/// Shell norm S(x0, r) = (r^{-1} integral over the circle of u^2)^{1/2}.
inline double shell_norm(const ScalarField& f, Point x0, double r) {
    detail::require_ball_inside(f, x0, r);
    return std::sqrt(detail::shell_u2(f, x0, r) / r);
}

/// Weiss functional
///   Phi(r) = r^-4 int_{B_r} (|grad u|^2 - 2 u (l1 I_D - l2 I_Dc))
///          - 2 r^-5 int_{boundary} u^2.
/// Nondecreasing in r when u solves the patch problem.
inline double weiss_value(const ScalarField& f, Point x0, double r,
                          const WeissOptions& opt = {}) {
    detail::require_ball_inside(f, x0, r);
    int m = opt.disk_nodes;
    double w = 2.0 / m;          // unit-cell side
    double cell = w * w * r * r;  // physical cell area
    double l1 = f.lambda1(), l2 = f.lambda2();
    std::vector<double> partial((std::size_t)m, 0.0);
    parallel_chunks((std::size_t)m, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t a = lo; a < hi; ++a) {
            double xi = -1.0 + (a + 0.5) * w;
            double acc = 0.0;
            for (int b = 0; b < m; ++b) {
                double eta = -1.0 + (b + 0.5) * w;
                if (xi * xi + eta * eta >= 1.0) continue;
                Point p{x0.x1 + r * xi, x0.x2 + r * eta};
                Point g = f.gradient(p);
                double u = f.eval(p);
                double coeff = f.indicator_at(p) ? l1 : -l2;
                acc += g.x1 * g.x1 + g.x2 * g.x2 - 2.0 * u * coeff;
            }
            partial[a] = acc;
        }
    });
    double area_int = 0.0;
    for (double v : partial) area_int += v;
    area_int *= cell;
    double bdry = detail::shell_u2(f, x0, r);
    return area_int / (r * r * r * r) - 2.0 * bdry / std::pow(r, 5);
}

/// Profile with geometrically spaced radii in [r_min, r_max].
inline WeissProfile weiss_profile(const ScalarField& f, Point x0, double r_min, double r_max,
                                  int count, const WeissOptions& opt = {}) {
    if (count < 2 || !(r_min < r_max)) throw OutOfDomain("bad radius range");
    WeissProfile prof;
    prof.x0 = x0;
    double q = std::pow(r_max / r_min, 1.0 / (count - 1));
    for (int k = 0; k < count; ++k) {
        double r = r_min * std::pow(q, k);
        prof.radii.push_back(r);
        prof.phi.push_back(weiss_value(f, x0, r, opt));
        double s = shell_norm(f, x0, r);
        prof.s.push_back(s);
        prof.growth.push_back(s / (r * r));
    }
    return prof;
}

/// Residual of the monotonicity identity
///   Phi(delta) - Phi(rho) = int_rho^delta int_{boundary}
///                           2 r^-4 (grad u . nu - 2u/r)^2 dH^1 dr.
inline double derivative_identity_residual(const ScalarField& f, Point x0, double rho,
                                           double delta, const WeissOptions& opt = {}) {
    if (!(rho < delta)) throw OutOfDomain("rho must be below delta");
    double lhs = weiss_value(f, x0, delta, opt) - weiss_value(f, x0, rho, opt);
    auto shell = [&](double r) {
        int n = detail::shell_nodes(f, r);
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            double t = two_pi * k / n;
            double c = std::cos(t), s = std::sin(t);
            Point p{x0.x1 + r * c, x0.x2 + r * s};
            Point g = f.gradient(p);
            double u = f.eval(p);
            double d = g.x1 * c + g.x2 * s - 2.0 * u / r;
            acc += d * d;
        }
        return 2.0 * (acc * two_pi * r / n) / (r * r * r * r);
    };
    int shells = 64;
    double rhs = simpson(shell, rho, delta, shells);
    return std::abs(lhs - rhs);
}

/// Compactly supported test vector field sampled on the same grid as a
/// ScalarField.
struct GridVectorField {
    Point origin;
    double h = 0.0;
    int nx = 0, ny = 0;
    std::vector<double> x1, x2;

    static GridVectorField sample(const ScalarField& like,
                                  const std::function<Point(Point)>& fn) {
        GridVectorField v;
        v.origin = like.origin;
        v.h = like.h;
        v.nx = like.nx;
        v.ny = like.ny;
        v.x1.resize((std::size_t)v.nx * v.ny);
        v.x2.resize((std::size_t)v.nx * v.ny);
        for (int i = 0; i < v.nx; ++i)
            for (int j = 0; j < v.ny; ++j) {
                Point p = like.node(i, j);
                Point val = fn(p);
                v.x1[(std::size_t)i * v.ny + j] = val.x1;
                v.x2[(std::size_t)i * v.ny + j] = val.x2;
            }
        return v;
    }

    double c1(int i, int j) const { return x1[(std::size_t)i * ny + j]; }
    double c2(int i, int j) const { return x2[(std::size_t)i * ny + j]; }
};

/// Domain-variation integral
///   int |grad u|^2 div X - 2 (grad u)^t DX grad u
///       - 2 u (l1 I_D - l2 I_Dc) div X,
/// which vanishes for solutions and compactly supported X.
inline double variation_residual(const ScalarField& f, const GridVectorField& X) {
    if (X.nx != f.nx || X.ny != f.ny || X.h != f.h)
        throw InvalidTestField("test field must share the grid");
    int margin = 4;
    for (int i = 0; i < f.nx; ++i)
        for (int j = 0; j < f.ny; ++j)
            if (i < margin || j < margin || i >= f.nx - margin || j >= f.ny - margin)
                if (X.c1(i, j) != 0.0 || X.c2(i, j) != 0.0)
                    throw InvalidTestField("test field must vanish on a 4h margin");
    double l1 = f.lambda1(), l2 = f.lambda2();
    double acc = 0.0, inv2h = 0.5 / f.h;
    for (int i = 2; i < f.nx - 2; ++i)
        for (int j = 2; j < f.ny - 2; ++j) {
            double dx1_1 = (X.c1(i + 1, j) - X.c1(i - 1, j)) * inv2h;
            double dx1_2 = (X.c1(i, j + 1) - X.c1(i, j - 1)) * inv2h;
            double dx2_1 = (X.c2(i + 1, j) - X.c2(i - 1, j)) * inv2h;
            double dx2_2 = (X.c2(i, j + 1) - X.c2(i, j - 1)) * inv2h;
            double div = dx1_1 + dx2_2;
            if (div == 0.0 && dx1_2 == 0.0 && dx2_1 == 0.0) continue;
            Point g = f.gradient(f.node(i, j));
            double u = f.value(i, j);
            double quad = g.x1 * (dx1_1 * g.x1 + dx1_2 * g.x2) +
                          g.x2 * (dx2_1 * g.x1 + dx2_2 * g.x2);
            double coeff = f.in_patch(i, j) ? l1 : -l2;
            acc += (g.x1 * g.x1 + g.x2 * g.x2) * div - 2.0 * quad - 2.0 * u * coeff * div;
        }
    return acc * f.h * f.h;
}

}  // namespace vortexlab

#endif
