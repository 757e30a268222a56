#ifndef VORTEXLAB_FIELD_HPP
#define VORTEXLAB_FIELD_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vortexlab/common.hpp"
#include "vortexlab/detail/fft.hpp"
#include "vortexlab/geometry.hpp"

namespace vortexlab {

/// Relative stream function (or a synthetic test field) sampled at the cell
/// centers of a uniform Cartesian grid. Node (i, j) sits at
/// origin + ((i+1/2) h, (j+1/2) h) and owns the cell of side h around it;
/// `indicator` records patch membership of each cell center.
struct ScalarField {
    Point origin{0.0, 0.0};  // lower-left corner of the box
    double h = 0.0;
    int nx = 0, ny = 0;
    double omega = 0.0;
    std::vector<double> values;       // row-major, index i * ny + j
    std::vector<std::uint8_t> indicator;

    double lambda1() const { return 1.0 - 2.0 * omega; }
    double lambda2() const { return 2.0 * omega; }

    Point node(int i, int j) const {
        return {origin.x1 + (i + 0.5) * h, origin.x2 + (j + 0.5) * h};
    }
    double value(int i, int j) const { return values[(std::size_t)i * ny + j]; }
    bool in_patch(int i, int j) const { return indicator[(std::size_t)i * ny + j] != 0; }

    Box box() const {
        return {origin.x1, origin.x1 + nx * h, origin.x2, origin.x2 + ny * h};
    }

    /// Indicator looked up at the nearest cell center (clamped to the grid).
    bool indicator_at(Point p) const {
        int i = (int)std::lround((p.x1 - origin.x1) / h - 0.5);
        int j = (int)std::lround((p.x2 - origin.x2) / h - 0.5);
        i = std::clamp(i, 0, nx - 1);
        j = std::clamp(j, 0, ny - 1);
        return in_patch(i, j);
    }

    /// Bicubic (tensor cubic Lagrange) interpolation; reproduces cubic
    /// polynomials exactly.
    double eval(Point p) const {
        Stencil st = stencil(p);
        double w1[4], w2[4];
        lagrange_weights(st.t1, w1);
        lagrange_weights(st.t2, w2);
        double out = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                out += w1[a] * w2[b] * value(st.i0 - 1 + a, st.j0 - 1 + b);
        return out;
    }

    Point gradient(Point p) const {
        Stencil st = stencil(p);
        double w1[4], w2[4], d1[4], d2[4];
        lagrange_weights(st.t1, w1);
        lagrange_weights(st.t2, w2);
        lagrange_derivatives(st.t1, d1);
        lagrange_derivatives(st.t2, d2);
        double gx = 0.0, gy = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                double v = value(st.i0 - 1 + a, st.j0 - 1 + b);
                gx += d1[a] * w2[b] * v;
                gy += w1[a] * d2[b] * v;
            }
        return {gx / h, gy / h};
    }

    /// Samples an analytic expression on the grid.
    static ScalarField sample(const std::function<double(Point)>& fn, Box box, double h,
                              double omega,
                              const std::function<bool(Point)>& inside = nullptr) {
        ScalarField f = allocate(box, h, omega);
        for (int i = 0; i < f.nx; ++i)
            for (int j = 0; j < f.ny; ++j) {
                Point p = f.node(i, j);
                f.values[(std::size_t)i * f.ny + j] = fn(p);
                f.indicator[(std::size_t)i * f.ny + j] = inside && inside(p) ? 1 : 0;
            }
        return f;
    }

    static ScalarField allocate(Box box, double h, double omega) {
        if (!(h > 0.0)) throw InvalidGeometry("grid spacing must be positive");
        ScalarField f;
        f.origin = {box.x_min, box.y_min};
        f.h = h;
        f.omega = omega;
        f.nx = (int)std::lround(box.width() / h);
        f.ny = (int)std::lround(box.height() / h);
        if (f.nx < 16 || f.ny < 16) throw DomainTooSmall("grid must be at least 16x16");
        f.values.assign((std::size_t)f.nx * f.ny, 0.0);
        f.indicator.assign((std::size_t)f.nx * f.ny, 0);
        return f;
    }

private:
    struct Stencil {
        int i0, j0;
        double t1, t2;
    };

    Stencil stencil(Point p) const {
        double s1 = (p.x1 - origin.x1) / h - 0.5;
        double s2 = (p.x2 - origin.x2) / h - 0.5;
        int i0 = (int)std::floor(s1);
        int j0 = (int)std::floor(s2);
        if (i0 < 1 || i0 + 2 > nx - 1 || j0 < 1 || j0 + 2 > ny - 1)
            throw OutOfDomain("evaluation point outside the interpolation domain");
        return {i0, j0, s1 - i0, s2 - j0};
    }

    // Cubic Lagrange basis on nodes {-1, 0, 1, 2} evaluated at t in [0, 1).
    static void lagrange_weights(double t, double w[4]) {
        w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
        w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        w[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
        w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
    }
    static void lagrange_derivatives(double t, double d[4]) {
        d[0] = -(3.0 * t * t - 6.0 * t + 2.0) / 6.0;
        d[1] = (3.0 * t * t - 4.0 * t - 1.0) / 2.0;
        d[2] = -(3.0 * t * t - 2.0 * t - 2.0) / 2.0;
        d[3] = (3.0 * t * t - 1.0) / 6.0;
    }
};

namespace detail {

// Exact integral of log|y| over the square cell of side h centered at the
// origin equals h^2 (log h + log_cell_constant).
inline constexpr double log_cell_constant = 0.25 * pi - 1.5 - 0.34657359027997264;

// Signed antiderivative with d^2 G / dx dy = log sqrt(x^2 + y^2).
inline double log_antiderivative(double x, double y) {
    if (x == 0.0 || y == 0.0) return 0.0;
    double r2 = x * x + y * y;
    return x * y * (0.5 * std::log(r2) - 1.5) + 0.5 * x * x * std::atan(y / x) +
           0.5 * y * y * std::atan(x / y);
}

// Exact integral of log|p - y| over the cell centered at c.
inline double log_cell_integral(Point p, Point c, double h) {
    double a1 = c.x1 - 0.5 * h - p.x1, b1 = c.x1 + 0.5 * h - p.x1;
    double a2 = c.x2 - 0.5 * h - p.x2, b2 = c.x2 + 0.5 * h - p.x2;
    return log_antiderivative(b1, b2) - log_antiderivative(a1, b2) -
           log_antiderivative(b1, a2) + log_antiderivative(a1, a2);
}

struct IndicatorSupport {
    int i0 = 0, i1 = -1, j0 = 0, j1 = -1;
    bool empty() const { return i1 < i0 || j1 < j0; }
};

inline IndicatorSupport indicator_support(const ScalarField& f) {
    IndicatorSupport s{f.nx, -1, f.ny, -1};
    for (int i = 0; i < f.nx; ++i)
        for (int j = 0; j < f.ny; ++j)
            if (f.in_patch(i, j)) {
                s.i0 = std::min(s.i0, i);
                s.i1 = std::max(s.i1, i);
                s.j0 = std::min(s.j0, j);
                s.j1 = std::max(s.j1, j);
            }
    return s;
}

// Midpoint-quadrature Newtonian sum evaluated at every grid node by direct
// summation (reference path). Source cells are visited in row-major order.
inline std::vector<double> newtonian_direct(const ScalarField& f, const IndicatorSupport& sup) {
    std::vector<double> out((std::size_t)f.nx * f.ny, 0.0);
    if (sup.empty()) return out;
    std::vector<std::pair<int, int>> cells;
    for (int i = sup.i0; i <= sup.i1; ++i)
        for (int j = sup.j0; j <= sup.j1; ++j)
            if (f.in_patch(i, j)) cells.emplace_back(i, j);
    double h2 = f.h * f.h;
    double self_term = h2 * (std::log(f.h) + log_cell_constant);
    parallel_chunks((std::size_t)f.nx, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            for (int j = 0; j < f.ny; ++j) {
                double acc = 0.0;
                for (auto [ci, cj] : cells) {
                    double dx = ((int)i - ci) * f.h;
                    double dy = (j - cj) * f.h;
                    if (ci == (int)i && cj == j)
                        acc += self_term;
                    else
                        acc += 0.5 * h2 * std::log(dx * dx + dy * dy);
                }
                out[i * f.ny + j] = acc;
            }
    });
    return out;
}

// Same sum as newtonian_direct computed as one linear convolution of the
// indicator with the kernel table, via a single packed complex FFT.
inline std::vector<double> newtonian_fft(const ScalarField& f, const IndicatorSupport& sup) {
    std::vector<double> out((std::size_t)f.nx * f.ny, 0.0);
    if (sup.empty()) return out;
    int sx = sup.i1 - sup.i0 + 1, sy = sup.j1 - sup.j0 + 1;
    std::size_t Nx = next_pow2((std::size_t)f.nx + sx - 1);
    std::size_t Ny = next_pow2((std::size_t)f.ny + sy - 1);
    double h2 = f.h * f.h;

    // Z = indicator + i * kernel; one forward transform yields both spectra.
    std::vector<cplx> Z(Nx * Ny, cplx(0.0, 0.0));
    for (int i = 0; i < sx; ++i)
        for (int j = 0; j < sy; ++j)
            if (f.in_patch(sup.i0 + i, sup.j0 + j)) Z[(std::size_t)i * Ny + j] += 1.0;
    auto wrap = [](long d, std::size_t n) {
        long m = d % (long)n;
        return (std::size_t)(m < 0 ? m + (long)n : m);
    };
    // Needed offsets d1 = i - sup.i0 - s1 for i in [0,nx), s1 in [0,sx).
    for (long d1 = -(long)sup.i0 - (sx - 1); d1 <= (long)f.nx - 1 - sup.i0; ++d1)
        for (long d2 = -(long)sup.j0 - (sy - 1); d2 <= (long)f.ny - 1 - sup.j0; ++d2) {
            double k;
            if (d1 == 0 && d2 == 0)
                k = h2 * (std::log(f.h) + log_cell_constant);
            else
                k = 0.5 * h2 * std::log((double)(d1 * d1 + d2 * d2) * f.h * f.h);
            Z[wrap(d1, Nx) * Ny + wrap(d2, Ny)] += cplx(0.0, k);
        }
    fft2_inplace(Z, Nx, Ny, false);
    // Split spectra by Hermitian symmetry and multiply in place.
    for (std::size_t i = 0; i < Nx; ++i) {
        std::size_t ir = (Nx - i) % Nx;
        for (std::size_t j = 0; j < Ny; ++j) {
            std::size_t jr = (Ny - j) % Ny;
            std::size_t k = i * Ny + j, kr = ir * Ny + jr;
            if (kr < k) continue;
            cplx zk = Z[k], zr = Z[kr];
            cplx ind_k = 0.5 * (zk + std::conj(zr));
            cplx ker_k = cplx(0.0, -0.5) * (zk - std::conj(zr));
            cplx pk = ind_k * ker_k;
            Z[k] = pk;
            if (kr != k) Z[kr] = std::conj(pk);
        }
    }
    fft2_inplace(Z, Nx, Ny, true);
    double scale = 1.0 / ((double)Nx * (double)Ny);
    parallel_chunks((std::size_t)f.nx, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            for (int j = 0; j < f.ny; ++j) {
                std::size_t oi = wrap((long)i - sup.i0, Nx);
                std::size_t oj = wrap((long)j - sup.j0, Ny);
                out[i * f.ny + j] = Z[oi * Ny + oj].real() * scale;
            }
    });
    return out;
}

}  // namespace detail

/// Midpoint-quadrature Newtonian integral of the patch indicator evaluated
/// at an arbitrary point: integral over D of log|p - y| dy. Cells whose
/// center is within 1.5 h of p are integrated exactly.
inline double newtonian_log_integral(const ScalarField& f, Point p,
                                     const detail::IndicatorSupport* known_support = nullptr) {
    double h2 = f.h * f.h;
    double near2 = (1.5 * f.h) * (1.5 * f.h);
    double acc = 0.0;
    auto sup = known_support ? *known_support : detail::indicator_support(f);
    for (int i = sup.i0; i <= sup.i1; ++i)
        for (int j = sup.j0; j <= sup.j1; ++j) {
            if (!f.in_patch(i, j)) continue;
            Point c = f.node(i, j);
            double dx = p.x1 - c.x1, dy = p.x2 - c.x2;
            double d2 = dx * dx + dy * dy;
            if (d2 <= near2)
                acc += detail::log_cell_integral(p, c, f.h);
            else
                acc += 0.5 * h2 * std::log(d2);
        }
    return acc;
}

/// Solves -Laplace(psi) = I_D - 2 Omega with psi -> rigid rotation at
/// infinity and psi = 0 on the patch boundary (enforced in the mean over
/// sampled boundary points). The Newtonian integral uses midpoint quadrature
/// over indicator cells; large problems run the algebraically identical FFT
/// convolution of the same sum.
inline ScalarField relative_stream(const PatchBoundary& patch, double omega, Box box,
                                   double h) {
    if (!(omega > 0.0 && omega < 0.5)) throw InvalidOmega("omega must lie in (0, 1/2)");
    Box bb = patch.bounding_box();
    double diam = std::max(bb.x_max - bb.x_min, bb.y_max - bb.y_min);
    double slack = 1e-9 * std::max(1.0, diam);
    if (bb.x_min - box.x_min < diam - slack || box.x_max - bb.x_max < diam - slack ||
        bb.y_min - box.y_min < diam - slack || box.y_max - bb.y_max < diam - slack)
        throw DomainTooSmall("box must contain the patch with one-diameter margin");

    ScalarField f = ScalarField::allocate(box, h, omega);
    for (int i = 0; i < f.nx; ++i)
        for (int j = 0; j < f.ny; ++j)
            f.indicator[(std::size_t)i * f.ny + j] = patch.contains(f.node(i, j)) ? 1 : 0;

    auto sup = detail::indicator_support(f);
    std::size_t cells = 0;
    for (auto v : f.indicator) cells += v;
    std::vector<double> newt;
    if ((double)cells * (double)f.nx * (double)f.ny <= 5e8)
        newt = detail::newtonian_direct(f, sup);
    else
        newt = detail::newtonian_fft(f, sup);

    for (int i = 0; i < f.nx; ++i)
        for (int j = 0; j < f.ny; ++j) {
            Point p = f.node(i, j);
            f.values[(std::size_t)i * f.ny + j] =
                -newt[(std::size_t)i * f.ny + j] / two_pi +
                0.5 * omega * (p.x1 * p.x1 + p.x2 * p.x2);
        }

    // Fix the free constant: zero mean over sampled boundary points,
    // evaluated with the same quadrature as the grid values.
    auto samples = patch.sample_boundary(256);
    double mean = 0.0;
    for (const auto& s : samples) {
        double psi = -newtonian_log_integral(f, s.point, &sup) / two_pi +
                     0.5 * omega * dot(s.point, s.point);
        mean += psi;
    }
    mean /= (double)samples.size();
    for (auto& v : f.values) v -= mean;
    return f;
}

/// Closed-form test fields. Recognized ids: "cusp_ray", "cusp_complement",
/// "corner_log", "saddle", "rankine".
inline ScalarField synthetic_field(const std::string& id, double omega, Box box, double h) {
    auto quadrant = [](Point p) { return p.x1 > 0.0 && p.x2 > 0.0; };
    if (id == "cusp_ray") {
        return ScalarField::sample([omega](Point p) { return omega * p.x2 * p.x2; }, box, h,
                                   omega, nullptr);
    }
    if (id == "cusp_complement") {
        double c = 0.5 * (1.0 - 2.0 * omega);
        return ScalarField::sample([c](Point p) { return -c * p.x2 * p.x2; }, box, h, omega,
                                   [](Point) { return true; });
    }
    if (id == "corner_log") {
        return ScalarField::sample(
            [](Point p) {
                double r2 = p.x1 * p.x1 + p.x2 * p.x2;
                if (r2 == 0.0) return 0.0;  // removable at the origin
                return -0.5 * (p.x1 * p.x1 - p.x2 * p.x2) * std::log(r2);
            },
            box, h, omega, quadrant);
    }
    if (id == "saddle") {
        return ScalarField::sample([](Point p) { return p.x1 * p.x1 - p.x2 * p.x2; }, box, h,
                                   omega, nullptr);
    }
    if (id == "rankine") {
        if (!(omega > 0.0 && omega < 0.5)) throw InvalidOmega("omega must lie in (0, 1/2)");
        return ScalarField::sample(
            [omega](Point p) {
                double r2 = p.x1 * p.x1 + p.x2 * p.x2;
                if (r2 <= 1.0) return 0.25 * (1.0 - 2.0 * omega) * (1.0 - r2);
                return -0.25 * std::log(r2) + 0.5 * omega * (r2 - 1.0);
            },
            box, h, omega, [](Point p) { return p.x1 * p.x1 + p.x2 * p.x2 < 1.0; });
    }
    throw UnknownExpression("unknown synthetic field id: " + id);
}

}  // namespace vortexlab

#endif
