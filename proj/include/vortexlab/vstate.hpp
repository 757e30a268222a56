#ifndef VORTEXLAB_VSTATE_HPP
#define VORTEXLAB_VSTATE_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "vortexlab/common.hpp"
#include "vortexlab/geometry.hpp"

namespace vortexlab {

namespace detail {

// Quadrature weights for the periodic product rule
//   integral f(t) log(4 sin^2((t - t0)/2)) dt  ~=  sum_j R_{j - j0} f(t_j),
// exact for trigonometric polynomials up to degree n/2.
inline const std::vector<double>& log_quadrature_weights(int n) {
    static std::vector<double> cache;
    static int cached_n = -1;
    if (cached_n != n) {
        cache.assign(n, 0.0);
        for (int k = 0; k < n; ++k) {
            double t = two_pi * k / n;
            double acc = 0.0;
            for (int m = 1; m <= n / 2 - 1; ++m) acc += std::cos(m * t) / m;
            cache[k] = -(4.0 * pi / n) * acc - (4.0 * pi / (double)n / (double)n) *
                                                  std::cos(0.5 * n * t);
        }
        cached_n = n;
    }
    return cache;
}

struct CurveNodes {
    std::vector<Point> y;        // boundary points
    std::vector<Point> yp;       // derivatives with respect to the parameter
    std::vector<double> sq_yp;   // |y'|^2
};

inline CurveNodes discretize(const PatchBoundary& p, int n) {
    CurveNodes c;
    c.y.resize(n);
    c.yp.resize(n);
    c.sq_yp.resize(n);
    for (int j = 0; j < n; ++j) {
        double t = two_pi * j / n;
        double r = p.radius(t), dr = p.radius_derivative(t);
        double ct = std::cos(t), st = std::sin(t);
        c.y[j] = {p.center().x1 + r * ct, p.center().x2 + r * st};
        c.yp[j] = {dr * ct - r * st, dr * st + r * ct};
        c.sq_yp[j] = dot(c.yp[j], c.yp[j]);
    }
    return c;
}

}  // namespace detail

/// Relative stream function on the patch boundary through the contour
/// reduction of the Newtonian integral,
///   int_D log|x-y| dy = (1/2) oint ((y-x).n) log|y-x| ds - area/2,
/// with the log singularity handled by the spectral product quadrature.
/// Returns psi at the n parameter nodes (constant not yet projected out).
inline std::vector<double> boundary_stream_values(const PatchBoundary& patch, double omega,
                                                  int n) {
    if (n < 64 || n % 2) throw InvalidGeometry("node count must be even and at least 64");
    auto c = detail::discretize(patch, n);
    const auto& R = detail::log_quadrature_weights(n);
    double area = patch.area();
    std::vector<double> psi(n);
    parallel_chunks((std::size_t)n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            Point x = c.y[i];
            double acc = 0.0;
            for (int j = 0; j < n; ++j) {
                // w = (y - x) . (y2', -y1'); vanishes quadratically at j = i
                Point d{c.y[j].x1 - x.x1, c.y[j].x2 - x.x2};
                double w = d.x1 * c.yp[j].x2 - d.x2 * c.yp[j].x1;
                if (w == 0.0) continue;
                double d2 = d.x1 * d.x1 + d.x2 * d.x2;
                double s = std::sin(pi * (double)((int)i - j) / n);
                double kress = R[((int)i - j + n) % n];
                double smooth;
                if ((int)i == j) {
                    smooth = std::log(c.sq_yp[j]);
                } else {
                    smooth = std::log(d2 / (4.0 * s * s));
                }
                acc += 0.5 * (kress * w + (two_pi / n) * w * smooth);
            }
            double newton = 0.5 * acc - 0.5 * area;
            psi[i] = -newton / two_pi + 0.5 * omega * dot(x, x);
        }
    });
    return psi;
}

/// Boundary gradient of psi through the contour identity
///   grad int_D log|x-y| dy = -oint log|x-y| n(y) ds(y).
inline std::vector<Point> boundary_stream_gradients(const PatchBoundary& patch, double omega,
                                                    int n) {
    if (n < 64 || n % 2) throw InvalidGeometry("node count must be even and at least 64");
    auto c = detail::discretize(patch, n);
    const auto& R = detail::log_quadrature_weights(n);
    std::vector<Point> grad(n);
    parallel_chunks((std::size_t)n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            Point x = c.y[i];
            double g1 = 0.0, g2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double v1 = c.yp[j].x2, v2 = -c.yp[j].x1;  // n |y'|
                double kress = R[((int)i - j + n) % n];
                double smooth;
                if ((int)i == j) {
                    smooth = std::log(c.sq_yp[j]);
                } else {
                    Point d{c.y[j].x1 - x.x1, c.y[j].x2 - x.x2};
                    double d2 = d.x1 * d.x1 + d.x2 * d.x2;
                    double s = std::sin(pi * (double)((int)i - j) / n);
                    smooth = std::log(d2 / (4.0 * s * s));
                }
                double lw = 0.5 * kress + 0.5 * (two_pi / n) * smooth;
                g1 += lw * v1;
                g2 += lw * v2;
            }
            grad[i] = {g1 / two_pi + omega * x.x1, g2 / two_pi + omega * x.x2};
        }
    });
    return grad;
}

/// Sup over boundary samples of |psi - mean psi|; zero exactly when the
/// patch rotates steadily at omega.
inline double boundary_residual(const PatchBoundary& patch, double omega, int nodes) {
    auto psi = boundary_stream_values(patch, omega, nodes);
    double mean = 0.0;
    for (double v : psi) mean += v;
    mean /= (double)psi.size();
    double worst = 0.0;
    for (double v : psi) worst = std::max(worst, std::abs(v - mean));
    return worst;
}

struct VStateSolution {
    PatchBoundary patch = PatchBoundary::disk(1.0);
    double omega = 0.0;
    double residual = 0.0;
    double amplitude = 0.0;  // leading retained cosine coefficient
    int iterations = 0;
};

struct VStateOptions {
    int modes = 32;            // free m-fold cosine amplitudes
    int quadrature_nodes = 0;  // 0: max(256, 8 * modes * fold)
    double fd_step = 1e-7;
    double mean_radius = 1.0;
};

namespace detail {

struct MfoldShape {
    double r0 = 1.0;
    int fold = 2;
    std::vector<double> amps;  // coefficient of cos(fold * k * theta)

    PatchBoundary patch() const {
        std::vector<double> cosc((std::size_t)fold * amps.size(), 0.0);
        for (std::size_t k = 0; k < amps.size(); ++k)
            cosc[fold * (k + 1) - 1] = amps[k];
        return PatchBoundary::fourier(r0, {0.0, 0.0}, cosc, {});
    }

    bool positive_radius() const {
        for (int i = 0; i < 4096; ++i) {
            double t = two_pi * i / 4096;
            double r = 1.0;
            for (std::size_t k = 0; k < amps.size(); ++k)
                r += amps[k] * std::cos((double)(fold * (k + 1)) * t);
            if (r <= 1e-6) return false;
        }
        return true;
    }
};

// residuals psi(theta_i) - mean(psi) at `count` collocation nodes spread
// over the fundamental half-sector [0, pi/fold), starting on the symmetry
// axis so the top retained mode stays visible to the equations
inline std::vector<double> collocation_residuals(const MfoldShape& s, double omega, int n,
                                                 int count) {
    if (!s.positive_radius()) throw SelfIntersection("boundary radius vanished");
    auto psi = boundary_stream_values(s.patch(), omega, n);
    double mean = 0.0;
    for (double v : psi) mean += v;
    mean /= (double)psi.size();
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) {
        double target = pi * i / (double)(s.fold * count);
        int j = (int)std::lround(target / (two_pi / n));
        out[i] = psi[j % n] - mean;
    }
    return out;
}


// dense LU solve with partial pivoting; throws JacobianSingular
inline std::vector<double> lu_solve(std::vector<std::vector<double>> A,
                                    std::vector<double> b) {
    int n = (int)b.size();
    double scale = 0.0;
    for (auto& row : A)
        for (double v : row) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw JacobianSingular("zero jacobian");
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
        if (std::abs(A[piv][k]) < 1e-13 * scale)
            throw JacobianSingular("newton matrix is numerically singular");
        std::swap(A[piv], A[k]);
        std::swap(b[piv], b[k]);
        for (int i = k + 1; i < n; ++i) {
            double f = A[i][k] / A[k][k];
            for (int j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double acc = b[i];
        for (int j = i + 1; j < n; ++j) acc -= A[i][j] * x[j];
        x[i] = acc / A[i][i];
    }
    return x;
}
// Gauss-Newton step: solve the normal equations of the overdetermined
// collocation system J delta = -r.
inline std::vector<double> normal_equation_step(const std::vector<std::vector<double>>& J,
                                                const std::vector<double>& r) {
    int rows = (int)r.size(), cols = (int)J[0].size();
    std::vector<std::vector<double>> N(cols, std::vector<double>(cols, 0.0));
    std::vector<double> g(cols, 0.0);
    for (int i = 0; i < rows; ++i)
        for (int a = 0; a < cols; ++a) {
            g[a] -= J[i][a] * r[i];
            for (int b = a; b < cols; ++b) N[a][b] += J[i][a] * J[i][b];
        }
    for (int a = 0; a < cols; ++a)
        for (int b = 0; b < a; ++b) N[a][b] = N[b][a];
    return lu_solve(std::move(N), std::move(g));
}


inline int default_nodes(const VStateOptions& opt, int fold) {
    if (opt.modes < 1 || opt.modes > 256)
        throw InvalidConstraints("mode count must lie in [1, 256]");
    int n = opt.quadrature_nodes > 0 ? opt.quadrature_nodes
                                     : std::max(256, 8 * opt.modes * fold);
    if (n < 8 * opt.modes) throw InvalidConstraints("need at least 8 nodes per mode");
    return n + (n % 2);
}

inline MfoldShape shape_from_patch(const PatchBoundary& initial, int fold,
                                   const VStateOptions& opt) {
    MfoldShape s;
    s.fold = fold;
    s.amps.assign(opt.modes, 0.0);
    if (initial.kind() == PatchBoundary::Kind::disk) {
        s.r0 = initial.disk_radius();
        return s;
    }
    if (initial.kind() != PatchBoundary::Kind::fourier)
        throw InvalidGeometry("initial patch must be a disk or a fourier boundary");
    s.r0 = initial.fourier_r0();
    for (double b : initial.fourier_sin())
        if (b != 0.0)
            throw InvalidGeometry("initial patch is not m-fold cosine symmetric");
    const auto& cosc = initial.fourier_cos();
    for (std::size_t k = 0; k < cosc.size(); ++k) {
        int mode = (int)k + 1;
        if (cosc[k] == 0.0) continue;
        if (mode % fold != 0)
            throw InvalidGeometry("initial patch is not m-fold cosine symmetric");
        int slot = mode / fold - 1;
        if (slot >= (int)s.amps.size()) s.amps.resize(slot + 1, 0.0);
        s.amps[slot] = cosc[k];
    }
    return s;
}

}  // namespace detail

/// Newton iteration on the m-fold cosine amplitudes at fixed omega.
inline VStateSolution newton_solve(const PatchBoundary& initial, double omega, int fold,
                                   double tol = 1e-11, int max_iter = 30,
                                   const VStateOptions& opt = {}) {
    if (!(omega > 0.0 && omega < 0.5)) throw InvalidOmega("omega must lie in (0, 1/2)");
    if (fold < 2) throw InvalidFold("fold symmetry must be at least 2");
    if (!(tol >= 1e-12)) throw InvalidConstraints("tolerance below 1e-12");
    auto s = detail::shape_from_patch(initial, fold, opt);
    int M = (int)s.amps.size();
    int n = detail::default_nodes(opt, fold);

    VStateSolution sol;
    for (int iter = 0; iter <= max_iter; ++iter) {
        double res = boundary_residual(s.patch(), omega, n);
        if (res <= tol) {
            sol.patch = s.patch();
            sol.omega = omega;
            sol.residual = res;
            sol.amplitude = s.amps.empty() ? 0.0 : s.amps[0];
            sol.iterations = iter;
            return sol;
        }
        if (iter == max_iter) break;
        int rows = 2 * M;
        auto r0 = detail::collocation_residuals(s, omega, n, rows);
        std::vector<std::vector<double>> J(rows, std::vector<double>(M));
        for (int k = 0; k < M; ++k) {
            auto pert = s;
            double eps = opt.fd_step * std::max(1.0, std::abs(s.amps[k]));
            pert.amps[k] += eps;
            auto rk = detail::collocation_residuals(pert, omega, n, rows);
            for (int i = 0; i < rows; ++i) J[i][k] = (rk[i] - r0[i]) / eps;
        }
        auto delta = detail::normal_equation_step(J, r0);
        for (int k = 0; k < M; ++k) s.amps[k] += delta[k];
        if (!s.positive_radius()) throw SelfIntersection("newton step left the chart");
    }
    throw MaxIterExceeded("newton did not reach the tolerance");
}

/// Newton iteration with the leading amplitude pinned and omega freed;
/// follows the branch through amplitude continuation.
inline VStateSolution newton_solve_at_amplitude(const PatchBoundary& initial,
                                                double omega_guess, int fold,
                                                double amplitude, double tol = 1e-11,
                                                int max_iter = 40,
                                                const VStateOptions& opt = {}) {
    if (fold < 2) throw InvalidFold("fold symmetry must be at least 2");
    auto s = detail::shape_from_patch(initial, fold, opt);
    int M = (int)s.amps.size();
    if (M < 2) throw InvalidConstraints("need at least two modes for continuation");
    s.amps[0] = amplitude;
    double omega = omega_guess;

    for (int iter = 0; iter <= max_iter; ++iter) {
        double res = boundary_residual(s.patch(), omega, detail::default_nodes(opt, fold));
        if (res <= tol) {
            VStateSolution sol;
            sol.patch = s.patch();
            sol.omega = omega;
            sol.residual = res;
            sol.amplitude = amplitude;
            sol.iterations = iter;
            return sol;
        }
        if (iter == max_iter) break;
        int n = detail::default_nodes(opt, fold);
        int rows = 2 * M;
        auto r0 = detail::collocation_residuals(s, omega, n, rows);
        // unknowns: amps[1..M-1] and omega
        std::vector<std::vector<double>> J(rows, std::vector<double>(M));
        for (int k = 1; k < M; ++k) {
            auto pert = s;
            double eps = opt.fd_step * std::max(1.0, std::abs(s.amps[k]));
            pert.amps[k] += eps;
            auto rk = detail::collocation_residuals(pert, omega, n, rows);
            for (int i = 0; i < rows; ++i) J[i][k - 1] = (rk[i] - r0[i]) / eps;
        }
        {
            double eps = opt.fd_step;
            auto rk = detail::collocation_residuals(s, omega + eps, n, rows);
            for (int i = 0; i < rows; ++i) J[i][M - 1] = (rk[i] - r0[i]) / eps;
        }
        auto delta = detail::normal_equation_step(J, r0);
        for (int k = 1; k < M; ++k) s.amps[k] += delta[k - 1];
        omega += delta[M - 1];
        if (!(omega > 0.0 && omega < 0.5))
            throw InvalidOmega("continuation left the admissible rotation range");
        if (!s.positive_radius()) throw SelfIntersection("newton step left the chart");
    }
    throw MaxIterExceeded("newton did not reach the tolerance");
}

struct BranchResult {
    std::vector<VStateSolution> points;
    bool completed = false;
    std::string stop_reason;
};

/// Amplitude continuation from the disk: each step reuses the previous
/// solution as the initial guess. Stops cleanly at the first failure.
inline BranchResult continuation_branch_amplitude(int fold, double omega_start,
                                                  const std::vector<double>& amplitudes,
                                                  double tol = 1e-11,
                                                  const VStateOptions& opt = {}) {
    BranchResult out;
    PatchBoundary guess = PatchBoundary::disk(opt.mean_radius);
    double omega = omega_start;
    for (double a : amplitudes) {
        try {
            auto sol = newton_solve_at_amplitude(guess, omega, fold, a, tol, 40, opt);
            omega = sol.omega;
            guess = sol.patch;
            out.points.push_back(std::move(sol));
        } catch (const Error& e) {
            out.stop_reason = e.code();
            return out;
        }
    }
    out.completed = true;
    return out;
}

/// Omega continuation at fixed fold: monotone schedule, previous solution
/// seeds the next solve.
inline BranchResult continuation_branch_omega(int fold, const PatchBoundary& initial,
                                              const std::vector<double>& omegas,
                                              double tol = 1e-11,
                                              const VStateOptions& opt = {}) {
    BranchResult out;
    PatchBoundary guess = initial;
    for (double om : omegas) {
        try {
            auto sol = newton_solve(guess, om, fold, tol, 30, opt);
            guess = sol.patch;
            out.points.push_back(std::move(sol));
        } catch (const Error& e) {
            out.stop_reason = e.code();
            return out;
        }
    }
    out.completed = true;
    return out;
}

struct BoundaryGradientSample {
    Point point;
    double grad_norm = 0.0;
    bool flagged = false;
};

/// Boundary samples ordered by |grad psi|; candidates below the threshold
/// (relative to the median magnitude) are flagged for blow-up analysis.
inline std::vector<BoundaryGradientSample> singularity_scan(const VStateSolution& sol,
                                                            int nodes = 512,
                                                            double rel_threshold = 0.05) {
    auto grads = boundary_stream_gradients(sol.patch, sol.omega, nodes);
    auto curve = detail::discretize(sol.patch, nodes);
    std::vector<BoundaryGradientSample> out(nodes);
    std::vector<double> mags(nodes);
    for (int i = 0; i < nodes; ++i) {
        out[i].point = curve.y[i];
        out[i].grad_norm = norm(grads[i]);
        mags[i] = out[i].grad_norm;
    }
    std::nth_element(mags.begin(), mags.begin() + nodes / 2, mags.end());
    double median = mags[nodes / 2];
    for (auto& s : out) s.flagged = s.grad_norm < rel_threshold * median;
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.grad_norm < b.grad_norm; });
    return out;
}

}  // namespace vortexlab

#endif
