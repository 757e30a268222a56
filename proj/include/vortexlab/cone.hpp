#ifndef VORTEXLAB_CONE_HPP
#define VORTEXLAB_CONE_HPP

#include <cmath>
#include <vector>

#include "vortexlab/blowup.hpp"
#include "vortexlab/common.hpp"
#include "vortexlab/field.hpp"

namespace vortexlab {

/// Generalized Newtonian potential of the quadrant cone
/// C = {r > 0, 0 < theta < pi/2}:
///   -Laplace(z) = I_C - 2 omega,
///   z = r^2 phi(theta) + r^2 log r (logA cos 2 theta + logB sin 2 theta).
/// The resonant coefficients absorb the forcing's cos/sin(2 theta) modes,
/// which the angular operator cannot invert (-4 logA = a2, -4 logB = b2);
/// the remaining kernel pair is fixed by Pi(z) = 0 on the unit disk.
class ConePotential {
public:
    static ConePotential build(double omega, int K = 512, int projection_nodes = 201) {
        if (!(omega >= 0.0 && omega < 0.5))
            throw InvalidOmega("omega must lie in [0, 1/2)");
        if (K < 128) K = 128;
        ConePotential z;
        z.omega_ = omega;
        z.proj_nodes_ = projection_nodes;
        z.phi0_ = -(0.25 - 2.0 * omega) / 4.0;
        z.cos_.assign(K + 1, 0.0);
        z.sin_.assign(K + 1, 0.0);
        // sin(n pi/2) and cos(n pi/2) cycle through {0, +-1}; evaluate them
        // exactly so vanishing coefficients vanish identically
        static constexpr int sin_quarter[4] = {0, 1, 0, -1};
        static constexpr int cos_quarter[4] = {1, 0, -1, 0};
        for (int n = 1; n <= K; ++n) {
            double an = sin_quarter[n % 4] / (n * pi);
            double bn = (1 - cos_quarter[n % 4]) / (n * pi);
            if (n == 2) {
                z.log_a_ = -an / 4.0;
                z.log_b_ = -bn / 4.0;
            } else {
                z.cos_[n] = an / (double)(n * n - 4);
                z.sin_[n] = bn / (double)(n * n - 4);
            }
        }
        // kernel pair from Pi(z) = 0 under the same numerical projection
        // used downstream; kernel modes project exactly, so the fix is exact
        HarmonicQuadratic base = harmonic_projection(z.sample_unit_square());
        z.cos_[2] = -base.a / 2.0;
        z.sin_[2] = -base.b / 2.0;
        return z;
    }

    double omega() const { return omega_; }
    int truncation() const { return (int)cos_.size() - 1; }
    int projection_nodes() const { return proj_nodes_; }
    double log_cos_coefficient() const { return log_a_; }
    double log_sin_coefficient() const { return log_b_; }
    double constant_mode() const { return phi0_; }
    double kernel_cos() const { return cos_[2]; }
    double kernel_sin() const { return sin_[2]; }
    const std::vector<double>& cos_modes() const { return cos_; }
    const std::vector<double>& sin_modes() const { return sin_; }

    double eval(Point p) const {
        double r2 = p.x1 * p.x1 + p.x2 * p.x2;
        if (r2 == 0.0) return 0.0;
        double theta = std::atan2(p.x2, p.x1);
        double phi = phi0_;
        double c1 = std::cos(theta), s1 = std::sin(theta);
        double cn = 1.0, sn = 0.0;  // cos/sin of n*theta, starting at n=0
        for (int n = 1; n < (int)cos_.size(); ++n) {
            double cnext = cn * c1 - sn * s1;
            double snext = sn * c1 + cn * s1;
            cn = cnext;
            sn = snext;
            phi += cos_[n] * cn + sin_[n] * sn;
        }
        double c2t = c1 * c1 - s1 * s1, s2t = 2.0 * s1 * c1;
        double logr = 0.5 * std::log(r2);
        return r2 * phi + r2 * logr * (log_a_ * c2t + log_b_ * s2t);
    }

    /// z_s(x) = z(s x) / s^2 sampled over [-1, 1]^2.
    ScalarField rescaled(double s) const {
        ScalarField f = ScalarField::allocate({-1, 1, -1, 1}, 2.0 / proj_nodes_, omega_);
        for (int i = 0; i < f.nx; ++i)
            for (int j = 0; j < f.ny; ++j) {
                Point p = f.node(i, j);
                f.values[(std::size_t)i * f.ny + j] =
                    eval({s * p.x1, s * p.x2}) / (s * s);
                f.indicator[(std::size_t)i * f.ny + j] = (p.x1 > 0 && p.x2 > 0) ? 1 : 0;
            }
        return f;
    }

private:
    ScalarField sample_unit_square() const { return rescaled(1.0); }

    double omega_ = 0.0;
    double phi0_ = 0.0;
    double log_a_ = 0.0, log_b_ = 0.0;
    std::vector<double> cos_, sin_;  // index n; slot 2 holds the kernel pair
    int proj_nodes_ = 201;
};

/// Max 5-point finite-difference residual |-Lap_h z - (I_C - 2 omega)| over
/// the box, excluding points within `exclude` of the cone boundary rays or
/// the origin.
inline double cone_laplacian_residual(const ConePotential& z, Box box, double h,
                                      double exclude) {
    if (!(exclude >= 4.0 * h)) throw OutOfDomain("exclusion zone must be at least 4h");
    int nx = (int)std::lround(box.width() / h);
    int ny = (int)std::lround(box.height() / h);
    auto dist_to_boundary = [](Point p) {
        double d1 = p.x1 > 0.0 ? std::abs(p.x2) : norm(p);  // ray theta = 0
        double d2 = p.x2 > 0.0 ? std::abs(p.x1) : norm(p);  // ray theta = pi/2
        return std::min({d1, d2, norm(p)});
    };
    std::vector<double> worst_row(nx, 0.0);
    parallel_chunks((std::size_t)nx, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double w = 0.0;
            for (int j = 0; j < ny; ++j) {
                Point p{box.x_min + (i + 0.5) * h, box.y_min + (j + 0.5) * h};
                if (dist_to_boundary(p) < exclude) continue;
                double lap = (4.0 * z.eval(p) - z.eval({p.x1 - h, p.x2}) -
                              z.eval({p.x1 + h, p.x2}) - z.eval({p.x1, p.x2 - h}) -
                              z.eval({p.x1, p.x2 + h})) /
                             (h * h);
                double rhs = (p.x1 > 0.0 && p.x2 > 0.0 ? 1.0 : 0.0) - 2.0 * z.omega();
                w = std::max(w, std::abs(lap - rhs));
            }
            worst_row[i] = w;
        }
    });
    double worst = 0.0;
    for (double w : worst_row) worst = std::max(worst, w);
    return worst;
}

struct ProjectionReport {
    HarmonicQuadratic pi;
    double tau = 0.0;
};

/// Pi and tau of z_s = z(s x)/s^2 on the unit disk. The scaling law gives
/// Pi(z_s) = Pi(z) + log(s) (logA (x1^2-x2^2) + 2 logB x1 x2) exactly.
inline ProjectionReport cone_projection_report(const ConePotential& z, double s) {
    if (!(s > 0.0 && s <= 1.0)) throw OutOfDomain("scale must lie in (0, 1]");
    ScalarField f = z.rescaled(s);
    ProjectionReport rep;
    rep.pi = harmonic_projection(f);
    rep.tau = rep.pi.sup_norm();
    return rep;
}

}  // namespace vortexlab

#endif
