#ifndef VORTEXLAB_GEOMETRY_HPP
#define VORTEXLAB_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "vortexlab/common.hpp"

namespace vortexlab {

/// Closed boundary of a vortical domain. Exact families (disk, annulus,
/// ellipse) are kept in analytic form; perturbed patches use a polar Fourier
/// radius r(theta) = R0 * (1 + sum_k a_k cos(k theta) + b_k sin(k theta))
/// about `center`. All kinds are star-shaped about their center, so the
/// curve is simple whenever r(theta) > 0.
class PatchBoundary {
public:
    enum class Kind { disk, annulus, ellipse, fourier };

    static constexpr int max_fourier_modes = 256;
    // Points closer to the curve than this margin count as outside, so that
    // membership is deterministic on the boundary itself.
    static constexpr double boundary_margin = 1e-12;

    static PatchBoundary disk(double radius) {
        if (!(radius > 0.0)) throw InvalidGeometry("disk radius must be positive");
        PatchBoundary p;
        p.kind_ = Kind::disk;
        p.a_ = radius;
        return p;
    }

    // Annulus b <= |x| <= 1 (outer radius fixed to one).
    static PatchBoundary annulus(double inner) {
        if (!(inner > 0.0 && inner < 1.0))
            throw InvalidGeometry("annulus inner radius must lie in (0,1)");
        PatchBoundary p;
        p.kind_ = Kind::annulus;
        p.a_ = inner;
        return p;
    }

    static PatchBoundary ellipse(double a, double b) {
        if (!(a > 0.0 && b > 0.0)) throw InvalidGeometry("ellipse axes must be positive");
        if (!(a >= b)) throw InvalidGeometry("ellipse requires a >= b");
        PatchBoundary p;
        p.kind_ = Kind::ellipse;
        p.a_ = a;
        p.b_ = b;
        return p;
    }

    static PatchBoundary fourier(double r0, Point center, std::vector<double> cos_coeffs,
                                 std::vector<double> sin_coeffs) {
        if (!(r0 > 0.0)) throw InvalidGeometry("mean radius must be positive");
        if (!std::isfinite(center.x1) || !std::isfinite(center.x2))
            throw InvalidGeometry("center must be finite");
        if (cos_coeffs.size() > (std::size_t)max_fourier_modes ||
            sin_coeffs.size() > (std::size_t)max_fourier_modes)
            throw InvalidGeometry("too many fourier modes");
        PatchBoundary p;
        p.kind_ = Kind::fourier;
        p.a_ = r0;
        p.center_ = center;
        p.cos_ = std::move(cos_coeffs);
        p.sin_ = std::move(sin_coeffs);
        for (double c : p.cos_)
            if (!std::isfinite(c)) throw InvalidGeometry("non-finite coefficient");
        for (double c : p.sin_)
            if (!std::isfinite(c)) throw InvalidGeometry("non-finite coefficient");
        double slack = 0.0;
        for (double c : p.cos_) slack += std::abs(c);
        for (double c : p.sin_) slack += std::abs(c);
        if (slack >= 1.0 - 1e-12) {
            // The cheap l1 margin cannot certify positivity; fall back to a
            // dense scan before rejecting.
            double rmin = p.min_radius_sampled(16384);
            if (!(rmin > 1e-9 * r0))
                throw InvalidGeometry("fourier radius is not positive");
        } else if (!(p.min_radius_sampled(4096) > 0.0)) {
            throw InvalidGeometry("fourier radius is not positive");
        }
        return p;
    }

    Kind kind() const { return kind_; }
    double disk_radius() const { return a_; }
    double annulus_inner() const { return a_; }
    double ellipse_a() const { return a_; }
    double ellipse_b() const { return b_; }
    double fourier_r0() const { return a_; }
    Point center() const { return center_; }
    const std::vector<double>& fourier_cos() const { return cos_; }
    const std::vector<double>& fourier_sin() const { return sin_; }

    /// Polar radius of the boundary at angle theta about the patch center.
    /// For the annulus this is the outer circle.
    double radius(double theta) const {
        switch (kind_) {
            case Kind::disk: return a_;
            case Kind::annulus: return 1.0;
            case Kind::ellipse: {
                double c = std::cos(theta), s = std::sin(theta);
                return a_ * b_ / std::sqrt(b_ * b_ * c * c + a_ * a_ * s * s);
            }
            case Kind::fourier: {
                double r = 1.0;
                for (std::size_t k = 0; k < cos_.size(); ++k)
                    r += cos_[k] * std::cos((double)(k + 1) * theta);
                for (std::size_t k = 0; k < sin_.size(); ++k)
                    r += sin_[k] * std::sin((double)(k + 1) * theta);
                return a_ * r;
            }
        }
        return 0.0;
    }

    double radius_derivative(double theta) const {
        switch (kind_) {
            case Kind::disk:
            case Kind::annulus: return 0.0;
            case Kind::ellipse: {
                double c = std::cos(theta), s = std::sin(theta);
                double d = b_ * b_ * c * c + a_ * a_ * s * s;
                return -a_ * b_ * (a_ * a_ - b_ * b_) * s * c / (d * std::sqrt(d));
            }
            case Kind::fourier: {
                double dr = 0.0;
                for (std::size_t k = 0; k < cos_.size(); ++k) {
                    double m = (double)(k + 1);
                    dr -= m * cos_[k] * std::sin(m * theta);
                }
                for (std::size_t k = 0; k < sin_.size(); ++k) {
                    double m = (double)(k + 1);
                    dr += m * sin_[k] * std::cos(m * theta);
                }
                return a_ * dr;
            }
        }
        return 0.0;
    }

    /// Strict interior membership; points within `boundary_margin` of the
    /// curve resolve to outside.
    bool contains(Point p) const {
        switch (kind_) {
            case Kind::disk: return norm(p - center_) < a_ - boundary_margin;
            case Kind::annulus: {
                double r = norm(p);
                return r > a_ + boundary_margin && r < 1.0 - boundary_margin;
            }
            case Kind::ellipse: {
                double u = p.x1 / a_, v = p.x2 / b_;
                return u * u + v * v < 1.0 - boundary_margin;
            }
            case Kind::fourier: {
                Point q = p - center_;
                double rho = norm(q);
                if (rho == 0.0) return radius(0.0) > boundary_margin;
                return rho < radius(std::atan2(q.x2, q.x1)) - boundary_margin;
            }
        }
        return false;
    }

    double area() const {
        switch (kind_) {
            case Kind::disk: return pi * a_ * a_;
            case Kind::annulus: return pi * (1.0 - a_ * a_);
            case Kind::ellipse: return pi * a_ * b_;
            case Kind::fourier: {
                int n = std::max<int>(256, 8 * (int)std::max(cos_.size(), sin_.size()));
                double sum = 0.0;
                for (int j = 0; j < n; ++j) {
                    double r = radius(two_pi * j / n);
                    sum += r * r;
                }
                return 0.5 * sum * two_pi / n;
            }
        }
        return 0.0;
    }

    /// Axis-aligned bounding box of the patch.
    Box bounding_box() const {
        switch (kind_) {
            case Kind::disk:
                return {center_.x1 - a_, center_.x1 + a_, center_.x2 - a_, center_.x2 + a_};
            case Kind::annulus: return {-1.0, 1.0, -1.0, 1.0};
            case Kind::ellipse: return {-a_, a_, -b_, b_};
            case Kind::fourier: {
                Box bb{1e300, -1e300, 1e300, -1e300};
                int n = 4096;
                for (int j = 0; j < n; ++j) {
                    double t = two_pi * j / n;
                    double r = radius(t);
                    double x = center_.x1 + r * std::cos(t);
                    double y = center_.x2 + r * std::sin(t);
                    bb.x_min = std::min(bb.x_min, x);
                    bb.x_max = std::max(bb.x_max, x);
                    bb.y_min = std::min(bb.y_min, y);
                    bb.y_max = std::max(bb.y_max, y);
                }
                return bb;
            }
        }
        return {0, 0, 0, 0};
    }

    struct BoundarySample {
        Point point;
        Point tangent;  // unit tangent, oriented counterclockwise
    };

    /// n samples equispaced in the polar parameter. The annulus splits the
    /// budget between its outer and inner circles.
    std::vector<BoundarySample> sample_boundary(int n) const {
        if (n < 4 || (kind_ == Kind::fourier && n < 16))
            throw InvalidGeometry("too few boundary samples");
        std::vector<BoundarySample> out;
        out.reserve(n);
        if (kind_ == Kind::annulus) {
            int n_outer = (n + 1) / 2, n_inner = n - n_outer;
            for (int j = 0; j < n_outer; ++j) {
                double t = two_pi * j / n_outer;
                out.push_back({{std::cos(t), std::sin(t)}, {-std::sin(t), std::cos(t)}});
            }
            for (int j = 0; j < n_inner; ++j) {
                double t = two_pi * j / n_inner;
                out.push_back({{a_ * std::cos(t), a_ * std::sin(t)},
                               {-std::sin(t), std::cos(t)}});
            }
            return out;
        }
        for (int j = 0; j < n; ++j) {
            double t = two_pi * j / n;
            double r = radius(t), dr = radius_derivative(t);
            double c = std::cos(t), s = std::sin(t);
            Point pt{center_.x1 + r * c, center_.x2 + r * s};
            Point tv{dr * c - r * s, dr * s + r * c};
            double len = norm(tv);
            out.push_back({pt, {tv.x1 / len, tv.x2 / len}});
        }
        return out;
    }

private:
    PatchBoundary() = default;

    double min_radius_sampled(int n) const {
        double rmin = 1e300;
        for (int j = 0; j < n; ++j) rmin = std::min(rmin, radius(two_pi * j / n));
        return rmin;
    }

    Kind kind_ = Kind::disk;
    double a_ = 1.0;  // disk radius / annulus inner / ellipse a / fourier R0
    double b_ = 1.0;  // ellipse b
    Point center_{0.0, 0.0};
    std::vector<double> cos_, sin_;
};

/// Angular velocity of the steadily rotating ellipse patch with semi-axes
/// (a, b): Omega = a b / (a + b)^2.
inline double ellipse_angular_velocity(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw InvalidGeometry("axes must be positive");
    return a * b / ((a + b) * (a + b));
}

}  // namespace vortexlab

#endif
