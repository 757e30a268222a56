#ifndef VORTEXLAB_BLOWUP_HPP
#define VORTEXLAB_BLOWUP_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "vortexlab/common.hpp"
#include "vortexlab/field.hpp"
#include "vortexlab/weiss.hpp"

namespace vortexlab {

/// Trace-free quadratic p(x) = (a/2)(x1^2 - x2^2) + b x1 x2, the degree-2
/// homogeneous harmonic polynomials with Hessian [[a, b], [b, -a]].
struct HarmonicQuadratic {
    double a = 0.0;
    double b = 0.0;

    double eval(Point p) const {
        return 0.5 * a * (p.x1 * p.x1 - p.x2 * p.x2) + b * p.x1 * p.x2;
    }
    // sup over the closed unit disk: the polynomial is
    // (r^2/2) sqrt(a^2+b^2) cos(2 theta - phase) on circles.
    double sup_norm() const { return 0.5 * std::hypot(a, b); }
    // rotation taking x1^2 - x2^2 onto the direction of p, in [0, pi/2)
    double orientation() const {
        double ang = 0.5 * std::atan2(b, a);
        while (ang < 0.0) ang += 0.5 * pi;
        while (ang >= 0.5 * pi) ang -= 0.5 * pi;
        return ang;
    }
};

enum class Verdict {
    Corner90,
    Cusp0,
    DegenerateFull,
    DegenerateEmpty,
    NotSingular,
    Unresolved
};

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Corner90: return "Corner90";
        case Verdict::Cusp0: return "Cusp0";
        case Verdict::DegenerateFull: return "DegenerateFull";
        case Verdict::DegenerateEmpty: return "DegenerateEmpty";
        case Verdict::NotSingular: return "NotSingular";
        case Verdict::Unresolved: return "Unresolved";
    }
    return "?";
}

struct Classification {
    Verdict verdict = Verdict::Unresolved;
    double orientation = 0.0;  // radians; corner orientation or cusp axis
    std::vector<double> scales;
    std::vector<double> growth;     // T(r) = S(x0, r) / r^2
    std::vector<double> density;    // patch density in B_r(x0)
    std::vector<double> residuals;  // relative harmonic-fit residuals
    std::string note;
};

struct ClassifyOptions {
    double grad_tol = -1.0;  // negative: auto, scale * (1e-3 + 2h)
    double val_tol = -1.0;
    double growth_factor = 4.0;
    double anisotropy_ratio = 10.0;
    double density_empty = 0.1;
    double density_full = 0.9;
    double density_quarter_band = 0.05;
    double fit_tol = 0.5;  // relative residual for a "stable quadratic fit"
    int rescale_nodes = 201;
    int min_cells_for_axis = 50;
};

/// u(x0 + r x) / r^2 sampled on an m-by-m grid over [-1, 1]^2.
inline ScalarField rescale_characteristic(const ScalarField& f, Point x0, double r, int m) {
    if (!(r >= 8.0 * f.h)) throw OutOfDomain("rescale radius below 8h");
    Box b = f.box();
    double margin = r + 2.5 * f.h;
    if (x0.x1 - margin < b.x_min || x0.x1 + margin > b.x_max || x0.x2 - margin < b.y_min ||
        x0.x2 + margin > b.y_max)
        throw OutOfDomain("rescale square not contained in the field box");
    ScalarField out = ScalarField::allocate({-1, 1, -1, 1}, 2.0 / m, f.omega);
    double inv = 1.0 / (r * r);
    for (int i = 0; i < out.nx; ++i)
        for (int j = 0; j < out.ny; ++j) {
            Point xi = out.node(i, j);
            Point p{x0.x1 + r * xi.x1, x0.x2 + r * xi.x2};
            out.values[(std::size_t)i * out.ny + j] = f.eval(p) * inv;
            out.indicator[(std::size_t)i * out.ny + j] = f.indicator_at(p) ? 1 : 0;
        }
    return out;
}

/// u(x0 + r x) / S(x0, r); unit L^2 norm on the unit circle by construction.
inline ScalarField rescale_supercharacteristic(const ScalarField& f, Point x0, double r,
                                               int m) {
    double s = shell_norm(f, x0, r);
    double scale = 0.0;
    for (double v : f.values) scale = std::max(scale, std::abs(v));
    if (!(s > 1e-13 * (1.0 + scale)))
        throw DegenerateNormalization("shell norm too small to normalize");
    ScalarField out = rescale_characteristic(f, x0, r, m);
    double factor = r * r / s;
    for (auto& v : out.values) v *= factor;
    return out;
}

/// Least-squares projection onto HarmonicQuadratic of a field sampled over
/// [-1, 1]^2. The Hessian means
///   a(rho) = mean over B_rho of (d11 v - d22 v) / 2,
///   b(rho) = mean over B_rho of d12 v
/// use centered second differences, so the rim ring where the stencil
/// leaves the grid is excluded; the means are taken at two interior radii
/// and extrapolated to the unit disk with the alpha + beta rho^2 model,
/// which is exact on quadratics and on quartic monomials alike.
inline HarmonicQuadratic harmonic_projection(const ScalarField& v) {
    double h = v.h;
    double rho1 = 1.0 - 2.5 * h;
    double rho2 = rho1 / std::sqrt(2.0);
    double sum_a1 = 0.0, sum_b1 = 0.0, sum_a2 = 0.0, sum_b2 = 0.0;
    std::size_t n1 = 0, n2 = 0;
    for (int i = 1; i + 1 < v.nx; ++i)
        for (int j = 1; j + 1 < v.ny; ++j) {
            Point p = v.node(i, j);
            double r2 = p.x1 * p.x1 + p.x2 * p.x2;
            if (r2 > rho1 * rho1) continue;
            double v11 = (v.value(i + 1, j) - 2.0 * v.value(i, j) + v.value(i - 1, j)) / (h * h);
            double v22 = (v.value(i, j + 1) - 2.0 * v.value(i, j) + v.value(i, j - 1)) / (h * h);
            double v12 = (v.value(i + 1, j + 1) - v.value(i + 1, j - 1) -
                          v.value(i - 1, j + 1) + v.value(i - 1, j - 1)) /
                         (4.0 * h * h);
            sum_a1 += v11 - v22;
            sum_b1 += v12;
            ++n1;
            if (r2 <= rho2 * rho2) {
                sum_a2 += v11 - v22;
                sum_b2 += v12;
                ++n2;
            }
        }
    if (n1 == 0 || n2 == 0) return {};
    double a1 = 0.5 * sum_a1 / (double)n1, a2 = 0.5 * sum_a2 / (double)n2;
    double b1 = sum_b1 / (double)n1, b2 = sum_b2 / (double)n2;
    double d = rho1 * rho1 - rho2 * rho2;
    double beta_a = (a1 - a2) / d, beta_b = (b1 - b2) / d;
    return {a1 + beta_a * (1.0 - rho1 * rho1), b1 + beta_b * (1.0 - rho1 * rho1)};
}

struct TauResult {
    double tau = 0.0;
    HarmonicQuadratic direction;  // normalized so sup over B1 is one
};

/// tau = sup over B1 of |Pi(u)| with the normalized direction.
inline TauResult tau(const ScalarField& v) {
    HarmonicQuadratic p = harmonic_projection(v);
    double t = p.sup_norm();
    if (t == 0.0) return {0.0, {}};
    return {t, {p.a / t, p.b / t}};
}

/// Fraction of cell centers inside B_r(x0) that belong to the patch.
inline double density(const ScalarField& f, Point x0, double r) {
    Box b = f.box();
    if (x0.x1 - r < b.x_min || x0.x1 + r > b.x_max || x0.x2 - r < b.y_min ||
        x0.x2 + r > b.y_max)
        throw OutOfDomain("ball not contained in the field box");
    int i0 = std::max(0, (int)std::floor((x0.x1 - r - f.origin.x1) / f.h - 0.5));
    int i1 = std::min(f.nx - 1, (int)std::ceil((x0.x1 + r - f.origin.x1) / f.h));
    int j0 = std::max(0, (int)std::floor((x0.x2 - r - f.origin.x2) / f.h - 0.5));
    int j1 = std::min(f.ny - 1, (int)std::ceil((x0.x2 + r - f.origin.x2) / f.h));
    std::size_t total = 0, in = 0;
    double r2 = r * r;
    for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j) {
            Point p = f.node(i, j);
            double dx = p.x1 - x0.x1, dy = p.x2 - x0.x2;
            if (dx * dx + dy * dy >= r2) continue;
            ++total;
            if (f.in_patch(i, j)) ++in;
        }
    if (total == 0) throw OutOfDomain("no cells inside the ball");
    return (double)in / (double)total;
}

namespace detail {

struct MomentAxis {
    double ratio = 1.0;   // larger principal second moment over smaller
    double angle = 0.0;   // principal direction in [0, pi)
    std::size_t count = 0;
};

// Principal second moments of the selected cell centers around x0.
inline MomentAxis indicator_axis(const ScalarField& f, Point x0, double r, bool complement) {
    double mxx = 0.0, myy = 0.0, mxy = 0.0;
    std::size_t count = 0;
    double r2 = r * r;
    for (int i = 0; i < f.nx; ++i)
        for (int j = 0; j < f.ny; ++j) {
            Point p = f.node(i, j);
            double dx = p.x1 - x0.x1, dy = p.x2 - x0.x2;
            if (dx * dx + dy * dy >= r2) continue;
            bool sel = f.in_patch(i, j);
            if (complement) sel = !sel;
            if (!sel) continue;
            mxx += dx * dx;
            myy += dy * dy;
            mxy += dx * dy;
            ++count;
        }
    if (count == 0) return {};
    double tr = mxx + myy;
    double disc = std::sqrt((mxx - myy) * (mxx - myy) + 4.0 * mxy * mxy);
    double lmax = 0.5 * (tr + disc), lmin = 0.5 * (tr - disc);
    MomentAxis ax;
    ax.count = count;
    ax.ratio = lmin > 0.0 ? lmax / lmin : 1e300;
    ax.angle = 0.5 * std::atan2(2.0 * mxy, mxx - myy);
    if (ax.angle < 0.0) ax.angle += pi;
    return ax;
}

inline double fit_residual(const ScalarField& v) {
    HarmonicQuadratic p = harmonic_projection(v);
    double sup_err = 0.0, sup_val = 0.0;
    for (int i = 0; i < v.nx; ++i)
        for (int j = 0; j < v.ny; ++j) {
            Point x = v.node(i, j);
            if (x.x1 * x.x1 + x.x2 * x.x2 > 1.0) continue;
            sup_err = std::max(sup_err, std::abs(v.value(i, j) - p.eval(x)));
            sup_val = std::max(sup_val, std::abs(v.value(i, j)));
        }
    return sup_val > 0.0 ? sup_err / sup_val : 0.0;
}

}  // namespace detail

/// Decision procedure for a candidate singular point. Scales should be a
/// decreasing (near-dyadic) sequence of radii admissible for the field.
inline Classification classify(const ScalarField& f, Point x0, std::vector<double> scales,
                               const ClassifyOptions& opt = {}) {
    if (scales.size() < 2) throw OutOfDomain("need at least two scales");
    std::sort(scales.begin(), scales.end(), std::greater<>());
    Classification cls;
    cls.scales = scales;

    double scale = 0.0;
    for (double v : f.values) scale = std::max(scale, std::abs(v));
    double grad_tol = opt.grad_tol >= 0.0 ? opt.grad_tol : scale * (1e-3 + 2.0 * f.h);
    double val_tol = opt.val_tol >= 0.0 ? opt.val_tol : scale * (1e-3 + 2.0 * f.h);
    Point g = f.gradient(x0);
    if (norm(g) > grad_tol || std::abs(f.eval(x0)) > val_tol) {
        cls.verdict = Verdict::NotSingular;
        cls.note = "value or gradient above the singular-point tolerance";
        return cls;
    }

    for (double r : scales) {
        double s = shell_norm(f, x0, r);
        cls.growth.push_back(s / (r * r));
        cls.density.push_back(density(f, x0, r));
        cls.residuals.push_back(
            detail::fit_residual(rescale_characteristic(f, x0, r, opt.rescale_nodes)));
    }

    // (i) super-characteristic growth across the range
    double t_coarse = cls.growth.front(), t_fine = cls.growth.back();
    if (t_coarse > 0.0 && t_fine / t_coarse >= opt.growth_factor) {
        ScalarField super =
            rescale_supercharacteristic(f, x0, scales.back(), opt.rescale_nodes);
        cls.verdict = Verdict::Corner90;
        cls.orientation = harmonic_projection(super).orientation();
        cls.note = "diverging growth";
        return cls;
    }

    // (ii) density of the blow-up domain
    double d_fine = cls.density.back();
    if (d_fine <= opt.density_empty || d_fine >= opt.density_full) {
        bool complement = d_fine >= opt.density_full;
        auto ax = detail::indicator_axis(f, x0, scales.back(), complement);
        if (ax.count >= (std::size_t)opt.min_cells_for_axis &&
            ax.ratio >= opt.anisotropy_ratio) {
            cls.verdict = Verdict::Cusp0;
            cls.orientation = ax.angle;
            cls.note = complement ? "complement concentrates along an axis"
                                  : "patch concentrates along an axis";
        } else {
            cls.verdict = complement ? Verdict::DegenerateFull : Verdict::DegenerateEmpty;
            cls.note = "degenerate density";
        }
        return cls;
    }

    bool quarter = true;
    for (std::size_t k = cls.density.size() / 2; k < cls.density.size(); ++k)
        quarter = quarter && std::abs(cls.density[k] - 0.25) <= opt.density_quarter_band;
    if (quarter && cls.residuals.back() <= opt.fit_tol) {
        ScalarField ch = rescale_characteristic(f, x0, scales.back(), opt.rescale_nodes);
        cls.verdict = Verdict::Corner90;
        cls.orientation = harmonic_projection(ch).orientation();
        cls.note = "quarter density with stable quadratic fit";
        return cls;
    }

    cls.verdict = Verdict::Unresolved;
    cls.note = "no branch matched";
    return cls;
}

struct RateProbeResult {
    bool corner_evidence = false;
    std::vector<double> errors;  // per scale, coarse to fine
};

/// Sup-distance of u(x0 + s x) / sup_{B_s}|u| to the harmonic-quadratic fit
/// of the finest scale. Requires corner evidence on the probe scales.
inline RateProbeResult rate_probe(const ScalarField& f, Point x0, std::vector<double> scales,
                                  const ClassifyOptions& opt = {}) {
    std::sort(scales.begin(), scales.end(), std::greater<>());
    Classification cls = classify(f, x0, scales, opt);
    RateProbeResult out;
    if (cls.verdict != Verdict::Corner90) return out;
    out.corner_evidence = true;

    auto normalized = [&](double s) {
        ScalarField v = rescale_characteristic(f, x0, s, opt.rescale_nodes);
        double sup = 0.0;
        for (int i = 0; i < v.nx; ++i)
            for (int j = 0; j < v.ny; ++j) {
                Point p = v.node(i, j);
                if (p.x1 * p.x1 + p.x2 * p.x2 > 1.0) continue;
                sup = std::max(sup, std::abs(v.value(i, j)));
            }
        if (sup > 0.0)
            for (auto& val : v.values) val /= sup;
        return v;
    };

    ScalarField finest = normalized(scales.back());
    HarmonicQuadratic p = harmonic_projection(finest);
    for (double s : scales) {
        ScalarField v = normalized(s);
        double err = 0.0;
        for (int i = 0; i < v.nx; ++i)
            for (int j = 0; j < v.ny; ++j) {
                Point x = v.node(i, j);
                if (x.x1 * x.x1 + x.x2 * x.x2 > 1.0) continue;
                err = std::max(err, std::abs(v.value(i, j) - p.eval(x)));
            }
        out.errors.push_back(err);
    }
    return out;
}

}  // namespace vortexlab

#endif
