#ifndef VORTEXLAB_ANGULAR_HPP
#define VORTEXLAB_ANGULAR_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "vortexlab/common.hpp"

namespace vortexlab {

using cd = std::complex<double>;

/// Piecewise-constant forcing on the circle: chi = 1 - 2 omega on the patch
/// arcs and -2 omega on the complement.
struct AngularConfig {
    double omega = 0.25;
    std::vector<std::pair<double, double>> arcs;  // sorted, disjoint, in [0, 2pi]

    AngularConfig(double om, std::vector<std::pair<double, double>> a)
        : omega(om), arcs(std::move(a)) {
        if (!std::isfinite(om)) throw InvalidOmega("omega must be finite");
        std::sort(arcs.begin(), arcs.end());
        double prev_end = -1.0;
        for (auto [s, e] : arcs) {
            if (!(s >= 0.0 && e <= two_pi + 1e-15 && s < e))
                throw InvalidGeometry("arc outside [0, 2pi] or empty");
            if (s < prev_end) throw InvalidGeometry("arcs must be disjoint");
            prev_end = e;
        }
    }

    double chi(double theta) const {
        theta = std::fmod(theta, two_pi);
        if (theta < 0.0) theta += two_pi;
        double v = -2.0 * omega;
        for (auto [s, e] : arcs)
            if (theta > s && theta < e) return v + 1.0;
        return v;
    }
};

/// Fourier coefficient (1/2pi) integral of chi(theta) e^{-ik theta}, by
/// exact arc antiderivatives.
inline cd chi_hat(const AngularConfig& cfg, int k) {
    if (k == 0) {
        double len = 0.0;
        for (auto [s, e] : cfg.arcs) len += e - s;
        return {len / two_pi - 2.0 * cfg.omega, 0.0};
    }
    cd acc(0.0, 0.0);
    for (auto [s, e] : cfg.arcs) {
        // integral of e^{-ik t} over the arc: (e^{-iks} - e^{-ike}) / (ik)
        cd num = std::exp(cd(0.0, -k * s)) - std::exp(cd(0.0, -k * e));
        acc += num / cd(0.0, (double)k);
    }
    return acc / two_pi;
}

/// Solution of -f'' - 4 f = chi as a Fourier series: constant mode, the
/// kernel pair (cos 2 theta, sin 2 theta), and modes 1..K away from the
/// kernel with (k^2 - 4) fhat(k) = chihat(k).
struct AngularProfile {
    double omega = 0.0;
    double c0 = 0.0;          // constant mode, -chihat(0)/4
    double kernel_cos = 0.0;  // coefficient A of cos 2 theta
    double kernel_sin = 0.0;  // coefficient B of sin 2 theta
    std::vector<cd> modes;    // modes[k-1] = fhat(k) for k = 1..K (slot k=2 zero)
    std::vector<std::pair<double, double>> arcs;

    int truncation() const { return (int)modes.size(); }

    double eval(double theta) const { return series(theta, 0); }
    double derivative(double theta) const { return series(theta, 1); }
    double second_derivative(double theta) const { return series(theta, 2); }

    double chi(double theta) const { return AngularConfig(omega, arcs).chi(theta); }

    /// max |(-f'' - 4f) - chi| over n samples at angular distance >= guard
    /// from every arc endpoint (the truncated series cannot follow the jump
    /// itself).
    double ode_residual(int n, double guard = 0.0) const {
        AngularConfig cfg(omega, arcs);
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            double t = two_pi * (i + 0.5) / n;
            if (guard > 0.0) {
                bool close = false;
                for (auto [s, e] : arcs)
                    for (double edge : {s, e}) {
                        double d = std::abs(std::remainder(t - edge, two_pi));
                        close = close || d < guard;
                    }
                if (close) continue;
            }
            double lhs = -second_derivative(t) - 4.0 * eval(t);
            worst = std::max(worst, std::abs(lhs - cfg.chi(t)));
        }
        return worst;
    }

private:
    double series(double theta, int order) const {
        cd rot = std::exp(cd(0.0, theta));
        cd e = rot;
        double acc;
        if (order == 0)
            acc = c0 + kernel_cos * std::cos(2.0 * theta) + kernel_sin * std::sin(2.0 * theta);
        else if (order == 1)
            acc = -2.0 * kernel_cos * std::sin(2.0 * theta) +
                  2.0 * kernel_sin * std::cos(2.0 * theta);
        else
            acc = -4.0 * kernel_cos * std::cos(2.0 * theta) -
                  4.0 * kernel_sin * std::sin(2.0 * theta);
        for (int k = 1; k <= (int)modes.size(); ++k, e *= rot) {
            cd coeff = modes[k - 1];
            if (coeff == cd(0.0, 0.0)) continue;
            if (order == 1) coeff *= cd(0.0, (double)k);
            if (order == 2) coeff *= -(double)k * (double)k;
            acc += 2.0 * std::real(coeff * e);
        }
        return acc;
    }
};

struct Constraint {
    double theta = 0.0;
    bool derivative = false;
    double target = 0.0;
};

enum class SolveStatus { ok, kernel_obstruction, boundary_mismatch };

struct AngularSolveResult {
    SolveStatus status = SolveStatus::ok;
    std::string reason;
    AngularProfile profile;
    bool ok() const { return status == SolveStatus::ok; }
};

inline constexpr double kernel_obstruction_tol = 1e-10;

/// Fourier solve with the kernel pair fitted to the constraints by least
/// squares. Returns kernel_obstruction when chihat(2) is nonzero and
/// boundary_mismatch when the constraints cannot be met within 1e-8.
inline AngularSolveResult solve(const AngularConfig& cfg, int K,
                                const std::vector<Constraint>& constraints) {
    if (K < 64) throw InvalidConstraints("truncation must be at least 64");
    if (constraints.size() > 4)
        throw InvalidConstraints("more than 4 boundary constraints");

    AngularSolveResult out;
    if (std::abs(chi_hat(cfg, 2)) > kernel_obstruction_tol) {
        out.status = SolveStatus::kernel_obstruction;
        out.reason = "KernelObstruction";
        return out;
    }

    AngularProfile& p = out.profile;
    p.omega = cfg.omega;
    p.arcs = cfg.arcs;
    p.c0 = -std::real(chi_hat(cfg, 0)) / 4.0;
    p.modes.assign(K, cd(0.0, 0.0));
    for (int k = 1; k <= K; ++k) {
        if (k == 2) continue;
        p.modes[k - 1] = chi_hat(cfg, k) / (double)(k * k - 4);
    }

    if (!constraints.empty()) {
        // normal equations for the 2-vector (A, B)
        double n11 = 0, n12 = 0, n22 = 0, r1 = 0, r2 = 0;
        for (const auto& c : constraints) {
            double row1, row2, rhs;
            if (c.derivative) {
                row1 = -2.0 * std::sin(2.0 * c.theta);
                row2 = 2.0 * std::cos(2.0 * c.theta);
                rhs = c.target - p.derivative(c.theta);
            } else {
                row1 = std::cos(2.0 * c.theta);
                row2 = std::sin(2.0 * c.theta);
                rhs = c.target - p.eval(c.theta);
            }
            n11 += row1 * row1;
            n12 += row1 * row2;
            n22 += row2 * row2;
            r1 += row1 * rhs;
            r2 += row2 * rhs;
        }
        double det = n11 * n22 - n12 * n12;
        double trace = n11 + n22;
        if (det > 1e-12 * trace * trace) {
            p.kernel_cos = (n22 * r1 - n12 * r2) / det;
            p.kernel_sin = (n11 * r2 - n12 * r1) / det;
        } else if (trace > 0.0) {
            // rank one: minimal-norm solution along the range of the
            // normal matrix, z = v (v . g) / lambda with lambda = trace
            double vx, vy;
            if (n11 >= n22) {
                vx = n11;
                vy = n12;
            } else {
                vx = n12;
                vy = n22;
            }
            double vn = std::hypot(vx, vy);
            if (vn > 0.0) {
                vx /= vn;
                vy /= vn;
                double coeff = (vx * r1 + vy * r2) / trace;
                p.kernel_cos = coeff * vx;
                p.kernel_sin = coeff * vy;
            }
        }
        double worst = 0.0;
        for (const auto& c : constraints) {
            double got = c.derivative ? p.derivative(c.theta) : p.eval(c.theta);
            worst = std::max(worst, std::abs(got - c.target));
        }
        if (worst > 1e-8) {
            out.status = SolveStatus::boundary_mismatch;
            out.reason = "BoundaryMismatch";
        }
    }
    return out;
}

struct ExclusionSample {
    double kernel_sin = 0.0;  // swept B coefficient
    double min_f = 0.0;       // min of f on (0, pi)
    double max_f = 0.0;
    bool sign_change = false;
};

struct ExclusionReport {
    bool exclusion_holds = false;
    double min_violation = 0.0;  // min over the family of (-min f)
    std::vector<ExclusionSample> sweep;
};

/// One-parameter family for the half-plane cone (single arc (0, pi)): the
/// value constraints pin the cos mode and leave the sin coefficient free.
/// Every member fails positivity on (0, pi); the report carries the sweep.
inline ExclusionReport theta_pi_exclusion_witness(double omega, int K = 256) {
    if (!(omega > 0.0 && omega < 0.5)) throw InvalidOmega("omega must lie in (0, 1/2)");
    if (K < 256) K = 256;
    AngularConfig cfg(omega, {{0.0, pi}});
    AngularProfile base;
    base.omega = omega;
    base.arcs = cfg.arcs;
    base.c0 = -std::real(chi_hat(cfg, 0)) / 4.0;
    base.modes.assign(K, cd(0.0, 0.0));
    for (int k = 1; k <= K; ++k) {
        if (k == 2) continue;
        base.modes[k - 1] = chi_hat(cfg, k) / (double)(k * k - 4);
    }
    // f(0) = 0 (equivalently f(pi) = 0) fixes the cos coefficient
    base.kernel_cos = -base.eval(0.0);

    ExclusionReport rep;
    rep.min_violation = 1e300;
    std::vector<double> b_values{0.0};
    for (double mag : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0}) {
        b_values.push_back(mag);
        b_values.push_back(-mag);
    }
    int samples = 4 * K;
    for (double b : b_values) {
        AngularProfile f = base;
        f.kernel_sin = b;
        ExclusionSample s;
        s.kernel_sin = b;
        s.min_f = 1e300;
        s.max_f = -1e300;
        for (int i = 1; i < samples; ++i) {
            double t = pi * i / samples;
            double v = f.eval(t);
            s.min_f = std::min(s.min_f, v);
            s.max_f = std::max(s.max_f, v);
        }
        s.sign_change = s.min_f < 0.0 && s.max_f > 0.0;
        rep.min_violation = std::min(rep.min_violation, -s.min_f);
        rep.sweep.push_back(s);
    }
    rep.exclusion_holds = rep.min_violation > 1e-6;
    return rep;
}

/// Cone openings admissible for a single-patch blow-up: of the kernel-test
/// candidates {0, pi, 2pi}, the half-plane case fails positivity, leaving
/// the two degenerate openings.
inline std::vector<double> admissible_single_angles(double omega) {
    if (!(omega > 0.0 && omega < 0.5)) throw InvalidOmega("omega must lie in (0, 1/2)");
    std::vector<double> out{0.0};
    if (!theta_pi_exclusion_witness(omega).exclusion_holds) out.push_back(pi);
    out.push_back(two_pi);
    return out;
}

/// chihat(k) of the N-fold configuration with arcs
/// (t1 + 2 pi j / N, t2 + 2 pi j / N): the single-arc transform times the
/// roots-of-unity sum, which vanishes identically unless N divides k.
inline cd nfold_chi_hat(int N, double t1, double t2, double omega, int k) {
    if (N < 2) throw InvalidFold("fold symmetry must be at least 2");
    if (!(t1 >= 0.0 && t1 < t2 && t2 <= two_pi / N + 1e-15))
        throw InvalidGeometry("arc must fit inside one fundamental sector");
    if (k == 0) return {N * (t2 - t1) / two_pi - 2.0 * omega, 0.0};
    if (k % N != 0) return {0.0, 0.0};
    cd arc = (std::exp(cd(0.0, -k * t1)) - std::exp(cd(0.0, -k * t2))) / cd(0.0, (double)k);
    return arc * ((double)N / two_pi);
}

/// Whether N corotating patches with exact N-fold symmetry can touch at a
/// single isolated point. Both blow-up branches are tested:
///  - the normalized degree-2 harmonic limit has exactly two opposite
///    positive cones, so its sign pattern hosts N patch cones only when the
///    rotation by 2 pi / N maps that pair to itself, i.e. N divides 2;
///  - in the homogeneous-solution branch the kernel pair cos/sin(2 theta)
///    is N-fold symmetric only when N divides 2, and the remaining N-fold
///    constant cannot vanish on the 2N boundary rays while staying positive
///    on the patch arcs.
inline bool nfold_touching_possible(int N) {
    if (N < 2) throw InvalidFold("fold symmetry must be at least 2");

    // positive cones of (a normalized rotation of) x1^2 - x2^2
    const int harmonic_positive_cones = 2;
    bool harmonic_branch =
        (harmonic_positive_cones % N == 0) || (N % harmonic_positive_cones == 0 && N <= 2);
    bool kernel_is_nfold = (2 % N == 0);

    if (N == 2) {
        // kernel freedom exists and the harmonic pattern fits two cones
        return harmonic_branch && kernel_is_nfold;
    }
    // constant-plus-kernel class without the kernel: f = c0 must vanish on
    // 2N >= 6 distinct rays, forcing f == 0, which has no positive arcs
    return false;
}

/// Positive root of 2 omega tan(2 pi / N - t) = (1 - 2 omega) tan(t), the
/// matching condition for adjacent blow-up cones without the fold symmetry.
inline double nfold_corner_angle(double omega, int N) {
    if (!(omega > 0.0 && omega < 0.5)) throw InvalidOmega("omega must lie in (0, 1/2)");
    if (N < 3) throw InvalidFold("the matching condition needs N >= 3");
    double sector = two_pi / N;
    double eps = 1e-9;
    double lo = std::max(0.0, sector - 0.5 * pi) + eps;
    double hi = std::min(0.5 * pi, sector) - eps;
    auto g = [&](double t) {
        return 2.0 * omega * std::tan(sector - t) - (1.0 - 2.0 * omega) * std::tan(t);
    };
    double root = bisect(g, lo, hi, 1e-13);
    if (std::abs(g(root)) > 1e-12) throw NoRoot("matching condition residual too large");
    return root;
}

/// The two reflection-symmetric blow-up profiles of a touching pair: the
/// full-patch cone (chi = 1 - 2 omega everywhere) and the degenerate ray
/// along the vertical axis (chi = -2 omega everywhere, f(pi/2) = 0).
inline std::vector<AngularProfile> pair_point_touch_profiles(double omega) {
    if (!(omega > 0.0 && omega < 0.5)) throw InvalidOmega("omega must lie in (0, 1/2)");
    std::vector<AngularProfile> out(2);

    AngularProfile& full = out[0];
    full.omega = omega;
    full.arcs = {{0.0, two_pi}};
    full.c0 = -(1.0 - 2.0 * omega) / 4.0;
    full.kernel_cos = (1.0 - 2.0 * omega) / 4.0;  // f(0) = 0, f'(0) = 0

    AngularProfile& ray = out[1];
    ray.omega = omega;
    ray.arcs = {};
    ray.c0 = 0.5 * omega;
    ray.kernel_cos = 0.5 * omega;  // f(pi/2) = 0, evenness kills the sin mode
    return out;
}

/// f(pi) for the segment-touch configuration (patch arc (pi/2, 3 pi/2),
/// kernel fixed by evenness and f(pi/2) = 0), summing K odd modes:
///   f(pi) = -(1 - 4 omega)/4 + (2/pi) sum_m (-1)^m / (k (k^2 - 4)),
/// k = 2m + 1. The value is negative throughout (0, 1/2), which is the
/// contradiction excluding this configuration.
inline double pair_segment_f_at_pi(double omega, int odd_modes = 2048) {
    if (!(omega > 0.0 && omega < 0.5)) throw InvalidOmega("omega must lie in (0, 1/2)");
    if (odd_modes < 1024) odd_modes = 1024;
    double series = 0.0;
    for (int m = odd_modes - 1; m >= 0; --m) {
        double k = 2.0 * m + 1.0;
        double term = 1.0 / (k * (k * k - 4.0));
        series += (m % 2 == 0) ? term : -term;
    }
    return -(1.0 - 4.0 * omega) / 4.0 + (2.0 / pi) * series;
}

}  // namespace vortexlab

#endif
