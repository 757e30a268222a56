#ifndef VORTEXLAB_CHECKS_HPP
#define VORTEXLAB_CHECKS_HPP

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vortexlab/angular.hpp"
#include "vortexlab/blowup.hpp"
#include "vortexlab/cone.hpp"
#include "vortexlab/field.hpp"
#include "vortexlab/geometry.hpp"
#include "vortexlab/vstate.hpp"
#include "vortexlab/weiss.hpp"

namespace vortexlab::checks {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << v;
    return s.str();
}

}  // namespace detail

// 1. Weiss monotonicity on the computed rotating-disk field.
inline CheckResult weiss_monotonicity() {
    auto start = std::chrono::steady_clock::now();
    CheckResult r{1, "weiss-monotonicity", false, ""};
    auto field = relative_stream(PatchBoundary::disk(1.0), 0.25, {-3, 3, -3, 3}, 1.0 / 256);
    Point x0{1.0, 0.0};
    auto prof = weiss_profile(field, x0, 0.05, 0.4, 16);
    double maxphi = 0.0;
    for (double p : prof.phi) maxphi = std::max(maxphi, std::abs(p));
    double slack = 1e-3 * maxphi;
    bool monotone = true;
    for (std::size_t k = 1; k < prof.phi.size(); ++k)
        monotone = monotone && prof.phi[k] >= prof.phi[k - 1] - slack;

    double lhs = std::abs(weiss_value(field, x0, 0.3) - weiss_value(field, x0, 0.1));
    double resid = derivative_identity_residual(field, x0, 0.1, 0.3);
    bool identity = resid <= 0.02 * lhs + 1e-8;

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = monotone && identity && secs <= 120.0;
    r.detail = "monotone=" + std::string(monotone ? "yes" : "no") +
               " identity_residual=" + detail::fmt(resid) + " (2% bound " +
               detail::fmt(0.02 * lhs) + ") runtime=" + detail::fmt(secs) + "s";
    return r;
}

// 2. Phi is constant across scales for exact degree-2 homogeneous fields.
inline CheckResult homogeneous_constancy() {
    CheckResult r{2, "homogeneous-constancy", false, ""};
    double worst = 0.0;
    for (const char* id : {"cusp_ray", "cusp_complement"}) {
        auto f = synthetic_field(id, 0.25, {-1, 1, -1, 1}, 1.0 / 128);
        double lo = 1e300, hi = -1e300;
        for (double rad : {0.1, 0.2, 0.4}) {
            double phi = weiss_value(f, {0, 0}, rad);
            lo = std::min(lo, phi);
            hi = std::max(hi, phi);
        }
        worst = std::max(worst, hi - lo);
    }
    r.pass = worst <= 1e-6;
    r.detail = "max variation over scales = " + detail::fmt(worst) + " (bound 1e-6)";
    return r;
}

// 3. Solvability of the single-cone angular problem.
inline CheckResult angular_solvability() {
    CheckResult r{3, "angular-solvability", false, ""};
    int obstructed = 0, expected = 0;
    for (int k = 1; k <= 62; ++k) {
        double t1 = 0.1 * k;
        if (std::abs(t1 - pi) < 1e-9 || std::abs(t1 - two_pi) < 1e-9) continue;
        ++expected;
        AngularConfig cfg(0.25, {{0.0, t1}});
        auto res = solve(cfg, 128, {{0.0, false, 0.0}, {t1, false, 0.0}});
        if (res.status == SolveStatus::kernel_obstruction) ++obstructed;
    }

    double omega = 0.25;
    auto cusp = solve(AngularConfig(omega, {}), 128, {{0.0, false, 0.0}, {0.0, true, 0.0}});
    auto full = solve(AngularConfig(omega, {{0.0, two_pi}}), 128,
                      {{two_pi, false, 0.0}, {two_pi, true, 0.0}});
    double worst_form = 0.0;
    for (int i = 0; i < 512; ++i) {
        double t = two_pi * i / 512;
        worst_form = std::max(
            worst_form,
            std::abs(cusp.profile.eval(t) - 0.5 * omega * (1.0 - std::cos(2.0 * t))));
        worst_form = std::max(
            worst_form, std::abs(full.profile.eval(t) +
                                 0.25 * (1.0 - 2.0 * omega) * (1.0 - std::cos(2.0 * t))));
    }

    bool witness = true;
    for (double om : {0.05, 0.15, 0.25, 0.35, 0.45})
        witness = witness && theta_pi_exclusion_witness(om).exclusion_holds;

    r.pass = obstructed == expected && cusp.ok() && full.ok() && worst_form <= 1e-10 &&
             witness;
    r.detail = "obstructed " + std::to_string(obstructed) + "/" + std::to_string(expected) +
               ", closed-form error " + detail::fmt(worst_form) +
               ", half-plane exclusion " + (witness ? "holds" : "fails");
    return r;
}

// 4. Quadrant cone potential: derived constants, residual, projection.
inline CheckResult cone_potential_checks() {
    CheckResult r{4, "cone-potential", false, ""};
    auto z = ConePotential::build(0.25, 512);
    double lb = z.log_sin_coefficient();
    bool constants = z.log_cos_coefficient() == 0.0 &&
                     std::abs(lb + 1.0 / (4.0 * pi)) <= 1e-15;

    double lap = cone_laplacian_residual(z, {-1, 1, -1, 1}, 1.0 / 256, 0.05);

    std::mt19937 gen(0);
    std::uniform_real_distribution<double> ux(-1.0, 1.0), us(0.05, 1.0);
    double scale_err = 0.0;
    for (int k = 0; k < 100; ++k) {
        Point x{ux(gen), ux(gen)};
        if (norm(x) < 1e-3) continue;
        double s = us(gen);
        double lhs = z.eval({s * x.x1, s * x.x2}) / (s * s) - z.eval(x);
        double rhs = std::log(s) * 2.0 * lb * x.x1 * x.x2;
        scale_err = std::max(scale_err, std::abs(lhs - rhs));
    }

    auto rep1 = cone_projection_report(z, 1.0);
    auto rep2 = cone_projection_report(z, 0.5);
    auto rep4 = cone_projection_report(z, 0.25);
    double pi_zero = std::max(std::abs(rep1.pi.a), std::abs(rep1.pi.b));
    double half_err = std::abs(rep2.pi.b - (-2.0 * lb * std::log(2.0)));
    double tau_lin = std::abs(rep4.tau - 2.0 * rep2.tau);

    r.pass = constants && lap <= 5e-2 && scale_err <= 1e-12 && pi_zero <= 1e-8 &&
             half_err <= 1e-10 && tau_lin <= 1e-9;
    r.detail = "logB=" + detail::fmt(lb) + " lap_res=" + detail::fmt(lap) +
               " scale_err=" + detail::fmt(scale_err) + " Pi(z)=" + detail::fmt(pi_zero) +
               " Pi(z_half)_err=" + detail::fmt(half_err) +
               " tau_linearity=" + detail::fmt(tau_lin);
    return r;
}

// 5. Kirchhoff ellipse as rotation-speed certificate and along the branch.
inline CheckResult kirchhoff() {
    CheckResult r{5, "kirchhoff", false, ""};
    auto ell = PatchBoundary::ellipse(2.0, 1.0);
    double good = boundary_residual(ell, 2.0 / 9.0, 512);
    double bad = boundary_residual(ell, 0.4, 512);

    VStateOptions opt;
    opt.modes = 24;
    std::vector<double> amps;
    for (int i = 1; i <= 10; ++i) amps.push_back(0.02 * i);
    auto branch = continuation_branch_amplitude(2, 0.25, amps, 1e-11, opt);
    double worst_rel = 0.0;
    if (branch.completed)
        for (const auto& p : branch.points) {
            double a_axis = p.patch.radius(0.0), b_axis = p.patch.radius(0.5 * pi);
            double rel = a_axis * b_axis / std::pow(a_axis + b_axis, 2);
            worst_rel = std::max(worst_rel, std::abs(p.omega - rel));
        }

    r.pass = good <= 1e-6 && bad >= 1e-2 && branch.completed && worst_rel <= 1e-6;
    r.detail = "residual(2/9)=" + detail::fmt(good) + " residual(0.4)=" + detail::fmt(bad) +
               " branch " + (branch.completed ? "completed" : branch.stop_reason) +
               " worst |omega - ab/(a+b)^2| = " + detail::fmt(worst_rel);
    return r;
}

// 6. Newton solver sanity: disk fixed point, nontrivial three-fold state.
inline CheckResult solver_sanity() {
    CheckResult r{6, "solver-sanity", false, ""};
    double worst_amp = 0.0;
    bool disk_ok = true;
    for (double om : {0.1, 0.2, 0.3, 0.4})
        for (int m : {2, 3, 4}) {
            auto sol = newton_solve(PatchBoundary::disk(1.0), om, m, 1e-11, 20);
            worst_amp = std::max(worst_amp, std::abs(sol.amplitude));
            disk_ok = disk_ok && std::abs(sol.amplitude) <= 1e-12;
        }

    VStateOptions opt;
    opt.modes = 24;
    std::vector<double> cosc(3 * 24, 0.0);
    cosc[2] = 0.12;
    auto init = PatchBoundary::fourier(1.0, {0, 0}, cosc, {});
    bool three_ok = false;
    std::string three = "failed";
    try {
        auto sol = newton_solve(init, 1.0 / 3.0 - 0.01, 3, 1e-10, 12, opt);
        three_ok = sol.residual <= 1e-10 && sol.iterations <= 12 && sol.amplitude > 0.01;
        three = "amp=" + detail::fmt(sol.amplitude) + " res=" + detail::fmt(sol.residual) +
                " iters=" + std::to_string(sol.iterations);
    } catch (const Error& e) {
        three = e.code();
    }

    r.pass = disk_ok && three_ok;
    r.detail = "disk worst amplitude = " + detail::fmt(worst_amp) + "; three-fold " + three;
    return r;
}

// 7. Blow-up classifier on the synthetic corpus.
inline CheckResult classifier() {
    CheckResult r{7, "classifier", false, ""};
    Box unit{-1, 1, -1, 1};
    auto corner = synthetic_field("corner_log", 0.25, unit, 1.0 / 1024);
    std::vector<double> scales;
    for (int k = 0; k < 5; ++k) scales.push_back(0.7 * std::pow(0.5, k));
    auto cls = classify(corner, {0, 0}, scales);
    double orient_deg =
        std::min(cls.orientation, 0.5 * pi - cls.orientation) * 180.0 / pi;
    bool corner_ok = cls.verdict == Verdict::Corner90 && orient_deg <= 1.0;

    double dens = density(corner, {0, 0}, 0.5);
    bool dens_ok = std::abs(dens - 0.25) <= 1e-3;

    auto ray = synthetic_field("cusp_ray", 0.25, unit, 1.0 / 256);
    auto c_ray = classify(ray, {0, 0}, {0.7, 0.35, 0.175, 0.0875});
    bool ray_ok =
        c_ray.verdict == Verdict::Cusp0 || c_ray.verdict == Verdict::DegenerateEmpty;

    auto comp = synthetic_field("cusp_complement", 0.25, unit, 1.0 / 256);
    auto c_comp = classify(comp, {0, 0}, {0.7, 0.35, 0.175, 0.0875});
    bool comp_ok =
        c_comp.verdict == Verdict::Cusp0 || c_comp.verdict == Verdict::DegenerateFull;

    auto rank = synthetic_field("rankine", 0.25, {-3, 3, -3, 3}, 1.0 / 256);
    auto c_rank = classify(rank, {1.0, 0.0}, {0.4, 0.2, 0.1});
    bool rank_ok = c_rank.verdict == Verdict::NotSingular;

    std::vector<double> probe_scales;
    for (int k = 2; k <= 6; ++k) probe_scales.push_back(std::pow(0.5, k));
    auto probe = rate_probe(corner, {0, 0}, probe_scales);
    bool probe_ok = probe.corner_evidence && probe.errors.size() == 5;
    for (std::size_t k = 1; probe_ok && k < probe.errors.size(); ++k)
        probe_ok = probe.errors[k] < probe.errors[k - 1];

    r.pass = corner_ok && dens_ok && ray_ok && comp_ok && rank_ok && probe_ok;
    r.detail = std::string("corner=") + to_string(cls.verdict) + "(" +
               detail::fmt(orient_deg) + " deg) density=" + detail::fmt(dens) +
               " ray=" + to_string(c_ray.verdict) + " full=" + to_string(c_comp.verdict) +
               " rankine=" + to_string(c_rank.verdict) +
               " rate_probe=" + (probe_ok ? "decreasing" : "not decreasing");
    return r;
}

// 8. Pair and N-fold blow-up analysis.
inline CheckResult pair_nfold() {
    CheckResult r{8, "pair-nfold", false, ""};
    bool touch_ok = true;
    for (int N = 2; N <= 8; ++N)
        touch_ok = touch_ok && (nfold_touching_possible(N) == (N == 2));

    double angle_err = std::abs(nfold_corner_angle(0.25, 4) - 0.25 * pi);
    double t2 = nfold_corner_angle(1e-6, 4);
    double limit_err = std::abs((two_pi / 4.0 - t2) - 0.5 * pi);

    bool seg_ok = true;
    for (double om : {0.05, 0.25, 0.45}) seg_ok = seg_ok && pair_segment_f_at_pi(om) < 0.0;

    double worst_ode = 0.0;
    for (const auto& p : pair_point_touch_profiles(0.25))
        worst_ode = std::max(worst_ode, p.ode_residual(512));

    r.pass = touch_ok && angle_err <= 1e-10 && limit_err <= 1e-2 && seg_ok &&
             worst_ode <= 1e-10;
    r.detail = std::string("touching iff N=2: ") + (touch_ok ? "yes" : "no") +
               ", angle err=" + detail::fmt(angle_err) +
               ", small-omega limit err=" + detail::fmt(limit_err) +
               ", segment f(pi)<0: " + (seg_ok ? "yes" : "no") +
               ", point-touch ODE residual=" + detail::fmt(worst_ode);
    return r;
}

// 9. Grid and contour solvers agree on the Kirchhoff boundary.
inline CheckResult cross_solver() {
    CheckResult r{9, "cross-solver", false, ""};
    auto ell = PatchBoundary::ellipse(2.0, 1.0);
    double omega = 2.0 / 9.0;
    int nodes = 512;
    auto grid = relative_stream(ell, omega, {-6, 6, -5, 5}, 1.0 / 256);
    auto contour = boundary_stream_values(ell, omega, nodes);

    std::vector<double> grid_vals(nodes);
    for (int j = 0; j < nodes; ++j) {
        double t = two_pi * j / nodes;
        double rad = ell.radius(t);
        grid_vals[j] = grid.eval({rad * std::cos(t), rad * std::sin(t)});
    }
    double mg = 0.0, mc = 0.0;
    for (int j = 0; j < nodes; ++j) {
        mg += grid_vals[j];
        mc += contour[j];
    }
    mg /= nodes;
    mc /= nodes;
    double sup = 0.0;
    for (int j = 0; j < nodes; ++j)
        sup = std::max(sup, std::abs((grid_vals[j] - mg) - (contour[j] - mc)));

    r.pass = sup <= 5e-4;
    r.detail = "sup |psi_grid - psi_contour| on the boundary = " + detail::fmt(sup) +
               " (bound 5e-4)";
    return r;
}

inline std::vector<CheckResult> run_all() {
    return {weiss_monotonicity(), homogeneous_constancy(), angular_solvability(),
            cone_potential_checks(), kirchhoff(),          solver_sanity(),
            classifier(),          pair_nfold(),           cross_solver()};
}

}  // namespace vortexlab::checks

#endif
