#ifndef VORTEXLAB_CLI_HPP
#define VORTEXLAB_CLI_HPP

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vortexlab/checks.hpp"
#include "vortexlab/io.hpp"

namespace vortexlab::cli {

namespace detail {

inline Point parse_point(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw InvalidGeometry("expected x,y");
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

inline std::vector<double> parse_list(const std::string& s, char sep) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

inline Box parse_box(const std::string& s) {
    auto v = parse_list(s, ':');
    if (v.size() != 4) throw InvalidGeometry("expected box as xmin:xmax:ymin:ymax");
    return {v[0], v[1], v[2], v[3]};
}

inline PatchBoundary load_patch(const std::string& file, double disk, const std::string& ell,
                                double ann) {
    if (!file.empty()) return io::patch_from_json(io::read_json_file(file));
    if (disk > 0.0) return PatchBoundary::disk(disk);
    if (!ell.empty()) {
        auto ab = parse_list(ell, ':');
        if (ab.size() != 2) throw InvalidGeometry("expected ellipse as a:b");
        return PatchBoundary::ellipse(ab[0], ab[1]);
    }
    if (ann > 0.0) return PatchBoundary::annulus(ann);
    throw InvalidGeometry("no patch given (use --patch/--disk/--ellipse/--annulus)");
}

inline void error_json(const std::string& reason, const std::string& message) {
    io::json j;
    j["reason"] = reason;
    j["message"] = message;
    std::cerr << j.dump() << "\n";
}

}  // namespace detail

/// Front end for every module; exit 0 on success, 2 on rejected input,
/// 3 on a reported numerical failure (machine-readable JSON on stderr).
inline int run(int argc, const char* const* argv) {
    CLI::App app{"vortexlab: a numerical laboratory for rotating vortex patches"};
    app.require_subcommand(1);
    unsigned threads = 0;
    unsigned seed = 0;
    app.add_option("--threads", threads, "cap on worker threads (0 = all cores)");
    app.add_option("--seed", seed, "seed for randomized utilities (default 0)");

    // ---- solve
    auto* solve_cmd = app.add_subcommand("solve", "newton-solve an m-fold rotating patch");
    int s_m = 3;
    double s_omega = 0.3, s_amp = 0.0, s_tol = 1e-11;
    int s_modes = 32, s_maxit = 30;
    std::string s_out;
    solve_cmd->add_option("--m", s_m, "fold symmetry")->required();
    solve_cmd->add_option("--omega", s_omega, "angular velocity in (0, 1/2)")->required();
    solve_cmd->add_option("--amplitude", s_amp, "initial amplitude on the leading mode");
    solve_cmd->add_option("--modes", s_modes, "retained cosine modes");
    solve_cmd->add_option("--tol", s_tol, "boundary residual tolerance");
    solve_cmd->add_option("--max-iter", s_maxit, "newton iteration cap");
    solve_cmd->add_option("--out", s_out, "output patch json")->required();

    // ---- branch
    auto* branch_cmd = app.add_subcommand("branch", "continue a branch in amplitude");
    int b_m = 2, b_steps = 10, b_modes = 24;
    double b_a0 = 0.02, b_a1 = 0.2, b_omega0 = -1.0, b_tol = 1e-11;
    std::string b_out;
    branch_cmd->add_option("--m", b_m, "fold symmetry")->required();
    branch_cmd->add_option("--amp-start", b_a0, "first amplitude");
    branch_cmd->add_option("--amp-end", b_a1, "last amplitude");
    branch_cmd->add_option("--steps", b_steps, "number of branch points");
    branch_cmd->add_option("--omega0", b_omega0,
                           "starting rotation guess (default (m-1)/(2m))");
    branch_cmd->add_option("--modes", b_modes, "retained cosine modes");
    branch_cmd->add_option("--tol", b_tol, "boundary residual tolerance");
    branch_cmd->add_option("--out", b_out, "output jsonl, one solution per line")
        ->required();

    // ---- field
    auto* field_cmd = app.add_subcommand("field", "compute the relative stream function");
    std::string f_patch, f_ellipse, f_box = "-3:3:-3:3", f_out, f_csv;
    double f_disk = 0.0, f_annulus = 0.0, f_omega = 0.25, f_h = 1.0 / 64;
    field_cmd->add_option("--patch", f_patch, "patch json file");
    field_cmd->add_option("--disk", f_disk, "disk radius");
    field_cmd->add_option("--ellipse", f_ellipse, "ellipse as a:b");
    field_cmd->add_option("--annulus", f_annulus, "annulus inner radius");
    field_cmd->add_option("--omega", f_omega, "angular velocity")->required();
    field_cmd->add_option("--box", f_box, "grid box xmin:xmax:ymin:ymax");
    field_cmd->add_option("--spacing", f_h, "grid spacing h");
    field_cmd->add_option("--out", f_out, "output field json")->required();
    field_cmd->add_option("--csv", f_csv, "optional csv dump (x1,x2,psi,inD)");

    // ---- weiss
    auto* weiss_cmd = app.add_subcommand("weiss", "scale-energy profile of a field");
    std::string w_field, w_x0 = "0,0", w_out;
    double w_rmin = 0.05, w_rmax = 0.4;
    int w_count = 16;
    weiss_cmd->add_option("--field", w_field, "field json file")->required();
    weiss_cmd->add_option("--x0", w_x0, "center point as x,y");
    weiss_cmd->add_option("--rmin", w_rmin, "smallest radius");
    weiss_cmd->add_option("--rmax", w_rmax, "largest radius");
    weiss_cmd->add_option("--count", w_count, "number of radii");
    weiss_cmd->add_option("--out", w_out, "output csv")->required();

    // ---- blowup
    auto* blow_cmd = app.add_subcommand("blowup", "classify a candidate singular point");
    std::string bl_field, bl_x0 = "0,0", bl_scales = "", bl_out;
    blow_cmd->add_option("--field", bl_field, "field json file")->required();
    blow_cmd->add_option("--x0", bl_x0, "candidate point as x,y");
    blow_cmd->add_option("--scales", bl_scales,
                         "comma list of radii (default 0.7 halved four times)");
    blow_cmd->add_option("--out", bl_out, "output report json")->required();

    // ---- angular
    auto* ang_cmd = app.add_subcommand("angular", "solve -f'' - 4f = chi on the circle");
    double a_omega = 0.25;
    int a_K = 256;
    std::vector<std::string> a_arcs, a_constraints;
    std::string a_out, a_json;
    ang_cmd->add_option("--omega", a_omega, "angular velocity")->required();
    ang_cmd->add_option("--arc", a_arcs, "patch arc as start:end (radians, repeatable)");
    ang_cmd->add_option("--constraint", a_constraints,
                        "v:theta:target or d:theta:target (default: f = 0 at arc ends)");
    ang_cmd->add_option("--K", a_K, "fourier truncation");
    ang_cmd->add_option("--out", a_out, "output csv (theta, f, chi)");
    ang_cmd->add_option("--json", a_json, "output json of the modes");

    // ---- cone-potential
    auto* cone_cmd = app.add_subcommand("cone-potential",
                                        "quadrant-cone generalized newtonian potential");
    double c_omega = 0.25;
    int c_K = 512, c_n = 128;
    std::string c_out, c_csv, c_box = "-1:1:-1:1";
    cone_cmd->add_option("--omega", c_omega, "angular velocity")->required();
    cone_cmd->add_option("--K", c_K, "fourier truncation");
    cone_cmd->add_option("--out", c_out, "output json")->required();
    cone_cmd->add_option("--csv", c_csv, "optional csv field dump");
    cone_cmd->add_option("--csv-box", c_box, "csv dump box");
    cone_cmd->add_option("--csv-n", c_n, "csv dump resolution");

    // ---- check-all
    auto* check_cmd =
        app.add_subcommand("check-all", "run the full acceptance battery");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    max_threads() = threads;
    (void)seed;  // reserved for randomized utilities; everything here is deterministic

    try {
        if (*solve_cmd) {
            std::vector<double> cosc((std::size_t)s_m * s_modes, 0.0);
            if (s_amp != 0.0) cosc[s_m - 1] = s_amp;
            auto init = PatchBoundary::fourier(1.0, {0, 0}, cosc, {});
            VStateOptions opt;
            opt.modes = s_modes;
            auto sol = newton_solve(init, s_omega, s_m, s_tol, s_maxit, opt);
            io::write_file(s_out, io::to_json(sol.patch).dump(2) + "\n");
            std::cout << io::to_json(sol).dump() << "\n";
        } else if (*branch_cmd) {
            if (b_omega0 <= 0.0) b_omega0 = (b_m - 1) / (2.0 * b_m);
            std::vector<double> amps;
            for (int i = 0; i < b_steps; ++i)
                amps.push_back(b_a0 + (b_a1 - b_a0) * i / std::max(1, b_steps - 1));
            VStateOptions opt;
            opt.modes = b_modes;
            auto br = continuation_branch_amplitude(b_m, b_omega0, amps, b_tol, opt);
            std::ostringstream lines;
            for (const auto& p : br.points) lines << io::to_json(p).dump() << "\n";
            io::write_file(b_out, lines.str());
            if (!br.completed) {
                detail::error_json(br.stop_reason, "branch stopped early; partial output written");
                return 3;
            }
        } else if (*field_cmd) {
            auto patch = detail::load_patch(f_patch, f_disk, f_ellipse, f_annulus);
            auto field = relative_stream(patch, f_omega, detail::parse_box(f_box), f_h);
            io::write_file(f_out, io::to_json(field).dump() + "\n");
            if (!f_csv.empty()) io::write_file(f_csv, io::field_csv(field));
        } else if (*weiss_cmd) {
            auto field = io::field_from_json(io::read_json_file(w_field));
            auto prof = weiss_profile(field, detail::parse_point(w_x0), w_rmin, w_rmax,
                                      w_count);
            io::write_file(w_out, io::weiss_csv(prof));
        } else if (*blow_cmd) {
            auto field = io::field_from_json(io::read_json_file(bl_field));
            std::vector<double> scales = bl_scales.empty()
                                             ? std::vector<double>{0.7, 0.35, 0.175, 0.0875}
                                             : detail::parse_list(bl_scales, ',');
            auto cls = classify(field, detail::parse_point(bl_x0), scales);
            io::write_file(bl_out, io::to_json(cls).dump(2) + "\n");
        } else if (*ang_cmd) {
            std::vector<std::pair<double, double>> arcs;
            for (const auto& a : a_arcs) {
                auto se = detail::parse_list(a, ':');
                if (se.size() != 2) throw InvalidConstraints("arc must be start:end");
                arcs.push_back({se[0], se[1]});
            }
            AngularConfig cfg(a_omega, arcs);
            std::vector<Constraint> constraints;
            if (a_constraints.empty()) {
                for (auto [s0, e0] : arcs) {
                    if (constraints.size() < 4) constraints.push_back({s0, false, 0.0});
                    if (constraints.size() < 4) constraints.push_back({e0, false, 0.0});
                }
            } else {
                for (const auto& c : a_constraints) {
                    if (c.size() < 3 || c[1] != ':')
                        throw InvalidConstraints("constraint must be v:theta:target");
                    auto vals = detail::parse_list(c.substr(2), ':');
                    if (vals.size() != 2)
                        throw InvalidConstraints("constraint must be v:theta:target");
                    constraints.push_back({vals[0], c[0] == 'd', vals[1]});
                }
            }
            auto res = solve(cfg, a_K, constraints);
            if (!res.ok()) {
                detail::error_json(res.reason, "angular problem not solvable");
                return 3;
            }
            if (!a_out.empty()) io::write_file(a_out, io::angular_csv(res.profile));
            if (!a_json.empty())
                io::write_file(a_json, io::to_json(res.profile).dump() + "\n");
            if (a_out.empty() && a_json.empty())
                std::cout << io::to_json(res.profile).dump() << "\n";
        } else if (*cone_cmd) {
            auto z = ConePotential::build(c_omega, c_K);
            io::write_file(c_out, io::to_json(z).dump() + "\n");
            if (!c_csv.empty())
                io::write_file(c_csv, io::cone_csv(z, detail::parse_box(c_box), c_n));
        } else if (*check_cmd) {
            auto results = checks::run_all();
            int failures = 0;
            for (const auto& r : results) {
                std::printf("[%s] %d %-22s %s\n", r.pass ? "PASS" : "FAIL", r.id,
                            r.name.c_str(), r.detail.c_str());
                if (!r.pass) ++failures;
            }
            if (failures > 0) {
                detail::error_json("AcceptanceFailure",
                                   std::to_string(failures) + " criteria failed");
                return 3;
            }
        }
    } catch (const Error& e) {
        detail::error_json(e.code(), e.what());
        return e.error_class() == ErrorClass::validation ? 2 : 3;
    } catch (const std::exception& e) {
        detail::error_json("InvalidInput", e.what());
        return 2;
    }
    return 0;
}

}  // namespace vortexlab::cli

#endif
