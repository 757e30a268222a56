#ifndef VORTEXLAB_IO_HPP
#define VORTEXLAB_IO_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "vortexlab/angular.hpp"
#include "vortexlab/blowup.hpp"
#include "vortexlab/cone.hpp"
#include "vortexlab/field.hpp"
#include "vortexlab/geometry.hpp"
#include "vortexlab/vstate.hpp"
#include "vortexlab/weiss.hpp"

namespace vortexlab::io {

using nlohmann::json;

inline json to_json(const PatchBoundary& p) {
    json j;
    switch (p.kind()) {
        case PatchBoundary::Kind::disk:
            j["kind"] = "disk";
            j["params"] = {{"radius", p.disk_radius()}};
            break;
        case PatchBoundary::Kind::annulus:
            j["kind"] = "annulus";
            j["params"] = {{"inner", p.annulus_inner()}};
            break;
        case PatchBoundary::Kind::ellipse:
            j["kind"] = "ellipse";
            j["params"] = {{"a", p.ellipse_a()}, {"b", p.ellipse_b()}};
            break;
        case PatchBoundary::Kind::fourier:
            j["kind"] = "fourier";
            j["params"] = json::object();
            j["fourier"] = {{"R0", p.fourier_r0()},
                            {"center", {p.center().x1, p.center().x2}},
                            {"cos", p.fourier_cos()},
                            {"sin", p.fourier_sin()}};
            break;
    }
    return j;
}

inline PatchBoundary patch_from_json(const json& j) {
    std::string kind = j.at("kind");
    if (kind == "disk") return PatchBoundary::disk(j.at("params").at("radius"));
    if (kind == "annulus") return PatchBoundary::annulus(j.at("params").at("inner"));
    if (kind == "ellipse")
        return PatchBoundary::ellipse(j.at("params").at("a"), j.at("params").at("b"));
    if (kind == "fourier") {
        const auto& f = j.at("fourier");
        Point c{f.at("center")[0], f.at("center")[1]};
        return PatchBoundary::fourier(f.at("R0"), c, f.at("cos"), f.at("sin"));
    }
    throw InvalidGeometry("unknown patch kind: " + kind);
}

inline json to_json(const ScalarField& f) {
    json j;
    j["origin"] = {f.origin.x1, f.origin.x2};
    j["h"] = f.h;
    j["nx"] = f.nx;
    j["ny"] = f.ny;
    j["omega"] = f.omega;
    j["values"] = f.values;
    j["indicator"] = f.indicator;
    return j;
}

inline ScalarField field_from_json(const json& j) {
    ScalarField f;
    f.origin = {j.at("origin")[0], j.at("origin")[1]};
    f.h = j.at("h");
    f.nx = j.at("nx");
    f.ny = j.at("ny");
    f.omega = j.at("omega");
    f.values = j.at("values").get<std::vector<double>>();
    f.indicator = j.at("indicator").get<std::vector<std::uint8_t>>();
    if (f.values.size() != (std::size_t)f.nx * f.ny ||
        f.indicator.size() != (std::size_t)f.nx * f.ny)
        throw InvalidGeometry("field arrays do not match the declared grid");
    for (double v : f.values)
        if (!std::isfinite(v)) throw InvalidGeometry("non-finite field value");
    return f;
}

inline std::string field_csv(const ScalarField& f) {
    std::ostringstream out;
    out.precision(17);
    out << "x1,x2,psi,inD\n";
    for (int i = 0; i < f.nx; ++i)
        for (int j = 0; j < f.ny; ++j) {
            Point p = f.node(i, j);
            out << p.x1 << ',' << p.x2 << ',' << f.value(i, j) << ','
                << (f.in_patch(i, j) ? 1 : 0) << '\n';
        }
    return out.str();
}

inline std::string weiss_csv(const WeissProfile& w) {
    std::ostringstream out;
    out.precision(17);
    out << "r,phi,s,growth\n";
    for (std::size_t k = 0; k < w.radii.size(); ++k)
        out << w.radii[k] << ',' << w.phi[k] << ',' << w.s[k] << ',' << w.growth[k] << '\n';
    return out.str();
}

inline json to_json(const Classification& c) {
    json j;
    j["verdict"] = to_string(c.verdict);
    j["orientation_deg"] = c.orientation * 180.0 / pi;
    j["scales"] = c.scales;
    j["growth"] = c.growth;
    j["density"] = c.density;
    j["residuals"] = c.residuals;
    j["note"] = c.note;
    return j;
}

inline json to_json(const AngularProfile& p) {
    json j;
    j["omega"] = p.omega;
    j["c0"] = p.c0;
    j["kernel"] = {p.kernel_cos, p.kernel_sin};
    j["arcs"] = p.arcs;
    json modes = json::array();
    for (int k = 1; k <= p.truncation(); ++k)
        modes.push_back({p.modes[k - 1].real(), p.modes[k - 1].imag()});
    j["modes"] = std::move(modes);
    return j;
}

inline std::string angular_csv(const AngularProfile& p, int samples = 0) {
    if (samples <= 0) samples = 4 * p.truncation();
    std::ostringstream out;
    out.precision(17);
    out << "theta,f,chi\n";
    for (int i = 0; i < samples; ++i) {
        double t = two_pi * i / samples;
        out << t << ',' << p.eval(t) << ',' << p.chi(t) << '\n';
    }
    return out.str();
}

inline json to_json(const ConePotential& z) {
    json j;
    j["omega"] = z.omega();
    j["K"] = z.truncation();
    j["logA"] = z.log_cos_coefficient();
    j["logB"] = z.log_sin_coefficient();
    j["phi0"] = z.constant_mode();
    j["kernel"] = {z.kernel_cos(), z.kernel_sin()};
    j["cos_modes"] = z.cos_modes();
    j["sin_modes"] = z.sin_modes();
    return j;
}

inline std::string cone_csv(const ConePotential& z, Box box, int n) {
    std::ostringstream out;
    out.precision(17);
    out << "x1,x2,z\n";
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Point p{box.x_min + (i + 0.5) * box.width() / n,
                    box.y_min + (j + 0.5) * box.height() / n};
            out << p.x1 << ',' << p.x2 << ',' << z.eval(p) << '\n';
        }
    return out.str();
}

inline json to_json(const VStateSolution& s) {
    json j;
    j["omega"] = s.omega;
    j["residual"] = s.residual;
    j["amplitude"] = s.amplitude;
    j["iterations"] = s.iterations;
    j["patch"] = to_json(s.patch);
    return j;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw InvalidGeometry("cannot open output file: " + path);
    out << content;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidGeometry("cannot open input file: " + path);
    return json::parse(in);
}

}  // namespace vortexlab::io

#endif
