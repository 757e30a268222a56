#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "vortexlab/blowup.hpp"
#include "vortexlab/field.hpp"
#include "vortexlab/io.hpp"
#include "vortexlab/weiss.hpp"

namespace fs = std::filesystem;
using namespace vortexlab;

namespace {

const fs::path work = fs::temp_directory_path() / "vortexlab_cli_test";

int run_cli(const std::string& args, const fs::path& err_file = {}) {
    std::string cmd = std::string(VORTEXLAB_CLI_PATH) + " " + args + " >/dev/null";
    cmd += err_file.empty() ? " 2>/dev/null" : " 2>" + err_file.string();
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Workspace {
    Workspace() {
        fs::remove_all(work);
        fs::create_directories(work);
    }
} workspace;

}  // namespace

TEST_CASE("exit codes: usage, validation, numerical failure") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("field --disk 1 --omega 0.7 --out " + (work / "f.json").string()) == 2);

    auto err = work / "angular_err.json";
    CHECK(run_cli("angular --omega 0.25 --arc 0:1.0472", err) == 3);
    auto j = io::json::parse(slurp(err));
    CHECK(j.at("reason") == "KernelObstruction");
}

TEST_CASE("check-all reports every criterion and exits zero") {
    std::string cmd = std::string(VORTEXLAB_CLI_PATH) + " check-all > " +
                      (work / "checks.txt").string() + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 0);
    auto text = slurp(work / "checks.txt");
    int passes = 0;
    for (std::size_t pos = 0; (pos = text.find("[PASS]", pos)) != std::string::npos; ++pos)
        ++passes;
    CHECK(passes == 9);
    CHECK(text.find("[FAIL]") == std::string::npos);
}

TEST_CASE("solve rejects an oversized mode count") {
    CHECK(run_cli("solve --m 2 --omega 0.3 --modes 300 --out " +
                  (work / "no.json").string()) == 2);
}

TEST_CASE("solve writes a patch file") {
    auto out = work / "patch.json";
    CHECK(run_cli("solve --m 3 --omega 0.3233 --amplitude 0.12 --modes 24 --out " +
                  out.string()) == 0);
    auto patch = io::patch_from_json(io::read_json_file(out.string()));
    CHECK(patch.kind() == PatchBoundary::Kind::fourier);
    CHECK(patch.fourier_cos().at(2) > 0.1);  // converged three-fold amplitude
}

TEST_CASE("branch writes one solution per line") {
    auto out = work / "branch.jsonl";
    CHECK(run_cli("branch --m 2 --amp-start 0.02 --amp-end 0.06 --steps 3 --modes 16 "
                  "--out " + out.string()) == 0);
    std::ifstream in(out);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        auto j = io::json::parse(line);
        double a = j.at("patch").at("fourier").at("cos")[1].get<double>();
        double om = j.at("omega").get<double>();
        CHECK(std::abs(a - 0.02 * (lines + 1)) < 1e-12);
        CHECK(om < 0.25);
        ++lines;
    }
    CHECK(lines == 3);
}

TEST_CASE("field then weiss then blowup reproduces library results bit-for-bit") {
    auto field_file = work / "field.json";
    auto weiss_file = work / "weiss.csv";
    auto report_file = work / "report.json";
    std::string common = "--x0 1,0";
    REQUIRE(run_cli("field --disk 1 --omega 0.25 --box -3:3:-3:3 --spacing 0.015625 "
                    "--out " + field_file.string()) == 0);
    REQUIRE(run_cli("weiss --field " + field_file.string() + " " + common +
                    " --rmin 0.1 --rmax 0.4 --count 4 --out " + weiss_file.string()) == 0);
    REQUIRE(run_cli("blowup --field " + field_file.string() + " " + common +
                    " --scales 0.4,0.2 --out " + report_file.string()) == 0);

    // the same computation at library level with identical defaults
    auto field = relative_stream(PatchBoundary::disk(1.0), 0.25, {-3, 3, -3, 3}, 0.015625);
    auto prof = weiss_profile(field, {1.0, 0.0}, 0.1, 0.4, 4);

    std::ifstream in(weiss_file);
    std::string header, line;
    std::getline(in, header);
    for (int k = 0; k < 4; ++k) {
        REQUIRE(std::getline(in, line));
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double r, phi, s, growth;
        row >> r >> phi >> s >> growth;
        CHECK(r == prof.radii[k]);
        CHECK(phi == prof.phi[k]);
        CHECK(s == prof.s[k]);
        CHECK(growth == prof.growth[k]);
    }

    auto report = io::read_json_file(report_file.string());
    auto cls = classify(field, {1.0, 0.0}, {0.4, 0.2});
    CHECK(report.at("verdict").get<std::string>() == to_string(cls.verdict));
}
