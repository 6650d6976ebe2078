// Copyright 2026 The gtmss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtmss/figures.hpp"
#include "gtmss/io.hpp"
#include "gtmss/svg.hpp"

using namespace gtmss;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("gtmss_test_io_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("ladder JSON round trip") {
    for (const LadderSpec& spec : {make_spin(3.5), make_boson(6), make_two_photon(4), make_custom({0.0, 0.5, 2.0})}) {
        const Json j = to_json(spec);
        CHECK(j.contains("kind"));
        CHECK(j.contains("param"));
        CHECK(j.contains("coeffs"));
        const LadderSpec back = ladder_from_json(j);
        CHECK(back.kind == spec.kind);
        CHECK(back.coeffs == spec.coeffs);
        CHECK(to_json(back) == j);
    }
    CHECK_THROWS_AS(ladder_from_json(Json{{"kind", "spin"}}), ValidationError);
}

TEST_CASE("paired state JSON round trip") {
    const PairedState st = gtmss_state(make_spin(2.0), SqueezeParams::finite(0.4));
    const PairedState back = paired_state_from_json(to_json(st));
    CHECK((back.a - st.a).norm() < 1e-15);
}

TEST_CASE("run config parse, serialize, parse is the identity") {
    const Json src = Json::parse(R"({"command": "qfi", "parameters": {"ladder": "spin", "S": 4.5, "r": "inf"}, "seed": 3})");
    const RunConfig a = RunConfig::from_json(src);
    const RunConfig b = RunConfig::from_json(a.to_json());
    CHECK(a.to_json() == b.to_json());
    CHECK(b.to_json() == src);
    CHECK_THROWS_AS(RunConfig::from_json(Json::parse(R"({"command": "qfi", "extra": 1})")), ValidationError);
    CHECK_THROWS_AS(RunConfig::from_json(Json::parse(R"({"parameters": {}})")), ValidationError);
}

TEST_CASE("number formatting round-trips doubles") {
    for (double v : {0.1, 1.0 / 3.0, 132.0, 1e-300, -2.5e17, 6.02214076e23}) {
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(132.0) == "132");
    CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("csv layout") {
    const fs::path dir = scratch_dir("csv");
    write_csv(dir / "a.csv", {"x", "y"}, {{1.0, 2.0}, {0.5, 0.25}});
    CHECK(slurp(dir / "a.csv") == "x,y\n1,0.5\n2,0.25\n");
    CHECK_THROWS_AS(write_csv(dir / "b.csv", {"x"}, {{1.0}, {2.0}}), ValidationError);
    CHECK_THROWS_AS(write_csv(dir / "b.csv", {"x", "y"}, {{1.0}, {2.0, 3.0}}), ValidationError);
}

TEST_CASE("density matrix binary round trip") {
    const fs::path dir = scratch_dir("rho");
    CMat rho(3, 3);
    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) rho(i, k) = cplx(i + 0.25 * k, i - k);
    }
    write_density_matrix(dir / "rho.bin", rho);
    CHECK(fs::file_size(dir / "rho.bin") == 16 + 9 * 16);
    CHECK(read_density_matrix(dir / "rho.bin") == rho);
    std::ofstream(dir / "bad.bin") << "xx";
    CHECK_THROWS_AS(read_density_matrix(dir / "bad.bin"), ValidationError);
}

TEST_CASE("svg rendering is deterministic and self-contained") {
    Plot p{"t", "x", "y", true, true, {{"a", {1.0, 10.0, 100.0}, {1.0, 0.1, 0.01}}}, {{0.5, "half"}}};
    const std::string a = render_svg(p), b = render_svg(p);
    CHECK(a == b);
    CHECK(a.rfind("<svg", 0) == 0);
    CHECK(a.find("http://www.w3.org/2000/svg") != std::string::npos);
    CHECK(a.find("<script") == std::string::npos);
}

TEST_CASE("figure parameters are validated before computation") {
    FigureOptions opt;
    opt.out = scratch_dir("fig");
    opt.params = {{"no_such_key", 1}};
    CHECK_THROWS_AS(run_figure("fig2a", opt), ValidationError);
    opt.params = {{"N", 5}};
    CHECK_THROWS_AS(run_figure("fig2a", opt), ValidationError);
    opt.params = Json::object();
    CHECK_THROWS_AS(run_figure("fig9", opt), ValidationError);
    opt.formats = {"png"};
    CHECK_THROWS_AS(run_figure("fig2a", opt), ValidationError);
    CHECK(fs::is_empty(opt.out));
}

TEST_CASE("figure outputs are byte-identical across runs") {
    FigureOptions opt;
    opt.params = {{"N", {20, 100}}, {"points", 21}};
    opt.out = scratch_dir("fig_a");
    const FigureResult a = run_figure("fig2a", opt);
    opt.out = scratch_dir("fig_b");
    const FigureResult b = run_figure("fig2a", opt);
    REQUIRE(a.files.size() == 3);
    for (std::size_t i = 0; i < a.files.size(); ++i) CHECK(slurp(a.files[i]) == slurp(b.files[i]));
    CHECK(a.summary["limit"]["20"].get<double>() == doctest::Approx(3.0 / 24.0));
    CHECK(figure_names().size() == 11);
}
