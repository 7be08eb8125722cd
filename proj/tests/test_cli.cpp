// Copyright 2026 The spinecurve Authors
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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "spinecurve/cli.hpp"
#include "support/oracles.hpp"

using namespace spinecurve;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "spinecurve");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Fixture directory with a 25-degree single-bend tube mask and friends.
struct Fixtures {
    fs::path dir = fs::temp_directory_path() / "spinecurve_test_cli";
    testing::AnalyticSpine spine;

    Fixtures() {
        fs::remove_all(dir);
        fs::create_directories(dir / "pred");
        fs::create_directories(dir / "gt");
        fs::create_directories(dir / "empty");
        const double k = std::numbers::pi / 450.0;
        spine = testing::sine_spine(128, std::tan(12.5 * std::numbers::pi / 180.0) / k, 1.0);
        save_mask_png(testing::render_tube(spine, 14.0), dir / "tube.png");

        io::Json centerline;
        centerline["points"] = io::Json::array();
        for (int i = 0; i < 34; ++i) centerline["points"].push_back({100.0 + 0.3 * i * i / 10.0, 20.0 + 13.0 * i});
        io::write_file(dir / "centerline.json", centerline);

        io::Json short_centerline;
        short_centerline["points"] = io::Json::array({{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}});
        io::write_file(dir / "short.json", short_centerline);

        io::write_file(dir / "regression.json", io::Json{{"mt", 20.0}, {"pt", 20.0}, {"tl", 10.0}});
        io::write_file(dir / "config.json", io::Json{{"fit", {{"n_control", 8}}}, {"alpha", {{"mt", 0.25}}}});

        for (int i = 0; i < 3; ++i) {
            const io::Json a{{"mt", 10.0 + i}, {"pt", 5.0 + i}, {"tl", 7.5 + 2 * i}};
            const auto name = "case" + std::to_string(i) + ".json";
            io::write_file(dir / "pred" / name, a);
            io::write_file(dir / "gt" / name, a);
        }
        std::ofstream(dir / "broken.json") << "{ not json";
    }
    ~Fixtures() { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE_FIXTURE(Fixtures, "extract") {
    const auto r = run_cli({"extract", path("tube.png")});
    REQUIRE(r.code == cli::kOk);
    const auto j = io::parse(r.out);
    REQUIRE(j["points"].size() == 17);
    for (const auto& p : j["points"]) CHECK(std::abs(p[0].get<double>() - spine.x(p[1].get<double>())) <= 1.0);
}

TEST_CASE_FIXTURE(Fixtures, "fit produces a clamped cubic") {
    const auto r = run_cli({"fit", path("centerline.json"), "--resampled-out", path("resampled.json")});
    REQUIRE(r.code == cli::kOk);
    const auto curve = io::curve_from_json(io::parse(r.out));
    CHECK(curve.degree() == 3);
    CHECK(curve.control_count() == 10);
    CHECK(curve.knots().size() == 14);
    CHECK(io::read_file(path("resampled.json"))["points"].size() == 34);

    const auto flagged = run_cli({"--controls", "12", "--knots", "uniform", "fit", path("centerline.json")});
    CHECK(io::curve_from_json(io::parse(flagged.out)).control_count() == 12);
}

TEST_CASE_FIXTURE(Fixtures, "flags override the config file") {
    const auto from_config = run_cli({"--config", path("config.json"), "fit", path("centerline.json")});
    REQUIRE(from_config.code == cli::kOk);
    CHECK(io::curve_from_json(io::parse(from_config.out)).control_count() == 8);
    const auto overridden = run_cli({"--config", path("config.json"), "--controls", "11", "fit", path("centerline.json")});
    CHECK(io::curve_from_json(io::parse(overridden.out)).control_count() == 11);
}

TEST_CASE_FIXTURE(Fixtures, "angles from a mask track the analytic bend") {
    const auto r = run_cli({"angles", path("tube.png")});
    REQUIRE(r.code == cli::kOk);
    const auto j = io::parse(r.out);
    CHECK(std::abs(spine.tangent_angle_range() - 25.0) < 1e-6);
    CHECK(std::abs(j["mt"].get<double>() - 25.0) < 1.0);
    CHECK(j.contains("provenance"));
    CHECK_FALSE(j.contains("slope_based"));

    // curve JSON input gives the same angles as the mask it was fitted from
    REQUIRE(run_cli({"-o", path("curve.json"), "fit", path("tube.png")}).code == cli::kOk);
    CHECK(run_cli({"angles", path("curve.json")}).out == r.out);
}

TEST_CASE_FIXTURE(Fixtures, "hybrid angles with a regression file") {
    const auto r = run_cli({"angles", path("tube.png"), "--regression", path("regression.json")});
    REQUIRE(r.code == cli::kOk);
    const auto j = io::parse(r.out);
    const auto s = j["slope_based"];
    CHECK(j["mt"].get<double>() == doctest::Approx(0.4 * s["mt"].get<double>() + 0.6 * 20.0).epsilon(1e-12));
    CHECK(j["pt"].get<double>() == doctest::Approx(0.5 * s["pt"].get<double>() + 0.5 * 20.0).epsilon(1e-12));
    CHECK(j["tl"].get<double>() == doctest::Approx(0.5 * s["tl"].get<double>() + 0.5 * 10.0).epsilon(1e-12));

    const auto weighted = io::parse(run_cli({"--alpha-mt", "1", "angles", path("tube.png"), "--regression",
                                             path("regression.json")}).out);
    CHECK(weighted["mt"] == weighted["slope_based"]["mt"]);
}

TEST_CASE_FIXTURE(Fixtures, "determinism") {
    for (const auto& args : std::vector<std::vector<std::string>>{{"extract", path("tube.png")},
                                                                  {"fit", path("tube.png")},
                                                                  {"angles", path("tube.png")},
                                                                  {"eval", path("pred"), path("gt")}}) {
        const auto a = run_cli(args);
        const auto b = run_cli(args);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
    run_cli({"-o", path("a.json"), "angles", path("tube.png")});
    run_cli({"-o", path("b.json"), "angles", path("tube.png")});
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
}

TEST_CASE_FIXTURE(Fixtures, "eval") {
    const auto r = run_cli({"eval", path("pred"), path("gt")});
    REQUIRE(r.code == cli::kOk);
    const auto j = io::parse(r.out);
    CHECK(j["count"] == 3);
    CHECK(j["mae"]["mt"] == 0.0);
    CHECK(j["mae"]["pt"] == 0.0);
    CHECK(j["mae"]["tl"] == 0.0);
    CHECK(j["smape"] == 0.0);

    io::write_file(dir / "pred" / "extra.json", io::Json{{"mt", 1.0}, {"pt", 1.0}, {"tl", 1.0}});
    io::write_file(dir / "gt" / "case0.json", io::Json{{"mt", 12.0}, {"pt", 5.0}, {"tl", 7.5}});
    const auto partial = run_cli({"eval", path("pred"), path("gt")});
    REQUIRE(partial.code == cli::kOk);
    CHECK(partial.err.find("warning: no counterpart") != std::string::npos);
    const auto p = io::parse(partial.out);
    CHECK(p["count"] == 3);
    CHECK(p["mae"]["mt"].get<double>() == doctest::Approx(2.0 / 3.0));
    CHECK(p["unmatched"].size() == 1);
}

TEST_CASE_FIXTURE(Fixtures, "exit codes") {
    CHECK(run_cli({"extract", path("missing.png")}).code == cli::kFileError);
    CHECK(run_cli({"angles", path("missing.json")}).code == cli::kFileError);
    const auto few = run_cli({"fit", path("short.json")});
    CHECK(few.code == cli::kTooFewPoints);
    CHECK(few.err.rfind("error: ", 0) == 0);
    CHECK(run_cli({"eval", path("pred"), path("empty")}).code == cli::kEmptyEvaluation);
    CHECK(run_cli({"fit", path("broken.json")}).code == cli::kInvalidInput);
    CHECK(run_cli({"--knots", "spiral", "fit", path("centerline.json")}).code != cli::kOk);
    CHECK(run_cli({"--help"}).code == cli::kOk);
    CHECK(run_cli({}).code != cli::kOk);
}

TEST_CASE_FIXTURE(Fixtures, "straight tube gives zero angles") {
    save_mask_png(testing::render_tube(testing::sine_spine(100, 0, 1.0), 13.0), dir / "straight.png");
    const auto j = io::parse(run_cli({"angles", path("straight.png")}).out);
    for (const char* key : {"mt", "pt", "tl"}) CHECK(j[key].get<double>() < 1e-9);
}
