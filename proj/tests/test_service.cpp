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

#include <thread>

#include <httplib.h>

#include "spinecurve/service.hpp"
#include "support/oracles.hpp"

using namespace spinecurve;

namespace {

io::Json rectangle_request() {
    ContourAnnotation a;
    for (std::size_t i = 0; i < kContourPointsPerSide; ++i) {
        a.left.push_back({100.0, 40.0 + 25.0 * static_cast<double>(i)});
        a.right.push_back({150.0, 40.0 + 25.0 * static_cast<double>(i)});
    }
    return {{"image", {{"width", 256}, {"height", 512}}}, {"contour", io::to_json(a)}};
}

std::string body_of(const io::Json& j) { return j.dump(); }

// Live HTTP server on an ephemeral port for the duration of a test.
class LiveServer {
public:
    LiveServer() : service_(PipelineConfig{}) {
        mount_routes(server_, service_);
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~LiveServer() {
        server_.stop();
        thread_.join();
    }
    httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

private:
    AnnotationService service_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

}  // namespace

TEST_CASE("rectangle session is straight") {
    AnnotationService service{PipelineConfig{}};
    const auto r = service.create_session(body_of(rectangle_request()));
    REQUIRE(r.status == 200);
    CHECK(r.body["id"] == "s1");
    CHECK(r.body["version"] == 1);
    for (const char* key : {"mt", "pt", "tl"}) CHECK(r.body["angles"][key].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
    const auto curve = io::curve_from_json(r.body["curve"]);
    for (const auto& p : curve.control_points()) CHECK(p.x == doctest::Approx(125.0).epsilon(1e-9));
    CHECK(r.body["resampled"]["points"].size() == 34);
    CHECK(r.body["centerline"]["points"].size() == 17);
    CHECK(service.create_session(body_of(rectangle_request())).body["id"] == "s2");
}

TEST_CASE("contour edits") {
    AnnotationService service{PipelineConfig{}};
    const auto created = service.create_session(body_of(rectangle_request()));
    const std::string id = created.body["id"];

    auto contour = io::contour_from_json(created.body["contour"]);
    contour.right[8].x += 30.0;
    const auto edited = service.put_contour(id, body_of(io::Json{{"contour", io::to_json(contour)}}));
    REQUIRE(edited.status == 200);
    CHECK(edited.body["version"] == 2);
    CHECK(edited.body["curve"] != created.body["curve"]);
    CHECK(edited.body["angles"]["mt"].get<double>() > 1.0);

    const auto again = service.put_contour(id, body_of(io::Json{{"contour", io::to_json(contour)}}));
    CHECK(again.body.dump() == edited.body.dump());
    CHECK(service.get_session(id).body.dump() == edited.body.dump());

    SUBCASE("stored curve matches an offline recomputation") {
        const auto stored = service.get_session(id).body;
        const PipelineConfig config;
        const auto mask = contour_to_mask(io::contour_from_json(stored["contour"]), 256, 512);
        const auto centerline =
            extract_centerline_detailed(mask, config.centerline_count, config.centerline_smoothing).centerline;
        CHECK(io::to_json(centerline) == stored["centerline"]);
        const auto offline = fit_clamped_bspline(centerline, config.fit).curve;
        CHECK(io::to_json(offline) == stored["curve"]);
    }
    SUBCASE("a rejected edit leaves the session untouched") {
        auto bad = contour;
        bad.left.pop_back();
        const auto r = service.put_contour(id, body_of(io::Json{{"contour", io::to_json(bad)}}));
        CHECK(r.status == 422);
        CHECK(r.body["error"] == "invalid geometry");
        CHECK(r.body["detail"] == "left contour must contain 17 points");
        CHECK(service.get_session(id).body.dump() == edited.body.dump());
    }
}

TEST_CASE("error mapping") {
    AnnotationService service{PipelineConfig{}};
    CHECK(service.get_session("s42").status == 404);
    CHECK(service.get_session("s42").body["error"] == "not found");
    CHECK(service.put_contour("nope", "{}").status == 404);
    CHECK(service.create_session("{ not json").status == 400);
    CHECK(service.create_session("{}").status == 400);
    auto req = rectangle_request();
    req["contour"]["right"] = req["contour"]["left"];
    const auto degenerate = service.create_session(body_of(req));
    CHECK(degenerate.status == 422);
    CHECK(degenerate.body["detail"] == "zero-area contour");
    CHECK(service.angles(body_of(io::Json{{"slopes", {0.1}}})).status == 422);
}

TEST_CASE("GT angles and export round trip") {
    AnnotationService service{PipelineConfig{}};
    auto req = rectangle_request();
    const auto spine = testing::sine_spine(128, 25, 1.0, 0.0, 40, 440);
    req["contour"] = io::to_json(testing::tube_contour(spine, 16.0));
    const std::string id = service.create_session(body_of(req)).body["id"];

    const auto gt = service.put_gt_angles(id, body_of(io::Json{{"mt", 21.5}, {"pt", 3.0}, {"tl", 4.25}}));
    REQUIRE(gt.status == 200);
    CHECK(gt.body["gt_angles"]["mt"] == 21.5);
    CHECK(gt.body["version"] == 2);
    CHECK(service.put_gt_angles(id, body_of(io::Json{{"mt", 21.5}, {"pt", 3.0}, {"tl", 4.25}})).body["version"] == 2);
    CHECK(service.put_gt_angles(id, body_of(io::Json{{"mt", -1.0}, {"pt", 3.0}, {"tl", 4.25}})).status == 422);

    const auto bundle = service.export_session(id).body;
    CHECK(bundle.contains("mask"));
    const auto reimported = service.create_session(bundle.dump());
    REQUIRE(reimported.status == 200);
    CHECK(reimported.body["curve"] == bundle["curve"]);
    CHECK(reimported.body["angles"] == bundle["angles"]);
    CHECK(reimported.body["gt_angles"] == bundle["gt_angles"]);

    const auto from_mask = service.create_session(body_of(io::Json{{"mask", bundle["mask"]}}));
    CHECK(from_mask.status == 200);
    CHECK(from_mask.body["contour"]["left"].size() == 17);
}

TEST_CASE("stateless endpoints") {
    AnnotationService service{PipelineConfig{}};
    io::Json points = io::Json::array();
    for (int i = 0; i < 34; ++i) points.push_back({120.0 + 20.0 * std::sin(i / 6.0), 30.0 + 13.0 * i});

    const auto fit = service.fit(body_of(io::Json{{"points", points}}));
    REQUIRE(fit.status == 200);
    CHECK(fit.body["curve"]["control_points"].size() == 10);
    CHECK(fit.body["parameters"].size() == 34);
    CHECK(service.fit(body_of(io::Json{{"points", points}})).body.dump() == fit.body.dump());
    CHECK(service.fit(body_of(io::Json{{"points", points}, {"fit", {{"n_control", 6}}}})).body["curve"]["control_points"].size() == 6);

    const auto by_curve = service.angles(body_of(io::Json{{"curve", fit.body["curve"]}}));
    const auto by_points = service.angles(body_of(io::Json{{"points", points}}));
    REQUIRE(by_curve.status == 200);
    CHECK(by_curve.body["angles"] == by_points.body["angles"]);
    CHECK(by_curve.body["angles"] == by_curve.body["slope_angles"]);

    std::vector<double> slopes(17, 0.0);
    slopes[3] = std::tan(10.0 * std::numbers::pi / 180.0);
    slopes[9] = -std::tan(10.0 * std::numbers::pi / 180.0);
    const auto hybrid = service.angles(body_of(io::Json{{"slopes", slopes}, {"regression", {{"mt", 30.0}, {"pt", 0.0}, {"tl", 0.0}}}}));
    REQUIRE(hybrid.status == 200);
    CHECK(hybrid.body["slope_angles"]["mt"].get<double>() == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(hybrid.body["angles"]["mt"].get<double>() == doctest::Approx(0.4 * 20.0 + 0.6 * 30.0).epsilon(1e-12));
    const auto alpha = service.angles(body_of(io::Json{{"slopes", slopes}, {"regression", {{"mt", 30.0}, {"pt", 0.0}, {"tl", 0.0}}},
                                                      {"alpha", {{"mt", 1.0}}}}));
    CHECK(alpha.body["angles"]["mt"].get<double>() == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("HTTP transport") {
    LiveServer live;
    auto client = live.client();

    const auto created = client.Post("/sessions", body_of(rectangle_request()), "application/json");
    REQUIRE(created);
    CHECK(created->status == 200);
    const auto session = io::parse(created->body);
    const std::string id = session["id"];

    const auto got = client.Get("/sessions/" + id);
    REQUIRE(got);
    CHECK(io::parse(got->body) == session);

    auto bad = session["contour"];
    bad["left"].erase(bad["left"].begin());
    const auto rejected = client.Put("/sessions/" + id + "/contour", bad.dump(), "application/json");
    REQUIRE(rejected);
    CHECK(rejected->status == 422);
    CHECK(io::parse(rejected->body)["detail"] == "left contour must contain 17 points");

    const auto missing = client.Get("/sessions/s999");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    const auto gt = client.Put("/sessions/" + id + "/gt-angles", R"({"mt": 1, "pt": 2, "tl": 3})", "application/json");
    REQUIRE(gt);
    CHECK(io::parse(gt->body)["gt_angles"]["tl"] == 3.0);

    const auto exported = client.Get("/sessions/" + id + "/export");
    REQUIRE(exported);
    CHECK(io::parse(exported->body)["gt_angles"]["pt"] == 2.0);

    const auto tube = testing::render_tube(testing::sine_spine(128, 0, 1.0), 12.0);
    const auto bytes = encode_mask_png(tube);
    const auto uploaded = client.Post("/sessions", std::string(bytes.begin(), bytes.end()), "image/png");
    REQUIRE(uploaded);
    CHECK(uploaded->status == 200);
    CHECK(io::parse(uploaded->body)["angles"]["mt"].get<double>() < 1e-9);

    const auto angles = client.Post("/angles", R"({"slopes": [1.0, -1.0]})", "application/json");
    REQUIRE(angles);
    CHECK(io::parse(angles->body)["angles"]["mt"] == 90.0);
    const auto fit = client.Post("/fit", R"({"points": [[0,0],[1,1]]})", "application/json");
    REQUIRE(fit);
    CHECK(fit->status == 422);
}

TEST_CASE("concurrent edits keep the session consistent") {
    AnnotationService service{PipelineConfig{}};
    const std::string id = service.create_session(body_of(rectangle_request())).body["id"];
    std::vector<std::thread> workers;
    for (int w = 0; w < 4; ++w) {
        workers.emplace_back([&service, &id, w] {
            auto contour = io::contour_from_json(rectangle_request()["contour"]);
            for (int k = 0; k < 5; ++k) {
                contour.right[4].x = 150.0 + 5.0 * w + k;
                service.put_contour(id, io::Json{{"contour", io::to_json(contour)}}.dump());
                service.fit(io::Json{{"points", io::Json::array({{0, 0}, {1, 2}, {2, 3}, {3, 5}, {4, 4}, {5, 6}, {6, 7}, {7, 9}, {8, 8}, {9, 11}})}}.dump());
            }
        });
    }
    for (auto& t : workers) t.join();
    const auto final_state = service.get_session(id).body;
    CHECK(final_state["version"].get<int>() >= 2);
    CHECK(final_state["version"].get<int>() <= 21);
    const auto replay = service.put_contour(id, io::Json{{"contour", final_state["contour"]}}.dump());
    CHECK(replay.body.dump() == final_state.dump());
}
