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

#include "spinecurve/cobb.hpp"
#include "spinecurve/fitting.hpp"
#include "spinecurve/pipeline.hpp"
#include "support/oracles.hpp"

using namespace spinecurve;

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

// Acute angle between lines of slopes a and b from their direction vectors.
double direction_angle(double a, double b) {
    const double c = std::abs(1.0 + a * b) / (std::hypot(1.0, a) * std::hypot(1.0, b));
    return std::acos(std::min(1.0, c)) * kDeg;
}

BSplineCurve fitted_spine(const testing::AnalyticSpine& spine) {
    CenterlinePoints pts;
    for (int i = 0; i < 34; ++i) {
        const double y = spine.y_top + (spine.y_bottom - spine.y_top) * i / 33.0;
        pts.points.push_back({spine.x(y), y});
    }
    return fit_clamped_bspline(pts).curve;
}

AngleTriple triple(double mt, double pt, double tl) {
    AngleTriple t;
    t.mt = mt;
    t.pt = pt;
    t.tl = tl;
    return t;
}

}  // namespace

TEST_CASE("equal arc length sampling") {
    SUBCASE("straight segment of length 160 is cut every 10 px") {
        std::vector<Point2> cps;
        for (int i = 0; i < 10; ++i) cps.push_back({40.0, 20.0 + 160.0 * std::pow(i / 9.0, 1.6)});
        const auto curve = make_clamped(cps, 3, uniform_interior_knots(10, 3));
        const auto s = sample_equal_arclength(curve, 17);
        REQUIRE(s.size() == 17);
        for (std::size_t i = 0; i < 17; ++i) {
            CHECK(s[i].position.x == doctest::Approx(40.0));
            CHECK(std::abs(s[i].position.y - (20.0 + 10.0 * static_cast<double>(i))) < 1e-3);
        }
        CHECK(s.front().u == 0.0);
        CHECK(s.back().u == 1.0);
    }
    SUBCASE("curved spine spacing is uniform against a dense oracle") {
        std::mt19937 rng(17);
        const auto curve = testing::random_spine_curve(rng);
        const auto poly = testing::dense_polyline(curve, 200000);
        std::vector<double> cumulative{0.0};
        for (std::size_t i = 1; i < poly.size(); ++i) cumulative.push_back(cumulative.back() + distance(poly[i], poly[i - 1]));
        const double total = cumulative.back();
        const auto s = sample_equal_arclength(curve, 17);
        for (std::size_t i = 0; i < 17; ++i) {
            const auto idx = static_cast<std::size_t>(std::lround(s[i].u * 200000.0));
            CHECK(std::abs(cumulative[idx] - total * static_cast<double>(i) / 16.0) < 1e-3 * total);
        }
    }
    SUBCASE("two samples are the endpoints") {
        std::mt19937 rng(2);
        const auto curve = testing::random_spine_curve(rng);
        const auto s = sample_equal_arclength(curve, 2);
        CHECK(s[0].position == curve.front());
        CHECK(distance(s[1].position, curve.back()) < 1e-12);
    }
    SUBCASE("degenerate curves") {
        const auto dot = make_clamped(std::vector<Point2>(4, Point2{5, 5}), 3, {});
        CHECK_THROWS_WITH_AS(sample_equal_arclength(dot), "zero-length curve", NumericalError);
        std::mt19937 rng(2);
        CHECK_THROWS_AS(sample_equal_arclength(testing::random_spine_curve(rng), 1), InsufficientData);
    }
}

TEST_CASE("slopes in the rotated frame") {
    SUBCASE("vertical spine has zero slope everywhere") {
        std::vector<Point2> cps;
        for (int i = 0; i < 10; ++i) cps.push_back({128.0, 30.0 + 50.0 * i});
        for (const auto& s : slopes(make_clamped(cps, 3, uniform_interior_knots(10, 3)))) CHECK(s.slope == 0.0);
    }
    SUBCASE("diagonal down-right gives slope -1") {
        std::vector<Point2> cps;
        for (int i = 0; i < 10; ++i) cps.push_back({10.0 + 40.0 * i, 10.0 + 40.0 * i});
        for (const auto& s : slopes(make_clamped(cps, 3, uniform_interior_knots(10, 3)))) {
            CHECK(s.slope == doctest::Approx(-1.0).epsilon(1e-12));
        }
    }
    SUBCASE("chord slopes match oracle chords, including the backward last sample") {
        std::mt19937 rng(23);
        const auto curve = testing::random_spine_curve(rng);
        const auto s = slopes(curve, 5e-2, 17);
        REQUIRE(s.size() == 17);
        for (const auto& sample : s) {
            const double v = sample.u + 5e-2 <= 1.0 ? sample.u + 5e-2 : sample.u - 5e-2;
            const Point2 a = testing::de_boor_oracle(curve, sample.u);
            const Point2 b = testing::de_boor_oracle(curve, v);
            CHECK(sample.slope == doctest::Approx(-(b.x - a.x) / (b.y - a.y)).epsilon(1e-9));
            CHECK(distance(sample.position, a) < 1e-9);
        }
        CHECK(s.back().u == 1.0);
    }
    SUBCASE("tangent of a gentle sine within 1 percent for a tiny epsilon") {
        const auto spine = testing::sine_spine(128, 20, 1.0);
        const auto curve = fitted_spine(spine);
        const auto s = slopes(curve, 1e-4, 17);
        for (std::size_t i = 1; i + 1 < s.size(); ++i) {
            const double expected = -spine.dxdy(s[i].position.y);
            if (std::abs(expected) > 0.05) CHECK(s[i].slope == doctest::Approx(expected).epsilon(0.01));
        }
    }
    SUBCASE("horizontal curve has vertical rotated tangents") {
        std::vector<Point2> cps;
        for (int i = 0; i < 10; ++i) cps.push_back({10.0 + 20.0 * i, 50.0});
        CHECK_THROWS_AS(slopes(make_clamped(cps, 3, uniform_interior_knots(10, 3))), NumericalError);
    }
}

TEST_CASE("angle between slopes") {
    CHECK(angle_between_slopes(1.0, -1.0) == 90.0);
    CHECK(angle_between_slopes(0.5, -2.0) == 90.0);
    CHECK(angle_between_slopes(0.3, 0.3) == 0.0);
    const double a = std::tan(25.0 / kDeg), b = -std::tan(15.0 / kDeg);
    CHECK(std::abs(angle_between_slopes(a, b) - 40.0) < 1e-9);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 500; ++i) {
        const double x = u(rng), y = u(rng);
        CHECK(std::abs(angle_between_slopes(x, y) - direction_angle(x, y)) < 1e-9);
    }
}

TEST_CASE("Cobb angles from slope lists") {
    SUBCASE("constant slopes") {
        const std::vector<double> s(17, 0.4);
        const auto t = cobb_from_slopes(s);
        CHECK(t.mt == 0.0);
        CHECK(t.pt == 0.0);
        CHECK(t.tl == 0.0);
        REQUIRE(t.mt_from);
        CHECK(*t.mt_from == std::pair<std::size_t, std::size_t>{0, 16});
        CHECK_NOTHROW(t.check());
    }
    SUBCASE("two samples degrade gracefully") {
        const auto t = cobb_from_slopes(std::vector<double>{1.0, -1.0});
        CHECK(t.mt == 90.0);
        CHECK(t.pt == 0.0);
        CHECK(t.tl == 0.0);
        CHECK_FALSE(t.pt_from);
        CHECK_FALSE(t.tl_from);
    }
    SUBCASE("restricted ranges") {
        // max at 6, min at 12; PT looks at 0..6, TL at 12..16
        std::vector<double> s{0.1, -0.2, 0.0, 0.3, 0.5, 0.6, 0.7, 0.4, 0.1, -0.1, -0.4, -0.6, -0.8, -0.5, -0.3, -0.35, -0.2};
        const auto t = cobb_from_slopes(s);
        CHECK(t.mt == doctest::Approx(direction_angle(0.7, -0.8)).epsilon(1e-12));
        CHECK(*t.mt_from == std::pair<std::size_t, std::size_t>{6, 12});
        CHECK(t.pt == doctest::Approx(direction_angle(0.7, -0.2)).epsilon(1e-12));
        CHECK(*t.pt_from == std::pair<std::size_t, std::size_t>{6, 1});
        CHECK(t.tl == doctest::Approx(direction_angle(-0.2, -0.8)).epsilon(1e-12));
        CHECK(*t.tl_from == std::pair<std::size_t, std::size_t>{16, 12});
    }
    CHECK_THROWS_AS(cobb_from_slopes(std::vector<double>{0.2}), InsufficientData);
}

TEST_CASE("hybrid combination") {
    const auto h = hybrid_combine(triple(10, 20, 30), triple(20, 20, 10), HybridWeights{});
    CHECK(h.mt == doctest::Approx(16.0).epsilon(1e-15));
    CHECK(h.pt == doctest::Approx(20.0).epsilon(1e-15));
    CHECK(h.tl == doctest::Approx(20.0).epsilon(1e-15));
    const auto s = hybrid_combine(triple(10, 20, 30), triple(20, 20, 10), HybridWeights::slope_only());
    CHECK(s.mt == 10.0);
    CHECK(final_angles(triple(1, 2, 3), std::nullopt, HybridWeights{}).tl == 3.0);
    CHECK_THROWS_AS(hybrid_combine(triple(1, 1, 1), triple(1, 1, 1), HybridWeights{1.2, 0.5, 0.5}), InvalidGeometry);
}

TEST_CASE("evaluation metrics") {
    std::vector<EvalRecord> records{{"a", triple(10, 5, 7), triple(12, 5, 7)}, {"b", triple(20, 6, 8), triple(17, 5, 8)}};
    CHECK(mae(records, AngleKind::MT) == doctest::Approx(2.5));
    CHECK(mae(records, AngleKind::PT) == doctest::Approx(0.5));
    CHECK(mae(records, AngleKind::TL) == 0.0);

    const std::vector<EvalRecord> worked{{"w", triple(20, 10, 10), triple(10, 10, 10)}};
    CHECK(std::abs(smape(worked) - 100.0 * 10.0 / 70.0) < 1e-9);

    // Per-record ratios 0.1 and 0.3 average to 20 percent.
    const std::vector<EvalRecord> pair{{"p", triple(11, 0, 0), triple(9, 0, 0)},
                                       {"q", triple(13, 0, 0), triple(7, 0, 0)}};
    CHECK(smape(pair) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(smape(std::vector<EvalRecord>{pair[0]}) + smape(std::vector<EvalRecord>{pair[1]}) ==
          doctest::Approx(2.0 * smape(pair)).epsilon(1e-12));

    const std::vector<EvalRecord> zero{{"z", triple(0, 0, 0), triple(0, 0, 0)}};
    CHECK_THROWS_WITH_AS(smape(zero), "SMAPE denominator is zero for record z", NumericalError);
    CHECK_THROWS_AS(mae(std::vector<EvalRecord>{}, AngleKind::MT), InsufficientData);
}

TEST_CASE("Cobb invariants") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const auto curve = testing::random_spine_curve(rng);
        const auto base = cobb_from_slopes(slopes(curve));

        const double phi = 4.0 / kDeg;
        const auto moved = transform(curve, [&](const Point2& p) {
            return Point2{1.7 * (std::cos(phi) * p.x - std::sin(phi) * p.y) + 30.0,
                          1.7 * (std::sin(phi) * p.x + std::cos(phi) * p.y) - 12.0};
        });
        const auto t = cobb_from_slopes(slopes(moved));
        for (auto kind : kAllAngles) CHECK(std::abs(t.get(kind) - base.get(kind)) < 1e-6);
        CHECK(base.mt >= base.pt);
        CHECK(base.mt >= base.tl);
    }

    double previous = -1.0;
    for (double amp : {0.0, 5.0, 10.0, 20.0, 30.0, 45.0}) {
        const auto mt = cobb_from_slopes(slopes(fitted_spine(testing::sine_spine(128, amp, 1.0)))).mt;
        CHECK(mt >= previous);
        previous = mt;
    }
}

TEST_CASE("pipeline on a rendered single-bend tube") {
    const auto spine = testing::sine_spine(128, 30, 1.0);
    PipelineConfig config;
    const auto stage = centerline_from_mask(testing::render_tube(spine, 14.0), config);
    const auto curve = curve_from_centerline(stage.centerline, config);
    CHECK(curve.resampled.size() == 34);
    const auto analysis = analyze_curve(curve.fit.curve, config);
    CHECK(std::abs(analysis.angles.mt - spine.tangent_angle_range()) < 1.0);
}
