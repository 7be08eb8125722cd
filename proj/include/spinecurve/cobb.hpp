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

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spinecurve/bspline.hpp"

namespace spinecurve {

inline constexpr std::size_t kVertebraSamples = 17;
inline constexpr double kDefaultEpsilon = 5e-2;
inline constexpr int kArcLengthSegments = 4096;

struct ArcSample {
    double u = 0.0;
    Point2 position;
};

/// `count` points spaced by total_length / (count - 1) along the curve. Arc
/// length comes from a polyline through kArcLengthSegments uniform parameter
/// steps; parameters are recovered by linear interpolation of the monotone
/// cumulative-length table. Throws NumericalError for a zero-length curve.
std::vector<ArcSample> sample_equal_arclength(const BSplineCurve& curve, std::size_t count = kVertebraSamples);

/// Counter-clockwise quarter turn used before measuring slopes: (x, y) -> (y, -x).
inline Point2 rotate_quarter_turn(const Point2& p) noexcept { return {p.y, -p.x}; }

struct SlopeSample {
    std::size_t index = 0;
    double u = 0.0;
    Point2 position;     // image frame
    double slope = 0.0;  // rotated frame
};

/// Slope of the chord from C(u_i) to C(u_i + epsilon) in the rotated frame,
/// for each equal-arc-length parameter u_i. When u_i + epsilon exceeds 1 the
/// neighbour is taken at u_i - epsilon instead. Throws NumericalError
/// ("vertical tangent in rotated frame") when the rotated chord has no
/// horizontal extent.
std::vector<SlopeSample> slopes(const BSplineCurve& curve, double epsilon = kDefaultEpsilon,
                                std::size_t count = kVertebraSamples);

/// Sample indices whose slopes produced an angle.
using Provenance = std::optional<std::pair<std::size_t, std::size_t>>;

enum class AngleKind { MT, PT, TL };
inline constexpr std::array<AngleKind, 3> kAllAngles{AngleKind::MT, AngleKind::PT, AngleKind::TL};
const char* angle_name(AngleKind kind) noexcept;

/// Main thoracic, proximal thoracic and thoracolumbar/lumbar angles in degrees.
struct AngleTriple {
    double mt = 0.0;
    double pt = 0.0;
    double tl = 0.0;
    Provenance mt_from;
    Provenance pt_from;
    Provenance tl_from;

    double get(AngleKind kind) const noexcept;
    double& get(AngleKind kind) noexcept;
    const Provenance& provenance(AngleKind kind) const noexcept;

    /// Throws InvalidGeometry when an angle is negative or non-finite, or a
    /// provenance pair holds equal indices.
    void check() const;
};

/// Angle in degrees between two lines of the given slopes:
/// |atan((a - b) / (1 + a b))|, exactly 90 when 1 + a b == 0.
double angle_between_slopes(double slope_a, double slope_b);

/// MT from the global slope extremes; PT from the extremes at indices up to
/// the smaller MT index (head side) and TL from those at or after the larger
/// MT index (tail side). The MT samples themselves belong to both restricted
/// ranges. A range with fewer than two samples yields 0 with no provenance.
/// Ties: the first maximum and the last minimum are used.
AngleTriple cobb_from_slopes(std::span<const SlopeSample> samples);
AngleTriple cobb_from_slopes(std::span<const double> slopes);

struct HybridWeights {
    double mt = 0.4;
    double pt = 0.5;
    double tl = 0.5;

    static HybridWeights slope_only() noexcept { return {1.0, 1.0, 1.0}; }
    double get(AngleKind kind) const noexcept;
    void check() const;
};

/// alpha * slope + (1 - alpha) * regression per angle. Provenance comes from
/// the slope triple.
AngleTriple hybrid_combine(const AngleTriple& slope_angles, const AngleTriple& regression_angles,
                           const HybridWeights& weights);

struct EvalRecord {
    std::string id;
    AngleTriple predicted;
    AngleTriple ground_truth;
};

/// Mean absolute error of one angle over the records. Throws InsufficientData when empty.
double mae(std::span<const EvalRecord> records, AngleKind angle);

/// Symmetric mean absolute percentage error over the three angles, in
/// percent. Per record, the absolute differences and the sums are each
/// totalled over MT, PT and TL before dividing. Throws NumericalError naming
/// the record whose denominator is zero.
double smape(std::span<const EvalRecord> records);

}  // namespace spinecurve
