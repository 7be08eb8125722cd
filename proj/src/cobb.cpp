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

#include "spinecurve/cobb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace spinecurve {

std::vector<ArcSample> sample_equal_arclength(const BSplineCurve& curve, std::size_t count) {
    if (count < 2) throw InsufficientData("arc-length sampling needs at least 2 samples");
    constexpr auto segments = static_cast<std::size_t>(kArcLengthSegments);
    std::vector<double> cumulative(segments + 1, 0.0);
    Point2 prev = evaluate(curve, 0.0);
    for (std::size_t j = 1; j <= segments; ++j) {
        const Point2 cur = evaluate(curve, static_cast<double>(j) / segments);
        cumulative[j] = cumulative[j - 1] + distance(prev, cur);
        prev = cur;
    }
    const double total = cumulative.back();
    if (!(total > 1e-12)) throw NumericalError("zero-length curve");

    std::vector<ArcSample> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        double u;
        if (k == 0) {
            u = 0.0;
        } else if (k + 1 == count) {
            u = 1.0;
        } else {
            const double target = total * static_cast<double>(k) / static_cast<double>(count - 1);
            const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
            const auto j = static_cast<std::size_t>(it - cumulative.begin()) - 1;
            const double seg = cumulative[j + 1] - cumulative[j];
            const double frac = seg > 0.0 ? (target - cumulative[j]) / seg : 0.0;
            u = (static_cast<double>(j) + frac) / segments;
        }
        out.push_back({u, evaluate(curve, u)});
    }
    return out;
}

std::vector<SlopeSample> slopes(const BSplineCurve& curve, double epsilon, std::size_t count) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidGeometry("epsilon must lie in (0,1)");
    const auto arc = sample_equal_arclength(curve, count);
    std::vector<SlopeSample> out;
    out.reserve(arc.size());
    for (std::size_t i = 0; i < arc.size(); ++i) {
        const double u = arc[i].u;
        // Neighbour on the forward side unless that leaves the domain.
        const double v = u + epsilon <= 1.0 ? u + epsilon : u - epsilon;
        const Point2 s = rotate_quarter_turn(arc[i].position);
        const Point2 t = rotate_quarter_turn(evaluate(curve, v));
        const double dx = t.x - s.x;
        if (std::abs(dx) < 1e-12) {
            std::ostringstream os;
            os << "vertical tangent in rotated frame at sample " << i << " (u=" << u << ")";
            throw NumericalError(os.str());
        }
        out.push_back({i, u, arc[i].position, (t.y - s.y) / dx});
    }
    return out;
}

const char* angle_name(AngleKind kind) noexcept {
    switch (kind) {
        case AngleKind::MT: return "mt";
        case AngleKind::PT: return "pt";
        case AngleKind::TL: return "tl";
    }
    return "?";
}

double AngleTriple::get(AngleKind kind) const noexcept {
    return kind == AngleKind::MT ? mt : (kind == AngleKind::PT ? pt : tl);
}

double& AngleTriple::get(AngleKind kind) noexcept {
    return kind == AngleKind::MT ? mt : (kind == AngleKind::PT ? pt : tl);
}

const Provenance& AngleTriple::provenance(AngleKind kind) const noexcept {
    return kind == AngleKind::MT ? mt_from : (kind == AngleKind::PT ? pt_from : tl_from);
}

void AngleTriple::check() const {
    for (const auto kind : kAllAngles) {
        const double v = get(kind);
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidGeometry(std::string(angle_name(kind)) + " angle must be a non-negative number");
        }
        const auto& from = provenance(kind);
        if (from && from->first == from->second) {
            throw InvalidGeometry(std::string(angle_name(kind)) + " provenance indices must differ");
        }
    }
}

double angle_between_slopes(double slope_a, double slope_b) {
    const double den = 1.0 + slope_a * slope_b;
    if (den == 0.0) return 90.0;
    return 180.0 / std::numbers::pi * std::abs(std::atan((slope_a - slope_b) / den));
}

namespace {

struct Extremes {
    std::size_t max_index;
    std::size_t min_index;
};

// First maximum and last minimum in [begin, end).
Extremes find_extremes(std::span<const double> s, std::size_t begin, std::size_t end) {
    Extremes e{begin, begin};
    for (std::size_t i = begin; i < end; ++i) {
        if (s[i] > s[e.max_index]) e.max_index = i;
        if (s[i] <= s[e.min_index]) e.min_index = i;
    }
    return e;
}

void restricted_angle(std::span<const double> s, std::size_t begin, std::size_t end, double& angle, Provenance& from) {
    if (end - begin < 2) {
        angle = 0.0;
        from.reset();
        return;
    }
    const auto e = find_extremes(s, begin, end);
    angle = angle_between_slopes(s[e.max_index], s[e.min_index]);
    from = std::make_pair(e.max_index, e.min_index);
}

}  // namespace

AngleTriple cobb_from_slopes(std::span<const double> s) {
    if (s.size() < 2) throw InsufficientData("Cobb analysis needs at least 2 slope samples");
    AngleTriple out;
    restricted_angle(s, 0, s.size(), out.mt, out.mt_from);
    const std::size_t head = std::min(out.mt_from->first, out.mt_from->second);
    const std::size_t tail = std::max(out.mt_from->first, out.mt_from->second);
    restricted_angle(s, 0, head + 1, out.pt, out.pt_from);
    restricted_angle(s, tail, s.size(), out.tl, out.tl_from);
    return out;
}

AngleTriple cobb_from_slopes(std::span<const SlopeSample> samples) {
    std::vector<double> s;
    s.reserve(samples.size());
    for (const auto& sample : samples) s.push_back(sample.slope);
    return cobb_from_slopes(std::span<const double>(s));
}

double HybridWeights::get(AngleKind kind) const noexcept {
    return kind == AngleKind::MT ? mt : (kind == AngleKind::PT ? pt : tl);
}

void HybridWeights::check() const {
    for (const auto kind : kAllAngles) {
        const double a = get(kind);
        if (!(a >= 0.0 && a <= 1.0)) {
            throw InvalidGeometry(std::string("alpha for ") + angle_name(kind) + " must lie in [0,1]");
        }
    }
}

AngleTriple hybrid_combine(const AngleTriple& slope_angles, const AngleTriple& regression_angles,
                           const HybridWeights& weights) {
    weights.check();
    AngleTriple out = slope_angles;
    for (const auto kind : kAllAngles) {
        const double a = weights.get(kind);
        out.get(kind) = a * slope_angles.get(kind) + (1.0 - a) * regression_angles.get(kind);
    }
    return out;
}

double mae(std::span<const EvalRecord> records, AngleKind angle) {
    if (records.empty()) throw InsufficientData("MAE over an empty record list");
    double sum = 0.0;
    for (const auto& r : records) sum += std::abs(r.predicted.get(angle) - r.ground_truth.get(angle));
    return sum / static_cast<double>(records.size());
}

double smape(std::span<const EvalRecord> records) {
    if (records.empty()) throw InsufficientData("SMAPE over an empty record list");
    double sum = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        double num = 0.0;
        double den = 0.0;
        for (const auto kind : kAllAngles) {
            num += std::abs(r.predicted.get(kind) - r.ground_truth.get(kind));
            den += r.predicted.get(kind) + r.ground_truth.get(kind);
        }
        if (!(den > 0.0)) {
            const std::string name = r.id.empty() ? "#" + std::to_string(i) : r.id;
            throw NumericalError("SMAPE denominator is zero for record " + name);
        }
        sum += num / den;
    }
    return 100.0 * sum / static_cast<double>(records.size());
}

}  // namespace spinecurve
