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

#include "spinecurve/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spinecurve {

namespace {

using Kind = ValidationIssue::Kind;

void check_parameter(double u) {
    if (!(u >= 0.0 && u <= 1.0)) {
        std::ostringstream os;
        os << "parameter u=" << u << " outside [0,1]";
        throw InvalidGeometry(os.str());
    }
}

// Knot-vector checks shared by validate() and basis(); clamping is checked separately.
void check_knots(std::span<const double> knots, std::vector<ValidationIssue>& issues) {
    for (std::size_t j = 0; j < knots.size(); ++j) {
        if (!std::isfinite(knots[j]) || knots[j] < 0.0 || knots[j] > 1.0) {
            std::ostringstream os;
            os << "knot " << j << " = " << knots[j] << " outside [0,1]";
            issues.push_back({Kind::KnotRange, os.str()});
        }
    }
    for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
        if (knots[j] > knots[j + 1]) {
            std::ostringstream os;
            os << "knots decrease at index " << j << " (" << knots[j] << " > " << knots[j + 1] << ")";
            issues.push_back({Kind::KnotOrder, os.str()});
        }
    }
}

// B_{i,p}(u) over the recursion tree. `last_span` is the span closed at u = 1.
double cox_de_boor(std::size_t i, int p, double u, std::span<const double> U, std::size_t last_span) {
    if (p == 0) {
        if (U[i] <= u && u < U[i + 1]) return 1.0;
        return (i == last_span && u == U[i + 1]) ? 1.0 : 0.0;
    }
    double value = 0.0;
    const double left_den = U[i + p] - U[i];
    if (left_den != 0.0) value += (u - U[i]) / left_den * cox_de_boor(i, p - 1, u, U, last_span);
    const double right_den = U[i + p + 1] - U[i + 1];
    if (right_den != 0.0) value += (U[i + p + 1] - u) / right_den * cox_de_boor(i + 1, p - 1, u, U, last_span);
    return value;
}

std::size_t last_nonempty_span(std::span<const double> U) {
    for (std::size_t j = U.size() - 1; j-- > 0;) {
        if (U[j] < U[j + 1]) return j;
    }
    return 0;
}

}  // namespace

bool ValidationReport::has(ValidationIssue::Kind kind) const noexcept {
    return std::any_of(issues.begin(), issues.end(), [kind](const auto& issue) { return issue.kind == kind; });
}

std::string ValidationReport::summary() const {
    std::string out;
    for (const auto& issue : issues) {
        if (!out.empty()) out += "; ";
        out += issue.message;
    }
    return out;
}

ValidationReport validate(const CurveDefinition& def) {
    ValidationReport report;
    auto& issues = report.issues;
    const int p = def.degree;
    if (p < 0) {
        issues.push_back({Kind::NegativeDegree, "degree must be non-negative, got " + std::to_string(p)});
        return report;
    }
    const std::size_t controls = def.control_points.size();
    if (controls < static_cast<std::size_t>(p) + 1) {
        std::ostringstream os;
        os << "degree " << p << " needs at least " << p + 1 << " control points, got " << controls;
        issues.push_back({Kind::TooFewControlPoints, os.str()});
    }
    for (std::size_t i = 0; i < controls; ++i) {
        if (!std::isfinite(def.control_points[i].x) || !std::isfinite(def.control_points[i].y)) {
            issues.push_back({Kind::NonFiniteControlPoint, "control point " + std::to_string(i) + " is not finite"});
        }
    }
    const std::size_t expected = controls + static_cast<std::size_t>(p) + 1;
    if (def.knots.size() != expected) {
        std::ostringstream os;
        os << "knot count " << def.knots.size() << " does not satisfy m = n + p + 1 (expected " << expected
           << " knots for " << controls << " control points of degree " << p << ")";
        issues.push_back({Kind::CountMismatch, os.str()});
    }
    check_knots(def.knots, issues);

    const std::size_t mult = static_cast<std::size_t>(p) + 1;
    if (def.knots.size() >= 2 * mult) {
        bool clamped = true;
        for (std::size_t j = 0; j < mult; ++j) {
            clamped = clamped && def.knots[j] == 0.0 && def.knots[def.knots.size() - 1 - j] == 1.0;
        }
        if (!clamped) {
            std::ostringstream os;
            os << "first and last " << mult << " knots must be exactly 0 and 1 for a clamped curve of degree " << p;
            issues.push_back({Kind::ClampMultiplicity, os.str()});
        }
    } else if (!def.knots.empty()) {
        issues.push_back({Kind::ClampMultiplicity,
                          "knot vector too short for clamped end multiplicity " + std::to_string(mult)});
    }
    return report;
}

BSplineCurve::BSplineCurve(CurveDefinition def) {
    const auto report = validate(def);
    if (!report.ok()) throw InvalidGeometry("invalid B-spline curve: " + report.summary());
    degree_ = def.degree;
    control_points_ = std::move(def.control_points);
    knots_ = std::move(def.knots);
}

BSplineCurve::BSplineCurve(int degree, std::vector<Point2> control_points, std::vector<double> knots)
    : BSplineCurve(CurveDefinition{degree, std::move(control_points), std::move(knots)}) {}

std::span<const double> BSplineCurve::free_knots() const noexcept {
    const auto mult = static_cast<std::size_t>(degree_) + 1;
    return std::span<const double>(knots_).subspan(mult, knots_.size() - 2 * mult);
}

CurveDefinition BSplineCurve::definition() const {
    return CurveDefinition{degree_, control_points_, knots_};
}

BSplineCurve make_clamped(std::vector<Point2> control_points, int degree, std::span<const double> interior_knots) {
    if (degree < 0) throw InvalidGeometry("degree must be non-negative");
    const auto controls = static_cast<long>(control_points.size());
    const long expected = controls - degree - 1;
    if (expected < 0 || static_cast<long>(interior_knots.size()) != expected) {
        std::ostringstream os;
        os << "clamped curve with " << controls << " control points of degree " << degree << " needs "
           << std::max(expected, 0L) << " interior knots, got " << interior_knots.size();
        throw InvalidGeometry(os.str());
    }
    for (std::size_t j = 0; j < interior_knots.size(); ++j) {
        const double k = interior_knots[j];
        if (!(k > 0.0 && k < 1.0)) throw InvalidGeometry("interior knot " + std::to_string(j) + " not in (0,1)");
        if (j > 0 && interior_knots[j - 1] > k) throw InvalidGeometry("interior knots must be non-decreasing");
    }
    std::vector<double> knots(static_cast<std::size_t>(degree) + 1, 0.0);
    knots.insert(knots.end(), interior_knots.begin(), interior_knots.end());
    knots.insert(knots.end(), static_cast<std::size_t>(degree) + 1, 1.0);
    return BSplineCurve(degree, std::move(control_points), std::move(knots));
}

std::vector<double> uniform_interior_knots(int n_control, int degree) {
    const int segments = n_control - degree;
    std::vector<double> knots;
    for (int j = 1; j < segments; ++j) knots.push_back(static_cast<double>(j) / segments);
    return knots;
}

std::size_t find_span(std::span<const double> knots, int degree, std::size_t control_count, double u) {
    const std::size_t n = control_count - 1;
    const auto p = static_cast<std::size_t>(degree);
    if (u >= knots[n + 1]) {
        // closed end: last span with positive length
        std::size_t s = n;
        while (s > p && knots[s] == knots[s + 1]) --s;
        return s;
    }
    // upper_bound gives the first knot > u; the span starts just before it.
    const auto it = std::upper_bound(knots.begin() + static_cast<long>(p), knots.begin() + static_cast<long>(n) + 1, u);
    return static_cast<std::size_t>(it - knots.begin()) - 1;
}

double basis(std::size_t i, int degree, double u, std::span<const double> knots) {
    if (degree < 0) throw InvalidGeometry("degree must be non-negative");
    std::vector<ValidationIssue> issues;
    check_knots(knots, issues);
    const auto p = static_cast<std::size_t>(degree);
    if (knots.size() < 2 * p + 2) {
        issues.push_back({Kind::CountMismatch, "knot vector too short for degree " + std::to_string(p)});
    } else if (knots.front() != 0.0 || knots.back() != 1.0) {
        issues.push_back({Kind::KnotRange, "knot vector must start at 0 and end at 1"});
    }
    if (!issues.empty()) throw InvalidGeometry("invalid knot vector: " + issues.front().message);
    const std::size_t max_index = knots.size() - p - 2;
    if (i > max_index) {
        std::ostringstream os;
        os << "basis index " << i << " out of range [0, " << max_index << "]";
        throw InvalidGeometry(os.str());
    }
    check_parameter(u);
    return cox_de_boor(i, degree, u, knots, last_nonempty_span(knots));
}

std::vector<double> basis_values(const BSplineCurve& curve, double u) {
    check_parameter(u);
    const auto knots = curve.knots();
    const std::size_t last = last_nonempty_span(knots);
    std::vector<double> values(curve.control_count());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = cox_de_boor(i, curve.degree(), u, knots, last);
    return values;
}

Point2 evaluate_by_basis(const BSplineCurve& curve, double u) {
    const auto values = basis_values(curve, u);
    const auto cps = curve.control_points();
    Point2 out;
    for (std::size_t i = 0; i < values.size(); ++i) out += values[i] * cps[i];
    return out;
}

Point2 evaluate(const BSplineCurve& curve, double u) {
    check_parameter(u);
    const int p = curve.degree();
    const auto knots = curve.knots();
    const auto cps = curve.control_points();
    const std::size_t span = find_span(knots, p, cps.size(), u);

    std::vector<Point2> d(cps.begin() + static_cast<long>(span) - p, cps.begin() + static_cast<long>(span) + 1);
    for (int r = 1; r <= p; ++r) {
        for (int j = p; j >= r; --j) {
            const std::size_t i = span - static_cast<std::size_t>(p) + static_cast<std::size_t>(j);
            const double den = knots[i + static_cast<std::size_t>(p - r) + 1] - knots[i];
            const double alpha = den == 0.0 ? 0.0 : (u - knots[i]) / den;
            d[j] = (1.0 - alpha) * d[j - 1] + alpha * d[j];
        }
    }
    return d[static_cast<std::size_t>(p)];
}

BSplineCurve derivative_curve(const BSplineCurve& curve) {
    const int p = curve.degree();
    if (p == 0) throw InvalidGeometry("derivative of a degree-0 curve is undefined");
    const auto cps = curve.control_points();
    const auto knots = curve.knots();
    std::vector<Point2> diffs;
    diffs.reserve(cps.size() - 1);
    for (std::size_t i = 0; i + 1 < cps.size(); ++i) {
        const double den = knots[i + static_cast<std::size_t>(p) + 1] - knots[i + 1];
        diffs.push_back(den == 0.0 ? Point2{} : (static_cast<double>(p) / den) * (cps[i + 1] - cps[i]));
    }
    std::vector<double> trimmed(knots.begin() + 1, knots.end() - 1);
    return BSplineCurve(p - 1, std::move(diffs), std::move(trimmed));
}

Point2 derivative(const BSplineCurve& curve, double u) {
    check_parameter(u);
    return evaluate(derivative_curve(curve), u);
}

}  // namespace spinecurve
