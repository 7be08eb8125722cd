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

#include <span>
#include <string>
#include <vector>

#include "spinecurve/geometry.hpp"

namespace spinecurve {

/// Unchecked description of a B-spline curve, as read from a file or request.
/// Use validate() to inspect it and BSplineCurve to obtain a checked value.
struct CurveDefinition {
    int degree = 3;
    std::vector<Point2> control_points;
    std::vector<double> knots;
};

struct ValidationIssue {
    enum class Kind {
        NegativeDegree,
        TooFewControlPoints,
        CountMismatch,     // m != n + p + 1
        KnotOrder,         // knots[j] > knots[j+1]
        KnotRange,         // knot outside [0,1] or non-finite
        ClampMultiplicity, // first/last p+1 knots not 0 / 1
        NonFiniteControlPoint,
    };
    Kind kind;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const noexcept { return issues.empty(); }
    bool has(ValidationIssue::Kind kind) const noexcept;
    /// All messages joined with "; ".
    std::string summary() const;
};

/// Checks every structural invariant of a clamped curve and reports all
/// violations found. Never throws.
ValidationReport validate(const CurveDefinition& def);

/// Clamped B-spline curve in the plane. Immutable once constructed; the
/// constructor throws InvalidGeometry when validate() reports any issue.
///
/// Parameter convention: basis functions are right-continuous at interior
/// knots (a parameter sitting on a knot belongs to the span that starts
/// there), and the last non-empty span is closed at u = 1.
class BSplineCurve {
public:
    explicit BSplineCurve(CurveDefinition def);
    BSplineCurve(int degree, std::vector<Point2> control_points, std::vector<double> knots);

    int degree() const noexcept { return degree_; }
    /// n + 1
    std::size_t control_count() const noexcept { return control_points_.size(); }
    std::span<const Point2> control_points() const noexcept { return control_points_; }
    std::span<const double> knots() const noexcept { return knots_; }
    /// Interior knots, i.e. those not fixed by clamping.
    std::span<const double> free_knots() const noexcept;

    const Point2& front() const noexcept { return control_points_.front(); }
    const Point2& back() const noexcept { return control_points_.back(); }

    CurveDefinition definition() const;

private:
    int degree_;
    std::vector<Point2> control_points_;
    std::vector<double> knots_;
};

/// Builds the full clamped knot vector {0 x (p+1), interior..., 1 x (p+1)}
/// and returns the curve. Throws InvalidGeometry when the interior count is
/// not control_points.size() - degree - 1 or the interior knots are not
/// non-decreasing inside (0,1).
BSplineCurve make_clamped(std::vector<Point2> control_points, int degree,
                          std::span<const double> interior_knots);

/// Interior knots evenly spaced on (0,1) for n_control points of the given degree.
std::vector<double> uniform_interior_knots(int n_control, int degree);

/// Index s of the knot span [u_s, u_{s+1}) containing u, with the final
/// non-empty span closed at u_max. `control_count` is n + 1.
std::size_t find_span(std::span<const double> knots, int degree, std::size_t control_count, double u);

/// Single basis function B_{i,p}(u) by the Cox-de Boor recursion. Zero
/// denominators contribute zero. Throws InvalidGeometry for an index outside
/// [0, m-p-1], an invalid knot vector or u outside [0,1].
double basis(std::size_t i, int degree, double u, std::span<const double> knots);

/// All n + 1 basis values at u (most are zero), via the recursion.
std::vector<double> basis_values(const BSplineCurve& curve, double u);

/// C(u) by direct summation of basis(i,p,u) * P_i. Reference route.
Point2 evaluate_by_basis(const BSplineCurve& curve, double u);

/// C(u) by de Boor's triangular scheme. Fast route; agrees with
/// evaluate_by_basis to rounding. Throws InvalidGeometry for u outside [0,1].
Point2 evaluate(const BSplineCurve& curve, double u);

/// Derivative curve of degree p-1: control differences scaled by
/// p / (u_{i+p+1} - u_{i+1}) over the knot vector with both ends trimmed.
/// Throws InvalidGeometry for degree 0.
BSplineCurve derivative_curve(const BSplineCurve& curve);

/// dC/du. Accepts the closed interval so end tangents can be queried directly.
Point2 derivative(const BSplineCurve& curve, double u);

/// Returns a copy with every control point mapped through f.
template <typename F>
BSplineCurve transform(const BSplineCurve& curve, F&& f) {
    CurveDefinition def = curve.definition();
    for (auto& p : def.control_points) p = f(p);
    return BSplineCurve(std::move(def));
}

}  // namespace spinecurve
