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

#include "spinecurve/bspline.hpp"

namespace spinecurve {

/// Ordered centerline samples, head (top of the image) first.
struct CenterlinePoints {
    std::vector<Point2> points;

    std::size_t size() const noexcept { return points.size(); }
};

enum class KnotStrategy { Uniform, Averaging };
enum class Parameterization { Uniform, ChordLength };

struct FitConfig {
    int n_control = 10;
    int degree = 3;
    KnotStrategy knot_strategy = KnotStrategy::Averaging;
    Parameterization parameterization = Parameterization::ChordLength;

    /// Throws InvalidGeometry unless n_control >= degree + 1 and degree >= 1.
    void check() const;
};

struct ParameterResult {
    std::vector<double> values;
    std::vector<std::string> warnings;
};

/// Fitting parameters t_k in [0,1], strictly increasing, first 0 and last 1.
/// Chord-length spans of zero length (duplicate consecutive points) are given
/// the mean positive chord length instead and a warning is recorded.
ParameterResult parameterize(std::span<const Point2> points, Parameterization strategy);

/// Interior knots for a clamped fit of n_control points. Averaging places
/// knots so that every span holds a comparable share of the parameters.
std::vector<double> place_interior_knots(std::span<const double> params, int n_control, int degree,
                                         KnotStrategy strategy);

struct FitResult {
    BSplineCurve curve;
    std::vector<double> parameters;
    double condition_estimate = 1.0;
    std::vector<std::string> warnings;
};

/// Linear least-squares fit with the given parameters and interior knots.
/// The first and last control points are pinned to the first and last data
/// points; the remaining ones solve the normal equations by Cholesky.
/// Throws InsufficientData when there are fewer points than control points
/// and NumericalError when the system is rank deficient.
FitResult fit_with_knots(std::span<const Point2> points, std::span<const double> parameters,
                         std::span<const double> interior_knots, int n_control, int degree);

/// Full fit: parameterize, place knots, solve.
FitResult fit_clamped_bspline(const CenterlinePoints& points, const FitConfig& config = {});

/// evaluate(curve, i / (count - 1)) for i = 0 .. count-1.
CenterlinePoints resample(const BSplineCurve& curve, std::size_t count);

/// Mean squared point distance between equally sized point sets.
double init_loss(const CenterlinePoints& pred, const CenterlinePoints& gt);

/// Mean squared control-point distance plus mean squared free-knot difference.
double paras_loss(const BSplineCurve& pred, const BSplineCurve& gt);

/// Mean squared distance between the curve resampled at gt.size() uniform
/// parameters and the reference points.
double resample_loss(const BSplineCurve& curve, const CenterlinePoints& gt);

struct LossWeights {
    double lambda_init = 1.0;
    double lambda_paras = 0.1;
    double lambda_resample = 0.1;
};

struct LossBreakdown {
    double init = 0.0;
    double paras = 0.0;
    double resample = 0.0;
};

double weighted_total(const LossBreakdown& parts, const LossWeights& weights);

struct CombinedLoss {
    LossBreakdown parts;
    double total = 0.0;
};

CombinedLoss combined_loss(const CenterlinePoints& pred_points, const BSplineCurve& pred_curve,
                           const CenterlinePoints& gt_points, const BSplineCurve& gt_curve,
                           const LossWeights& weights = {});

}  // namespace spinecurve
