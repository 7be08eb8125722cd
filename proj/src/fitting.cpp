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

#include "spinecurve/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace spinecurve {

namespace {

constexpr double kConditionWarning = 1e10;
// Reciprocal condition below which the factorization is treated as singular.
constexpr double kSingularRcond = 1e-15;

double mean_squared_distance(std::span<const Point2> a, std::span<const Point2> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += squared_norm(a[i] - b[i]);
    return sum / static_cast<double>(a.size());
}

}  // namespace

void FitConfig::check() const {
    if (degree < 1) throw InvalidGeometry("fit degree must be at least 1, got " + std::to_string(degree));
    if (n_control < degree + 1) {
        std::ostringstream os;
        os << "n_control (" << n_control << ") must be at least degree + 1 (" << degree + 1 << ")";
        throw InvalidGeometry(os.str());
    }
}

ParameterResult parameterize(std::span<const Point2> points, Parameterization strategy) {
    if (points.size() < 2) throw InsufficientData("parameterization needs at least 2 points");
    ParameterResult result;
    const std::size_t n = points.size();
    std::vector<double> spans(n - 1, 1.0);
    if (strategy == Parameterization::ChordLength) {
        double positive_sum = 0.0;
        std::size_t positive = 0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            spans[k] = distance(points[k], points[k + 1]);
            if (spans[k] > 0.0) {
                positive_sum += spans[k];
                ++positive;
            }
        }
        const double fallback = positive > 0 ? positive_sum / static_cast<double>(positive) : 1.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (spans[k] > 0.0) continue;
            spans[k] = fallback;
            result.warnings.push_back("duplicate consecutive points at index " + std::to_string(k) +
                                      "; using uniform spacing for that span");
        }
    }
    const double total = std::accumulate(spans.begin(), spans.end(), 0.0);
    result.values.resize(n);
    double acc = 0.0;
    result.values[0] = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        acc += spans[k - 1];
        result.values[k] = acc / total;
    }
    result.values[n - 1] = 1.0;
    return result;
}

std::vector<double> place_interior_knots(std::span<const double> params, int n_control, int degree,
                                         KnotStrategy strategy) {
    const int interior = n_control - degree - 1;
    if (interior <= 0) return {};
    if (strategy == KnotStrategy::Uniform) return uniform_interior_knots(n_control, degree);

    // Each knot interpolates the parameter sequence at a fractional index so
    // that every span of the clamped vector covers a similar number of data.
    const auto data = static_cast<double>(params.size());
    const double step = data / static_cast<double>(interior + 1);
    std::vector<double> knots;
    knots.reserve(static_cast<std::size_t>(interior));
    for (int j = 1; j <= interior; ++j) {
        const double pos = j * step;
        const auto i = static_cast<std::size_t>(pos);
        const double alpha = pos - static_cast<double>(i);
        knots.push_back((1.0 - alpha) * params[i - 1] + alpha * params[std::min(i, params.size() - 1)]);
    }
    return knots;
}

FitResult fit_with_knots(std::span<const Point2> points, std::span<const double> parameters,
                         std::span<const double> interior_knots, int n_control, int degree) {
    FitConfig{n_control, degree}.check();
    if (points.size() < static_cast<std::size_t>(n_control)) {
        std::ostringstream os;
        os << "fitting " << n_control << " control points needs at least " << n_control << " points, got "
           << points.size();
        throw InsufficientData(os.str());
    }
    if (parameters.size() != points.size()) throw InvalidGeometry("parameter count does not match point count");

    // Basis evaluation only depends on the knots, so a zero curve serves as the carrier.
    const auto carrier = make_clamped(std::vector<Point2>(static_cast<std::size_t>(n_control)), degree, interior_knots);

    const Eigen::Index rows = static_cast<Eigen::Index>(points.size());
    const Eigen::Index unknowns = n_control - 2;
    const Point2 first = points.front();
    const Point2 last = points.back();

    Eigen::MatrixXd design(rows, std::max<Eigen::Index>(unknowns, 0));
    Eigen::MatrixXd rhs(rows, 2);
    for (Eigen::Index k = 0; k < rows; ++k) {
        const auto values = basis_values(carrier, parameters[static_cast<std::size_t>(k)]);
        const Point2 r = points[static_cast<std::size_t>(k)] - values.front() * first - values.back() * last;
        rhs(k, 0) = r.x;
        rhs(k, 1) = r.y;
        for (Eigen::Index c = 0; c < unknowns; ++c) design(k, c) = values[static_cast<std::size_t>(c) + 1];
    }

    std::vector<Point2> controls(static_cast<std::size_t>(n_control));
    controls.front() = first;
    controls.back() = last;
    FitResult result{carrier, {parameters.begin(), parameters.end()}, 1.0, {}};

    if (unknowns > 0) {
        for (Eigen::Index c = 0; c < unknowns; ++c) {
            if (design.col(c).squaredNorm() == 0.0) {
                std::ostringstream os;
                os << "rank-deficient fit: no data parameter falls in the support of control point " << c + 1
                   << "; the point layout does not determine it";
                throw NumericalError(os.str());
            }
        }
        const Eigen::MatrixXd normal = design.transpose() * design;
        const Eigen::LLT<Eigen::MatrixXd> llt(normal);
        const double rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
        if (!(rcond > kSingularRcond)) {
            throw NumericalError("rank-deficient fit: normal equations are singular for this point layout");
        }
        result.condition_estimate = 1.0 / rcond;
        if (result.condition_estimate > kConditionWarning) {
            std::ostringstream os;
            os << "ill-conditioned fit: estimated condition number " << result.condition_estimate;
            result.warnings.push_back(os.str());
        }
        const Eigen::MatrixXd solution = llt.solve(design.transpose() * rhs);
        for (Eigen::Index c = 0; c < unknowns; ++c) {
            controls[static_cast<std::size_t>(c) + 1] = Point2{solution(c, 0), solution(c, 1)};
        }
    }
    result.curve = make_clamped(std::move(controls), degree, interior_knots);
    return result;
}

FitResult fit_clamped_bspline(const CenterlinePoints& points, const FitConfig& config) {
    config.check();
    if (points.size() < static_cast<std::size_t>(config.n_control)) {
        std::ostringstream os;
        os << "fitting " << config.n_control << " control points needs at least " << config.n_control
           << " centerline points, got " << points.size();
        throw InsufficientData(os.str());
    }
    auto params = parameterize(points.points, config.parameterization);
    const auto knots = place_interior_knots(params.values, config.n_control, config.degree, config.knot_strategy);
    auto result = fit_with_knots(points.points, params.values, knots, config.n_control, config.degree);
    result.warnings.insert(result.warnings.begin(), params.warnings.begin(), params.warnings.end());
    return result;
}

CenterlinePoints resample(const BSplineCurve& curve, std::size_t count) {
    if (count < 2) throw InsufficientData("resample count must be at least 2");
    CenterlinePoints out;
    out.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = i + 1 == count ? 1.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        out.points.push_back(evaluate(curve, u));
    }
    return out;
}

double init_loss(const CenterlinePoints& pred, const CenterlinePoints& gt) {
    if (pred.size() != gt.size()) {
        std::ostringstream os;
        os << "point count mismatch: predicted " << pred.size() << ", reference " << gt.size();
        throw InvalidGeometry(os.str());
    }
    if (gt.size() == 0) throw InsufficientData("loss over an empty point set");
    return mean_squared_distance(pred.points, gt.points);
}

double paras_loss(const BSplineCurve& pred, const BSplineCurve& gt) {
    if (pred.degree() != gt.degree() || pred.control_count() != gt.control_count()) {
        std::ostringstream os;
        os << "curve structure mismatch: degree " << pred.degree() << "/" << gt.degree() << ", control points "
           << pred.control_count() << "/" << gt.control_count();
        throw InvalidGeometry(os.str());
    }
    double loss = mean_squared_distance(pred.control_points(), gt.control_points());
    const auto a = pred.free_knots();
    const auto b = gt.free_knots();
    if (!a.empty()) {
        double sum = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) sum += (a[j] - b[j]) * (a[j] - b[j]);
        loss += sum / static_cast<double>(a.size());
    }
    return loss;
}

double resample_loss(const BSplineCurve& curve, const CenterlinePoints& gt) {
    if (gt.size() < 2) throw InsufficientData("resample loss needs at least 2 reference points");
    return mean_squared_distance(resample(curve, gt.size()).points, gt.points);
}

double weighted_total(const LossBreakdown& parts, const LossWeights& weights) {
    if (weights.lambda_init < 0 || weights.lambda_paras < 0 || weights.lambda_resample < 0) {
        throw InvalidGeometry("loss weights must be non-negative");
    }
    return weights.lambda_init * parts.init + weights.lambda_paras * parts.paras +
           weights.lambda_resample * parts.resample;
}

CombinedLoss combined_loss(const CenterlinePoints& pred_points, const BSplineCurve& pred_curve,
                           const CenterlinePoints& gt_points, const BSplineCurve& gt_curve,
                           const LossWeights& weights) {
    CombinedLoss out;
    out.parts.init = init_loss(pred_points, gt_points);
    out.parts.paras = paras_loss(pred_curve, gt_curve);
    out.parts.resample = resample_loss(pred_curve, gt_points);
    out.total = weighted_total(out.parts, weights);
    return out;
}

}  // namespace spinecurve
