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

#include <optional>
#include <string>
#include <vector>

#include "spinecurve/cobb.hpp"
#include "spinecurve/fitting.hpp"
#include "spinecurve/json_io.hpp"
#include "spinecurve/mask.hpp"

namespace spinecurve {

/// Settings for the mask -> centerline -> curve -> angles chain. Defaults:
/// cubic, 10 control points (14 knots), epsilon 5e-2, 17 slope samples,
/// 34 resampled points, 17 centerline points from run midpoints smoothed
/// over 6 rows either side.
struct PipelineConfig {
    FitConfig fit;
    double epsilon = kDefaultEpsilon;
    std::size_t sample_count = kVertebraSamples;
    std::size_t resample_count = 34;
    std::size_t centerline_count = 17;
    std::size_t centerline_smoothing = 6;  // rows either side; 0 keeps raw run midpoints
    HybridWeights alpha;
    bool clean_mask = true;

    struct Paths {
        std::string input;
        std::string output;
        std::string regression;
    } paths;

    void check() const;
};

io::Json to_json(const PipelineConfig& config);
/// Keys absent from `j` keep the values of `base`.
PipelineConfig pipeline_config_from_json(const io::Json& j, PipelineConfig base = {});

struct CurveAnalysis {
    std::vector<SlopeSample> samples;
    AngleTriple angles;  // slope based
};

CurveAnalysis analyze_curve(const BSplineCurve& curve, const PipelineConfig& config);

struct CenterlineStage {
    BinaryMask mask;  // after cleanup (if enabled)
    CenterlinePoints centerline;
    std::vector<std::string> warnings;
};

CenterlineStage centerline_from_mask(const BinaryMask& mask, const PipelineConfig& config);

struct CurveStage {
    FitResult fit;
    CenterlinePoints resampled;
};

CurveStage curve_from_centerline(const CenterlinePoints& centerline, const PipelineConfig& config);

/// Final angles: the slope triple alone, or the hybrid combination when
/// regression angles are supplied.
AngleTriple final_angles(const AngleTriple& slope_angles, const std::optional<AngleTriple>& regression,
                         const HybridWeights& alpha);

}  // namespace spinecurve
