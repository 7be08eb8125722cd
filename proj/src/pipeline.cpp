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

#include "spinecurve/pipeline.hpp"

namespace spinecurve {

void PipelineConfig::check() const {
    fit.check();
    alpha.check();
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidGeometry("epsilon must lie in (0,1)");
    if (sample_count < 2) throw InvalidGeometry("sample count must be at least 2");
    if (resample_count < 2) throw InvalidGeometry("resample count must be at least 2");
    if (centerline_count < 2) throw InvalidGeometry("centerline count must be at least 2");
}

io::Json to_json(const PipelineConfig& config) {
    io::Json j;
    j["fit"] = io::to_json(config.fit);
    j["epsilon"] = config.epsilon;
    j["sample_count"] = config.sample_count;
    j["resample_count"] = config.resample_count;
    j["centerline_count"] = config.centerline_count;
    j["centerline_smoothing"] = config.centerline_smoothing;
    j["alpha"] = io::to_json(config.alpha)["alpha"];
    j["clean_mask"] = config.clean_mask;
    j["paths"] = {{"input", config.paths.input},
                  {"output", config.paths.output},
                  {"regression", config.paths.regression}};
    return j;
}

PipelineConfig pipeline_config_from_json(const io::Json& j, PipelineConfig base) {
    if (!j.is_object()) throw FormatError("config must be a JSON object");
    try {
        if (j.contains("fit")) base.fit = io::fit_config_from_json(j["fit"], base.fit);
        if (j.contains("epsilon")) base.epsilon = j["epsilon"].get<double>();
        if (j.contains("sample_count")) base.sample_count = j["sample_count"].get<std::size_t>();
        if (j.contains("resample_count")) base.resample_count = j["resample_count"].get<std::size_t>();
        if (j.contains("centerline_count")) base.centerline_count = j["centerline_count"].get<std::size_t>();
        if (j.contains("centerline_smoothing")) {
            base.centerline_smoothing = j["centerline_smoothing"].get<std::size_t>();
        }
        if (j.contains("alpha")) base.alpha = io::weights_from_json(j["alpha"], base.alpha);
        if (j.contains("clean_mask")) base.clean_mask = j["clean_mask"].get<bool>();
        if (j.contains("paths")) {
            const auto& p = j["paths"];
            if (p.contains("input")) base.paths.input = p["input"].get<std::string>();
            if (p.contains("output")) base.paths.output = p["output"].get<std::string>();
            if (p.contains("regression")) base.paths.regression = p["regression"].get<std::string>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("invalid config value: ") + e.what());
    }
    return base;
}

CurveAnalysis analyze_curve(const BSplineCurve& curve, const PipelineConfig& config) {
    CurveAnalysis out;
    out.samples = slopes(curve, config.epsilon, config.sample_count);
    out.angles = cobb_from_slopes(out.samples);
    return out;
}

CenterlineStage centerline_from_mask(const BinaryMask& mask, const PipelineConfig& config) {
    CenterlineStage stage{mask, {}, {}};
    if (config.clean_mask) {
        auto cleaned = clean_mask_detailed(mask);
        stage.mask = std::move(cleaned.mask);
        stage.warnings = std::move(cleaned.warnings);
    }
    auto extracted = extract_centerline_detailed(stage.mask, config.centerline_count, config.centerline_smoothing);
    stage.centerline = std::move(extracted.centerline);
    stage.warnings.insert(stage.warnings.end(), extracted.warnings.begin(), extracted.warnings.end());
    return stage;
}

CurveStage curve_from_centerline(const CenterlinePoints& centerline, const PipelineConfig& config) {
    auto fit = fit_clamped_bspline(centerline, config.fit);
    auto resampled = resample(fit.curve, config.resample_count);
    return CurveStage{std::move(fit), std::move(resampled)};
}

AngleTriple final_angles(const AngleTriple& slope_angles, const std::optional<AngleTriple>& regression,
                         const HybridWeights& alpha) {
    if (!regression) return slope_angles;
    return hybrid_combine(slope_angles, *regression, alpha);
}

}  // namespace spinecurve
