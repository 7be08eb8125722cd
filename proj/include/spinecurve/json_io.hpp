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

// JSON encodings of the domain types. Decoders throw FormatError on schema
// violations; geometric validity is left to the consuming constructors.
//
//   curve       {"degree": 3, "control_points": [[x,y],...], "knots": [...]}
//   centerline  {"points": [[x,y],...]}
//   contour     {"left": [[x,y] x17], "right": [[x,y] x17]}
//   angles      {"mt": .., "pt": .., "tl": .., "provenance": {"mt": [i,j], ...}}
//   weights     {"alpha": {"mt": .., "pt": .., "tl": ..}}
//   mask        {"width": W, "height": H, "rows": ["0011..", ...]}

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "spinecurve/bspline.hpp"
#include "spinecurve/cobb.hpp"
#include "spinecurve/fitting.hpp"
#include "spinecurve/mask.hpp"

namespace spinecurve::io {

using Json = nlohmann::json;

Json to_json(const Point2& p);
Point2 point_from_json(const Json& j);

Json to_json(const BSplineCurve& curve);
CurveDefinition curve_definition_from_json(const Json& j);
/// Decodes and validates; throws InvalidGeometry for structurally bad curves.
BSplineCurve curve_from_json(const Json& j);

Json to_json(const CenterlinePoints& points);
CenterlinePoints centerline_from_json(const Json& j);

Json to_json(const ContourAnnotation& contour);
ContourAnnotation contour_from_json(const Json& j);

Json to_json(const AngleTriple& angles);
AngleTriple angles_from_json(const Json& j);

Json to_json(const HybridWeights& weights);
/// Accepts either {"alpha": {...}} or the inner object; missing keys keep `base`.
HybridWeights weights_from_json(const Json& j, HybridWeights base = {});

Json to_json(const FitConfig& config);
FitConfig fit_config_from_json(const Json& j, FitConfig base = {});

Json to_json(const std::vector<SlopeSample>& samples);

Json to_json(const BinaryMask& mask);
BinaryMask mask_from_json(const Json& j);

const char* to_string(KnotStrategy s) noexcept;
const char* to_string(Parameterization p) noexcept;
KnotStrategy knot_strategy_from_string(const std::string& s);
Parameterization parameterization_from_string(const std::string& s);

/// Parses text, throwing FormatError with the parser's position on failure.
Json parse(const std::string& text);
/// Reads and parses a file; IoError(not_found) when missing.
Json read_file(const std::filesystem::path& path);
/// Pretty-printed (2-space indent) with a trailing newline. Object keys are
/// sorted and doubles use the shortest round-trip representation, so equal
/// values always produce identical bytes.
std::string dump(const Json& j);
void write_file(const std::filesystem::path& path, const Json& j);

}  // namespace spinecurve::io
