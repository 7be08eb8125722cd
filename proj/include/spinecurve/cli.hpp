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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinecurve/pipeline.hpp"

namespace spinecurve::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kInvalidInput = 1,
    kFileError = 2,       // missing or unreadable input
    kTooFewPoints = 3,    // not enough rows/points for the requested fit
    kEmptyEvaluation = 4, // no matching prediction/ground-truth pairs
};

/// Raised by cmd_eval when the two directories share no file name.
class EmptyEvaluation : public Error {
public:
    explicit EmptyEvaluation(const std::string& message) : Error("empty_evaluation", message) {}
};

struct CommandOutput {
    io::Json json;
    std::vector<std::string> warnings;
};

/// Mask image -> {"points": ...}.
CommandOutput cmd_extract(const std::filesystem::path& mask_path, const PipelineConfig& config);

/// Centerline JSON or mask image -> curve JSON.
CommandOutput cmd_fit(const std::filesystem::path& input, const PipelineConfig& config);

/// Curve JSON, centerline JSON or mask image -> angle JSON. With a
/// regression-angle file the output holds the hybrid angles and the slope
/// triple under "slope_based"; without one the slope triple is returned.
CommandOutput cmd_angles(const std::filesystem::path& input, const PipelineConfig& config,
                         const std::optional<std::filesystem::path>& regression_path);

/// Matches *.json angle files by name and reports per-angle MAE and SMAPE.
CommandOutput cmd_eval(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir);

/// Full command line entry point. Writes JSON results to `out` (or the -o
/// file) and diagnostics to `err`; returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinecurve::cli
