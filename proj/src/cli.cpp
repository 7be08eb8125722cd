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

#include "spinecurve/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>

#include <CLI11.hpp>

#include "spinecurve/service.hpp"

namespace spinecurve::cli {

namespace fs = std::filesystem;

namespace {

bool is_json_path(const fs::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".json";
}

struct LoadedCenterline {
    CenterlinePoints points;
    std::vector<std::string> warnings;
};

// Centerline from a centerline JSON, or extracted from a mask image.
LoadedCenterline load_centerline(const fs::path& input, const PipelineConfig& config) {
    if (is_json_path(input)) return {io::centerline_from_json(io::read_file(input)), {}};
    auto stage = centerline_from_mask(load_mask(input), config);
    return {std::move(stage.centerline), std::move(stage.warnings)};
}

std::vector<std::string> json_names(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("file not found: " + dir.string(), true);
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_json_path(entry.path())) names.push_back(entry.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

int exit_code_for(const Error& e) {
    if (e.kind() == "not_found" || e.kind() == "io") return kFileError;
    if (e.kind() == "insufficient_data") return kTooFewPoints;
    if (e.kind() == "empty_evaluation") return kEmptyEvaluation;
    return kInvalidInput;
}

}  // namespace

CommandOutput cmd_extract(const fs::path& mask_path, const PipelineConfig& config) {
    auto stage = centerline_from_mask(load_mask(mask_path), config);
    return {io::to_json(stage.centerline), std::move(stage.warnings)};
}

CommandOutput cmd_fit(const fs::path& input, const PipelineConfig& config) {
    auto centerline = load_centerline(input, config);
    auto fit = fit_clamped_bspline(centerline.points, config.fit);
    centerline.warnings.insert(centerline.warnings.end(), fit.warnings.begin(), fit.warnings.end());
    return {io::to_json(fit.curve), std::move(centerline.warnings)};
}

CommandOutput cmd_angles(const fs::path& input, const PipelineConfig& config,
                         const std::optional<fs::path>& regression_path) {
    CommandOutput out;
    std::optional<BSplineCurve> curve;
    if (is_json_path(input)) {
        const auto j = io::read_file(input);
        if (j.is_object() && j.contains("control_points")) curve = io::curve_from_json(j);
    }
    if (!curve) {
        auto centerline = load_centerline(input, config);
        auto fit = fit_clamped_bspline(centerline.points, config.fit);
        out.warnings = std::move(centerline.warnings);
        out.warnings.insert(out.warnings.end(), fit.warnings.begin(), fit.warnings.end());
        curve = std::move(fit.curve);
    }
    const auto analysis = analyze_curve(*curve, config);
    std::optional<AngleTriple> regression;
    if (regression_path) {
        regression = io::angles_from_json(io::read_file(*regression_path));
        regression->check();
    }
    out.json = io::to_json(final_angles(analysis.angles, regression, config.alpha));
    if (regression) out.json["slope_based"] = io::to_json(analysis.angles);
    return out;
}

CommandOutput cmd_eval(const fs::path& pred_dir, const fs::path& gt_dir) {
    const auto pred = json_names(pred_dir);
    const auto gt = json_names(gt_dir);
    std::vector<std::string> common;
    std::set_intersection(pred.begin(), pred.end(), gt.begin(), gt.end(), std::back_inserter(common));

    CommandOutput out;
    std::vector<std::string> unmatched;
    for (const auto* list : {&pred, &gt}) {
        for (const auto& name : *list) {
            if (!std::binary_search(common.begin(), common.end(), name)) {
                const auto where = (list == &pred ? pred_dir : gt_dir) / name;
                unmatched.push_back(where.string());
                out.warnings.push_back("no counterpart for " + where.string() + "; excluded");
            }
        }
    }
    if (common.empty()) throw EmptyEvaluation("no matching angle files between " + pred_dir.string() + " and " + gt_dir.string());

    std::vector<EvalRecord> records;
    for (const auto& name : common) {
        records.push_back({name, io::angles_from_json(io::read_file(pred_dir / name)),
                           io::angles_from_json(io::read_file(gt_dir / name))});
        records.back().predicted.check();
        records.back().ground_truth.check();
    }
    out.json["count"] = records.size();
    out.json["records"] = common;
    out.json["unmatched"] = unmatched;
    out.json["mae"] = {{"mt", mae(records, AngleKind::MT)},
                       {"pt", mae(records, AngleKind::PT)},
                       {"tl", mae(records, AngleKind::TL)}};
    out.json["smape"] = smape(records);
    return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spinal curvature from binary spine masks via clamped B-spline centerlines"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string output_path;
    double alpha_mt = 0, alpha_pt = 0, alpha_tl = 0, epsilon = 0;
    int controls = 0, degree = 0;
    std::size_t samples = 0, resamples = 0, centerline_points = 0, smoothing = 0;
    std::string knots, parameterization;
    bool no_clean = false;

    app.add_option("--config", config_path, "JSON pipeline config");
    app.add_option("-o,--output", output_path, "write the JSON result here instead of stdout");
    auto* o_alpha_mt = app.add_option("--alpha-mt", alpha_mt, "hybrid weight for MT");
    auto* o_alpha_pt = app.add_option("--alpha-pt", alpha_pt, "hybrid weight for PT");
    auto* o_alpha_tl = app.add_option("--alpha-tl", alpha_tl, "hybrid weight for TL");
    auto* o_epsilon = app.add_option("--epsilon", epsilon, "parameter offset for slope chords");
    auto* o_controls = app.add_option("--controls", controls, "number of control points");
    auto* o_degree = app.add_option("--degree", degree, "spline degree");
    auto* o_samples = app.add_option("--samples", samples, "equal-arc-length slope samples");
    auto* o_resamples = app.add_option("--resamples", resamples, "uniform-parameter resample count");
    auto* o_centerline = app.add_option("--centerline-points", centerline_points, "points extracted from a mask");
    auto* o_smoothing = app.add_option("--smoothing", smoothing, "centerline smoothing half-window in rows (0 = raw)");
    auto* o_knots = app.add_option("--knots", knots, "interior knot placement")->check(CLI::IsMember({"uniform", "averaging"}));
    auto* o_param = app.add_option("--parameterization", parameterization, "fitting parameters")
                        ->check(CLI::IsMember({"uniform", "chord_length"}));
    app.add_flag("--no-clean", no_clean, "skip largest-component + closing cleanup of masks");

    std::string input, regression, pred_dir, gt_dir, resampled_out, host = "127.0.0.1", ui_dir;
    int port = 8080;

    auto* extract = app.add_subcommand("extract", "mask -> centerline JSON");
    extract->add_option("mask", input, "mask image (PNG or PGM)")->required();

    auto* fit = app.add_subcommand("fit", "centerline JSON or mask -> curve JSON");
    fit->add_option("input", input, "centerline JSON or mask image")->required();
    fit->add_option("--resampled-out", resampled_out, "also write the uniformly resampled points here");

    auto* angles = app.add_subcommand("angles", "curve JSON, centerline JSON or mask -> angle JSON");
    angles->add_option("input", input, "curve JSON, centerline JSON or mask image")->required();
    angles->add_option("--regression", regression, "externally regressed angle JSON for the hybrid combination");

    auto* eval = app.add_subcommand("eval", "compare predicted and ground-truth angle directories");
    eval->add_option("pred_dir", pred_dir)->required();
    eval->add_option("gt_dir", gt_dir)->required();

    auto* serve_cmd = app.add_subcommand("serve", "run the annotation HTTP service");
    serve_cmd->add_option("--port", port, "TCP port");
    serve_cmd->add_option("--host", host, "bind address");
    serve_cmd->add_option("--ui-dir", ui_dir, "static files served under /ui");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        // Precedence: flags > config file > defaults.
        PipelineConfig config;
        if (!config_path.empty()) config = pipeline_config_from_json(io::read_file(config_path));
        if (*o_alpha_mt) config.alpha.mt = alpha_mt;
        if (*o_alpha_pt) config.alpha.pt = alpha_pt;
        if (*o_alpha_tl) config.alpha.tl = alpha_tl;
        if (*o_epsilon) config.epsilon = epsilon;
        if (*o_controls) config.fit.n_control = controls;
        if (*o_degree) config.fit.degree = degree;
        if (*o_samples) config.sample_count = samples;
        if (*o_resamples) config.resample_count = resamples;
        if (*o_centerline) config.centerline_count = centerline_points;
        if (*o_smoothing) config.centerline_smoothing = smoothing;
        if (*o_knots) config.fit.knot_strategy = io::knot_strategy_from_string(knots);
        if (*o_param) config.fit.parameterization = io::parameterization_from_string(parameterization);
        if (no_clean) config.clean_mask = false;
        if (output_path.empty()) output_path = config.paths.output;
        config.check();

        if (*serve_cmd) return serve(config, host, port, ui_dir);

        if (input.empty()) input = config.paths.input;
        if (regression.empty()) regression = config.paths.regression;

        CommandOutput result;
        if (*extract) {
            result = cmd_extract(input, config);
        } else if (*fit) {
            result = cmd_fit(input, config);
            if (!resampled_out.empty()) {
                io::write_file(resampled_out, io::to_json(resample(io::curve_from_json(result.json), config.resample_count)));
            }
        } else if (*angles) {
            result = cmd_angles(input, config,
                                regression.empty() ? std::nullopt : std::optional<fs::path>(regression));
        } else {
            result = cmd_eval(pred_dir, gt_dir);
        }
        for (const auto& w : result.warnings) err << "warning: " << w << "\n";
        if (output_path.empty()) {
            out << io::dump(result.json);
        } else {
            io::write_file(output_path, result.json);
        }
        return kOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }
}

}  // namespace spinecurve::cli
