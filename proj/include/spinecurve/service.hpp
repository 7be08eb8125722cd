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

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>

#include "spinecurve/pipeline.hpp"

namespace httplib {
class Server;
}

namespace spinecurve {

/// One annotation being edited. Every derived field is recomputed from
/// `contour` whenever it changes: contour -> mask -> centerline -> fit ->
/// angles.
struct AnnotationSession {
    std::string id;
    std::uint64_t version = 0;
    int width = 0;
    int height = 0;
    ContourAnnotation contour;
    CenterlinePoints centerline;
    std::optional<BSplineCurve> curve;
    CenterlinePoints resampled;
    CurveAnalysis analysis;
    std::optional<AngleTriple> gt_angles;
    std::vector<std::string> warnings;
};

/// Recomputes every derived field of `session` for `contour`.
void rebuild_session(AnnotationSession& session, const ContourAnnotation& contour, const PipelineConfig& config);

io::Json session_to_json(const AnnotationSession& session);
/// Contour, mask, curve, angles and GT angles; accepted back by create_session.
io::Json export_bundle(const AnnotationSession& session);

struct ServiceResponse {
    int status = 200;
    io::Json body;
};

/// Transport-independent request handlers backing the HTTP API. Sessions
/// live in memory; each is guarded by its own mutex (last write wins) and
/// carries a version that increments on every effective change.
class AnnotationService {
public:
    explicit AnnotationService(PipelineConfig config);

    /// Body: {"contour": {...}, "image": {"width", "height"}} or
    /// {"mask": {"width", "height", "rows"}}; optional "gt_angles".
    ServiceResponse create_session(const std::string& body);
    /// Encoded PNG or PGM mask upload.
    ServiceResponse create_session_from_image(std::span<const std::uint8_t> bytes);
    ServiceResponse get_session(const std::string& id) const;
    ServiceResponse put_contour(const std::string& id, const std::string& body);
    ServiceResponse put_gt_angles(const std::string& id, const std::string& body);
    ServiceResponse export_session(const std::string& id) const;

    /// {"points": [[x,y],...], "fit": {...}?} -> fitted curve and resampled points.
    ServiceResponse fit(const std::string& body) const;
    /// {"curve": {...}} | {"points": [...]} | {"slopes": [...]}, with optional
    /// "regression" triple and "alpha" weights.
    ServiceResponse angles(const std::string& body) const;

    const PipelineConfig& config() const noexcept { return config_; }

private:
    struct Slot {
        mutable std::mutex mutex;
        AnnotationSession session;
    };

    std::shared_ptr<Slot> find(const std::string& id) const;
    ServiceResponse add_session(AnnotationSession session);

    template <typename F>
    ServiceResponse guarded(F&& f) const;

    PipelineConfig config_;
    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Slot>> sessions_;
    std::uint64_t next_id_ = 1;
};

/// Registers the HTTP routes on `server`. When `ui_dir` is non-empty its
/// files are served under /ui.
void mount_routes(httplib::Server& server, AnnotationService& service, const std::string& ui_dir = {});

/// Blocking HTTP server on host:port.
int serve(const PipelineConfig& config, const std::string& host, int port, const std::string& ui_dir);

}  // namespace spinecurve
