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

#include "spinecurve/service.hpp"

#include <iostream>

#include <httplib.h>

namespace spinecurve {

namespace {

class SessionNotFound : public Error {
public:
    explicit SessionNotFound(const std::string& id) : Error("not_found", "unknown session " + id) {}
};

io::Json error_body(const std::string& error, const std::string& detail) {
    return io::Json{{"error", error}, {"detail", detail}};
}

io::Json parse_body(const std::string& body) {
    auto j = io::parse(body);
    if (!j.is_object()) throw FormatError("request body must be a JSON object");
    return j;
}

ContourAnnotation contour_in(const io::Json& j) {
    return io::contour_from_json(j.contains("contour") ? j["contour"] : j);
}

}  // namespace

void rebuild_session(AnnotationSession& session, const ContourAnnotation& contour, const PipelineConfig& config) {
    const auto mask = contour_to_mask(contour, session.width, session.height);
    auto extracted = extract_centerline_detailed(mask, config.centerline_count, config.centerline_smoothing);
    auto stage = curve_from_centerline(extracted.centerline, config);
    auto analysis = analyze_curve(stage.fit.curve, config);

    // Commit only after every step succeeded.
    session.contour = contour;
    session.centerline = std::move(extracted.centerline);
    session.curve = std::move(stage.fit.curve);
    session.resampled = std::move(stage.resampled);
    session.analysis = std::move(analysis);
    session.warnings = std::move(extracted.warnings);
    session.warnings.insert(session.warnings.end(), stage.fit.warnings.begin(), stage.fit.warnings.end());
}

io::Json session_to_json(const AnnotationSession& s) {
    io::Json j;
    j["id"] = s.id;
    j["version"] = s.version;
    j["image"] = {{"width", s.width}, {"height", s.height}};
    j["contour"] = io::to_json(s.contour);
    j["centerline"] = io::to_json(s.centerline);
    j["curve"] = s.curve ? io::to_json(*s.curve) : io::Json(nullptr);
    j["resampled"] = io::to_json(s.resampled);
    j["samples"] = io::to_json(s.analysis.samples);
    j["angles"] = io::to_json(s.analysis.angles);
    j["gt_angles"] = s.gt_angles ? io::to_json(*s.gt_angles) : io::Json(nullptr);
    j["warnings"] = s.warnings;
    return j;
}

io::Json export_bundle(const AnnotationSession& s) {
    io::Json j;
    j["image"] = {{"width", s.width}, {"height", s.height}};
    j["contour"] = io::to_json(s.contour);
    j["mask"] = io::to_json(contour_to_mask(s.contour, s.width, s.height));
    j["curve"] = s.curve ? io::to_json(*s.curve) : io::Json(nullptr);
    j["angles"] = io::to_json(s.analysis.angles);
    j["gt_angles"] = s.gt_angles ? io::to_json(*s.gt_angles) : io::Json(nullptr);
    return j;
}

AnnotationService::AnnotationService(PipelineConfig config) : config_(std::move(config)) { config_.check(); }

template <typename F>
ServiceResponse AnnotationService::guarded(F&& f) const {
    try {
        return f();
    } catch (const SessionNotFound& e) {
        return {404, error_body("not found", e.what())};
    } catch (const FormatError& e) {
        return {400, error_body("bad request", e.what())};
    } catch (const IoError& e) {
        return {400, error_body("bad request", e.what())};
    } catch (const nlohmann::json::exception& e) {
        return {400, error_body("bad request", e.what())};
    } catch (const Error& e) {
        return {422, error_body("invalid geometry", e.what())};
    }
}

std::shared_ptr<AnnotationService::Slot> AnnotationService::find(const std::string& id) const {
    std::shared_lock lock(sessions_mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw SessionNotFound(id);
    return it->second;
}

ServiceResponse AnnotationService::add_session(AnnotationSession session) {
    auto slot = std::make_shared<Slot>();
    session.version = 1;
    {
        std::unique_lock lock(sessions_mutex_);
        session.id = "s" + std::to_string(next_id_++);
        slot->session = std::move(session);
        sessions_.emplace(slot->session.id, slot);
    }
    return {200, session_to_json(slot->session)};
}

ServiceResponse AnnotationService::create_session(const std::string& body) {
    return guarded([&]() -> ServiceResponse {
        const auto j = parse_body(body);
        AnnotationSession session;
        ContourAnnotation contour;
        if (j.contains("contour")) {
            const auto& image = j.contains("image") ? j["image"] : j;
            if (!image.contains("width") || !image.contains("height")) {
                throw FormatError("contour sessions need image width and height");
            }
            session.width = image["width"].get<int>();
            session.height = image["height"].get<int>();
            contour = io::contour_from_json(j["contour"]);
        } else if (j.contains("mask")) {
            const auto mask = config_.clean_mask ? clean_mask(io::mask_from_json(j["mask"])) : io::mask_from_json(j["mask"]);
            session.width = mask.width();
            session.height = mask.height();
            contour = mask_to_contour(mask);
        } else {
            throw FormatError("request needs a \"contour\" or a \"mask\"");
        }
        if (j.contains("gt_angles") && !j["gt_angles"].is_null()) {
            session.gt_angles = io::angles_from_json(j["gt_angles"]);
            session.gt_angles->check();
        }
        rebuild_session(session, contour, config_);
        return add_session(std::move(session));
    });
}

ServiceResponse AnnotationService::create_session_from_image(std::span<const std::uint8_t> bytes) {
    return guarded([&]() -> ServiceResponse {
        auto mask = decode_mask(bytes);
        if (config_.clean_mask) mask = clean_mask(mask);
        AnnotationSession session;
        session.width = mask.width();
        session.height = mask.height();
        rebuild_session(session, mask_to_contour(mask), config_);
        return add_session(std::move(session));
    });
}

ServiceResponse AnnotationService::get_session(const std::string& id) const {
    return guarded([&]() -> ServiceResponse {
        const auto slot = find(id);
        std::lock_guard lock(slot->mutex);
        return {200, session_to_json(slot->session)};
    });
}

ServiceResponse AnnotationService::put_contour(const std::string& id, const std::string& body) {
    return guarded([&]() -> ServiceResponse {
        const auto slot = find(id);
        const auto contour = contour_in(parse_body(body));
        std::lock_guard lock(slot->mutex);
        auto& session = slot->session;
        if (contour != session.contour) {
            AnnotationSession next = session;
            rebuild_session(next, contour, config_);
            next.version = session.version + 1;
            session = std::move(next);
        }
        return {200, session_to_json(session)};
    });
}

ServiceResponse AnnotationService::put_gt_angles(const std::string& id, const std::string& body) {
    return guarded([&]() -> ServiceResponse {
        const auto slot = find(id);
        const auto j = parse_body(body);
        auto angles = io::angles_from_json(j.contains("gt_angles") ? j["gt_angles"] : j);
        angles.check();
        std::lock_guard lock(slot->mutex);
        auto& session = slot->session;
        const bool changed = !session.gt_angles || io::to_json(*session.gt_angles) != io::to_json(angles);
        if (changed) {
            session.gt_angles = angles;
            ++session.version;
        }
        return {200, session_to_json(session)};
    });
}

ServiceResponse AnnotationService::export_session(const std::string& id) const {
    return guarded([&]() -> ServiceResponse {
        const auto slot = find(id);
        std::lock_guard lock(slot->mutex);
        return {200, export_bundle(slot->session)};
    });
}

ServiceResponse AnnotationService::fit(const std::string& body) const {
    return guarded([&]() -> ServiceResponse {
        const auto j = parse_body(body);
        PipelineConfig config = config_;
        if (j.contains("fit")) config.fit = io::fit_config_from_json(j["fit"], config.fit);
        config.check();
        const auto stage = curve_from_centerline(io::centerline_from_json(j), config);
        return {200, io::Json{{"curve", io::to_json(stage.fit.curve)},
                              {"parameters", stage.fit.parameters},
                              {"resampled", io::to_json(stage.resampled)},
                              {"warnings", stage.fit.warnings}}};
    });
}

ServiceResponse AnnotationService::angles(const std::string& body) const {
    return guarded([&]() -> ServiceResponse {
        const auto j = parse_body(body);
        PipelineConfig config = config_;
        if (j.contains("alpha")) config.alpha = io::weights_from_json(j["alpha"], config.alpha);
        if (j.contains("epsilon")) config.epsilon = j["epsilon"].get<double>();
        config.check();

        io::Json out;
        AngleTriple slope_angles;
        if (j.contains("slopes")) {
            const auto s = j["slopes"].get<std::vector<double>>();
            slope_angles = cobb_from_slopes(std::span<const double>(s));
        } else {
            const auto curve = j.contains("curve") ? io::curve_from_json(j["curve"])
                                                   : curve_from_centerline(io::centerline_from_json(j), config).fit.curve;
            const auto analysis = analyze_curve(curve, config);
            slope_angles = analysis.angles;
            out["curve"] = io::to_json(curve);
            out["samples"] = io::to_json(analysis.samples);
        }
        std::optional<AngleTriple> regression;
        if (j.contains("regression") && !j["regression"].is_null()) {
            regression = io::angles_from_json(j["regression"]);
            regression->check();
        }
        out["slope_angles"] = io::to_json(slope_angles);
        out["angles"] = io::to_json(final_angles(slope_angles, regression, config.alpha));
        return {200, out};
    });
}

void mount_routes(httplib::Server& server, AnnotationService& service, const std::string& ui_dir) {
    auto reply = [](httplib::Response& res, const ServiceResponse& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json; charset=utf-8");
    };
    server.Post("/sessions", [&service, reply](const httplib::Request& req, httplib::Response& res) {
        const auto type = req.get_header_value("Content-Type");
        if (type.rfind("image/", 0) == 0 || type == "application/octet-stream") {
            const std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(req.body.data()),
                                                      req.body.size());
            reply(res, service.create_session_from_image(bytes));
        } else {
            reply(res, service.create_session(req.body));
        }
    });
    server.Get(R"(/sessions/([A-Za-z0-9_-]+))", [&service, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.get_session(req.matches[1]));
    });
    server.Put(R"(/sessions/([A-Za-z0-9_-]+)/contour)",
               [&service, reply](const httplib::Request& req, httplib::Response& res) {
                   reply(res, service.put_contour(req.matches[1], req.body));
               });
    server.Put(R"(/sessions/([A-Za-z0-9_-]+)/gt-angles)",
               [&service, reply](const httplib::Request& req, httplib::Response& res) {
                   reply(res, service.put_gt_angles(req.matches[1], req.body));
               });
    server.Get(R"(/sessions/([A-Za-z0-9_-]+)/export)",
               [&service, reply](const httplib::Request& req, httplib::Response& res) {
                   reply(res, service.export_session(req.matches[1]));
               });
    server.Post("/fit", [&service, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.fit(req.body));
    });
    server.Post("/angles", [&service, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.angles(req.body));
    });
    if (!ui_dir.empty() && !server.set_mount_point("/ui", ui_dir)) {
        std::cerr << "warning: UI directory " << ui_dir << " not found; /ui disabled\n";
    }
}

int serve(const PipelineConfig& config, const std::string& host, int port, const std::string& ui_dir) {
    AnnotationService service(config);
    httplib::Server server;
    mount_routes(server, service, ui_dir);
    std::cerr << "listening on http://" << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
        std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
        return 1;
    }
    return 0;
}

}  // namespace spinecurve
