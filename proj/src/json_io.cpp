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

#include "spinecurve/json_io.hpp"

#include <fstream>
#include <sstream>

namespace spinecurve::io {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) throw FormatError(std::string("expected a JSON object with field \"") + key + "\"");
    const auto it = j.find(key);
    if (it == j.end()) throw FormatError(std::string("missing field \"") + key + "\"");
    return *it;
}

double number(const Json& j, const char* what) {
    if (!j.is_number()) throw FormatError(std::string(what) + " must be a number");
    return j.get<double>();
}

std::vector<Point2> points_from_json(const Json& j, const char* what) {
    if (!j.is_array()) throw FormatError(std::string(what) + " must be an array of [x, y] pairs");
    std::vector<Point2> out;
    out.reserve(j.size());
    for (const auto& p : j) out.push_back(point_from_json(p));
    return out;
}

Json points_to_json(std::span<const Point2> points) {
    Json arr = Json::array();
    for (const auto& p : points) arr.push_back(to_json(p));
    return arr;
}

Json provenance_json(const Provenance& p) {
    if (!p) return nullptr;
    return Json::array({p->first, p->second});
}

Provenance provenance_from_json(const Json& j) {
    if (j.is_null()) return std::nullopt;
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() || !j[1].is_number_unsigned()) {
        throw FormatError("provenance entries must be [i, j] index pairs");
    }
    return std::make_pair(j[0].get<std::size_t>(), j[1].get<std::size_t>());
}

}  // namespace

Json to_json(const Point2& p) { return Json::array({p.x, p.y}); }

Point2 point_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw FormatError("points must be [x, y] number pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(const BSplineCurve& curve) {
    Json j;
    j["degree"] = curve.degree();
    j["control_points"] = points_to_json(curve.control_points());
    j["knots"] = Json(std::vector<double>(curve.knots().begin(), curve.knots().end()));
    return j;
}

CurveDefinition curve_definition_from_json(const Json& j) {
    CurveDefinition def;
    const auto& degree = field(j, "degree");
    if (!degree.is_number_integer()) throw FormatError("degree must be an integer");
    def.degree = degree.get<int>();
    def.control_points = points_from_json(field(j, "control_points"), "control_points");
    const auto& knots = field(j, "knots");
    if (!knots.is_array()) throw FormatError("knots must be an array of numbers");
    for (const auto& k : knots) def.knots.push_back(number(k, "knot"));
    return def;
}

BSplineCurve curve_from_json(const Json& j) { return BSplineCurve(curve_definition_from_json(j)); }

Json to_json(const CenterlinePoints& points) { return Json{{"points", points_to_json(points.points)}}; }

CenterlinePoints centerline_from_json(const Json& j) {
    return CenterlinePoints{points_from_json(field(j, "points"), "points")};
}

Json to_json(const ContourAnnotation& contour) {
    return Json{{"left", points_to_json(contour.left)}, {"right", points_to_json(contour.right)}};
}

ContourAnnotation contour_from_json(const Json& j) {
    return ContourAnnotation{points_from_json(field(j, "left"), "left"), points_from_json(field(j, "right"), "right")};
}

Json to_json(const AngleTriple& angles) {
    Json j{{"mt", angles.mt}, {"pt", angles.pt}, {"tl", angles.tl}};
    if (angles.mt_from || angles.pt_from || angles.tl_from) {
        j["provenance"] = Json{{"mt", provenance_json(angles.mt_from)},
                              {"pt", provenance_json(angles.pt_from)},
                              {"tl", provenance_json(angles.tl_from)}};
    }
    return j;
}

AngleTriple angles_from_json(const Json& j) {
    AngleTriple a;
    a.mt = number(field(j, "mt"), "mt");
    a.pt = number(field(j, "pt"), "pt");
    a.tl = number(field(j, "tl"), "tl");
    if (const auto it = j.find("provenance"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) throw FormatError("provenance must be an object");
        if (it->contains("mt")) a.mt_from = provenance_from_json((*it)["mt"]);
        if (it->contains("pt")) a.pt_from = provenance_from_json((*it)["pt"]);
        if (it->contains("tl")) a.tl_from = provenance_from_json((*it)["tl"]);
    }
    return a;
}

Json to_json(const HybridWeights& weights) {
    return Json{{"alpha", {{"mt", weights.mt}, {"pt", weights.pt}, {"tl", weights.tl}}}};
}

HybridWeights weights_from_json(const Json& j, HybridWeights base) {
    const Json& inner = j.is_object() && j.contains("alpha") ? j["alpha"] : j;
    if (!inner.is_object()) throw FormatError("alpha must be an object with mt/pt/tl");
    if (inner.contains("mt")) base.mt = number(inner["mt"], "alpha.mt");
    if (inner.contains("pt")) base.pt = number(inner["pt"], "alpha.pt");
    if (inner.contains("tl")) base.tl = number(inner["tl"], "alpha.tl");
    return base;
}

const char* to_string(KnotStrategy s) noexcept { return s == KnotStrategy::Uniform ? "uniform" : "averaging"; }

const char* to_string(Parameterization p) noexcept {
    return p == Parameterization::Uniform ? "uniform" : "chord_length";
}

KnotStrategy knot_strategy_from_string(const std::string& s) {
    if (s == "uniform") return KnotStrategy::Uniform;
    if (s == "averaging") return KnotStrategy::Averaging;
    throw FormatError("unknown knot strategy \"" + s + "\" (expected uniform or averaging)");
}

Parameterization parameterization_from_string(const std::string& s) {
    if (s == "uniform") return Parameterization::Uniform;
    if (s == "chord_length") return Parameterization::ChordLength;
    throw FormatError("unknown parameterization \"" + s + "\" (expected uniform or chord_length)");
}

Json to_json(const FitConfig& config) {
    return Json{{"n_control", config.n_control},
                {"degree", config.degree},
                {"knot_strategy", to_string(config.knot_strategy)},
                {"parameterization", to_string(config.parameterization)}};
}

FitConfig fit_config_from_json(const Json& j, FitConfig base) {
    if (!j.is_object()) throw FormatError("fit config must be an object");
    if (j.contains("n_control")) base.n_control = j["n_control"].get<int>();
    if (j.contains("degree")) base.degree = j["degree"].get<int>();
    if (j.contains("knot_strategy")) base.knot_strategy = knot_strategy_from_string(j["knot_strategy"].get<std::string>());
    if (j.contains("parameterization")) {
        base.parameterization = parameterization_from_string(j["parameterization"].get<std::string>());
    }
    return base;
}

Json to_json(const std::vector<SlopeSample>& samples) {
    Json arr = Json::array();
    for (const auto& s : samples) {
        arr.push_back(Json{{"index", s.index}, {"u", s.u}, {"position", to_json(s.position)}, {"slope", s.slope}});
    }
    return arr;
}

Json to_json(const BinaryMask& mask) {
    Json rows = Json::array();
    for (int y = 0; y < mask.height(); ++y) {
        std::string row(static_cast<std::size_t>(mask.width()), '0');
        for (int x = 0; x < mask.width(); ++x) {
            if (mask.at(x, y)) row[static_cast<std::size_t>(x)] = '1';
        }
        rows.push_back(std::move(row));
    }
    return Json{{"width", mask.width()}, {"height", mask.height()}, {"rows", std::move(rows)}};
}

BinaryMask mask_from_json(const Json& j) {
    const auto& w = field(j, "width");
    const auto& h = field(j, "height");
    if (!w.is_number_integer() || !h.is_number_integer()) throw FormatError("mask width/height must be integers");
    const int width = w.get<int>();
    const int height = h.get<int>();
    const auto& rows = field(j, "rows");
    if (width <= 0 || height <= 0) throw FormatError("mask width/height must be positive");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(height)) {
        throw FormatError("mask rows must be an array of " + std::to_string(height) + " strings");
    }
    BinaryMask mask(width, height);
    for (int y = 0; y < height; ++y) {
        const auto& row = rows[static_cast<std::size_t>(y)];
        if (!row.is_string() || row.get_ref<const std::string&>().size() != static_cast<std::size_t>(width)) {
            throw FormatError("mask row " + std::to_string(y) + " must be a string of " + std::to_string(width) +
                              " '0'/'1' characters");
        }
        const auto& text = row.get_ref<const std::string&>();
        for (int x = 0; x < width; ++x) {
            const char c = text[static_cast<std::size_t>(x)];
            if (c != '0' && c != '1') throw FormatError("mask rows may only contain '0' and '1'");
            mask.set(x, y, c == '1');
        }
    }
    return mask;
}

Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
}

Json read_file(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw IoError("file not found: " + path.string(), true);
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    try {
        return parse(os.str());
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path, std::ios::binary);
    out << dump(j);
    if (!out) throw IoError("cannot write " + path.string());
}

}  // namespace spinecurve::io
