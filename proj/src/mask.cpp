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

#include "spinecurve/mask.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace spinecurve {

BinaryMask::BinaryMask(int width, int height)
    : BinaryMask(width, height,
                 std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                           static_cast<std::size_t>(std::max(height, 0)))) {}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width <= 0 || height <= 0) throw InvalidGeometry("mask dimensions must be positive");
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw InvalidGeometry("mask data size does not match dimensions");
    }
    for (auto& v : data_) v = v ? 1 : 0;
}

std::size_t BinaryMask::foreground_count() const noexcept {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

// ---------------------------------------------------------------------------
// cleanup

namespace {

// Labels 8-connected foreground components; returns label per pixel (0 =
// background) and the size of each label (index 0 unused).
std::pair<std::vector<int>, std::vector<std::size_t>> label_components(const BinaryMask& mask) {
    const int w = mask.width();
    const int h = mask.height();
    std::vector<int> labels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
    std::vector<std::size_t> sizes{0};
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto idx = static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x);
            if (!mask.at(x, y) || labels[idx] != 0) continue;
            const int label = static_cast<int>(sizes.size());
            std::size_t size = 0;
            labels[idx] = label;
            stack.emplace_back(x, y);
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                ++size;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx;
                        const int ny = cy + dy;
                        if (!mask.contains(nx, ny) || !mask.at(nx, ny)) continue;
                        auto& l = labels[static_cast<std::size_t>(ny) * static_cast<std::size_t>(w) +
                                         static_cast<std::size_t>(nx)];
                        if (l != 0) continue;
                        l = label;
                        stack.emplace_back(nx, ny);
                    }
                }
            }
            sizes.push_back(size);
        }
    }
    return {std::move(labels), std::move(sizes)};
}

// 3x3 square; out-of-image neighbours are ignored.
BinaryMask morph3x3(const BinaryMask& in, bool dilate) {
    BinaryMask out(in.width(), in.height());
    for (int y = 0; y < in.height(); ++y) {
        for (int x = 0; x < in.width(); ++x) {
            bool value = !dilate;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (!in.contains(x + dx, y + dy)) continue;
                    const bool v = in.at(x + dx, y + dy);
                    value = dilate ? (value || v) : (value && v);
                }
            }
            out.set(x, y, value);
        }
    }
    return out;
}

}  // namespace

CleanResult clean_mask_detailed(const BinaryMask& mask) {
    if (mask.foreground_count() == 0) throw InvalidGeometry("empty mask");
    auto [labels, sizes] = label_components(mask);
    const auto largest = static_cast<int>(std::max_element(sizes.begin() + 1, sizes.end()) - sizes.begin());

    BinaryMask kept(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            kept.set(x, y, labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(mask.width()) +
                                  static_cast<std::size_t>(x)] == largest);
        }
    }
    CleanResult result{morph3x3(morph3x3(kept, true), false), sizes.size() - 1, {}};
    if (result.components > 1) {
        std::ostringstream os;
        os << "mask has " << result.components << " disconnected components; kept the largest ("
           << sizes[static_cast<std::size_t>(largest)] << " px)";
        result.warnings.push_back(os.str());
    }
    return result;
}

BinaryMask clean_mask(const BinaryMask& mask) { return clean_mask_detailed(mask).mask; }

// ---------------------------------------------------------------------------
// centerline

RowScan scan_rows(const BinaryMask& mask) {
    RowScan scan;
    for (int y = 0; y < mask.height(); ++y) {
        RowRun best{y, 0, -1};
        int x = 0;
        while (x < mask.width()) {
            if (!mask.at(x, y)) {
                ++x;
                continue;
            }
            const int start = x;
            while (x < mask.width() && mask.at(x, y)) ++x;
            if (x - start > best.width()) best = RowRun{y, start, x - 1};
        }
        if (best.width() > 0) scan.runs.push_back(best);
    }
    if (!scan.runs.empty()) {
        for (std::size_t k = 0; k + 1 < scan.runs.size(); ++k) {
            for (int y = scan.runs[k].y + 1; y < scan.runs[k + 1].y; ++y) scan.gaps.push_back(y);
        }
    }
    return scan;
}

std::vector<std::size_t> even_indices(std::size_t n, std::size_t count) {
    std::vector<std::size_t> out;
    if (count == 0 || n == 0) return out;
    if (count == 1) return {0};
    out.reserve(count);
    const double step = static_cast<double>(n - 1) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(static_cast<std::size_t>(std::lround(static_cast<double>(k) * step)));
    }
    return out;
}

namespace {

// Least-squares line through the midpoints of runs[lo..hi], evaluated at row y.
double local_linear_midpoint(const std::vector<RowRun>& runs, std::size_t lo, std::size_t hi, double y) {
    double sy = 0.0, sx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) {
        const double ry = runs[k].y;
        const double rx = runs[k].midpoint();
        sy += ry;
        sx += rx;
        syy += ry * ry;
        sxy += rx * ry;
    }
    const double n = static_cast<double>(hi - lo + 1);
    const double mean_y = sy / n;
    const double mean_x = sx / n;
    const double var_y = syy / n - mean_y * mean_y;
    const double slope = var_y > 0.0 ? (sxy / n - mean_x * mean_y) / var_y : 0.0;
    return mean_x + slope * (y - mean_y);
}

}  // namespace

CenterlineResult extract_centerline_detailed(const BinaryMask& mask, std::size_t count, std::size_t smoothing_rows) {
    if (count < 2) throw InsufficientData("centerline needs at least 2 points");
    const auto scan = scan_rows(mask);
    if (scan.runs.size() < count) {
        std::ostringstream os;
        os << "mask spans " << scan.runs.size() << " rows, fewer than the " << count << " centerline points requested";
        throw InsufficientData(os.str());
    }
    CenterlineResult result;
    if (!scan.gaps.empty()) {
        std::ostringstream os;
        os << scan.gaps.size() << " row(s) without foreground inside the mask span were skipped (first at y="
           << scan.gaps.front() << ")";
        result.warnings.push_back(os.str());
    }
    for (const auto idx : even_indices(scan.runs.size(), count)) {
        const auto& run = scan.runs[idx];
        const double y = run.y;
        double x = run.midpoint();
        if (smoothing_rows > 0) {
            const std::size_t lo = idx > smoothing_rows ? idx - smoothing_rows : 0;
            const std::size_t hi = std::min(scan.runs.size() - 1, idx + smoothing_rows);
            x = local_linear_midpoint(scan.runs, lo, hi, y);
        }
        result.centerline.points.push_back({x, y});
    }
    return result;
}

CenterlinePoints extract_centerline(const BinaryMask& mask, std::size_t count) {
    return extract_centerline_detailed(mask, count).centerline;
}

// ---------------------------------------------------------------------------
// contours

namespace {

std::vector<Point2> polygon_of(const ContourAnnotation& a) {
    std::vector<Point2> poly(a.left.begin(), a.left.end());
    poly.insert(poly.end(), a.right.rbegin(), a.right.rend());
    return poly;
}

std::string vertex_name(std::size_t v, std::size_t per_side) {
    if (v < per_side) return "left[" + std::to_string(v) + "]";
    return "right[" + std::to_string(2 * per_side - 1 - v) + "]";
}

int orientation(const Point2& a, const Point2& b, const Point2& c) {
    const double v = cross(b - a, c - a);
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

bool on_segment(const Point2& a, const Point2& b, const Point2& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
    const int o1 = orientation(a, b, c);
    const int o2 = orientation(a, b, d);
    const int o3 = orientation(c, d, a);
    const int o4 = orientation(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    return (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
           (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b));
}

double shoelace_area(const std::vector<Point2>& poly) {
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) twice += cross(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * std::abs(twice);
}

}  // namespace

void check_annotation(const ContourAnnotation& annotation, int width, int height) {
    for (const auto* side : {&annotation.left, &annotation.right}) {
        const char* name = side == &annotation.left ? "left" : "right";
        if (side->size() != kContourPointsPerSide) {
            std::ostringstream os;
            os << name << " contour must contain " << kContourPointsPerSide << " points";
            throw InvalidGeometry(os.str());
        }
        for (std::size_t i = 0; i < side->size(); ++i) {
            const auto& p = (*side)[i];
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0 || p.y < 0 || p.x > width - 1 ||
                p.y > height - 1) {
                std::ostringstream os;
                os << name << " contour point " << i << " (" << p.x << ", " << p.y << ") lies outside the "
                   << width << "x" << height << " image";
                throw InvalidGeometry(os.str());
            }
            if (i > 0 && !((*side)[i - 1].y < p.y)) {
                std::ostringstream os;
                os << name << " contour y must strictly increase (point " << i << ")";
                throw InvalidGeometry(os.str());
            }
        }
    }
    const auto poly = polygon_of(annotation);
    if (annotation.left == annotation.right || shoelace_area(poly) <= 0.0) throw InvalidGeometry("zero-area contour");
    for (std::size_t i = 0; i < annotation.left.size(); ++i) {
        if (!(annotation.left[i].x < annotation.right[i].x)) {
            std::ostringstream os;
            os << "left contour point " << i << " must lie left of right contour point " << i;
            throw InvalidGeometry(os.str());
        }
    }
    const std::size_t edges = poly.size();
    const std::size_t per_side = annotation.left.size();
    for (std::size_t i = 0; i < edges; ++i) {
        for (std::size_t j = i + 2; j < edges; ++j) {
            if (i == 0 && j == edges - 1) continue;  // share vertex 0
            const auto& a = poly[i];
            const auto& b = poly[(i + 1) % edges];
            const auto& c = poly[j];
            const auto& d = poly[(j + 1) % edges];
            if (segments_intersect(a, b, c, d)) {
                std::ostringstream os;
                os << "self-intersecting contour: segment " << vertex_name(i, per_side) << "-"
                   << vertex_name((i + 1) % edges, per_side) << " intersects segment " << vertex_name(j, per_side)
                   << "-" << vertex_name((j + 1) % edges, per_side);
                throw InvalidGeometry(os.str());
            }
        }
    }
}

BinaryMask contour_to_mask(const ContourAnnotation& annotation, int width, int height) {
    check_annotation(annotation, width, height);
    const auto poly = polygon_of(annotation);
    constexpr double kTol = 1e-9;
    BinaryMask mask(width, height);
    auto fill = [&](int y, double x0, double x1) {
        const int a = std::max(0, static_cast<int>(std::ceil(x0 - kTol)));
        const int b = std::min(width - 1, static_cast<int>(std::floor(x1 + kTol)));
        for (int x = a; x <= b; ++x) mask.set(x, y, true);
    };

    std::vector<double> crossings;
    for (int y = 0; y < height; ++y) {
        crossings.clear();
        const double yc = y;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Point2& a = poly[i];
            const Point2& b = poly[(i + 1) % poly.size()];
            if ((a.y <= yc && yc < b.y) || (b.y <= yc && yc < a.y)) {
                crossings.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
        std::sort(crossings.begin(), crossings.end());
        for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) fill(y, crossings[k], crossings[k + 1]);
    }

    // Boundary pixels whose centres lie exactly on an edge.
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % poly.size()];
        const int y0 = std::max(0, static_cast<int>(std::ceil(std::min(a.y, b.y) - kTol)));
        const int y1 = std::min(height - 1, static_cast<int>(std::floor(std::max(a.y, b.y) + kTol)));
        for (int y = y0; y <= y1; ++y) {
            if (a.y == b.y) {
                fill(y, std::min(a.x, b.x), std::max(a.x, b.x));
                continue;
            }
            const double x = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (std::abs(x - std::round(x)) < kTol) fill(y, std::round(x), std::round(x));
        }
    }
    return mask;
}

ContourAnnotation mask_to_contour(const BinaryMask& mask) {
    const auto scan = scan_rows(mask);
    if (scan.runs.size() < kContourPointsPerSide) {
        std::ostringstream os;
        os << "mask spans " << scan.runs.size() << " rows, fewer than the " << kContourPointsPerSide
           << " contour rows needed";
        throw InsufficientData(os.str());
    }
    const double max_x = mask.width() - 1;
    ContourAnnotation out;
    for (const auto idx : even_indices(scan.runs.size(), kContourPointsPerSide)) {
        const auto& run = scan.runs[idx];
        const double y = run.y;
        out.left.push_back({std::max(0.0, run.first - 0.5), y});
        out.right.push_back({std::min(max_x, run.last + 0.5), y});
    }
    return out;
}

}  // namespace spinecurve
