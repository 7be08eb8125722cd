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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "spinecurve/fitting.hpp"
#include "spinecurve/geometry.hpp"

namespace spinecurve {

/// Row-major binary image; every cell is 0 or 1.
class BinaryMask {
public:
    BinaryMask(int width, int height);
    BinaryMask(int width, int height, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    bool at(int x, int y) const noexcept { return data_[index(x, y)] != 0; }
    void set(int x, int y, bool value) noexcept { data_[index(x, y)] = value ? 1 : 0; }
    bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    std::span<const std::uint8_t> data() const noexcept { return data_; }
    std::size_t foreground_count() const noexcept;

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

/// Reads an 8-bit grayscale PNG (other PNG colour types are converted to gray)
/// or a binary PGM (P5). Values > 127 are foreground. Throws IoError for a
/// missing or undecodable file and InvalidGeometry("empty mask") when no
/// pixel is foreground.
BinaryMask load_mask(const std::filesystem::path& path);

/// Same as load_mask on an in-memory encoded image (PNG or P5 PGM).
BinaryMask decode_mask(std::span<const std::uint8_t> bytes);

/// Writes the mask as an 8-bit grayscale PNG with values 0/255.
void save_mask_png(const BinaryMask& mask, const std::filesystem::path& path);

/// Writes the mask as a binary PGM (P5) with values 0/255.
void save_mask_pgm(const BinaryMask& mask, const std::filesystem::path& path);

std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask);

struct CleanResult {
    BinaryMask mask;
    std::size_t components = 0;  // 8-connected components before cleanup
    std::vector<std::string> warnings;
};

/// Keeps only the largest 8-connected foreground component (first in raster
/// order on ties) and applies a 3x3 morphological closing. Pixels outside
/// the image neither grow the dilation nor erode the erosion, so the result
/// always contains the kept component.
CleanResult clean_mask_detailed(const BinaryMask& mask);
BinaryMask clean_mask(const BinaryMask& mask);

/// A foreground run [first, last] (inclusive pixel columns) on one row.
struct RowRun {
    int y = 0;
    int first = 0;
    int last = 0;

    int width() const noexcept { return last - first + 1; }
    double midpoint() const noexcept { return 0.5 * (first + last); }
};

/// Widest run of every row that has foreground, top to bottom. Rows inside
/// the spanned range without foreground are skipped and listed in `gaps`.
struct RowScan {
    std::vector<RowRun> runs;
    std::vector<int> gaps;
};
RowScan scan_rows(const BinaryMask& mask);

/// Even index sampling of n items down to `count` (both extremes kept).
std::vector<std::size_t> even_indices(std::size_t n, std::size_t count);

struct CenterlineResult {
    CenterlinePoints centerline;
    std::vector<std::string> warnings;
};

/// Per-row midpoint of the widest foreground run, sampled evenly by row
/// index down to `count` points ordered top to bottom. Throws
/// InsufficientData when fewer than `count` rows hold foreground.
///
/// With `smoothing_rows` > 0 each sampled x is replaced by a least-squares
/// line through the midpoints of the runs within that many rows (by index)
/// on either side, evaluated at the sampled row. The window is truncated at
/// the ends of the mask.
CenterlineResult extract_centerline_detailed(const BinaryMask& mask, std::size_t count,
                                             std::size_t smoothing_rows = 0);
CenterlinePoints extract_centerline(const BinaryMask& mask, std::size_t count = 17);

inline constexpr std::size_t kContourPointsPerSide = 17;

/// Left and right spine borders, each ordered top to bottom.
struct ContourAnnotation {
    std::vector<Point2> left;
    std::vector<Point2> right;

    friend bool operator==(const ContourAnnotation&, const ContourAnnotation&) = default;
};

/// Throws InvalidGeometry naming the first violated invariant: side sizes,
/// strictly increasing y on each side, left of right on paired rows, bounds,
/// non-zero area and absence of self-intersections.
void check_annotation(const ContourAnnotation& annotation, int width, int height);

/// Fills the polygon left (top to bottom) + reversed right with the even-odd
/// rule. Pixel centres on the polygon boundary count as inside.
BinaryMask contour_to_mask(const ContourAnnotation& annotation, int width, int height);

/// Initial annotation for a mask: left/right ends of the widest run on
/// kContourPointsPerSide evenly sampled rows, placed on the outer pixel edges.
ContourAnnotation mask_to_contour(const BinaryMask& mask);

}  // namespace spinecurve
