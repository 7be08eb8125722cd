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

#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>

#include <png.h>

#include "spinecurve/mask.hpp"

namespace spinecurve {

namespace {

constexpr int kForegroundThreshold = 127;

BinaryMask threshold(int width, int height, std::span<const std::uint8_t> gray) {
    std::vector<std::uint8_t> data(gray.size());
    for (std::size_t i = 0; i < gray.size(); ++i) data[i] = gray[i] > kForegroundThreshold ? 1 : 0;
    BinaryMask mask(width, height, std::move(data));
    if (mask.foreground_count() == 0) throw InvalidGeometry("empty mask");
    return mask;
}

bool is_png(std::span<const std::uint8_t> bytes) {
    static constexpr std::uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    return bytes.size() >= 8 && std::memcmp(bytes.data(), kSignature, 8) == 0;
}

BinaryMask decode_png(std::span<const std::uint8_t> bytes) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw IoError(std::string("unsupported or corrupt PNG: ") + image.message);
    }
    image.format = PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> gray(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, gray.data(), 0, nullptr)) {
        const std::string message = image.message;
        png_image_free(&image);
        throw IoError("failed to decode PNG: " + message);
    }
    return threshold(static_cast<int>(image.width), static_cast<int>(image.height), gray);
}

// Binary PGM (P5) with maxval <= 255.
BinaryMask decode_pgm(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 2;
    auto next_int = [&]() -> long {
        for (;;) {
            while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
            if (pos < bytes.size() && bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        if (pos >= bytes.size() || !std::isdigit(bytes[pos])) throw IoError("malformed PGM header");
        long value = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            value = value * 10 + (bytes[pos++] - '0');
            if (value > 1'000'000) throw IoError("malformed PGM header");
        }
        return value;
    };
    const long width = next_int();
    const long height = next_int();
    const long maxval = next_int();
    if (width <= 0 || height <= 0) throw IoError("PGM has zero size");
    if (maxval <= 0 || maxval > 255) throw IoError("unsupported PGM maxval " + std::to_string(maxval));
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw IoError("malformed PGM header");
    ++pos;
    const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() - pos < count) throw IoError("truncated PGM data");
    std::vector<std::uint8_t> gray(bytes.begin() + static_cast<long>(pos), bytes.begin() + static_cast<long>(pos + count));
    if (maxval != 255) {
        for (auto& g : gray) g = static_cast<std::uint8_t>(g * 255 / maxval);
    }
    return threshold(static_cast<int>(width), static_cast<int>(height), gray);
}

std::vector<std::uint8_t> to_gray(const BinaryMask& mask) {
    std::vector<std::uint8_t> gray(mask.data().begin(), mask.data().end());
    for (auto& g : gray) g = g ? 255 : 0;
    return gray;
}

}  // namespace

BinaryMask decode_mask(std::span<const std::uint8_t> bytes) {
    if (is_png(bytes)) return decode_png(bytes);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pgm(bytes);
    throw IoError("unsupported image format (expected PNG or binary PGM)");
}

BinaryMask load_mask(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw IoError("file not found: " + path.string(), true);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_mask(bytes);
}

std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(mask.width());
    image.height = static_cast<png_uint_32>(mask.height());
    image.format = PNG_FORMAT_GRAY;
    const auto gray = to_gray(mask);
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, gray.data(), 0, nullptr)) {
        throw IoError(std::string("PNG encoding failed: ") + image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, gray.data(), 0, nullptr)) {
        throw IoError(std::string("PNG encoding failed: ") + image.message);
    }
    out.resize(size);
    return out;
}

void save_mask_png(const BinaryMask& mask, const std::filesystem::path& path) {
    const auto bytes = encode_mask_png(mask);
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("cannot write " + path.string());
}

void save_mask_pgm(const BinaryMask& mask, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n" << mask.width() << " " << mask.height() << "\n255\n";
    const auto gray = to_gray(mask);
    out.write(reinterpret_cast<const char*>(gray.data()), static_cast<std::streamsize>(gray.size()));
    if (!out) throw IoError("cannot write " + path.string());
}

}  // namespace spinecurve
