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

#include <cmath>
#include <stdexcept>
#include <string>

namespace spinecurve {

/// 2D point or vector in pixel units (x to the right, y downward).
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Point2& operator+=(const Point2& o) noexcept { x += o.x; y += o.y; return *this; }
    constexpr Point2& operator-=(const Point2& o) noexcept { x -= o.x; y -= o.y; return *this; }
    constexpr Point2& operator*=(double s) noexcept { x *= s; y *= s; return *this; }

    friend constexpr Point2 operator+(Point2 a, const Point2& b) noexcept { return a += b; }
    friend constexpr Point2 operator-(Point2 a, const Point2& b) noexcept { return a -= b; }
    friend constexpr Point2 operator*(Point2 a, double s) noexcept { return a *= s; }
    friend constexpr Point2 operator*(double s, Point2 a) noexcept { return a *= s; }
    friend constexpr bool operator==(const Point2&, const Point2&) = default;
};

inline double dot(const Point2& a, const Point2& b) noexcept { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& a) noexcept { return std::hypot(a.x, a.y); }
inline double squared_norm(const Point2& a) noexcept { return dot(a, a); }
inline double distance(const Point2& a, const Point2& b) noexcept { return norm(a - b); }

/// Base class for all errors raised by the library. `kind` is a short
/// machine-readable tag; what() carries the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// Input violates a geometric or structural invariant.
class InvalidGeometry : public Error {
public:
    explicit InvalidGeometry(const std::string& message) : Error("invalid_geometry", message) {}
};

/// Not enough data to perform an operation (too few points, rows, records).
class InsufficientData : public Error {
public:
    explicit InsufficientData(const std::string& message) : Error("insufficient_data", message) {}
};

/// A numeric procedure could not produce a well-defined result.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& message) : Error("numerical", message) {}
};

/// Serialized input does not follow the expected schema.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& message) : Error("format", message) {}
};

/// File missing, unreadable or in an unsupported format.
class IoError : public Error {
public:
    explicit IoError(const std::string& message, bool not_found = false)
        : Error(not_found ? "not_found" : "io", message) {}

    bool not_found() const noexcept { return kind() == "not_found"; }
};

}  // namespace spinecurve
