#pragma once

#include <cmath>

namespace uam {

/// 2D vector, SI units (meters, m/s, or m/s^2 by context).
struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(Vec2 r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    friend constexpr Vec2 operator*(double s, Vec2 v) { return {v.x * s, v.y * s}; }
    Vec2& operator+=(Vec2 r) { x += r.x; y += r.y; return *this; }
    Vec2& operator-=(Vec2 r) { x -= r.x; y -= r.y; return *this; }
    constexpr bool operator==(const Vec2&) const = default;

    constexpr double dot(Vec2 r) const { return x * r.x + y * r.y; }
    double norm() const { return std::sqrt(x * x + y * y); }

    /// Unit vector in the same direction; the zero vector normalizes to
    /// zero (callers that need a direction must check is_zero()).
    Vec2 normalized() const {
        double n = norm();
        if (n == 0.0) return {};
        return {x / n, y / n};
    }

    constexpr bool is_zero() const { return x == 0.0 && y == 0.0; }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }

    /// Left-hand perpendicular (rotation by +90 degrees).
    constexpr Vec2 perp() const { return {-y, x}; }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

}  // namespace uam
