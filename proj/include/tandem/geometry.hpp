#pragma once

#include <cmath>

namespace tandem {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Vec3& o) const = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    return n > 0.0 ? v * (1.0 / n) : Vec3{};
}

// Rodrigues rotation of v about unit axis by angle (radians).
inline Vec3 rotate_about(const Vec3& v, const Vec3& unit_axis, double angle_rad) {
    const double c = std::cos(angle_rad);
    const double s = std::sin(angle_rad);
    const Vec3 kxv = cross(unit_axis, v);
    const double kdv = dot(unit_axis, v);
    return v * c + kxv * s + unit_axis * (kdv * (1.0 - c));
}

inline constexpr double deg_to_rad(double deg) { return deg * (3.14159265358979323846 / 180.0); }

}  // namespace tandem
