#pragma once

#include <cmath>

#include "hydrosurr/core/vec3.hpp"

namespace hydrosurr {

/// Unit quaternion (w, x, y, z), Hamilton convention, body-to-world rotation.
struct Quat {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static Quat from_axis_angle(const Vec3& axis, double angle) {
        const double n = hydrosurr::norm(axis);
        const double s = std::sin(0.5 * angle) / n;
        return {std::cos(0.5 * angle), axis.x * s, axis.y * s, axis.z * s};
    }

    Vec3 vec() const { return {x, y, z}; }
    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
    Quat normalized() const {
        const double n = norm();
        return {w / n, x / n, y / n, z / n};
    }
    Quat conjugate() const { return {w, -x, -y, -z}; }

    Mat3 to_matrix() const {
        const double ww = w * w, xx = x * x, yy = y * y, zz = z * z;
        return Mat3{{ww + xx - yy - zz, 2 * (x * y - w * z), 2 * (x * z + w * y),
                     2 * (x * y + w * z), ww - xx + yy - zz, 2 * (y * z - w * x),
                     2 * (x * z - w * y), 2 * (y * z + w * x), ww - xx - yy + zz}};
    }
    Vec3 rotate(const Vec3& v) const { return to_matrix() * v; }

    /// Pitch about the body Y axis (ZYX Euler convention).
    double pitch() const {
        const double s = 2.0 * (w * y - z * x);
        return std::asin(s > 1.0 ? 1.0 : (s < -1.0 ? -1.0 : s));
    }
};

inline Quat operator*(const Quat& a, const Quat& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

inline double dot(const Quat& a, const Quat& b) { return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z; }

/// Shortest-arc spherical interpolation; `b` is flipped into `a`'s hemisphere first.
inline Quat slerp(const Quat& a, Quat b, double t) {
    double c = dot(a, b);
    if (c < 0.0) {
        b = {-b.w, -b.x, -b.y, -b.z};
        c = -c;
    }
    double wa, wb;
    if (c > 1.0 - 1e-12) {
        wa = 1.0 - t;
        wb = t;
    } else {
        const double theta = std::acos(c);
        const double s = std::sin(theta);
        wa = std::sin((1.0 - t) * theta) / s;
        wb = std::sin(t * theta) / s;
    }
    return Quat{wa * a.w + wb * b.w, wa * a.x + wb * b.x, wa * a.y + wb * b.y, wa * a.z + wb * b.z}
        .normalized();
}

}  // namespace hydrosurr
