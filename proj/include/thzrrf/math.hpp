// SPDX-License-Identifier: Apache-2.0
//
// Small fixed-size geometry types: 3-vectors, unit directions and rotation
// quaternions. Everything here is header-only and value-semantic.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace thzrrf {

/// Speed of light in vacuum [m/s].
inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = std::numbers::pi;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr bool operator==(const Vec3&) const = default;

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// Unit-length direction. Construction normalizes; a zero vector is rejected.
class UnitDir {
public:
    UnitDir() = default; // +z
    explicit UnitDir(const Vec3& v)
    {
        const double n = norm(v);
        if (!(n > 0.0) || !std::isfinite(n))
            throw std::invalid_argument("UnitDir: cannot normalize a zero or non-finite vector");
        v_ = v / n;
    }
    UnitDir(double x, double y, double z) : UnitDir(Vec3{x, y, z}) {}

    /// Keeps already-normalized components bit-exact (used when reloading).
    static UnitDir from_raw(const Vec3& v)
    {
        if (!(std::abs(dot(v, v) - 1.0) < 1e-9))
            throw std::invalid_argument("UnitDir: stored direction is not unit length");
        UnitDir d;
        d.v_ = v;
        return d;
    }

    /// Azimuth in [-pi, pi] measured from +x towards +y.
    double azimuth() const { return std::atan2(v_.y, v_.x); }
    /// Elevation in [-pi/2, pi/2] above the xy-plane.
    double elevation() const { return std::asin(std::clamp(v_.z, -1.0, 1.0)); }

    static UnitDir from_angles(double azimuth, double elevation)
    {
        const double ce = std::cos(elevation);
        return UnitDir(Vec3{ce * std::cos(azimuth), ce * std::sin(azimuth), std::sin(elevation)});
    }

    const Vec3& vec() const { return v_; }
    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double z() const { return v_.z; }
    UnitDir operator-() const { UnitDir d; d.v_ = -v_; return d; }

private:
    Vec3 v_{0.0, 0.0, 1.0};
};

inline double dot(const UnitDir& a, const UnitDir& b) { return dot(a.vec(), b.vec()); }
inline double dot(const UnitDir& a, const Vec3& b) { return dot(a.vec(), b); }

/// Angle between two directions in radians, robust near 0 and pi.
inline double angle_between(const UnitDir& a, const UnitDir& b)
{
    return std::atan2(norm(cross(a.vec(), b.vec())), dot(a, b));
}

using Mat3 = std::array<std::array<double, 3>, 3>;

inline double determinant(const Mat3& m)
{
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Unit quaternion (w, x, y, z) representing a proper rotation.
class RotationQ {
public:
    RotationQ() = default;
    RotationQ(double w, double x, double y, double z)
    {
        const double n = std::sqrt(w * w + x * x + y * y + z * z);
        if (!(n > 0.0) || !std::isfinite(n))
            throw std::invalid_argument("RotationQ: zero or non-finite quaternion");
        w_ = w / n; x_ = x / n; y_ = y / n; z_ = z / n;
    }

    static RotationQ identity() { return {}; }

    /// Keeps the components as given (no renormalization). Used when
    /// reloading stored quaternions so that save/load round trips are exact.
    static RotationQ from_raw(double w, double x, double y, double z)
    {
        const double n2 = w * w + x * x + y * y + z * z;
        if (!(std::abs(n2 - 1.0) < 1e-5))
            throw std::invalid_argument("RotationQ: stored quaternion is not unit norm");
        RotationQ q;
        q.w_ = w; q.x_ = x; q.y_ = y; q.z_ = z;
        return q;
    }

    static RotationQ from_axis_angle(const UnitDir& axis, double angle)
    {
        const double s = std::sin(0.5 * angle);
        return {std::cos(0.5 * angle), s * axis.x(), s * axis.y(), s * axis.z()};
    }

    /// Rotation whose matrix columns are the given right-handed orthonormal frame.
    static RotationQ from_frame(const Vec3& c0, const Vec3& c1, const Vec3& c2)
    {
        // Shepperd's method on the matrix [c0 c1 c2].
        const double m00 = c0.x, m10 = c0.y, m20 = c0.z;
        const double m01 = c1.x, m11 = c1.y, m21 = c1.z;
        const double m02 = c2.x, m12 = c2.y, m22 = c2.z;
        const double tr = m00 + m11 + m22;
        if (tr > 0.0) {
            const double s = 2.0 * std::sqrt(tr + 1.0);
            return {0.25 * s, (m21 - m12) / s, (m02 - m20) / s, (m10 - m01) / s};
        }
        if (m00 > m11 && m00 > m22) {
            const double s = 2.0 * std::sqrt(1.0 + m00 - m11 - m22);
            return {(m21 - m12) / s, 0.25 * s, (m01 + m10) / s, (m02 + m20) / s};
        }
        if (m11 > m22) {
            const double s = 2.0 * std::sqrt(1.0 + m11 - m00 - m22);
            return {(m02 - m20) / s, (m01 + m10) / s, 0.25 * s, (m12 + m21) / s};
        }
        const double s = 2.0 * std::sqrt(1.0 + m22 - m00 - m11);
        return {(m10 - m01) / s, (m02 + m20) / s, (m12 + m21) / s, 0.25 * s};
    }

    double w() const { return w_; }
    double x() const { return x_; }
    double y() const { return y_; }
    double z() const { return z_; }

    RotationQ conjugate() const
    {
        RotationQ q;
        q.w_ = w_; q.x_ = -x_; q.y_ = -y_; q.z_ = -z_;
        return q;
    }

    /// Hamilton product: (a * b) rotates by b first, then by a.
    RotationQ operator*(const RotationQ& b) const
    {
        return {w_ * b.w_ - x_ * b.x_ - y_ * b.y_ - z_ * b.z_,
                w_ * b.x_ + x_ * b.w_ + y_ * b.z_ - z_ * b.y_,
                w_ * b.y_ - x_ * b.z_ + y_ * b.w_ + z_ * b.x_,
                w_ * b.z_ + x_ * b.y_ - y_ * b.x_ + z_ * b.w_};
    }

    Vec3 rotate(const Vec3& v) const
    {
        // v' = v + 2w (u x v) + 2 u x (u x v)
        const Vec3 u{x_, y_, z_};
        const Vec3 t = 2.0 * cross(u, v);
        return v + w_ * t + cross(u, t);
    }
    UnitDir rotate(const UnitDir& d) const { return UnitDir(rotate(d.vec())); }

    Mat3 to_matrix() const
    {
        const double xx = x_ * x_, yy = y_ * y_, zz = z_ * z_;
        const double xy = x_ * y_, xz = x_ * z_, yz = y_ * z_;
        const double wx = w_ * x_, wy = w_ * y_, wz = w_ * z_;
        return {{{1 - 2 * (yy + zz), 2 * (xy - wz), 2 * (xz + wy)},
                 {2 * (xy + wz), 1 - 2 * (xx + zz), 2 * (yz - wx)},
                 {2 * (xz - wy), 2 * (yz + wx), 1 - 2 * (xx + yy)}}};
    }

    bool operator==(const RotationQ&) const = default;

private:
    double w_ = 1.0, x_ = 0.0, y_ = 0.0, z_ = 0.0;
};

inline Vec3 rotate(const RotationQ& q, const Vec3& v) { return q.rotate(v); }

} // namespace thzrrf
