// SPDX-License-Identifier: Apache-2.0
//
// riscal - joint RIS calibration and user positioning toolkit
// Copyright (C) 2026 riscal contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISCAL_GEOMETRY_HPP
#define RISCAL_GEOMETRY_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace riscal {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kSpeedOfLight = 299792458.0; // m/s, exact
inline constexpr double kPi = std::numbers::pi;

// Thrown whenever two points that must be distinct coincide.
class GeometryError : public std::runtime_error {
  public:
    explicit GeometryError(const std::string &what) : std::runtime_error(what) {}
};

// Pitch o1, roll o2, yaw o3 in radians. Only the yaw is ever estimated.
struct EulerOrientation {
    double pitch = 0.0;
    double roll = 0.0;
    double yaw = 0.0;
};

struct AnglePair {
    double azimuth = 0.0;   // (-pi, pi]
    double elevation = 0.0; // [-pi/2, pi/2]
};

// Sum of the two RIS-local unit directions (towards BS and towards user).
// v1 is kept for diagnostics only: the planar arrays have zero extent along
// the local x axis, so it never enters the phase model.
struct IntermediateDirection {
    double v1 = 0.0;
    double v2 = 0.0;
    double v3 = 0.0;
};

struct UserState {
    Vec3 position = Vec3::Zero();
    double clock_offset = 0.0; // seconds
};

struct RisState {
    Vec3 position = Vec3::Zero();
    EulerOrientation orientation;
};

// One BS (array centre = origin of the global frame, facing +x), one RIS and one user.
struct Scene {
    Vec3 bs = Vec3::Zero();
    RisState ris;
    UserState user;
};

struct DirectionDistance {
    Vec3 direction;
    double distance;
};

// Unit vector and distance from `from` to `to`.
inline DirectionDistance direction_and_distance(const Vec3 &from, const Vec3 &to)
{
    const Vec3 diff = to - from;
    const double d = diff.norm();
    if (!(d > 0.0) || !std::isfinite(d))
        throw GeometryError("degenerate geometry: coincident or non-finite points");
    return {diff / d, d};
}

inline Mat3 rotation_x(double a)
{
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << 1, 0, 0, 0, c, -s, 0, s, c;
    return r;
}

inline Mat3 rotation_y(double a)
{
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << c, 0, s, 0, 1, 0, -s, 0, c;
    return r;
}

inline Mat3 rotation_z(double a)
{
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << c, -s, 0, s, c, 0, 0, 0, 1;
    return r;
}

// R = Rz(yaw) * Ry(roll) * Rx(pitch). The yaw therefore always turns the
// array about the global z axis.
inline Mat3 euler_to_rotation(const EulerOrientation &o)
{
    return rotation_z(o.yaw) * rotation_y(o.roll) * rotation_x(o.pitch);
}

// dR/dyaw for the composition above.
inline Mat3 rotation_yaw_derivative(const EulerOrientation &o)
{
    const double c = std::cos(o.yaw), s = std::sin(o.yaw);
    Mat3 dz;
    dz << -s, -c, 0, c, -s, 0, 0, 0, 0;
    return dz * rotation_y(o.roll) * rotation_x(o.pitch);
}

inline Vec3 global_to_local_direction(const Mat3 &rotation, const Vec3 &t)
{
    return rotation.transpose() * t;
}

struct LocalAngles {
    AnglePair angles;
    bool gimbal = false; // |elevation| == pi/2, azimuth undefined and reported as 0
};

inline LocalAngles angles_from_local_direction(const Vec3 &t)
{
    LocalAngles out;
    const double z = std::clamp(t.z(), -1.0, 1.0);
    out.angles.elevation = std::asin(z);
    const double horizontal = std::hypot(t.x(), t.y());
    if (horizontal <= 1e-12) {
        out.gimbal = true;
        out.angles.azimuth = 0.0;
        out.angles.elevation = z > 0 ? kPi / 2 : -kPi / 2;
        return out;
    }
    out.angles.azimuth = std::atan2(t.y(), t.x());
    return out;
}

inline Vec3 local_direction_from_angles(const AnglePair &a)
{
    const double ce = std::cos(a.elevation);
    return {std::cos(a.azimuth) * ce, std::sin(a.azimuth) * ce, std::sin(a.elevation)};
}

// Reduce an angle to (-pi, pi].
inline double wrap_angle(double a)
{
    double r = std::remainder(a, 2.0 * kPi);
    if (r <= -kPi)
        r += 2.0 * kPi;
    return r;
}

struct PathDelays {
    double direct;  // tau_BU
    double via_ris; // tau_R
};

inline PathDelays path_delays(const Vec3 &bs, const Vec3 &ris, const Vec3 &user, double clock_offset)
{
    const double d_bu = direction_and_distance(bs, user).distance;
    const double d_br = direction_and_distance(bs, ris).distance;
    const double d_ru = direction_and_distance(ris, user).distance;
    return {d_bu / kSpeedOfLight + clock_offset, (d_br + d_ru) / kSpeedOfLight + clock_offset};
}

inline IntermediateDirection intermediate_angles(const Vec3 &bs, const Vec3 &ris, const Vec3 &user,
                                                 const Mat3 &ris_rotation)
{
    const Vec3 t_rb = direction_and_distance(ris, bs).direction;
    const Vec3 t_ru = direction_and_distance(ris, user).direction;
    const Vec3 sum = ris_rotation.transpose() * (t_rb + t_ru);
    return {sum.x(), sum.y(), sum.z()};
}

} // namespace riscal

#endif // RISCAL_GEOMETRY_HPP
