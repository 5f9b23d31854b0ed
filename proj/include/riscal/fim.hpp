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

#ifndef RISCAL_FIM_HPP
#define RISCAL_FIM_HPP

#include "riscal/channel.hpp"
#include "riscal/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace riscal {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat12 = Eigen::Matrix<double, 12, 12>;
using Mat12x8 = Eigen::Matrix<double, 12, 8>;
using CVec12 = Eigen::Matrix<cd, 12, 1>;

// Channel-parameter layout: four angles, two intermediate direction
// components, two delays, then the four nuisance gain components.
enum ParamIndex : int {
    kPhiBU = 0,
    kThetaBU,
    kPhiBR,
    kThetaBR,
    kVartheta2,
    kVartheta3,
    kTauBU,
    kTauR,
    kRhoBU,
    kRhoR,
    kXiBU,
    kXiR,
};

inline constexpr int kNumChannelParams = 12;
inline constexpr int kNumGeometricParams = 8;

// State layout of a single user: [p_R (3), yaw, p_U (3), beta].
enum StateIndex : int {
    kRisX = 0,
    kRisY,
    kRisZ,
    kRisYaw,
    kUserX,
    kUserY,
    kUserZ,
    kClock,
};

inline constexpr int kRisStateSize = 4;
inline constexpr int kUserStateSize = 4;

// Condition number (after unit-diagonal scaling) above which an information
// matrix is treated as singular.
inline constexpr double kSingularCondition = 1e10;

struct ChannelParams {
    Vec12 values = Vec12::Zero();
    bool gimbal = false; // some azimuth is undefined; the scene is blind

    Vec8 geometric() const { return values.head<8>(); }
};

struct GeometricParams {
    Vec8 values = Vec8::Zero();
    bool gimbal = false;
};

inline GeometricParams geometric_params(const Vec3 &bs, const RisState &ris, const UserState &user)
{
    GeometricParams out;
    const auto bu = angles_from_local_direction(direction_and_distance(bs, user.position).direction);
    const auto br = angles_from_local_direction(direction_and_distance(bs, ris.position).direction);
    const auto sum = intermediate_angles(bs, ris.position, user.position, euler_to_rotation(ris.orientation));
    const auto tau = path_delays(bs, ris.position, user.position, user.clock_offset);
    out.values << bu.angles.azimuth, bu.angles.elevation, br.angles.azimuth, br.angles.elevation, sum.v2, sum.v3,
        tau.direct, tau.via_ris;
    out.gimbal = bu.gimbal || br.gimbal;
    return out;
}

inline ChannelParams channel_params(const Scene &scene, const ChannelGains &gains)
{
    const auto geo = geometric_params(scene.bs, scene.ris, scene.user);
    ChannelParams p;
    p.values.head<8>() = geo.values;
    p.values[kRhoBU] = gains.direct.real();
    p.values[kRhoR] = gains.via_ris.real();
    p.values[kXiBU] = gains.direct.imag();
    p.values[kXiR] = gains.via_ris.imag();
    p.gimbal = geo.gimbal;
    return p;
}

// Array geometry and numerology needed to evaluate mu directly from eta.
struct SignalModel {
    Eigen::Matrix3Xd bs_elements;
    Eigen::Matrix3Xd ris_elements;
    double wavelength = 0.0;
    double spacing_hz = 0.0;

    static SignalModel from(const System &sys)
    {
        SignalModel m;
        m.wavelength = sys.waveform.wavelength();
        m.spacing_hz = sys.waveform.subcarrier_spacing();
        m.bs_elements = sys.bs_array.element_positions(m.wavelength);
        m.ris_elements = sys.ris_array.element_positions(m.wavelength);
        return m;
    }
};

namespace detail {

// Steering vector of an array for (azimuth, elevation) and its two partials.
struct SteeringWithDerivatives {
    CVec a, d_azimuth, d_elevation;
};

inline SteeringWithDerivatives steering_derivatives(const Eigen::Matrix3Xd &el, double az, double elev,
                                                    double wavelength)
{
    const double kw = 2.0 * kPi / wavelength;
    const double ca = std::cos(az), sa = std::sin(az), ce = std::cos(elev), se = std::sin(elev);
    const Vec3 t(ca * ce, sa * ce, se);
    const Vec3 dt_az(-sa * ce, ca * ce, 0.0);
    const Vec3 dt_el(-ca * se, -sa * se, ce);
    SteeringWithDerivatives s;
    s.a = steering_vector(el, t, wavelength);
    const Eigen::VectorXd p_az = kw * (el.transpose() * dt_az);
    const Eigen::VectorXd p_el = kw * (el.transpose() * dt_el);
    const cd j(0.0, 1.0);
    s.d_azimuth = (j * p_az.cast<cd>().array() * s.a.array()).matrix();
    s.d_elevation = (j * p_el.cast<cd>().array() * s.a.array()).matrix();
    return s;
}

// RIS intermediate steering vector e^{j 2pi/lambda (p_y v2 + p_z v3)} and partials.
inline SteeringWithDerivatives intermediate_steering(const Eigen::Matrix3Xd &el, double v2, double v3,
                                                     double wavelength)
{
    const double kw = 2.0 * kPi / wavelength;
    SteeringWithDerivatives s;
    s.a = steering_vector(el, Vec3(0.0, v2, v3), wavelength);
    const cd j(0.0, 1.0);
    s.d_azimuth = (j * kw * el.row(1).transpose().cast<cd>().array() * s.a.array()).matrix();
    s.d_elevation = (j * kw * el.row(2).transpose().cast<cd>().array() * s.a.array()).matrix();
    return s;
}

// Which subcarrier-dependent factor multiplies each parameter's derivative.
enum KFactor : int { kDirect = 0, kReflected = 1, kDirectDelay = 2, kReflectedDelay = 3 };
inline constexpr int kKFactorOf[kNumChannelParams] = {kDirect,      kDirect,          kReflected, kReflected,
                                                      kReflected,   kReflected,       kDirectDelay, kReflectedDelay,
                                                      kDirect,      kReflected,       kDirect,    kReflected};

// Subcarrier-independent part of d mu / d eta for every transmission (G x 12).
inline Eigen::Matrix<cd, Eigen::Dynamic, kNumChannelParams>
transmission_factors(const SignalModel &m, const Vec12 &eta, const SoundingPlan &plan)
{
    const auto bu = steering_derivatives(m.bs_elements, eta[kPhiBU], eta[kThetaBU], m.wavelength);
    const auto br = steering_derivatives(m.bs_elements, eta[kPhiBR], eta[kThetaBR], m.wavelength);
    const auto ir = intermediate_steering(m.ris_elements, eta[kVartheta2], eta[kVartheta3], m.wavelength);
    if (plan.combiners.cols() != bu.a.size() || plan.ris_profiles.cols() != ir.a.size())
        throw std::invalid_argument("sounding plan does not match array sizes");

    // w_g^T a for all g at once (row g of the combiner matrix is w_g^T).
    const CVec c0 = plan.combiners * bu.a, c1 = plan.combiners * bu.d_azimuth, c2 = plan.combiners * bu.d_elevation;
    const CVec b0 = plan.combiners * br.a, b1 = plan.combiners * br.d_azimuth, b2 = plan.combiners * br.d_elevation;
    const CVec r0 = plan.ris_profiles * ir.a, r2 = plan.ris_profiles * ir.d_azimuth,
               r3 = plan.ris_profiles * ir.d_elevation;

    const cd a_bu(eta[kRhoBU], eta[kXiBU]);
    const cd a_r(eta[kRhoR], eta[kXiR]);
    const cd x = plan.pilot;
    const cd j(0.0, 1.0);

    const Eigen::Index G = plan.combiners.rows();
    Eigen::Matrix<cd, Eigen::Dynamic, kNumChannelParams> f(G, kNumChannelParams);
    for (Eigen::Index g = 0; g < G; ++g) {
        const cd refl = b0[g] * r0[g];
        f(g, kPhiBU) = x * a_bu * c1[g];
        f(g, kThetaBU) = x * a_bu * c2[g];
        f(g, kPhiBR) = x * a_r * b1[g] * r0[g];
        f(g, kThetaBR) = x * a_r * b2[g] * r0[g];
        f(g, kVartheta2) = x * a_r * b0[g] * r2[g];
        f(g, kVartheta3) = x * a_r * b0[g] * r3[g];
        f(g, kTauBU) = x * a_bu * c0[g];
        f(g, kTauR) = x * a_r * refl;
        f(g, kRhoBU) = x * c0[g];
        f(g, kRhoR) = x * refl;
        f(g, kXiBU) = j * x * c0[g];
        f(g, kXiR) = j * x * refl;
    }
    return f;
}

inline Eigen::Matrix<cd, 4, 1> subcarrier_factors(const SignalModel &m, const Vec12 &eta, int k)
{
    const cd e_bu = delay_phase(eta[kTauBU], m.spacing_hz, k);
    const cd e_r = delay_phase(eta[kTauR], m.spacing_hz, k);
    const cd d(0.0, -2.0 * kPi * m.spacing_hz * k);
    Eigen::Matrix<cd, 4, 1> v;
    v << e_bu, e_r, d * e_bu, d * e_r;
    return v;
}

} // namespace detail

// Noise-free symbol evaluated straight from the channel parameters.
inline cd mu_from_params(const SignalModel &m, const Vec12 &eta, const SoundingPlan &plan, int g, int k)
{
    const CVec a_bu = steering_vector(
        m.bs_elements, local_direction_from_angles({eta[kPhiBU], eta[kThetaBU]}), m.wavelength);
    const CVec a_br = steering_vector(
        m.bs_elements, local_direction_from_angles({eta[kPhiBR], eta[kThetaBR]}), m.wavelength);
    const CVec a_r = steering_vector(m.ris_elements, Vec3(0.0, eta[kVartheta2], eta[kVartheta3]), m.wavelength);
    const cd a1(eta[kRhoBU], eta[kXiBU]);
    const cd a2(eta[kRhoR], eta[kXiR]);
    const cd w_bu = plan.combiners.row(g) * a_bu;
    const cd w_br = plan.combiners.row(g) * a_br;
    const cd refl = plan.ris_profiles.row(g) * a_r;
    return plan.pilot * (a1 * w_bu * delay_phase(eta[kTauBU], m.spacing_hz, k) +
                         a2 * w_br * refl * delay_phase(eta[kTauR], m.spacing_hz, k));
}

// Analytic d mu_{g,k} / d eta.
inline CVec12 mu_gradient(const SignalModel &m, const Vec12 &eta, const SoundingPlan &plan, int g, int k)
{
    if (g < 0 || g >= plan.transmissions())
        throw std::out_of_range("mu_gradient: transmission index");
    SoundingPlan one;
    one.pilot = plan.pilot;
    one.combiners = plan.combiners.row(g);
    one.ris_profiles = plan.ris_profiles.row(g);
    const auto f = detail::transmission_factors(m, eta, one);
    const auto kf = detail::subcarrier_factors(m, eta, k);
    CVec12 out;
    for (int i = 0; i < kNumChannelParams; ++i)
        out[i] = f(0, i) * kf[detail::kKFactorOf[i]];
    return out;
}

// I(eta) = 2/sigma^2 sum_g sum_k Re{(dmu/deta)^H (dmu/deta)} over subcarriers
// [first_subcarrier, first_subcarrier + subcarriers). Each derivative is a
// product of a transmission factor and a subcarrier factor, so the double sum
// separates into a G-sum and a K-sum.
inline Mat12 channel_fim(const SignalModel &m, const Vec12 &eta, const SoundingPlan &plan, double noise_var,
                         int subcarriers, int first_subcarrier = 0)
{
    if (!(noise_var > 0.0))
        throw std::invalid_argument("channel_fim: noise variance must be positive");
    const auto f = detail::transmission_factors(m, eta, plan);
    const Eigen::Matrix<cd, kNumChannelParams, kNumChannelParams> gsum = f.adjoint() * f;

    Eigen::Matrix<cd, 4, 4> ksum = Eigen::Matrix<cd, 4, 4>::Zero();
    for (int k = first_subcarrier; k < first_subcarrier + subcarriers; ++k) {
        const auto v = detail::subcarrier_factors(m, eta, k);
        ksum.noalias() += v.conjugate() * v.transpose();
    }

    Mat12 info;
    for (int a = 0; a < kNumChannelParams; ++a)
        for (int b = 0; b < kNumChannelParams; ++b)
            info(a, b) = (gsum(a, b) * ksum(detail::kKFactorOf[a], detail::kKFactorOf[b])).real();
    info *= 2.0 / noise_var;
    return 0.5 * (info + info.transpose());
}

// ---- linear algebra helpers ------------------------------------------------

// Condition number of D^{-1/2} M D^{-1/2}, D = diag(M). Infinite if M has a
// non-positive diagonal entry or is not positive definite.
inline double scaled_condition(const Eigen::MatrixXd &m)
{
    const Eigen::Index n = m.rows();
    if (n == 0)
        return 1.0;
    Eigen::VectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(m(i, i) > 0.0) || !std::isfinite(m(i, i)))
            return std::numeric_limits<double>::infinity();
        s[i] = 1.0 / std::sqrt(m(i, i));
    }
    const Eigen::MatrixXd scaled = s.asDiagonal() * m * s.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (scaled + scaled.transpose()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        return std::numeric_limits<double>::infinity();
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0))
        return std::numeric_limits<double>::infinity();
    return hi / lo;
}

// Inverse of a symmetric positive definite matrix, computed on the
// unit-diagonal scaled form to cope with mixed units (radians, seconds).
inline Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd &m)
{
    const Eigen::Index n = m.rows();
    Eigen::VectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i)
        s[i] = m(i, i) > 0.0 ? 1.0 / std::sqrt(m(i, i)) : 1.0;
    const Eigen::MatrixXd scaled = s.asDiagonal() * m * s.asDiagonal();
    const Eigen::MatrixXd inv = scaled.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
    Eigen::MatrixXd out = s.asDiagonal() * inv * s.asDiagonal();
    return 0.5 * (out + out.transpose());
}

// ---- effective and state information ----------------------------------------

struct EffectiveFim {
    Mat8 info = Mat8::Zero();
    bool singular = false; // the gain block could not be inverted
};

// Schur complement removing the four gain components.
inline EffectiveFim effective_fim(const Mat12 &info)
{
    const Mat8 a = info.topLeftCorner<8, 8>();
    const Eigen::Matrix<double, 8, 4> b = info.topRightCorner<8, 4>();
    const Eigen::Matrix4d d = info.bottomRightCorner<4, 4>();
    EffectiveFim out;
    out.singular = scaled_condition(d) > kSingularCondition;
    if (out.singular) {
        out.info = a;
        return out;
    }
    const Eigen::Matrix4d d_inv = spd_inverse(d);
    out.info = a - b * d_inv * b.transpose();
    out.info = 0.5 * (out.info + out.info.transpose());
    return out;
}

struct StateJacobian {
    Mat12x8 matrix = Mat12x8::Zero(); // rows: eta, cols: [p_R, yaw, p_U, beta]; gain rows zero
    bool singular = false;            // boresight/gimbal direction
};

namespace detail {

// d(azimuth, elevation)/dv of the direction of a (not necessarily unit) vector v.
inline Eigen::Matrix<double, 2, 3> angle_gradient(const Vec3 &v, bool &gimbal)
{
    const double rho2 = v.x() * v.x() + v.y() * v.y();
    const double rho = std::sqrt(rho2);
    const double n2 = v.squaredNorm();
    Eigen::Matrix<double, 2, 3> g = Eigen::Matrix<double, 2, 3>::Zero();
    if (rho <= 1e-12 * std::sqrt(n2)) {
        gimbal = true;
        return g;
    }
    g.row(0) << -v.y() / rho2, v.x() / rho2, 0.0;
    g.row(1) << -v.x() * v.z() / (n2 * rho), -v.y() * v.z() / (n2 * rho), rho / n2;
    return g;
}

} // namespace detail

inline StateJacobian state_jacobian(const Scene &scene)
{
    StateJacobian out;
    auto &J = out.matrix;
    const Vec3 &pb = scene.bs;
    const Vec3 &pr = scene.ris.position;
    const Vec3 &pu = scene.user.position;

    const auto bu = direction_and_distance(pb, pu);
    const auto br = direction_and_distance(pb, pr);
    const auto rb = direction_and_distance(pr, pb);
    const auto ru = direction_and_distance(pr, pu);

    J.block<2, 3>(kPhiBU, kUserX) = detail::angle_gradient(pu - pb, out.singular);
    J.block<2, 3>(kPhiBR, kRisX) = detail::angle_gradient(pr - pb, out.singular);

    const Mat3 rot = euler_to_rotation(scene.ris.orientation);
    const Mat3 d_rot = rotation_yaw_derivative(scene.ris.orientation);
    const Mat3 eye = Mat3::Identity();
    const Mat3 proj_rb = (eye - rb.direction * rb.direction.transpose()) / rb.distance;
    const Mat3 proj_ru = (eye - ru.direction * ru.direction.transpose()) / ru.distance;
    const Vec3 sum = rb.direction + ru.direction;

    const Mat3 d_sum_ris = rot.transpose() * (-proj_rb - proj_ru);
    const Mat3 d_sum_user = rot.transpose() * proj_ru;
    const Vec3 d_sum_yaw = d_rot.transpose() * sum;
    J.block<2, 3>(kVartheta2, kRisX) = d_sum_ris.bottomRows<2>();
    J.block<2, 3>(kVartheta2, kUserX) = d_sum_user.bottomRows<2>();
    J.block<2, 1>(kVartheta2, kRisYaw) = d_sum_yaw.tail<2>();

    J.block<1, 3>(kTauBU, kUserX) = bu.direction.transpose() / kSpeedOfLight;
    J(kTauBU, kClock) = 1.0;
    J.block<1, 3>(kTauR, kRisX) = (br.direction - ru.direction).transpose() / kSpeedOfLight;
    J.block<1, 3>(kTauR, kUserX) = ru.direction.transpose() / kSpeedOfLight;
    J(kTauR, kClock) = 1.0;
    return out;
}

struct StateFim {
    Eigen::MatrixXd info;
    bool singular = false;
    double condition = 0.0; // after unit-diagonal scaling

    int users() const { return static_cast<int>((info.rows() - kRisStateSize) / kUserStateSize); }
};

inline StateFim make_state_fim(Eigen::MatrixXd info)
{
    StateFim out;
    out.info = 0.5 * (info + info.transpose());
    out.condition = scaled_condition(out.info);
    out.singular = !(out.condition <= kSingularCondition);
    return out;
}

// I(s) = J^T I_eff J with J restricted to the geometric rows.
inline StateFim state_fim(const Mat8 &efim, const Mat12x8 &jacobian)
{
    const Mat8 j = jacobian.topRows<8>();
    return make_state_fim(j.transpose() * efim * j);
}

// Users occupy independent resources, so their information adds; the RIS
// block is shared and accumulates across users.
inline StateFim multi_user_state_fim(std::span<const Mat8> efims, std::span<const Mat12x8> jacobians)
{
    if (efims.empty() || efims.size() != jacobians.size())
        throw std::invalid_argument("multi_user_state_fim: need one EFIM and one Jacobian per user (M >= 1)");
    const int m_users = static_cast<int>(efims.size());
    const int n = kRisStateSize + kUserStateSize * m_users;
    Eigen::MatrixXd info = Eigen::MatrixXd::Zero(n, n);
    for (int m = 0; m < m_users; ++m) {
        Eigen::MatrixXd embedded = Eigen::MatrixXd::Zero(kNumGeometricParams, n);
        embedded.leftCols<kRisStateSize>() = jacobians[m].topLeftCorner<8, kRisStateSize>();
        embedded.middleCols(kRisStateSize + kUserStateSize * m, kUserStateSize) =
            jacobians[m].topRightCorner<8, kUserStateSize>();
        info.noalias() += embedded.transpose() * efims[m] * embedded;
    }
    return make_state_fim(std::move(info));
}

// Lower bounds in SI units (m, rad, s). Known parameters report 0.
struct Bounds {
    double ris_position = 0.0;
    double ris_orientation = 0.0;
    std::vector<double> user_position;
    std::vector<double> clock_offset;
    bool singular = false;
    bool empty = false;

    // Root-mean-square over users; convenient for multi-user summaries.
    double user_position_rms() const { return rms(user_position); }
    double clock_offset_rms() const { return rms(clock_offset); }

  private:
    static double rms(const std::vector<double> &v)
    {
        if (v.empty())
            return 0.0;
        double s = 0.0;
        for (double x : v)
            s += x * x;
        return std::sqrt(s / static_cast<double>(v.size()));
    }
};

namespace detail {

inline Bounds bounds_from_covariance(const Eigen::MatrixXd &cov, int users)
{
    auto trace3 = [&](int i) { return std::sqrt(std::max(0.0, cov(i, i) + cov(i + 1, i + 1) + cov(i + 2, i + 2))); };
    Bounds b;
    b.ris_position = trace3(kRisX);
    b.ris_orientation = std::sqrt(std::max(0.0, cov(kRisYaw, kRisYaw)));
    for (int m = 0; m < users; ++m) {
        const int base = kRisStateSize + kUserStateSize * m;
        b.user_position.push_back(trace3(base));
        b.clock_offset.push_back(std::sqrt(std::max(0.0, cov(base + 3, base + 3))));
    }
    return b;
}

inline Bounds infinite_bounds(int users)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    Bounds b;
    b.ris_position = inf;
    b.ris_orientation = inf;
    b.user_position.assign(users, inf);
    b.clock_offset.assign(users, inf);
    b.singular = true;
    return b;
}

} // namespace detail

inline Bounds extract_bounds(const StateFim &fim)
{
    const int users = fim.users();
    if (fim.singular)
        return detail::infinite_bounds(users);
    return detail::bounds_from_covariance(spd_inverse(fim.info), users);
}

// Bounds when the parameters at `known` (0-based state indices) are given:
// their rows and columns are deleted before inversion.
inline Bounds known_state_variants(const StateFim &fim, std::span<const int> known)
{
    const int n = static_cast<int>(fim.info.rows());
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (std::find(known.begin(), known.end(), i) == known.end())
            keep.push_back(i);
    for (int k : known)
        if (k < 0 || k >= n)
            throw std::out_of_range("known_state_variants: state index out of range");

    Bounds b;
    if (keep.empty()) {
        b = detail::bounds_from_covariance(Eigen::MatrixXd::Zero(n, n), fim.users());
        b.empty = true;
        return b;
    }
    const auto r = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXd reduced(r, r);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j)
            reduced(i, j) = fim.info(keep[i], keep[j]);
    if (!(scaled_condition(reduced) <= kSingularCondition))
        return detail::infinite_bounds(fim.users());
    const Eigen::MatrixXd inv = spd_inverse(reduced);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j)
            cov(keep[i], keep[j]) = inv(i, j);
    return detail::bounds_from_covariance(cov, fim.users());
}

// ---- per-scene pipeline -------------------------------------------------------

// Resource share of one user: a contiguous block of subcarriers. The transmit
// power is spread evenly over `power_subcarriers` (0: over the block itself,
// i.e. the user's full power lands on its own allocation).
struct ResourceShare {
    int first_subcarrier = 0;
    int subcarriers = 0; // 0 selects the whole band
    int power_subcarriers = 0;
};

struct SceneAnalysis {
    ChannelParams params;
    Mat12 channel_info = Mat12::Zero();
    EffectiveFim efim;
    StateJacobian jacobian;
    StateFim state;
    Bounds bounds;
    bool blind = false; // any singularity on the way
};

inline SceneAnalysis analyze_scene(const Scene &scene, const System &sys, const SoundingPlan &plan,
                                   const ChannelGains &gains, ResourceShare share = {})
{
    const int k_active = share.subcarriers > 0 ? share.subcarriers : sys.waveform.subcarriers;
    const int k_power = share.power_subcarriers > 0 ? share.power_subcarriers : k_active;
    SoundingPlan scaled = plan;
    const double unit = std::abs(plan.pilot) > 0.0 ? std::abs(plan.pilot) : 1.0;
    scaled.pilot = plan.pilot / unit * std::sqrt(pilot_energy(sys.waveform, k_power));

    SceneAnalysis out;
    out.params = channel_params(scene, gains);
    out.jacobian = state_jacobian(scene);
    if (out.params.gimbal || out.jacobian.singular) {
        out.blind = true;
        out.efim.singular = true;
        out.state.info = Eigen::MatrixXd::Zero(8, 8);
        out.state.singular = true;
        out.state.condition = std::numeric_limits<double>::infinity();
        out.bounds = detail::infinite_bounds(1);
        return out;
    }
    const SignalModel model = SignalModel::from(sys);
    out.channel_info = channel_fim(model, out.params.values, scaled, noise_variance(sys.waveform), k_active,
                                   share.first_subcarrier);
    out.efim = effective_fim(out.channel_info);
    out.state = state_fim(out.efim.info, out.jacobian.matrix);
    out.state.singular = out.state.singular || out.efim.singular;
    out.bounds = extract_bounds(out.state);
    out.blind = out.state.singular;
    return out;
}

} // namespace riscal

#endif // RISCAL_FIM_HPP
