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

#ifndef RISCAL_TESTS_SUPPORT_HPP
#define RISCAL_TESTS_SUPPORT_HPP

#include "riscal/channel.hpp"
#include "riscal/fim.hpp"
#include "riscal/geometry.hpp"
#include "riscal/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace riscal::test {

inline double uniform(Rng &rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// The evaluation layout: BS at the origin facing +x, RIS at [4,10,0] facing -y.
inline Scene reference_scene(const Vec3 &user, double clock = 10e-9)
{
    Scene s;
    s.ris.position = Vec3(4.0, 10.0, 0.0);
    s.ris.orientation = {0.0, 0.0, -kPi / 2};
    s.user.position = user;
    s.user.clock_offset = clock;
    return s;
}

// Random scene with the BS and the user in front of the RIS and nothing close
// to a gimbal direction. Pitch and roll are randomised as well.
inline Scene random_scene(Rng &rng, bool tilt = true)
{
    for (;;) {
        Scene s;
        s.ris.position = Vec3(uniform(rng, 2.0, 6.0), uniform(rng, 8.0, 12.0), uniform(rng, -1.0, 1.0));
        s.ris.orientation.yaw = uniform(rng, -kPi / 2 - 0.4, -kPi / 2 + 0.4);
        if (tilt) {
            s.ris.orientation.pitch = uniform(rng, -0.2, 0.2);
            s.ris.orientation.roll = uniform(rng, -0.2, 0.2);
        }
        s.user.position = Vec3(uniform(rng, 1.0, 9.0), uniform(rng, 1.0, 7.5), uniform(rng, -6.0, -4.0));
        s.user.clock_offset = uniform(rng, -20e-9, 50e-9);
        const Mat3 r = euler_to_rotation(s.ris.orientation);
        const Vec3 rb = r.transpose() * direction_and_distance(s.ris.position, s.bs).direction;
        const Vec3 ru = r.transpose() * direction_and_distance(s.ris.position, s.user.position).direction;
        if (rb.x() > 0.2 && ru.x() > 0.2)
            return s;
    }
}

inline ChannelGains random_gains(Rng &rng)
{
    return {std::polar(uniform(rng, 0.5, 2.0), uniform(rng, -kPi, kPi)),
            std::polar(uniform(rng, 0.5, 2.0), uniform(rng, -kPi, kPi))};
}

// Small arrays and budgets for derivative and structure checks.
inline System small_system(int bs_side = 4, int ris_side = 5, int k = 16, int g = 8)
{
    System sys;
    sys.bs_array = {bs_side, bs_side, 0.0};
    sys.ris_array = {ris_side, ris_side, 0.0};
    sys.waveform.subcarriers = k;
    sys.waveform.transmissions = g;
    return sys;
}

// Five-point central difference.
template <class F>
auto central_difference(F &&f, double h) -> decltype(f(0.0))
{
    return (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
}

// Scene with state s = [p_R, yaw, p_U, beta] substituted.
inline Scene with_state(Scene base, const Vec8 &s)
{
    base.ris.position = s.head<3>();
    base.ris.orientation.yaw = s[kRisYaw];
    base.user.position = s.segment<3>(kUserX);
    base.user.clock_offset = s[kClock];
    return base;
}

inline Vec8 state_of(const Scene &sc)
{
    Vec8 s;
    s << sc.ris.position, sc.ris.orientation.yaw, sc.user.position, sc.user.clock_offset;
    return s;
}

// Finite-difference state Jacobian of the geometric channel parameters.
inline Mat8 numeric_state_jacobian(const Scene &sc)
{
    const Vec8 s0 = state_of(sc);
    const double steps[8] = {1e-4, 1e-4, 1e-4, 1e-5, 1e-4, 1e-4, 1e-4, 1e-12};
    Mat8 j;
    for (int c = 0; c < 8; ++c) {
        auto f = [&](double h) {
            Vec8 s = s0;
            s[c] += h;
            const Scene p = with_state(sc, s);
            return Vec8(geometric_params(p.bs, p.ris, p.user).values);
        };
        j.col(c) = central_difference(f, steps[c]);
    }
    return j;
}

// Per-row relative error of an analytic vs numeric state Jacobian, with the
// columns made dimensionless (m, rad, and beta scaled by c).
inline double jacobian_relative_error(const Mat8 &analytic, const Mat8 &numeric)
{
    Eigen::Matrix<double, 8, 1> col_scale = Eigen::Matrix<double, 8, 1>::Ones();
    col_scale[kClock] = 1.0 / kSpeedOfLight;
    double worst = 0.0;
    for (int r = 0; r < 8; ++r) {
        const Eigen::RowVectorXd a = analytic.row(r).cwiseProduct(col_scale.transpose());
        const Eigen::RowVectorXd n = numeric.row(r).cwiseProduct(col_scale.transpose());
        const double scale = a.cwiseAbs().maxCoeff();
        if (scale == 0.0)
            continue;
        worst = std::max(worst, (a - n).cwiseAbs().maxCoeff() / scale);
    }
    return worst;
}

// Per-parameter finite-difference steps for d mu / d eta.
inline Vec12 eta_steps(const Vec12 &eta)
{
    Vec12 h;
    h << 1e-5, 1e-5, 1e-5, 1e-5, 1e-5, 1e-5, 1e-14, 1e-14, 0, 0, 0, 0;
    const double gbu = std::hypot(eta[kRhoBU], eta[kXiBU]);
    const double gr = std::hypot(eta[kRhoR], eta[kXiR]);
    h[kRhoBU] = h[kXiBU] = 1e-4 * gbu;
    h[kRhoR] = h[kXiR] = 1e-4 * gr;
    return h;
}

inline CVec12 numeric_mu_gradient(const SignalModel &m, const Vec12 &eta, const SoundingPlan &plan, int g, int k)
{
    const Vec12 h = eta_steps(eta);
    CVec12 out;
    for (int i = 0; i < kNumChannelParams; ++i) {
        auto f = [&](double d) {
            Vec12 e = eta;
            e[i] += d;
            return mu_from_params(m, e, plan, g, k);
        };
        out[i] = central_difference(f, h[i]);
    }
    return out;
}

} // namespace riscal::test

#endif // RISCAL_TESTS_SUPPORT_HPP
