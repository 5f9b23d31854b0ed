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

#ifndef RISCAL_CHANNEL_HPP
#define RISCAL_CHANNEL_HPP

#include "riscal/geometry.hpp"
#include "riscal/random.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>

namespace riscal {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;

// OFDM numerology and link budget. Defaults are the 28 GHz evaluation setup.
struct WaveformConfig {
    double carrier_hz = 28e9;
    double bandwidth_hz = 400e6;
    int subcarriers = 128;   // K
    int transmissions = 500; // G
    double tx_power_dbm = 30.0;
    double noise_psd_dbm_hz = -173.8;
    double noise_figure_db = 10.0;

    double subcarrier_spacing() const { return bandwidth_hz / subcarriers; }
    double wavelength() const { return kSpeedOfLight / carrier_hz; }

    void validate() const
    {
        if (subcarriers < 1 || transmissions < 1)
            throw std::invalid_argument("waveform: subcarriers and transmissions must be >= 1");
        if (!(carrier_hz > 0.0) || !(bandwidth_hz > 0.0))
            throw std::invalid_argument("waveform: carrier and bandwidth must be positive");
    }
};

// Uniform planar array in the local y-z plane, centred on the local origin.
struct ArrayConfig {
    int rows = 16;        // along local z
    int cols = 16;        // along local y
    double spacing = 0.0; // meters; 0 selects half a carrier wavelength

    int size() const { return rows * cols; }

    // 3 x N element positions; first coordinate is always 0.
    Eigen::Matrix3Xd element_positions(double wavelength) const
    {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("array: rows and cols must be >= 1");
        const double d = spacing > 0.0 ? spacing : wavelength / 2.0;
        Eigen::Matrix3Xd p(3, size());
        int n = 0;
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c, ++n)
                p.col(n) << 0.0, (c - (cols - 1) / 2.0) * d, (r - (rows - 1) / 2.0) * d;
        return p;
    }
};

struct System {
    WaveformConfig waveform;
    ArrayConfig bs_array{16, 16, 0.0};
    ArrayConfig ris_array{20, 20, 0.0};
};

// e^{j 2pi/lambda p^T t} per element.
inline CVec steering_vector(const Eigen::Matrix3Xd &elements, const Vec3 &local_dir, double wavelength)
{
    const double k = 2.0 * kPi / wavelength;
    const Eigen::VectorXd phase = k * (elements.transpose() * local_dir);
    CVec a(phase.size());
    for (Eigen::Index i = 0; i < phase.size(); ++i)
        a[i] = std::polar(1.0, phase[i]);
    return a;
}

inline cd delay_phase(double tau, double spacing_hz, int k)
{
    return std::polar(1.0, -2.0 * kPi * spacing_hz * k * tau);
}

inline CVec bu_channel(cd gain, const CVec &a_bu, double tau_bu, double spacing_hz, int k)
{
    return gain * delay_phase(tau_bu, spacing_hz, k) * a_bu;
}

inline CVec ris_channel(cd gain, const CVec &a_br, const CVec &a_rb, const CVec &a_ru, const CVec &profile,
                        double tau_r, double spacing_hz, int k)
{
    if (a_rb.size() != a_ru.size() || a_rb.size() != profile.size())
        throw std::invalid_argument("ris_channel: RIS dimension mismatch");
    // a_RB^T diag(omega) a_RU
    const cd reflect = (a_rb.array() * profile.array() * a_ru.array()).sum();
    return gain * reflect * delay_phase(tau_r, spacing_hz, k) * a_br;
}

// Random RIS phase profiles and BS combiners for every transmission, and a
// common pilot symbol. Row g of each matrix belongs to transmission g.
struct SoundingPlan {
    Eigen::MatrixXcd ris_profiles; // G x N_R, unit modulus
    Eigen::MatrixXcd combiners;    // G x N_B, entries of modulus 1/sqrt(N_B)
    cd pilot{1.0, 0.0};            // x_{g,k}, identical for all g, k

    int transmissions() const { return static_cast<int>(ris_profiles.rows()); }
};

inline SoundingPlan make_sounding_plan(std::uint64_t seed, int transmissions, int n_ris, int n_bs,
                                       cd pilot = {1.0, 0.0})
{
    if (transmissions < 1 || n_ris < 1 || n_bs < 1)
        throw std::invalid_argument("make_sounding_plan: dimensions must be positive");
    Rng rng(seed);
    std::uniform_real_distribution<double> phase(-kPi, kPi);
    SoundingPlan plan;
    plan.pilot = pilot;
    plan.ris_profiles.resize(transmissions, n_ris);
    plan.combiners.resize(transmissions, n_bs);
    const double w = 1.0 / std::sqrt(static_cast<double>(n_bs));
    for (int g = 0; g < transmissions; ++g) {
        for (int i = 0; i < n_ris; ++i)
            plan.ris_profiles(g, i) = std::polar(1.0, phase(rng));
        for (int b = 0; b < n_bs; ++b)
            plan.combiners(g, b) = std::polar(w, phase(rng));
    }
    return plan;
}

struct ChannelGains {
    cd direct{0.0, 0.0};  // alpha_BU
    cd via_ris{0.0, 0.0}; // alpha_R
};

// Free-space amplitudes with seeded uniform phases.
inline ChannelGains path_gains(const Vec3 &bs, const Vec3 &ris, const Vec3 &user, double wavelength,
                               std::uint64_t seed)
{
    const double d_bu = direction_and_distance(bs, user).distance;
    const double d_br = direction_and_distance(bs, ris).distance;
    const double d_ru = direction_and_distance(ris, user).distance;
    Rng rng(seed);
    std::uniform_real_distribution<double> phase(-kPi, kPi);
    const double four_pi = 4.0 * kPi;
    ChannelGains g;
    g.direct = std::polar(wavelength / (four_pi * d_bu), phase(rng));
    g.via_ris = std::polar(wavelength * wavelength / (four_pi * four_pi * d_br * d_ru), phase(rng));
    return g;
}

// mu_{g,k} = w_g^T h x.
inline cd noise_free_symbol(const SoundingPlan &plan, const CVec &h, int g, int /*k*/)
{
    if (h.size() != plan.combiners.cols())
        throw std::invalid_argument("noise_free_symbol: channel length does not match combiner");
    return (plan.combiners.row(g).transpose().array() * h.array()).sum() * plan.pilot;
}

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

// Per-subcarrier noise power in mW (unit-norm combiner leaves it unchanged).
inline double noise_variance(const WaveformConfig &cfg)
{
    return dbm_to_mw(cfg.noise_psd_dbm_hz + cfg.noise_figure_db) * cfg.subcarrier_spacing();
}

// Pilot energy per subcarrier in mW when the transmit power is spread over
// `active_subcarriers`.
inline double pilot_energy(const WaveformConfig &cfg, int active_subcarriers)
{
    return dbm_to_mw(cfg.tx_power_dbm) / active_subcarriers;
}

inline double pilot_energy(const WaveformConfig &cfg) { return pilot_energy(cfg, cfg.subcarriers); }

// All steering vectors, gains and delays of one scene, evaluated from the
// geometry (the "physical" route, independent of the channel-parameter
// parameterisation used by the Fisher information code).
struct SceneChannel {
    CVec a_bu, a_br, a_rb, a_ru;
    ChannelGains gains;
    PathDelays delays{};
    double spacing_hz = 0.0;

    CVec direct(int k) const { return bu_channel(gains.direct, a_bu, delays.direct, spacing_hz, k); }
    CVec reflected(const SoundingPlan &plan, int g, int k) const
    {
        return ris_channel(gains.via_ris, a_br, a_rb, a_ru, plan.ris_profiles.row(g).transpose(), delays.via_ris,
                           spacing_hz, k);
    }
    CVec channel(const SoundingPlan &plan, int g, int k) const { return direct(k) + reflected(plan, g, k); }
};

inline SceneChannel build_scene_channel(const Scene &scene, const System &sys, const ChannelGains &gains)
{
    const double lambda = sys.waveform.wavelength();
    const Eigen::Matrix3Xd bs_el = sys.bs_array.element_positions(lambda);
    const Eigen::Matrix3Xd ris_el = sys.ris_array.element_positions(lambda);
    const Mat3 rot = euler_to_rotation(scene.ris.orientation);

    SceneChannel sc;
    sc.a_bu = steering_vector(bs_el, direction_and_distance(scene.bs, scene.user.position).direction, lambda);
    sc.a_br = steering_vector(bs_el, direction_and_distance(scene.bs, scene.ris.position).direction, lambda);
    sc.a_rb = steering_vector(
        ris_el, global_to_local_direction(rot, direction_and_distance(scene.ris.position, scene.bs).direction),
        lambda);
    sc.a_ru = steering_vector(
        ris_el,
        global_to_local_direction(rot, direction_and_distance(scene.ris.position, scene.user.position).direction),
        lambda);
    sc.gains = gains;
    sc.delays = path_delays(scene.bs, scene.ris.position, scene.user.position, scene.user.clock_offset);
    sc.spacing_hz = sys.waveform.subcarrier_spacing();
    return sc;
}

} // namespace riscal

#endif // RISCAL_CHANNEL_HPP
