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

#ifndef RISCAL_EXPERIMENTS_HPP
#define RISCAL_EXPERIMENTS_HPP

#include "riscal/channel.hpp"
#include "riscal/estimator.hpp"
#include "riscal/fim.hpp"
#include "riscal/random.hpp"
#include "riscal/scenario.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace riscal {

// Seed tags. Every random draw is keyed by (master seed, tag, indices).
enum SeedTag : std::uint64_t {
    kTagPlan = 1,
    kTagGains = 2,
    kTagMeasurement = 3,
    kTagUsers = 4,
    kTagTrial = 5,
};

inline unsigned default_workers()
{
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// Runs f(i) for i in [0, n) on a small pool. Exceptions are rethrown on the
// calling thread after all workers finish.
template <class F>
void parallel_for(std::size_t n, unsigned workers, F &&f)
{
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                f(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    for (unsigned w = 0; w < count; ++w)
        pool.emplace_back(body);
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

struct RunOptions {
    bool zero_noise = false;
    bool full_fidelity = false;
    unsigned workers = 0; // 0: one per hardware thread
    std::ostream *log = nullptr;

    unsigned worker_count() const { return workers == 0 ? default_workers() : workers; }
};

// ---- shared pieces ------------------------------------------------------------

inline double to_deg(double rad) { return rad * 180.0 / kPi; }
inline double to_ns(double s) { return s * 1e9; }

// Number formatting for CSV: %.10g, infinities as `inf`.
inline std::string csv_number(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "inf"; // only reachable for undefined bounds; never emit NaN
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline ResourceShare user_share(const ScenarioConfig &cfg, int user, int users)
{
    const int k = cfg.system.waveform.subcarriers;
    ResourceShare s;
    if (!cfg.multi_user.split_subcarriers || users <= 1) {
        s.subcarriers = k;
        return s;
    }
    const int per = k / users;
    if (per < 1)
        throw ConfigError("config: fewer subcarriers than users");
    s.first_subcarrier = user * per;
    s.subcarriers = per;
    s.power_subcarriers = cfg.multi_user.full_power_per_user ? per : k;
    return s;
}

struct UserLink {
    Scene scene;
    ChannelGains gains;
    SceneAnalysis analysis;
};

inline UserLink analyze_user(const System &sys, const SoundingPlan &plan, const Scene &scene, std::uint64_t gain_seed,
                             ResourceShare share)
{
    UserLink l;
    l.scene = scene;
    l.gains = path_gains(scene.bs, scene.ris.position, scene.user.position, sys.waveform.wavelength(), gain_seed);
    l.analysis = analyze_scene(scene, sys, plan, l.gains, share);
    return l;
}

inline SoundingPlan plan_for(const System &sys, std::uint64_t seed)
{
    return make_sounding_plan(seed, sys.waveform.transmissions, sys.ris_array.size(), sys.bs_array.size());
}

inline StateFim combined_state_fim(const std::vector<UserLink> &links)
{
    std::vector<Mat8> efims;
    std::vector<Mat12x8> jacobians;
    for (const auto &l : links) {
        efims.push_back(l.analysis.efim.info);
        jacobians.push_back(l.analysis.jacobian.matrix);
    }
    StateFim f = multi_user_state_fim(efims, jacobians);
    for (const auto &l : links)
        f.singular = f.singular || l.analysis.blind;
    return f;
}

// Known-state indices of the single-user layout mapped onto M users.
inline std::vector<int> known_indices(const KnownState &k, int users)
{
    std::vector<int> out;
    if (k.ris_y)
        out.push_back(kRisY);
    if (k.ris_orientation)
        out.push_back(kRisYaw);
    if (k.user_position)
        for (int m = 0; m < users; ++m)
            for (int i = 0; i < 3; ++i)
                out.push_back(kRisStateSize + kUserStateSize * m + i);
    return out;
}

// Known parameters are removed before the singularity test, so a variant can
// be finite where the benchmark is not. Singularity from the channel level or a
// gimbal direction (flagged although the state condition is fine) is final.
inline Bounds bounds_with_known(const StateFim &f, const KnownState &k)
{
    const auto idx = known_indices(k, f.users());
    if (idx.empty() || (f.singular && f.condition <= kSingularCondition))
        return extract_bounds(f);
    return known_state_variants(f, idx);
}

// ---- bounds-map -----------------------------------------------------------------

struct BoundsMapRow {
    double x = 0.0, y = 0.0;
    Bounds bounds;
    double condition = 0.0;
};

// Sweeps the user over the map area (grid includes the edges) at the area's
// lower z. Without full fidelity the sounding budget is capped at G = 50.
inline std::vector<BoundsMapRow> run_bounds_map(const ScenarioConfig &cfg, int nx, int ny, const RunOptions &opt)
{
    if (nx < 2 || ny < 2)
        throw ConfigError("bounds-map: grid needs at least 2 points per axis");
    System sys = cfg.system;
    if (!opt.full_fidelity)
        sys.waveform.transmissions = std::min(sys.waveform.transmissions, 50);
    const SoundingPlan plan = plan_for(sys, derive_seed(cfg.seed, {kTagPlan}));
    const Box &a = cfg.map_area;
    std::vector<BoundsMapRow> rows(static_cast<std::size_t>(nx * ny));
    parallel_for(rows.size(), opt.worker_count(), [&](std::size_t i) {
        const int ix = static_cast<int>(i) / ny, iy = static_cast<int>(i) % ny;
        BoundsMapRow &r = rows[i];
        r.x = a.lo.x() + (a.hi.x() - a.lo.x()) * ix / (nx - 1);
        r.y = a.lo.y() + (a.hi.y() - a.lo.y()) * iy / (ny - 1);
        Scene sc = cfg.scene();
        sc.user.position = Vec3(r.x, r.y, a.lo.z());
        try {
            const auto link = analyze_user(sys, plan, sc, derive_seed(cfg.seed, {kTagGains, i}), {});
            r.bounds = bounds_with_known(link.analysis.state, cfg.known);
            r.condition = link.analysis.state.condition;
        } catch (const GeometryError &) {
            r.bounds = detail::infinite_bounds(1);
            r.condition = std::numeric_limits<double>::infinity();
        }
    });
    return rows;
}

inline void write_bounds_map_csv(std::ostream &os, const std::vector<BoundsMapRow> &rows)
{
    os << "x,y,user_bound_m,ris_bound_m,orient_bound_deg,clock_bound_ns,singular\n";
    for (const auto &r : rows) {
        const auto &b = r.bounds;
        os << csv_number(r.x) << ',' << csv_number(r.y) << ',' << csv_number(b.user_position.at(0)) << ','
           << csv_number(b.ris_position) << ',' << csv_number(to_deg(b.ris_orientation)) << ','
           << csv_number(to_ns(b.clock_offset.at(0))) << ',' << (b.singular ? 1 : 0) << '\n';
    }
}

// ---- bounds-vs-ris-size -----------------------------------------------------------

inline constexpr const char *kVariantNames[] = {"benchmark", "known_pRy", "known_oR", "known_pU"};

struct RisSizeRow {
    int ris_elements = 0;
    std::string variant;
    Bounds bounds;
};

inline KnownState variant_known(const std::string &v)
{
    KnownState k;
    if (v == "known_pRy")
        k.ris_y = true;
    else if (v == "known_oR")
        k.ris_orientation = true;
    else if (v == "known_pU")
        k.user_position = true;
    else if (v != "benchmark")
        throw ConfigError("unknown known-state variant '" + v + "'");
    return k;
}

inline std::vector<RisSizeRow> run_bounds_vs_ris_size(const ScenarioConfig &cfg, const std::vector<int> &sizes,
                                                      const std::vector<std::string> &variants, const RunOptions &opt)
{
    for (int n : sizes) {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
        if (n < 1 || side * side != n)
            throw ConfigError("bounds-vs-ris-size: " + std::to_string(n) + " is not a perfect square");
    }
    for (const auto &v : variants)
        (void)variant_known(v);

    std::vector<StateFim> fims(sizes.size());
    parallel_for(sizes.size(), opt.worker_count(), [&](std::size_t i) {
        System sys = cfg.system;
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(sizes[i]))));
        sys.ris_array.rows = side;
        sys.ris_array.cols = side;
        const SoundingPlan plan = plan_for(sys, derive_seed(cfg.seed, {kTagPlan, static_cast<std::uint64_t>(sizes[i])}));
        const auto link = analyze_user(sys, plan, cfg.scene(), derive_seed(cfg.seed, {kTagGains}), {});
        fims[i] = link.analysis.state;
    });
    std::vector<RisSizeRow> rows;
    for (std::size_t i = 0; i < sizes.size(); ++i)
        for (const auto &v : variants)
            rows.push_back({sizes[i], v, bounds_with_known(fims[i], variant_known(v))});
    return rows;
}

inline void write_ris_size_csv(std::ostream &os, const std::vector<RisSizeRow> &rows)
{
    os << "n_ris,variant,user_bound_m,ris_bound_m,orient_bound_deg,clock_bound_ns,singular\n";
    for (const auto &r : rows) {
        const auto &b = r.bounds;
        os << r.ris_elements << ',' << r.variant << ',' << csv_number(b.user_position.at(0)) << ','
           << csv_number(b.ris_position) << ',' << csv_number(to_deg(b.ris_orientation)) << ','
           << csv_number(to_ns(b.clock_offset.at(0))) << ',' << (b.singular ? 1 : 0) << '\n';
    }
}

// ---- estimation ---------------------------------------------------------------------

struct StateErrors {
    double ris_position = 0.0;    // m
    double ris_orientation = 0.0; // rad, wrapped
    std::vector<double> user_position;
    std::vector<double> clock_offset; // s
};

inline Eigen::VectorXd true_state(const Scene &first, const std::vector<Scene> &scenes)
{
    Eigen::VectorXd s(kRisStateSize + kUserStateSize * static_cast<Eigen::Index>(scenes.size()));
    s.head<3>() = first.ris.position;
    s[kRisYaw] = first.ris.orientation.yaw;
    for (std::size_t m = 0; m < scenes.size(); ++m) {
        const auto base = static_cast<Eigen::Index>(kRisStateSize + kUserStateSize * m);
        s.segment<3>(base) = scenes[m].user.position;
        s[base + 3] = scenes[m].user.clock_offset;
    }
    return s;
}

inline StateErrors state_errors(const Eigen::VectorXd &est, const Eigen::VectorXd &truth)
{
    StateErrors e;
    e.ris_position = (est.head<3>() - truth.head<3>()).norm();
    e.ris_orientation = std::abs(wrap_angle(est[kRisYaw] - truth[kRisYaw]));
    for (Eigen::Index base = kRisStateSize; base < est.size(); base += kUserStateSize) {
        e.user_position.push_back((est.segment<3>(base) - truth.segment<3>(base)).norm());
        e.clock_offset.push_back(std::abs(est[base + 3] - truth[base + 3]));
    }
    return e;
}

// One end-to-end run over the users of a scene: bounds, measurements,
// initialization and refinement.
struct Trial {
    std::vector<UserLink> links;
    StateFim state_fim;
    Bounds bounds;
    std::vector<Measurement> measurements;
    std::optional<MultiInitResult> init;
    std::optional<EstimationResult> refined;
    Eigen::VectorXd truth;
    bool singular = false;
    std::string failure;
};

inline Trial run_trial(const ScenarioConfig &cfg, const System &sys, const std::vector<Scene> &scenes,
                       std::uint64_t seed, bool zero_noise)
{
    Trial t;
    const int users = static_cast<int>(scenes.size());
    const SoundingPlan plan = plan_for(sys, derive_seed(seed, {kTagPlan}));
    for (int m = 0; m < users; ++m)
        t.links.push_back(analyze_user(sys, plan, scenes[static_cast<std::size_t>(m)],
                                       derive_seed(seed, {kTagGains, static_cast<std::uint64_t>(m)}),
                                       user_share(cfg, m, users)));
    t.state_fim = combined_state_fim(t.links);
    t.bounds = extract_bounds(t.state_fim);
    t.truth = true_state(scenes.front(), scenes);
    t.singular = t.state_fim.singular;
    if (t.singular) {
        t.failure = "singular scene";
        return t;
    }
    for (int m = 0; m < users; ++m) {
        const auto &l = t.links[static_cast<std::size_t>(m)];
        t.measurements.push_back(synthesize_measurement(
            l.analysis.params.geometric(), l.analysis.efim,
            derive_seed(seed, {kTagMeasurement, static_cast<std::uint64_t>(m)}), zero_noise));
    }
    try {
        t.init = multi_user_initialize(t.measurements, cfg.init, scenes.front().bs);
    } catch (const EstimationError &e) {
        t.failure = e.what();
        return t;
    }
    GaussNewtonConfig gn;
    gn.max_iterations = cfg.gn_iterations;
    t.refined = gauss_newton_refine(t.measurements, t.init->state, scenes.front().bs, cfg.init.mounting, gn);
    if (t.refined->failed)
        t.failure = t.refined->message;
    return t;
}

inline nlohmann::json state_json(const Eigen::VectorXd &s)
{
    nlohmann::json j;
    j["ris_position_m"] = {s[0], s[1], s[2]};
    j["ris_yaw_deg"] = to_deg(s[kRisYaw]);
    nlohmann::json us = nlohmann::json::array();
    for (Eigen::Index base = kRisStateSize; base < s.size(); base += kUserStateSize)
        us.push_back({{"position_m", {s[base], s[base + 1], s[base + 2]}}, {"clock_offset_ns", to_ns(s[base + 3])}});
    j["users"] = us;
    return j;
}

inline nlohmann::json errors_json(const StateErrors &e)
{
    nlohmann::json j;
    j["ris_position_m"] = e.ris_position;
    j["ris_orientation_deg"] = to_deg(e.ris_orientation);
    j["user_position_m"] = e.user_position;
    nlohmann::json c = nlohmann::json::array();
    for (double v : e.clock_offset)
        c.push_back(to_ns(v));
    j["clock_offset_ns"] = c;
    return j;
}

inline nlohmann::json finite_or_string(double v)
{
    if (std::isfinite(v))
        return v;
    return csv_number(v);
}

inline nlohmann::json bounds_json(const Bounds &b)
{
    nlohmann::json j;
    j["singular"] = b.singular;
    j["ris_position_m"] = finite_or_string(b.ris_position);
    j["ris_orientation_deg"] = finite_or_string(to_deg(b.ris_orientation));
    nlohmann::json u = nlohmann::json::array(), c = nlohmann::json::array();
    for (double v : b.user_position)
        u.push_back(finite_or_string(v));
    for (double v : b.clock_offset)
        c.push_back(finite_or_string(to_ns(v)));
    j["user_position_m"] = u;
    j["clock_offset_ns"] = c;
    return j;
}

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitEstimation = 3, kExitSingular = 4 };

struct EstimateOutput {
    nlohmann::json json;
    int exit_code = kExitOk;
};

inline EstimateOutput run_estimate(const ScenarioConfig &cfg, const RunOptions &opt)
{
    std::vector<Scene> scenes;
    for (std::size_t m = 0; m < cfg.users.size(); ++m)
        scenes.push_back(cfg.scene(m));
    EstimateOutput out;
    auto &j = out.json;
    j["users"] = static_cast<int>(scenes.size());
    j["zero_noise"] = opt.zero_noise;
    j["warnings"] = nlohmann::json::array();

    const Trial t = run_trial(cfg, cfg.system, scenes, cfg.seed, opt.zero_noise);
    j["truth"] = state_json(t.truth);
    j["bounds"] = bounds_json(t.bounds);
    if (t.singular) {
        j["status"] = "singular_scene";
        j["error"] = "state FIM is singular; the scene is in a blind area";
        out.exit_code = kExitSingular;
        return out;
    }
    if (t.init) {
        for (std::size_t m = 0; m < t.init->per_user.size(); ++m) {
            const auto &r = t.init->per_user[m];
            if (r && r->surface.basins >= 2)
                j["warnings"].push_back("user " + std::to_string(m) + ": ambiguous initialization, " +
                                        std::to_string(r->surface.basins) + " separate low-cost basins");
            if (!r)
                j["warnings"].push_back("user " + std::to_string(m) + ": initialization failed");
        }
        j["initial"] = state_json(t.init->state);
        j["initial_errors"] = errors_json(state_errors(t.init->state, t.truth));
    }
    if (t.refined) {
        const auto &r = *t.refined;
        j["refined"] = state_json(r.refined);
        j["refined_errors"] = errors_json(state_errors(r.refined, t.truth));
        j["iterations"] = r.iterations;
        j["converged"] = r.converged;
        nlohmann::json trace = nlohmann::json::array();
        for (std::size_t i = 0; i < r.trace.size(); ++i)
            trace.push_back({{"iteration", i + 1}, {"cost", r.cost_trace[i + 1]}, {"state", state_json(r.trace[i])}});
        j["trace"] = trace;
    }
    if (!t.failure.empty()) {
        j["status"] = "estimation_failed";
        j["error"] = t.failure;
        out.exit_code = kExitEstimation;
    } else {
        j["status"] = "ok";
    }
    return out;
}

// ---- mc-sweep-users --------------------------------------------------------------------

struct McRow {
    int users = 0;
    int trials = 0;
    int singular = 0;
    int failures = 0;
    // Means of the per-trial bounds (user bounds are RMS over users).
    double bound_ris_m = 0, bound_user_m = 0, bound_clock_ns = 0, bound_orient_deg = 0;
    double gn_ris_m = 0, gn_user_m = 0, gn_clock_ns = 0, gn_orient_deg = 0;
    double init_ris_m = 0, init_user_m = 0, init_clock_ns = 0, init_orient_deg = 0;
};

inline std::vector<Scene> sample_users(const ScenarioConfig &cfg, int users, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<Scene> out;
    for (int m = 0; m < users; ++m) {
        Scene s = cfg.scene();
        for (int i = 0; i < 3; ++i) {
            std::uniform_real_distribution<double> u(cfg.sampling_area.lo[i], cfg.sampling_area.hi[i]);
            s.user.position[i] = cfg.sampling_area.lo[i] == cfg.sampling_area.hi[i] ? cfg.sampling_area.lo[i] : u(rng);
        }
        s.user.clock_offset = cfg.sampled_clock_offset;
        out.push_back(s);
    }
    return out;
}

inline std::vector<McRow> run_mc_sweep_users(const ScenarioConfig &cfg, const std::vector<int> &user_counts,
                                             int trials, const RunOptions &opt)
{
    if (trials < 1)
        throw ConfigError("mc-sweep-users: trials must be >= 1");
    std::vector<McRow> rows;
    for (int users : user_counts) {
        if (users < 1)
            throw ConfigError("mc-sweep-users: user counts must be >= 1");
        std::vector<Trial> results(static_cast<std::size_t>(trials));
        parallel_for(results.size(), opt.worker_count(), [&](std::size_t i) {
            const std::uint64_t seed = derive_seed(cfg.seed, {kTagTrial, static_cast<std::uint64_t>(users), i});
            results[i] = run_trial(cfg, cfg.system, sample_users(cfg, users, derive_seed(seed, {kTagUsers})), seed,
                                   opt.zero_noise);
        });

        McRow row;
        row.users = users;
        row.trials = trials;
        int n_bounds = 0, n_gn = 0, n_init = 0;
        for (const auto &t : results) {
            if (t.singular) {
                ++row.singular;
                continue;
            }
            ++n_bounds;
            row.bound_ris_m += t.bounds.ris_position;
            row.bound_user_m += t.bounds.user_position_rms();
            row.bound_clock_ns += to_ns(t.bounds.clock_offset_rms());
            row.bound_orient_deg += to_deg(t.bounds.ris_orientation);
            if (t.init) {
                const auto e = state_errors(t.init->state, t.truth);
                ++n_init;
                row.init_ris_m += e.ris_position * e.ris_position;
                row.init_orient_deg += e.ris_orientation * e.ris_orientation;
                for (std::size_t m = 0; m < e.user_position.size(); ++m) {
                    row.init_user_m += e.user_position[m] * e.user_position[m] / users;
                    row.init_clock_ns += e.clock_offset[m] * e.clock_offset[m] / users;
                }
            }
            if (!t.failure.empty()) {
                ++row.failures;
                continue;
            }
            const auto e = state_errors(t.refined->refined, t.truth);
            ++n_gn;
            row.gn_ris_m += e.ris_position * e.ris_position;
            row.gn_orient_deg += e.ris_orientation * e.ris_orientation;
            for (std::size_t m = 0; m < e.user_position.size(); ++m) {
                row.gn_user_m += e.user_position[m] * e.user_position[m] / users;
                row.gn_clock_ns += e.clock_offset[m] * e.clock_offset[m] / users;
            }
        }
        const double inf = std::numeric_limits<double>::infinity();
        auto mean = [&](double &v, int n) { v = n > 0 ? v / n : inf; };
        auto rms = [&](double &v, int n, double scale) { v = n > 0 ? std::sqrt(v / n) * scale : inf; };
        mean(row.bound_ris_m, n_bounds);
        mean(row.bound_user_m, n_bounds);
        mean(row.bound_clock_ns, n_bounds);
        mean(row.bound_orient_deg, n_bounds);
        rms(row.gn_ris_m, n_gn, 1.0);
        rms(row.gn_user_m, n_gn, 1.0);
        rms(row.gn_clock_ns, n_gn, 1e9);
        rms(row.gn_orient_deg, n_gn, 180.0 / kPi);
        rms(row.init_ris_m, n_init, 1.0);
        rms(row.init_user_m, n_init, 1.0);
        rms(row.init_clock_ns, n_init, 1e9);
        rms(row.init_orient_deg, n_init, 180.0 / kPi);
        if (opt.log)
            *opt.log << "mc-sweep-users: M=" << users << " done (" << row.singular << " singular, " << row.failures
                     << " failed)\n";
        rows.push_back(row);
    }
    return rows;
}

inline void write_mc_csv(std::ostream &os, const std::vector<McRow> &rows)
{
    os << "users,trials,singular,failures,"
          "bound_ris_m,bound_user_m,bound_clock_ns,bound_orient_deg,"
          "gn_rmse_ris_m,gn_rmse_user_m,gn_rmse_clock_ns,gn_rmse_orient_deg,"
          "init_rmse_ris_m,init_rmse_user_m,init_rmse_clock_ns,init_rmse_orient_deg\n";
    for (const auto &r : rows) {
        os << r.users << ',' << r.trials << ',' << r.singular << ',' << r.failures;
        for (double v : {r.bound_ris_m, r.bound_user_m, r.bound_clock_ns, r.bound_orient_deg, r.gn_ris_m, r.gn_user_m,
                         r.gn_clock_ns, r.gn_orient_deg, r.init_ris_m, r.init_user_m, r.init_clock_ns,
                         r.init_orient_deg})
            os << ',' << csv_number(v);
        os << '\n';
    }
}

// ---- cost-surface ---------------------------------------------------------------------

struct CostSurfaceRun {
    InitResult init;
    Scene scene;
    bool singular = false;
};

// The noiseless path does not need the EFIM, so it also works for scenes
// whose information matrix is singular.
inline CostSurfaceRun run_cost_surface(const ScenarioConfig &cfg, const Vec3 &user, const RunOptions &opt)
{
    CostSurfaceRun out;
    out.scene = cfg.scene();
    out.scene.user.position = user;
    const SoundingPlan plan = plan_for(cfg.system, derive_seed(cfg.seed, {kTagPlan}));
    const auto link = analyze_user(cfg.system, plan, out.scene, derive_seed(cfg.seed, {kTagGains}), {});
    out.singular = link.analysis.blind;
    Measurement m;
    if (opt.zero_noise) {
        m.eta = link.analysis.params.geometric();
    } else {
        if (out.singular)
            throw EstimationError("cannot draw a noisy measurement in a singular scene");
        m = synthesize_measurement(link.analysis.params.geometric(), link.analysis.efim,
                                   derive_seed(cfg.seed, {kTagMeasurement}), false);
    }
    out.init = initialize(m, cfg.init, out.scene.bs);
    return out;
}

inline void write_cost_surface_csv(std::ostream &os, const CostSurface &s)
{
    os << "d0_m,o3_deg,cost,argmin,basin\n";
    for (Eigen::Index r = 0; r < s.cost.rows(); ++r)
        for (Eigen::Index c = 0; c < s.cost.cols(); ++c)
            os << csv_number(s.distances[static_cast<std::size_t>(r)]) << ','
               << csv_number(to_deg(s.yaws[static_cast<std::size_t>(c)])) << ',' << csv_number(s.cost(r, c)) << ','
               << (r == s.best_row && c == s.best_col ? 1 : 0) << ',' << s.basin_of(r, c) << '\n';
}

} // namespace riscal

#endif // RISCAL_EXPERIMENTS_HPP
