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

#ifndef RISCAL_ESTIMATOR_HPP
#define RISCAL_ESTIMATOR_HPP

#include "riscal/fim.hpp"
#include "riscal/geometry.hpp"
#include "riscal/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace riscal {

// Raised when no usable initial state exists or the measurement cannot be
// generated (blind scene).
class EstimationError : public std::runtime_error {
  public:
    explicit EstimationError(const std::string &what) : std::runtime_error(what) {}
};

struct Measurement {
    Vec8 eta = Vec8::Zero();        // measured geometric channel parameters
    Mat8 covariance = Mat8::Zero(); // inverse EFIM used to draw the noise
    Mat8 weight = Mat8::Zero();     // the EFIM itself
};

// Draws eta_hat = eta + L z with L L^T = EFIM^{-1}.
class MeasurementSampler {
  public:
    MeasurementSampler(const Vec8 &eta, const EffectiveFim &efim) : eta_(eta), weight_(efim.info)
    {
        if (efim.singular || !(scaled_condition(efim.info) <= kSingularCondition))
            throw EstimationError("cannot synthesize a measurement: effective FIM is singular (blind scene)");
        covariance_ = spd_inverse(efim.info);
        Eigen::LLT<Mat8> llt(covariance_);
        if (llt.info() == Eigen::Success) {
            factor_ = llt.matrixL();
        } else {
            Eigen::SelfAdjointEigenSolver<Mat8> es(covariance_);
            factor_ = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
        }
    }

    const Mat8 &covariance() const { return covariance_; }
    const Mat8 &factor() const { return factor_; }

    Measurement draw(Rng &rng) const
    {
        std::normal_distribution<double> n01;
        Vec8 z;
        for (int i = 0; i < 8; ++i)
            z[i] = n01(rng);
        return make(eta_ + factor_ * z);
    }

    Measurement exact() const { return make(eta_); }

  private:
    Measurement make(const Vec8 &eta) const { return {eta, covariance_, weight_}; }

    Vec8 eta_;
    Mat8 weight_;
    Mat8 covariance_;
    Mat8 factor_;
};

inline Measurement synthesize_measurement(const Vec8 &eta, const EffectiveFim &efim, std::uint64_t seed,
                                          bool zero_noise = false)
{
    const MeasurementSampler sampler(eta, efim);
    if (zero_noise)
        return sampler.exact();
    Rng rng(seed);
    return sampler.draw(rng);
}

// ---- Algorithm 1 --------------------------------------------------------------

struct Box {
    Vec3 lo = Vec3::Zero();
    Vec3 hi = Vec3::Zero();

    bool contains(const Vec3 &p) const { return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all(); }
};

struct InitSearchConfig {
    Box user_prior{Vec3(0.0, 0.0, -5.5), Vec3(10.0, 10.0, -4.5)};
    double yaw_min = -kPi; // exclusive
    double yaw_max = kPi;  // inclusive
    double distance_step = 0.1;
    double yaw_step = 0.1 * kPi / 180.0;
    bool coarse_to_fine = false;
    double basin_threshold = 0.02; // cells with cost <= threshold belong to a basin
    EulerOrientation mounting;     // known pitch and roll of the RIS; yaw ignored

    void validate() const
    {
        if (!(distance_step > 0.0) || !(yaw_step > 0.0))
            throw std::invalid_argument("init search: steps must be positive");
        if (!(yaw_max > yaw_min))
            throw std::invalid_argument("init search: empty orientation prior");
        if ((user_prior.hi.array() < user_prior.lo.array()).any())
            throw std::invalid_argument("init search: empty user prior box");
        if (!(basin_threshold > 0.0))
            throw std::invalid_argument("init search: basin threshold must be positive");
    }
};

// Distances along the ray p + t*dir (t >= 0, dir unit) that lie inside the box.
inline std::pair<double, double> ray_box_distance_range(const Vec3 &origin, const Vec3 &dir, const Box &box)
{
    double t0 = 0.0;
    double t1 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        if (std::abs(dir[i]) < 1e-15) {
            if (origin[i] < box.lo[i] || origin[i] > box.hi[i])
                throw EstimationError("user direction misses the prior area");
            continue;
        }
        double a = (box.lo[i] - origin[i]) / dir[i];
        double b = (box.hi[i] - origin[i]) / dir[i];
        if (a > b)
            std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
    }
    if (!(t1 >= t0))
        throw EstimationError("user direction misses the prior area");
    return {t0, t1};
}

// Point p_B + r u on the ellipsoid with foci p_B, p_U and focal-distance sum
// d_R, or nothing if the intersection is not in front of p_B.
inline std::optional<Vec3> ellipsoid_ray_intersect(const Vec3 &pb, const Vec3 &pu, double d_r, const Vec3 &u)
{
    const Vec3 q = pb - pu;
    const double den = 2.0 * (d_r + q.dot(u));
    const double num = d_r * d_r - q.squaredNorm();
    if (!(den > 0.0) || !(num > 0.0))
        return std::nullopt;
    return pb + (num / den) * u;
}

// Delta over the (distance, yaw) grid; rows are distances, columns yaws.
struct CostSurface {
    std::vector<double> distances;
    std::vector<double> yaws;
    Eigen::MatrixXd cost;
    Eigen::Index best_row = -1;
    Eigen::Index best_col = -1;
    std::vector<int> basin_labels; // row-major, -1 outside every basin
    int basins = 0;
    bool periodic_yaw = false;

    int basin_of(Eigen::Index r, Eigen::Index c) const
    {
        return basin_labels.empty() ? -1 : basin_labels[static_cast<std::size_t>(r * cost.cols() + c)];
    }

    double min_cost() const { return best_row < 0 ? std::numeric_limits<double>::infinity() : cost(best_row, best_col); }
};

// Connected components (4-neighbour) of cells with cost <= threshold; the yaw
// axis wraps when it spans the full circle. Returns the number of components.
inline int label_basins(const Eigen::MatrixXd &cost, double threshold, bool periodic_yaw, std::vector<int> &label)
{
    const Eigen::Index nr = cost.rows(), nc = cost.cols();
    label.assign(static_cast<std::size_t>(nr * nc), -1);
    auto idx = [nc](Eigen::Index r, Eigen::Index c) { return static_cast<std::size_t>(r * nc + c); };
    int basins = 0;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> stack;
    for (Eigen::Index r0 = 0; r0 < nr; ++r0) {
        for (Eigen::Index c0 = 0; c0 < nc; ++c0) {
            if (!(cost(r0, c0) <= threshold) || label[idx(r0, c0)] >= 0)
                continue;
            stack.assign(1, {r0, c0});
            label[idx(r0, c0)] = basins;
            while (!stack.empty()) {
                auto [r, c] = stack.back();
                stack.pop_back();
                const std::pair<Eigen::Index, Eigen::Index> nb[4] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
                for (auto [rr, cc] : nb) {
                    if (periodic_yaw)
                        cc = (cc + nc) % nc;
                    if (rr < 0 || rr >= nr || cc < 0 || cc >= nc)
                        continue;
                    if (cost(rr, cc) <= threshold && label[idx(rr, cc)] < 0) {
                        label[idx(rr, cc)] = basins;
                        stack.emplace_back(rr, cc);
                    }
                }
            }
            ++basins;
        }
    }
    return basins;
}

inline int count_basins(const Eigen::MatrixXd &cost, double threshold, bool periodic_yaw)
{
    std::vector<int> label;
    return label_basins(cost, threshold, periodic_yaw, label);
}

struct InitResult {
    Vec8 state = Vec8::Zero(); // [p_R, yaw, p_U, beta]
    double distance = 0.0;     // LoS distance d0 at the optimum
    double min_cost = 0.0;
    CostSurface surface;
};

namespace detail {

// Candidate built from one LoS distance: everything except the yaw.
struct DistanceCandidate {
    bool feasible = false;
    Vec3 user = Vec3::Zero();
    Vec3 ris = Vec3::Zero();
    double clock = 0.0;
    Vec3 t_rb = Vec3::Zero();
    Vec3 t_ru = Vec3::Zero();
};

inline DistanceCandidate distance_candidate(const Measurement &m, const Vec3 &pb, double d0)
{
    DistanceCandidate c;
    const Vec3 t_bu = local_direction_from_angles({m.eta[kPhiBU], m.eta[kThetaBU]});
    const Vec3 t_br = local_direction_from_angles({m.eta[kPhiBR], m.eta[kThetaBR]});
    c.clock = m.eta[kTauBU] - d0 / kSpeedOfLight;
    c.user = pb + d0 * t_bu;
    const double d_r = (m.eta[kTauR] - c.clock) * kSpeedOfLight;
    const auto ris = ellipsoid_ray_intersect(pb, c.user, d_r, t_br);
    if (!ris)
        return c;
    c.ris = *ris;
    const Vec3 rb = pb - c.ris, ru = c.user - c.ris;
    if (!(rb.norm() > 0.0) || !(ru.norm() > 0.0))
        return c;
    c.t_rb = rb.normalized();
    c.t_ru = ru.normalized();
    c.feasible = true;
    return c;
}

// Delta for one orientation; +inf when the BS or the user would sit behind the RIS.
inline double candidate_cost(const DistanceCandidate &c, const Measurement &m, const Mat3 &rot)
{
    if (!c.feasible)
        return std::numeric_limits<double>::infinity();
    const Vec3 rb = rot.transpose() * c.t_rb;
    const Vec3 ru = rot.transpose() * c.t_ru;
    if (!(rb.x() > 0.0) || !(ru.x() > 0.0))
        return std::numeric_limits<double>::infinity();
    const Vec3 sum = rb + ru;
    return std::hypot(sum.y() - m.eta[kVartheta2], sum.z() - m.eta[kVartheta3]);
}

inline std::vector<double> aligned_grid(double lo, double hi, double step, bool open_low)
{
    // Multiples of `step` inside [lo, hi] (or (lo, hi] when open_low).
    std::vector<double> out;
    auto i0 = static_cast<long long>(std::ceil(lo / step - 1e-9));
    const auto i1 = static_cast<long long>(std::floor(hi / step + 1e-9));
    if (open_low && static_cast<double>(i0) * step <= lo + 1e-12 * std::max(1.0, std::abs(lo)))
        ++i0;
    for (long long i = i0; i <= i1; ++i)
        out.push_back(static_cast<double>(i) * step);
    return out;
}

inline CostSurface evaluate_surface(const Measurement &m, const Vec3 &pb, const InitSearchConfig &cfg,
                                    const std::vector<double> &distances, const std::vector<double> &yaws)
{
    CostSurface s;
    s.distances = distances;
    s.yaws = yaws;
    s.cost.resize(static_cast<Eigen::Index>(distances.size()), static_cast<Eigen::Index>(yaws.size()));
    std::vector<Mat3> rots;
    rots.reserve(yaws.size());
    for (double y : yaws) {
        EulerOrientation o = cfg.mounting;
        o.yaw = y;
        rots.push_back(euler_to_rotation(o));
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < distances.size(); ++r) {
        const auto cand = distance_candidate(m, pb, distances[r]);
        for (std::size_t c = 0; c < yaws.size(); ++c) {
            const double v = candidate_cost(cand, m, rots[c]);
            s.cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
            if (v < best) {
                best = v;
                s.best_row = static_cast<Eigen::Index>(r);
                s.best_col = static_cast<Eigen::Index>(c);
            }
        }
    }
    s.periodic_yaw = cfg.yaw_max - cfg.yaw_min >= 2.0 * kPi - 1e-9;
    s.basins = label_basins(s.cost, cfg.basin_threshold, s.periodic_yaw, s.basin_labels);
    return s;
}

} // namespace detail

inline Vec8 make_state(const Vec3 &ris, double yaw, const Vec3 &user, double clock)
{
    Vec8 s;
    s << ris, yaw, user, clock;
    return s;
}

// Grid search over (LoS distance, yaw) minimising the mismatch between the
// predicted and measured intermediate direction components.
inline InitResult initialize(const Measurement &m, const InitSearchConfig &cfg, const Vec3 &pb)
{
    cfg.validate();
    const Vec3 t_bu = local_direction_from_angles({m.eta[kPhiBU], m.eta[kThetaBU]});
    const auto [d_lo, d_hi] = ray_box_distance_range(pb, t_bu, cfg.user_prior);

    const double ds = cfg.coarse_to_fine ? 5.0 * cfg.distance_step : cfg.distance_step;
    const double ys = cfg.coarse_to_fine ? 5.0 * cfg.yaw_step : cfg.yaw_step;
    auto distances = detail::aligned_grid(std::max(d_lo, ds), d_hi, ds, false);
    auto yaws = detail::aligned_grid(cfg.yaw_min, cfg.yaw_max, ys, true);
    if (distances.empty() || yaws.empty())
        throw EstimationError("initialization grid is empty");

    InitResult out;
    out.surface = detail::evaluate_surface(m, pb, cfg, distances, yaws);
    if (!std::isfinite(out.surface.min_cost()))
        throw EstimationError("initialization failed: every grid candidate is infeasible");

    double best_d = out.surface.distances[static_cast<std::size_t>(out.surface.best_row)];
    double best_y = out.surface.yaws[static_cast<std::size_t>(out.surface.best_col)];
    if (cfg.coarse_to_fine) {
        // Local fine grid of +-1 coarse step around the coarse optimum.
        auto fd = detail::aligned_grid(std::max({best_d - ds, d_lo, cfg.distance_step}), std::min(best_d + ds, d_hi),
                                       cfg.distance_step, false);
        std::vector<double> fy;
        for (double y : detail::aligned_grid(best_y - ys, best_y + ys, cfg.yaw_step, false)) {
            const double w = wrap_angle(y);
            if (w > cfg.yaw_min && w <= cfg.yaw_max)
                fy.push_back(w);
        }
        if (!fd.empty() && !fy.empty()) {
            const auto fine = detail::evaluate_surface(m, pb, cfg, fd, fy);
            if (fine.min_cost() <= out.surface.min_cost()) {
                best_d = fine.distances[static_cast<std::size_t>(fine.best_row)];
                best_y = fine.yaws[static_cast<std::size_t>(fine.best_col)];
            }
        }
    }

    const auto cand = detail::distance_candidate(m, pb, best_d);
    out.distance = best_d;
    EulerOrientation o = cfg.mounting;
    o.yaw = best_y;
    out.min_cost = detail::candidate_cost(cand, m, euler_to_rotation(o));
    out.state = make_state(cand.ris, best_y, cand.user, cand.clock);
    return out;
}

struct MultiInitResult {
    Eigen::VectorXd state; // [p_R, yaw, (p_U, beta) per user]
    std::vector<std::optional<InitResult>> per_user;
    int failed_users = 0;
};

// Per-user grid searches; the shared RIS state is the 1/Delta_min weighted
// average of the per-user RIS estimates (circular mean for the yaw).
inline MultiInitResult multi_user_initialize(std::span<const Measurement> ms, const InitSearchConfig &cfg,
                                             const Vec3 &pb)
{
    if (ms.empty())
        throw std::invalid_argument("multi_user_initialize: need at least one user");
    const int n_users = static_cast<int>(ms.size());
    MultiInitResult out;
    out.state = Eigen::VectorXd::Zero(kRisStateSize + kUserStateSize * n_users);
    Vec3 ris_sum = Vec3::Zero();
    double w_sum = 0.0, sin_sum = 0.0, cos_sum = 0.0;
    for (int u = 0; u < n_users; ++u) {
        try {
            auto r = initialize(ms[static_cast<std::size_t>(u)], cfg, pb);
            const double w = 1.0 / std::max(r.min_cost, 1e-12);
            ris_sum += w * r.state.head<3>();
            sin_sum += w * std::sin(r.state[kRisYaw]);
            cos_sum += w * std::cos(r.state[kRisYaw]);
            w_sum += w;
            out.state.segment<kUserStateSize>(kRisStateSize + kUserStateSize * u) = r.state.tail<4>();
            out.per_user.emplace_back(std::move(r));
        } catch (const EstimationError &) {
            out.per_user.emplace_back(std::nullopt);
            ++out.failed_users;
        }
    }
    if (w_sum == 0.0)
        throw EstimationError("initialization failed for every user");
    out.state.head<3>() = ris_sum / w_sum;
    out.state[kRisYaw] = std::atan2(sin_sum, cos_sum);
    // Users whose own search failed start from the BS-direction at the mean LoS distance of the others.
    double mean_d = 0.0;
    int n_ok = 0;
    for (const auto &r : out.per_user)
        if (r) {
            mean_d += r->distance;
            ++n_ok;
        }
    mean_d /= n_ok;
    for (int u = 0; u < n_users; ++u) {
        if (out.per_user[static_cast<std::size_t>(u)])
            continue;
        const auto &m = ms[static_cast<std::size_t>(u)];
        const Vec3 dir = local_direction_from_angles({m.eta[kPhiBU], m.eta[kThetaBU]});
        out.state.segment<3>(kRisStateSize + kUserStateSize * u) = pb + mean_d * dir;
        out.state[kRisStateSize + kUserStateSize * u + 3] = m.eta[kTauBU] - mean_d / kSpeedOfLight;
    }
    return out;
}

// ---- Gauss-Newton refinement ---------------------------------------------------

struct GaussNewtonConfig {
    int max_iterations = 30;
    double step_tolerance = 1e-9; // on the step norm with the clock offset scaled by c
    int max_backtracks = 10;
    double initial_damping = 1e-6;
    int max_damping_escalations = 12;
};

struct EstimationResult {
    Eigen::VectorXd initial;
    Eigen::VectorXd refined;
    std::vector<Eigen::VectorXd> trace; // iterate after every accepted step
    std::vector<double> cost_trace;     // weighted cost at each iterate, starting with the initial one
    bool converged = false;
    bool failed = false;
    int iterations = 0;
    std::string message;
};

namespace detail {

inline Scene scene_from_state(const Vec3 &pb, const EulerOrientation &mounting, const Eigen::VectorXd &s, int user)
{
    Scene sc;
    sc.bs = pb;
    sc.ris.position = s.head<3>();
    sc.ris.orientation = mounting;
    sc.ris.orientation.yaw = s[kRisYaw];
    const int base = kRisStateSize + kUserStateSize * user;
    sc.user.position = s.segment<3>(base);
    sc.user.clock_offset = s[base + 3];
    return sc;
}

inline Vec8 residual(const Measurement &m, const Scene &sc)
{
    Vec8 r = m.eta - geometric_params(sc.bs, sc.ris, sc.user).values;
    for (int i : {kPhiBU, kThetaBU, kPhiBR, kThetaBR})
        r[i] = wrap_angle(r[i]);
    return r;
}

inline double weighted_cost(std::span<const Measurement> ms, const Vec3 &pb, const EulerOrientation &mounting,
                            const Eigen::VectorXd &s)
{
    double total = 0.0;
    for (std::size_t u = 0; u < ms.size(); ++u) {
        try {
            const Vec8 r = residual(ms[u], scene_from_state(pb, mounting, s, static_cast<int>(u)));
            total += r.dot(ms[u].weight * r);
        } catch (const GeometryError &) {
            return std::numeric_limits<double>::infinity();
        }
    }
    return std::isfinite(total) ? total : std::numeric_limits<double>::infinity();
}

inline double step_norm(const Eigen::VectorXd &d)
{
    Eigen::VectorXd scaled = d;
    for (Eigen::Index i = kRisStateSize + 3; i < d.size(); i += kUserStateSize)
        scaled[i] *= kSpeedOfLight;
    return scaled.norm();
}

} // namespace detail

// Weighted Gauss-Newton on eta(s) with backtracking and Levenberg-style
// damping when the normal matrix is singular. The state layout is
// [p_R, yaw, (p_U, beta) per measurement].
inline EstimationResult gauss_newton_refine(std::span<const Measurement> ms, const Eigen::VectorXd &initial,
                                            const Vec3 &pb, const EulerOrientation &mounting,
                                            const GaussNewtonConfig &cfg = {})
{
    const int n_users = static_cast<int>(ms.size());
    const Eigen::Index n = kRisStateSize + kUserStateSize * n_users;
    if (n_users < 1 || initial.size() != n)
        throw std::invalid_argument("gauss_newton_refine: state size does not match the number of users");

    EstimationResult res;
    res.initial = initial;
    Eigen::VectorXd s = initial;
    double cost = detail::weighted_cost(ms, pb, mounting, s);
    res.cost_trace.push_back(cost);
    if (!std::isfinite(cost)) {
        res.failed = true;
        res.message = "initial state is degenerate";
        res.refined = s;
        return res;
    }

    for (int it = 0; it < cfg.max_iterations; ++it) {
        Eigen::MatrixXd info = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
        for (int u = 0; u < n_users; ++u) {
            const Scene sc = detail::scene_from_state(pb, mounting, s, u);
            const Mat8 j = state_jacobian(sc).matrix.topRows<8>();
            Eigen::MatrixXd embedded = Eigen::MatrixXd::Zero(8, n);
            embedded.leftCols<kRisStateSize>() = j.leftCols<kRisStateSize>();
            embedded.middleCols(kRisStateSize + kUserStateSize * u, kUserStateSize) = j.rightCols<kUserStateSize>();
            const auto &m = ms[static_cast<std::size_t>(u)];
            info.noalias() += embedded.transpose() * m.weight * embedded;
            grad.noalias() += embedded.transpose() * (m.weight * detail::residual(m, sc));
        }

        Eigen::MatrixXd normal = info;
        double lambda = cfg.initial_damping;
        int escalations = 0;
        while (!(scaled_condition(normal) <= kSingularCondition)) {
            if (escalations++ >= cfg.max_damping_escalations) {
                res.failed = true;
                res.message = "normal matrix singular after damping";
                res.refined = s;
                res.iterations = it;
                return res;
            }
            normal = info;
            normal.diagonal() += lambda * info.diagonal().cwiseMax(1e-300);
            lambda *= 10.0;
        }
        Eigen::VectorXd delta = spd_inverse(normal) * grad;

        Eigen::VectorXd next = s + delta;
        next[kRisYaw] = wrap_angle(next[kRisYaw]);
        double next_cost = detail::weighted_cost(ms, pb, mounting, next);
        int halvings = 0;
        while (!(next_cost <= cost) && halvings < cfg.max_backtracks) {
            delta *= 0.5;
            next = s + delta;
            next[kRisYaw] = wrap_angle(next[kRisYaw]);
            next_cost = detail::weighted_cost(ms, pb, mounting, next);
            ++halvings;
        }
        res.iterations = it + 1;
        if (!(next_cost <= cost)) {
            // No descent along the GN direction; the iterate is a stationary point to working precision.
            res.converged = detail::step_norm(delta) < 1e-6;
            res.message = "no descent after backtracking";
            break;
        }
        s = next;
        cost = next_cost;
        res.trace.push_back(s);
        res.cost_trace.push_back(cost);
        if (detail::step_norm(delta) < cfg.step_tolerance) {
            res.converged = true;
            break;
        }
    }
    res.refined = s;
    return res;
}

inline EstimationResult gauss_newton_refine(const Measurement &m, const Vec8 &initial, const Vec3 &pb,
                                            const EulerOrientation &mounting, const GaussNewtonConfig &cfg = {})
{
    return gauss_newton_refine(std::span<const Measurement>(&m, 1), Eigen::VectorXd(initial), pb, mounting, cfg);
}

} // namespace riscal

#endif // RISCAL_ESTIMATOR_HPP
