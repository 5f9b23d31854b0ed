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

#include "riscal/estimator.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace riscal;

namespace {

struct Link {
    Scene scene;
    SceneAnalysis analysis;

    Vec8 eta() const { return analysis.params.geometric(); }
    Vec8 truth() const { return test::state_of(scene); }
};

Link reference_link(const Vec3 &user)
{
    static const System sys;
    static const SoundingPlan plan =
        make_sounding_plan(17, sys.waveform.transmissions, sys.ris_array.size(), sys.bs_array.size());
    Link l;
    l.scene = test::reference_scene(user);
    const auto gains = path_gains(l.scene.bs, l.scene.ris.position, user, sys.waveform.wavelength(), 5);
    l.analysis = analyze_scene(l.scene, sys, plan, gains);
    return l;
}

Measurement exact_measurement(const Link &l) { return synthesize_measurement(l.eta(), l.analysis.efim, 0, true); }

std::size_t nearest(const std::vector<double> &grid, double v)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (std::abs(grid[i] - v) < std::abs(grid[best] - v))
            best = i;
    return best;
}

const Vec3 kGoodUser(3, 4, -5);

} // namespace

TEST(MeasurementSamplerTest, ZeroNoiseIsExact)
{
    const Link l = reference_link(kGoodUser);
    const Measurement m = exact_measurement(l);
    EXPECT_EQ(m.eta, l.eta());
    EXPECT_EQ(m.weight, l.analysis.efim.info);
    EXPECT_LT((m.covariance * m.weight - Mat8::Identity()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(MeasurementSamplerTest, SeededDraws)
{
    const Link l = reference_link(kGoodUser);
    const Measurement a = synthesize_measurement(l.eta(), l.analysis.efim, 99);
    const Measurement b = synthesize_measurement(l.eta(), l.analysis.efim, 99);
    const Measurement c = synthesize_measurement(l.eta(), l.analysis.efim, 100);
    EXPECT_EQ(a.eta, b.eta);
    EXPECT_NE(a.eta, c.eta);
    EXPECT_NE(a.eta, l.eta());
}

TEST(MeasurementSamplerTest, FactorReproducesCovariance)
{
    const Link l = reference_link(kGoodUser);
    const MeasurementSampler s(l.eta(), l.analysis.efim);
    const Mat8 ll = s.factor() * s.factor().transpose();
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            EXPECT_NEAR(ll(i, j), s.covariance()(i, j),
                        1e-8 * std::sqrt(s.covariance()(i, i) * s.covariance()(j, j)));
}

TEST(MeasurementSamplerTest, SingularEfimThrows)
{
    EffectiveFim e;
    e.info = Mat8::Identity();
    e.info(3, 3) = 0.0;
    EXPECT_THROW(MeasurementSampler(Vec8::Zero(), e), EstimationError);
    e.info = Mat8::Identity();
    e.singular = true;
    EXPECT_THROW(MeasurementSampler(Vec8::Zero(), e), EstimationError);
}

TEST(RayBox, Examples)
{
    const Box box{Vec3(1, -1, -1), Vec3(3, 1, 1)};
    auto [a, b] = ray_box_distance_range(Vec3::Zero(), Vec3::UnitX(), box);
    EXPECT_DOUBLE_EQ(a, 1.0);
    EXPECT_DOUBLE_EQ(b, 3.0);

    std::tie(a, b) = ray_box_distance_range(Vec3(2, 0, 0), Vec3::UnitX(), box);
    EXPECT_DOUBLE_EQ(a, 0.0);
    EXPECT_DOUBLE_EQ(b, 1.0);

    EXPECT_THROW(ray_box_distance_range(Vec3::Zero(), -Vec3::UnitX(), box), EstimationError);
    EXPECT_THROW(ray_box_distance_range(Vec3(0, 5, 0), Vec3::UnitX(), box), EstimationError);
}

TEST(EllipsoidRay, Examples)
{
    const Vec3 pu(2, 0, 0);
    auto p = ellipsoid_ray_intersect(Vec3::Zero(), pu, 4.0, Vec3::UnitY());
    ASSERT_TRUE(p);
    EXPECT_NEAR((*p - Vec3(0, 1.5, 0)).norm(), 0.0, 1e-15);

    p = ellipsoid_ray_intersect(Vec3::Zero(), pu, 4.0, -Vec3::UnitX());
    ASSERT_TRUE(p);
    EXPECT_NEAR((*p - Vec3(-1, 0, 0)).norm(), 0.0, 1e-15);

    EXPECT_FALSE(ellipsoid_ray_intersect(Vec3::Zero(), pu, 1.5, Vec3::UnitY()));
    EXPECT_FALSE(ellipsoid_ray_intersect(Vec3::Zero(), pu, 2.0, Vec3::UnitX()));
}

TEST(EllipsoidRay, PointLiesOnTheEllipsoid)
{
    Rng rng(12);
    for (int i = 0; i < 500; ++i) {
        const Vec3 pb = Vec3::Random(), pu = 5.0 * Vec3::Random();
        const double d_r = (pu - pb).norm() * test::uniform(rng, 1.01, 4.0);
        const Vec3 u = Vec3::Random().normalized();
        const auto p = ellipsoid_ray_intersect(pb, pu, d_r, u);
        ASSERT_TRUE(p);
        EXPECT_NEAR((*p - pb).norm() + (*p - pu).norm(), d_r, 1e-10 * d_r);
        EXPECT_GT((*p - pb).dot(u), 0.0);
    }
}

TEST(Basins, Labelling)
{
    Eigen::MatrixXd c(3, 5);
    c << 0, 1, 1, 1, 0,
         0, 1, 0, 1, 0,
         1, 1, 1, 1, 1;
    EXPECT_EQ(count_basins(c, 0.5, false), 3);
    EXPECT_EQ(count_basins(c, 0.5, true), 2);
    EXPECT_EQ(count_basins(c, 2.0, false), 1);
    EXPECT_EQ(count_basins(c, -1.0, false), 0);

    Eigen::MatrixXd diag = Eigen::MatrixXd::Ones(2, 2);
    diag(0, 0) = diag(1, 1) = 0.0;
    EXPECT_EQ(count_basins(diag, 0.5, false), 2); // 4-connectivity only

    std::vector<int> labels;
    label_basins(c, 0.5, true, labels);
    EXPECT_EQ(labels[0], labels[4]);
    EXPECT_EQ(labels[5 + 2], 1);
    EXPECT_EQ(labels[1], -1);
}

TEST(AlignedGrid, MultiplesOfTheStep)
{
    auto g = detail::aligned_grid(0.25, 1.0, 0.25, false);
    EXPECT_EQ(g, (std::vector<double>{0.25, 0.5, 0.75, 1.0}));
    g = detail::aligned_grid(-1.0, 1.0, 0.5, true);
    EXPECT_EQ(g, (std::vector<double>{-0.5, 0.0, 0.5, 1.0}));
    g = detail::aligned_grid(0.12, 0.38, 0.1, false);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_NEAR(g[0], 0.2, 1e-15);

    const auto yaws = detail::aligned_grid(-kPi, kPi, 0.1 * kPi / 180.0, true);
    EXPECT_EQ(yaws.size(), 3600u);
    EXPECT_GT(yaws.front(), -kPi);
    EXPECT_LE(yaws.back(), kPi);
}

TEST(InitSearchConfigTest, Validation)
{
    InitSearchConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.distance_step = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.yaw_max = cfg.yaw_min;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.user_prior.hi.x() = -1.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Initialize, NoiselessMinimumSitsAtTheTruthCell)
{
    const Link l = reference_link(kGoodUser);
    const Measurement m = exact_measurement(l);
    InitSearchConfig cfg;
    const InitResult r = initialize(m, cfg, l.scene.bs);
    const double d_true = kGoodUser.norm();
    const std::size_t row = nearest(r.surface.distances, d_true);
    const std::size_t col = nearest(r.surface.yaws, l.scene.ris.orientation.yaw);
    EXPECT_LE(std::abs(static_cast<long>(row) - static_cast<long>(r.surface.best_row)), 1);
    EXPECT_LE(std::abs(static_cast<long>(col) - static_cast<long>(r.surface.best_col)), 1);
    EXPECT_LE(std::abs(r.distance - d_true), cfg.distance_step);
    EXPECT_LE(std::abs(wrap_angle(r.state[kRisYaw] - l.scene.ris.orientation.yaw)), 2 * cfg.yaw_step);
    EXPECT_LE((r.state.segment<3>(kUserX) - kGoodUser).norm(), cfg.distance_step);
    EXPECT_LT((r.state.head<3>() - l.scene.ris.position).norm(), 0.5);
    EXPECT_EQ(r.surface.basins, 1);
    EXPECT_EQ(r.surface.basin_of(r.surface.best_row, r.surface.best_col), 0);
    EXPECT_TRUE(r.surface.periodic_yaw);
}

TEST(Initialize, CoarseToFineFindsTheSameCell)
{
    const Link l = reference_link(kGoodUser);
    const Measurement m = exact_measurement(l);
    InitSearchConfig cfg;
    const InitResult full = initialize(m, cfg, l.scene.bs);
    cfg.coarse_to_fine = true;
    const InitResult fast = initialize(m, cfg, l.scene.bs);
    EXPECT_NEAR(fast.distance, full.distance, 1e-9);
    EXPECT_NEAR(wrap_angle(fast.state[kRisYaw] - full.state[kRisYaw]), 0.0, 1e-9);
}

TEST(Initialize, UserOutsideThePriorFails)
{
    const Link l = reference_link(kGoodUser);
    InitSearchConfig cfg;
    cfg.user_prior = {Vec3(20, 20, 10), Vec3(30, 30, 11)};
    EXPECT_THROW(initialize(exact_measurement(l), cfg, l.scene.bs), EstimationError);
}

TEST(GaussNewton, TruthIsAFixedPoint)
{
    const Link l = reference_link(kGoodUser);
    const Measurement m = exact_measurement(l);
    const auto r = gauss_newton_refine(m, l.truth(), l.scene.bs, l.scene.ris.orientation);
    EXPECT_FALSE(r.failed);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 2);
    EXPECT_LT((r.refined.head<7>() - l.truth().head<7>()).norm(), 1e-9);
    EXPECT_LT(std::abs(r.refined[kClock] - l.truth()[kClock]), 1e-18);
}

TEST(GaussNewton, ConvergesFromTheGridInitialization)
{
    for (const Vec3 &user : {kGoodUser, Vec3(5, 6, -5), Vec3(7, 3, -5)}) {
        const Link l = reference_link(user);
        const Measurement m = exact_measurement(l);
        const InitResult init = initialize(m, {}, l.scene.bs);
        const auto r = gauss_newton_refine(m, init.state, l.scene.bs, l.scene.ris.orientation);
        EXPECT_TRUE(r.converged) << r.message;
        EXPECT_LT((r.refined.head<3>() - l.scene.ris.position).norm(), 1e-6);
        EXPECT_LT((r.refined.segment<3>(kUserX) - user).norm(), 1e-6);
        EXPECT_LT(std::abs(wrap_angle(r.refined[kRisYaw] - l.scene.ris.orientation.yaw)), 1e-8);
        for (std::size_t i = 1; i < r.cost_trace.size(); ++i)
            EXPECT_LE(r.cost_trace[i], r.cost_trace[i - 1]);
    }
}

TEST(GaussNewton, NoisyCostNeverIncreases)
{
    const Link l = reference_link(kGoodUser);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Measurement m = synthesize_measurement(l.eta(), l.analysis.efim, seed);
        const InitResult init = initialize(m, {}, l.scene.bs);
        const auto r = gauss_newton_refine(m, init.state, l.scene.bs, l.scene.ris.orientation);
        EXPECT_FALSE(r.failed);
        for (std::size_t i = 1; i < r.cost_trace.size(); ++i)
            EXPECT_LE(r.cost_trace[i], r.cost_trace[i - 1]);
        EXPECT_LE(r.cost_trace.back(), r.cost_trace.front());
    }
}

TEST(GaussNewton, RejectsMismatchedState)
{
    const Link l = reference_link(kGoodUser);
    const Measurement m = exact_measurement(l);
    EXPECT_THROW(gauss_newton_refine(std::span<const Measurement>(&m, 1), Eigen::VectorXd::Zero(12), l.scene.bs, {}),
                 std::invalid_argument);
}

TEST(MultiUserInit, SingleUserMatchesInitialize)
{
    const Link l = reference_link(kGoodUser);
    const std::vector<Measurement> ms{exact_measurement(l)};
    const MultiInitResult multi = multi_user_initialize(ms, {}, l.scene.bs);
    const InitResult single = initialize(ms[0], {}, l.scene.bs);
    EXPECT_LT((multi.state - Eigen::VectorXd(single.state)).norm(), 1e-12);
    EXPECT_EQ(multi.failed_users, 0);
}

TEST(MultiUserInit, DuplicatedUserKeepsTheRisEstimate)
{
    const Link l = reference_link(kGoodUser);
    const Measurement m = exact_measurement(l);
    const std::vector<Measurement> two{m, m};
    const MultiInitResult multi = multi_user_initialize(two, {}, l.scene.bs);
    const InitResult single = initialize(m, {}, l.scene.bs);
    EXPECT_LT((multi.state.head<3>() - single.state.head<3>()).norm(), 1e-12);
    EXPECT_NEAR(wrap_angle(multi.state[kRisYaw] - single.state[kRisYaw]), 0.0, 1e-12);
    EXPECT_EQ(multi.state.size(), 12);
}

TEST(MultiUserRefine, TwoUsersRecoverTheTruth)
{
    const Link a = reference_link(kGoodUser);
    const Link b = reference_link(Vec3(6, 5, -5));
    const std::vector<Measurement> ms{exact_measurement(a), exact_measurement(b)};
    const MultiInitResult init = multi_user_initialize(ms, {}, a.scene.bs);
    const auto r = gauss_newton_refine(ms, init.state, a.scene.bs, a.scene.ris.orientation);
    EXPECT_TRUE(r.converged) << r.message;
    EXPECT_LT((r.refined.head<3>() - a.scene.ris.position).norm(), 1e-6);
    EXPECT_LT((r.refined.segment<3>(kRisStateSize + kUserStateSize) - b.scene.user.position).norm(), 1e-6);
}
