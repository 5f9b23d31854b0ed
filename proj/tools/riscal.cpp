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
//
// Command-line driver: bound maps, RIS-size sweeps, single estimation runs,
// Monte Carlo sweeps over the number of users and cost-surface dumps.

#include "riscal/experiments.hpp"
#include "riscal/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Output {
    std::unique_ptr<std::ofstream> file;
    std::ostream &stream() { return file ? *file : std::cout; }
};

Output open_output(const std::string &path)
{
    Output o;
    if (!path.empty() && path != "-") {
        o.file = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*o.file)
            throw riscal::ConfigError("cannot open output file '" + path + "'");
    }
    return o;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Joint RIS calibration and user positioning: bounds and estimators"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    bool zero_noise = false;
    bool full_fidelity = false;
    unsigned workers = 0;
    app.add_option("--config", config_path, "Scenario configuration (JSON)")->required();
    app.add_option("--seed", seed, "Override the configured master seed");
    app.add_option("--out", out_path, "Output file (default: standard output)");
    app.add_flag("--zero-noise", zero_noise, "Use noiseless measurements");
    app.add_flag("--full-fidelity", full_fidelity, "Use the configured sounding budget for bound maps");
    app.add_option("--workers", workers, "Worker threads (0: one per hardware thread)");

    auto *map = app.add_subcommand("bounds-map", "Bounds over a grid of user positions (CSV)");
    int nx = 50, ny = 50;
    map->add_option("--nx", nx, "Grid points along x")->capture_default_str();
    map->add_option("--ny", ny, "Grid points along y")->capture_default_str();

    auto *sizes_cmd = app.add_subcommand("bounds-vs-ris-size", "Bounds versus RIS element count (CSV)");
    std::vector<int> sizes{4, 16, 36, 64, 100, 196, 400, 625, 900};
    std::vector<std::string> variants{"benchmark", "known_pRy", "known_oR", "known_pU"};
    sizes_cmd->add_option("--sizes", sizes, "Element counts (perfect squares)")->delimiter(',');
    sizes_cmd->add_option("--variants", variants, "benchmark, known_pRy, known_oR, known_pU")->delimiter(',');

    auto *est = app.add_subcommand("estimate", "Initialization and Gauss-Newton refinement (JSON)");

    auto *mc = app.add_subcommand("mc-sweep-users", "Monte Carlo bounds and RMSE versus number of users (CSV)");
    std::vector<int> user_counts{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::optional<int> trials;
    mc->add_option("--users", user_counts, "Numbers of users")->delimiter(',');
    mc->add_option("--trials", trials, "Trials per user count (default: from config)");

    auto *cost = app.add_subcommand("cost-surface", "Initialization cost over (LoS distance, yaw) (CSV)");
    std::vector<double> user_pos;
    cost->add_option("--user", user_pos, "User position x,y,z (default: first configured user)")
        ->delimiter(',')
        ->expected(3);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : riscal::kExitConfig;
    }

    riscal::RunOptions opt;
    opt.zero_noise = zero_noise;
    opt.full_fidelity = full_fidelity;
    opt.workers = workers;
    opt.log = &std::cerr;

    try {
        riscal::ScenarioConfig cfg = riscal::load_scenario(config_path);
        if (seed)
            cfg.seed = *seed;
        Output out = open_output(out_path);
        std::ostream &os = out.stream();

        if (*map) {
            riscal::write_bounds_map_csv(os, riscal::run_bounds_map(cfg, nx, ny, opt));
        } else if (*sizes_cmd) {
            riscal::write_ris_size_csv(os, riscal::run_bounds_vs_ris_size(cfg, sizes, variants, opt));
        } else if (*est) {
            const auto r = riscal::run_estimate(cfg, opt);
            os << r.json.dump(2) << '\n';
            for (const auto &w : r.json["warnings"])
                std::cerr << "warning: " << w.get<std::string>() << '\n';
            if (r.exit_code != riscal::kExitOk)
                std::cerr << "error: " << r.json.value("error", std::string("estimation failed")) << '\n';
            return r.exit_code;
        } else if (*mc) {
            riscal::write_mc_csv(os, riscal::run_mc_sweep_users(cfg, user_counts, trials.value_or(cfg.trials), opt));
        } else if (*cost) {
            const riscal::Vec3 user = user_pos.size() == 3 ? riscal::Vec3(user_pos[0], user_pos[1], user_pos[2])
                                                           : cfg.users.front().position;
            const auto run = riscal::run_cost_surface(cfg, user, opt);
            riscal::write_cost_surface_csv(os, run.init.surface);
            std::cerr << "cost-surface: " << run.init.surface.basins << " basin(s) below "
                      << cfg.init.basin_threshold << ", minimum " << run.init.min_cost << " at d0 = "
                      << run.init.distance << " m, yaw = " << riscal::to_deg(run.init.state[riscal::kRisYaw])
                      << " deg\n";
            if (run.init.surface.basins >= 2)
                std::cerr << "warning: ambiguous initialization\n";
        }
    } catch (const riscal::ConfigError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return riscal::kExitConfig;
    } catch (const riscal::EstimationError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return riscal::kExitEstimation;
    } catch (const riscal::GeometryError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return riscal::kExitSingular;
    }
    return riscal::kExitOk;
}
