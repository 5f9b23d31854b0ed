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

#ifndef RISCAL_SCENARIO_HPP
#define RISCAL_SCENARIO_HPP

#include "riscal/channel.hpp"
#include "riscal/estimator.hpp"
#include "riscal/geometry.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace riscal {

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

struct MultiUserConfig {
    bool split_subcarriers = true; // OFDMA: K/M subcarriers per user
    bool full_power_per_user = true; // each user's full power on its own allocation
};

struct KnownState {
    bool ris_y = false;
    bool ris_orientation = false;
    bool user_position = false;
};

struct ScenarioConfig {
    System system;
    Vec3 bs_position = Vec3::Zero();
    RisState ris{Vec3(4.0, 10.0, 0.0), {0.0, 0.0, -kPi / 2}};
    std::vector<UserState> users{UserState{Vec3(8.0, 8.0, -5.0), 10e-9}};
    InitSearchConfig init;
    Box map_area{Vec3(0.0, 0.0, -5.0), Vec3(10.0, 10.0, -5.0)};      // bounds-map sweep (z fixed)
    Box sampling_area{Vec3(6.5, 5.5, -5.0), Vec3(9.5, 8.5, -5.0)};   // Monte Carlo user draws
    double sampled_clock_offset = 10e-9;                                // seconds, for sampled users
    std::uint64_t seed = 0;
    int trials = 100;
    int gn_iterations = 30;
    KnownState known;
    MultiUserConfig multi_user;

    Scene scene(std::size_t user = 0) const
    {
        Scene s;
        s.bs = bs_position;
        s.ris = ris;
        s.user = users.at(user);
        return s;
    }
};

namespace detail {

inline std::string line_of_key(const std::string &text, const std::string &key)
{
    const auto pos = text.find('"' + key + '"');
    if (pos == std::string::npos)
        return "";
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
    return " (line " + std::to_string(line) + ")";
}

class ConfigReader {
  public:
    explicit ConfigReader(std::string text) : text_(std::move(text)) {}

    [[noreturn]] void fail(const std::string &path, const std::string &key, const std::string &what) const
    {
        throw ConfigError("config: " + path + ": " + what + line_of_key(text_, key));
    }

    void check_keys(const nlohmann::json &obj, const std::string &path, std::initializer_list<const char *> allowed) const
    {
        if (!obj.is_object())
            fail(path, "", "expected an object");
        for (const auto &[k, v] : obj.items()) {
            bool ok = false;
            for (const char *a : allowed)
                ok = ok || k == a;
            if (!ok)
                fail(path + "/" + k, k, "unknown key '" + k + "'");
        }
    }

    double number(const nlohmann::json &obj, const char *key, const std::string &path, double def) const
    {
        if (!obj.contains(key))
            return def;
        const auto &v = obj.at(key);
        if (!v.is_number())
            fail(path + "/" + key, key, "expected a number");
        return v.get<double>();
    }

    double positive(const nlohmann::json &obj, const char *key, const std::string &path, double def) const
    {
        const double v = number(obj, key, path, def);
        if (!(v > 0.0))
            fail(path + "/" + key, key, "must be positive");
        return v;
    }

    int count(const nlohmann::json &obj, const char *key, const std::string &path, int def) const
    {
        if (!obj.contains(key))
            return def;
        const auto &v = obj.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 1)
            fail(path + "/" + key, key, "expected an integer >= 1");
        return v.get<int>();
    }

    bool flag(const nlohmann::json &obj, const char *key, const std::string &path, bool def) const
    {
        if (!obj.contains(key))
            return def;
        const auto &v = obj.at(key);
        if (!v.is_boolean())
            fail(path + "/" + key, key, "expected true or false");
        return v.get<bool>();
    }

    Vec3 vec3(const nlohmann::json &obj, const char *key, const std::string &path, const Vec3 &def) const
    {
        if (!obj.contains(key))
            return def;
        const auto &v = obj.at(key);
        if (!v.is_array() || v.size() != 3)
            fail(path + "/" + key, key, "expected an array of 3 numbers");
        Vec3 out;
        for (int i = 0; i < 3; ++i) {
            if (!v[static_cast<std::size_t>(i)].is_number())
                fail(path + "/" + key, key, "expected an array of 3 numbers");
            out[i] = v[static_cast<std::size_t>(i)].get<double>();
        }
        return out;
    }

    ArrayConfig array(const nlohmann::json &obj, const std::string &path, ArrayConfig def) const
    {
        check_keys(obj, path, {"rows", "cols", "spacing_m"});
        def.rows = count(obj, "rows", path, def.rows);
        def.cols = count(obj, "cols", path, def.cols);
        if (obj.contains("spacing_m"))
            def.spacing = positive(obj, "spacing_m", path, def.spacing);
        return def;
    }

    Box box(const nlohmann::json &obj, const std::string &path, Box def) const
    {
        check_keys(obj, path, {"lo", "hi"});
        def.lo = vec3(obj, "lo", path, def.lo);
        def.hi = vec3(obj, "hi", path, def.hi);
        if ((def.hi.array() < def.lo.array()).any())
            fail(path, "hi", "hi must not be below lo");
        return def;
    }

  private:
    std::string text_;
};

inline double deg(double d) { return d * kPi / 180.0; }

} // namespace detail

// Parses a scenario from JSON text. Every key is optional except "seed";
// unknown keys are errors.
inline ScenarioConfig parse_scenario(const std::string &text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    const detail::ConfigReader rd(text);
    ScenarioConfig c;
    rd.check_keys(j, "", {"waveform", "bs", "ris", "users", "user_prior", "orientation_prior_deg", "grid", "map_area",
                          "sampling_area", "sampled_clock_offset_ns", "seed", "trials", "gn_iterations", "known",
                          "multi_user"});

    if (!j.contains("seed") || !j["seed"].is_number_unsigned())
        rd.fail("/seed", "seed", "a non-negative integer seed is required");
    c.seed = j["seed"].get<std::uint64_t>();

    if (j.contains("waveform")) {
        const auto &w = j["waveform"];
        const std::string p = "/waveform";
        rd.check_keys(w, p, {"carrier_hz", "bandwidth_hz", "subcarriers", "transmissions", "tx_power_dbm",
                             "noise_psd_dbm_hz", "noise_figure_db"});
        auto &wf = c.system.waveform;
        wf.carrier_hz = rd.positive(w, "carrier_hz", p, wf.carrier_hz);
        wf.bandwidth_hz = rd.positive(w, "bandwidth_hz", p, wf.bandwidth_hz);
        wf.subcarriers = rd.count(w, "subcarriers", p, wf.subcarriers);
        wf.transmissions = rd.count(w, "transmissions", p, wf.transmissions);
        wf.tx_power_dbm = rd.number(w, "tx_power_dbm", p, wf.tx_power_dbm);
        wf.noise_psd_dbm_hz = rd.number(w, "noise_psd_dbm_hz", p, wf.noise_psd_dbm_hz);
        wf.noise_figure_db = rd.number(w, "noise_figure_db", p, wf.noise_figure_db);
    }
    if (j.contains("bs")) {
        const auto &b = j["bs"];
        rd.check_keys(b, "/bs", {"position", "array"});
        c.bs_position = rd.vec3(b, "position", "/bs", c.bs_position);
        if (b.contains("array"))
            c.system.bs_array = rd.array(b["array"], "/bs/array", c.system.bs_array);
    }
    if (j.contains("ris")) {
        const auto &r = j["ris"];
        rd.check_keys(r, "/ris", {"position", "orientation_deg", "array"});
        c.ris.position = rd.vec3(r, "position", "/ris", c.ris.position);
        if (r.contains("orientation_deg")) {
            const Vec3 o = rd.vec3(r, "orientation_deg", "/ris", Vec3::Zero());
            c.ris.orientation = {detail::deg(o[0]), detail::deg(o[1]), detail::deg(o[2])};
        }
        if (r.contains("array"))
            c.system.ris_array = rd.array(r["array"], "/ris/array", c.system.ris_array);
    }
    if (j.contains("users")) {
        const auto &us = j["users"];
        if (!us.is_array() || us.empty())
            rd.fail("/users", "users", "expected a non-empty array");
        c.users.clear();
        for (std::size_t i = 0; i < us.size(); ++i) {
            const std::string p = "/users/" + std::to_string(i);
            rd.check_keys(us[i], p, {"position", "clock_offset_ns"});
            if (!us[i].contains("position"))
                rd.fail(p, "users", "user position is required");
            UserState u;
            u.position = rd.vec3(us[i], "position", p, Vec3::Zero());
            u.clock_offset = rd.number(us[i], "clock_offset_ns", p, 10.0) * 1e-9;
            c.users.push_back(u);
        }
    }
    if (j.contains("user_prior"))
        c.init.user_prior = rd.box(j["user_prior"], "/user_prior", c.init.user_prior);
    if (j.contains("orientation_prior_deg")) {
        const auto &o = j["orientation_prior_deg"];
        if (!o.is_array() || o.size() != 2 || !o[0].is_number() || !o[1].is_number())
            rd.fail("/orientation_prior_deg", "orientation_prior_deg", "expected [min, max] in degrees");
        c.init.yaw_min = detail::deg(o[0].get<double>());
        c.init.yaw_max = detail::deg(o[1].get<double>());
        if (!(c.init.yaw_max > c.init.yaw_min) || c.init.yaw_min < -kPi - 1e-12 || c.init.yaw_max > kPi + 1e-12)
            rd.fail("/orientation_prior_deg", "orientation_prior_deg", "need -180 <= min < max <= 180");
    }
    if (j.contains("grid")) {
        const auto &g = j["grid"];
        rd.check_keys(g, "/grid", {"distance_step_m", "yaw_step_deg", "coarse_to_fine", "basin_threshold"});
        c.init.distance_step = rd.positive(g, "distance_step_m", "/grid", c.init.distance_step);
        c.init.yaw_step = detail::deg(rd.positive(g, "yaw_step_deg", "/grid", c.init.yaw_step * 180.0 / kPi));
        c.init.coarse_to_fine = rd.flag(g, "coarse_to_fine", "/grid", c.init.coarse_to_fine);
        c.init.basin_threshold = rd.positive(g, "basin_threshold", "/grid", c.init.basin_threshold);
    }
    if (j.contains("map_area"))
        c.map_area = rd.box(j["map_area"], "/map_area", c.map_area);
    if (j.contains("sampling_area"))
        c.sampling_area = rd.box(j["sampling_area"], "/sampling_area", c.sampling_area);
    c.sampled_clock_offset = rd.number(j, "sampled_clock_offset_ns", "", c.sampled_clock_offset * 1e9) * 1e-9;
    c.trials = rd.count(j, "trials", "", c.trials);
    c.gn_iterations = rd.count(j, "gn_iterations", "", c.gn_iterations);
    if (j.contains("known")) {
        const auto &k = j["known"];
        rd.check_keys(k, "/known", {"ris_y", "ris_orientation", "user_position"});
        c.known.ris_y = rd.flag(k, "ris_y", "/known", false);
        c.known.ris_orientation = rd.flag(k, "ris_orientation", "/known", false);
        c.known.user_position = rd.flag(k, "user_position", "/known", false);
    }
    if (j.contains("multi_user")) {
        const auto &m = j["multi_user"];
        rd.check_keys(m, "/multi_user", {"split_subcarriers", "full_power_per_user"});
        c.multi_user.split_subcarriers = rd.flag(m, "split_subcarriers", "/multi_user", true);
        c.multi_user.full_power_per_user = rd.flag(m, "full_power_per_user", "/multi_user", true);
    }

    c.init.mounting = c.ris.orientation;
    try {
        c.system.waveform.validate();
        c.init.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

inline ScenarioConfig load_scenario(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

} // namespace riscal

#endif // RISCAL_SCENARIO_HPP
