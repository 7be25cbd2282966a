// SPDX-License-Identifier: Apache-2.0
//
// cebeam - constant-envelope transmit beamforming for MIMO radar with few-bit ADCs
// Copyright (C) 2026 The cebeam authors
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

#include <cebeam/power_alloc.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include <cebeam/errors.hpp>

namespace cebeam {

RVector<double> PowerProfile::angles() const
{
    RVector<double> a(size());
    Index i = 0;
    for (double v : target_angles) a(i++) = v;
    for (double v : clutter_angles) a(i++) = v;
    return a;
}

RVector<double> PowerProfile::levels() const
{
    RVector<double> l(size());
    Index i = 0;
    for (double v : target_levels) l(i++) = v;
    for (double v : clutter_levels) l(i++) = v;
    return l;
}

void PowerProfile::validate() const
{
    if (target_angles.size() != target_levels.size() || clutter_angles.size() != clutter_levels.size())
        throw ValidationError("power profile: angle and level counts differ");
    auto in_box = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    for (double v : target_levels)
        if (!in_box(v)) throw ValidationError("power profile: target level outside [0, 1]");
    for (double v : clutter_levels)
        if (!in_box(v)) throw ValidationError("power profile: clutter level outside [0, 1]");
}

PowerProfile uniform_profile(const Scenario& s, double level)
{
    PowerProfile p;
    p.target_angles = s.target_grid();
    p.target_levels.assign(p.target_angles.size(), level);
    p.clutter_angles = s.clutter_angles;
    p.clutter_levels.assign(p.clutter_angles.size(), level);
    return p;
}

PowerProfile make_profile(const std::vector<double>& angles, const std::vector<double>& levels,
                          std::size_t n_target)
{
    if (angles.size() != levels.size() || n_target > angles.size())
        throw ValidationError("make_profile: inconsistent sizes");
    PowerProfile p;
    const auto split = static_cast<std::ptrdiff_t>(n_target);
    p.target_angles.assign(angles.begin(), angles.begin() + split);
    p.target_levels.assign(levels.begin(), levels.begin() + split);
    p.clutter_angles.assign(angles.begin() + split, angles.end());
    p.clutter_levels.assign(levels.begin() + split, levels.end());
    p.validate();
    return p;
}

std::string profile_to_json(const PowerProfile& p)
{
    nlohmann::json j;
    auto deg = [](const std::vector<double>& v) {
        std::vector<double> d;
        for (double x : v) d.push_back(rad2deg(x));
        return d;
    };
    j["target_angles_deg"] = deg(p.target_angles);
    j["target_levels"] = p.target_levels;
    j["clutter_angles_deg"] = deg(p.clutter_angles);
    j["clutter_levels"] = p.clutter_levels;
    return j.dump(2);
}

PowerProfile profile_from_json(const std::string& text)
{
    PowerProfile p;
    try {
        const auto j = nlohmann::json::parse(text);
        for (double d : j.at("target_angles_deg").get<std::vector<double>>()) p.target_angles.push_back(deg2rad(d));
        for (double d : j.at("clutter_angles_deg").get<std::vector<double>>()) p.clutter_angles.push_back(deg2rad(d));
        p.target_levels = j.at("target_levels").get<std::vector<double>>();
        p.clutter_levels = j.at("clutter_levels").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("power profile: ") + e.what());
    }
    p.validate();
    return p;
}

AsymptoticScalars asymptotic_scalars(double phi_t, const std::vector<double>& phi_c, const Scenario& s,
                                     const QuantizationModel& q)
{
    const double L = static_cast<double>(s.code_len);
    const double nr = static_cast<double>(s.n_rx);
    double leak_c = 0.0;
    for (std::size_t k = 0; k < phi_c.size(); ++k)
        leak_c += s.clutter_powers[k] * phi_c[k] / nr;
    const double base = q.alpha * q.alpha * L * s.noise_power;
    AsymptoticScalars a;
    a.gamma = base + q.alpha * q.beta * L * (s.target_power * phi_t / nr + leak_c + s.noise_power);
    a.eta = base + q.alpha * q.beta * L * (leak_c + s.noise_power);
    a.chi = a.gamma;
    a.varpi = a.eta;
    return a;
}

namespace {

inline double kl_ratio(double x) { return std::log(x) + 1.0 / x - 1.0; }

} // namespace

double asymptotic_objective(double phi_t, const std::vector<double>& phi_c, const Scenario& s,
                            const QuantizationModel& q)
{
    if (phi_c.size() != s.clutter_powers.size())
        throw ValidationError("asymptotic_objective: one clutter level per patch required");
    const auto a = asymptotic_scalars(phi_t, phi_c, s, q);
    const double g = q.alpha * q.alpha * static_cast<double>(s.code_len);
    const double ct = g * s.target_power * phi_t;
    const auto k = static_cast<double>(phi_c.size());

    double d = (static_cast<double>(s.n_rx) - k - 1.0) * kl_ratio(a.gamma / a.eta);
    d += kl_ratio((a.gamma + ct) / a.eta);
    for (std::size_t i = 0; i < phi_c.size(); ++i) {
        const double ck = g * s.clutter_powers[i] * phi_c[i];
        d += kl_ratio((a.gamma + ck) / (a.eta + ck));
    }
    return d;
}

double profile_objective(const PowerProfile& p, const Scenario& s, const QuantizationModel& q)
{
    double acc = 0.0;
    for (double phi_t : p.target_levels)
        acc += asymptotic_objective(phi_t, p.clutter_levels, s, q);
    return acc;
}

BcdResult bcd_power_allocation(const Scenario& s, const QuantizationModel& q, const BcdOptions& opt)
{
    if (!(opt.grid_step > 0.0 && opt.grid_step <= 0.5))
        throw ValidationError("bcd_power_allocation: grid step must lie in (0, 1/2]");

    const auto n_grid = static_cast<int>(std::lround(1.0 / opt.grid_step));
    std::vector<double> grid;
    for (int i = 0; i <= n_grid; ++i) grid.push_back(std::min(1.0, i * opt.grid_step));
    if (grid.back() < 1.0) grid.push_back(1.0);

    BcdResult r;
    r.profile = uniform_profile(s, opt.init_level);
    PowerProfile& p = r.profile;

    // Coordinate i < n_t addresses a target level, the rest clutter levels.
    const std::size_t n_t = p.target_levels.size();
    const std::size_t n_all = n_t + p.clutter_levels.size();
    std::vector<std::size_t> order(n_all);
    for (std::size_t i = 0; i < n_all; ++i) order[i] = opt.reverse_order ? n_all - 1 - i : i;
    auto level = [&](std::size_t i) -> double& { return i < n_t ? p.target_levels[i] : p.clutter_levels[i - n_t]; };

    double current = profile_objective(p, s, q);
    r.sweep_trace.push_back(current);

    for (r.sweeps = 0; r.sweeps < opt.max_sweeps;) {
        const double start = current;
        for (std::size_t c : order) {
            double& x = level(c);
            const double keep = x;
            double best = -std::numeric_limits<double>::infinity();
            double best_x = keep;
            for (double v : grid) {
                x = v;
                const double f = profile_objective(p, s, q);
                if (f > best) {
                    best = f;
                    best_x = v;
                }
            }
            // An off-grid incumbent may beat every grid point.
            if (best < current) {
                x = keep;
            } else {
                x = best_x;
                current = best;
            }
            r.update_trace.push_back(current);
        }
        ++r.sweeps;
        r.sweep_trace.push_back(current);
        if (current - start < opt.tol) {
            r.converged = true;
            break;
        }
    }
    return r;
}

} // namespace cebeam
