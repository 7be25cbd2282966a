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

#include <cebeam/scenario.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include <cebeam/errors.hpp>

namespace cebeam {

using nlohmann::json;

std::vector<double> Scenario::target_grid() const
{
    std::vector<double> grid;
    if (target_uncertainty <= 0.0 || target_grid_spacing <= 0.0) {
        grid.push_back(target_mean_angle);
        return grid;
    }
    const double lo = target_mean_angle - 0.5 * target_uncertainty;
    const auto steps = static_cast<long>(std::floor(target_uncertainty / target_grid_spacing + 1e-9));
    grid.reserve(static_cast<std::size_t>(steps + 1));
    for (long i = 0; i <= steps; ++i)
        grid.push_back(lo + static_cast<double>(i) * target_grid_spacing);
    return grid;
}

std::vector<double> Scenario::pattern_angles() const
{
    std::vector<double> a = target_grid();
    a.insert(a.end(), clutter_angles.begin(), clutter_angles.end());
    return a;
}

void Scenario::validate() const
{
    std::vector<std::string> bad;
    const double half_pi = kPi<double> / 2 + 1e-12;
    auto angle_ok = [&](double a) { return std::isfinite(a) && std::abs(a) <= half_pi; };

    if (n_tx < 1) bad.push_back("n_tx");
    if (n_rx < 1) bad.push_back("n_rx");
    if (n_rf < 1) bad.push_back("n_rf");
    if (code_len < 1 || n_rf > code_len) bad.push_back("code_len (need n_rf <= code_len)");
    if (!angle_ok(target_mean_angle)) bad.push_back("target_mean_angle");
    if (!(target_uncertainty >= 0.0)) bad.push_back("target_uncertainty");
    if (!(target_grid_spacing > 0.0)) bad.push_back("target_grid_spacing");
    if (!(target_power >= 0.0) || !std::isfinite(target_power)) bad.push_back("target_power");
    if (!(noise_power > 0.0) || !std::isfinite(noise_power)) bad.push_back("noise_power");
    if (clutter_angles.size() != clutter_powers.size()) bad.push_back("clutter_powers (length mismatch)");
    for (double a : clutter_angles)
        if (!angle_ok(a)) { bad.push_back("clutter_angles"); break; }
    for (double p : clutter_powers)
        if (!(p > 0.0) || !std::isfinite(p)) { bad.push_back("clutter_powers"); break; }

    const auto grid = target_grid();
    for (double a : grid)
        if (!angle_ok(a)) { bad.push_back("target grid leaves [-90, 90] deg"); break; }

    auto all = pattern_angles();
    std::sort(all.begin(), all.end());
    for (std::size_t i = 1; i < all.size(); ++i)
        if (std::abs(all[i] - all[i - 1]) < 1e-12) { bad.push_back("duplicate pattern angle"); break; }

    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "invalid scenario:";
        for (const auto& b : bad) msg << ' ' << b << ';';
        throw ValidationError(msg.str());
    }
}

std::vector<double> table_clutter_angles_deg(int k)
{
    static const std::map<int, std::vector<double>> table = {
        {5, {-31.0, -3.3, 28.7, -73.7, 69.1}},
        {10, {-15.3, 22.0, 59.9, -47.6, -75.4, 78.9, -11.4, 61.9, 34.1, -64.7}},
        {15, {-40.4, -12.1, 24.6, -16.7, -72.0, 30.4, 47.5, 75.8, -86.2, -12.7, -79.0, -81.9, 54.4, 22.9, 3.6}},
        // second 34.1 moved to 34.2: pattern angles must be distinct
        {20, {34.1, -4.3, -9.0, -42.6, 39.5, 89.6, -12.4, -23.1, 25.2, 8.7,
              45.1, -82.9, 34.2, -6.2, 15.2, 2.4, 22.5, -18.7, -33.6, 32.3}},
    };
    if (k == 0) return {};
    auto it = table.find(k);
    if (it == table.end())
        throw std::invalid_argument("no clutter table for K = " + std::to_string(k));
    return it->second;
}

Scenario default_scenario()
{
    Scenario s;
    for (double d : table_clutter_angles_deg(10)) {
        s.clutter_angles.push_back(deg2rad(d));
        s.clutter_powers.push_back(db2lin(30.0));
    }
    return s;
}

Scenario desk_scenario()
{
    Scenario s = default_scenario();
    s.n_tx = 32;
    s.n_rx = 32;
    return s;
}

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback)
{
    auto it = j.find(key);
    return it == j.end() ? fallback : it->get<T>();
}

const std::set<std::string> kKnownKeys = {
    "n_tx", "n_rx", "n_rf", "code_len",
    "target_mean_angle_deg", "target_uncertainty_deg", "target_grid_spacing_deg", "target_power_db",
    "clutter_angles_deg", "clutter_powers_db", "noise_power_db", "name",
};

} // namespace

Scenario scenario_from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("scenario must be a JSON object");

    std::vector<std::string> unknown;
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!kKnownKeys.count(it.key())) unknown.push_back(it.key());
    if (!unknown.empty()) {
        std::string msg = "unknown scenario keys:";
        for (const auto& u : unknown) msg += " " + u;
        throw ValidationError(msg);
    }

    Scenario s;
    try {
        s.n_tx = get_or<Index>(j, "n_tx", s.n_tx);
        s.n_rx = get_or<Index>(j, "n_rx", s.n_rx);
        s.n_rf = get_or<Index>(j, "n_rf", s.n_rf);
        s.code_len = get_or<Index>(j, "code_len", s.code_len);
        s.target_mean_angle = deg2rad(get_or<double>(j, "target_mean_angle_deg", 0.0));
        s.target_uncertainty = deg2rad(get_or<double>(j, "target_uncertainty_deg", 2.0));
        s.target_grid_spacing = deg2rad(get_or<double>(j, "target_grid_spacing_deg", 0.5));
        s.target_power = db2lin(get_or<double>(j, "target_power_db", 0.0));
        s.noise_power = db2lin(get_or<double>(j, "noise_power_db", 0.0));

        const auto angles = get_or<std::vector<double>>(j, "clutter_angles_deg", {});
        for (double a : angles) s.clutter_angles.push_back(deg2rad(a));

        // Either one power for all clutter patches or one per patch.
        if (auto it = j.find("clutter_powers_db"); it != j.end()) {
            if (it->is_number()) {
                s.clutter_powers.assign(angles.size(), db2lin(it->get<double>()));
            } else {
                for (double p : it->get<std::vector<double>>()) s.clutter_powers.push_back(db2lin(p));
            }
        } else {
            s.clutter_powers.assign(angles.size(), db2lin(30.0));
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario field has the wrong type: ") + e.what());
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

std::string scenario_to_json(const Scenario& s)
{
    json j;
    j["n_tx"] = s.n_tx;
    j["n_rx"] = s.n_rx;
    j["n_rf"] = s.n_rf;
    j["code_len"] = s.code_len;
    j["target_mean_angle_deg"] = rad2deg(s.target_mean_angle);
    j["target_uncertainty_deg"] = rad2deg(s.target_uncertainty);
    j["target_grid_spacing_deg"] = rad2deg(s.target_grid_spacing);
    j["target_power_db"] = lin2db(s.target_power);
    j["noise_power_db"] = lin2db(s.noise_power);
    std::vector<double> a, p;
    for (double v : s.clutter_angles) a.push_back(rad2deg(v));
    for (double v : s.clutter_powers) p.push_back(lin2db(v));
    j["clutter_angles_deg"] = a;
    j["clutter_powers_db"] = p;
    return j.dump(2);
}

std::uint64_t scenario_hash(const Scenario& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : scenario_to_json(s)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

double aqnm_beta(int bits)
{
    static constexpr double table[] = {0.3634, 0.1175, 0.03454, 0.009497, 0.002499};
    if (bits < 1 || bits > 5)
        throw UnsupportedResolution("AQNM is tabulated for 1..5 bits, got " + std::to_string(bits));
    return table[bits - 1];
}

QuantizationModel quantization_model(std::optional<int> bits)
{
    QuantizationModel q;
    if (bits) {
        q.bits = *bits;
        q.beta = aqnm_beta(*bits);
        q.alpha = 1.0 - q.beta;
    }
    return q;
}

QuantizationModel quantization_model(const std::string& bits)
{
    if (bits == "ideal" || bits == "inf") return quantization_model(std::nullopt);
    std::size_t used = 0;
    int b = 0;
    try {
        b = std::stoi(bits, &used);
    } catch (const std::exception&) {
        throw UnsupportedResolution("bits must be 1..5 or 'ideal', got '" + bits + "'");
    }
    if (used != bits.size())
        throw UnsupportedResolution("bits must be 1..5 or 'ideal', got '" + bits + "'");
    return quantization_model(std::optional<int>(b));
}

} // namespace cebeam
