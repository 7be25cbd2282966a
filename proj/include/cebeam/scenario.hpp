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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <cebeam/types.hpp>

namespace cebeam {

/// Radar geometry and second-order statistics of one detection problem.
/// Angles are radians from broadside, powers are linear variances.
struct Scenario {
    Index n_tx = 128;
    Index n_rx = 128;
    Index n_rf = 8;
    Index code_len = 16;

    double target_mean_angle = 0.0;
    double target_uncertainty = deg2rad(2.0);
    double target_grid_spacing = deg2rad(0.5);
    double target_power = 1.0;

    std::vector<double> clutter_angles;
    std::vector<double> clutter_powers;
    double noise_power = 1.0;

    Index n_clutter() const { return static_cast<Index>(clutter_angles.size()); }

    /// Discretized target-angle set, ascending, endpoints included when the
    /// uncertainty is a multiple of the spacing.
    std::vector<double> target_grid() const;

    /// Target grid followed by the clutter angles.
    std::vector<double> pattern_angles() const;

    /// Throws ValidationError naming every offending field.
    void validate() const;
};

/// Reference clutter directions (degrees) for K in {0, 5, 10, 15, 20}.
std::vector<double> table_clutter_angles_deg(int k);

/// 128-antenna reference scenario with the K = 10 clutter set.
Scenario default_scenario();

/// Same statistics at N_t = N_r = 32.
Scenario desk_scenario();

Scenario load_scenario(const std::string& path);
Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& s);

/// FNV-1a over the canonical JSON serialization.
std::uint64_t scenario_hash(const Scenario& s);

/// Additive quantization noise model of a B-bit ADC: gain alpha = 1 - beta
/// and quantization noise variance alpha * beta times the input variance.
struct QuantizationModel {
    std::optional<int> bits; // empty for an ideal converter
    double beta = 0.0;
    double alpha = 1.0;

    bool ideal() const { return !bits.has_value(); }
    std::string label() const { return ideal() ? std::string("ideal") : std::to_string(*bits); }
};

/// Normalized MSE of the Gaussian Lloyd-Max quantizer for B = 1..5.
double aqnm_beta(int bits);

/// Throws UnsupportedResolution for bits outside 1..5.
QuantizationModel quantization_model(std::optional<int> bits);

/// Parses "1".."5" or "ideal".
QuantizationModel quantization_model(const std::string& bits);

} // namespace cebeam
