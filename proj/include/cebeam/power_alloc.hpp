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

#include <string>
#include <vector>

#include <cebeam/scenario.hpp>

namespace cebeam {

/// Desired beampattern levels on the target grid and at every clutter patch.
struct PowerProfile {
    std::vector<double> target_angles;
    std::vector<double> target_levels;
    std::vector<double> clutter_angles;
    std::vector<double> clutter_levels;

    Index size() const { return static_cast<Index>(target_angles.size() + clutter_angles.size()); }

    /// Target grid first, then clutter; the order every designer uses.
    RVector<double> angles() const;
    RVector<double> levels() const;

    /// Throws ValidationError when lengths disagree or a level leaves [0, 1].
    void validate() const;
};

/// Flat profile with every level at `level`.
PowerProfile uniform_profile(const Scenario& s, double level);

/// Profile from explicit angle/level pairs; the first `n_target` pairs are
/// treated as target-grid points.
PowerProfile make_profile(const std::vector<double>& angles, const std::vector<double>& levels,
                          std::size_t n_target);

std::string profile_to_json(const PowerProfile& p);
PowerProfile profile_from_json(const std::string& text);

/// Noise-plus-leakage levels of the large-array covariance model.
/// chi/gamma belong to the target-present hypothesis, varpi/eta to the
/// clutter-only one; each pair is the same quantity appearing in the
/// log-determinant and in the trace block respectively.
struct AsymptoticScalars {
    double chi = 0;
    double varpi = 0;
    double gamma = 0;
    double eta = 0;
};

AsymptoticScalars asymptotic_scalars(double phi_t, const std::vector<double>& phi_c, const Scenario& s,
                                     const QuantizationModel& q);

/// Large-array relative entropy at one target point, with the clutter steering
/// vectors and the target steering vector treated as mutually orthogonal:
///   (N_r-K-1) f(gamma/eta) + f((gamma+c_t)/eta) + sum_k f((gamma+c_k)/(eta+c_k)),
///   f(x) = log x + 1/x - 1,
/// c_t = alpha^2 L sigma_t^2 phi_t and c_k = alpha^2 L sigma_k^2 phi_k.
double asymptotic_objective(double phi_t, const std::vector<double>& phi_c, const Scenario& s,
                            const QuantizationModel& q);

/// Sum of asymptotic_objective over the target grid of a profile.
double profile_objective(const PowerProfile& p, const Scenario& s, const QuantizationModel& q);

struct BcdOptions {
    double grid_step = 0.01;
    int max_sweeps = 100;
    double tol = 1e-4;
    double init_level = 0.5;
    bool reverse_order = false; // clutter (descending) before targets (descending)
};

struct BcdResult {
    PowerProfile profile;
    std::vector<double> update_trace; // objective after every coordinate update
    std::vector<double> sweep_trace;  // objective after every full sweep, index 0 = initial
    int sweeps = 0;
    bool converged = false;
};

/// Cyclic exact maximization of profile_objective, one coordinate at a time,
/// over the grid {0, step, ..., 1}. Ties go to the smallest level.
BcdResult bcd_power_allocation(const Scenario& s, const QuantizationModel& q, const BcdOptions& opt = {});

} // namespace cebeam
