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

#include <limits>
#include <string>
#include <vector>

namespace cebeam {

/// One row of an optimizer trace. Fields a method does not produce stay NaN.
struct TraceRow {
    static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    int iteration = 0;
    double objective = nan;   // penalized objective at the current penalty weights
    double mse = nan;
    double orth_residual = nan;
    double penalty = nan;     // orthogonality weight
    double grad_norm = nan;
    double binary_gap = nan;
    double relative_entropy = nan;
    long map_evals = 0;       // cumulative
};

struct DesignReport {
    std::string method;
    int iterations = 0;
    long map_evals = 0;
    double wall_seconds = 0;
    double final_mse = std::numeric_limits<double>::quiet_NaN();
    double orth_residual = std::numeric_limits<double>::quiet_NaN();
    double relative_entropy = std::numeric_limits<double>::quiet_NaN();
    double relative_entropy_center = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    std::string note;
    std::vector<TraceRow> trace;
};

} // namespace cebeam
