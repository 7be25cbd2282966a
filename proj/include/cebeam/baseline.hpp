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

#include <cebeam/ce_design.hpp>

namespace cebeam {

struct ProjectionParams {
    double penalty = 1.0;
    int max_iters = 500;
    double tol = 1e-10; // stop on relative objective change
    std::uint64_t seed = 1;
};

struct ProjectionResult {
    PhaseBeamformer beamformer;
    CMatrix<double> unconstrained;
    double mse_before = 0; // unconstrained fit
    DesignReport report;
};

/// Least-squares fit of the pattern with free magnitudes (steepest descent on
/// MSE + penalty ||T^H T - I||^2 with backtracking), then entrywise phase
/// projection onto the constant-envelope set.
ProjectionResult projection_baseline(const PatternTarget& target, Index n_tx, Index n_rf,
                                     const ProjectionParams& params = {});

} // namespace cebeam
