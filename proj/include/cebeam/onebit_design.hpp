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

#include <cebeam/array_model.hpp>
#include <cebeam/ce_design.hpp>
#include <cebeam/report.hpp>

namespace cebeam {

struct OneBitParams {
    double penalty_orth_init = 0.01;
    double penalty_orth_growth = 1.5;
    double penalty_bin_init = 0.1;
    double penalty_bin_growth = 1.5;
    int orth_period = 50;  // M
    int bin_period = 50;   // N
    int max_iters = 3000;
    double tol = 1e-4;
    double gap_tol = 1e-3; // stop only once N_RF - sqrt(N_RF) ||t|| is also below this
    std::uint64_t seed = 1;
    int max_halvings = 50;

    void validate() const;
};

/// Componentwise clamp to [-1/sqrt(n_tx), 1/sqrt(n_tx)].
RVector<double> box_project(const RVector<double>& t, Index n_tx);

/// sqrt(n_rf) t / ||t||; throws UndefinedDirection for t = 0.
RVector<double> v_update(const RVector<double>& t, Index n_rf);

/// sum_p (t^T Phi_p t - level_p)^2 + rho (N_RF - sqrt(N_RF) ||t||) + penalty ||T^T T - I||_F^2,
/// with T the column-major n_tx x n_rf reshape of t.
double epm_objective(const RVector<double>& t, const PatternTarget& target, Index n_rf, double penalty, double rho);

/// Gradient of epm_objective.
RVector<double> epm_gradient(const RVector<double>& t, const PatternTarget& target, Index n_rf, double penalty,
                             double rho);

/// Norm of t - box_project(t - grad), zero exactly at box-constrained stationary points.
double projected_gradient_norm(const RVector<double>& t, const RVector<double>& grad, Index n_tx);

/// Momentum recursion tau' = (1 + sqrt(1 + 4 tau^2)) / 2.
inline double next_momentum(double tau) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tau * tau)); }

/// Starting point: random signs scaled by 0.9/sqrt(n_tx).
RVector<double> random_onebit_start(Index n_tx, Index n_rf, std::uint64_t seed);

/// Starting point from a constant-envelope design: sign of the real part
/// scaled by 0.9/sqrt(n_tx).
RVector<double> onebit_start_from(const CMatrix<double>& T);

struct OneBitResult {
    OneBitBeamformer beamformer;
    RVector<double> relaxed; // continuous point before rounding
    DesignReport report;
};

/// Exact-penalty method with accelerated projected gradient steps and
/// backtracking; the continuous solution is rounded to signs at the end.
OneBitResult nesterov_epm(const RVector<double>& t0, const PatternTarget& target, Index n_rf,
                          const OneBitParams& params = {});

/// MSE + penalty ||T^T T - I||_F^2 of a one-bit matrix.
double onebit_objective(const OneBitBeamformer& B, const PatternTarget& target, double penalty);

struct ExhaustiveResult {
    OneBitBeamformer beamformer;
    double objective = 0;
};

/// Brute force over all sign patterns for n_tx * n_rf <= 20; ties go to the
/// lexicographically smallest pattern (column-major, -1 before +1).
ExhaustiveResult exhaustive_onebit(const PatternTarget& target, Index n_tx, Index n_rf, double penalty);

} // namespace cebeam
