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
#include <functional>

#include <cebeam/array_model.hpp>
#include <cebeam/power_alloc.hpp>
#include <cebeam/report.hpp>

namespace cebeam {

struct CeDesignParams {
    double penalty_init = 0.01;
    double penalty_growth = 1.5;
    int penalty_period = 50;
    int max_iters = 1500;
    double tol = 1e-4;
    double orth_tol = 0.05; // stop only once ||T^H T - I||_F is also below this
    std::uint64_t seed = 1;
    int monitor_every = 0; // 0 disables the relative-entropy monitor

    void validate() const;
};

/// Steering vectors of the profile angles and the matching desired levels.
struct PatternTarget {
    CMatrix<double> A; // N_t x P
    RVector<double> levels;

    PatternTarget() = default;
    PatternTarget(const PowerProfile& p, Index n_tx);
    PatternTarget(const RVector<double>& angles, const RVector<double>& levels, Index n_tx);

    Index size() const { return A.cols(); }
};

/// sum_p (phi(T, theta_p) - level_p)^2
template <typename Derived>
double beampattern_mse(const Eigen::MatrixBase<Derived>& T, const PatternTarget& target)
{
    if (target.size() == 0) return 0.0;
    return (beampattern_powers(T, target.A) - target.levels).squaredNorm();
}

/// ||T^H T - I||_F^2
template <typename Derived>
double orthogonality_penalty(const Eigen::MatrixBase<Derived>& T)
{
    const double r = orthogonality_residual(T);
    return r * r;
}

template <typename Derived>
double penalized_objective(const Eigen::MatrixBase<Derived>& T, const PatternTarget& target, double penalty)
{
    return beampattern_mse(T, target) + penalty * orthogonality_penalty(T);
}

/// Dense first-order matrix of the objective at T_m: the gradient of the
/// penalized objective with respect to conj(T) at T_m equals Q T_m, with
///   Q = sum_p 2 (phi_p(T_m) - level_p) a_p^* a_p^T + 2 penalty (T_m T_m^H - I).
/// Only meant for small arrays and tests; the map itself never forms Q.
struct MinorizerState {
    CMatrix<double> q_matrix;
    double lambda_max = 0;
};

MinorizerState minorizer_matrix(const CMatrix<double>& Tm, const PatternTarget& target, double penalty);

/// Q T_m without forming Q.
CMatrix<double> minorizer_product(const CMatrix<double>& Tm, const PatternTarget& target, double penalty);

/// Cheap upper bound on lambda_max(Q) from a P x P eigenproblem.
double minorizer_lambda_bound(const CMatrix<double>& Tm, const PatternTarget& target, double penalty);

/// Curvature c such that, for unit-modulus T and T_m with D = T - T_m,
///   Z(T) <= Z(T_m) + 2 Re Tr(D^H Q T_m) + c ||D||_F^2.
/// With T empty, sigma_max(T) is replaced by its bound sqrt(N_RF).
double majorizer_curvature(const CMatrix<double>& Tm, const CMatrix<double>& T, const PatternTarget& target,
                           double penalty);

/// Entrywise phase of (lambda I - Q) T_m scaled to 1/sqrt(N_t); entries whose
/// argument is undefined keep the phase of T_m.
CMatrix<double> phase_update(const CMatrix<double>& QTm, const CMatrix<double>& Tm, double lambda);

/// Unit-modulus projection of an arbitrary complex matrix; zero entries take
/// the phase of `fallback`.
CMatrix<double> unit_modulus(const CMatrix<double>& Z, const CMatrix<double>& fallback);

struct MmStep {
    CMatrix<double> T;
    double lambda = 0;
    double objective = 0;
    int tries = 0;
};

/// One MM step. The curvature starts at the lambda_max bound of Q and grows
/// until the quadratic upper bound holds at the candidate, which makes the
/// step a strict descent step or a no-op.
MmStep mm_step(const CMatrix<double>& Tm, const PatternTarget& target, double penalty);

inline CMatrix<double> mm_map(const CMatrix<double>& Tm, const PatternTarget& target, double penalty)
{
    return mm_step(Tm, target, penalty).T;
}

/// Optional per-k-iteration hook returning the relative entropy of T.
using EntropyMonitor = std::function<double(const CMatrix<double>&)>;

struct CeDesignResult {
    PhaseBeamformer beamformer;
    DesignReport report;
};

CeDesignResult plain_mm(const CMatrix<double>& T0, const PatternTarget& target, const CeDesignParams& params,
                        const EntropyMonitor& monitor = {});

CeDesignResult squarem_accelerated_mm(const CMatrix<double>& T0, const PatternTarget& target,
                                      const CeDesignParams& params, const EntropyMonitor& monitor = {});

} // namespace cebeam
