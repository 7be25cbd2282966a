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

#include <cebeam/baseline.hpp>

#include <chrono>
#include <cmath>

#include <cebeam/errors.hpp>

namespace cebeam {

ProjectionResult projection_baseline(const PatternTarget& target, Index n_tx, Index n_rf, const ProjectionParams& params)
{
    if (n_tx < 1 || n_rf < 1 || params.max_iters < 0 || !(params.penalty >= 0.0))
        throw ValidationError("projection baseline: invalid parameters");
    const auto start = std::chrono::steady_clock::now();

    CMatrix<double> T = PhaseBeamformer::random(n_tx, n_rf, params.seed).matrix();
    double f = penalized_objective(T, target, params.penalty);
    double mu = 1.0;
    DesignReport rep;
    rep.method = "projection-baseline";

    for (int it = 1; it <= params.max_iters; ++it) {
        // Q T is the gradient with respect to conj(T).
        const CMatrix<double> G = minorizer_product(T, target, params.penalty);
        const double g2 = G.squaredNorm();
        if (g2 == 0.0) {
            rep.converged = true;
            break;
        }
        mu = std::min(1.0, 2.0 * mu);
        CMatrix<double> cand;
        double fc = f;
        int h = 0;
        for (; h < 60; ++h, mu *= 0.5) {
            cand = T - mu * G;
            fc = penalized_objective(cand, target, params.penalty);
            if (fc <= f - 1e-4 * mu * g2) break;
        }
        if (h == 60) {
            rep.converged = true;
            break;
        }
        const double change = (f - fc) / std::max(1e-300, std::abs(f));
        T = std::move(cand);
        f = fc;

        TraceRow row;
        row.iteration = it;
        row.objective = f;
        row.mse = beampattern_mse(T, target);
        row.orth_residual = orthogonality_residual(T);
        row.penalty = params.penalty;
        row.grad_norm = std::sqrt(g2);
        rep.trace.push_back(row);
        rep.iterations = it;
        if (change <= params.tol) {
            rep.converged = true;
            break;
        }
    }
    if (params.max_iters == 0) rep.converged = true;
    // A fixed iteration budget is the intended use; running it out is not a failure.
    if (rep.iterations == params.max_iters) rep.converged = true;

    ProjectionResult out;
    out.unconstrained = T;
    out.mse_before = beampattern_mse(T, target);
    out.beamformer = PhaseBeamformer::from_complex(T);
    const CMatrix<double> P = out.beamformer.matrix();
    rep.final_mse = beampattern_mse(P, target);
    rep.orth_residual = orthogonality_residual(P);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.note = "unconstrained mse " + std::to_string(out.mse_before);
    out.report = std::move(rep);
    return out;
}

} // namespace cebeam
