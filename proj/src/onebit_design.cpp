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

#include <cebeam/onebit_design.hpp>

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include <cebeam/errors.hpp>

namespace cebeam {

void OneBitParams::validate() const
{
    if (!(penalty_orth_init > 0.0) || !(penalty_bin_init > 0.0))
        throw ValidationError("one-bit design: penalties must be positive");
    if (!(penalty_orth_growth > 1.0) || !(penalty_bin_growth > 1.0))
        throw ValidationError("one-bit design: penalty growth factors must exceed 1");
    if (orth_period < 1 || bin_period < 1) throw ValidationError("one-bit design: periods must be positive");
    if (max_iters < 0 || !(tol >= 0.0) || !(gap_tol > 0.0) || max_halvings < 1)
        throw ValidationError("one-bit design: invalid iteration limits");
}

RVector<double> box_project(const RVector<double>& t, Index n_tx)
{
    const double b = 1.0 / std::sqrt(static_cast<double>(n_tx));
    return t.cwiseMax(-b).cwiseMin(b);
}

RVector<double> v_update(const RVector<double>& t, Index n_rf)
{
    const double n = t.norm();
    if (!(n > 0.0)) throw UndefinedDirection("v_update: direction of the zero vector is undefined");
    return (std::sqrt(static_cast<double>(n_rf)) / n) * t;
}

namespace {

using ConstMap = Eigen::Map<const RMatrix<double>>;

ConstMap reshape(const RVector<double>& t, Index n_rf)
{
    if (n_rf < 1 || t.size() % n_rf != 0) throw ValidationError("one-bit design: length is not a multiple of N_RF");
    return ConstMap(t.data(), t.size() / n_rf, n_rf);
}

struct PatternTerms {
    CMatrix<double> proj; // P x N_RF, rows a_p^T T
    RVector<double> err;  // phi_p - level_p
};

PatternTerms pattern_terms(const ConstMap& T, const PatternTarget& target)
{
    PatternTerms out;
    if (target.size() == 0) return out;
    out.proj = target.A.transpose() * T.cast<Complex<double>>();
    out.err = out.proj.rowwise().squaredNorm() - target.levels;
    return out;
}

double orth_sq(const ConstMap& T)
{
    return (T.transpose() * T - RMatrix<double>::Identity(T.cols(), T.cols())).squaredNorm();
}

} // namespace

double epm_objective(const RVector<double>& t, const PatternTarget& target, Index n_rf, double penalty, double rho)
{
    const ConstMap T = reshape(t, n_rf);
    const PatternTerms pt = pattern_terms(T, target);
    const double mse = target.size() > 0 ? pt.err.squaredNorm() : 0.0;
    const double nrf = static_cast<double>(n_rf);
    return mse + rho * (nrf - std::sqrt(nrf) * t.norm()) + penalty * orth_sq(T);
}

RVector<double> epm_gradient(const RVector<double>& t, const PatternTarget& target, Index n_rf, double penalty,
                             double rho)
{
    const ConstMap T = reshape(t, n_rf);
    const RVector<double> v = v_update(t, n_rf);
    RMatrix<double> G = (4.0 * penalty) * (T * (T.transpose() * T - RMatrix<double>::Identity(n_rf, n_rf)));
    if (target.size() > 0) {
        const PatternTerms pt = pattern_terms(T, target);
        G += (target.A.conjugate() * ((4.0 * pt.err).asDiagonal() * pt.proj)).real();
    }
    RVector<double> g = Eigen::Map<const RVector<double>>(G.data(), G.size());
    g -= rho * v;
    return g;
}

double projected_gradient_norm(const RVector<double>& t, const RVector<double>& grad, Index n_tx)
{
    return (t - box_project(t - grad, n_tx)).norm();
}

RVector<double> random_onebit_start(Index n_tx, Index n_rf, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    const double m = 0.9 / std::sqrt(static_cast<double>(n_tx));
    RVector<double> t(n_tx * n_rf);
    for (Index i = 0; i < t.size(); ++i) t(i) = coin(rng) ? m : -m;
    return t;
}

RVector<double> onebit_start_from(const CMatrix<double>& T)
{
    const double m = 0.9 / std::sqrt(static_cast<double>(T.rows()));
    RVector<double> t(T.size());
    for (Index j = 0; j < T.cols(); ++j)
        for (Index i = 0; i < T.rows(); ++i)
            t(j * T.rows() + i) = T(i, j).real() < 0.0 ? -m : m;
    return t;
}

namespace {

struct Step {
    RVector<double> t;
    double f = 0;
    int halvings = 0;
};

// Projected gradient step from w with Armijo backtracking.
Step projected_step(const RVector<double>& w, const PatternTarget& target, Index n_tx, Index n_rf, double penalty,
                    double rho, int max_halvings, int iteration)
{
    constexpr double kArmijo = 1e-4;
    const double fw = epm_objective(w, target, n_rf, penalty, rho);
    const RVector<double> g = epm_gradient(w, target, n_rf, penalty, rho);
    double mu = 1.0;
    for (int h = 0; h <= max_halvings; ++h, mu *= 0.5) {
        RVector<double> cand = box_project(w - mu * g, n_tx);
        const double fc = epm_objective(cand, target, n_rf, penalty, rho);
        if (fc <= fw + kArmijo * g.dot(cand - w)) return {std::move(cand), fc, h};
    }
    std::ostringstream msg;
    msg << "one-bit design: no sufficient decrease after " << max_halvings << " halvings at iteration " << iteration
        << " (F = " << fw << ", |grad| = " << g.norm() << ", penalty = " << penalty << ", rho = " << rho << ")";
    throw LineSearchStall(msg.str());
}

} // namespace

OneBitResult nesterov_epm(const RVector<double>& t0, const PatternTarget& target, Index n_rf,
                          const OneBitParams& params)
{
    params.validate();
    const auto start = std::chrono::steady_clock::now();
    const Index n_tx = reshape(t0, n_rf).rows();
    if (target.size() > 0 && target.A.rows() != n_tx)
        throw ValidationError("one-bit design: steering vectors do not match N_t");

    RVector<double> t = box_project(t0, n_tx);
    if (!(t.norm() > 0.0)) throw UndefinedDirection("one-bit design: zero starting point");
    RVector<double> t_prev = t;
    double tau = 1.0;
    double penalty = params.penalty_orth_init;
    double rho = params.penalty_bin_init;
    const double nrf = static_cast<double>(n_rf);

    DesignReport rep;
    rep.method = "Nesterov-EPM";
    long resets = 0;
    double f = epm_objective(t, target, n_rf, penalty, rho);

    for (int it = 1; it <= params.max_iters; ++it) {
        const double tau_next = next_momentum(tau);
        const RVector<double> w = box_project(t + ((tau - 1.0) / tau_next) * (t - t_prev), n_tx);

        Step s = projected_step(w, target, n_tx, n_rf, penalty, rho, params.max_halvings, it);
        double tau_after = tau_next;
        if (s.f > f) {
            s = projected_step(t, target, n_tx, n_rf, penalty, rho, params.max_halvings, it);
            tau_after = 1.0;
            ++resets;
        }
        t_prev = std::move(t);
        t = std::move(s.t);
        tau = tau_after;
        f = s.f;
        rep.map_evals += 1;

        const double pg = projected_gradient_norm(t, epm_gradient(t, target, n_rf, penalty, rho), n_tx);
        const ConstMap T = reshape(t, n_rf);
        TraceRow row;
        row.iteration = it;
        row.objective = f;
        row.grad_norm = pg;
        row.binary_gap = nrf - std::sqrt(nrf) * t.norm();
        row.mse = target.size() > 0 ? pattern_terms(T, target).err.squaredNorm() : 0.0;
        row.orth_residual = std::sqrt(orth_sq(T));
        row.penalty = penalty;
        row.map_evals = rep.map_evals;
        rep.trace.push_back(row);
        rep.iterations = it;

        if (pg <= params.tol && row.binary_gap <= params.gap_tol) {
            rep.converged = true;
            break;
        }
        bool bumped = false;
        if (it % params.orth_period == 0) {
            penalty *= params.penalty_orth_growth;
            bumped = true;
        }
        if (it % params.bin_period == 0) {
            rho *= params.penalty_bin_growth;
            bumped = true;
        }
        if (bumped) f = epm_objective(t, target, n_rf, penalty, rho);
    }
    if (params.max_iters == 0) rep.converged = true;

    OneBitResult out;
    out.relaxed = t;
    out.beamformer = OneBitBeamformer::from_real(reshape(t, n_rf));
    const RMatrix<double> Tq = out.beamformer.real_matrix();
    rep.final_mse = target.size() > 0 ? beampattern_mse(Tq.cast<Complex<double>>(), target) : 0.0;
    rep.orth_residual = orthogonality_residual(Tq);
    rep.note = "momentum resets: " + std::to_string(resets);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.report = std::move(rep);
    return out;
}

double onebit_objective(const OneBitBeamformer& B, const PatternTarget& target, double penalty)
{
    const RMatrix<double> T = B.real_matrix();
    const double mse = target.size() > 0 ? beampattern_mse(T.cast<Complex<double>>(), target) : 0.0;
    const double r = orthogonality_residual(T);
    return mse + penalty * r * r;
}

ExhaustiveResult exhaustive_onebit(const PatternTarget& target, Index n_tx, Index n_rf, double penalty)
{
    const Index n = n_tx * n_rf;
    if (n < 1 || n > 20)
        throw ValidationError("exhaustive_onebit: N_t * N_RF = " + std::to_string(n) + " exceeds the limit of 20");
    if (target.size() > 0 && target.A.rows() != n_tx)
        throw ValidationError("exhaustive_onebit: steering vectors do not match N_t");

    const double m = 1.0 / std::sqrt(static_cast<double>(n_tx));
    const RMatrix<double> I = RMatrix<double>::Identity(n_rf, n_rf);
    RMatrix<double> T(n_tx, n_rf);
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;
    const std::uint32_t count = 1u << n;
    for (std::uint32_t mask = 0; mask < count; ++mask) {
        for (Index i = 0; i < n; ++i)
            T.data()[i] = ((mask >> (n - 1 - i)) & 1u) ? m : -m;
        double f = penalty * (T.transpose() * T - I).squaredNorm();
        if (target.size() > 0)
            f += (beampattern_powers(T.cast<Complex<double>>(), target.A) - target.levels).squaredNorm();
        if (f < best) {
            best = f;
            best_mask = mask;
        }
    }
    Eigen::MatrixXi signs(n_tx, n_rf);
    for (Index i = 0; i < n; ++i)
        signs.data()[i] = ((best_mask >> (n - 1 - i)) & 1u) ? 1 : -1;
    return {OneBitBeamformer(std::move(signs)), best};
}

} // namespace cebeam
