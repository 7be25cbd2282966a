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

#include <cebeam/ce_design.hpp>

#include <chrono>
#include <cmath>

#include <cebeam/errors.hpp>

namespace cebeam {

void CeDesignParams::validate() const
{
    if (!(penalty_init > 0.0)) throw ValidationError("ce design: penalty_init must be positive");
    if (!(penalty_growth > 1.0)) throw ValidationError("ce design: penalty_growth must exceed 1");
    if (penalty_period < 1) throw ValidationError("ce design: penalty_period must be positive");
    if (max_iters < 0) throw ValidationError("ce design: max_iters must be non-negative");
    if (!(tol >= 0.0)) throw ValidationError("ce design: tol must be non-negative");
    if (!(orth_tol > 0.0)) throw ValidationError("ce design: orth_tol must be positive");
}

PatternTarget::PatternTarget(const PowerProfile& p, Index n_tx) : PatternTarget(p.angles(), p.levels(), n_tx) {}

PatternTarget::PatternTarget(const RVector<double>& angles, const RVector<double>& lv, Index n_tx)
    : A(n_tx, angles.size()), levels(lv)
{
    if (angles.size() != lv.size()) throw ValidationError("pattern target: angle and level counts differ");
    for (Index p = 0; p < angles.size(); ++p)
        A.col(p) = steering_vector<double>(angles(p), n_tx);
}

namespace {

double sigma_max(const CMatrix<double>& T)
{
    Eigen::SelfAdjointEigenSolver<CMatrix<double>> es(T.adjoint() * T, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

// lambda_max(sum_p w_p a_p^* a_p^T) for w >= 0 via the P x P Gram matrix.
double weighted_gram_lambda(const CMatrix<double>& A, const RVector<double>& w)
{
    if (A.cols() == 0 || w.maxCoeff() <= 0.0) return 0.0;
    const RVector<double> sw = w.cwiseMax(0.0).cwiseSqrt();
    CMatrix<double> G = A.transpose() * A.conjugate();
    G = sw.asDiagonal() * G * sw.asDiagonal();
    Eigen::SelfAdjointEigenSolver<CMatrix<double>> es(G, Eigen::EigenvaluesOnly);
    return std::max(0.0, es.eigenvalues().maxCoeff());
}

RVector<double> pattern_error(const CMatrix<double>& T, const PatternTarget& target)
{
    if (target.size() == 0) return RVector<double>();
    return beampattern_powers(T, target.A) - target.levels;
}

} // namespace

MinorizerState minorizer_matrix(const CMatrix<double>& Tm, const PatternTarget& target, double penalty)
{
    const Index n = Tm.rows();
    MinorizerState st;
    st.q_matrix = CMatrix<double>::Zero(n, n);
    const RVector<double> e = pattern_error(Tm, target);
    for (Index p = 0; p < target.size(); ++p) {
        const auto a = target.A.col(p);
        st.q_matrix.noalias() += (2.0 * e(p)) * (a.conjugate() * a.transpose());
    }
    st.q_matrix.noalias() += (2.0 * penalty) * (Tm * Tm.adjoint());
    st.q_matrix.diagonal().array() -= 2.0 * penalty;
    st.q_matrix = 0.5 * (st.q_matrix + st.q_matrix.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix<double>> es(st.q_matrix, Eigen::EigenvaluesOnly);
    st.lambda_max = es.eigenvalues().maxCoeff();
    return st;
}

CMatrix<double> minorizer_product(const CMatrix<double>& Tm, const PatternTarget& target, double penalty)
{
    CMatrix<double> out = (2.0 * penalty) * (Tm * (Tm.adjoint() * Tm) - Tm);
    if (target.size() > 0) {
        const CMatrix<double> proj = target.A.transpose() * Tm; // P x N_RF, row p = a_p^T T_m
        const RVector<double> e = proj.rowwise().squaredNorm() - target.levels;
        out.noalias() += target.A.conjugate() * ((2.0 * e).asDiagonal() * proj);
    }
    return out;
}

double minorizer_lambda_bound(const CMatrix<double>& Tm, const PatternTarget& target, double penalty)
{
    double bound = 0.0;
    if (target.size() > 0) bound = weighted_gram_lambda(target.A, (2.0 * pattern_error(Tm, target)).cwiseMax(0.0));
    const double s = sigma_max(Tm);
    return bound + 2.0 * penalty * (s * s - 1.0);
}

double majorizer_curvature(const CMatrix<double>& Tm, const CMatrix<double>& T, const PatternTarget& target,
                           double penalty)
{
    const double sm = sigma_max(Tm);
    const double st = T.size() > 0 ? sigma_max(T) : std::sqrt(static_cast<double>(Tm.cols()));
    const double span = (sm + st) * (sm + st);
    double c = 0.0;
    if (target.size() > 0) {
        const RVector<double> w = (2.0 * pattern_error(Tm, target).cwiseMax(0.0)).array() + span;
        c += weighted_gram_lambda(target.A, w);
    }
    c += penalty * (2.0 * std::max(0.0, sm * sm - 1.0) + span);
    return c;
}

CMatrix<double> unit_modulus(const CMatrix<double>& Z, const CMatrix<double>& fallback)
{
    const double m = 1.0 / std::sqrt(static_cast<double>(Z.rows()));
    const double floor = 1e-14 * Z.cwiseAbs().maxCoeff();
    CMatrix<double> out(Z.rows(), Z.cols());
    for (Index j = 0; j < Z.cols(); ++j)
        for (Index i = 0; i < Z.rows(); ++i) {
            const auto z = std::abs(Z(i, j)) > floor ? Z(i, j) : fallback(i, j);
            out(i, j) = std::polar(m, std::arg(z));
        }
    return out;
}

CMatrix<double> phase_update(const CMatrix<double>& QTm, const CMatrix<double>& Tm, double lambda)
{
    return unit_modulus(lambda * Tm - QTm, Tm);
}

MmStep mm_step(const CMatrix<double>& Tm, const PatternTarget& target, double penalty)
{
    const CMatrix<double> QT = minorizer_product(Tm, target, penalty);
    const double z0 = penalized_objective(Tm, target, penalty);
    const double lam0 = minorizer_lambda_bound(Tm, target, penalty);
    const double safe = majorizer_curvature(Tm, CMatrix<double>(), target, penalty);

    constexpr int kRefinements = 8;
    const double gap = std::max(safe - lam0, 1e-12 * (1.0 + std::abs(lam0)));

    MmStep out{Tm, lam0, z0, 0};
    for (int k = 0; k <= kRefinements; ++k) {
        const double lambda = k == 0 ? lam0 : lam0 + gap * std::ldexp(1.0, k - kRefinements);
        const CMatrix<double> cand = phase_update(QT, Tm, lambda);
        const CMatrix<double> D = cand - Tm;
        const double bound = z0 + 2.0 * (D.adjoint() * QT).trace().real() + lambda * D.squaredNorm();
        const double z = penalized_objective(cand, target, penalty);
        out.tries = k + 1;
        if (z <= bound && z <= z0) {
            out.T = cand;
            out.lambda = lambda;
            out.objective = z;
            return out;
        }
    }
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

CMatrix<double> checked_start(const CMatrix<double>& T0)
{
    if (T0.size() == 0) throw ValidationError("ce design: empty starting beamformer");
    const double m = 1.0 / std::sqrt(static_cast<double>(T0.rows()));
    if (((T0.cwiseAbs().array() - m).abs() > 1e-9).any())
        throw ValidationError("ce design: starting beamformer is not unit-modulus");
    return PhaseBeamformer::from_complex(T0).matrix();
}

TraceRow make_row(int it, const CMatrix<double>& T, const PatternTarget& target, double penalty, long evals,
                  const EntropyMonitor& monitor, int every)
{
    TraceRow r;
    r.iteration = it;
    r.mse = beampattern_mse(T, target);
    r.orth_residual = orthogonality_residual(T);
    r.objective = r.mse + penalty * r.orth_residual * r.orth_residual;
    r.penalty = penalty;
    r.map_evals = evals;
    if (monitor && every > 0 && it % every == 0) r.relative_entropy = monitor(T);
    return r;
}

CeDesignResult finish(const CMatrix<double>& T, DesignReport report, const PatternTarget& target, Clock::time_point t0,
                      const EntropyMonitor& monitor)
{
    report.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    report.final_mse = beampattern_mse(T, target);
    report.orth_residual = orthogonality_residual(T);
    if (monitor) report.relative_entropy = monitor(T);
    return {PhaseBeamformer::from_complex(T), std::move(report)};
}

} // namespace

CeDesignResult plain_mm(const CMatrix<double>& T0, const PatternTarget& target, const CeDesignParams& params,
                        const EntropyMonitor& monitor)
{
    params.validate();
    const auto start = Clock::now();
    CMatrix<double> T = checked_start(T0);
    double penalty = params.penalty_init;
    DesignReport rep;
    rep.method = "MM";

    for (int m = 1; m <= params.max_iters; ++m) {
        const MmStep s = mm_step(T, target, penalty);
        ++rep.map_evals;
        const double step = (s.T - T).squaredNorm();
        T = s.T;
        rep.trace.push_back(make_row(m, T, target, penalty, rep.map_evals, monitor, params.monitor_every));
        rep.iterations = m;
        if (step <= params.tol && rep.trace.back().orth_residual <= params.orth_tol) {
            rep.converged = true;
            break;
        }
        if (m % params.penalty_period == 0) penalty *= params.penalty_growth;
    }
    if (params.max_iters == 0) rep.converged = true;
    return finish(T, std::move(rep), target, start, monitor);
}

CeDesignResult squarem_accelerated_mm(const CMatrix<double>& T0, const PatternTarget& target,
                                      const CeDesignParams& params, const EntropyMonitor& monitor)
{
    params.validate();
    const auto start = Clock::now();
    CMatrix<double> T = checked_start(T0);
    double penalty = params.penalty_init;
    DesignReport rep;
    rep.method = "AMM";
    long fallbacks = 0;

    for (int m = 1; m <= params.max_iters; ++m) {
        const double z0 = penalized_objective(T, target, penalty);
        const MmStep s1 = mm_step(T, target, penalty);
        const MmStep s2 = mm_step(s1.T, target, penalty);
        rep.map_evals += 2;

        const CMatrix<double> Y1 = s1.T - T;
        const CMatrix<double> Y2 = s2.T - s1.T - Y1;
        const double n1 = Y1.norm();
        const double n2 = Y2.norm();

        CMatrix<double> next = s2.T;
        if (n2 > 0.0) {
            const double kappa = -n1 / n2;
            const CMatrix<double> Z = T - 2.0 * kappa * Y1 + kappa * kappa * Y2;
            CMatrix<double> acc = unit_modulus(Z, T);
            if (penalized_objective(acc, target, penalty) <= z0)
                next = std::move(acc);
            else
                ++fallbacks;
        }

        const double step = (next - T).squaredNorm();
        T = std::move(next);
        rep.trace.push_back(make_row(m, T, target, penalty, rep.map_evals, monitor, params.monitor_every));
        rep.iterations = m;
        if (step <= params.tol && rep.trace.back().orth_residual <= params.orth_tol) {
            rep.converged = true;
            break;
        }
        if (m % params.penalty_period == 0) penalty *= params.penalty_growth;
    }
    if (params.max_iters == 0) rep.converged = true;
    rep.note = "extrapolation fallbacks: " + std::to_string(fallbacks);
    return finish(T, std::move(rep), target, start, monitor);
}

} // namespace cebeam
