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

#include <cmath>
#include <sstream>
#include <vector>

#include <cebeam/array_model.hpp>
#include <cebeam/errors.hpp>
#include <cebeam/scenario.hpp>

namespace cebeam {

/// Quantized-data covariances under the clutter-only (r0) and
/// target-present (r1) hypotheses, with the AQNM quantization-noise
/// diagonals that were folded into them.
template <typename Scalar = double>
struct HypothesisCovariances {
    CMatrix<Scalar> r0;
    CMatrix<Scalar> r1;
    RVector<Scalar> rq0;
    RVector<Scalar> rq1;
};

/// Transmit powers phi(theta) seen by the target and by each clutter patch.
template <typename Scalar = double>
struct IlluminationPowers {
    Scalar target = 0;
    RVector<Scalar> clutter;
};

template <typename Derived>
IlluminationPowers<typename Derived::RealScalar> illumination_powers(const Scenario& s,
                                                                     const Eigen::MatrixBase<Derived>& T,
                                                                     double theta_t)
{
    using Scalar = typename Derived::RealScalar;
    IlluminationPowers<Scalar> p;
    p.target = beampattern_power(T, static_cast<Scalar>(theta_t));
    p.clutter.resize(s.n_clutter());
    for (Index k = 0; k < s.n_clutter(); ++k)
        p.clutter(k) = beampattern_power(T, static_cast<Scalar>(s.clutter_angles[static_cast<std::size_t>(k)]));
    return p;
}

/// Covariances assembled from given illumination powers. Useful on its own
/// when the powers come from a power-allocation profile rather than a T.
template <typename Scalar = double>
HypothesisCovariances<Scalar> hypothesis_covariances_from_powers(const Scenario& s, const QuantizationModel& q,
                                                                 double theta_t,
                                                                 const IlluminationPowers<Scalar>& p)
{
    const Index nr = s.n_rx;
    const Index k = s.n_clutter();
    const Scalar L = static_cast<Scalar>(s.code_len);
    const Scalar alpha = static_cast<Scalar>(q.alpha);
    const Scalar beta = static_cast<Scalar>(q.beta);

    // Unquantized per-hypothesis covariances without the L factor.
    CMatrix<Scalar> clutter = CMatrix<Scalar>::Identity(nr, nr) * static_cast<Scalar>(s.noise_power);
    if (k > 0) {
        const std::vector<Scalar> angles(s.clutter_angles.begin(), s.clutter_angles.end());
        const CMatrix<Scalar> Ac = steering_matrix<Scalar>(std::span<const Scalar>(angles), nr);
        RVector<Scalar> w(k);
        for (Index i = 0; i < k; ++i)
            w(i) = static_cast<Scalar>(s.clutter_powers[static_cast<std::size_t>(i)]) * p.clutter(i);
        clutter.noalias() += Ac * w.asDiagonal() * Ac.adjoint();
    }
    const CVector<Scalar> at = steering_vector<Scalar>(static_cast<Scalar>(theta_t), nr);
    CMatrix<Scalar> target = clutter;
    target.noalias() += (static_cast<Scalar>(s.target_power) * p.target) * (at * at.adjoint());

    HypothesisCovariances<Scalar> c;
    c.rq0 = (alpha * beta * L) * clutter.diagonal().real();
    c.rq1 = (alpha * beta * L) * target.diagonal().real();
    c.r0 = (alpha * alpha * L) * clutter;
    c.r0.diagonal() += c.rq0.template cast<Complex<Scalar>>();
    c.r1 = (alpha * alpha * L) * target;
    c.r1.diagonal() += c.rq1.template cast<Complex<Scalar>>();
    return c;
}

template <typename Derived>
HypothesisCovariances<typename Derived::RealScalar> hypothesis_covariances(const Scenario& s,
                                                                           const Eigen::MatrixBase<Derived>& T,
                                                                           const QuantizationModel& q,
                                                                           double theta_t)
{
    return hypothesis_covariances_from_powers(s, q, theta_t, illumination_powers(s, T, theta_t));
}

namespace detail {

template <typename Scalar>
Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> checked_eigensolver(const CMatrix<Scalar>& R, const char* name)
{
    Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> es(R, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericFailure(std::string("eigendecomposition failed for ") + name);
    const RVector<Scalar>& ev = es.eigenvalues();
    const Scalar lo = ev.minCoeff();
    const Scalar hi = ev.maxCoeff();
    const Scalar trace = ev.sum();
    if (!(lo > Scalar(1e-12) * trace) || hi / lo > Scalar(1e12)) {
        std::ostringstream msg;
        msg << name << " is ill-conditioned (eigenvalues in [" << lo << ", " << hi << "])";
        throw IllConditionedModel(msg.str());
    }
    return es;
}

} // namespace detail

/// Kullback-Leibler divergence D(P0 || P1) between zero-mean circular
/// Gaussians with covariances r0 and r1:
///   -log|R0| + log|R1| + Tr(R1^{-1} R0) - N.
template <typename Scalar>
Scalar relative_entropy(const HypothesisCovariances<Scalar>& c)
{
    const auto e0 = detail::checked_eigensolver(c.r0, "R_Y0");
    const auto e1 = detail::checked_eigensolver(c.r1, "R_Y1");
    const Scalar logdet0 = e0.eigenvalues().array().log().sum();
    const Scalar logdet1 = e1.eigenvalues().array().log().sum();
    Eigen::LLT<CMatrix<Scalar>> llt(c.r1);
    if (llt.info() != Eigen::Success)
        throw IllConditionedModel("R_Y1 is not positive definite");
    const Scalar tr = llt.solve(c.r0).trace().real();
    return -logdet0 + logdet1 + tr - static_cast<Scalar>(c.r0.rows());
}

/// Mean of the per-angle relative entropy over the target grid.
template <typename Derived>
typename Derived::RealScalar averaged_relative_entropy(const Scenario& s, const Eigen::MatrixBase<Derived>& T,
                                                       const QuantizationModel& q)
{
    using Scalar = typename Derived::RealScalar;
    const std::vector<double> grid = s.target_grid();
    Scalar acc = 0;
    for (double th : grid)
        acc += relative_entropy(hypothesis_covariances(s, T, q, th));
    return acc / static_cast<Scalar>(grid.size());
}

} // namespace cebeam
