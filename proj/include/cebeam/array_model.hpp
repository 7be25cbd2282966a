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
#include <random>
#include <span>
#include <stdexcept>

#include <cebeam/types.hpp>

namespace cebeam {

/// Unit-norm response of a half-wavelength ULA:
/// element m is exp(-j*pi*m*sin(theta)) / sqrt(n).
template <typename Scalar = double>
CVector<Scalar> steering_vector(Scalar theta, Index n)
{
    CVector<Scalar> a(n);
    const Scalar u = kPi<Scalar> * std::sin(theta);
    const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(n));
    for (Index m = 0; m < n; ++m)
        a(m) = std::polar(scale, -u * static_cast<Scalar>(m));
    return a;
}

/// Steering vectors as columns.
template <typename Scalar = double>
CMatrix<Scalar> steering_matrix(std::span<const Scalar> thetas, Index n)
{
    CMatrix<Scalar> A(n, static_cast<Index>(thetas.size()));
    for (Index k = 0; k < A.cols(); ++k)
        A.col(k) = steering_vector<Scalar>(thetas[static_cast<std::size_t>(k)], n);
    return A;
}

/// phi(theta) = a^T T T^H a^*  =  || a^T T ||^2.
template <typename Derived>
typename Derived::RealScalar beampattern_power(const Eigen::MatrixBase<Derived>& T,
                                               typename Derived::RealScalar theta)
{
    using Scalar = typename Derived::RealScalar;
    const CVector<Scalar> a = steering_vector<Scalar>(theta, T.rows());
    return (a.transpose() * T).squaredNorm();
}

/// Beampattern at every column of a precomputed steering matrix.
template <typename DerivedT, typename DerivedA>
RVector<typename DerivedT::RealScalar> beampattern_powers(const Eigen::MatrixBase<DerivedT>& T,
                                                          const Eigen::MatrixBase<DerivedA>& A)
{
    return (A.transpose() * T).rowwise().squaredNorm();
}

/// || T^H T - I ||_F
template <typename Derived>
typename Derived::RealScalar orthogonality_residual(const Eigen::MatrixBase<Derived>& T)
{
    const Index k = T.cols();
    return (T.adjoint() * T - Derived::PlainObject::Identity(k, k)).norm();
}

/// Constant-envelope analog beamformer stored by its phases; every entry of
/// matrix() has modulus exactly 1/sqrt(n_tx).
class PhaseBeamformer {
public:
    PhaseBeamformer() = default;
    explicit PhaseBeamformer(RMatrix<double> phases) : phases_(std::move(phases)) {}

    /// Phases of an arbitrary complex matrix; zero entries take phase 0.
    static PhaseBeamformer from_complex(const CMatrix<double>& Z)
    {
        RMatrix<double> ph = Z.unaryExpr([](const Complex<double>& z) { return std::arg(z); });
        return PhaseBeamformer(std::move(ph));
    }

    static PhaseBeamformer random(Index n_tx, Index n_rf, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-kPi<double>, kPi<double>);
        RMatrix<double> ph(n_tx, n_rf);
        for (Index j = 0; j < n_rf; ++j)
            for (Index i = 0; i < n_tx; ++i)
                ph(i, j) = u(rng);
        return PhaseBeamformer(std::move(ph));
    }

    Index n_tx() const { return phases_.rows(); }
    Index n_rf() const { return phases_.cols(); }
    const RMatrix<double>& phases() const { return phases_; }

    CMatrix<double> matrix() const
    {
        const double m = 1.0 / std::sqrt(static_cast<double>(n_tx()));
        return phases_.unaryExpr([m](double p) { return std::polar(m, p); });
    }

private:
    RMatrix<double> phases_;
};

/// One-bit beamformer: entries are sign(i,j)/sqrt(n_tx), sign in {-1,+1}.
class OneBitBeamformer {
public:
    OneBitBeamformer() = default;
    explicit OneBitBeamformer(Eigen::MatrixXi signs) : signs_(std::move(signs))
    {
        if (!(signs_.array().abs() == 1).all())
            throw std::invalid_argument("OneBitBeamformer: entries must be +1 or -1");
    }

    /// sign(x), with zeros mapped to +1.
    static OneBitBeamformer from_real(const RMatrix<double>& X)
    {
        Eigen::MatrixXi s = X.unaryExpr([](double v) { return v < 0.0 ? -1 : 1; });
        return OneBitBeamformer(std::move(s));
    }

    Index n_tx() const { return signs_.rows(); }
    Index n_rf() const { return signs_.cols(); }
    const Eigen::MatrixXi& signs() const { return signs_; }

    RMatrix<double> real_matrix() const
    {
        return signs_.cast<double>() / std::sqrt(static_cast<double>(n_tx()));
    }
    CMatrix<double> matrix() const { return real_matrix().cast<Complex<double>>(); }

private:
    Eigen::MatrixXi signs_;
};

} // namespace cebeam
