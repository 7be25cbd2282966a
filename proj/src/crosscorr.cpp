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

#include <cebeam/eval_sim.hpp>

#include <cmath>

#include <cebeam/errors.hpp>

namespace cebeam {

double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }

double expected_steering_crosscorr(Index n_rx)
{
    if (n_rx < 1) throw ValidationError("expected_steering_crosscorr: need at least one element");
    const double n = static_cast<double>(n_rx);
    double acc = 0.0;
    for (Index d = 1; d < n_rx; ++d) {
        const double j = bessel_j0(kPi<double> * static_cast<double>(d));
        acc += (n - static_cast<double>(d)) * j * j;
    }
    return (1.0 + 2.0 * acc / n) / n;
}

std::vector<CrosscorrPoint> steering_crosscorr_experiment(const std::vector<Index>& n_rx_list, int K, long trials,
                                                          std::uint64_t seed)
{
    if (K < 0 || trials < 1000) throw ValidationError("steering_crosscorr_experiment: need K >= 0 and trials >= 1000");
    const auto m = static_cast<std::size_t>(K + 1);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-kPi<double> / 2, kPi<double> / 2);
    std::vector<std::vector<double>> draws(static_cast<std::size_t>(trials), std::vector<double>(m));
    for (auto& d : draws)
        for (auto& a : d) a = u(rng);

    std::vector<CrosscorrPoint> out;
    for (Index n : n_rx_list) {
        double acc = 0.0;
        for (const auto& d : draws) {
            const CMatrix<double> A = steering_matrix<double>(std::span<const double>(d), n);
            acc += (A.adjoint() * A - CMatrix<double>::Identity(K + 1, K + 1)).norm();
        }
        out.push_back({n, acc / static_cast<double>(trials)});
    }
    return out;
}

CrosscorrMoments steering_crosscorr_moments(Index n_rx, long trials, std::uint64_t seed)
{
    if (trials < 2) throw ValidationError("steering_crosscorr_moments: need at least two trials");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-kPi<double> / 2, kPi<double> / 2);
    Complex<double> sum = 0.0;
    double sum_sq = 0.0;
    for (long t = 0; t < trials; ++t) {
        const double x = u(rng);
        const double y = u(rng);
        const Complex<double> c = steering_vector<double>(x, n_rx).dot(steering_vector<double>(y, n_rx));
        sum += c;
        sum_sq += std::norm(c);
    }
    const double n = static_cast<double>(trials);
    CrosscorrMoments mo;
    mo.mean_sq = sum_sq / n;
    mo.variance = (sum_sq - std::norm(sum) / n) / (n - 1.0);
    return mo;
}

} // namespace cebeam
