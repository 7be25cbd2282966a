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

#include <algorithm>
#include <cmath>
#include <limits>

#include <cebeam/errors.hpp>

namespace cebeam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pdf(double x) { return std::isinf(x) ? 0.0 : std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi<double>); }
double cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double x_pdf(double x) { return std::isinf(x) ? 0.0 : x * pdf(x); }

} // namespace

double ScalarQuantizer::operator()(double x) const
{
    const auto* first = thresholds.data();
    const auto* it = std::upper_bound(first, first + thresholds.size(), x);
    return levels(static_cast<Index>(it - first));
}

double ScalarQuantizer::distortion() const
{
    double d = 0.0;
    const Index n = levels.size();
    for (Index i = 0; i < n; ++i) {
        const double a = i == 0 ? -kInf : thresholds(i - 1);
        const double b = i == n - 1 ? kInf : thresholds(i);
        const double y = levels(i);
        const double mass = cdf(b) - cdf(a);
        // int_a^b (x - y)^2 phi(x) dx
        d += (1.0 + y * y) * mass + x_pdf(a) - x_pdf(b) - 2.0 * y * (pdf(a) - pdf(b));
    }
    return d;
}

ScalarQuantizer lloyd_max_codebook(int bits)
{
    if (bits < 1 || bits > 5) throw UnsupportedResolution("Lloyd-Max codebooks cover 1..5 bits");
    const Index n = Index(1) << bits;
    ScalarQuantizer q;
    q.bits = bits;
    q.levels = RVector<double>::LinSpaced(n, -1.0 - 0.4 * bits, 1.0 + 0.4 * bits);
    q.thresholds.resize(n - 1);

    for (int it = 0; it < 100000; ++it) {
        for (Index i = 0; i + 1 < n; ++i) q.thresholds(i) = 0.5 * (q.levels(i) + q.levels(i + 1));
        double moved = 0.0;
        for (Index i = 0; i < n; ++i) {
            const double a = i == 0 ? -kInf : q.thresholds(i - 1);
            const double b = i == n - 1 ? kInf : q.thresholds(i);
            const double y = (pdf(a) - pdf(b)) / (cdf(b) - cdf(a));
            moved = std::max(moved, std::abs(y - q.levels(i)));
            q.levels(i) = y;
        }
        if (moved < 1e-10) {
            for (Index i = 0; i + 1 < n; ++i) q.thresholds(i) = 0.5 * (q.levels(i) + q.levels(i + 1));
            return q;
        }
    }
    throw NumericFailure("Lloyd-Max iteration did not converge for " + std::to_string(bits) + " bits");
}

double measured_distortion(const ScalarQuantizer& q, long samples, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    double acc = 0.0;
    for (long i = 0; i < samples; ++i) {
        const double x = g(rng);
        const double e = x - q(x);
        acc += e * e;
    }
    return acc / static_cast<double>(samples);
}

CMatrix<double> quantize_received(const CMatrix<double>& Y, const ScalarQuantizer* q, const RMatrix<double>& sigma)
{
    if (!q) return Y;
    if (sigma.rows() != Y.rows() || sigma.cols() != Y.cols())
        throw ValidationError("quantize_received: scale matrix shape differs from the data");
    CMatrix<double> out(Y.rows(), Y.cols());
    for (Index j = 0; j < Y.cols(); ++j)
        for (Index i = 0; i < Y.rows(); ++i) {
            const double s = sigma(i, j) > 0.0 ? sigma(i, j) : 1.0;
            out(i, j) = Complex<double>((*q)(Y(i, j).real() / s) * s, (*q)(Y(i, j).imag() / s) * s);
        }
    return out;
}

CMatrix<double> lfm_waveforms(Index n_rf, Index code_len)
{
    if (n_rf < 1 || code_len < 1 || n_rf > code_len)
        throw InfeasibleWaveform("orthogonal waveforms need 1 <= N_RF <= L (got N_RF = " + std::to_string(n_rf) +
                                 ", L = " + std::to_string(code_len) + ")");
    const double L = static_cast<double>(code_len);
    CMatrix<double> S(n_rf, code_len);
    for (Index n = 0; n < n_rf; ++n)
        for (Index l = 0; l < code_len; ++l) {
            const double ld = static_cast<double>(l);
            S(n, l) = std::polar(1.0, kPi<double> * ld * ld / L + 2.0 * kPi<double> * static_cast<double>(n) * ld / L);
        }
    return S;
}

} // namespace cebeam
