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
#include <random>
#include <vector>

#include <cebeam/covariance.hpp>
#include <cebeam/scenario.hpp>

namespace cebeam {

/// Minimum-MSE scalar quantizer for a unit-variance real Gaussian input.
struct ScalarQuantizer {
    int bits = 0;
    RVector<double> levels;     // 2^B, strictly increasing
    RVector<double> thresholds; // 2^B - 1 decision boundaries

    double operator()(double x) const;

    /// Exact mean squared error on N(0, 1).
    double distortion() const;
};

/// Lloyd-Max fixed point on the unit Gaussian; throws UnsupportedResolution
/// outside 1..5 bits and NumericFailure if the iteration does not settle.
ScalarQuantizer lloyd_max_codebook(int bits);

/// Monte Carlo estimate of E[(x - Q(x))^2] for x ~ N(0, 1).
double measured_distortion(const ScalarQuantizer& q, long samples, std::uint64_t seed);

/// Quantizes real and imaginary parts independently after scaling each entry
/// by its per-real-dimension standard deviation `sigma(i, j)`, then restores
/// the scale. A null quantizer is the ideal converter; sigma <= 0 skips the
/// scaling for that entry.
CMatrix<double> quantize_received(const CMatrix<double>& Y, const ScalarQuantizer* q, const RMatrix<double>& sigma);

/// Orthogonal chirp family s_n(l) = exp(j pi l^2 / L + j 2 pi n l / L); S S^H / L = I.
CMatrix<double> lfm_waveforms(Index n_rf, Index code_len);

/// Received-signal generator for one scenario and beamformer.
class EchoModel {
public:
    EchoModel(const Scenario& s, const CMatrix<double>& T, double theta_t);

    Index n_rx() const { return n_rx_; }
    Index code_len() const { return gc_.cols(); }

    /// Per-sample variance per receive antenna (complex), clutter plus noise
    /// and, when `with_target`, the target echo.
    RVector<double> sample_variance(bool with_target) const;

    /// One N_r x L snapshot. Doppler phase ramps are drawn per snapshot.
    CMatrix<double> draw(bool with_target, std::mt19937_64& rng) const;

private:
    Index n_rx_;
    double noise_power_;
    double target_power_;
    std::vector<double> clutter_powers_;
    CMatrix<double> ar_c_;  // N_r x K
    CVector<double> ar_t_;  // N_r
    CMatrix<double> gc_;    // K x L, rows a_t^T(theta_k) T S
    CVector<double> gt_;    // L
};

/// Sample covariance sum_l y_l y_l^H (averaged over snapshots) of truly
/// quantized H0 data; comparable to the model r0.
CMatrix<double> quantized_sample_covariance(const Scenario& s, const CMatrix<double>& T, std::optional<int> bits,
                                            long snapshots, std::uint64_t seed, int threads = 0);

struct DetectionPoint {
    double snr_db = 0;
    double pd = 0;
    double pd_halfwidth = 0;
    double pfa_target = 0;
    double pfa_measured = 0;
    double pfa_halfwidth = 0; // 95% interval for calibrated-vs-validated false alarm rates
    double threshold = 0;
    long trials = 0;
    std::uint64_t seed = 0;
};

struct DetectionCurve {
    std::vector<DetectionPoint> points;
};

/// Clairvoyant Gaussian likelihood-ratio detector on truly quantized data:
/// statistic sum_l y_l^H (R0^{-1} - R1^{-1}) y_l with the model covariances.
/// The threshold is the empirical (1 - pfa) quantile of one H0 batch, the
/// false-alarm rate is re-measured on an independent H0 batch and P_d on an
/// H1 batch; each batch holds `trials` snapshots.
DetectionPoint simulate_detection(const CMatrix<double>& T, const Scenario& s, std::optional<int> bits, double snr_db,
                                  double pfa, long trials, std::uint64_t seed, int threads = 0);

DetectionCurve detection_curve(const CMatrix<double>& T, const Scenario& s, std::optional<int> bits,
                               const std::vector<double>& snr_db, double pfa, long trials, std::uint64_t seed,
                               int threads = 0);

/// Worker count: CEBEAM_THREADS if set, else the hardware concurrency.
int default_threads();

struct CrosscorrPoint {
    Index n_rx = 0;
    double mean_error = 0;
};

/// Mean ||A^H A - I||_F over `trials` draws of K + 1 directions uniform on
/// [-pi/2, pi/2]. The same draws are reused for every array size.
std::vector<CrosscorrPoint> steering_crosscorr_experiment(const std::vector<Index>& n_rx_list, int K, long trials,
                                                          std::uint64_t seed);

struct CrosscorrMoments {
    double mean_sq = 0;  // E|a^H(x) a(y)|^2
    double variance = 0; // E|a^H a - E a^H a|^2
};

CrosscorrMoments steering_crosscorr_moments(Index n_rx, long trials, std::uint64_t seed);

/// E|a^H(x) a(y)|^2 for independent uniform directions:
///   (1/N) [1 + (2/N) sum_{d=1}^{N-1} (N - d) J0(pi d)^2].
double expected_steering_crosscorr(Index n_rx);

/// Bessel function of the first kind, order zero.
double bessel_j0(double x);

} // namespace cebeam
