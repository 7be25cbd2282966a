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
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>

#include <cebeam/errors.hpp>

namespace cebeam {

int default_threads()
{
    if (const char* env = std::getenv("CEBEAM_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

constexpr long kChunk = 2048;

// Work is cut into fixed chunks, each with a generator seeded from
// (seed, stream, chunk), so results do not depend on the worker count.
void parallel_chunks(long total, int threads, std::uint64_t seed, std::uint32_t stream,
                     const std::function<void(long, long, int, std::mt19937_64&)>& body)
{
    const long chunks = (total + kChunk - 1) / kChunk;
    const int workers = static_cast<int>(std::max<long>(1, std::min<long>(threads > 0 ? threads : default_threads(), chunks)));
    std::atomic<long> next{0};
    auto run = [&](int w) {
        for (long c = next++; c < chunks; c = next++) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream,
                              static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
            std::mt19937_64 rng(seq);
            body(c * kChunk, std::min(total, (c + 1) * kChunk), w, rng);
        }
    };
    if (workers == 1) {
        run(0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
}

Complex<double> cn(std::mt19937_64& rng, std::normal_distribution<double>& g, double var)
{
    const double s = std::sqrt(0.5 * var);
    const double re = g(rng);
    return {s * re, s * g(rng)};
}

} // namespace

EchoModel::EchoModel(const Scenario& s, const CMatrix<double>& T, double theta_t)
    : n_rx_(s.n_rx), noise_power_(s.noise_power), target_power_(s.target_power), clutter_powers_(s.clutter_powers)
{
    if (T.rows() != s.n_tx || T.cols() != s.n_rf) throw ValidationError("echo model: beamformer shape mismatch");
    const CMatrix<double> S = lfm_waveforms(s.n_rf, s.code_len);
    const CMatrix<double> TS = T * S;
    const std::vector<double> ang(s.clutter_angles.begin(), s.clutter_angles.end());
    ar_c_ = steering_matrix<double>(std::span<const double>(ang), s.n_rx);
    gc_ = steering_matrix<double>(std::span<const double>(ang), s.n_tx).transpose() * TS;
    if (gc_.rows() == 0) gc_.resize(0, s.code_len);
    ar_t_ = steering_vector<double>(theta_t, s.n_rx);
    gt_ = (steering_vector<double>(theta_t, s.n_tx).transpose() * TS).transpose();
}

RVector<double> EchoModel::sample_variance(bool with_target) const
{
    const double nr = static_cast<double>(n_rx_);
    RVector<double> v = RVector<double>::Constant(code_len(), noise_power_);
    for (Index k = 0; k < gc_.rows(); ++k)
        v += (clutter_powers_[static_cast<std::size_t>(k)] / nr) * gc_.row(k).cwiseAbs2().transpose();
    if (with_target) v += (target_power_ / nr) * gt_.cwiseAbs2();
    return v;
}

CMatrix<double> EchoModel::draw(bool with_target, std::mt19937_64& rng) const
{
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(-kPi<double>, kPi<double>);
    const Index L = code_len();
    CMatrix<double> Y(n_rx_, L);
    for (Index l = 0; l < L; ++l)
        for (Index m = 0; m < n_rx_; ++m) Y(m, l) = cn(rng, g, noise_power_);

    CVector<double> ramp(L);
    auto add_echo = [&](const auto& ar, const auto& gl, double power) {
        const Complex<double> xi = cn(rng, g, power);
        const double w = u(rng);
        for (Index l = 0; l < L; ++l) ramp(l) = xi * gl(l) * std::polar(1.0, w * static_cast<double>(l));
        Y.noalias() += ar * ramp.transpose();
    };
    for (Index k = 0; k < gc_.rows(); ++k)
        add_echo(ar_c_.col(k), gc_.row(k), clutter_powers_[static_cast<std::size_t>(k)]);
    if (with_target) add_echo(ar_t_, gt_, target_power_);
    return Y;
}

namespace {

RMatrix<double> agc_scale(const EchoModel& m)
{
    const RVector<double> sd = (0.5 * m.sample_variance(false)).cwiseSqrt();
    return sd.transpose().replicate(m.n_rx(), 1);
}

std::optional<ScalarQuantizer> make_quantizer(std::optional<int> bits)
{
    if (!bits) return std::nullopt;
    return lloyd_max_codebook(*bits);
}

} // namespace

CMatrix<double> quantized_sample_covariance(const Scenario& s, const CMatrix<double>& T, std::optional<int> bits,
                                            long snapshots, std::uint64_t seed, int threads)
{
    if (snapshots < 1) throw ValidationError("quantized_sample_covariance: need at least one snapshot");
    const EchoModel model(s, T, s.target_mean_angle);
    const auto q = make_quantizer(bits);
    const RMatrix<double> scale = agc_scale(model);
    // One partial sum per chunk keeps the reduction order fixed.
    const auto chunks = static_cast<std::size_t>((snapshots + kChunk - 1) / kChunk);
    std::vector<CMatrix<double>> part(chunks, CMatrix<double>::Zero(s.n_rx, s.n_rx));
    parallel_chunks(snapshots, threads, seed, 0xC0u, [&](long lo, long hi, int, std::mt19937_64& rng) {
        CMatrix<double>& acc = part[static_cast<std::size_t>(lo / kChunk)];
        for (long i = lo; i < hi; ++i) {
            const CMatrix<double> Yq = quantize_received(model.draw(false, rng), q ? &*q : nullptr, scale);
            acc.noalias() += Yq * Yq.adjoint();
        }
    });
    CMatrix<double> R = CMatrix<double>::Zero(s.n_rx, s.n_rx);
    for (const auto& p : part) R += p;
    return R / static_cast<double>(snapshots);
}

DetectionPoint simulate_detection(const CMatrix<double>& T, const Scenario& s, std::optional<int> bits, double snr_db,
                                  double pfa, long trials, std::uint64_t seed, int threads)
{
    if (!(pfa > 0.0 && pfa < 1.0)) throw ValidationError("simulate_detection: pfa must lie in (0, 1)");
    const long needed = static_cast<long>(std::ceil(10.0 / pfa));
    if (trials < needed)
        throw CalibrationTooSmall("threshold calibration at pfa = " + std::to_string(pfa) + " needs at least " +
                                  std::to_string(needed) + " trials, got " + std::to_string(trials));

    // Data use the requested SNR; the detector falls back to 0 dB when there is no target.
    Scenario data = s;
    data.target_power = std::isfinite(snr_db) ? s.noise_power * db2lin(snr_db) : 0.0;
    Scenario design = data;
    if (!(design.target_power > 0.0)) design.target_power = s.noise_power;

    const auto qm = quantization_model(bits);
    const auto cov = hypothesis_covariances(design, T, qm, s.target_mean_angle);
    const Index nr = s.n_rx;
    const CMatrix<double> I = CMatrix<double>::Identity(nr, nr);
    CMatrix<double> W = cov.r0.llt().solve(I) - cov.r1.llt().solve(I);
    W = 0.5 * (W + W.adjoint()).eval();

    const EchoModel model(data, T, s.target_mean_angle);
    const auto q = make_quantizer(bits);
    const RMatrix<double> scale = agc_scale(model);
    auto batch = [&](bool with_target, std::uint32_t stream) {
        std::vector<double> stat(static_cast<std::size_t>(trials));
        parallel_chunks(trials, threads, seed, stream, [&](long lo, long hi, int, std::mt19937_64& rng) {
            for (long i = lo; i < hi; ++i) {
                const CMatrix<double> Yq = quantize_received(model.draw(with_target, rng), q ? &*q : nullptr, scale);
                stat[static_cast<std::size_t>(i)] = (Yq.conjugate().cwiseProduct(W * Yq)).sum().real();
            }
        });
        return stat;
    };

    std::vector<double> cal = batch(false, 1u);
    std::sort(cal.begin(), cal.end(), std::greater<>());
    const auto k = static_cast<std::size_t>(std::floor(pfa * static_cast<double>(trials)));
    const double thr = cal[k];

    auto exceed = [&](const std::vector<double>& v) {
        return static_cast<double>(std::count_if(v.begin(), v.end(), [&](double x) { return x > thr; })) /
               static_cast<double>(v.size());
    };
    const double n = static_cast<double>(trials);
    DetectionPoint p;
    p.snr_db = snr_db;
    p.pfa_target = pfa;
    p.threshold = thr;
    p.trials = trials;
    p.seed = seed;
    p.pfa_measured = exceed(batch(false, 2u));
    p.pfa_halfwidth = 1.96 * std::sqrt(2.0 * pfa * (1.0 - pfa) / n);
    p.pd = exceed(batch(true, 3u));
    p.pd_halfwidth = 1.96 * std::sqrt(std::max(p.pd * (1.0 - p.pd), 1.0 / n) / n);
    return p;
}

DetectionCurve detection_curve(const CMatrix<double>& T, const Scenario& s, std::optional<int> bits,
                               const std::vector<double>& snr_db, double pfa, long trials, std::uint64_t seed,
                               int threads)
{
    DetectionCurve c;
    for (std::size_t i = 0; i < snr_db.size(); ++i)
        c.points.push_back(simulate_detection(T, s, bits, snr_db[i], pfa, trials, seed + 7919u * i, threads));
    return c;
}

} // namespace cebeam
