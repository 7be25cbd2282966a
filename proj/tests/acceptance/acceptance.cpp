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

// Acceptance checks, one per invocation: `cebeam_acceptance <name>`.
// Prints a single PASS/FAIL line with the measured numbers; exit 1 on FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include <cebeam/covariance.hpp>
#include <cebeam/eval_sim.hpp>
#include <cebeam/onebit_design.hpp>
#include <cebeam/pipeline.hpp>

using namespace cebeam;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x)
{
    char b[64];
    std::snprintf(b, sizeof b, f, x);
    return b;
}

Verdict quantizer_beta()
{
    const double table[] = {0.3634, 0.1175, 0.03454, 0.009497, 0.002499};
    Verdict v{true, ""};
    for (int b = 1; b <= 5; ++b) {
        const double d = lloyd_max_codebook(b).distortion();
        const double rel = std::abs(d - table[b - 1]) / table[b - 1];
        v.pass = v.pass && rel < 0.02;
        v.detail += "B" + std::to_string(b) + "=" + fmt("%.6g", d) + " (" + fmt("%.2f", 100 * rel) + "%) ";
    }
    const double one = lloyd_max_codebook(1).distortion(), ref = 1.0 - 2.0 / kPi<double>;
    // four significant digits
    const bool sig4 = std::abs(one - ref) < 0.5e-4 * std::pow(10.0, std::floor(std::log10(ref)) + 1.0);
    v.pass = v.pass && sig4;
    v.detail += "B1 vs 1-2/pi diff " + fmt("%.2e", one - ref);
    return v;
}

Verdict gradient()
{
    const Index n_tx = 8, n_rf = 2;
    RVector<double> ang(3), lv(3);
    ang << 0.0, deg2rad(-35.0), deg2rad(50.0);
    lv << 1.0, 0.0, 0.0;
    const PatternTarget tg(ang, lv, n_tx);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    double worst = 0.0;
    for (int r = 0; r < 20; ++r) {
        RVector<double> t(n_tx * n_rf);
        for (Index i = 0; i < t.size(); ++i) t(i) = u(rng) / std::sqrt(double(n_tx));
        const RVector<double> g = epm_gradient(t, tg, n_rf, 0.3, 0.8);
        RVector<double> fd(t.size());
        for (Index i = 0; i < t.size(); ++i) {
            RVector<double> tp = t, tm = t;
            tp(i) += 1e-6;
            tm(i) -= 1e-6;
            fd(i) = (epm_objective(tp, tg, n_rf, 0.3, 0.8) - epm_objective(tm, tg, n_rf, 0.3, 0.8)) / 2e-6;
        }
        worst = std::max(worst, (g - fd).norm() / fd.norm());
    }
    return {worst < 1e-5, "max relative error " + fmt("%.3e", worst) + " over 20 points"};
}

struct DefaultDesignInputs {
    Scenario s = default_scenario();
    QuantizationModel q = quantization_model(std::optional<int>(1));
};

int descent_violations(const DesignReport& r)
{
    int bad = 0;
    for (std::size_t i = 1; i < r.trace.size(); ++i)
        if (r.trace[i].penalty == r.trace[i - 1].penalty && r.trace[i].objective > r.trace[i - 1].objective + 1e-9)
            ++bad;
    return bad;
}

Verdict mm_descent()
{
    DefaultDesignInputs in;
    const BcdResult b = bcd_power_allocation(in.s, in.q);
    const PatternTarget tg(b.profile, in.s.n_tx);
    const CMatrix<double> T0 = PhaseBeamformer::random(in.s.n_tx, in.s.n_rf, 1).matrix();
    CeDesignParams p;
    p.max_iters = 1500;
    p.tol = 0.0;
    const auto mm = plain_mm(T0, tg, p);
    const auto amm = squarem_accelerated_mm(T0, tg, p);
    const int vm = descent_violations(mm.report), va = descent_violations(amm.report);
    return {vm == 0 && va == 0,
            "MM " + std::to_string(mm.report.iterations) + " iters, " + std::to_string(vm) + " violations; AMM " +
                std::to_string(amm.report.iterations) + " iters, " + std::to_string(va) + " violations"};
}

Verdict method_ordering()
{
    DefaultDesignInputs in;
    double amm = 0, mm = 0, proj = 0;
    const int seeds = 5;
    for (int seed = 1; seed <= seeds; ++seed) {
        ExperimentConfig e;
        e.seed = std::uint64_t(seed);
        e.max_iters = 1500;
        e.tol = 0.0;
        auto re = [&](const char* m) {
            e.method = m;
            const CeDesign d = design_constant_envelope(in.s, in.q, e);
            return averaged_relative_entropy(in.s, d.design.beamformer.matrix(), in.q);
        };
        amm += re("amm") / seeds;
        mm += re("mm") / seeds;
        e.max_iters.reset();
        e.tol.reset();
        proj += re("projection") / seeds;
    }
    const bool order = amm > proj && amm > mm;
    const bool band = std::abs(amm - 0.3833) <= 0.3 * 0.3833;
    return {order && band, "AMM " + fmt("%.4f", amm) + ", MM " + fmt("%.4f", mm) + ", projection " + fmt("%.4f", proj) +
                               "; orderings " + (order ? "hold" : "violated") + "; AMM " +
                               (band ? "inside" : "outside") + " [0.2683, 0.4983]"};
}

Verdict onebit_oracle()
{
    const Index n_tx = 4, n_rf = 2;
    RVector<double> ang(3), lv(3);
    ang << 0.0, deg2rad(30.0), deg2rad(-50.0);
    lv << 1.0, 0.3, 0.0;
    const PatternTarget tg(ang, lv, n_tx);
    const double pen = 0.01;
    const double best = exhaustive_onebit(tg, n_tx, n_rf, pen).objective;
    double worst = 0.0;
    int hits = 0;
    for (int seed = 1; seed <= 10; ++seed) {
        CeDesignParams cp;
        cp.seed = std::uint64_t(seed);
        const auto ce = squarem_accelerated_mm(PhaseBeamformer::random(n_tx, n_rf, std::uint64_t(seed)).matrix(), tg, cp);
        OneBitParams op;
        op.seed = std::uint64_t(seed);
        const auto r = nesterov_epm(onebit_start_from(ce.beamformer.matrix()), tg, n_rf, op);
        const double ratio = onebit_objective(r.beamformer, tg, pen) / best;
        worst = std::max(worst, ratio);
        if (ratio <= 1.1) ++hits;
    }
    return {worst <= 1.1, "exhaustive optimum " + fmt("%.5f", best) + "; worst ratio " + fmt("%.3f", worst) + "; " +
                              std::to_string(hits) + "/10 seeds within 10%"};
}

Verdict equivalence()
{
    const Index N = 8, M = 4;
    const double lim = 1.0 / std::sqrt(double(M)), nm = double(N) / double(M);
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    // every vertex has a feasible partner
    int fwd_bad = 0;
    for (int mask = 0; mask < (1 << N); ++mask) {
        RVector<double> x(N);
        for (Index n = 0; n < N; ++n) x(n) = (mask >> n & 1) ? lim : -lim;
        const RVector<double> y = std::sqrt(nm) * x / x.norm();
        if (std::abs(x.dot(y) - nm) > 1e-12 || y.squaredNorm() > nm + 1e-12) ++fwd_bad;
    }

    long feasible = 0, rev_bad = 0;
    const long samples = 100000;
    for (long k = 0; k < samples; ++k) {
        RVector<double> x(N);
        const int kind = int(k % 4);
        for (Index n = 0; n < N; ++n) x(n) = coin(rng) ? lim : -lim;
        if (kind == 1) {
            // inward nudges from 1e-12 to 1e-4
            const double mag = std::pow(10.0, -12.0 + 8.0 * 0.5 * (u(rng) + 1.0));
            for (Index n = 0; n < N; ++n) x(n) -= std::copysign(mag * 0.5 * (u(rng) + 1.0), x(n));
        }
        if (kind == 2)
            for (Index n = 0; n < N; ++n) x(n) = lim * u(rng);
        if (kind == 3) x(Index(k % N)) *= 0.999;
        RVector<double> y = std::sqrt(nm) * x / x.norm();
        if ((k / 4) % 2) {
            // another point of the ball, not the maximizer
            RVector<double> z(N);
            for (Index n = 0; n < N; ++n) z(n) = u(rng);
            y = std::sqrt(nm) * (x / x.norm() + 1e-3 * z).normalized();
        }
        if (std::abs(x.dot(y) - nm) > 1e-9 || y.squaredNorm() > nm + 1e-9) continue;
        ++feasible;
        if (((x.array().abs() - lim).abs() > 1e-6).any()) ++rev_bad;
    }
    return {fwd_bad == 0 && rev_bad == 0 && feasible > 0,
            "vertices without partner " + std::to_string(fwd_bad) + "/256; " + std::to_string(feasible) + " of " +
                std::to_string(samples) + " samples feasible, " + std::to_string(rev_bad) + " off-vertex"};
}

CMatrix<double> desk_design(const Scenario& s, std::optional<int> bits, std::uint64_t seed)
{
    ExperimentConfig e;
    e.seed = seed;
    e.bits = bits;
    return design_constant_envelope(s, quantization_model(bits), e).design.beamformer.matrix();
}

Verdict aqnm()
{
    const Scenario s = desk_scenario();
    const CMatrix<double> T = desk_design(s, 1, 1);
    Verdict v{true, ""};
    for (int b : {1, 2, 3}) {
        const CMatrix<double> model = hypothesis_covariances(s, T, quantization_model(std::optional<int>(b)), s.target_mean_angle).r0;
        const CMatrix<double> sample = quantized_sample_covariance(s, T, b, 100000, 1000 + std::uint64_t(b));
        const double err = (sample - model).norm() / model.norm();
        v.pass = v.pass && err < 0.05;
        v.detail += "B" + std::to_string(b) + " " + fmt("%.2f", 100 * err) + "% ";
    }
    v.detail += "(normalized Frobenius error, 1e5 snapshots)";
    return v;
}

Verdict fig2()
{
    const std::vector<Index> sizes = {32, 64, 128, 256};
    std::map<int, std::vector<CrosscorrPoint>> res;
    for (int K : {5, 10, 20}) res[K] = steering_crosscorr_experiment(sizes, K, 1000, 1);
    bool dec = true, ordered = true;
    std::string d;
    for (auto& [K, pts] : res) {
        d += "K=" + std::to_string(K) + ":";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            d += " " + fmt("%.3f", pts[i].mean_error);
            if (i > 0 && !(pts[i].mean_error < pts[i - 1].mean_error)) dec = false;
        }
        d += "; ";
    }
    for (std::size_t i = 0; i < sizes.size(); ++i)
        if (!(res[5][i].mean_error < res[10][i].mean_error && res[10][i].mean_error < res[20][i].mean_error)) ordered = false;
    return {dec && ordered, d + "decreasing in N_r " + (dec ? "yes" : "no") + ", ordered in K " + (ordered ? "yes" : "no")};
}

Verdict fig3()
{
    const std::vector<Index> rf = {2, 4, 8};
    const std::vector<std::optional<int>> bits = {1, 2, 3, std::nullopt};
    const int seeds = 3;
    std::vector<std::vector<double>> re(rf.size(), std::vector<double>(bits.size(), 0.0));
    for (std::size_t i = 0; i < rf.size(); ++i) {
        Scenario s = desk_scenario();
        s.n_rf = rf[i];
        for (std::size_t j = 0; j < bits.size(); ++j) {
            const auto q = quantization_model(bits[j]);
            for (int seed = 1; seed <= seeds; ++seed)
                re[i][j] += averaged_relative_entropy(s, desk_design(s, bits[j], std::uint64_t(seed)), q) / seeds;
        }
    }
    bool in_b = true, in_rf = true, gap = true;
    std::string d;
    for (std::size_t i = 0; i < rf.size(); ++i) {
        d += "N_RF=" + std::to_string(rf[i]) + " [";
        for (std::size_t j = 0; j < bits.size(); ++j) {
            d += (j ? " " : "") + fmt("%.4f", re[i][j]);
            if (j > 0 && re[i][j] < re[i][j - 1]) in_b = false;
            if (i > 0 && re[i][j] < re[i - 1][j]) in_rf = false;
        }
        const double g = (re[i][3] - re[i][2]) / re[i][3];
        if (!(g < 0.10)) gap = false;
        d += "] gap " + fmt("%.1f", 100 * g) + "%; ";
    }
    return {in_b && in_rf && gap, d + "monotone in B " + (in_b ? "yes" : "no") + ", in N_RF " + (in_rf ? "yes" : "no") +
                                      ", B=3 gap < 10% " + (gap ? "yes" : "no")};
}

Verdict detection()
{
    const Scenario s = desk_scenario();
    const std::vector<double> snr = {-20, -15, -10, -5, 0};
    std::map<int, DetectionCurve> c;
    for (int b : {1, 3}) c[b] = detection_curve(desk_design(s, b, 1), s, b, snr, 1e-3, 100000, 500 + std::uint64_t(b));
    bool pfa_ok = true, mono = true, order = true;
    std::string d;
    for (int b : {1, 3}) {
        d += "B=" + std::to_string(b) + " Pd:";
        const auto& pts = c[b].points;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            d += " " + fmt("%.4f", pts[i].pd);
            if (std::abs(pts[i].pfa_measured - pts[i].pfa_target) > pts[i].pfa_halfwidth) pfa_ok = false;
            if (i > 0 && pts[i].pd < pts[i - 1].pd) mono = false;
        }
        d += "; ";
    }
    double pmin = 1, pmax = 0;
    for (int b : {1, 3})
        for (const auto& p : c[b].points) pmin = std::min(pmin, p.pfa_measured), pmax = std::max(pmax, p.pfa_measured);
    for (std::size_t i = 0; i < snr.size(); ++i)
        if (c[3].points[i].pd < c[1].points[i].pd - c[1].points[i].pd_halfwidth) order = false;
    d += "Pfa in [" + fmt("%.5f", pmin) + ", " + fmt("%.5f", pmax) + "]; Pfa in CI " + (pfa_ok ? "yes" : "no") +
         ", Pd monotone " + (mono ? "yes" : "no") + ", B=3 >= B=1 - CI " + (order ? "yes" : "no");
    return {pfa_ok && mono && order, d};
}

const std::map<std::string, std::function<Verdict()>>& checks()
{
    static const std::map<std::string, std::function<Verdict()>> m = {
        {"quantizer_beta", quantizer_beta}, {"gradient", gradient},     {"mm_descent", mm_descent},
        {"method_ordering", method_ordering}, {"onebit_oracle", onebit_oracle}, {"equivalence", equivalence},
        {"aqnm", aqnm},                     {"crosscorr_trend", fig2},    {"rf_bits_trend", fig3},
        {"detection", detection}};
    return m;
}

} // namespace

int main(int argc, char** argv)
{
    if (argc != 2 || !checks().count(argv[1])) {
        std::fprintf(stderr, "usage: cebeam_acceptance <check>\nchecks:");
        for (const auto& [k, _] : checks()) std::fprintf(stderr, " %s", k.c_str());
        std::fprintf(stderr, "\n");
        return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = checks().at(argv[1])();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", argv[1], v.detail.c_str(), sec);
    return v.pass ? 0 : 1;
}
