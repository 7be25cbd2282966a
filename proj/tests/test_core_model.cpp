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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include <cebeam/covariance.hpp>
#include <cebeam/errors.hpp>
#include <cebeam/eval_sim.hpp>

using namespace cebeam;
using Catch::Approx;

namespace {

CMatrix<double> random_unit_modulus(Index n, Index k, std::uint64_t seed)
{
    return PhaseBeamformer::random(n, k, seed).matrix();
}

CMatrix<double> random_pd(Index n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    CMatrix<double> X(n, n + 2);
    for (Index j = 0; j < X.cols(); ++j)
        for (Index i = 0; i < n; ++i) X(i, j) = {g(rng), g(rng)};
    CMatrix<double> R = X * X.adjoint() / static_cast<double>(n);
    R.diagonal().array() += 0.1;
    return R;
}

// KL through determinants and an explicit inverse from a full-pivot LU.
double kl_lu(const CMatrix<double>& r0, const CMatrix<double>& r1)
{
    Eigen::FullPivLU<CMatrix<double>> lu0(r0), lu1(r1);
    const double ld0 = std::log(std::abs(lu0.determinant()));
    const double ld1 = std::log(std::abs(lu1.determinant()));
    return -ld0 + ld1 + (lu1.inverse() * r0).trace().real() - static_cast<double>(r0.rows());
}

Scenario small_scenario()
{
    Scenario s = desk_scenario();
    s.n_tx = s.n_rx = 12;
    s.n_rf = 3;
    s.code_len = 8;
    s.clutter_angles = {deg2rad(-40.0), deg2rad(25.0), deg2rad(60.0)};
    s.clutter_powers = {100.0, 30.0, 1000.0};
    return s;
}

} // namespace

TEST_CASE("steering vector entries and norm")
{
    const CVector<double> a = steering_vector<double>(0.0, 4);
    for (Index m = 0; m < 4; ++m) CHECK(std::abs(a(m) - Complex<double>(0.5, 0.0)) < 1e-15);

    const CVector<double> b = steering_vector<double>(kPi<double> / 2, 2);
    CHECK(std::abs(b(0) - Complex<double>(1 / std::sqrt(2.0), 0)) < 1e-15);
    CHECK(std::abs(b(1) - Complex<double>(-1 / std::sqrt(2.0), 0)) < 1e-15);

    const CVector<double> c = steering_vector<double>(0.3, 64);
    CHECK(c.norm() == Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(c.dot(c) - 1.0) < 1e-13);
    for (Index m = 0; m < 64; ++m) {
        const Complex<double> ref = std::polar(1.0 / 8.0, -kPi<double> * static_cast<double>(m) * std::sin(0.3));
        CHECK(std::abs(c(m) - ref) < 1e-14);
    }
}

TEST_CASE("AQNM table and quantization model")
{
    const double table[] = {0.3634, 0.1175, 0.03454, 0.009497, 0.002499};
    for (int b = 1; b <= 5; ++b) {
        const auto q = quantization_model(std::optional<int>(b));
        CHECK(q.beta == table[b - 1]);
        CHECK(q.alpha + q.beta == 1.0);
        CHECK(q.label() == std::to_string(b));
    }
    CHECK(quantization_model(std::optional<int>(4)).alpha == Approx(0.990503).epsilon(1e-12));
    const auto ideal = quantization_model(std::optional<int>());
    CHECK(ideal.beta == 0.0);
    CHECK(ideal.alpha == 1.0);
    CHECK(ideal.ideal());
    CHECK(quantization_model(std::string("ideal")).ideal());
    CHECK(quantization_model(std::string("3")).beta == 0.03454);
    CHECK_THROWS_AS(quantization_model(std::optional<int>(0)), UnsupportedResolution);
    CHECK_THROWS_AS(quantization_model(std::optional<int>(6)), UnsupportedResolution);
    CHECK_THROWS_AS(quantization_model(std::string("seven")), std::invalid_argument);
}

TEST_CASE("beampattern power")
{
    SECTION("orthogonal 2x2 gives unit power everywhere")
    {
        CMatrix<double> T(2, 2);
        T << 1, 1, 1, -1;
        T /= std::sqrt(2.0);
        for (double th = -1.5; th <= 1.5; th += 0.1) CHECK(beampattern_power(T, th) == Approx(1.0).epsilon(1e-13));
    }
    SECTION("column-by-column oracle")
    {
        const CMatrix<double> T = random_unit_modulus(16, 3, 7);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        for (int r = 0; r < 20; ++r) {
            const double th = u(rng);
            const CVector<double> a = steering_vector<double>(th, 16);
            double ref = 0.0;
            for (Index j = 0; j < 3; ++j) {
                Complex<double> acc = 0.0;
                for (Index i = 0; i < 16; ++i) acc += a(i) * T(i, j);
                ref += std::norm(acc);
            }
            CHECK(beampattern_power(T, th) == Approx(ref).epsilon(1e-12));
        }
    }
    SECTION("rank-one all-ones matrix at broadside")
    {
        for (Index k : {1, 2, 5}) {
            const CMatrix<double> T = CMatrix<double>::Constant(9, k, 1.0 / 3.0);
            CHECK(beampattern_power(T, 0.0) == Approx(static_cast<double>(k)).epsilon(1e-13));
        }
    }
    SECTION("bounded by one for orthonormal columns")
    {
        const CMatrix<double> Q = CMatrix<double>::Identity(8, 8).leftCols(3);
        for (double th = -1.5; th <= 1.5; th += 0.05) CHECK(beampattern_power(Q, th) <= 1.0 + 1e-12);
    }
}

TEST_CASE("hypothesis covariances")
{
    const Scenario base = small_scenario();
    const CMatrix<double> T = random_unit_modulus(base.n_tx, base.n_rf, 11);
    const auto q1 = quantization_model(std::optional<int>(1));

    SECTION("structure")
    {
        const auto c = hypothesis_covariances(base, T, q1, 0.01);
        CHECK((c.r0 - c.r0.adjoint()).norm() < 1e-12 * c.r0.norm());
        CHECK((c.r1 - c.r1.adjoint()).norm() < 1e-12 * c.r1.norm());
        Eigen::SelfAdjointEigenSolver<CMatrix<double>> e0(c.r0), e1(c.r1), ed(c.r1 - c.r0);
        CHECK(e0.eigenvalues().minCoeff() >= -1e-9 * c.r0.trace().real());
        CHECK(e1.eigenvalues().minCoeff() >= -1e-9 * c.r1.trace().real());
        CHECK(ed.eigenvalues().minCoeff() >= -1e-9 * c.r1.trace().real());
    }
    SECTION("no target power gives identical hypotheses")
    {
        Scenario s = base;
        s.target_power = 0.0;
        const auto c = hypothesis_covariances(s, T, q1, 0.0);
        CHECK((c.r1 - c.r0).norm() == 0.0);
        CHECK(relative_entropy(c) == Approx(0.0).margin(1e-10));
        CHECK(averaged_relative_entropy(s, T, q1) == Approx(0.0).margin(1e-10));
    }
    SECTION("ideal converter has no quantization noise")
    {
        const auto c = hypothesis_covariances(base, T, quantization_model(std::optional<int>()), 0.0);
        CHECK(c.rq0.norm() == 0.0);
        CHECK(c.rq1.norm() == 0.0);
    }
    SECTION("noise only")
    {
        Scenario s = base;
        s.clutter_angles.clear();
        s.clutter_powers.clear();
        s.target_power = 0.0;
        s.noise_power = 2.5;
        const auto q = quantization_model(std::optional<int>(2));
        const auto c = hypothesis_covariances(s, T, q, 0.0);
        const double L = static_cast<double>(s.code_len);
        const double diag = L * (q.alpha * q.alpha + q.alpha * q.beta) * 2.5;
        CHECK((c.r0 - diag * CMatrix<double>::Identity(s.n_rx, s.n_rx)).norm() < 1e-12 * diag);
    }
}

TEST_CASE("relative entropy")
{
    SECTION("hand example")
    {
        HypothesisCovariances<double> c;
        c.r0 = CMatrix<double>::Identity(2, 2);
        c.r1 = 2.0 * CMatrix<double>::Identity(2, 2);
        CHECK(relative_entropy(c) == Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-13));
        c.r1 = c.r0;
        CHECK(relative_entropy(c) == Approx(0.0).margin(1e-14));
    }
    SECTION("matches an LU oracle and is non-negative")
    {
        std::mt19937_64 rng(5);
        for (int r = 0; r < 25; ++r) {
            HypothesisCovariances<double> c;
            c.r0 = random_pd(6, rng);
            c.r1 = random_pd(6, rng);
            const double d = relative_entropy(c);
            CHECK(d >= -1e-9);
            CHECK(d == Approx(kl_lu(c.r0, c.r1)).epsilon(1e-9));
        }
    }
    SECTION("unitary conjugation invariance")
    {
        std::mt19937_64 rng(8);
        std::normal_distribution<double> g;
        for (int r = 0; r < 10; ++r) {
            HypothesisCovariances<double> c;
            c.r0 = random_pd(5, rng);
            c.r1 = random_pd(5, rng);
            CMatrix<double> X(5, 5);
            for (Index j = 0; j < 5; ++j)
                for (Index i = 0; i < 5; ++i) X(i, j) = {g(rng), g(rng)};
            const CMatrix<double> U = Eigen::HouseholderQR<CMatrix<double>>(X).householderQ();
            HypothesisCovariances<double> u;
            u.r0 = U * c.r0 * U.adjoint();
            u.r1 = U * c.r1 * U.adjoint();
            CHECK(relative_entropy(u) == Approx(relative_entropy(c)).epsilon(1e-10));
        }
    }
    SECTION("singular covariance is refused")
    {
        HypothesisCovariances<double> c;
        c.r0 = CMatrix<double>::Identity(3, 3);
        c.r1 = CMatrix<double>::Identity(3, 3);
        c.r1(2, 2) = 0.0;
        CHECK_THROWS_AS(relative_entropy(c), IllConditionedModel);
    }
}

TEST_CASE("averaged relative entropy")
{
    Scenario s = small_scenario();
    const CMatrix<double> T = random_unit_modulus(s.n_tx, s.n_rf, 21);
    const auto q = quantization_model(std::optional<int>(3));

    SECTION("single grid point")
    {
        s.target_uncertainty = 0.0;
        REQUIRE(s.target_grid().size() == 1);
        CHECK(averaged_relative_entropy(s, T, q) ==
              Approx(relative_entropy(hypothesis_covariances(s, T, q, s.target_mean_angle))).epsilon(1e-14));
    }
    SECTION("three-point grid loop oracle")
    {
        s.target_uncertainty = deg2rad(1.0);
        s.target_grid_spacing = deg2rad(0.5);
        const auto grid = s.target_grid();
        REQUIRE(grid.size() == 3);
        double acc = 0.0;
        for (double th : grid) acc += relative_entropy(hypothesis_covariances(s, T, q, th));
        CHECK(averaged_relative_entropy(s, T, q) == Approx(acc / 3.0).epsilon(1e-14));
    }
}

TEST_CASE("scenario files and validation")
{
    const Scenario d = default_scenario();
    CHECK(d.n_tx == 128);
    CHECK(d.n_rf == 8);
    CHECK(d.code_len == 16);
    CHECK(d.n_clutter() == 10);
    CHECK(d.target_grid().size() == 5);
    for (double p : d.clutter_powers) CHECK(p == Approx(1000.0));

    SECTION("JSON round trip and hash")
    {
        const Scenario r = scenario_from_json(scenario_to_json(d));
        CHECK(scenario_to_json(r) == scenario_to_json(d));
        CHECK(scenario_hash(r) == scenario_hash(d));
        CHECK(scenario_hash(desk_scenario()) != scenario_hash(d));
    }
    SECTION("shipped files match the built-in scenarios")
    {
        const Scenario f = load_scenario(std::string(CEBEAM_SOURCE_DIR) + "/scenarios/default.json");
        CHECK(scenario_hash(f) == scenario_hash(d));
        const Scenario g = load_scenario(std::string(CEBEAM_SOURCE_DIR) + "/scenarios/desk.json");
        CHECK(scenario_hash(g) == scenario_hash(desk_scenario()));
        CHECK(g.n_tx == 32);
    }
    SECTION("unknown keys and bad values are reported")
    {
        try {
            scenario_from_json(R"({"n_tx": 8, "antennas": 3, "colour": 1})");
            FAIL("expected a validation error");
        } catch (const ValidationError& e) {
            const std::string m = e.what();
            CHECK(m.find("antennas") != std::string::npos);
            CHECK(m.find("colour") != std::string::npos);
        }
        Scenario bad = d;
        bad.n_rf = 20;
        bad.noise_power = 0.0;
        try {
            bad.validate();
            FAIL("expected a validation error");
        } catch (const ValidationError& e) {
            const std::string m = e.what();
            CHECK(m.find("code_len") != std::string::npos);
            CHECK(m.find("noise_power") != std::string::npos);
        }
        CHECK_THROWS_AS(scenario_from_json("[1, 2"), ValidationError);
        CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ValidationError);
    }
    SECTION("clutter tables")
    {
        CHECK(table_clutter_angles_deg(0).empty());
        for (int k : {5, 10, 15, 20}) {
            const auto a = table_clutter_angles_deg(k);
            CHECK(static_cast<int>(a.size()) == k);
            CHECK(std::set<double>(a.begin(), a.end()).size() == a.size());
        }
        CHECK_THROWS(table_clutter_angles_deg(7));
    }
}
