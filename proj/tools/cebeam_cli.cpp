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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <cebeam/errors.hpp>
#include <cebeam/pipeline.hpp>

int main(int argc, char** argv)
{
    using namespace cebeam;

    CLI::App app{"Constant-envelope and one-bit transmit beamformer design for hybrid MIMO radar"};
    app.require_subcommand(1, 1);

    ExperimentConfig cfg;
    std::string bits = "1";
    long trials = 0;

    for (const auto& name : pipeline_commands()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--scenario", cfg.scenario_path, "Scenario JSON (default: built-in 128-antenna scenario)");
        sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
        sub->add_option("--bits", bits, "ADC bits 1..5 or 'ideal'")->capture_default_str();
        sub->add_option("--out", cfg.output_dir, "Output directory")->capture_default_str();
        sub->add_option_function<int>("--max-iters", [&](int n) { cfg.max_iters = n; }, "Designer iteration cap");
        sub->add_option_function<double>("--tol", [&](double t) { cfg.tol = t; }, "Designer stopping tolerance");
        sub->add_option("--threads", cfg.threads, "Monte Carlo workers (0: CEBEAM_THREADS or all cores)");
        sub->add_flag("--quiet", cfg.quiet, "No progress lines on stderr");
        if (name == "design-ce" || name == "evaluate" || name.rfind("sweep-", 0) == 0)
            sub->add_option("--method", cfg.method, "amm | mm | projection")->capture_default_str();
        if (name == "evaluate") sub->add_option("--phases", cfg.phases_path, "Evaluate this phase matrix (degrees CSV)");
        if (name.rfind("sweep-", 0) == 0 || name == "fig2")
            sub->add_option("--values", cfg.values, "Sweep grid (sweep-bits: 0 means ideal)")->delimiter(',');
        if (name == "sweep-snr" || name == "fig2") sub->add_option("--trials", trials, "Monte Carlo trials");
        if (name == "sweep-snr") sub->add_option("--pfa", cfg.pfa, "False-alarm probability")->capture_default_str();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        if (bits == "ideal" || bits == "inf") {
            cfg.bits.reset();
        } else {
            try {
                cfg.bits = std::stoi(bits);
            } catch (const std::exception&) {
                throw ValidationError("invalid experiment: bits '" + bits + "'");
            }
        }
        if (trials > 0) cfg.trials = trials;

        const PipelineOutcome out = run_pipeline(cfg);
        for (const auto& f : out.files) std::cout << f << "\n";
        return out.exit_status;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
