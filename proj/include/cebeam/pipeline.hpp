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
#include <string>
#include <vector>

#include <cebeam/ce_design.hpp>
#include <cebeam/onebit_design.hpp>
#include <cebeam/power_alloc.hpp>
#include <cebeam/scenario.hpp>

namespace cebeam {

/// Commands understood by run_pipeline, in help order.
const std::vector<std::string>& pipeline_commands();

/// One experiment: a command plus its scenario, overrides and output directory.
/// Unset optionals fall back to the designer defaults.
struct ExperimentConfig {
    std::string command;
    std::string scenario_path;            // empty: built-in 128-antenna scenario
    std::optional<int> bits = 1;          // empty: ideal converters
    std::uint64_t seed = 1;
    std::optional<int> max_iters;
    std::optional<double> tol;
    std::string method = "amm";           // design-ce: amm | mm | projection
    std::string output_dir = "out";
    std::string phases_path;              // evaluate: existing phase matrix (degrees CSV)
    std::vector<double> values;           // sweep grid override
    std::optional<long> trials;           // sweep-snr: 1e5, fig2: 1000
    double pfa = 1e-3;
    int threads = 0;                      // 0: CEBEAM_THREADS or hardware
    bool quiet = false;

    /// Throws ValidationError listing every offending field.
    void validate() const;
};

struct PipelineOutcome {
    int exit_status = 0;               // 0 iff every stage converged
    std::vector<std::string> files;    // artifacts written, in order
    std::vector<DesignReport> reports; // one per design stage
};

PipelineOutcome run_pipeline(const ExperimentConfig& cfg);

/// Power allocation, then AMM/MM/projection with the experiment overrides.
/// Shared by the CLI commands and by callers that want the design without files.
struct CeDesign {
    BcdResult allocation;
    CeDesignResult design;
};
CeDesign design_constant_envelope(const Scenario& s, const QuantizationModel& q, const ExperimentConfig& cfg);

/// Phase matrix I/O: N_t rows, N_RF comma-separated columns, degrees.
void write_phases_csv(const std::string& path, const PhaseBeamformer& T, const std::string& header);
PhaseBeamformer read_phases_csv(const std::string& path);

} // namespace cebeam
