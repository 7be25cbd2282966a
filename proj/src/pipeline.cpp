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

#include <cebeam/pipeline.hpp>

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include <cebeam/baseline.hpp>
#include <cebeam/covariance.hpp>
#include <cebeam/errors.hpp>
#include <cebeam/eval_sim.hpp>

namespace cebeam {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

const std::vector<std::string>& pipeline_commands()
{
    static const std::vector<std::string> cmds = {"allocate-power", "design-ce",  "design-onebit",
                                                  "evaluate",       "sweep-bits", "sweep-rf",
                                                  "sweep-antennas", "sweep-snr",  "fig2"};
    return cmds;
}

void ExperimentConfig::validate() const
{
    std::vector<std::string> bad;
    const auto& cmds = pipeline_commands();
    if (std::find(cmds.begin(), cmds.end(), command) == cmds.end()) bad.push_back("command '" + command + "'");
    if (!scenario_path.empty() && !fs::is_regular_file(scenario_path))
        bad.push_back("scenario (no such file: " + scenario_path + ")");
    if (bits && (*bits < 1 || *bits > 5)) bad.push_back("bits (expected 1..5 or ideal)");
    if (max_iters && *max_iters < 0) bad.push_back("max_iters");
    if (tol && !(*tol >= 0.0)) bad.push_back("tol");
    if (method != "amm" && method != "mm" && method != "projection") bad.push_back("method '" + method + "'");
    if (output_dir.empty()) bad.push_back("out");
    if (!phases_path.empty() && command != "evaluate") bad.push_back("phases (only used by evaluate)");
    if (!phases_path.empty() && !fs::is_regular_file(phases_path))
        bad.push_back("phases (no such file: " + phases_path + ")");
    if (trials && *trials < 1) bad.push_back("trials");
    if (!(pfa > 0.0 && pfa < 1.0)) bad.push_back("pfa");
    if (threads < 0) bad.push_back("threads");
    for (double v : values)
        if (!std::isfinite(v)) bad.push_back("values (non-finite entry)");
    if (bad.empty()) return;
    std::string msg = "invalid experiment:";
    for (const auto& b : bad) msg += " " + b + ";";
    msg.pop_back();
    throw ValidationError(msg);
}

namespace {

std::string num(double x, int digits = 10)
{
    if (!std::isfinite(x)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string bits_label(std::optional<int> b) { return b ? std::to_string(*b) : std::string("ideal"); }

std::string hex64(std::uint64_t h)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

// JSON number or null for NaN fields a method does not produce.
ordered_json jnum(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

class Run {
public:
    Run(const ExperimentConfig& cfg, Scenario s) : cfg_(cfg), scenario_(std::move(s))
    {
        hash_ = hex64(scenario_hash(scenario_));
        fs::create_directories(cfg_.output_dir);
    }

    const ExperimentConfig& cfg() const { return cfg_; }
    const Scenario& scenario() const { return scenario_; }
    PipelineOutcome& outcome() { return out_; }

    ordered_json params() const
    {
        ordered_json p;
        p["command"] = cfg_.command;
        p["bits"] = bits_label(cfg_.bits);
        p["method"] = cfg_.method;
        p["max_iters"] = cfg_.max_iters ? ordered_json(*cfg_.max_iters) : ordered_json(nullptr);
        p["tol"] = cfg_.tol ? ordered_json(*cfg_.tol) : ordered_json(nullptr);
        p["trials"] = cfg_.trials ? ordered_json(*cfg_.trials) : ordered_json(nullptr);
        p["pfa"] = cfg_.pfa;
        p["values"] = cfg_.values;
        return p;
    }

    ordered_json provenance() const
    {
        ordered_json p;
        p["version"] = CEBEAM_VERSION;
        p["scenario_hash"] = hash_;
        p["seed"] = cfg_.seed;
        p["params"] = params();
        return p;
    }

    std::string csv_header() const
    {
        return "# cebeam " + std::string(CEBEAM_VERSION) + "\n# scenario_hash " + hash_ + "\n# seed " +
               std::to_string(cfg_.seed) + "\n# params " + params().dump() + "\n";
    }

    void write(const std::string& name, const std::string& body)
    {
        const fs::path p = fs::path(cfg_.output_dir) / name;
        std::ofstream f(p, std::ios::binary);
        if (!f) throw ValidationError("cannot write " + p.string());
        f << body;
        out_.files.push_back(p.string());
    }

    void write_json(const std::string& name, ordered_json body)
    {
        ordered_json j;
        j["provenance"] = provenance();
        for (auto& [k, v] : body.items()) j[k] = std::move(v);
        write(name, j.dump(2) + "\n");
    }

    void write_csv(const std::string& name, const std::string& columns, const std::vector<std::string>& rows)
    {
        std::string body = csv_header() + columns + "\n";
        for (const auto& r : rows) body += r + "\n";
        write(name, body);
    }

    void write_trace(const std::string& name, const DesignReport& rep)
    {
        std::vector<std::string> rows;
        rows.reserve(rep.trace.size());
        for (const auto& t : rep.trace)
            rows.push_back(std::to_string(t.iteration) + "," + num(t.objective) + "," + num(t.mse) + "," +
                           num(t.orth_residual) + "," + num(t.penalty) + "," + num(t.grad_norm) + "," +
                           num(t.binary_gap) + "," + num(t.relative_entropy) + "," + std::to_string(t.map_evals));
        write_csv(name, "iteration,objective,mse,orth_residual,penalty,grad_norm,binary_gap,relative_entropy,map_evals",
                  rows);
    }

    // Wall times are kept out of the other artifacts so those stay reproducible.
    void write_report(const std::string& name, const DesignReport& rep, const std::string& trace_name)
    {
        ordered_json j;
        j["method"] = rep.method;
        j["iterations"] = rep.iterations;
        j["map_evals"] = rep.map_evals;
        j["final_mse"] = jnum(rep.final_mse);
        j["orth_residual"] = jnum(rep.orth_residual);
        j["relative_entropy"] = jnum(rep.relative_entropy);
        j["relative_entropy_center"] = jnum(rep.relative_entropy_center);
        j["converged"] = rep.converged;
        j["note"] = rep.note;
        j["trace"] = trace_name;
        write_json(name, std::move(j));
        timings_[rep.method + ":" + name] = rep.wall_seconds;
    }

    void record(const DesignReport& rep)
    {
        out_.reports.push_back(rep);
        if (!rep.converged) out_.exit_status = 2;
        if (!cfg_.quiet)
        {
            std::cerr << rep.method << ": " << rep.iterations << " iterations";
            if (std::isfinite(rep.final_mse)) std::cerr << ", mse " << num(rep.final_mse);
            if (std::isfinite(rep.relative_entropy)) std::cerr << ", relative entropy " << num(rep.relative_entropy);
            std::cerr << (rep.converged ? "" : " (not converged)") << "\n";
        }
    }

    void finish()
    {
        if (timings_.empty()) return;
        ordered_json t;
        for (const auto& [k, v] : timings_.items()) t[k] = v;
        write("timings.json", t.dump(2) + "\n");
    }

private:
    ExperimentConfig cfg_;
    Scenario scenario_;
    std::string hash_;
    PipelineOutcome out_;
    ordered_json timings_ = ordered_json::object();
};

QuantizationModel model_of(std::optional<int> bits) { return quantization_model(bits); }

DesignReport allocation_report(const BcdResult& b)
{
    DesignReport r;
    r.method = "BCD";
    r.iterations = b.sweeps;
    r.converged = b.converged;
    for (std::size_t i = 1; i < b.sweep_trace.size(); ++i) {
        TraceRow row;
        row.iteration = static_cast<int>(i);
        row.objective = b.sweep_trace[i];
        r.trace.push_back(row);
    }
    if (!b.sweep_trace.empty()) r.note = "asymptotic objective " + num(b.sweep_trace.back());
    return r;
}

ordered_json profile_json(const PowerProfile& p)
{
    return ordered_json::parse(profile_to_json(p));
}

void fill_entropy(DesignReport& rep, const Scenario& s, const CMatrix<double>& T, const QuantizationModel& q)
{
    rep.relative_entropy = averaged_relative_entropy(s, T, q);
    rep.relative_entropy_center = relative_entropy(hypothesis_covariances(s, T, q, s.target_mean_angle));
}

void emit_design(Run& run, const CeDesign& d, const QuantizationModel& q)
{
    const auto& s = run.scenario();
    DesignReport rep = d.design.report;
    fill_entropy(rep, s, d.design.beamformer.matrix(), q);
    const DesignReport alloc = allocation_report(d.allocation);
    run.record(alloc);
    run.record(rep);

    ordered_json pj;
    pj["profile"] = profile_json(d.allocation.profile);
    run.write_json("profile.json", std::move(pj));
    run.write_trace("bcd_trace.csv", alloc);
    run.write_report("bcd_report.json", alloc, "bcd_trace.csv");
    write_phases_csv((fs::path(run.cfg().output_dir) / "phases.csv").string(), d.design.beamformer, run.csv_header());
    run.outcome().files.push_back((fs::path(run.cfg().output_dir) / "phases.csv").string());
    run.write_trace("trace.csv", rep);
    run.write_report("report.json", rep, "trace.csv");
}

// Stage-2 result of one sweep point, reduced to a CSV row suffix.
std::string sweep_cells(const DesignReport& rep)
{
    return num(rep.relative_entropy) + "," + num(rep.relative_entropy_center) + "," + num(rep.final_mse) + "," +
           num(rep.orth_residual) + "," + std::to_string(rep.iterations) + "," + (rep.converged ? "1" : "0");
}

const char* kSweepCols = "relative_entropy,relative_entropy_center,final_mse,orth_residual,iterations,converged";

DesignReport sweep_point(Run& run, const Scenario& s, std::optional<int> bits)
{
    const auto q = model_of(bits);
    ExperimentConfig quiet = run.cfg();
    quiet.quiet = true;
    const CeDesign d = design_constant_envelope(s, q, quiet);
    DesignReport rep = d.design.report;
    fill_entropy(rep, s, d.design.beamformer.matrix(), q);
    if (!d.allocation.converged) rep.converged = false;
    run.record(rep);
    return rep;
}

std::vector<double> or_default(const std::vector<double>& v, std::vector<double> fallback)
{
    return v.empty() ? fallback : v;
}

void cmd_allocate(Run& run)
{
    const auto b = bcd_power_allocation(run.scenario(), model_of(run.cfg().bits));
    const DesignReport rep = allocation_report(b);
    run.record(rep);
    ordered_json pj;
    pj["profile"] = profile_json(b.profile);
    run.write_json("profile.json", std::move(pj));
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < b.update_trace.size(); ++i)
        rows.push_back(std::to_string(i + 1) + "," + num(b.update_trace[i]));
    run.write_csv("bcd_updates.csv", "update,objective", rows);
    run.write_trace("bcd_trace.csv", rep);
    run.write_report("report.json", rep, "bcd_trace.csv");
}

void cmd_design_ce(Run& run)
{
    const auto q = model_of(run.cfg().bits);
    emit_design(run, design_constant_envelope(run.scenario(), q, run.cfg()), q);
}

void cmd_design_onebit(Run& run)
{
    const auto& s = run.scenario();
    const auto q = model_of(run.cfg().bits);
    ExperimentConfig amm = run.cfg();
    amm.method = "amm";
    const CeDesign d = design_constant_envelope(s, q, amm);
    DesignReport ce = d.design.report;
    fill_entropy(ce, s, d.design.beamformer.matrix(), q);
    run.record(allocation_report(d.allocation));
    run.record(ce);

    OneBitParams p;
    p.seed = run.cfg().seed;
    if (run.cfg().max_iters) p.max_iters = *run.cfg().max_iters;
    if (run.cfg().tol) p.tol = *run.cfg().tol;
    const PatternTarget target(d.allocation.profile, s.n_tx);
    const OneBitResult ob = nesterov_epm(onebit_start_from(d.design.beamformer.matrix()), target, s.n_rf, p);
    DesignReport rep = ob.report;
    fill_entropy(rep, s, ob.beamformer.matrix(), q);
    run.record(rep);

    std::string grid = run.csv_header();
    const auto& sg = ob.beamformer.signs();
    for (Index i = 0; i < sg.rows(); ++i) {
        for (Index j = 0; j < sg.cols(); ++j) grid += (j ? " " : "") + std::string(sg(i, j) > 0 ? "+1" : "-1");
        grid += "\n";
    }
    run.write("signs.txt", grid);
    ordered_json pj;
    pj["profile"] = profile_json(d.allocation.profile);
    run.write_json("profile.json", std::move(pj));
    run.write_trace("ce_trace.csv", ce);
    run.write_report("ce_report.json", ce, "ce_trace.csv");
    run.write_trace("trace.csv", rep);
    run.write_report("report.json", rep, "trace.csv");
}

void cmd_evaluate(Run& run)
{
    const auto& s = run.scenario();
    const auto q = model_of(run.cfg().bits);
    CMatrix<double> T;
    if (!run.cfg().phases_path.empty()) {
        const PhaseBeamformer pb = read_phases_csv(run.cfg().phases_path);
        if (pb.n_tx() != s.n_tx || pb.n_rf() != s.n_rf)
            throw ValidationError("phase matrix is " + std::to_string(pb.n_tx()) + "x" + std::to_string(pb.n_rf()) +
                                  ", scenario expects " + std::to_string(s.n_tx) + "x" + std::to_string(s.n_rf));
        T = pb.matrix();
    } else {
        const CeDesign d = design_constant_envelope(s, q, run.cfg());
        emit_design(run, d, q);
        T = d.design.beamformer.matrix();
    }

    std::vector<std::string> rows;
    for (int i = -360; i <= 360; ++i) {
        const double deg = 0.25 * i;
        const double p = beampattern_power(T, deg2rad(deg));
        rows.push_back(num(deg) + "," + num(p) + "," + num(10.0 * std::log10(std::max(p, 1e-30))));
    }
    run.write_csv("beampattern.csv", "angle_deg,power,power_db", rows);

    rows.clear();
    double sum = 0.0;
    const auto grid = s.target_grid();
    for (double th : grid) {
        const double re = relative_entropy(hypothesis_covariances(s, T, q, th));
        sum += re;
        rows.push_back(num(rad2deg(th)) + "," + num(re));
    }
    run.write_csv("entropy_grid.csv", "theta_deg,relative_entropy", rows);

    ordered_json j;
    j["bits"] = q.label();
    j["relative_entropy"] = jnum(sum / static_cast<double>(grid.size()));
    j["relative_entropy_center"] = jnum(relative_entropy(hypothesis_covariances(s, T, q, s.target_mean_angle)));
    j["orth_residual"] = jnum(orthogonality_residual(T));
    run.write_json("evaluation.json", std::move(j));
}

void cmd_sweep_bits(Run& run)
{
    std::vector<std::string> rows;
    for (double v : or_default(run.cfg().values, {1, 2, 3, 4, 5, 0})) {
        const int b = static_cast<int>(std::lround(v));
        const std::optional<int> bits = b == 0 ? std::nullopt : std::optional<int>(b);
        if (bits) quantization_model(bits); // range check before the design
        rows.push_back(bits_label(bits) + "," + sweep_cells(sweep_point(run, run.scenario(), bits)));
    }
    run.write_csv("sweep_bits.csv", std::string("bits,") + kSweepCols, rows);
}

void cmd_sweep_rf(Run& run)
{
    std::vector<std::string> rows;
    for (double v : or_default(run.cfg().values, {2, 4, 8, 16})) {
        Scenario s = run.scenario();
        s.n_rf = static_cast<Index>(std::lround(v));
        s.validate();
        rows.push_back(std::to_string(s.n_rf) + "," + bits_label(run.cfg().bits) + "," +
                       sweep_cells(sweep_point(run, s, run.cfg().bits)));
    }
    run.write_csv("sweep_rf.csv", std::string("n_rf,bits,") + kSweepCols, rows);
}

void cmd_sweep_antennas(Run& run)
{
    std::vector<std::string> rows;
    for (double v : or_default(run.cfg().values, {16, 32, 64, 128})) {
        Scenario s = run.scenario();
        s.n_tx = s.n_rx = static_cast<Index>(std::lround(v));
        s.validate();
        rows.push_back(std::to_string(s.n_tx) + "," + bits_label(run.cfg().bits) + "," +
                       sweep_cells(sweep_point(run, s, run.cfg().bits)));
    }
    run.write_csv("sweep_antennas.csv", std::string("n_antennas,bits,") + kSweepCols, rows);
}

void cmd_sweep_snr(Run& run)
{
    const auto& s = run.scenario();
    const auto q = model_of(run.cfg().bits);
    const CeDesign d = design_constant_envelope(s, q, run.cfg());
    emit_design(run, d, q);
    const auto snr = or_default(run.cfg().values, {-20, -15, -10, -5, 0});
    const DetectionCurve c = detection_curve(d.design.beamformer.matrix(), s, run.cfg().bits, snr, run.cfg().pfa,
                                             run.cfg().trials.value_or(100000), run.cfg().seed, run.cfg().threads);
    std::vector<std::string> rows;
    for (const auto& p : c.points)
        rows.push_back(num(p.snr_db) + "," + num(p.pd) + "," + num(p.pd_halfwidth) + "," + num(p.pfa_target) + "," +
                       num(p.pfa_measured) + "," + num(p.pfa_halfwidth) + "," + num(p.threshold) + "," +
                       std::to_string(p.trials) + "," + std::to_string(p.seed));
    run.write_csv("detection.csv",
                  "snr_db,pd,pd_halfwidth,pfa_target,pfa_measured,pfa_halfwidth,threshold,trials,seed", rows);
}

void cmd_fig2(Run& run)
{
    std::vector<Index> sizes;
    for (double v : or_default(run.cfg().values, {32, 64, 128, 256})) sizes.push_back(static_cast<Index>(std::lround(v)));
    std::vector<std::string> rows;
    for (int k : {5, 10, 20}) {
        const auto pts = steering_crosscorr_experiment(sizes, k, run.cfg().trials.value_or(1000), run.cfg().seed);
        for (const auto& p : pts)
            rows.push_back(std::to_string(k) + "," + std::to_string(p.n_rx) + "," + num(p.mean_error));
    }
    run.write_csv("fig2.csv", "K,n_rx,mean_error", rows);
}

} // namespace

CeDesign design_constant_envelope(const Scenario& s, const QuantizationModel& q, const ExperimentConfig& cfg)
{
    CeDesign out;
    out.allocation = bcd_power_allocation(s, q);
    const PatternTarget target(out.allocation.profile, s.n_tx);
    const CMatrix<double> T0 = PhaseBeamformer::random(s.n_tx, s.n_rf, cfg.seed).matrix();

    if (cfg.method == "projection") {
        ProjectionParams p;
        p.seed = cfg.seed;
        if (cfg.max_iters) p.max_iters = *cfg.max_iters;
        if (cfg.tol) p.tol = *cfg.tol;
        ProjectionResult r = projection_baseline(target, s.n_tx, s.n_rf, p);
        out.design.beamformer = std::move(r.beamformer);
        out.design.report = std::move(r.report);
        return out;
    }

    CeDesignParams p;
    p.seed = cfg.seed;
    if (cfg.max_iters) p.max_iters = *cfg.max_iters;
    if (cfg.tol) p.tol = *cfg.tol;
    p.monitor_every = 100;
    const EntropyMonitor monitor = [&](const CMatrix<double>& T) { return averaged_relative_entropy(s, T, q); };
    out.design = cfg.method == "mm" ? plain_mm(T0, target, p, monitor) : squarem_accelerated_mm(T0, target, p, monitor);
    return out;
}

void write_phases_csv(const std::string& path, const PhaseBeamformer& T, const std::string& header)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + path);
    f << header;
    for (Index i = 0; i < T.n_tx(); ++i) {
        for (Index j = 0; j < T.n_rf(); ++j) f << (j ? "," : "") << num(rad2deg(T.phases()(i, j)), 17);
        f << "\n";
    }
}

PhaseBeamformer read_phases_csv(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot read " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> r;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                r.push_back(deg2rad(std::stod(cell)));
            } catch (const std::exception&) {
                throw ValidationError(path + ": non-numeric cell '" + cell + "'");
            }
        }
        if (!rows.empty() && r.size() != rows.front().size()) throw ValidationError(path + ": ragged rows");
        rows.push_back(std::move(r));
    }
    if (rows.empty() || rows.front().empty()) throw ValidationError(path + ": empty phase matrix");
    RMatrix<double> ph(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < ph.rows(); ++i)
        for (Index j = 0; j < ph.cols(); ++j) ph(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return PhaseBeamformer(std::move(ph));
}

PipelineOutcome run_pipeline(const ExperimentConfig& cfg)
{
    cfg.validate();
    Scenario s = cfg.scenario_path.empty() ? default_scenario() : load_scenario(cfg.scenario_path);
    s.validate();
    Run run(cfg, std::move(s));

    const std::string& c = cfg.command;
    if (c == "allocate-power") cmd_allocate(run);
    else if (c == "design-ce") cmd_design_ce(run);
    else if (c == "design-onebit") cmd_design_onebit(run);
    else if (c == "evaluate") cmd_evaluate(run);
    else if (c == "sweep-bits") cmd_sweep_bits(run);
    else if (c == "sweep-rf") cmd_sweep_rf(run);
    else if (c == "sweep-antennas") cmd_sweep_antennas(run);
    else if (c == "sweep-snr") cmd_sweep_snr(run);
    else if (c == "fig2") cmd_fig2(run);
    run.finish();
    return run.outcome();
}

} // namespace cebeam
