// Copyright 2026 The QRP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qrp/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qrp/csv.hpp"
#include "qrp/diagnostics.hpp"
#include "qrp/errors.hpp"

namespace qrp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string file_stem(const std::string &label) {
    std::string s = label;
    std::replace(s.begin(), s.end(), '*', '-');
    return s;
}

std::string stm_file(const PerformanceCurve &c) {
    return "stm_" + file_stem(c.operator_label) + "_d" + std::to_string(c.delay) + ".csv";
}

const std::vector<double> &find_curve(const std::vector<NamedCurve> &curves, std::string_view name) {
    for (const auto &c : curves)
        if (c.name == name) return c.values;
    throw ValidationError("no curve named " + std::string(name));
}

nlohmann::json plan_json(const RunPlan &p) {
    nlohmann::json j;
    j["label"] = p.label;
    j["model"] = {{"n", p.model.n}, {"j", p.model.j}, {"h_x", p.model.h_x}, {"h_z", p.model.h_z}};
    j["drive"] = {{"t_in", p.drive.t_in},
                  {"n_grid", p.drive.n_grid},
                  {"washout", p.drive.washout},
                  {"train", p.drive.train},
                  {"test", p.drive.test},
                  {"seed", p.drive.seed},
                  {"tmi_cap", p.drive.snapshots.instance_cap},
                  {"snapshot_support", p.drive.snapshots.support.indices()},
                  {"keep_mean_state", p.drive.snapshots.keep_mean_state}};
    auto &ro = j["readouts"] = nlohmann::json::array();
    for (const auto &op : p.readouts) ro.push_back(op.label());
    j["stm_delays"] = p.tasks.stm_delays;
    j["correlation"] = p.tasks.correlation;
    j["deviation"] = p.tasks.deviation;
    auto &otoc = j["otoc"] = nlohmann::json::array();
    for (const auto &o : p.tasks.otoc) otoc.push_back({{"w", o.w.label()}, {"v", o.v.label()}});
    auto &tmi = j["tmi"] = nlohmann::json::array();
    for (const auto &s : p.tasks.tmi) tmi.push_back(s.label());
    return j;
}

} // namespace

const PerformanceCurve &RunOutcome::stm_for(std::string_view label, int delay) const {
    for (const auto &c : stm)
        if (c.operator_label == label && c.delay == delay) return c;
    throw ValidationError("no STM curve for " + std::string(label) + " at d = " + std::to_string(delay));
}

const std::vector<double> &RunOutcome::otoc_for(std::string_view name) const { return find_curve(otoc, name); }
const std::vector<double> &RunOutcome::tmi_for(std::string_view name) const { return find_curve(tmi, name); }

RunOutcome execute(const RunPlan &plan, std::ostream *log) {
    const auto t0 = Clock::now();
    RunOutcome out;
    out.plan = plan;
    const auto &drive = plan.drive;
    const auto &tasks = plan.tasks;

    const auto model = SpectralModel::from_params(plan.model);
    const auto gs = ground_state(model);
    out.ground_energy = gs.energy;
    out.degenerate_ground_state = gs.degenerate;
    if (gs.degenerate) out.warnings.add("run " + plan.label + ": degenerate ground state, lowest eigenvector used");

    out.inputs = generate_inputs(drive.seed, static_cast<std::size_t>(drive.total_steps()));
    out.grid = drive.grid();
    if (log)
        *log << "[qrp] " << plan.label << ": N=" << plan.model.n << " h_x=" << plan.model.h_x
             << " h_z=" << plan.model.h_z << ", " << drive.total_steps() << " steps x " << drive.n_grid
             << " grid points" << std::endl;

    auto result = run_drive(drive, model, plan.readouts, out.inputs);
    if (log) *log << "[qrp] " << plan.label << ": drive done in " << seconds_since(t0) << " s" << std::endl;

    for (const auto &op : plan.readouts)
        for (int d : tasks.stm_delays) out.stm.push_back(stm_curve(result.record, op, d, out.inputs));

    const int n = plan.model.n;
    const auto grid_size = out.grid.size();
    if (tasks.correlation || tasks.deviation) {
        out.correlations.assign(static_cast<std::size_t>(n), std::vector<cplx>(grid_size));
        for (int i = 1; i <= n; ++i)
            for (std::size_t m = 0; m < grid_size; ++m)
                out.correlations[static_cast<std::size_t>(i - 1)][m] =
                    dynamical_correlation(result.ensemble, i, model, out.grid[m]);
    }
    if (tasks.deviation) {
        std::vector<DeviationSample> samples;
        for (int i = 1; i <= n; ++i) {
            const auto &curve = out.stm_for(PauliString().set(i, Axis::Z).label(), 0);
            for (std::size_t m = 0; m < grid_size; ++m)
                samples.push_back({std::abs(out.correlations[static_cast<std::size_t>(i - 1)][m]),
                                   curve.points[m].r2, i, out.grid[m]});
        }
        out.deviation = data_deviation(samples, tasks.deviation_windows);
    }
    for (const auto &spec : tasks.otoc) {
        NamedCurve c{spec.name(), std::vector<double>(grid_size)};
        for (std::size_t m = 0; m < grid_size; ++m) {
            double residue = 0.0;
            c.values[m] = otoc(result.ensemble, spec, model, out.grid[m], &residue);
            out.otoc_max_imag_residue = std::max(out.otoc_max_imag_residue, std::abs(residue));
        }
        out.otoc.push_back(std::move(c));
    }
    if (out.otoc_max_imag_residue > 1e-8) {
        std::ostringstream os;
        os << "run " << plan.label << ": OTOC imaginary residue up to " << out.otoc_max_imag_residue;
        out.warnings.add(os.str());
    }
    for (const auto &spec : tasks.tmi) out.tmi.push_back({spec.name(), tmi_curve(result.ensemble, spec)});

    if (plan.emit_record) out.record = std::move(result.record);
    out.seconds = seconds_since(t0);
    if (log) *log << "[qrp] " << plan.label << ": finished in " << out.seconds << " s" << std::endl;
    return out;
}

std::vector<OutputFile> write_outputs(const RunOutcome &run, const std::filesystem::path &root) {
    const auto dir = root / run.plan.label;
    std::filesystem::create_directories(dir);
    std::vector<OutputFile> files;
    auto emit = [&](const std::string &name, const CsvWriter &csv) {
        csv.write(dir / name);
        files.push_back({run.plan.label + "/" + name, csv.rows(), csv.digest()});
    };
    const auto &grid = run.grid;

    for (const auto &curve : run.stm) {
        CsvWriter csv({"operator", "d", "tau", "r2", "w_o", "w_c"});
        for (const auto &p : curve.points)
            csv.add_row({curve.operator_label, static_cast<long long>(curve.delay), p.tau, p.r2, p.weights.w_o,
                         p.weights.w_c});
        emit(stm_file(curve), csv);
    }
    for (std::size_t i = 0; i < run.correlations.size(); ++i) {
        CsvWriter csv({"tau", "real", "imag", "modulus"});
        for (std::size_t m = 0; m < grid.size(); ++m) {
            const cplx c = run.correlations[i][m];
            csv.add_row({grid[m], c.real(), c.imag(), std::abs(c)});
        }
        emit("corr_z1_z" + std::to_string(i + 1) + ".csv", csv);
    }
    if (run.deviation) {
        CsvWriter csv({"m", "count", "mean_r2", "sum_sq_dev"});
        for (std::size_t m = 0; m < run.deviation->bins.size(); ++m) {
            const auto &b = run.deviation->bins[m];
            csv.add_row({static_cast<long long>(m), static_cast<long long>(b.count), b.mean_r2, b.sum_sq_dev});
        }
        emit("deviation_bins.csv", csv);
    }
    for (const auto &group : {&run.otoc, &run.tmi})
        for (const auto &curve : *group) {
            CsvWriter csv({"tau", "value"});
            for (std::size_t m = 0; m < grid.size(); ++m) csv.add_row({grid[m], curve.values[m]});
            emit(curve.name + ".csv", csv);
        }
    if (run.plan.emit_record && !run.record.operators.empty()) {
        std::vector<std::string> header = {"k", "phase", "tau"};
        for (const auto &op : run.record.operators) header.push_back(op.label());
        CsvWriter csv(header);
        std::vector<CsvWriter::Cell> row(header.size());
        for (int r = 0; r < run.record.rows(); ++r)
            for (std::size_t m = 0; m < grid.size(); ++m) {
                row[0] = static_cast<long long>(run.record.step(r));
                row[1] = std::string(phase_name(run.record.phase(r)));
                row[2] = grid[m];
                for (std::size_t o = 0; o < run.record.operators.size(); ++o)
                    row[3 + o] = run.record.values[o](r, static_cast<Eigen::Index>(m));
                csv.add_row(row);
            }
        emit("record.csv", csv);
    }
    return files;
}

ExperimentResult run_experiment(const ExperimentConfig &config, std::ostream *log) {
    const auto t0 = Clock::now();
    const auto plans = resolve(config);
    ExperimentResult res;
    res.out_dir = config.output_dir();
    std::filesystem::create_directories(res.out_dir);

    nlohmann::json manifest;
    manifest["format"] = "qrp-manifest/1";
    manifest["software"] = {{"name", "qrp"}, {"version", kVersion}, {"compiler", __VERSION__}};
    manifest["config"] = config_to_json(config);
    manifest["seed"] = config.drive.seed;
    auto &runs = manifest["runs"] = nlohmann::json::array();
    auto &warnings = manifest["warnings"] = nlohmann::json::array();

    for (const auto &plan : plans) {
        auto outcome = execute(plan, log);
        const auto files = write_outputs(outcome, res.out_dir);

        nlohmann::json r = plan_json(plan);
        r["inputs"] = {{"generator", "mt19937_64, (draw >> 11) * 2^-53"},
                       {"seed", outcome.inputs.seed},
                       {"count", outcome.inputs.values.size()},
                       {"digest", hex_digest(outcome.inputs.digest())},
                       {"values", outcome.inputs.values}};
        r["ground_state"] = {{"energy", outcome.ground_energy}, {"degenerate", outcome.degenerate_ground_state}};
        if (outcome.deviation)
            r["deviation"] = {{"delta", outcome.deviation->delta}, {"windows", outcome.deviation->windows}};
        if (!plan.tasks.otoc.empty()) r["otoc_max_imag_residue"] = outcome.otoc_max_imag_residue;
        r["seconds"] = outcome.seconds;
        auto &fj = r["files"] = nlohmann::json::array();
        for (const auto &f : files) fj.push_back({{"path", f.path}, {"rows", f.rows}, {"digest", hex_digest(f.digest)}});
        for (const auto &w : outcome.warnings.messages()) warnings.push_back(w);
        runs.push_back(std::move(r));
        res.runs.push_back(std::move(outcome));
    }
    manifest["wall_clock_seconds"] = seconds_since(t0);

    std::ofstream out(res.out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
    out << manifest.dump(2) << '\n';
    if (!out) throw Error("io", "cannot write " + (res.out_dir / "manifest.json").string());
    res.manifest = std::move(manifest);
    return res;
}

ExperimentResult run_preset(std::string_view name, const Overrides &overrides, std::ostream *log) {
    auto config = preset_config(name);
    apply_overrides(config, overrides);
    return run_experiment(config, log);
}

ReplayReport replay(const std::filesystem::path &manifest_path, const std::filesystem::path &out_dir,
                    std::ostream *log) {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw ConfigError(manifest_path.string() + ": cannot open manifest");
    nlohmann::json recorded;
    try {
        recorded = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(manifest_path.string() + ": " + e.what());
    }
    if (!recorded.contains("config") || !recorded.contains("runs"))
        throw ConfigError(manifest_path.string() + ": not a qrp manifest");

    auto config = parse_config_text(recorded["config"].dump(), manifest_path.string() + "#config");
    config.output = out_dir.string();

    ReplayReport report;
    report.result = run_experiment(config, log);
    const auto &fresh = report.result.manifest["runs"];
    const auto &old = recorded["runs"];
    auto mismatch = [&](std::string what) {
        report.ok = false;
        report.mismatches.push_back(std::move(what));
    };
    if (fresh.size() != old.size()) {
        mismatch("run count " + std::to_string(fresh.size()) + " != " + std::to_string(old.size()));
        return report;
    }
    for (std::size_t i = 0; i < old.size(); ++i) {
        const auto label = old[i].value("label", std::string("?"));
        if (fresh[i]["inputs"]["digest"] != old[i]["inputs"]["digest"]) mismatch(label + ": input digest differs");
        const auto &of = old[i]["files"];
        const auto &nf = fresh[i]["files"];
        if (of.size() != nf.size()) {
            mismatch(label + ": file count differs");
            continue;
        }
        for (std::size_t k = 0; k < of.size(); ++k) {
            if (of[k]["path"] != nf[k]["path"]) mismatch(label + ": file list differs at " + of[k]["path"].dump());
            else if (of[k]["rows"] != nf[k]["rows"]) mismatch(of[k]["path"].get<std::string>() + ": row count differs");
            else if (of[k]["digest"] != nf[k]["digest"]) mismatch(of[k]["path"].get<std::string>() + ": digest differs");
        }
    }
    return report;
}

} // namespace qrp
