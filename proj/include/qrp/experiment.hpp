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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qrp/config.hpp"
#include "qrp/stm.hpp"
#include "qrp/warnings.hpp"

namespace qrp {

inline constexpr const char *kVersion = "0.1.0";

struct NamedCurve {
    std::string name;
    std::vector<double> values; ///< one per grid tau
};

/// Everything computed from one drive.
struct RunOutcome {
    RunPlan plan;
    InputSequence inputs;
    double ground_energy = 0.0;
    bool degenerate_ground_state = false;
    std::vector<double> grid;
    ReadoutRecord record;
    std::vector<PerformanceCurve> stm;
    /// correlations[i - 1][m] = Tr[rho_bar z_1 z_i(tau_m)], i = 1..N.
    std::vector<std::vector<cplx>> correlations;
    std::optional<DeviationBins> deviation;
    std::vector<NamedCurve> otoc;
    std::vector<NamedCurve> tmi;
    double otoc_max_imag_residue = 0.0;
    WarningLog warnings;
    double seconds = 0.0;

    /// Throws ValidationError when absent.
    const PerformanceCurve &stm_for(std::string_view label, int delay) const;
    const std::vector<double> &otoc_for(std::string_view name) const;
    const std::vector<double> &tmi_for(std::string_view name) const;
};

/// Runs the drive and every task of `plan`; progress lines go to `log`.
RunOutcome execute(const RunPlan &plan, std::ostream *log = nullptr);

struct OutputFile {
    std::string path; ///< relative to the experiment output directory
    std::size_t rows = 0;
    std::uint64_t digest = 0;
};

/// Writes the run's CSVs into `root / plan.label`.
std::vector<OutputFile> write_outputs(const RunOutcome &run, const std::filesystem::path &root);

struct ExperimentResult {
    std::filesystem::path out_dir;
    std::vector<RunOutcome> runs;
    nlohmann::json manifest;
};

/// Resolves, runs and writes every run plus `manifest.json`.
ExperimentResult run_experiment(const ExperimentConfig &config, std::ostream *log = nullptr);
ExperimentResult run_preset(std::string_view name, const Overrides &overrides = {}, std::ostream *log = nullptr);

struct ReplayReport {
    bool ok = true;
    std::vector<std::string> mismatches;
    ExperimentResult result;
};

/// Re-runs the config recorded in a manifest into `out_dir` and compares
/// input digests, row counts and file digests.
ReplayReport replay(const std::filesystem::path &manifest, const std::filesystem::path &out_dir,
                    std::ostream *log = nullptr);

} // namespace qrp
