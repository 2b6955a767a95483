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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qrp/diagnostics.hpp"
#include "qrp/hamiltonian.hpp"
#include "qrp/reservoir.hpp"

namespace qrp {

struct TaskList {
    std::vector<int> stm_delays{0};
    bool correlation = false;
    bool deviation = false;
    int deviation_windows = 4000;
    std::vector<OtocSpec> otoc;
    std::vector<TmiSpec> tmi;

    friend bool operator==(const TaskList &, const TaskList &) = default;
};

/// One drive: a model, its drive settings and what to compute from it.
struct RunPlan {
    std::string label;
    IsingParams model;
    DriveConfig drive;
    std::vector<PauliString> readouts;
    TaskList tasks;
    bool emit_record = false;
};

/// A preset name with overrides, or an explicit single-run experiment.
struct ExperimentConfig {
    std::string preset; ///< empty for an explicit experiment
    /// Chain-length override for presets.
    std::optional<int> n;
    DriveConfig drive;
    /// Explicit experiments only.
    std::optional<IsingParams> model;
    std::vector<PauliString> readouts;
    TaskList tasks;
    bool emit_record = false;
    /// Empty means "qrp_out/<preset>" ("qrp_out/custom" without a preset).
    std::string output;

    std::filesystem::path output_dir() const;

    friend bool operator==(const ExperimentConfig &, const ExperimentConfig &) = default;
};

/// Command-line overrides applied on top of a preset or config file.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> n;
    std::optional<int> grid;
    std::optional<int> tmi_cap;
    std::optional<std::string> output;
};

void apply_overrides(ExperimentConfig &config, const Overrides &overrides);

const std::vector<std::string> &preset_names();

/// Default configuration for a preset; throws ValidationError listing the
/// valid names for an unknown one.
ExperimentConfig preset_config(std::string_view name);

/// Reads a YAML config file. Unknown or misplaced keys are rejected. A file
/// without a `preset` key starts from `default_preset` when one is given.
ExperimentConfig parse_config(const std::filesystem::path &path, std::string_view default_preset = {});
ExperimentConfig parse_config_text(std::string_view text, std::string_view source = "<config>",
                                   std::string_view default_preset = {});

/// Config-file schema as JSON; `parse_config_text(config_to_json(c).dump())`
/// reproduces `c`.
nlohmann::json config_to_json(const ExperimentConfig &config);

/// Expands presets into concrete runs and validates every run.
std::vector<RunPlan> resolve(const ExperimentConfig &config);

} // namespace qrp
