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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qrp/config.hpp"
#include "qrp/errors.hpp"
#include "qrp/experiment.hpp"

namespace {

void print_error(const std::string &kind, const std::string &message) {
    std::cerr << nlohmann::json{{"status", "error"}, {"kind", kind}, {"message", message}}.dump() << std::endl;
}

nlohmann::json run_summary(const qrp::ExperimentResult &res) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto &r : res.manifest["runs"]) runs.push_back({{"label", r["label"]}, {"files", r["files"].size()}});
    return {{"status", "ok"},
            {"out_dir", res.out_dir.string()},
            {"manifest", (res.out_dir / "manifest.json").string()},
            {"runs", runs}};
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum reservoir probing on a driven Ising chain"};
    app.require_subcommand(1);
    app.set_version_flag("--version", qrp::kVersion);

    std::string preset, config_path, out_dir, manifest_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> n, grid, tmi_cap;
    bool emit_record = false, quiet = false;

    auto *run = app.add_subcommand("run", "run a preset or a config file");
    run->add_option("--preset", preset, "preset name");
    run->add_option("--config", config_path, "YAML config file")->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed, "input-sequence seed");
    run->add_option("--n", n, "chain length");
    run->add_option("--grid", grid, "virtual-time grid points per interval");
    run->add_option("--tmi-cap", tmi_cap, "test steps sampled for TMI");
    run->add_flag("--emit-record", emit_record, "also write the raw read-out record");
    run->add_flag("--quiet", quiet, "no progress lines");

    auto *validate = app.add_subcommand("validate", "check a config file without running it");
    validate->add_option("--config", config_path, "YAML config file")->required();
    validate->add_option("--preset", preset, "preset the file applies to");

    auto *rep = app.add_subcommand("replay", "re-run a manifest and compare every output digest");
    rep->add_option("--manifest", manifest_path, "manifest.json of an earlier run")->required();
    rep->add_option("--out", out_dir, "output directory for the replay")->required();
    rep->add_flag("--quiet", quiet, "no progress lines");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        print_error("usage", e.what());
        return 2;
    }

    try {
        std::ostream *log = quiet ? nullptr : &std::cerr;
        if (*run) {
            if (preset.empty() && config_path.empty()) {
                print_error("usage", "run needs --preset or --config");
                return 2;
            }
            auto config = config_path.empty() ? qrp::preset_config(preset) : qrp::parse_config(config_path, preset);
            qrp::Overrides o;
            o.seed = seed;
            o.n = n;
            o.grid = grid;
            o.tmi_cap = tmi_cap;
            if (!out_dir.empty()) o.output = out_dir;
            qrp::apply_overrides(config, o);
            if (emit_record) config.emit_record = true;
            const auto res = qrp::run_experiment(config, log);
            std::cout << run_summary(res).dump() << std::endl;
        } else if (*validate) {
            const auto config = qrp::parse_config(config_path, preset);
            const auto plans = qrp::resolve(config);
            nlohmann::json labels = nlohmann::json::array();
            for (const auto &p : plans) labels.push_back(p.label);
            std::cout << nlohmann::json{{"status", "ok"}, {"config", qrp::config_to_json(config)}, {"runs", labels}}.dump()
                      << std::endl;
        } else if (*rep) {
            const auto report = qrp::replay(manifest_path, out_dir, log);
            if (!report.ok) {
                std::string msg;
                for (const auto &m : report.mismatches) msg += (msg.empty() ? "" : "; ") + m;
                print_error("replay_mismatch", msg);
                return 1;
            }
            auto summary = run_summary(report.result);
            summary["replay"] = "identical";
            std::cout << summary.dump() << std::endl;
        }
    } catch (const qrp::Error &e) {
        print_error(e.kind(), e.what());
        return 1;
    } catch (const std::exception &e) {
        print_error("internal", e.what());
        return 1;
    }
    return 0;
}
