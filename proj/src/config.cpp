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

#include "qrp/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "qrp/errors.hpp"

namespace qrp {

namespace {

const std::vector<std::string> kPresets = {"fig3-free", "fig3-chaotic", "fig4",  "fig5-free", "fig5-chaotic",
                                           "fig6",      "appA",         "appB",  "appC"};

const std::map<std::string, std::set<std::string>> kBlocks = {
    {"", {"preset", "seed", "output", "emit_record", "model", "drive", "readouts", "tasks"}},
    {"model", {"n", "j", "h_x", "h_z"}},
    {"drive", {"t_in", "n_grid", "washout", "train", "test", "tmi_cap"}},
    {"tasks", {"stm_delays", "correlation", "deviation", "deviation_windows", "otoc", "tmi"}},
    {"otoc", {"w", "v"}},
};

std::string block_path(const std::string &block, const std::string &key) {
    return block.empty() ? key : block + "." + key;
}

class Reader {
  public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Mark &mark, const std::string &message) const {
        std::ostringstream os;
        os << source_;
        if (!mark.is_null()) os << ":" << mark.line + 1 << ":" << mark.column + 1;
        os << ": " << message;
        throw ValidationError(os.str());
    }

    void check_keys(const YAML::Node &node, const std::string &block) const {
        if (!node.IsMap()) fail(node.Mark(), (block.empty() ? std::string("config") : block) + " must be a mapping");
        const auto &allowed = kBlocks.at(block);
        for (const auto &kv : node) {
            const auto key = kv.first.as<std::string>();
            if (allowed.count(key)) continue;
            std::string hint;
            for (const auto &[other, keys] : kBlocks)
                if (other != block && other != "otoc" && keys.count(key))
                    hint = " ('" + key + "' belongs " + (other.empty() ? "at the top level" : "in the " + other + " block") + ")";
            fail(kv.first.Mark(), "unknown key '" + block_path(block, key) + "'" + hint);
        }
    }

    template <typename T> T scalar(const YAML::Node &node, const std::string &path, const char *kind) const {
        if (!node.IsScalar()) fail(node.Mark(), path + " must be " + kind);
        try {
            return node.as<T>();
        } catch (const YAML::BadConversion &) {
            fail(node.Mark(), path + " must be " + kind + ", got '" + node.Scalar() + "'");
        }
    }

    int integer(const YAML::Node &n, const std::string &path) const { return scalar<int>(n, path, "an integer"); }
    double real(const YAML::Node &n, const std::string &path) const { return scalar<double>(n, path, "a number"); }
    bool boolean(const YAML::Node &n, const std::string &path) const { return scalar<bool>(n, path, "a boolean"); }
    std::string string(const YAML::Node &n, const std::string &path) const {
        return scalar<std::string>(n, path, "a string");
    }

    PauliString op(const YAML::Node &n, const std::string &path) const {
        const auto text = string(n, path);
        try {
            return parse_operator_label(text);
        } catch (const Error &e) {
            fail(n.Mark(), path + ": " + e.what());
        }
    }

    const std::string &source() const { return source_; }

  private:
    std::string source_;
};

void read_model(const Reader &r, const YAML::Node &node, ExperimentConfig &cfg) {
    r.check_keys(node, "model");
    if (!cfg.preset.empty()) {
        for (const auto &kv : node) {
            const auto key = kv.first.as<std::string>();
            if (key != "n") r.fail(kv.first.Mark(), "model." + key + " cannot be set together with a preset");
        }
        if (node["n"]) cfg.n = r.integer(node["n"], "model.n");
        return;
    }
    IsingParams p;
    if (node["n"]) p.n = r.integer(node["n"], "model.n");
    if (node["j"]) p.j = r.real(node["j"], "model.j");
    if (node["h_x"]) p.h_x = r.real(node["h_x"], "model.h_x");
    if (node["h_z"]) p.h_z = r.real(node["h_z"], "model.h_z");
    try {
        p.validate();
    } catch (const Error &e) {
        r.fail(node.Mark(), e.what());
    }
    cfg.model = p;
}

void read_drive(const Reader &r, const YAML::Node &node, DriveConfig &d) {
    r.check_keys(node, "drive");
    if (node["t_in"]) d.t_in = r.real(node["t_in"], "drive.t_in");
    if (node["n_grid"]) d.n_grid = r.integer(node["n_grid"], "drive.n_grid");
    if (node["washout"]) d.washout = r.integer(node["washout"], "drive.washout");
    if (node["train"]) d.train = r.integer(node["train"], "drive.train");
    if (node["test"]) d.test = r.integer(node["test"], "drive.test");
    if (node["tmi_cap"]) d.snapshots.instance_cap = r.integer(node["tmi_cap"], "drive.tmi_cap");
    try {
        d.validate();
    } catch (const Error &e) {
        r.fail(node.Mark(), e.what());
    }
}

void read_tasks(const Reader &r, const YAML::Node &node, TaskList &t) {
    r.check_keys(node, "tasks");
    if (const auto n = node["stm_delays"]) {
        if (!n.IsSequence()) r.fail(n.Mark(), "tasks.stm_delays must be a list of integers");
        t.stm_delays.clear();
        for (const auto &d : n) {
            const int v = r.integer(d, "tasks.stm_delays");
            if (v < 0) r.fail(d.Mark(), "tasks.stm_delays entries must be >= 0");
            t.stm_delays.push_back(v);
        }
    }
    if (node["correlation"]) t.correlation = r.boolean(node["correlation"], "tasks.correlation");
    if (node["deviation"]) t.deviation = r.boolean(node["deviation"], "tasks.deviation");
    if (const auto n = node["deviation_windows"]) {
        t.deviation_windows = r.integer(n, "tasks.deviation_windows");
        if (t.deviation_windows < 1) r.fail(n.Mark(), "tasks.deviation_windows must be >= 1");
    }
    if (const auto n = node["otoc"]) {
        if (!n.IsSequence()) r.fail(n.Mark(), "tasks.otoc must be a list of {w, v} mappings");
        for (const auto &e : n) {
            r.check_keys(e, "otoc");
            if (!e["w"] || !e["v"]) r.fail(e.Mark(), "tasks.otoc entries need both 'w' and 'v'");
            t.otoc.push_back({r.op(e["w"], "tasks.otoc.w"), r.op(e["v"], "tasks.otoc.v")});
        }
    }
    if (const auto n = node["tmi"]) {
        if (!n.IsSequence()) r.fail(n.Mark(), "tasks.tmi must be a list of \"A:B:C\" strings");
        for (const auto &e : n) {
            try {
                t.tmi.push_back(TmiSpec::parse(r.string(e, "tasks.tmi")));
            } catch (const Error &ex) {
                r.fail(e.Mark(), std::string("tasks.tmi: ") + ex.what());
            }
        }
    }
}

ExperimentConfig read_config(const YAML::Node &root, const Reader &r, std::string_view default_preset) {
    if (!root || root.IsNull()) {
        if (default_preset.empty()) r.fail(YAML::Mark::null_mark(), "config is empty");
        return preset_config(default_preset);
    }
    r.check_keys(root, "");
    ExperimentConfig cfg;
    if (!default_preset.empty()) cfg = preset_config(default_preset);
    if (const auto n = root["preset"]) {
        const auto name = r.string(n, "preset");
        if (!default_preset.empty() && name != default_preset)
            r.fail(n.Mark(), "config preset '" + name + "' conflicts with requested preset '" +
                                 std::string(default_preset) + "'");
        try {
            cfg = preset_config(name);
        } catch (const Error &e) {
            r.fail(n.Mark(), e.what());
        }
    }
    if (root["seed"]) cfg.drive.seed = r.scalar<std::uint64_t>(root["seed"], "seed", "an unsigned 64-bit integer");
    if (root["output"]) cfg.output = r.string(root["output"], "output");
    if (root["emit_record"]) cfg.emit_record = r.boolean(root["emit_record"], "emit_record");
    if (root["model"]) read_model(r, root["model"], cfg);
    if (root["drive"]) read_drive(r, root["drive"], cfg.drive);

    if (!cfg.preset.empty()) {
        for (const char *key : {"readouts", "tasks"})
            if (root[key]) r.fail(root[key].Mark(), std::string(key) + " cannot be set together with a preset");
        return cfg;
    }
    if (const auto n = root["readouts"]) {
        if (!n.IsSequence()) r.fail(n.Mark(), "readouts must be a list of operator labels");
        for (const auto &e : n) {
            auto op = r.op(e, "readouts");
            if (std::find(cfg.readouts.begin(), cfg.readouts.end(), op) != cfg.readouts.end())
                r.fail(e.Mark(), "duplicate read-out " + op.label());
            cfg.readouts.push_back(std::move(op));
        }
    }
    if (root["tasks"]) read_tasks(r, root["tasks"], cfg.tasks);
    return cfg;
}

std::vector<PauliString> z_singles(int n) {
    std::vector<PauliString> ops;
    for (int i = 1; i <= n; ++i) ops.push_back(PauliString().set(i, Axis::Z));
    return ops;
}

PauliString op(std::string_view label) { return parse_operator_label(label); }

RunPlan plan(std::string label, IsingParams model, const ExperimentConfig &cfg) {
    RunPlan p;
    p.label = std::move(label);
    p.model = model;
    p.drive = cfg.drive;
    p.emit_record = cfg.emit_record;
    return p;
}

std::vector<RunPlan> preset_plans(const ExperimentConfig &cfg) {
    const std::string &name = cfg.preset;
    const int n = cfg.n.value_or(7);
    const auto free = IsingParams::free_fermion(n);
    const auto chaotic = IsingParams::chaotic(n);
    const auto perturbed = IsingParams::perturbed(n);
    std::vector<RunPlan> plans;

    auto stm_run = [&](std::string label, IsingParams model, int chain) {
        RunPlan p = plan(std::move(label), model, cfg);
        p.readouts = z_singles(chain);
        p.tasks.stm_delays = {0, 1, 2};
        return p;
    };
    auto fig5_run = [&](std::string label, IsingParams model) {
        RunPlan p = plan(std::move(label), model, cfg);
        p.readouts = {op("z2"), op("z3"), op("x2*x3"), op("z2*z3")};
        p.tasks.otoc = {{op("z2"), op("z1")}, {op("z3"), op("z1")}};
        p.tasks.tmi = {TmiSpec::parse("0:2:3")};
        return p;
    };
    auto fig6_run = [&](std::string label, IsingParams model) {
        RunPlan p = plan(std::move(label), model, cfg);
        p.readouts = {op("x2*x3"), op("z2*z3"), op("z2*x3"), op("x2*z3")};
        p.tasks.otoc = {{op("z2"), op("z1")}, {op("z3"), op("z1")}, {op("z2"), op("x1")}, {op("z3"), op("x1")}};
        p.tasks.tmi = {TmiSpec::parse("0:2:3"), TmiSpec::parse("0:2:3,4")};
        return p;
    };
    auto appb_run = [&](std::string label, IsingParams model) {
        RunPlan p = plan(std::move(label), model, cfg);
        const char axes[] = {'x', 'z'};
        for (int i = 2; i <= 4; ++i)
            for (char a : axes) p.readouts.push_back(op(std::string(1, a) + std::to_string(i)));
        for (int i = 2; i <= 4; ++i)
            for (int j = i + 1; j <= 4; ++j)
                for (char a : axes)
                    for (char b : axes)
                        p.readouts.push_back(op(std::string(1, a) + std::to_string(i) + "*" + b + std::to_string(j)));
        return p;
    };
    auto appc_run = [&](std::string label, IsingParams model) {
        RunPlan p = plan(std::move(label), model, cfg);
        p.tasks.stm_delays.clear();
        p.tasks.otoc = {{op("x2*x3"), op("z1")}, {op("z2*z3"), op("z1")}, {op("x2"), op("x3")}, {op("z2"), op("z3")}};
        return p;
    };

    if (name == "fig3-free") {
        plans.push_back(stm_run("free", free, n));
    } else if (name == "fig3-chaotic") {
        plans.push_back(stm_run("chaotic", chaotic, n));
    } else if (name == "fig4") {
        for (auto [label, model] : {std::pair{"free", free}, std::pair{"chaotic", chaotic}}) {
            RunPlan p = plan(label, model, cfg);
            p.readouts = z_singles(n);
            p.tasks.stm_delays = {0};
            p.tasks.correlation = true;
            p.tasks.deviation = true;
            plans.push_back(std::move(p));
        }
    } else if (name == "fig5-free") {
        plans.push_back(fig5_run("free", free));
    } else if (name == "fig5-chaotic") {
        plans.push_back(fig5_run("chaotic", chaotic));
    } else if (name == "fig6") {
        plans.push_back(fig6_run("free", free));
        plans.push_back(fig6_run("perturbed", perturbed));
    } else if (name == "appA") {
        std::vector<int> sizes;
        if (cfg.n) sizes = {*cfg.n};
        else sizes = {6, 7, 8, 9, 10};
        for (int size : sizes) {
            plans.push_back(stm_run("free-n" + std::to_string(size), IsingParams::free_fermion(size), size));
            plans.push_back(stm_run("chaotic-n" + std::to_string(size), IsingParams::chaotic(size), size));
        }
    } else if (name == "appB") {
        plans.push_back(appb_run("free", free));
        plans.push_back(appb_run("perturbed", perturbed));
        plans.push_back(appb_run("chaotic", chaotic));
    } else if (name == "appC") {
        plans.push_back(appc_run("free", free));
        plans.push_back(appc_run("perturbed", perturbed));
        plans.push_back(appc_run("chaotic", chaotic));
    }
    return plans;
}

void check_sites(const RunPlan &p, const PauliString &op, const std::string &what) {
    if (op.max_site() > p.model.n)
        throw ValidationError("run '" + p.label + "': " + what + " " + op.label() + " acts outside the " +
                              std::to_string(p.model.n + 1) + "-qubit register");
}

void finalize(RunPlan &p) {
    p.model.validate();
    auto &t = p.tasks;
    if (t.deviation) {
        if (std::find(t.stm_delays.begin(), t.stm_delays.end(), 0) == t.stm_delays.end()) t.stm_delays.push_back(0);
        for (const auto &z : z_singles(p.model.n))
            if (std::find(p.readouts.begin(), p.readouts.end(), z) == p.readouts.end()) p.readouts.push_back(z);
    }
    std::sort(t.stm_delays.begin(), t.stm_delays.end());
    t.stm_delays.erase(std::unique(t.stm_delays.begin(), t.stm_delays.end()), t.stm_delays.end());

    for (const auto &op : p.readouts) check_sites(p, op, "read-out");
    for (const auto &o : t.otoc) {
        check_sites(p, o.w, "OTOC operator");
        check_sites(p, o.v, "OTOC operator");
        if (o.w.is_identity() || o.v.is_identity()) throw ValidationError("OTOC operators must not be the identity");
    }
    QubitSubset support;
    for (const auto &spec : t.tmi) {
        spec.validate();
        support = unite(support, spec.all());
    }
    if (!support.empty() && support.indices().back() > p.model.n)
        throw ValidationError("run '" + p.label + "': TMI subsets reach qubit " +
                              std::to_string(support.indices().back()) + " outside the register");
    for (int d : t.stm_delays)
        if (d > p.drive.washout)
            throw ValidationError("run '" + p.label + "': STM delay " + std::to_string(d) + " exceeds the washout " +
                                  std::to_string(p.drive.washout));
    if (t.deviation_windows < 1) throw ValidationError("tasks.deviation_windows must be >= 1");

    p.drive.snapshots.support = support;
    p.drive.snapshots.keep_mean_state = t.correlation || t.deviation || !t.otoc.empty();
    p.drive.validate();
    if (p.readouts.empty() && !p.drive.snapshots.keep_mean_state && support.empty())
        throw ValidationError("run '" + p.label + "' has nothing to compute: give readouts or tasks");
}

} // namespace

const std::vector<std::string> &preset_names() { return kPresets; }

std::filesystem::path ExperimentConfig::output_dir() const {
    if (!output.empty()) return output;
    return std::filesystem::path("qrp_out") / (preset.empty() ? std::string("custom") : preset);
}

ExperimentConfig preset_config(std::string_view name) {
    if (std::find(kPresets.begin(), kPresets.end(), name) == kPresets.end()) {
        std::string list;
        for (const auto &p : kPresets) list += (list.empty() ? "" : ", ") + p;
        throw ValidationError("unknown preset '" + std::string(name) + "'; valid presets: " + list);
    }
    ExperimentConfig cfg;
    cfg.preset = std::string(name);
    return cfg;
}

void apply_overrides(ExperimentConfig &config, const Overrides &o) {
    if (o.seed) config.drive.seed = *o.seed;
    if (o.grid) config.drive.n_grid = *o.grid;
    if (o.tmi_cap) config.drive.snapshots.instance_cap = *o.tmi_cap;
    if (o.output) config.output = *o.output;
    if (o.n) {
        if (config.preset.empty()) {
            if (!config.model) config.model = IsingParams{};
            config.model->n = *o.n;
        } else {
            config.n = *o.n;
        }
    }
}

ExperimentConfig parse_config_text(std::string_view text, std::string_view source, std::string_view default_preset) {
    const Reader reader{std::string(source)};
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception &e) {
        std::ostringstream os;
        os << source << ":" << e.mark.line + 1 << ":" << e.mark.column + 1 << ": syntax error: " << e.msg;
        throw ConfigError(os.str());
    }
    return read_config(root, reader, default_preset);
}

ExperimentConfig parse_config(const std::filesystem::path &path, std::string_view default_preset) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.string(), default_preset);
}

nlohmann::json config_to_json(const ExperimentConfig &c) {
    nlohmann::json j;
    if (!c.preset.empty()) j["preset"] = c.preset;
    j["seed"] = c.drive.seed;
    if (!c.output.empty()) j["output"] = c.output;
    if (c.emit_record) j["emit_record"] = true;
    if (c.n) j["model"] = {{"n", *c.n}};
    if (c.model) j["model"] = {{"n", c.model->n}, {"j", c.model->j}, {"h_x", c.model->h_x}, {"h_z", c.model->h_z}};
    j["drive"] = {{"t_in", c.drive.t_in},       {"n_grid", c.drive.n_grid}, {"washout", c.drive.washout},
                  {"train", c.drive.train},     {"test", c.drive.test},     {"tmi_cap", c.drive.snapshots.instance_cap}};
    if (c.preset.empty()) {
        auto &ro = j["readouts"] = nlohmann::json::array();
        for (const auto &op : c.readouts) ro.push_back(op.label());
        const auto &t = c.tasks;
        nlohmann::json tasks = {{"stm_delays", t.stm_delays},
                                {"correlation", t.correlation},
                                {"deviation", t.deviation},
                                {"deviation_windows", t.deviation_windows}};
        auto &otoc = tasks["otoc"] = nlohmann::json::array();
        for (const auto &o : t.otoc) otoc.push_back({{"w", o.w.label()}, {"v", o.v.label()}});
        auto &tmi = tasks["tmi"] = nlohmann::json::array();
        for (const auto &s : t.tmi) tmi.push_back(s.label());
        j["tasks"] = std::move(tasks);
    }
    return j;
}

std::vector<RunPlan> resolve(const ExperimentConfig &config) {
    std::vector<RunPlan> plans;
    if (!config.preset.empty()) {
        if (config.model) throw ValidationError("explicit model parameters cannot be combined with a preset");
        plans = preset_plans(config);
        if (plans.empty()) preset_config(config.preset); // throws with the list of names
    } else {
        if (config.n) throw ValidationError("a chain-length override without a preset must go in the model block");
        RunPlan p = plan("custom", config.model.value_or(IsingParams{}), config);
        p.readouts = config.readouts;
        p.tasks = config.tasks;
        plans.push_back(std::move(p));
    }
    for (auto &p : plans) finalize(p);
    return plans;
}

} // namespace qrp
