// Copyright 2026 The qrecon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qrecon/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#ifndef QRECON_VERSION
#define QRECON_VERSION "unknown"
#endif

namespace qrecon {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kKnownKeys = {
    "dataset_path", "labels",     "framework", "family",          "depth",
    "loss",         "loss_domain", "epochs",   "learning_rate",   "optimizer",
    "seed",         "split_seed", "n_train",   "n_test",          "gradient_engine",
    "eval_every_epoch", "output_dir", "families", "label_sets",
};

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_list(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

template <class T> T parse_number(const std::string &key, const std::string &value) {
    std::istringstream in(value);
    T v{};
    if (!(in >> v) || !(in >> std::ws).eof()) {
        throw ConfigError("key '" + key + "': cannot parse '" + value + "'");
    }
    return v;
}

bool parse_bool(const std::string &key, const std::string &value) {
    if (value == "true" || value == "1" || value == "yes") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no") {
        return false;
    }
    throw ConfigError("key '" + key + "': expected a boolean, got '" + value + "'");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string csv_quote(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char c : s) {
        q += c;
        if (c == '"') {
            q += '"';
        }
    }
    return q + "\"";
}

Framework framework_for(Family family) {
    return family == Family::QAE ? Framework::QAE : Framework::QNN;
}

void write_manifest(const fs::path &dir, const ExperimentConfig &config,
                    const std::string &command) {
    std::ofstream out(dir / "manifest.txt");
    if (!out) {
        throw std::runtime_error("cannot write manifest in " + dir.string());
    }
    out << "command = " << command << '\n';
    out << "version = " << version() << '\n';
    out << "seed = " << config.train.seed << '\n';
    out << "split_seed = " << config.split_seed << '\n';
    out << "# config\n";
    for (const auto &[k, v] : config.raw) {
        out << k << " = " << v << '\n';
    }
}

void ensure_dir(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw std::runtime_error("cannot create output directory " + dir.string());
    }
}

std::vector<Sample> load_dataset_checked(const fs::path &path) {
    if (!fs::exists(path)) {
        throw std::runtime_error("dataset not found: " + path.string());
    }
    return load_digits(path);
}

}  // namespace

std::string_view version() { return QRECON_VERSION; }

std::map<std::string, std::string> parse_key_values(const std::string &text,
                                                    const std::string &source) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
        }
        kv[key] = trim(t.substr(eq + 1));
    }
    return kv;
}

std::set<int> parse_label_set(const std::string &text) {
    std::set<int> labels;
    std::string norm = text;
    for (char &c : norm) {
        if (c == '+' || c == ' ') {
            c = ',';
        }
    }
    for (const std::string &item : split_list(norm, ',')) {
        const int v = parse_number<int>("labels", item);
        if (v < 0 || v > 9) {
            throw ConfigError("label " + item + " outside 0-9");
        }
        labels.insert(v);
    }
    if (labels.empty()) {
        throw ConfigError("empty label set");
    }
    return labels;
}

std::string format_label_set(const std::set<int> &labels) {
    std::string s;
    for (int l : labels) {
        s += (s.empty() ? "" : "+") + std::to_string(l);
    }
    return s;
}

ExperimentConfig make_experiment_config(const std::map<std::string, std::string> &kv,
                                        const fs::path &base_dir) {
    ExperimentConfig c;
    c.raw = kv;
    bool framework_set = false;
    auto resolve = [&](const std::string &p) {
        fs::path path(p);
        return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
    };
    try {
        for (const auto &[key, value] : kv) {
            if (!kKnownKeys.contains(key)) {
                throw ConfigError("unknown config key '" + key + "'");
            }
            if (key == "dataset_path") {
                c.dataset_path = resolve(value);
            } else if (key == "labels") {
                c.labels = parse_label_set(value);
            } else if (key == "framework") {
                c.train.framework = parse_framework(value);
                framework_set = true;
            } else if (key == "family") {
                c.train.circuit.family = parse_family(value);
            } else if (key == "depth") {
                c.train.circuit.depth = parse_number<int>(key, value);
            } else if (key == "loss") {
                c.train.loss = parse_loss(value);
            } else if (key == "loss_domain") {
                c.train.loss_domain = parse_domain(value);
            } else if (key == "epochs") {
                c.train.epochs = parse_number<int>(key, value);
            } else if (key == "learning_rate") {
                c.train.learning_rate = parse_number<double>(key, value);
            } else if (key == "optimizer") {
                c.train.optimizer = parse_optimizer(value);
            } else if (key == "seed") {
                c.train.seed = parse_number<std::uint64_t>(key, value);
            } else if (key == "split_seed") {
                c.split_seed = parse_number<std::uint64_t>(key, value);
            } else if (key == "n_train") {
                c.n_train = parse_number<std::size_t>(key, value);
            } else if (key == "n_test") {
                c.n_test = parse_number<std::size_t>(key, value);
            } else if (key == "gradient_engine") {
                c.train.gradient_engine = parse_engine(value);
            } else if (key == "eval_every_epoch") {
                c.train.eval_every_epoch = parse_bool(key, value);
            } else if (key == "output_dir") {
                c.output_dir = resolve(value);
            } else if (key == "families") {
                for (const std::string &f : split_list(value, ',')) {
                    c.grid_families.push_back(parse_family(f));
                }
            } else if (key == "label_sets") {
                for (const std::string &s : split_list(value, ';')) {
                    c.grid_label_sets.push_back(parse_label_set(s));
                }
            }
        }
    } catch (const ConfigError &) {
        throw;
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    if (!framework_set) {
        c.train.framework = framework_for(c.train.circuit.family);
    }
    if (c.train.circuit.depth < 1) {
        throw ConfigError("depth must be at least 1");
    }
    if (c.dataset_path.empty()) {
        throw ConfigError("missing required key 'dataset_path'");
    }
    return c;
}

ExperimentConfig load_experiment_config(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config: " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return make_experiment_config(parse_key_values(buf.str(), path.string()),
                                  path.parent_path());
}

std::string summary_line(const CircuitSpec &spec, Framework framework, double avg_l2,
                         double avg_fidelity) {
    return std::string(family_name(spec.family)) + "," + std::string(framework_name(framework)) +
           "," + fmt(avg_l2) + "," + fmt(avg_fidelity) + "," + std::to_string(param_count(spec));
}

int cmd_train(const ExperimentConfig &config, CommandIo io) {
    try {
        config.train.validate();
        const auto samples = load_dataset_checked(config.dataset_path);
        const DatasetSplit split =
            make_split(samples, config.labels, config.split_seed, config.n_train, config.n_test);
        ensure_dir(config.output_dir);
        write_manifest(config.output_dir, config, "train");

        const TrainReport report = train(config.train, split);
        for (const std::string &w : report.warnings) {
            io.err << "warning: " << w << '\n';
        }
        write_checkpoint(config.output_dir / "checkpoint.txt", config.train.circuit,
                         report.final_params);
        write_epoch_losses(config.output_dir / "epoch_losses.csv", report);
        write_test_metrics(config.output_dir / "test_metrics.csv", report.test_results);
        if (config.train.eval_every_epoch) {
            std::ofstream out(config.output_dir / "epoch_test_fidelity.csv");
            out << "epoch,fidelity\n";
            for (std::size_t i = 0; i < report.epoch_test_fidelity.size(); ++i) {
                out << i << ',' << fmt(report.epoch_test_fidelity[i]) << '\n';
            }
        }
        io.out << summary_line(config.train.circuit, config.train.framework, report.avg_l2,
                               report.avg_fidelity)
               << '\n';
        return 0;
    } catch (const TrainingDiverged &e) {
        io.err << "error: training diverged: " << e.what() << '\n';
        return 3;
    } catch (const std::exception &e) {
        io.err << "error: " << e.what() << '\n';
        return 1;
    }
}

int cmd_eval(const ExperimentConfig &config, const fs::path &checkpoint, CommandIo io) {
    try {
        const Checkpoint ck = read_checkpoint(checkpoint);
        const auto samples = load_dataset_checked(config.dataset_path);
        const DatasetSplit split =
            make_split(samples, config.labels, config.split_seed, config.n_train, config.n_test);
        const Framework framework = framework_for(ck.spec.family);
        const EvalResult eval = evaluate(ck.spec, ck.theta, split.test, framework);
        ensure_dir(config.output_dir);
        write_manifest(config.output_dir, config, "eval " + checkpoint.string());
        write_test_metrics(config.output_dir / "test_metrics.csv", eval.per_sample);
        io.out << summary_line(ck.spec, framework, eval.avg_l2, eval.avg_fidelity) << '\n';
        return 0;
    } catch (const std::exception &e) {
        io.err << "error: " << e.what() << '\n';
        return 1;
    }
}

int cmd_reconstruct(const fs::path &checkpoint, const fs::path &dataset_path,
                    const std::vector<std::size_t> &indices, const fs::path &output_dir,
                    CommandIo io) {
    try {
        const Checkpoint ck = read_checkpoint(checkpoint);
        if (ck.spec.num_qubits != 6) {
            throw std::invalid_argument("checkpoint circuit acts on " +
                                        std::to_string(ck.spec.num_qubits) +
                                        " qubits; reconstruction needs 6");
        }
        const auto samples = load_dataset_checked(dataset_path);
        const Framework framework = framework_for(ck.spec.family);
        ensure_dir(output_dir);
        for (std::size_t idx : indices) {
            if (idx >= samples.size()) {
                throw std::out_of_range("sample index " + std::to_string(idx) +
                                        " beyond dataset size " + std::to_string(samples.size()));
            }
            const Sample &s = samples[idx];
            const Reconstruction rec = reconstruct(framework, s, ck.spec, ck.theta);
            const ImageMatrix input = normalize(downsample(s.image));
            const ImageMatrix reference = normalize(s.image);
            const std::string prefix = "sample_" + std::to_string(idx);
            write_pgm(output_dir / (prefix + "_input.pgm"), input);
            write_image_csv(output_dir / (prefix + "_input.csv"), input);
            write_pgm(output_dir / (prefix + "_reconstruction.pgm"), rec.image);
            write_image_csv(output_dir / (prefix + "_reconstruction.csv"), rec.image);
            write_pgm(output_dir / (prefix + "_reference.pgm"), reference);
            write_image_csv(output_dir / (prefix + "_reference.csv"), reference);
            io.out << prefix << ",label=" << s.label
                   << ",fidelity=" << fmt(fidelity(rec.state, amplitude_encode(s.image))) << '\n';
        }
        return 0;
    } catch (const std::exception &e) {
        io.err << "error: " << e.what() << '\n';
        return 1;
    }
}

std::vector<GridRow> run_grid(const ExperimentConfig &config, bool parallel) {
    std::vector<GridRow> rows;
    for (const auto &labels : config.grid_label_sets) {
        for (Family f : config.grid_families) {
            GridRow row;
            row.family = f;
            row.labels = labels;
            rows.push_back(row);
        }
    }
    if (rows.empty()) {
        return rows;
    }

    std::vector<Sample> samples;
    std::string load_error;
    try {
        samples = load_dataset_checked(config.dataset_path);
    } catch (const std::exception &e) {
        load_error = e.what();
    }

    auto run_cell = [&](GridRow &row) {
        if (!load_error.empty()) {
            row.error = load_error;
            return;
        }
        try {
            TrainConfig tc = config.train;
            tc.circuit.family = row.family;
            tc.framework = framework_for(row.family);
            row.param_count = param_count(tc.circuit);
            const DatasetSplit split =
                make_split(samples, row.labels, config.split_seed, config.n_train, config.n_test);
            const TrainReport report = train(tc, split);
            row.avg_l2 = report.avg_l2;
            row.avg_fidelity = report.avg_fidelity;
        } catch (const std::exception &e) {
            row.error = e.what();
        }
    };

    if (parallel) {
        std::vector<std::future<void>> jobs;
        for (GridRow &row : rows) {
            jobs.push_back(std::async(std::launch::async, [&run_cell, &row] { run_cell(row); }));
        }
        for (auto &j : jobs) {
            j.get();
        }
    } else {
        for (GridRow &row : rows) {
            run_cell(row);
        }
    }
    return rows;
}

void write_grid_csv(const fs::path &path, const std::vector<GridRow> &rows) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << "family,framework,labels,avg_l2,avg_fidelity,param_count,status\n";
    for (const GridRow &r : rows) {
        out << family_name(r.family) << ',' << framework_name(framework_for(r.family)) << ','
            << format_label_set(r.labels) << ',';
        if (r.error.empty()) {
            out << fmt(r.avg_l2) << ',' << fmt(r.avg_fidelity) << ',' << r.param_count << ",ok\n";
        } else {
            out << ",," << r.param_count << ',' << csv_quote("error: " + r.error) << '\n';
        }
    }
}

int cmd_grid(const ExperimentConfig &config, bool parallel, CommandIo io) {
    try {
        ensure_dir(config.output_dir);
        write_manifest(config.output_dir, config, parallel ? "grid --parallel" : "grid");
        const auto rows = run_grid(config, parallel);
        const fs::path out = config.output_dir / "grid_results.csv";
        write_grid_csv(out, rows);
        std::size_t failed = 0;
        for (const GridRow &r : rows) {
            if (!r.error.empty()) {
                ++failed;
                io.err << "warning: cell " << family_name(r.family) << "/"
                       << format_label_set(r.labels) << " failed: " << r.error << '\n';
            }
        }
        io.out << "wrote " << rows.size() << " rows (" << failed << " failed) to " << out.string()
               << '\n';
        return 0;
    } catch (const std::exception &e) {
        io.err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace qrecon
