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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrecon/training.hpp"

namespace qrecon {

std::string_view version();

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` file. Blank lines and lines starting with '#' are
/// ignored; later keys override earlier ones.
std::map<std::string, std::string> parse_key_values(const std::string &text,
                                                    const std::string &source = "<memory>");

std::set<int> parse_label_set(const std::string &text);
std::string format_label_set(const std::set<int> &labels);

struct ExperimentConfig {
    std::filesystem::path dataset_path;
    std::set<int> labels{0};
    TrainConfig train;
    std::uint64_t split_seed = 0;
    std::size_t n_train = 50;
    std::size_t n_test = 30;
    std::filesystem::path output_dir = "out";

    // Grid-only keys.
    std::vector<Family> grid_families;
    std::vector<std::set<int>> grid_label_sets;

    /// Original key/value pairs, echoed into run manifests.
    std::map<std::string, std::string> raw;
};

/// Builds a config from parsed keys; relative paths resolve against `base_dir`.
ExperimentConfig make_experiment_config(const std::map<std::string, std::string> &kv,
                                        const std::filesystem::path &base_dir = {});

ExperimentConfig load_experiment_config(const std::filesystem::path &path);

struct CommandIo {
    std::ostream &out;
    std::ostream &err;
};

/// Trains one model and writes checkpoint.txt, epoch_losses.csv,
/// test_metrics.csv and manifest.txt into output_dir. Prints
/// `family,framework,avg_l2,avg_fidelity,param_count` to `io.out`.
int cmd_train(const ExperimentConfig &config, CommandIo io);

/// Scores a checkpoint on the config's test split.
int cmd_eval(const ExperimentConfig &config, const std::filesystem::path &checkpoint,
             CommandIo io);

/// Writes `<prefix>_{input,reconstruction,reference}.{pgm,csv}` per index.
int cmd_reconstruct(const std::filesystem::path &checkpoint,
                    const std::filesystem::path &dataset_path,
                    const std::vector<std::size_t> &indices,
                    const std::filesystem::path &output_dir, CommandIo io);

/// Runs every (family x label set) cell and writes grid_results.csv.
int cmd_grid(const ExperimentConfig &config, bool parallel, CommandIo io);

struct GridRow {
    Family family = Family::Circuit2;
    std::set<int> labels;
    double avg_l2 = 0.0;
    double avg_fidelity = 0.0;
    std::size_t param_count = 0;
    std::string error;  // empty on success
};

std::vector<GridRow> run_grid(const ExperimentConfig &config, bool parallel);
void write_grid_csv(const std::filesystem::path &path, const std::vector<GridRow> &rows);

/// Summary line printed by train/eval.
std::string summary_line(const CircuitSpec &spec, Framework framework, double avg_l2,
                         double avg_fidelity);

}  // namespace qrecon
