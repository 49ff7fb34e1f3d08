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

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qrecon/experiment.hpp"

namespace {

qrecon::ExperimentConfig load(const std::string &config_path, const std::string &out_dir,
                              std::optional<std::uint64_t> seed) {
    qrecon::ExperimentConfig config = qrecon::load_experiment_config(config_path);
    if (seed) {
        config.train.seed = *seed;
        config.raw["seed"] = std::to_string(*seed);
    }
    if (!out_dir.empty()) {
        config.output_dir = out_dir;
        config.raw["output_dir"] = out_dir;
    }
    return config;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Image reconstruction with parameterized quantum circuits"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qrecon::version()));

    std::string config_path;
    std::string checkpoint;
    std::string out_dir;
    std::string dataset;
    std::vector<std::size_t> indices;
    std::optional<std::uint64_t> seed;
    bool parallel = false;

    auto *train = app.add_subcommand("train", "train one model from a config file");
    train->add_option("--config", config_path, "experiment config (key = value)")->required();
    train->add_option("--out", out_dir, "output directory (overrides output_dir)");
    train->add_option("--seed", seed, "initialization seed (overrides seed)");

    auto *eval = app.add_subcommand("eval", "score a checkpoint on the config's test split");
    eval->add_option("--config", config_path, "experiment config")->required();
    eval->add_option("--checkpoint", checkpoint, "checkpoint file")->required();
    eval->add_option("--out", out_dir, "output directory");
    eval->add_option("--seed", seed, "unused by eval; recorded in the manifest");

    auto *recon = app.add_subcommand("reconstruct", "write input/reconstruction/reference images");
    recon->add_option("--checkpoint", checkpoint, "checkpoint file")->required();
    recon->add_option("--config", config_path, "config supplying dataset_path");
    recon->add_option("--dataset", dataset, "digits CSV (overrides the config)");
    recon->add_option("--indices", indices, "dataset row indices")->required()->delimiter(',');
    recon->add_option("--out", out_dir, "output directory")->required();

    auto *grid = app.add_subcommand("grid", "run a (family x label set) grid");
    grid->add_option("--config", config_path, "grid config")->required();
    grid->add_option("--out", out_dir, "output directory");
    grid->add_option("--seed", seed, "initialization seed for every cell");
    grid->add_flag("--parallel", parallel, "run cells concurrently");

    CLI11_PARSE(app, argc, argv);

    const qrecon::CommandIo io{std::cout, std::cerr};
    try {
        if (*train) {
            return qrecon::cmd_train(load(config_path, out_dir, seed), io);
        }
        if (*eval) {
            return qrecon::cmd_eval(load(config_path, out_dir, seed), checkpoint, io);
        }
        if (*recon) {
            if (dataset.empty()) {
                if (config_path.empty()) {
                    std::cerr << "error: reconstruct needs --dataset or --config\n";
                    return 2;
                }
                dataset = qrecon::load_experiment_config(config_path).dataset_path.string();
            }
            return qrecon::cmd_reconstruct(checkpoint, dataset, indices, out_dir, io);
        }
        if (*grid) {
            return qrecon::cmd_grid(load(config_path, out_dir, seed), parallel, io);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
