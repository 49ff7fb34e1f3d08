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

#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace qrecon;
namespace fs = std::filesystem;

namespace {

class ExperimentTest : public ::testing::Test {
  protected:
    void SetUp() override {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("qrecon_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    ExperimentConfig config(const std::string &extra) const {
        return make_experiment_config(
            parse_key_values("dataset_path = " + (testutil::data_dir() / "digits.csv").string() +
                             "\noutput_dir = " + (dir_ / "out").string() + "\n" + extra));
    }

    fs::path dir_;
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

}  // namespace

TEST(Config, parses_key_values) {
    const auto kv = parse_key_values("# comment\n\n family = Circuit3 \ndepth=4\ndepth = 5\n");
    EXPECT_EQ(kv.at("family"), "Circuit3");
    EXPECT_EQ(kv.at("depth"), "5");
    try {
        parse_key_values("a = 1\nno equals sign\n", "x.conf");
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("x.conf:2"), std::string::npos);
    }
}

TEST(Config, label_sets) {
    EXPECT_EQ(parse_label_set("0,1"), (std::set<int>{0, 1}));
    EXPECT_EQ(parse_label_set("3+1"), (std::set<int>{1, 3}));
    EXPECT_EQ(format_label_set({0, 1}), "0+1");
    EXPECT_THROW(parse_label_set("10"), ConfigError);
    EXPECT_THROW(parse_label_set(""), ConfigError);
}

TEST(Config, builds_experiment) {
    const auto c = make_experiment_config(
        parse_key_values("dataset_path = d.csv\nfamily = QAE\ndepth = 7\nlabels = 0,1\n"
                         "families = Circuit1, QAE\nlabel_sets = 0; 1; 0,1\n"),
        "/base");
    EXPECT_EQ(c.dataset_path, fs::path("/base/d.csv"));
    EXPECT_EQ(c.train.framework, Framework::QAE);
    EXPECT_EQ(c.train.circuit.depth, 7);
    EXPECT_EQ(c.labels, (std::set<int>{0, 1}));
    EXPECT_EQ(c.grid_families.size(), 2u);
    EXPECT_EQ(c.grid_label_sets.size(), 3u);
    EXPECT_EQ(c.train.learning_rate, 0.01);
    EXPECT_EQ(c.train.epochs, 150);

    EXPECT_THROW(make_experiment_config(parse_key_values("family = Circuit2\n")), ConfigError);
    EXPECT_THROW(make_experiment_config(parse_key_values("dataset_path = x\nbogus = 1\n")),
                 ConfigError);
    EXPECT_THROW(make_experiment_config(parse_key_values("dataset_path = x\ndepth = 0\n")),
                 ConfigError);
    EXPECT_THROW(make_experiment_config(parse_key_values("dataset_path = x\nloss = L3\n")),
                 ConfigError);
}

TEST(Config, shipped_configs_load) {
    for (const char *name : {"qnn_circuit2_digit0.conf", "qae_digit0.conf", "table_grid.conf",
                             "smoke.conf"}) {
        const fs::path p = testutil::data_dir().parent_path() / "configs" / name;
        const ExperimentConfig c = load_experiment_config(p);
        EXPECT_TRUE(fs::exists(c.dataset_path)) << name;
    }
}

TEST_F(ExperimentTest, train_writes_artifacts) {
    ExperimentConfig c = config("family = Circuit2\ndepth = 2\nepochs = 3\nn_train = 5\nn_test = 3\n");
    std::ostringstream out, err;
    ASSERT_EQ(cmd_train(c, {out, err}), 0) << err.str();
    for (const char *f : {"checkpoint.txt", "epoch_losses.csv", "test_metrics.csv", "manifest.txt"}) {
        EXPECT_TRUE(fs::exists(c.output_dir / f)) << f;
    }
    EXPECT_EQ(lines_of(slurp(c.output_dir / "epoch_losses.csv")).size(), 4u);
    EXPECT_EQ(lines_of(slurp(c.output_dir / "test_metrics.csv")).size(), 4u);
    EXPECT_EQ(out.str().rfind("Circuit2,QNN,", 0), 0u);
    EXPECT_NE(out.str().find(",24\n"), std::string::npos);

    std::ostringstream eout;
    ASSERT_EQ(cmd_eval(c, c.output_dir / "checkpoint.txt", {eout, err}), 0) << err.str();
    EXPECT_EQ(eout.str(), out.str());
}

TEST_F(ExperimentTest, summary_reports_param_count) {
    EXPECT_EQ(summary_line({Family::Circuit2, 6, 40}, Framework::QNN, 0.5, 0.25),
              "Circuit2,QNN,0.5,0.25,480");
}

TEST_F(ExperimentTest, missing_dataset_is_named) {
    ExperimentConfig c = config("epochs = 1\n");
    c.dataset_path = dir_ / "nope.csv";
    std::ostringstream out, err;
    EXPECT_EQ(cmd_train(c, {out, err}), 1);
    EXPECT_NE(err.str().find("dataset not found: " + c.dataset_path.string()), std::string::npos);
}

TEST_F(ExperimentTest, reconstruct_writes_three_images_per_sample) {
    const CircuitSpec spec{Family::Circuit2, 6, 2};
    write_checkpoint(dir_ / "ck.txt", spec, random_params(param_count(spec), 4));
    std::ostringstream out, err;
    ASSERT_EQ(cmd_reconstruct(dir_ / "ck.txt", testutil::data_dir() / "digits.csv", {0, 10},
                              dir_ / "rec", {out, err}),
              0)
        << err.str();
    for (const char *kind : {"input", "reconstruction", "reference"}) {
        for (const char *ext : {".pgm", ".csv"}) {
            EXPECT_TRUE(fs::exists(dir_ / "rec" / (std::string("sample_10_") + kind + ext)));
        }
    }
    double norm = 0.0;
    std::istringstream csv(slurp(dir_ / "rec" / "sample_10_reconstruction.csv"));
    int rows = 0;
    for (std::string line; std::getline(csv, line); ++rows) {
        std::istringstream cells(line);
        for (std::string cell; std::getline(cells, cell, ',');) {
            norm += std::stod(cell) * std::stod(cell);
        }
    }
    EXPECT_EQ(rows, 8);
    EXPECT_NEAR(norm, 1.0, 1e-12);
    EXPECT_EQ(lines_of(slurp(dir_ / "rec" / "sample_0_input.csv")).size(), 4u);

    EXPECT_EQ(cmd_reconstruct(dir_ / "ck.txt", testutil::data_dir() / "digits.csv", {5000},
                              dir_ / "rec", {out, err}),
              1);
}

TEST_F(ExperimentTest, qae_identity_reconstruction_is_the_low_res_image) {
    const CircuitSpec spec{Family::QAE, 6, 0};
    write_checkpoint(dir_ / "ck.txt", spec, ParamVector::zeros(2));
    std::ostringstream out, err;
    ASSERT_EQ(cmd_reconstruct(dir_ / "ck.txt", testutil::data_dir() / "digits.csv", {0},
                              dir_ / "rec", {out, err}),
              0)
        << err.str();
    const auto rec = lines_of(slurp(dir_ / "rec" / "sample_0_reconstruction.csv"));
    const auto input = lines_of(slurp(dir_ / "rec" / "sample_0_input.csv"));
    ASSERT_EQ(rec.size(), 8u);
    EXPECT_EQ(rec[0], input[0] + "," + input[1]);
    EXPECT_EQ(rec[1], input[2] + "," + input[3]);
    EXPECT_EQ(rec[7], "0,0,0,0,0,0,0,0");
}

TEST_F(ExperimentTest, grid_writes_one_row_per_cell) {
    ExperimentConfig c = config("depth = 1\nepochs = 1\nn_train = 3\nn_test = 2\n"
                                "families = Circuit2, Circuit3, QAE\nlabel_sets = 0\n");
    std::ostringstream out, err;
    ASSERT_EQ(cmd_grid(c, false, {out, err}), 0) << err.str();
    const auto rows = lines_of(slurp(c.output_dir / "grid_results.csv"));
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "family,framework,labels,avg_l2,avg_fidelity,param_count,status");
    EXPECT_EQ(rows[3].rfind("QAE,QAE,0,", 0), 0u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].substr(rows[i].size() - 3), ",ok") << rows[i];
    }
}

TEST_F(ExperimentTest, empty_grid_writes_header_only) {
    ExperimentConfig c = config("epochs = 1\n");
    std::ostringstream out, err;
    ASSERT_EQ(cmd_grid(c, false, {out, err}), 0);
    EXPECT_EQ(slurp(c.output_dir / "grid_results.csv"),
              "family,framework,labels,avg_l2,avg_fidelity,param_count,status\n");
}

TEST_F(ExperimentTest, parallel_grid_matches_serial_and_reruns_are_identical) {
    ExperimentConfig c = config("depth = 2\nepochs = 2\nn_train = 3\nn_test = 2\n"
                                "families = Circuit2, Circuit3\nlabel_sets = 0; 1\n");
    std::ostringstream out, err;
    ASSERT_EQ(cmd_grid(c, false, {out, err}), 0);
    const std::string serial = slurp(c.output_dir / "grid_results.csv");
    ASSERT_EQ(cmd_grid(c, true, {out, err}), 0);
    EXPECT_EQ(slurp(c.output_dir / "grid_results.csv"), serial);
}

TEST_F(ExperimentTest, train_reruns_are_byte_identical) {
    ExperimentConfig c = config("family = Circuit3\ndepth = 3\nepochs = 4\nn_train = 4\nn_test = 2\n");
    std::ostringstream out, err;
    ASSERT_EQ(cmd_train(c, {out, err}), 0);
    const std::string losses = slurp(c.output_dir / "epoch_losses.csv");
    const std::string metrics = slurp(c.output_dir / "test_metrics.csv");
    const std::string ckpt = slurp(c.output_dir / "checkpoint.txt");
    ASSERT_EQ(cmd_train(c, {out, err}), 0);
    EXPECT_EQ(slurp(c.output_dir / "epoch_losses.csv"), losses);
    EXPECT_EQ(slurp(c.output_dir / "test_metrics.csv"), metrics);
    EXPECT_EQ(slurp(c.output_dir / "checkpoint.txt"), ckpt);
}

TEST_F(ExperimentTest, unusable_cell_is_reported_not_fatal) {
    ExperimentConfig c = config("depth = 1\nepochs = 1\nn_train = 500\nn_test = 2\n"
                                "families = Circuit2\nlabel_sets = 0\n");
    std::ostringstream out, err;
    ASSERT_EQ(cmd_grid(c, false, {out, err}), 0);
    const auto rows = lines_of(slurp(c.output_dir / "grid_results.csv"));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NE(rows[1].find("\"error: "), std::string::npos);
}
