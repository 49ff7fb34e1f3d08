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
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qrecon/ansatz.hpp"
#include "qrecon/dataset.hpp"
#include "qrecon/encoding.hpp"
#include "qrecon/statevector.hpp"

namespace qrecon {

enum class LossKind { L1, L2, Fidelity };
enum class Framework { QNN, QAE };
enum class OptimizerKind { Adam, SGD };
enum class GradientEngine { Adjoint, FiniteDifference };

/// Where L1/L2 training losses are measured. Amplitude compares the complex
/// output amplitudes with the (real, non-negative) target state, so the loss
/// also pins down the output phases. Magnitude compares magnitude-decoded
/// images and is blind to phase.
enum class LossDomain { Amplitude, Magnitude };

struct Objective {
    LossKind kind = LossKind::L2;
    LossDomain domain = LossDomain::Amplitude;
};

std::string_view loss_name(LossKind kind);
std::string_view framework_name(Framework framework);
std::string_view optimizer_name(OptimizerKind kind);
std::string_view domain_name(LossDomain domain);
std::string_view engine_name(GradientEngine engine);
LossKind parse_loss(std::string_view name);
Framework parse_framework(std::string_view name);
OptimizerKind parse_optimizer(std::string_view name);
LossDomain parse_domain(std::string_view name);
GradientEngine parse_engine(std::string_view name);

/// Raised when a sample's downsampled image is all zero and cannot be encoded.
class SkippedSample : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Raised when the training loss stops being finite.
class TrainingDiverged : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Image losses over n pixels: mean |y - f| and mean (y - f)^2.
double loss_l1(const ImageMatrix &pred, const ImageMatrix &ref);
double loss_l2(const ImageMatrix &pred, const ImageMatrix &ref);
/// 1 - |<out|ref>|^2
double loss_fidelity(const StateVector &out, const StateVector &ref);

struct Reconstruction {
    ImageMatrix image;
    StateVector state;
};

/// downsample -> encode (4 qubits) -> |00> (x) psi -> U(theta) -> decode 8x8.
Reconstruction qnn_forward(const Sample &sample, const CircuitSpec &spec, const ParamVector &theta);

struct QaeTrainOutput {
    ImageMatrix out_img;     // decode(U(theta) encode(8x8))
    ImageMatrix target_img;  // decode(|00> (x) encode(downsample))
    StateVector out_state;
    StateVector target_state;
};

QaeTrainOutput qae_train_forward(const Sample &sample, const CircuitSpec &spec,
                                 const ParamVector &theta);

/// downsample -> encode (4 qubits) -> |00> (x) psi -> U^dagger(theta) -> decode 8x8.
Reconstruction qae_reconstruct(const Sample &sample, const CircuitSpec &spec,
                               const ParamVector &theta);

/// The framework's evaluation-time reconstruction (qnn_forward or qae_reconstruct).
Reconstruction reconstruct(Framework framework, const Sample &sample, const CircuitSpec &spec,
                           const ParamVector &theta);

struct TrainConfig {
    CircuitSpec circuit;
    Framework framework = Framework::QNN;
    LossKind loss = LossKind::L2;
    LossDomain loss_domain = LossDomain::Amplitude;
    int epochs = 150;
    double learning_rate = 0.01;
    OptimizerKind optimizer = OptimizerKind::Adam;
    std::uint64_t seed = 0;
    GradientEngine gradient_engine = GradientEngine::Adjoint;
    double fd_step = 1e-5;
    bool eval_every_epoch = false;

    void validate() const;
    Objective objective() const { return {loss, loss_domain}; }
};

/// Training-time view of one sample: circuit input plus loss targets.
struct PreparedSample {
    std::size_t index = 0;
    StateVector input;
    StateVector target_state;
    ImageMatrix target_image;
};

/// Builds the training pair for the configured framework. Throws SkippedSample
/// for all-zero images.
PreparedSample prepare_sample(Framework framework, const Sample &sample, int num_qubits);

/// Mean loss over the non-skipped samples of `batch`.
double batch_loss(const TrainConfig &config, std::span<const Sample> batch,
                  const ParamVector &theta);

/// Gradient of batch_loss with the configured engine.
std::vector<double> gradient(const TrainConfig &config, std::span<const Sample> batch,
                             const ParamVector &theta);

struct LossAndGradient {
    double loss = 0.0;
    std::vector<double> grad;
};

/// Loss and reverse-mode gradient over prepared samples; summation runs in
/// sample order.
LossAndGradient adjoint_loss_and_gradient(const CircuitSpec &spec, const Objective &loss,
                                          std::span<const PreparedSample> batch,
                                          const ParamVector &theta);

double prepared_batch_loss(const CircuitSpec &spec, const Objective &loss,
                           std::span<const PreparedSample> batch, const ParamVector &theta);

class AdamOptimizer {
  public:
    AdamOptimizer(std::size_t num_params, double learning_rate, double beta1 = 0.9,
                  double beta2 = 0.999, double epsilon = 1e-8);
    void step(std::span<double> params, std::span<const double> grad);

  private:
    double lr_, beta1_, beta2_, eps_;
    double beta1_pow_ = 1.0;
    double beta2_pow_ = 1.0;
    std::vector<double> m_, v_;
};

/// Uniform angles in [0, 2pi) from a 64-bit Mersenne Twister.
ParamVector random_params(std::size_t count, std::uint64_t seed);

struct SampleMetrics {
    std::size_t sample_index = 0;
    int label = 0;
    double l2 = 0.0;
    double fidelity = 0.0;
};

struct EvalResult {
    double avg_l2 = 0.0;
    double avg_fidelity = 0.0;
    std::vector<SampleMetrics> per_sample;
    std::size_t skipped = 0;
};

/// L2 against normalize(reference) and fidelity against encode(reference),
/// averaged over test samples.
EvalResult evaluate(const CircuitSpec &spec, const ParamVector &theta,
                    std::span<const Sample> test, Framework framework);

struct TrainReport {
    std::vector<double> epoch_losses;
    std::vector<double> epoch_test_fidelity;  // filled when eval_every_epoch is set
    std::vector<SampleMetrics> test_results;
    double avg_l2 = 0.0;
    double avg_fidelity = 0.0;
    ParamVector final_params;
    std::size_t skipped_train = 0;
    std::size_t skipped_test = 0;
    std::vector<std::string> warnings;
};

TrainReport train(const TrainConfig &config, const DatasetSplit &split);

/// `epoch,loss` CSV.
void write_epoch_losses(const std::filesystem::path &path, const TrainReport &report);
/// `sample_index,label,l2,fidelity` CSV.
void write_test_metrics(const std::filesystem::path &path,
                        std::span<const SampleMetrics> metrics);

}  // namespace qrecon
