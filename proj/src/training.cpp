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

#include "qrecon/training.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

namespace qrecon {

namespace {

constexpr int kImageSide = 8;
constexpr int kFrameworkQubits = 6;

template <class E, std::size_t N>
E parse_enum(std::string_view name, const E (&values)[N], std::string_view (*namer)(E),
             const char *what) {
    for (E v : values) {
        if (name == namer(v)) {
            return v;
        }
    }
    throw std::invalid_argument(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

void check_same_shape(const ImageMatrix &a, const ImageMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("image loss on mismatched dimensions");
    }
}

void check_framework_spec(const CircuitSpec &spec) {
    spec.validate();
    if (spec.num_qubits != kFrameworkQubits) {
        throw std::invalid_argument("reconstruction pipelines run on 6 qubits, circuit has " +
                                    std::to_string(spec.num_qubits));
    }
}

/// |00> (x) encode(downsample(img)). The ancilla takes qubits 0-1, so the 4x4
/// image fills the leading 16 amplitudes.
StateVector low_res_state(const Sample &sample) {
    const ImageMatrix small = downsample(sample.image);
    if (small.norm() == 0.0) {
        throw SkippedSample("sample " + std::to_string(sample.index) +
                            " has an all-zero downsampled image");
    }
    return tensor(basis_state(2, 0), amplitude_encode(small));
}

StateVector full_res_state(const Sample &sample) {
    if (sample.image.norm() == 0.0) {
        throw SkippedSample("sample " + std::to_string(sample.index) + " is all zero");
    }
    return amplitude_encode(sample.image);
}

std::vector<Complex> run_tape(std::span<const TapeEntry> tape, const StateVector &input) {
    std::vector<Complex> psi(input.amplitudes().begin(), input.amplitudes().end());
    for (const TapeEntry &e : tape) {
        apply_gate_inplace(psi, input.num_qubits(), e.gate);
    }
    return psi;
}

/// Loss of one output amplitude vector; if `costate` is non-null it receives
/// dL/dRe(psi_i) + i dL/dIm(psi_i).
double sample_loss(const Objective &objective, std::span<const Complex> psi,
                   const PreparedSample &target, std::vector<Complex> *costate) {
    const std::size_t n = psi.size();
    if (costate) {
        costate->assign(n, Complex{});
    }
    if (objective.kind == LossKind::Fidelity) {
        const Complex overlap = inner_product(target.target_state.amplitudes(), psi);
        if (costate) {
            for (std::size_t i = 0; i < n; ++i) {
                (*costate)[i] = -2.0 * overlap * target.target_state[i];
            }
        }
        return 1.0 - std::norm(overlap);
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    const bool squared = objective.kind == LossKind::L2;
    double acc = 0.0;
    if (objective.domain == LossDomain::Amplitude) {
        // Residual psi_i - r_i against the real target amplitudes.
        for (std::size_t i = 0; i < n; ++i) {
            const Complex d = psi[i] - target.target_state[i];
            const double a = std::abs(d);
            acc += squared ? a * a : a;
            if (costate && (squared || a > 0.0)) {
                (*costate)[i] = squared ? 2.0 * d * inv_n : d / a * inv_n;
            }
        }
        return acc * inv_n;
    }
    const auto ref = target.target_image.pixels();
    for (std::size_t i = 0; i < n; ++i) {
        const double mag = std::abs(psi[i]);
        const double diff = mag - ref[i];
        double dmag = 0.0;
        if (squared) {
            acc += diff * diff;
            dmag = 2.0 * diff * inv_n;
        } else {
            acc += std::abs(diff);
            dmag = (diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0)) * inv_n;
        }
        // |psi| is not differentiable at 0; take the zero subgradient there.
        if (costate && mag > 0.0) {
            (*costate)[i] = dmag * psi[i] / mag;
        }
    }
    return acc * inv_n;
}

std::vector<PreparedSample> prepare_batch(Framework framework, std::span<const Sample> batch,
                                          int num_qubits, std::vector<std::string> *warnings) {
    std::vector<PreparedSample> out;
    out.reserve(batch.size());
    for (const Sample &s : batch) {
        try {
            out.push_back(prepare_sample(framework, s, num_qubits));
        } catch (const SkippedSample &e) {
            if (warnings) {
                warnings->push_back(std::string("skipping ") + e.what());
            }
        }
    }
    return out;
}

}  // namespace

std::string_view loss_name(LossKind kind) {
    switch (kind) {
    case LossKind::L1:
        return "L1";
    case LossKind::L2:
        return "L2";
    case LossKind::Fidelity:
        return "Fidelity";
    }
    return "?";
}

std::string_view framework_name(Framework framework) {
    return framework == Framework::QNN ? "QNN" : "QAE";
}

std::string_view optimizer_name(OptimizerKind kind) {
    return kind == OptimizerKind::Adam ? "Adam" : "SGD";
}

std::string_view domain_name(LossDomain domain) {
    return domain == LossDomain::Amplitude ? "Amplitude" : "Magnitude";
}

std::string_view engine_name(GradientEngine engine) {
    return engine == GradientEngine::Adjoint ? "Adjoint" : "FiniteDifference";
}

LossKind parse_loss(std::string_view name) {
    static constexpr LossKind kAll[] = {LossKind::L1, LossKind::L2, LossKind::Fidelity};
    return parse_enum(name, kAll, loss_name, "loss");
}

Framework parse_framework(std::string_view name) {
    static constexpr Framework kAll[] = {Framework::QNN, Framework::QAE};
    return parse_enum(name, kAll, framework_name, "framework");
}

OptimizerKind parse_optimizer(std::string_view name) {
    static constexpr OptimizerKind kAll[] = {OptimizerKind::Adam, OptimizerKind::SGD};
    return parse_enum(name, kAll, optimizer_name, "optimizer");
}

LossDomain parse_domain(std::string_view name) {
    static constexpr LossDomain kAll[] = {LossDomain::Amplitude, LossDomain::Magnitude};
    return parse_enum(name, kAll, domain_name, "loss domain");
}

GradientEngine parse_engine(std::string_view name) {
    static constexpr GradientEngine kAll[] = {GradientEngine::Adjoint,
                                              GradientEngine::FiniteDifference};
    return parse_enum(name, kAll, engine_name, "gradient engine");
}

double loss_l1(const ImageMatrix &pred, const ImageMatrix &ref) {
    check_same_shape(pred, ref);
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        acc += std::abs(ref.pixels()[i] - pred.pixels()[i]);
    }
    return acc / static_cast<double>(pred.size());
}

double loss_l2(const ImageMatrix &pred, const ImageMatrix &ref) {
    check_same_shape(pred, ref);
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = ref.pixels()[i] - pred.pixels()[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pred.size());
}

double loss_fidelity(const StateVector &out, const StateVector &ref) {
    return 1.0 - fidelity(out, ref);
}

Reconstruction qnn_forward(const Sample &sample, const CircuitSpec &spec, const ParamVector &theta) {
    check_framework_spec(spec);
    StateVector out = apply_circuit(low_res_state(sample), spec, theta);
    ImageMatrix img = decode_to_image(out, kImageSide, kImageSide);
    return {std::move(img), std::move(out)};
}

QaeTrainOutput qae_train_forward(const Sample &sample, const CircuitSpec &spec,
                                 const ParamVector &theta) {
    check_framework_spec(spec);
    if (spec.family != Family::QAE) {
        throw std::invalid_argument("QAE pipeline needs the QAE circuit family");
    }
    StateVector target = low_res_state(sample);
    StateVector out = apply_circuit(full_res_state(sample), spec, theta);
    ImageMatrix out_img = decode_to_image(out, kImageSide, kImageSide);
    ImageMatrix target_img = decode_to_image(target, kImageSide, kImageSide);
    return {std::move(out_img), std::move(target_img), std::move(out), std::move(target)};
}

Reconstruction qae_reconstruct(const Sample &sample, const CircuitSpec &spec,
                               const ParamVector &theta) {
    check_framework_spec(spec);
    if (spec.family != Family::QAE) {
        throw std::invalid_argument("QAE pipeline needs the QAE circuit family");
    }
    StateVector out = apply_circuit_adjoint(low_res_state(sample), spec, theta);
    ImageMatrix img = decode_to_image(out, kImageSide, kImageSide);
    return {std::move(img), std::move(out)};
}

Reconstruction reconstruct(Framework framework, const Sample &sample, const CircuitSpec &spec,
                           const ParamVector &theta) {
    return framework == Framework::QNN ? qnn_forward(sample, spec, theta)
                                       : qae_reconstruct(sample, spec, theta);
}

void TrainConfig::validate() const {
    circuit.validate();
    if (circuit.num_qubits != kFrameworkQubits) {
        throw std::invalid_argument("training runs on 6-qubit circuits");
    }
    if (framework == Framework::QAE && circuit.family != Family::QAE) {
        throw std::invalid_argument("QAE framework needs the QAE circuit family");
    }
    if (framework == Framework::QNN && circuit.family == Family::QAE) {
        throw std::invalid_argument("QNN framework needs Circuit1, Circuit2 or Circuit3");
    }
    if (epochs < 0) {
        throw std::invalid_argument("epochs must be non-negative");
    }
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw std::invalid_argument("learning rate must be positive");
    }
    if (!(fd_step > 0.0)) {
        throw std::invalid_argument("finite-difference step must be positive");
    }
}

PreparedSample prepare_sample(Framework framework, const Sample &sample, int num_qubits) {
    if (num_qubits != kFrameworkQubits) {
        throw std::invalid_argument("reconstruction pipelines run on 6 qubits");
    }
    if (framework == Framework::QNN) {
        StateVector target = full_res_state(sample);
        ImageMatrix target_img = decode_to_image(target, kImageSide, kImageSide);
        return {sample.index, low_res_state(sample), std::move(target), std::move(target_img)};
    }
    StateVector target = low_res_state(sample);
    ImageMatrix target_img = decode_to_image(target, kImageSide, kImageSide);
    return {sample.index, full_res_state(sample), std::move(target), std::move(target_img)};
}

double prepared_batch_loss(const CircuitSpec &spec, const Objective &loss,
                           std::span<const PreparedSample> batch, const ParamVector &theta) {
    if (batch.empty()) {
        throw std::invalid_argument("empty training batch");
    }
    const auto tape = lower_circuit(spec, theta);
    double total = 0.0;
    for (const PreparedSample &s : batch) {
        total += sample_loss(loss, run_tape(tape, s.input), s, nullptr);
    }
    return total / static_cast<double>(batch.size());
}

LossAndGradient adjoint_loss_and_gradient(const CircuitSpec &spec, const Objective &loss,
                                          std::span<const PreparedSample> batch,
                                          const ParamVector &theta) {
    if (batch.empty()) {
        throw std::invalid_argument("empty training batch");
    }
    const auto tape = lower_circuit(spec, theta);
    const int n = spec.num_qubits;
    LossAndGradient out;
    out.grad.assign(theta.size(), 0.0);
    std::vector<Complex> lambda;
    std::vector<Complex> scratch;
    for (const PreparedSample &s : batch) {
        std::vector<Complex> phi = run_tape(tape, s.input);
        out.loss += sample_loss(loss, phi, s, &lambda);
        // Walk the tape backwards. At entry k, phi is the state right after
        // gate k and lambda is the co-state pulled back through gates > k:
        //   dL/dtheta_k = 1/2 Im <lambda | P_k phi>.
        for (auto it = tape.rbegin(); it != tape.rend(); ++it) {
            if (it->param_index >= 0) {
                scratch = phi;
                apply_generator_inplace(scratch, n, it->gate);
                out.grad[static_cast<std::size_t>(it->param_index)] +=
                    0.5 * inner_product(lambda, scratch).imag();
            }
            const GateOp inv = it->gate.inverse();
            apply_gate_inplace(phi, n, inv);
            apply_gate_inplace(lambda, n, inv);
        }
    }
    const double scale = 1.0 / static_cast<double>(batch.size());
    out.loss *= scale;
    for (double &g : out.grad) {
        g *= scale;
    }
    return out;
}

double batch_loss(const TrainConfig &config, std::span<const Sample> batch,
                  const ParamVector &theta) {
    config.validate();
    const auto prepared = prepare_batch(config.framework, batch, config.circuit.num_qubits, nullptr);
    return prepared_batch_loss(config.circuit, config.objective(), prepared, theta);
}

namespace {

std::vector<double> finite_difference_gradient(const CircuitSpec &spec, const Objective &loss,
                                               std::span<const PreparedSample> batch,
                                               const ParamVector &theta, double h) {
    std::vector<double> grad(theta.size());
    ParamVector probe = theta;
    for (std::size_t j = 0; j < theta.size(); ++j) {
        probe[j] = theta[j] + h;
        const double up = prepared_batch_loss(spec, loss, batch, probe);
        probe[j] = theta[j] - h;
        const double down = prepared_batch_loss(spec, loss, batch, probe);
        probe[j] = theta[j];
        grad[j] = (up - down) / (2.0 * h);
    }
    return grad;
}

void check_finite(double loss) {
    if (!std::isfinite(loss)) {
        throw TrainingDiverged("training loss is not finite");
    }
}

}  // namespace

std::vector<double> gradient(const TrainConfig &config, std::span<const Sample> batch,
                             const ParamVector &theta) {
    config.validate();
    check_params(config.circuit, theta);
    const auto prepared = prepare_batch(config.framework, batch, config.circuit.num_qubits, nullptr);
    if (config.gradient_engine == GradientEngine::FiniteDifference) {
        check_finite(prepared_batch_loss(config.circuit, config.objective(), prepared, theta));
        return finite_difference_gradient(config.circuit, config.objective(), prepared, theta,
                                          config.fd_step);
    }
    auto lg = adjoint_loss_and_gradient(config.circuit, config.objective(), prepared, theta);
    check_finite(lg.loss);
    return std::move(lg.grad);
}

AdamOptimizer::AdamOptimizer(std::size_t num_params, double learning_rate, double beta1,
                             double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon), m_(num_params, 0.0),
      v_(num_params, 0.0) {}

void AdamOptimizer::step(std::span<double> params, std::span<const double> grad) {
    if (params.size() != m_.size() || grad.size() != m_.size()) {
        throw std::invalid_argument("optimizer size mismatch");
    }
    beta1_pow_ *= beta1_;
    beta2_pow_ *= beta2_;
    const double c1 = 1.0 - beta1_pow_;
    const double c2 = 1.0 - beta2_pow_;
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
        const double m_hat = m_[i] / c1;
        const double v_hat = v_[i] / c2;
        params[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
    }
}

ParamVector random_params(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> values(count);
    for (double &v : values) {
        // 53 random mantissa bits; std::uniform_real_distribution is not
        // reproducible across standard library implementations.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        v = u * 2.0 * std::numbers::pi;
    }
    return ParamVector(std::move(values));
}

EvalResult evaluate(const CircuitSpec &spec, const ParamVector &theta,
                    std::span<const Sample> test, Framework framework) {
    if (test.empty()) {
        throw std::invalid_argument("evaluation needs at least one test sample");
    }
    EvalResult result;
    for (const Sample &s : test) {
        try {
            const Reconstruction rec = reconstruct(framework, s, spec, theta);
            const StateVector ref_state = full_res_state(s);
            SampleMetrics m;
            m.sample_index = s.index;
            m.label = s.label;
            m.l2 = loss_l2(rec.image, normalize(s.image));
            m.fidelity = fidelity(rec.state, ref_state);
            result.per_sample.push_back(m);
        } catch (const SkippedSample &) {
            ++result.skipped;
        }
    }
    if (result.per_sample.empty()) {
        throw std::invalid_argument("every test sample was skipped");
    }
    for (const SampleMetrics &m : result.per_sample) {
        result.avg_l2 += m.l2;
        result.avg_fidelity += m.fidelity;
    }
    const double count = static_cast<double>(result.per_sample.size());
    result.avg_l2 /= count;
    result.avg_fidelity /= count;
    return result;
}

TrainReport train(const TrainConfig &config, const DatasetSplit &split) {
    config.validate();
    TrainReport report;
    const auto prepared =
        prepare_batch(config.framework, split.train, config.circuit.num_qubits, &report.warnings);
    report.skipped_train = split.train.size() - prepared.size();
    if (prepared.empty()) {
        throw std::invalid_argument("no usable training samples");
    }

    ParamVector theta = random_params(param_count(config.circuit), config.seed);
    AdamOptimizer adam(theta.size(), config.learning_rate);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        LossAndGradient lg;
        if (config.gradient_engine == GradientEngine::Adjoint) {
            lg = adjoint_loss_and_gradient(config.circuit, config.objective(), prepared, theta);
        } else {
            lg.loss = prepared_batch_loss(config.circuit, config.objective(), prepared, theta);
            check_finite(lg.loss);
            lg.grad = finite_difference_gradient(config.circuit, config.objective(), prepared, theta,
                                                 config.fd_step);
        }
        check_finite(lg.loss);
        report.epoch_losses.push_back(lg.loss);
        if (config.eval_every_epoch) {
            report.epoch_test_fidelity.push_back(
                evaluate(config.circuit, theta, split.test, config.framework).avg_fidelity);
        }
        if (config.optimizer == OptimizerKind::Adam) {
            adam.step(theta.values(), lg.grad);
        } else {
            for (std::size_t i = 0; i < theta.size(); ++i) {
                theta[i] -= config.learning_rate * lg.grad[i];
            }
        }
    }

    const EvalResult eval = evaluate(config.circuit, theta, split.test, config.framework);
    report.test_results = eval.per_sample;
    report.avg_l2 = eval.avg_l2;
    report.avg_fidelity = eval.avg_fidelity;
    report.skipped_test = eval.skipped;
    if (eval.skipped > 0) {
        report.warnings.push_back(std::to_string(eval.skipped) + " test samples skipped");
    }
    report.final_params = std::move(theta);
    return report;
}

void write_epoch_losses(const std::filesystem::path &path, const TrainReport &report) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << "epoch,loss\n";
    char buf[40];
    for (std::size_t i = 0; i < report.epoch_losses.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", report.epoch_losses[i]);
        out << i << ',' << buf << '\n';
    }
}

void write_test_metrics(const std::filesystem::path &path,
                        std::span<const SampleMetrics> metrics) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << "sample_index,label,l2,fidelity\n";
    char buf[80];
    for (const SampleMetrics &m : metrics) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", m.l2, m.fidelity);
        out << m.sample_index << ',' << m.label << ',' << buf << '\n';
    }
}

}  // namespace qrecon
