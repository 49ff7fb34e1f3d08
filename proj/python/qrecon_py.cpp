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

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <bit>

#include "qrecon/experiment.hpp"
#include "qrecon/training.hpp"

namespace py = pybind11;
using namespace qrecon;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;
using DArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

StateVector to_state(const CArray &a) {
    if (a.ndim() != 1) {
        throw std::invalid_argument("state must be a 1-d array");
    }
    const auto n = static_cast<std::size_t>(a.shape(0));
    if (n == 0 || !std::has_single_bit(n)) {
        throw std::invalid_argument("state length must be a power of two");
    }
    return StateVector(std::countr_zero(n), std::vector<Complex>(a.data(), a.data() + n));
}

CArray from_state(const StateVector &s) {
    CArray out(static_cast<py::ssize_t>(s.dimension()));
    std::copy(s.amplitudes().begin(), s.amplitudes().end(), out.mutable_data());
    return out;
}

ImageMatrix to_image(const DArray &a) {
    if (a.ndim() != 2) {
        throw std::invalid_argument("image must be a 2-d array");
    }
    return ImageMatrix(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)),
                       std::vector<double>(a.data(), a.data() + a.size()));
}

DArray from_image(const ImageMatrix &img) {
    DArray out({img.rows(), img.cols()});
    std::copy(img.pixels().begin(), img.pixels().end(), out.mutable_data());
    return out;
}

ParamVector to_params(const DArray &a) {
    return ParamVector(std::vector<double>(a.data(), a.data() + a.size()));
}

DArray from_params(const ParamVector &p) {
    DArray out(static_cast<py::ssize_t>(p.size()));
    std::copy(p.values().begin(), p.values().end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(_qrecon, m) {
    m.doc() = "Statevector simulation and variational image reconstruction.";
    m.attr("__version__") = std::string(version());

    py::enum_<Family>(m, "Family")
        .value("Circuit1", Family::Circuit1)
        .value("Circuit2", Family::Circuit2)
        .value("Circuit3", Family::Circuit3)
        .value("QAE", Family::QAE);
    py::enum_<LossKind>(m, "LossKind")
        .value("L1", LossKind::L1)
        .value("L2", LossKind::L2)
        .value("Fidelity", LossKind::Fidelity);
    py::enum_<LossDomain>(m, "LossDomain")
        .value("Amplitude", LossDomain::Amplitude)
        .value("Magnitude", LossDomain::Magnitude);
    py::enum_<Framework>(m, "Framework").value("QNN", Framework::QNN).value("QAE", Framework::QAE);
    py::enum_<OptimizerKind>(m, "OptimizerKind")
        .value("Adam", OptimizerKind::Adam)
        .value("SGD", OptimizerKind::SGD);
    py::enum_<GradientEngine>(m, "GradientEngine")
        .value("Adjoint", GradientEngine::Adjoint)
        .value("FiniteDifference", GradientEngine::FiniteDifference);

    py::class_<GateOp>(m, "GateOp")
        .def_static("rx", &GateOp::rx, py::arg("target"), py::arg("angle"))
        .def_static("ry", &GateOp::ry, py::arg("target"), py::arg("angle"))
        .def_static("rz", &GateOp::rz, py::arg("target"), py::arg("angle"))
        .def_static("cz", &GateOp::cz, py::arg("control"), py::arg("target"))
        .def_static("cnot", &GateOp::cnot, py::arg("control"), py::arg("target"))
        .def("inverse", &GateOp::inverse)
        .def_readonly("angle", &GateOp::angle)
        .def_readonly("target", &GateOp::target)
        .def_readonly("control", &GateOp::control)
        .def("__repr__", [](const GateOp &g) {
            return "GateOp(" + std::string(gate_name(g.kind)) + ", target=" +
                   std::to_string(g.target) + ", control=" + std::to_string(g.control) +
                   ", angle=" + std::to_string(g.angle) + ")";
        });

    m.def("basis_state", [](int n, std::size_t index) { return from_state(basis_state(n, index)); },
          py::arg("num_qubits"), py::arg("index"));
    m.def("apply_gate", [](const CArray &s, const GateOp &g) {
        return from_state(apply_gate(to_state(s), g));
    });
    m.def("fidelity", [](const CArray &a, const CArray &b) { return fidelity(to_state(a), to_state(b)); });
    m.def("tensor", [](const CArray &a, const CArray &b) {
        return from_state(tensor(to_state(a), to_state(b)));
    });

    py::class_<CircuitSpec>(m, "CircuitSpec")
        .def(py::init([](Family f, int n, int depth) {
                 CircuitSpec s{f, n, depth};
                 s.validate();
                 return s;
             }),
             py::arg("family"), py::arg("num_qubits") = 6, py::arg("depth") = 40)
        .def_readwrite("family", &CircuitSpec::family)
        .def_readwrite("num_qubits", &CircuitSpec::num_qubits)
        .def_readwrite("depth", &CircuitSpec::depth)
        .def("__eq__", [](const CircuitSpec &a, const CircuitSpec &b) { return a == b; });

    m.def("param_count", &param_count, py::arg("spec"));
    m.def("random_params", [](std::size_t n, std::uint64_t seed) { return from_params(random_params(n, seed)); },
          py::arg("count"), py::arg("seed"));
    m.def("apply_circuit",
          [](const CArray &s, const CircuitSpec &spec, const DArray &theta) {
              return from_state(apply_circuit(to_state(s), spec, to_params(theta)));
          },
          py::arg("state"), py::arg("spec"), py::arg("theta"));
    m.def("apply_circuit_adjoint",
          [](const CArray &s, const CircuitSpec &spec, const DArray &theta) {
              return from_state(apply_circuit_adjoint(to_state(s), spec, to_params(theta)));
          },
          py::arg("state"), py::arg("spec"), py::arg("theta"));
    m.def("write_checkpoint",
          [](const std::filesystem::path &p, const CircuitSpec &spec, const DArray &theta) {
              write_checkpoint(p, spec, to_params(theta));
          });
    m.def("read_checkpoint", [](const std::filesystem::path &p) {
        const Checkpoint ck = read_checkpoint(p);
        return py::make_tuple(ck.spec, from_params(ck.theta));
    });

    m.def("normalize", [](const DArray &img) { return from_image(normalize(to_image(img))); });
    m.def("amplitude_encode", [](const DArray &img) { return from_state(amplitude_encode(to_image(img))); });
    m.def("decode_to_image", [](const CArray &s, int rows, int cols) {
        return from_image(decode_to_image(to_state(s), rows, cols));
    });
    m.def("downsample", [](const DArray &img) { return from_image(downsample(to_image(img))); });

    py::class_<Sample>(m, "Sample")
        .def(py::init([](const DArray &img, int label, std::size_t index) {
                 return Sample{to_image(img), label, index};
             }),
             py::arg("image"), py::arg("label"), py::arg("index") = 0)
        .def_property_readonly("image", [](const Sample &s) { return from_image(s.image); })
        .def_readonly("label", &Sample::label)
        .def_readonly("index", &Sample::index);
    m.def("load_digits", &load_digits, py::arg("path"));

    py::class_<DatasetSplit>(m, "DatasetSplit")
        .def_readonly("train", &DatasetSplit::train)
        .def_readonly("test", &DatasetSplit::test)
        .def_readonly("label_filter", &DatasetSplit::label_filter)
        .def_readonly("seed", &DatasetSplit::seed);
    m.def("make_split", &make_split, py::arg("samples"), py::arg("labels"), py::arg("seed"),
          py::arg("n_train") = 50, py::arg("n_test") = 30);

    m.def("loss_l1", [](const DArray &a, const DArray &b) { return loss_l1(to_image(a), to_image(b)); });
    m.def("loss_l2", [](const DArray &a, const DArray &b) { return loss_l2(to_image(a), to_image(b)); });
    m.def("reconstruct",
          [](Framework fw, const Sample &s, const CircuitSpec &spec, const DArray &theta) {
              const Reconstruction r = reconstruct(fw, s, spec, to_params(theta));
              return py::make_tuple(from_image(r.image), from_state(r.state));
          },
          py::arg("framework"), py::arg("sample"), py::arg("spec"), py::arg("theta"));

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("circuit", &TrainConfig::circuit)
        .def_readwrite("framework", &TrainConfig::framework)
        .def_readwrite("loss", &TrainConfig::loss)
        .def_readwrite("loss_domain", &TrainConfig::loss_domain)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("optimizer", &TrainConfig::optimizer)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("gradient_engine", &TrainConfig::gradient_engine)
        .def_readwrite("fd_step", &TrainConfig::fd_step)
        .def_readwrite("eval_every_epoch", &TrainConfig::eval_every_epoch);

    m.def("gradient",
          [](const TrainConfig &c, const std::vector<Sample> &batch, const DArray &theta) {
              return gradient(c, batch, to_params(theta));
          },
          py::arg("config"), py::arg("batch"), py::arg("theta"));

    py::class_<SampleMetrics>(m, "SampleMetrics")
        .def_readonly("sample_index", &SampleMetrics::sample_index)
        .def_readonly("label", &SampleMetrics::label)
        .def_readonly("l2", &SampleMetrics::l2)
        .def_readonly("fidelity", &SampleMetrics::fidelity);

    py::class_<EvalResult>(m, "EvalResult")
        .def_readonly("avg_l2", &EvalResult::avg_l2)
        .def_readonly("avg_fidelity", &EvalResult::avg_fidelity)
        .def_readonly("per_sample", &EvalResult::per_sample)
        .def_readonly("skipped", &EvalResult::skipped);
    m.def("evaluate",
          [](const CircuitSpec &spec, const DArray &theta, const std::vector<Sample> &test,
             Framework fw) { return evaluate(spec, to_params(theta), test, fw); },
          py::arg("spec"), py::arg("theta"), py::arg("test"), py::arg("framework"));

    py::class_<TrainReport>(m, "TrainReport")
        .def_readonly("epoch_losses", &TrainReport::epoch_losses)
        .def_readonly("epoch_test_fidelity", &TrainReport::epoch_test_fidelity)
        .def_readonly("test_results", &TrainReport::test_results)
        .def_readonly("avg_l2", &TrainReport::avg_l2)
        .def_readonly("avg_fidelity", &TrainReport::avg_fidelity)
        .def_property_readonly("final_params",
                               [](const TrainReport &r) { return from_params(r.final_params); })
        .def_readonly("skipped_train", &TrainReport::skipped_train)
        .def_readonly("skipped_test", &TrainReport::skipped_test)
        .def_readonly("warnings", &TrainReport::warnings);
    m.def("train", &train, py::arg("config"), py::arg("split"),
          py::call_guard<py::gil_scoped_release>());

    py::register_exception<SkippedSample>(m, "SkippedSample", PyExc_ValueError);
    py::register_exception<TrainingDiverged>(m, "TrainingDiverged", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
}
