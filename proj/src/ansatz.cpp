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

#include "qrecon/ansatz.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qrecon {

namespace {

// Rotation sequence applied to each qubit within one layer.
std::span<const GateKind> rotation_pattern(Family family) {
    static constexpr GateKind kC1[] = {GateKind::RX, GateKind::RY, GateKind::RX, GateKind::RY};
    static constexpr GateKind kC2[] = {GateKind::RX, GateKind::RY};
    static constexpr GateKind kC3[] = {GateKind::RY};
    switch (family) {
    case Family::Circuit1:
        return kC1;
    case Family::Circuit2:
    case Family::QAE:
        return kC2;
    case Family::Circuit3:
        return kC3;
    }
    throw std::logic_error("unknown family");
}

GateKind entangler(Family family) {
    return family == Family::Circuit3 ? GateKind::CNOT : GateKind::CZ;
}

}  // namespace

std::string_view family_name(Family family) {
    switch (family) {
    case Family::Circuit1:
        return "Circuit1";
    case Family::Circuit2:
        return "Circuit2";
    case Family::Circuit3:
        return "Circuit3";
    case Family::QAE:
        return "QAE";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    for (Family f : {Family::Circuit1, Family::Circuit2, Family::Circuit3, Family::QAE}) {
        if (name == family_name(f)) {
            return f;
        }
    }
    throw std::invalid_argument("unknown circuit family '" + std::string(name) + "'");
}

void CircuitSpec::validate() const {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("circuit qubit count " + std::to_string(num_qubits) +
                                    " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    if (depth < 0) {
        throw std::invalid_argument("circuit depth must be non-negative");
    }
    if (family == Family::QAE && num_qubits < 2) {
        throw std::invalid_argument("QAE circuit needs at least two qubits");
    }
}

std::size_t params_per_layer(Family family, int num_qubits) {
    return rotation_pattern(family).size() * static_cast<std::size_t>(num_qubits);
}

std::size_t trailing_param_count(Family family) { return family == Family::QAE ? 2 : 0; }

std::size_t param_count(const CircuitSpec &spec) {
    spec.validate();
    return params_per_layer(spec.family, spec.num_qubits) * static_cast<std::size_t>(spec.depth) +
           trailing_param_count(spec.family);
}

void check_params(const CircuitSpec &spec, const ParamVector &theta) {
    const std::size_t expected = param_count(spec);
    if (theta.size() != expected) {
        throw std::invalid_argument("parameter vector has " + std::to_string(theta.size()) +
                                    " entries, circuit expects " + std::to_string(expected));
    }
    for (double v : theta.values()) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("non-finite circuit parameter");
        }
    }
}

std::vector<std::pair<int, int>> ring_pairs(int num_qubits) {
    std::vector<std::pair<int, int>> pairs;
    if (num_qubits == 2) {
        pairs.emplace_back(0, 1);
    } else if (num_qubits > 2) {
        for (int q = 0; q < num_qubits; ++q) {
            pairs.emplace_back(q, (q + 1) % num_qubits);
        }
    }
    return pairs;
}

std::vector<GateOp> build_layer(const CircuitSpec &spec, int layer_index,
                                std::span<const double> layer_params) {
    spec.validate();
    if (layer_index < 0 || layer_index >= spec.depth) {
        throw std::out_of_range("layer index " + std::to_string(layer_index) +
                                " outside circuit depth");
    }
    const std::size_t per_layer = params_per_layer(spec.family, spec.num_qubits);
    if (layer_params.size() != per_layer) {
        throw std::invalid_argument("layer expects " + std::to_string(per_layer) +
                                    " parameters, got " + std::to_string(layer_params.size()));
    }
    const auto pattern = rotation_pattern(spec.family);
    std::vector<GateOp> gates;
    gates.reserve(per_layer + static_cast<std::size_t>(spec.num_qubits));
    std::size_t k = 0;
    for (int q = 0; q < spec.num_qubits; ++q) {
        for (GateKind kind : pattern) {
            gates.push_back(GateOp{kind, layer_params[k++], q, -1});
        }
    }
    const GateKind ent = entangler(spec.family);
    for (auto [c, t] : ring_pairs(spec.num_qubits)) {
        gates.push_back(GateOp{ent, 0.0, t, c});
    }
    return gates;
}

std::vector<TapeEntry> lower_circuit(const CircuitSpec &spec, const ParamVector &theta) {
    check_params(spec, theta);
    const std::size_t per_layer = params_per_layer(spec.family, spec.num_qubits);
    std::vector<TapeEntry> tape;
    int p = 0;
    for (int layer = 0; layer < spec.depth; ++layer) {
        const auto slice = theta.values().subspan(static_cast<std::size_t>(p), per_layer);
        for (const GateOp &g : build_layer(spec, layer, slice)) {
            tape.push_back({g, is_rotation(g.kind) ? p++ : -1});
        }
    }
    if (spec.family == Family::QAE) {
        for (int q = 0; q < 2; ++q) {
            tape.push_back({GateOp::ry(q, theta[static_cast<std::size_t>(p)]), p});
            ++p;
        }
    }
    return tape;
}

StateVector apply_circuit(StateVector state, const CircuitSpec &spec, const ParamVector &theta) {
    if (state.num_qubits() != spec.num_qubits) {
        throw std::invalid_argument("state has " + std::to_string(state.num_qubits()) +
                                    " qubits, circuit acts on " +
                                    std::to_string(spec.num_qubits));
    }
    for (const TapeEntry &e : lower_circuit(spec, theta)) {
        state.apply(e.gate);
    }
    return state;
}

StateVector apply_circuit_adjoint(StateVector state, const CircuitSpec &spec,
                                  const ParamVector &theta) {
    if (state.num_qubits() != spec.num_qubits) {
        throw std::invalid_argument("state has " + std::to_string(state.num_qubits()) +
                                    " qubits, circuit acts on " +
                                    std::to_string(spec.num_qubits));
    }
    const auto tape = lower_circuit(spec, theta);
    for (auto it = tape.rbegin(); it != tape.rend(); ++it) {
        state.apply(it->gate.inverse());
    }
    return state;
}

void write_checkpoint(const std::filesystem::path &path, const CircuitSpec &spec,
                      const ParamVector &theta) {
    check_params(spec, theta);
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
    }
    out << family_name(spec.family) << ',' << spec.num_qubits << ',' << spec.depth << '\n';
    char buf[40];
    for (double v : theta.values()) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << '\n';
    }
    if (!out) {
        throw std::runtime_error("failed writing checkpoint: " + path.string());
    }
}

Checkpoint read_checkpoint(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open checkpoint: " + path.string());
    }
    std::string header;
    if (!std::getline(in, header)) {
        throw std::runtime_error("empty checkpoint: " + path.string());
    }
    Checkpoint ck;
    {
        std::stringstream ss(header);
        std::string family, qubits, depth;
        if (!std::getline(ss, family, ',') || !std::getline(ss, qubits, ',') ||
            !std::getline(ss, depth)) {
            throw std::runtime_error("malformed checkpoint header: '" + header + "'");
        }
        try {
            ck.spec.family = parse_family(family);
            ck.spec.num_qubits = std::stoi(qubits);
            ck.spec.depth = std::stoi(depth);
        } catch (const std::exception &e) {
            throw std::runtime_error("malformed checkpoint header '" + header + "': " + e.what());
        }
        ck.spec.validate();
    }
    std::vector<double> values;
    std::string line;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(line, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || line.find_first_not_of(" \t\r", used) != std::string::npos) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": not a number: '" + line + "'");
        }
        values.push_back(v);
    }
    ck.theta = ParamVector(std::move(values));
    check_params(ck.spec, ck.theta);
    return ck;
}

}  // namespace qrecon
