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

#include "qrecon/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace qrecon {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_qubit_count(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count " + std::to_string(num_qubits) +
                                    " outside supported range [1, " +
                                    std::to_string(kMaxQubits) + "]");
    }
}

// Visits every index pair (i0, i1) that differs only in the bit `mask`.
template <class F> void for_each_pair(std::size_t dim, std::size_t mask, F &&f) {
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & mask) {
            continue;
        }
        f(i, i | mask);
    }
}

void apply_2x2(std::span<Complex> amps, std::size_t mask, Complex m00, Complex m01,
               Complex m10, Complex m11) {
    for_each_pair(amps.size(), mask, [&](std::size_t i0, std::size_t i1) {
        const Complex a0 = amps[i0];
        const Complex a1 = amps[i1];
        amps[i0] = m00 * a0 + m01 * a1;
        amps[i1] = m10 * a0 + m11 * a1;
    });
}

}  // namespace

std::string_view gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::RX:
        return "RX";
    case GateKind::RY:
        return "RY";
    case GateKind::RZ:
        return "RZ";
    case GateKind::CZ:
        return "CZ";
    case GateKind::CNOT:
        return "CNOT";
    }
    return "?";
}

GateOp GateOp::inverse() const {
    GateOp inv = *this;
    if (is_rotation(kind)) {
        inv.angle = -angle;
    }
    return inv;
}

void validate_gate(const GateOp &gate, int num_qubits) {
    if (gate.target < 0 || gate.target >= num_qubits) {
        throw std::invalid_argument(std::string(gate_name(gate.kind)) + ": target qubit " +
                                    std::to_string(gate.target) + " out of range");
    }
    if (is_rotation(gate.kind)) {
        if (!std::isfinite(gate.angle)) {
            throw std::invalid_argument(std::string(gate_name(gate.kind)) +
                                        ": non-finite angle");
        }
        return;
    }
    if (gate.control < 0 || gate.control >= num_qubits) {
        throw std::invalid_argument(std::string(gate_name(gate.kind)) + ": control qubit " +
                                    std::to_string(gate.control) + " out of range");
    }
    if (gate.control == gate.target) {
        throw std::invalid_argument(std::string(gate_name(gate.kind)) +
                                    ": control equals target");
    }
}

void apply_gate_inplace(std::span<Complex> amps, int num_qubits, const GateOp &gate) {
    const std::size_t tmask = qubit_mask(gate.target, num_qubits);
    switch (gate.kind) {
    case GateKind::RX: {
        const double c = std::cos(gate.angle / 2);
        const double s = std::sin(gate.angle / 2);
        apply_2x2(amps, tmask, c, -kI * s, -kI * s, c);
        break;
    }
    case GateKind::RY: {
        const double c = std::cos(gate.angle / 2);
        const double s = std::sin(gate.angle / 2);
        apply_2x2(amps, tmask, c, -s, s, c);
        break;
    }
    case GateKind::RZ: {
        const Complex lo = std::polar(1.0, -gate.angle / 2);
        const Complex hi = std::polar(1.0, gate.angle / 2);
        for_each_pair(amps.size(), tmask, [&](std::size_t i0, std::size_t i1) {
            amps[i0] *= lo;
            amps[i1] *= hi;
        });
        break;
    }
    case GateKind::CZ: {
        const std::size_t both = tmask | qubit_mask(gate.control, num_qubits);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if ((i & both) == both) {
                amps[i] = -amps[i];
            }
        }
        break;
    }
    case GateKind::CNOT: {
        const std::size_t cmask = qubit_mask(gate.control, num_qubits);
        for_each_pair(amps.size(), tmask, [&](std::size_t i0, std::size_t i1) {
            if (i0 & cmask) {
                std::swap(amps[i0], amps[i1]);
            }
        });
        break;
    }
    }
}

void apply_generator_inplace(std::span<Complex> amps, int num_qubits, const GateOp &gate) {
    const std::size_t tmask = qubit_mask(gate.target, num_qubits);
    switch (gate.kind) {
    case GateKind::RX:
        for_each_pair(amps.size(), tmask,
                      [&](std::size_t i0, std::size_t i1) { std::swap(amps[i0], amps[i1]); });
        break;
    case GateKind::RY:
        for_each_pair(amps.size(), tmask, [&](std::size_t i0, std::size_t i1) {
            const Complex a0 = amps[i0];
            amps[i0] = -kI * amps[i1];
            amps[i1] = kI * a0;
        });
        break;
    case GateKind::RZ:
        for_each_pair(amps.size(), tmask,
                      [&](std::size_t, std::size_t i1) { amps[i1] = -amps[i1]; });
        break;
    default:
        throw std::logic_error("gate has no rotation generator");
    }
}

Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("inner product of vectors with different dimensions");
    }
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

StateVector::StateVector(int num_qubits, std::vector<Complex> amplitudes,
                         double norm_tolerance)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    check_qubit_count(num_qubits);
    if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
        throw std::invalid_argument("amplitude count " + std::to_string(amplitudes_.size()) +
                                    " is not 2^" + std::to_string(num_qubits));
    }
    for (const Complex &a : amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw std::invalid_argument("non-finite amplitude");
        }
    }
    if (std::abs(norm() - 1.0) > norm_tolerance) {
        throw std::invalid_argument("state is not normalized (norm " +
                                    std::to_string(norm()) + ")");
    }
}

double StateVector::norm() const {
    double acc = 0.0;
    for (const Complex &a : amplitudes_) {
        acc += std::norm(a);
    }
    return std::sqrt(acc);
}

void StateVector::apply(const GateOp &gate) {
    validate_gate(gate, num_qubits_);
    apply_gate_inplace(amplitudes_, num_qubits_, gate);
}

void StateVector::apply_global_phase(double phi) {
    const Complex phase = std::polar(1.0, phi);
    for (Complex &a : amplitudes_) {
        a *= phase;
    }
}

StateVector basis_state(int num_qubits, std::size_t index) {
    check_qubit_count(num_qubits);
    const std::size_t dim = std::size_t{1} << num_qubits;
    if (index >= dim) {
        throw std::out_of_range("basis index " + std::to_string(index) +
                                " out of range for " + std::to_string(num_qubits) +
                                " qubits");
    }
    std::vector<Complex> amps(dim);
    amps[index] = 1.0;
    return StateVector(num_qubits, std::move(amps));
}

StateVector apply_gate(StateVector state, const GateOp &gate) {
    state.apply(gate);
    return state;
}

double fidelity(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("fidelity of states with different qubit counts");
    }
    return std::clamp(std::norm(inner_product(a.amplitudes(), b.amplitudes())), 0.0, 1.0);
}

StateVector tensor(const StateVector &a, const StateVector &b) {
    const int n = a.num_qubits() + b.num_qubits();
    if (n > kMaxQubits) {
        throw std::invalid_argument("tensor product exceeds " + std::to_string(kMaxQubits) +
                                    " qubits");
    }
    std::vector<Complex> amps;
    amps.reserve(a.dimension() * b.dimension());
    for (const Complex &x : a.amplitudes()) {
        for (const Complex &y : b.amplitudes()) {
            amps.push_back(x * y);
        }
    }
    return StateVector(n, std::move(amps));
}

}  // namespace qrecon
