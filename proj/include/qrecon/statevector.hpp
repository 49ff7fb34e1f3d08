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

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace qrecon {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 12;

enum class GateKind { RX, RY, RZ, CZ, CNOT };

std::string_view gate_name(GateKind kind);

inline bool is_rotation(GateKind kind) {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

/// A single gate instance. Qubit 0 is the most significant bit of the basis
/// index. Rotations use R_P(angle) = exp(-i * angle * P / 2).
struct GateOp {
    GateKind kind = GateKind::RX;
    double angle = 0.0;
    int target = 0;
    int control = -1;  // only meaningful for CZ / CNOT

    static GateOp rx(int target, double angle) { return {GateKind::RX, angle, target, -1}; }
    static GateOp ry(int target, double angle) { return {GateKind::RY, angle, target, -1}; }
    static GateOp rz(int target, double angle) { return {GateKind::RZ, angle, target, -1}; }
    static GateOp cz(int control, int target) { return {GateKind::CZ, 0.0, target, control}; }
    static GateOp cnot(int control, int target) { return {GateKind::CNOT, 0.0, target, control}; }

    /// The inverse gate: negated angle for rotations, the gate itself otherwise.
    GateOp inverse() const;
};

/// Throws std::invalid_argument if the gate does not fit an n-qubit register
/// or carries a non-finite angle.
void validate_gate(const GateOp &gate, int num_qubits);

/// Bit mask selecting `qubit` in a basis index of an n-qubit register.
inline std::size_t qubit_mask(int qubit, int num_qubits) {
    return std::size_t{1} << (num_qubits - 1 - qubit);
}

// Raw kernels over an amplitude buffer of length 2^num_qubits. They do not
// validate and do not require unit norm; adjoint sweeps reuse them on
// co-state vectors.
void apply_gate_inplace(std::span<Complex> amps, int num_qubits, const GateOp &gate);

/// Multiplies amps by the generator P of a rotation gate (X, Y or Z on the
/// target qubit).
void apply_generator_inplace(std::span<Complex> amps, int num_qubits, const GateOp &gate);

Complex inner_product(std::span<const Complex> a, std::span<const Complex> b);

/// Dense n-qubit pure state with unit norm.
class StateVector {
  public:
    /// Takes ownership of `amplitudes`; throws if the length is not 2^n or the
    /// norm deviates from 1 by more than `norm_tolerance`.
    StateVector(int num_qubits, std::vector<Complex> amplitudes,
                double norm_tolerance = 1e-8);

    int num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    const Complex &operator[](std::size_t i) const { return amplitudes_[i]; }

    double norm() const;

    /// In-place gate application on an owned value; validated.
    void apply(const GateOp &gate);

    /// Multiplies every amplitude by a unit-modulus phase.
    void apply_global_phase(double phi);

  private:
    int num_qubits_;
    std::vector<Complex> amplitudes_;
};

StateVector basis_state(int num_qubits, std::size_t index);

StateVector apply_gate(StateVector state, const GateOp &gate);

/// |<a|b>|^2, clamped to [0, 1].
double fidelity(const StateVector &a, const StateVector &b);

/// Kronecker product a (x) b; a occupies the high-order qubits.
StateVector tensor(const StateVector &a, const StateVector &b);

}  // namespace qrecon
