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

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qrecon/statevector.hpp"

namespace qrecon {

/// Layered ansatz families. Every layer is a block of single-qubit rotations
/// followed by a closed-ring entangler over (q, q+1 mod n):
///   Circuit1: RX RY RX RY per qubit, CZ ring
///   Circuit2: RX RY per qubit, CZ ring
///   Circuit3: RY per qubit, CNOT ring
///   QAE:      Circuit2 layers plus one trailing RY on each trash qubit
///             (qubits 0 and 1, where the pipelines park the ancilla).
enum class Family { Circuit1, Circuit2, Circuit3, QAE };

std::string_view family_name(Family family);
Family parse_family(std::string_view name);

struct CircuitSpec {
    Family family = Family::Circuit2;
    int num_qubits = 6;
    int depth = 40;

    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;

    bool operator==(const CircuitSpec &) const = default;
};

/// Flat trainable angles, layer-major then qubit-major then rotation order.
class ParamVector {
  public:
    ParamVector() = default;
    explicit ParamVector(std::vector<double> values) : values_(std::move(values)) {}

    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double &operator[](std::size_t i) { return values_[i]; }

    static ParamVector zeros(std::size_t n) { return ParamVector(std::vector<double>(n, 0.0)); }

    bool operator==(const ParamVector &) const = default;

  private:
    std::vector<double> values_;
};

std::size_t params_per_layer(Family family, int num_qubits);
std::size_t trailing_param_count(Family family);
std::size_t param_count(const CircuitSpec &spec);

/// Throws unless theta has exactly param_count(spec) finite entries.
void check_params(const CircuitSpec &spec, const ParamVector &theta);

/// Entangling pairs (control, target) of one layer's ring.
std::vector<std::pair<int, int>> ring_pairs(int num_qubits);

/// Gate list of layer `layer_index` (U_i) bound to `layer_params`.
std::vector<GateOp> build_layer(const CircuitSpec &spec, int layer_index,
                                std::span<const double> layer_params);

/// One gate of a lowered circuit. `param_index` is -1 for fixed gates.
struct TapeEntry {
    GateOp gate;
    int param_index = -1;
};

/// Whole circuit U(theta) = U_1 ... U_L as an ordered gate list (first
/// element is applied first), with angles bound from theta.
std::vector<TapeEntry> lower_circuit(const CircuitSpec &spec, const ParamVector &theta);

StateVector apply_circuit(StateVector state, const CircuitSpec &spec, const ParamVector &theta);
StateVector apply_circuit_adjoint(StateVector state, const CircuitSpec &spec,
                                  const ParamVector &theta);

// Checkpoint text format: "family,num_qubits,depth" header, then one angle per
// line printed with 17 significant digits.
void write_checkpoint(const std::filesystem::path &path, const CircuitSpec &spec,
                      const ParamVector &theta);

struct Checkpoint {
    CircuitSpec spec;
    ParamVector theta;
};

Checkpoint read_checkpoint(const std::filesystem::path &path);

}  // namespace qrecon
