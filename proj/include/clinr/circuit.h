// Copyright 2026 The CliNR Optimizer Authors
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

#ifndef CLINR_CIRCUIT_H
#define CLINR_CIRCUIT_H

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace clinr {

enum class GateKind : uint8_t {
    PREP_Z,
    H,
    S,
    SDG,
    X,
    Z,
    CX,
    CZ,
    MEAS_X,
    MEAS_Z,
    BARRIER,
};

/// Text mnemonic used by the circuit format (e.g. "CX", "MZ", "PREPZ").
std::string_view gate_name(GateKind kind);
size_t gate_arity(GateKind kind);
bool is_unitary(GateKind kind);
bool is_measurement(GateKind kind);
bool is_two_qubit(GateKind kind);

struct Op {
    GateKind kind;
    uint32_t q0 = 0;
    uint32_t q1 = 0;
    /// Record slot for measurements.
    uint32_t record = 0;

    bool operator==(const Op &other) const = default;
};

class CircuitError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// An ordered list of operations on a fixed-width register with classical record slots.
///
/// Qubits and record slots are 0-based here and 1-based in the text format.
class Circuit {
   public:
    Circuit() = default;
    explicit Circuit(size_t width) : width_(width) {
    }

    size_t width() const {
        return width_;
    }
    size_t record_count() const {
        return record_count_;
    }
    size_t size() const {
        return ops_.size();
    }
    bool empty() const {
        return ops_.empty();
    }
    const std::vector<Op> &ops() const {
        return ops_;
    }
    const Op &operator[](size_t k) const {
        return ops_[k];
    }

    /// Appends a validated op. Measurements must use the next unused record slot.
    void append(const Op &op);
    void append(GateKind kind, uint32_t q0 = 0, uint32_t q1 = 0);
    /// Appends a measurement into a fresh record slot and returns that slot.
    uint32_t measure(GateKind kind, uint32_t q);
    /// Appends every op of `other`, with its qubits mapped through `qubit_map`
    /// and its record slots shifted past the existing ones.
    void append_mapped(const Circuit &other, const std::vector<uint32_t> &qubit_map);
    void append_circuit(const Circuit &other);

    bool has_measurements() const;
    size_t count(GateKind kind) const;

    static Circuit from_text(std::string_view text);
    std::string str() const;

    bool operator==(const Circuit &other) const = default;

   private:
    size_t width_ = 0;
    size_t record_count_ = 0;
    std::vector<Op> ops_;
};

Circuit parse_circuit(std::string_view text);
std::string serialize_circuit(const Circuit &c);

/// First `s` operations of `c`.
Circuit truncate(const Circuit &c, size_t s);

/// Inverse of a measurement-free circuit (reversed order, S and SDG swapped).
Circuit inverse(const Circuit &c);

}  // namespace clinr

#endif
