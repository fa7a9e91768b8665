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

#ifndef CLINR_PROGRAM_H
#define CLINR_PROGRAM_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clinr/circuit.h"
#include "clinr/pauli.h"

namespace clinr {

using VerificationSequence = GeneratorSet;

enum class Phase : uint8_t {
    PREP,
    VERIFY,
    INJECT,
    FINAL,
};
std::string_view phase_name(Phase phase);

/// Gate-accounting label attached to every op of a program.
enum class OpContext : uint8_t {
    CIRCUIT,
    CPREP,
    RESOURCE,
    VERIFY_DATA,
    VERIFY_ANCILLA,
    TELEPORT,
    CPREP_INV,
    READOUT,
};
std::string_view context_name(OpContext context);

/// How the logical output of a program is read.
enum class OutputMode : uint8_t {
    /// Residual Pauli frame on `output_qubits` after correction.
    FRAME,
    /// Z-basis readout bits `output_records` after correction (X part of the correction flips bits).
    Z_READOUT,
};

/// Single-qubit layer used to set the input state of the deferred CZNR experiment.
enum class PrepGate : uint8_t {
    IDENTITY,
    /// Full rotation about X (a Pauli X).
    G_PI,
    /// Half rotation about X (phi = 0).
    G_PI2_X,
    /// Half rotation about Y (phi = pi/2).
    G_PI2_Y,
};

struct CPrepLayer {
    std::vector<PrepGate> gates;

    /// Clifford realization on {H, S, SDG, X}.
    Circuit circuit() const;
};

/// A prepare / verify / inject program with its restart and correction rules.
struct ClinrProgram {
    Circuit circuit;
    std::vector<Phase> phases;
    std::vector<OpContext> contexts;
    /// Logical register size.
    size_t n = 0;
    /// Verification sequence length.
    size_t r = 0;
    /// Op index a restart re-enters; empty when acceptance is decided in post-processing.
    std::optional<size_t> restart_boundary;
    std::vector<uint32_t> verification_records;
    /// Stabilizer index (0..r-1) measured by each verification record.
    std::vector<uint32_t> verification_groups;
    OutputMode output_mode = OutputMode::FRAME;
    /// Logical qubit i lives on output_qubits[i] at the end (FRAME) or is read out into
    /// output_records[i] (Z_READOUT).
    std::vector<uint32_t> output_qubits;
    std::vector<uint32_t> output_records;
    /// Where logical qubit i of the input state starts.
    std::vector<uint32_t> input_qubits;
    /// Qubits holding the resource state.
    std::vector<uint32_t> resource_qubits;
    /// Linear correction: each record whose outcome is 1 contributes its n-qubit Pauli.
    std::vector<std::pair<uint32_t, PauliOp>> correction_rule;
    /// Present for programs containing a C_prep layer (and its inverse).
    std::optional<CPrepLayer> cprep;

    /// Correction Pauli (width n) for a full list of record outcomes.
    PauliOp correction(const std::vector<uint8_t> &records) const;

    void append(const Op &op, Phase phase, OpContext context);
    void append(GateKind kind, Phase phase, OpContext context, uint32_t q0 = 0, uint32_t q1 = 0);
    uint32_t measure(GateKind kind, uint32_t q, Phase phase, OpContext context);
    /// Appends a measurement-free circuit with its qubits mapped through `qubit_map`.
    void append_mapped(const Circuit &c, const std::vector<uint32_t> &qubit_map, Phase phase, OpContext context);

    /// Circuit text with `# PHASE <name>` markers at every phase change.
    std::string str() const;
    /// JSON sidecar: n, r, restart boundary, records, output and correction rule (qubits and
    /// record slots 1-based; the restart boundary is a 0-based op index).
    std::string descriptor_json() const;
};

/// 2n-qubit preparation of C_R |Phi_n> with C_R = I (x) C: PREPZ on all qubits, then
/// H_i CX_{i, n+i} per pair, then c on qubits n..2n-1.
Circuit build_resource_prep(const Circuit &c);

/// The 2n-qubit unitary I (x) c applied to the Bell pairs.
Circuit resource_unitary(const Circuit &c);

/// Appends a stabilizer measurement of `p` (data qubits data_map[j]) using `ancilla`:
/// optional PREPZ, H, one controlled Pauli per support qubit in ascending order, and
/// optionally the MX readout. Controlled-Y is SDG . CX . S on the data qubit.
/// Returns the record slot, or nothing when `measure` is false.
std::optional<uint32_t> append_stabilizer_measurement(ClinrProgram &prog, const PauliOp &p,
                                                      const std::vector<uint32_t> &data_map, uint32_t ancilla,
                                                      bool reset, bool measure);

/// Standalone measurement of `p` on a register of width p.width() + 1 with the ancilla last.
Circuit build_stabilizer_measurement(const PauliOp &p);

/// Checks that `v` is r independent, nontrivial elements of <stabilizers>. Throws std::invalid_argument.
void validate_verification_sequence(const VerificationSequence &v, const GeneratorSet &stabilizers);

/// CliNR implementation of the n-qubit measurement-free circuit `c`.
///
/// Register layout: resource qubits 0..2n-1 (Bell halves i and n+i), input qubits 2n..3n-1,
/// verification ancilla 3n. The output register is qubits n..2n-1.
ClinrProgram build_clinr(const Circuit &c, const VerificationSequence &v);

/// CZNR implementation of a circuit made of CZ gates, consuming the n-qubit state C|+^n>.
///
/// Register layout: resource qubits 0..n-1 (also the output), input n..2n-1, ancilla 2n.
ClinrProgram build_cznr(const Circuit &c, const VerificationSequence &v);

/// The direct implementation: `c` itself, with its whole register as input and output.
ClinrProgram make_direct_program(const Circuit &c);

enum class WeightClass : uint8_t {
    LOW,
    HIGH,
};
std::string_view weight_class_name(WeightClass w);
WeightClass parse_weight_class(std::string_view text);

/// The complete-graph CZ circuit prod_{i<j} CZ_{i,j}.
Circuit complete_graph_cz(size_t n);

/// Random C_prep layer: per qubit bits (a, b, c); a = c = 1 gives G_pi, otherwise c = 1
/// gives G_pi/2 with phase (a + b/2) pi, otherwise identity.
CPrepLayer build_cprep(size_t n, uint64_t seed);

/// r stabilizers of C|+^n> for the complete graph: Y_i Y_j on disjoint pairs (LOW) or
/// X_i prod_{j != i} Z_j on distinct i (HIGH).
VerificationSequence cznr_verification_family(size_t n, size_t r, WeightClass weight, uint64_t seed);

/// Deferred-measurement CZNR experiment implementing C^2 with two teleportations.
///
/// Registers: R_in 0..n-1, R_1 n..2n-1, R_2 2n..3n-1, verification ancillas 3n..3n+2r-1
/// (r per resource register). All qubits are measured in Z at the very end.
ClinrProgram build_deferred_cznr_experiment(size_t n, size_t r, WeightClass weight, uint64_t seed);

/// Direct implementation of the same experiment: C_prep, C, C, C_prep^dagger, readout.
ClinrProgram build_direct_cznr_experiment(size_t n, uint64_t seed);

/// Closed-form post-processing correction X^x Z^z = C_prep C X^(b1 xor b0) C C_prep^dagger.
PauliOp closed_form_two_teleport_correction(const CPrepLayer &cprep, const Circuit &c,
                                            const std::vector<uint8_t> &b0, const std::vector<uint8_t> &b1);

/// Runs the program noiselessly on a sign-tracking tableau simulator over `samples` random
/// inputs and random measurement branches, and returns how many runs failed to implement
/// `logical` (for FRAME programs) or failed to read out all zeros (for Z_READOUT programs).
/// Verification outcomes must be deterministic for a run to pass.
size_t count_noiseless_failures(const ClinrProgram &prog, const Circuit &logical, size_t samples, uint64_t seed);

}  // namespace clinr

#endif
