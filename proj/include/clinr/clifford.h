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

#ifndef CLINR_CLIFFORD_H
#define CLINR_CLIFFORD_H

#include <cstdint>
#include <random>
#include <vector>

#include "clinr/circuit.h"
#include "clinr/pauli.h"

namespace clinr {

/// Conjugates a phase-free Pauli frame through one operation, in place.
///
/// Measurements leave the frame unchanged. PREP_Z discards the frame on its qubit.
void conjugate_frame(const Op &op, PauliOp &frame);

/// Pushes `p` through ops[from_index..end] and returns the output-frame Pauli.
PauliOp propagate(const Circuit &c, const PauliOp &p, size_t from_index = 0);

/// The linear map P -> U P U^dagger on the phase-free Pauli group, stored by the
/// images of X_0..X_{N-1} followed by Z_0..Z_{N-1}.
class SymplecticMap {
   public:
    SymplecticMap() = default;
    static SymplecticMap identity(size_t width);
    explicit SymplecticMap(std::vector<PauliOp> images);

    size_t width() const {
        return width_;
    }
    const PauliOp &image_x(size_t q) const {
        return images_[q];
    }
    const PauliOp &image_z(size_t q) const {
        return images_[width_ + q];
    }
    const std::vector<PauliOp> &images() const {
        return images_;
    }

    PauliOp apply(const PauliOp &p) const;
    /// Map equal to applying `first` and then `*this`.
    SymplecticMap after(const SymplecticMap &first) const;
    /// Conjugates every image by one more gate (applied after this map).
    void then(const Op &op);

    /// Checks [M(e_i), M(e_j)] == [e_i, e_j] on all basis pairs.
    bool is_symplectic() const;

    bool operator==(const SymplecticMap &other) const = default;

   private:
    size_t width_ = 0;
    std::vector<PauliOp> images_;
};

/// Matrix form of a measurement-free circuit. Throws CircuitError on measurements or preparations.
SymplecticMap as_symplectic(const Circuit &c);

/// Stabilizer generators of c_r |Phi_n>, where |Phi_n> is n Bell pairs on (i, n + i).
///
/// `c_r` is the 2n-qubit unitary applied to the Bell pairs. Row k < n comes from
/// X_k X_{n+k}; row n + k from Z_k Z_{n+k}.
GeneratorSet resource_stabilizers(const Circuit &c_r, size_t n);

/// Stabilizer generators of the state prepared by `prep` from |0...0>.
///
/// PREP_Z operations are allowed only on qubits not yet touched (they are no-ops on |0>).
GeneratorSet output_stabilizers(const Circuit &prep);

/// Uniformly random element of Sp(2n, GF(2)).
SymplecticMap random_symplectic(size_t n, std::mt19937_64 &rng);

/// Circuit over {H, S, SDG, CX} whose symplectic map equals `m`. Not gate-count optimal.
Circuit synthesize(const SymplecticMap &m);

/// Uniformly random phase-free n-qubit Clifford, compiled into {H, S, SDG, CX}.
Circuit random_clifford_circuit(size_t n, uint64_t seed);

}  // namespace clinr

#endif
