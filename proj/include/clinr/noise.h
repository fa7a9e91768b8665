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

#ifndef CLINR_NOISE_H
#define CLINR_NOISE_H

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "clinr/circuit.h"
#include "clinr/pauli.h"

namespace clinr {

/// Ion chain noise model.
///
/// Unitaries run one at a time; consecutive preparations form one layer and so do
/// consecutive measurements. Rates: two-qubit gate p, single-qubit gate or preparation
/// p/10, measurement flip p/10, idle during a unitary p/100, idle during a measurement
/// layer tau_m * p/100.
struct NoiseParams {
    double p = 1e-4;
    double tau_m = 30.0;

    double two_qubit_rate() const {
        return p;
    }
    double single_qubit_rate() const {
        return p / 10;
    }
    double measurement_flip_rate() const {
        return p / 10;
    }
    double idle_rate() const {
        return p / 100;
    }
    double measurement_idle_rate() const {
        return tau_m * p / 100;
    }

    /// Throws std::invalid_argument when a derived rate leaves [0, 1].
    void validate() const;
};

enum class FaultKind : uint8_t {
    GATE,
    IDLE,
    MEASUREMENT_FLIP,
};

struct FaultLocation {
    /// The fault acts right after ops[after_op].
    size_t after_op;
    FaultKind kind;
    /// Qubits hit by depolarizing kinds; empty for measurement flips.
    std::vector<uint32_t> support;
    /// Record slot flipped by MEASUREMENT_FLIP.
    uint32_t record = 0;
    double rate;

    size_t weight() const {
        return support.size();
    }
    /// 4^w - 1 for depolarizing kinds, 1 for a record flip.
    size_t num_errors() const;
    /// Probability of each individual error: rate / num_errors().
    double p_tilde() const {
        return rate / static_cast<double>(num_errors());
    }
};

/// Nontrivial Pauli number `e` (1 <= e < 4^w) on `support`: qubit k takes bits (e >> 2k) & 3
/// as (x, z) = (bit 0, bit 1).
PauliOp local_error(size_t width, const std::vector<uint32_t> &support, uint32_t e);

struct FaultEvent {
    size_t location;
    /// Full-register Pauli; identity for a record flip.
    PauliOp error;
    bool record_flip = false;
    uint32_t record = 0;
};

std::vector<FaultLocation> schedule_faults(const Circuit &c, const NoiseParams &params);

/// Independent Bernoulli(rate) per location; a firing location draws one of its errors uniformly.
std::vector<FaultEvent> sample_faults(const std::vector<FaultLocation> &locs, size_t width, std::mt19937_64 &rng);

/// Calls `visit(event, p_tilde)` once for every (location, nontrivial error) pair.
void for_each_single_fault(const std::vector<FaultLocation> &locs, size_t width,
                           const std::function<void(const FaultEvent &, double)> &visit);

std::vector<std::pair<FaultEvent, double>> enumerate_single_faults(const std::vector<FaultLocation> &locs,
                                                                   size_t width);

}  // namespace clinr

#endif
