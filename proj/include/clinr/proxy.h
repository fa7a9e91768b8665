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

#ifndef CLINR_PROXY_H
#define CLINR_PROXY_H

#include <string>
#include <vector>

#include "clinr/circuit.h"
#include "clinr/noise.h"
#include "clinr/pauli.h"

namespace clinr {

struct OmegaEntry {
    /// End-of-preparation Pauli produced by one single fault.
    PauliOp output_error;
    double weight_prob;
    bool in_s_perp;
};

/// Propagated single faults of a resource-preparation circuit.
struct OmegaTable {
    std::vector<OmegaEntry> entries;
    GeneratorSet s_generators;
    double total_mass = 0;

    size_t width() const {
        return s_generators.width();
    }

    /// CSV with columns pauli_string, p_tilde, in_S_perp.
    std::string csv() const;
};

/// Tabulates every (depolarizing location, error) pair of schedule_faults(prep), including idles.
OmegaTable precompute_omega(const Circuit &prep, const NoiseParams &params);

/// Sum of p_tilde over entries that commute with every row of `v` but not with S.
double proxy(const GeneratorSet &v, const OmegaTable &t);

/// Pairwise (cascade) summation.
double pairwise_sum(const double *values, size_t count);

}  // namespace clinr

#endif
