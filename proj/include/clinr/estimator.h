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

#ifndef CLINR_ESTIMATOR_H
#define CLINR_ESTIMATOR_H

#include <cstdint>
#include <map>
#include <vector>

#include "clinr/circuit.h"
#include "clinr/noise.h"
#include "clinr/pauli.h"
#include "clinr/program.h"

namespace clinr {

struct EstimatorOptions {
    /// Attempts per shot before the shot is declared a logical error.
    size_t r_max = 100;
    /// Input qubits accrue idle noise while the resource is prepared and verified.
    bool idle_input_during_prep = true;
    /// Verification outcomes never trigger a restart.
    bool ignore_verification = false;
    /// Worker threads; 0 picks the hardware concurrency.
    size_t threads = 0;
};

struct EstimateResult {
    double p_log = 0;
    double std_error = 0;
    double restart_rate = 0;
    uint64_t shots = 0;
    uint64_t errors = 0;
    uint64_t restarts = 0;
    uint64_t accepted_attempts = 0;
    uint64_t exhausted = 0;
    int plog_evaluations_consumed = 1;

    bool operator==(const EstimateResult &other) const = default;
};

/// Where a fault location sits relative to the restart loop.
enum class Region : uint8_t {
    /// Resampled on every attempt and discarded on restart.
    RESTARTABLE,
    /// Resampled on every attempt and kept (input idles while waiting).
    PERSISTENT,
    /// Sampled once, after acceptance.
    FINAL,
};

/// Linear map from single Pauli faults to verification and output bits.
///
/// Bit k < num_checks is verification record k of the program; the remaining bits are the
/// output functionals: (x, z) of the residual frame per logical qubit for FRAME programs, the
/// corrected readout bit per logical qubit for Z_READOUT programs. Every fault's effect is
/// precomputed by a single backward pass over the program.
class FaultEffectModel {
   public:
    struct Location {
        FaultLocation fault;
        Region region;
        uint32_t first_row;
        uint32_t num_errors;
    };

    FaultEffectModel(const ClinrProgram &prog, const NoiseParams &params, bool idle_input_during_prep = true);

    size_t num_checks() const {
        return num_checks_;
    }
    size_t num_outputs() const {
        return num_outputs_;
    }
    size_t words() const {
        return words_;
    }
    const std::vector<Location> &locations() const {
        return locations_;
    }
    /// Effect of error e (0-based, e < num_errors) at location i.
    const uint64_t *effect(size_t i, uint32_t e) const {
        return &rows_[(static_cast<size_t>(locations_[i].first_row) + e) * words_];
    }
    /// Mask of all output bits.
    const std::vector<uint64_t> &output_mask() const {
        return output_mask_;
    }
    /// Mask of the verification bits whose group index is below `keep_groups`.
    std::vector<uint64_t> check_mask(size_t keep_groups) const;

   private:
    size_t num_checks_ = 0;
    size_t num_outputs_ = 0;
    size_t words_ = 1;
    std::vector<uint32_t> groups_;
    std::vector<Location> locations_;
    std::vector<uint64_t> rows_;
    std::vector<uint64_t> output_mask_;
};

/// Monte-Carlo logical error rate with restarts. Shots are processed in fixed blocks with
/// one random stream per (seed, block), so results do not depend on the thread count.
EstimateResult estimate_plog(const ClinrProgram &prog, const NoiseParams &params, uint64_t shots, uint64_t seed,
                             const EstimatorOptions &options = {});
EstimateResult estimate_plog(const Circuit &c, const NoiseParams &params, uint64_t shots, uint64_t seed,
                             const EstimatorOptions &options = {});

struct PostselectedCounts {
    uint64_t shots = 0;
    uint64_t failed = 0;
    /// Logical errors among shots that passed the check mask.
    uint64_t errors = 0;
};

/// Single-pass sampling without restarts (all faults sampled once); for each entry of
/// `keep_groups`, counts shots whose verification bits in groups [0, keep) fire and logical
/// errors among the rest.
std::vector<PostselectedCounts> estimate_postselected(const ClinrProgram &prog, const NoiseParams &params,
                                                      uint64_t shots, uint64_t seed,
                                                      const std::vector<size_t> &keep_groups, size_t threads = 0);

/// Exact output-error distribution of a measurement-free circuit of width <= 8.
std::map<PauliOp, double> exact_output_distribution(const Circuit &c, const NoiseParams &params);

/// 1 - P(identity) of exact_output_distribution.
double exact_plog(const Circuit &c, const NoiseParams &params);

struct SingleFaultReport {
    double detected_mass = 0;
    double harmless_mass = 0;
    double logical_mass = 0;
    size_t detected = 0;
    size_t harmless = 0;
    size_t logical = 0;
};

/// Classifies every single PREP-phase fault supported on the resource register.
SingleFaultReport exhaustive_single_fault_check(const ClinrProgram &prog, const NoiseParams &params);

}  // namespace clinr

#endif
