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

#ifndef CLINR_SEARCH_H
#define CLINR_SEARCH_H

#include <cstdint>
#include <deque>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "clinr/circuit.h"
#include "clinr/estimator.h"
#include "clinr/noise.h"
#include "clinr/program.h"
#include "clinr/proxy.h"

namespace clinr {

using BigInt = boost::multiprecision::cpp_int;

/// Deterministic child seed of (seed, stream, index).
uint64_t derive_seed(uint64_t seed, uint64_t stream, uint64_t index);

/// Row-major r x r matrix over GF(2).
using Gf2Matrix = std::vector<std::vector<uint8_t>>;

/// Row i of the result is the product of the rows v_j with m[i][j] = 1.
VerificationSequence alpha(const Gf2Matrix &m, const VerificationSequence &v);

Gf2Matrix gf2_multiply(const Gf2Matrix &a, const Gf2Matrix &b);
bool gf2_invertible(const Gf2Matrix &m);

/// Ordered independent r-tuples in a rank-2n group: prod_{i<r} (2^{2n} - 2^i).
BigInt count_sequences(size_t n, size_t r);
/// |GL_r(Z2)| = prod_{i<r} (2^r - 2^i).
BigInt gl_order(size_t r);
/// Rank-r subgroups of a rank-2n group: count_sequences(n, r) / gl_order(r).
BigInt count_subgroups(size_t n, size_t r);
/// Ordered r-tuples of non-identity elements of a rank-r group: (2^r - 1)^r.
BigInt count_nontrivial_sequences(size_t r);

/// Bounded FIFO of keys.
class TabuList {
   public:
    using Key = std::vector<uint64_t>;

    explicit TabuList(size_t capacity) : capacity_(capacity) {
    }

    size_t capacity() const {
        return capacity_;
    }
    size_t size() const {
        return keys_.size();
    }
    const std::deque<Key> &keys() const {
        return keys_;
    }
    bool contains(const Key &key) const;
    /// Appends `key` unless present, then drops the oldest key if over capacity.
    void push(const Key &key);

   private:
    size_t capacity_;
    std::deque<Key> keys_;
};

/// Subgroup key: fingerprint of the canonical form.
TabuList::Key subgroup_key(const GeneratorSet &g);

struct SearchParams {
    size_t r = 4;
    /// Tabu list capacity (l).
    size_t tabu_capacity = 10;
    /// Candidates per iteration.
    size_t m = 5;
    size_t i_max = 100;
    uint64_t shots = 50000;
    uint64_t seed = 1;
    /// Stop once this many logical error rate evaluations were spent; 0 means no limit.
    size_t max_evaluations = 0;

    /// Throws std::invalid_argument.
    void validate() const;
};

struct CostSample {
    double p_log = 0;
    double std_error = 0;
};

/// Logical error rate estimate of the program built from a verification sequence.
using CostFunction = std::function<CostSample(const VerificationSequence &v, uint64_t seed)>;

/// estimate_plog(build_clinr(c, v), ...).
CostFunction clinr_plog_cost(const Circuit &c, const NoiseParams &params, uint64_t shots,
                             EstimatorOptions options = {});

struct TraceRecord {
    /// 1-based count of logical error rate evaluations.
    size_t eval_index;
    double p_log;
    double std_error;
    double best_so_far;
    std::string candidate_key;
    bool accepted;
};

struct OptimizationTrace {
    std::vector<TraceRecord> records;

    size_t evaluations() const {
        return records.size();
    }
    /// Columns eval_index, p_log, stderr, best_so_far, candidate_key, accepted.
    std::string csv() const;
};

/// Rows joined by '/'.
std::string sequence_key_string(const VerificationSequence &v);

/// r uniform elements of <s>, resampled until independent and free of the identity.
VerificationSequence random_verification_sequence(const GeneratorSet &s, size_t r, std::mt19937_64 &rng);

struct GlobalResult {
    VerificationSequence best;
    double best_cost = 0;
    OptimizationTrace trace;
};

/// Tabu search over ordered verification sequences with elements in <s_gens>.
GlobalResult global_optimize(const GeneratorSet &s_gens, const SearchParams &params, const CostFunction &cost);

struct ProxyResult {
    /// Canonical generators of the best subgroup found.
    GeneratorSet subgroup;
    double proxy_value = 0;
    size_t proxy_evaluations = 0;
};

/// Tabu search over rank-r subgroups of <s_gens> driven by the proxy cost.
ProxyResult proxy_optimize(const GeneratorSet &s_gens, const OmegaTable &omega, const SearchParams &params);

struct TwoStepResult {
    ProxyResult stage1;
    GlobalResult stage2;
};

/// proxy_optimize, then global_optimize inside the subgroup it returns.
TwoStepResult two_step_optimize(const GeneratorSet &s_gens, const OmegaTable &omega, const SearchParams &params,
                                const CostFunction &cost);

}  // namespace clinr

#endif
