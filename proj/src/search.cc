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

#include "clinr/search.h"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace clinr {

namespace {

constexpr size_t kMaxRedraws = 100;

constexpr uint64_t kStreamGlobal = 0x61;
constexpr uint64_t kStreamProxy = 0x62;
constexpr uint64_t kStreamTwoStep = 0x63;
constexpr uint64_t kStreamEval = 0x64;

std::mt19937_64 make_rng(uint64_t seed, uint64_t stream) {
    return std::mt19937_64(derive_seed(seed, stream, 0));
}

void check_range(size_t n, size_t r) {
    if (r > 2 * n) {
        throw std::invalid_argument("r = " + std::to_string(r) + " exceeds 2n = " + std::to_string(2 * n));
    }
}

BigInt pow2(size_t k) {
    return BigInt(1) << k;
}

bool has_identity_row(const VerificationSequence &v) {
    return std::any_of(v.begin(), v.end(), [](const PauliOp &p) { return p.is_identity(); });
}

GlobalResult global_optimize_stream(const GeneratorSet &s_gens, const SearchParams &params, const CostFunction &cost,
                                    uint64_t stream) {
    params.validate();
    auto rng = make_rng(params.seed, stream);
    const size_t r = params.r;

    GlobalResult result;
    auto &trace = result.trace;
    auto budget_left = [&] { return params.max_evaluations == 0 || trace.evaluations() < params.max_evaluations; };
    auto evaluate = [&](const VerificationSequence &v) {
        auto sample = cost(v, derive_seed(params.seed, stream ^ kStreamEval, trace.evaluations() + 1));
        trace.records.push_back(
            {trace.evaluations() + 1, sample.p_log, sample.std_error, 0.0, sequence_key_string(v), false});
        return sample;
    };

    VerificationSequence v_opt = random_verification_sequence(s_gens, r, rng);
    double p_opt = evaluate(v_opt).p_log;
    trace.records.back().accepted = true;
    trace.records.back().best_so_far = p_opt;

    TabuList tabu(params.tabu_capacity);
    std::uniform_int_distribution<size_t> pick_row(0, r - 1);
    for (size_t i = 0; i < params.i_max && budget_left(); i++) {
        std::vector<VerificationSequence> candidates;
        const size_t j = pick_row(rng);
        for (size_t k = 0; k < params.m; k++) {
            for (size_t attempt = 0; attempt < kMaxRedraws; attempt++) {
                VerificationSequence v = v_opt;
                v[j] = sample_uniform_element(s_gens, rng);
                if (!v[j].is_identity() && rank(v) == r) {
                    candidates.push_back(std::move(v));
                    break;
                }
            }
        }
        for (const auto &v : candidates) {
            if (tabu.contains(v.fingerprint())) {
                continue;
            }
            if (!budget_left()) {
                break;
            }
            double p_v = evaluate(v).p_log;
            if (p_v < p_opt) {
                v_opt = v;
                p_opt = p_v;
                trace.records.back().accepted = true;
            }
            trace.records.back().best_so_far = p_opt;
        }
        tabu.push(v_opt.fingerprint());
    }
    result.best = std::move(v_opt);
    result.best_cost = p_opt;
    return result;
}

}  // namespace

uint64_t derive_seed(uint64_t seed, uint64_t stream, uint64_t index) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(stream),
                      static_cast<uint32_t>(index), static_cast<uint32_t>(index >> 32)};
    uint32_t out[2];
    seq.generate(out, out + 2);
    return (uint64_t{out[1]} << 32) | out[0];
}

VerificationSequence alpha(const Gf2Matrix &m, const VerificationSequence &v) {
    if (m.size() != v.size()) {
        throw std::invalid_argument("alpha: matrix has " + std::to_string(m.size()) + " rows, sequence has " +
                                    std::to_string(v.size()));
    }
    VerificationSequence out(v.width());
    for (const auto &row : m) {
        if (row.size() != v.size()) {
            throw std::invalid_argument("alpha: matrix is not square");
        }
        PauliOp p(v.width());
        for (size_t j = 0; j < row.size(); j++) {
            if (row[j] & 1) {
                p *= v[j];
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

Gf2Matrix gf2_multiply(const Gf2Matrix &a, const Gf2Matrix &b) {
    const size_t inner = b.size();
    const size_t cols = inner == 0 ? 0 : b[0].size();
    Gf2Matrix out(a.size(), std::vector<uint8_t>(cols, 0));
    for (size_t i = 0; i < a.size(); i++) {
        if (a[i].size() != inner) {
            throw std::invalid_argument("gf2_multiply: dimension mismatch");
        }
        for (size_t k = 0; k < inner; k++) {
            if (a[i][k] & 1) {
                for (size_t j = 0; j < cols; j++) {
                    out[i][j] ^= b[k][j] & 1;
                }
            }
        }
    }
    return out;
}

bool gf2_invertible(const Gf2Matrix &m) {
    const size_t r = m.size();
    GeneratorSet rows(r);
    for (const auto &row : m) {
        if (row.size() != r) {
            return false;
        }
        PauliOp p(r);
        for (size_t j = 0; j < r; j++) {
            p.set_x(j, row[j] & 1);
        }
        rows.push_back(std::move(p));
    }
    return rank(rows) == r;
}

BigInt count_sequences(size_t n, size_t r) {
    check_range(n, r);
    BigInt total = 1;
    for (size_t i = 0; i < r; i++) {
        total *= pow2(2 * n) - pow2(i);
    }
    return total;
}

BigInt gl_order(size_t r) {
    BigInt total = 1;
    for (size_t i = 0; i < r; i++) {
        total *= pow2(r) - pow2(i);
    }
    return total;
}

BigInt count_subgroups(size_t n, size_t r) {
    return count_sequences(n, r) / gl_order(r);
}

BigInt count_nontrivial_sequences(size_t r) {
    return boost::multiprecision::pow(pow2(r) - 1, static_cast<unsigned>(r));
}

bool TabuList::contains(const Key &key) const {
    return std::find(keys_.begin(), keys_.end(), key) != keys_.end();
}

void TabuList::push(const Key &key) {
    if (!contains(key)) {
        keys_.push_back(key);
    }
    while (keys_.size() > capacity_) {
        keys_.pop_front();
    }
}

TabuList::Key subgroup_key(const GeneratorSet &g) {
    return canonical_form(g).fingerprint();
}

void SearchParams::validate() const {
    if (r == 0 || tabu_capacity == 0 || m == 0 || shots == 0) {
        throw std::invalid_argument("search parameters r, l, m and shots must be positive");
    }
}

CostFunction clinr_plog_cost(const Circuit &c, const NoiseParams &params, uint64_t shots, EstimatorOptions options) {
    return [c, params, shots, options](const VerificationSequence &v, uint64_t seed) {
        auto result = estimate_plog(build_clinr(c, v), params, shots, seed, options);
        return CostSample{result.p_log, result.std_error};
    };
}

std::string OptimizationTrace::csv() const {
    std::string out = "eval_index,p_log,stderr,best_so_far,candidate_key,accepted\n";
    char buf[128];
    for (const auto &rec : records) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,", rec.eval_index, rec.p_log, rec.std_error,
                      rec.best_so_far);
        out += buf;
        out += rec.candidate_key;
        out += rec.accepted ? ",1\n" : ",0\n";
    }
    return out;
}

std::string sequence_key_string(const VerificationSequence &v) {
    std::string out;
    for (size_t k = 0; k < v.size(); k++) {
        if (k) {
            out += '/';
        }
        out += v[k].str();
    }
    return out;
}

VerificationSequence random_verification_sequence(const GeneratorSet &s, size_t r, std::mt19937_64 &rng) {
    if (r > rank(s)) {
        throw std::invalid_argument("cannot draw " + std::to_string(r) + " independent elements from a rank " +
                                    std::to_string(rank(s)) + " group");
    }
    while (true) {
        VerificationSequence v(s.width());
        for (size_t k = 0; k < r; k++) {
            v.push_back(sample_uniform_element(s, rng));
        }
        if (!has_identity_row(v) && rank(v) == r) {
            return v;
        }
    }
}

GlobalResult global_optimize(const GeneratorSet &s_gens, const SearchParams &params, const CostFunction &cost) {
    return global_optimize_stream(s_gens, params, cost, kStreamGlobal);
}

ProxyResult proxy_optimize(const GeneratorSet &s_gens, const OmegaTable &omega, const SearchParams &params) {
    params.validate();
    auto rng = make_rng(params.seed, kStreamProxy);
    const size_t r = params.r;
    const size_t s_rank = rank(s_gens);

    ProxyResult result;
    VerificationSequence v_opt = random_verification_sequence(s_gens, r, rng);
    double p_opt = proxy(v_opt, omega);
    result.proxy_evaluations = 1;

    TabuList tabu(params.tabu_capacity);
    for (size_t i = 0; i < params.i_max; i++) {
        std::vector<VerificationSequence> candidates;
        // The shared r-1 rows must be independent for any candidate to reach rank r.
        VerificationSequence shared(s_gens.width());
        bool shared_ok = false;
        for (size_t attempt = 0; attempt < kMaxRedraws && !shared_ok; attempt++) {
            shared = VerificationSequence(s_gens.width());
            for (size_t k = 0; k + 1 < r; k++) {
                shared.push_back(sample_uniform_element(v_opt, rng));
            }
            shared_ok = rank(shared) == r - 1;
        }
        if (shared_ok && s_rank > r) {
            for (size_t j = 0; j < params.m; j++) {
                PauliOp last = sample_uniform_element(s_gens, rng);
                while (in_span(last, v_opt)) {
                    last = sample_uniform_element(s_gens, rng);
                }
                VerificationSequence v = shared;
                v.push_back(std::move(last));
                candidates.push_back(std::move(v));
            }
        }
        for (const auto &v : candidates) {
            if (tabu.contains(subgroup_key(v))) {
                continue;
            }
            double p_v = proxy(v, omega);
            result.proxy_evaluations++;
            if (p_v < p_opt) {
                v_opt = v;
                p_opt = p_v;
            }
        }
        tabu.push(subgroup_key(v_opt));
    }
    result.subgroup = canonical_form(v_opt);
    result.proxy_value = p_opt;
    return result;
}

TwoStepResult two_step_optimize(const GeneratorSet &s_gens, const OmegaTable &omega, const SearchParams &params,
                                const CostFunction &cost) {
    TwoStepResult result;
    result.stage1 = proxy_optimize(s_gens, omega, params);
    result.stage2 = global_optimize_stream(result.stage1.subgroup, params, cost, kStreamTwoStep);
    return result;
}

}  // namespace clinr
