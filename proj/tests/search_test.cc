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
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "clinr/clifford.h"
#include "clinr/proxy.h"
#include "gtest/gtest.h"
#include "oracles.h"

using namespace clinr;
using clinr::testing::all_independent_sequences;
using clinr::testing::group_elements;
using clinr::testing::random_verification;

namespace {

const char *kThreeQubit = "WIDTH 3\nH 1\nCX 1 2\nCZ 1 3\n";

Gf2Matrix random_matrix(size_t r, std::mt19937_64 &rng) {
    Gf2Matrix m(r, std::vector<uint8_t>(r));
    for (auto &row : m) {
        for (auto &b : row) {
            b = rng() & 1;
        }
    }
    return m;
}

std::vector<Gf2Matrix> all_invertible(size_t r) {
    std::vector<Gf2Matrix> out;
    for (uint64_t bits = 0; bits < (uint64_t{1} << (r * r)); bits++) {
        Gf2Matrix m(r, std::vector<uint8_t>(r));
        for (size_t k = 0; k < r * r; k++) {
            m[k / r][k % r] = (bits >> k) & 1;
        }
        if (gf2_invertible(m)) {
            out.push_back(m);
        }
    }
    return out;
}

GeneratorSet full_pauli_group(size_t n) {
    GeneratorSet g(n);
    for (size_t q = 0; q < n; q++) {
        g.push_back(PauliOp::single(n, q, 'X'));
        g.push_back(PauliOp::single(n, q, 'Z'));
    }
    return g;
}

/// Deterministic cost for search tests: the proxy of the sequence.
CostFunction proxy_cost(const OmegaTable &table) {
    return [&table](const VerificationSequence &v, uint64_t) { return CostSample{proxy(v, table), 0.0}; };
}

}  // namespace

TEST(Alpha, identity_and_example) {
    auto v = GeneratorSet::from_strings({"XZ", "ZY"});
    EXPECT_EQ(alpha({{1, 0}, {0, 1}}, v), v);
    auto out = alpha({{1, 1}, {0, 1}}, v);
    EXPECT_EQ(out[0], v[0] * v[1]);
    EXPECT_EQ(out[1], v[1]);
    EXPECT_THROW(alpha({{1, 0}}, v), std::invalid_argument);
    EXPECT_THROW(alpha({{1}, {0}}, v), std::invalid_argument);
}

TEST(Alpha, composition_is_matrix_product) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; t++) {
        size_t r = 1 + rng() % 5;
        size_t n = 1 + rng() % 6;
        GeneratorSet v(n);
        for (size_t k = 0; k < r; k++) {
            v.push_back(sample_uniform_element(full_pauli_group(n), rng));
        }
        auto a = random_matrix(r, rng);
        auto b = random_matrix(r, rng);
        EXPECT_EQ(alpha(a, alpha(b, v)), alpha(gf2_multiply(a, b), v));
    }
}

TEST(Alpha, invertible_matrices_preserve_subgroup) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; t++) {
        size_t n = 2 + rng() % 4;
        size_t r = 1 + rng() % 4;
        auto v = random_verification(full_pauli_group(n), r, rng);
        auto m = random_matrix(r, rng);
        if (!gf2_invertible(m)) {
            continue;
        }
        EXPECT_EQ(canonical_form(alpha(m, v)), canonical_form(v));
    }
}

TEST(Gf2, group_order_by_enumeration) {
    EXPECT_EQ(all_invertible(1).size(), 1u);
    EXPECT_EQ(all_invertible(2).size(), 6u);
    EXPECT_EQ(all_invertible(3).size(), 168u);
    EXPECT_EQ(gl_order(2), 6);
    EXPECT_EQ(gl_order(3), 168);
    EXPECT_EQ(gl_order(4), 20160);
}

TEST(Counts, sequences) {
    EXPECT_EQ(count_sequences(3, 0), 1);
    EXPECT_EQ(count_sequences(10, 2), BigInt((uint64_t{1} << 20) - 1) * ((uint64_t{1} << 20) - 2));
    EXPECT_GT(count_sequences(10, 2), BigInt(1000000000000ull));
    EXPECT_GT(count_sequences(20, 3), BigInt("1000000000000000000000000000000000000"));
    EXPECT_GT(count_sequences(20, 4), BigInt("1" + std::string(48, '0')));
    EXPECT_THROW(count_sequences(2, 5), std::invalid_argument);
    EXPECT_THROW(count_subgroups(2, 5), std::invalid_argument);
}

TEST(Counts, match_enumeration) {
    for (size_t n = 1; n <= 2; n++) {
        for (size_t r = 0; r <= 2 * n && r <= 3; r++) {
            auto seqs = all_independent_sequences(full_pauli_group(n), r);
            std::set<std::vector<uint64_t>> subgroups;
            for (const auto &v : seqs) {
                subgroups.insert(subgroup_key(v));
            }
            EXPECT_EQ(count_sequences(n, r), seqs.size()) << n << " " << r;
            EXPECT_EQ(count_subgroups(n, r), subgroups.size()) << n << " " << r;
        }
    }
    EXPECT_EQ(count_sequences(2, 2), 210);
    EXPECT_EQ(count_subgroups(2, 2), 35);
}

TEST(Counts, nontrivial_sequences) {
    EXPECT_EQ(count_nontrivial_sequences(4), 50625);
    EXPECT_EQ(count_nontrivial_sequences(1), 1);
    auto g = GeneratorSet::from_strings({"XI", "IZ"});
    auto elements = group_elements(g);
    EXPECT_EQ(count_nontrivial_sequences(2), (elements.size() - 1) * (elements.size() - 1));
}

TEST(Quotient, orbits_of_gl2_at_two_qubits) {
    auto seqs = all_independent_sequences(full_pauli_group(2), 2);
    ASSERT_EQ(seqs.size(), 210u);
    auto group = all_invertible(2);
    std::map<std::vector<uint64_t>, std::set<std::vector<uint64_t>>> orbits;
    for (const auto &v : seqs) {
        auto &orbit = orbits[subgroup_key(v)];
        for (const auto &m : group) {
            orbit.insert(alpha(m, v).fingerprint());
        }
    }
    EXPECT_EQ(orbits.size(), 35u);
    size_t covered = 0;
    for (const auto &[key, orbit] : orbits) {
        EXPECT_EQ(orbit.size(), 6u);
        covered += orbit.size();
    }
    EXPECT_EQ(covered, 210u);
}

TEST(TabuList, fifo_and_capacity) {
    TabuList t(3);
    for (uint64_t k = 0; k < 10; k++) {
        t.push({k});
        EXPECT_LE(t.size(), 3u);
    }
    EXPECT_EQ(t.keys(), (std::deque<TabuList::Key>{{7}, {8}, {9}}));
    t.push({8});
    EXPECT_EQ(t.size(), 3u);
    EXPECT_TRUE(t.contains({7}));
    t.push({10});
    EXPECT_FALSE(t.contains({7}));
    EXPECT_TRUE(t.contains({10}));
}

TEST(SearchParams, validation) {
    SearchParams p;
    EXPECT_NO_THROW(p.validate());
    p.i_max = 0;
    EXPECT_NO_THROW(p.validate());
    p.m = 0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(RandomVerification, valid_and_rejects_oversized) {
    auto s = resource_stabilizers(resource_unitary(parse_circuit(kThreeQubit)), 3);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; t++) {
        auto v = random_verification_sequence(s, 1 + t % 6, rng);
        EXPECT_EQ(rank(v), v.size());
        for (const auto &row : v) {
            EXPECT_FALSE(row.is_identity());
            EXPECT_TRUE(in_span(row, s));
        }
    }
    EXPECT_THROW(random_verification_sequence(s, 7, rng), std::invalid_argument);
}

TEST(GlobalOptimize, zero_iterations) {
    auto c = parse_circuit(kThreeQubit);
    auto s = resource_stabilizers(resource_unitary(c), 3);
    auto table = precompute_omega(build_resource_prep(c), NoiseParams{});
    SearchParams params{2, 10, 5, 0, 1000, 7, 0};
    auto result = global_optimize(s, params, proxy_cost(table));
    EXPECT_EQ(result.trace.evaluations(), 1u);
    EXPECT_EQ(rank(result.best), 2u);
    EXPECT_EQ(result.best_cost, proxy(result.best, table));
    EXPECT_TRUE(result.trace.records[0].accepted);
}

TEST(GlobalOptimize, improves_and_traces) {
    auto c = parse_circuit(kThreeQubit);
    auto s = resource_stabilizers(resource_unitary(c), 3);
    auto table = precompute_omega(build_resource_prep(c), NoiseParams{});
    for (uint64_t seed = 0; seed < 20; seed++) {
        SearchParams params{2, 4, 3, 30, 1000, seed, 0};
        auto result = global_optimize(s, params, proxy_cost(table));
        const auto &recs = result.trace.records;
        EXPECT_LE(result.best_cost, recs[0].p_log);
        EXPECT_EQ(result.best_cost, recs.back().best_so_far);
        for (size_t k = 0; k < recs.size(); k++) {
            EXPECT_EQ(recs[k].eval_index, k + 1);
            if (k > 0) {
                EXPECT_LE(recs[k].best_so_far, recs[k - 1].best_so_far);
                EXPECT_EQ(recs[k].accepted, recs[k].best_so_far < recs[k - 1].best_so_far);
            }
        }
        EXPECT_LE(recs.size(), 1 + params.i_max * params.m);
        EXPECT_EQ(rank(result.best), 2u);
        for (const auto &row : result.best) {
            EXPECT_FALSE(row.is_identity());
            EXPECT_TRUE(in_span(row, s));
        }
    }
}

TEST(GlobalOptimize, deterministic_and_budgeted) {
    auto c = random_clifford_circuit(3, 5);
    auto s = resource_stabilizers(resource_unitary(c), 3);
    NoiseParams noise{1e-3, 30};
    auto cost = clinr_plog_cost(c, noise, 2000);
    SearchParams params{3, 10, 5, 100, 2000, 9, 12};
    auto a = global_optimize(s, params, cost);
    auto b = global_optimize(s, params, cost);
    EXPECT_EQ(a.trace.csv(), b.trace.csv());
    EXPECT_EQ(a.best, b.best);
    EXPECT_EQ(a.trace.evaluations(), 12u);
    EXPECT_EQ(a.trace.csv().substr(0, a.trace.csv().find('\n')),
              "eval_index,p_log,stderr,best_so_far,candidate_key,accepted");
}

TEST(GlobalOptimize, stays_inside_subgroup) {
    std::mt19937_64 rng(12);
    auto s = resource_stabilizers(resource_unitary(random_clifford_circuit(4, 1)), 4);
    auto sub = canonical_form(random_verification(s, 3, rng));
    auto table = precompute_omega(build_resource_prep(random_clifford_circuit(4, 1)), NoiseParams{});
    SearchParams params{3, 10, 5, 20, 1000, 2, 0};
    auto result = global_optimize(sub, params, proxy_cost(table));
    EXPECT_EQ(canonical_form(result.best), sub);
}

TEST(ProxyOptimize, zero_iterations_and_improvement) {
    auto c = random_clifford_circuit(4, 8);
    auto s = resource_stabilizers(resource_unitary(c), 4);
    auto table = precompute_omega(build_resource_prep(c), NoiseParams{1e-3, 30});
    SearchParams zero{3, 10, 5, 0, 1, 4, 0};
    auto initial = proxy_optimize(s, table, zero);
    EXPECT_EQ(initial.proxy_evaluations, 1u);
    EXPECT_EQ(rank(initial.subgroup), 3u);
    EXPECT_EQ(initial.subgroup, canonical_form(initial.subgroup));
    EXPECT_EQ(initial.proxy_value, proxy(initial.subgroup, table));

    SearchParams params{3, 10, 5, 40, 1, 4, 0};
    auto result = proxy_optimize(s, table, params);
    EXPECT_LE(result.proxy_value, initial.proxy_value);
    EXPECT_EQ(result.proxy_value, proxy(result.subgroup, table));
    EXPECT_EQ(rank(result.subgroup), 3u);
    for (const auto &row : result.subgroup) {
        EXPECT_TRUE(in_span(row, s));
    }
    EXPECT_EQ(proxy_optimize(s, table, params).subgroup, result.subgroup);
}

TEST(ProxyOptimize, full_rank_has_no_moves) {
    auto c = parse_circuit(kThreeQubit);
    auto s = resource_stabilizers(resource_unitary(c), 3);
    auto table = precompute_omega(build_resource_prep(c), NoiseParams{});
    SearchParams params{6, 10, 5, 10, 1, 1, 0};
    auto result = proxy_optimize(s, table, params);
    EXPECT_EQ(result.proxy_evaluations, 1u);
    EXPECT_EQ(result.proxy_value, 0.0);
}

TEST(ProxyOptimize, finds_global_minimum_on_small_instances) {
    auto full = random_clifford_circuit(3, 2024);
    auto c = truncate(full, std::min<size_t>(full.size(), 20));
    auto s = resource_stabilizers(resource_unitary(c), 3);
    auto table = precompute_omega(build_resource_prep(c), NoiseParams{1e-3, 30});
    double best = INFINITY;
    for (const auto &v : all_independent_sequences(s, 2)) {
        best = std::min(best, proxy(v, table));
    }
    int hits = 0;
    for (uint64_t seed = 0; seed < 50; seed++) {
        SearchParams params{2, 10, 5, 300, 1, seed, 0};
        hits += proxy_optimize(s, table, params).proxy_value == best;
    }
    EXPECT_GE(hits, 40);
}

TEST(ProxyOptimize, canonical_key_never_merges_different_costs) {
    std::mt19937_64 rng(30);
    auto c = random_clifford_circuit(3, 31);
    auto s = resource_stabilizers(resource_unitary(c), 3);
    auto table = precompute_omega(build_resource_prep(c), NoiseParams{1e-3, 30});
    std::map<std::vector<uint64_t>, double> seen;
    for (int t = 0; t < 2000; t++) {
        auto v = random_verification(s, 2, rng);
        auto [it, fresh] = seen.emplace(subgroup_key(v), proxy(v, table));
        if (!fresh) {
            EXPECT_EQ(it->second, proxy(v, table));
        }
    }
}

TEST(TwoStep, stage_two_counts_only_plog_evaluations) {
    auto c = random_clifford_circuit(4, 3);
    auto s = resource_stabilizers(resource_unitary(c), 4);
    auto table = precompute_omega(build_resource_prep(c), NoiseParams{1e-3, 30});
    size_t calls = 0;
    CostFunction counting = [&](const VerificationSequence &v, uint64_t) {
        calls++;
        return CostSample{proxy(v, table), 0.0};
    };
    SearchParams params{4, 10, 5, 6, 1, 5, 0};
    auto result = two_step_optimize(s, table, params, counting);
    EXPECT_EQ(calls, result.stage2.trace.evaluations());
    EXPECT_GT(result.stage1.proxy_evaluations, 1u);
    EXPECT_EQ(canonical_form(result.stage2.best), result.stage1.subgroup);

    SearchParams zero = params;
    zero.i_max = 0;
    EXPECT_EQ(two_step_optimize(s, table, zero, counting).stage2.trace.evaluations(), 1u);
}

TEST(TwoStep, beats_random_sequence_on_three_qubit_circuit) {
    auto c = parse_circuit(kThreeQubit);
    auto s = resource_stabilizers(resource_unitary(c), 3);
    NoiseParams noise{1e-2, 30};
    auto table = precompute_omega(build_resource_prep(c), noise);
    auto cost = clinr_plog_cost(c, noise, 2000);
    double diff_sum = 0, diff_sq = 0;
    const int seeds = 100;
    for (int seed = 0; seed < seeds; seed++) {
        SearchParams params{2, 10, 3, 5, 2000, static_cast<uint64_t>(seed), 0};
        auto two = two_step_optimize(s, table, params, cost);
        std::mt19937_64 rng(1000 + seed);
        auto random = random_verification_sequence(s, 2, rng);
        double a = estimate_plog(build_clinr(c, two.stage2.best), noise, 20000, 50 + seed).p_log;
        double b = estimate_plog(build_clinr(c, random), noise, 20000, 50 + seed).p_log;
        diff_sum += a - b;
        diff_sq += (a - b) * (a - b);
    }
    double mean = diff_sum / seeds;
    double se = std::sqrt((diff_sq / seeds - mean * mean) / (seeds - 1));
    EXPECT_LE(mean, 2 * se);
}
