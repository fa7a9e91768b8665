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

#include "clinr/tableau.h"

#include "clinr/clifford.h"
#include "gtest/gtest.h"

using namespace clinr;

TEST(TableauSimulator, basics) {
    TableauSimulator sim(2, 1);
    EXPECT_TRUE(sim.measure_z(0).deterministic);
    EXPECT_FALSE(sim.measure_z(0).outcome);
    sim.x(0);
    auto m = sim.measure_z(0);
    EXPECT_TRUE(m.deterministic);
    EXPECT_TRUE(m.outcome);
    sim.h(1);
    EXPECT_TRUE(sim.measure_x(1).deterministic);
    EXPECT_FALSE(sim.measure_x(1).outcome);
    sim.z(1);
    EXPECT_TRUE(sim.measure_x(1).outcome);
}

TEST(TableauSimulator, s_gate_signs) {
    // S|+> = |+i>; S S |+> = |->.
    TableauSimulator sim(1, 0);
    sim.h(0);
    sim.s(0);
    sim.s(0);
    auto m = sim.measure_x(0);
    EXPECT_TRUE(m.deterministic);
    EXPECT_TRUE(m.outcome);
    sim.sdg(0);
    sim.sdg(0);
    m = sim.measure_x(0);
    EXPECT_FALSE(m.outcome);
}

TEST(TableauSimulator, bell_pair_correlations) {
    for (uint64_t seed = 0; seed < 20; seed++) {
        TableauSimulator sim(2, seed);
        sim.h(0);
        sim.cx(0, 1);
        auto a = sim.measure_z(0);
        auto b = sim.measure_z(1);
        EXPECT_FALSE(a.deterministic);
        EXPECT_TRUE(b.deterministic);
        EXPECT_EQ(a.outcome, b.outcome);
    }
}

TEST(TableauSimulator, circuit_then_inverse_is_identity) {
    for (uint64_t seed = 0; seed < 20; seed++) {
        auto c = random_clifford_circuit(5, seed);
        TableauSimulator sim(5, seed);
        std::vector<uint8_t> records;
        sim.run(c, records);
        sim.run(inverse(c), records);
        for (size_t q = 0; q < 5; q++) {
            auto m = sim.measure_z(q);
            EXPECT_TRUE(m.deterministic);
            EXPECT_FALSE(m.outcome);
        }
    }
}

TEST(TableauSimulator, reset_and_records) {
    auto c = parse_circuit("WIDTH 2\nH 1\nMZ 1 -> 1\nPREPZ 1\nMZ 1 -> 2\nCZ 1 2\n");
    TableauSimulator sim(2, 3);
    std::vector<uint8_t> records, det;
    sim.run(c, records, &det);
    ASSERT_EQ(records.size(), 2u);
    EXPECT_FALSE(det[0]);
    EXPECT_TRUE(det[1]);
    EXPECT_EQ(records[1], 0);
}
