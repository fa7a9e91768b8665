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

#ifndef CLINR_TESTS_ORACLES_H
#define CLINR_TESTS_ORACLES_H

#include <random>
#include <stdexcept>
#include <vector>

#include "clinr/clifford.h"
#include "clinr/noise.h"
#include "clinr/pauli.h"
#include "clinr/program.h"

namespace clinr::testing {

inline GeneratorSet random_verification(const GeneratorSet &s, size_t r, std::mt19937_64 &rng) {
    if (r > rank(s)) {
        throw std::invalid_argument("random_verification: r exceeds rank");
    }
    while (true) {
        GeneratorSet v(s.width());
        for (size_t k = 0; k < r; k++) {
            v.push_back(sample_uniform_element(s, rng));
        }
        bool ok = rank(v) == r;
        for (const auto &row : v) {
            ok = ok && !row.is_identity();
        }
        if (ok) {
            return v;
        }
    }
}

/// Every element of <g>, identity first.
inline std::vector<PauliOp> group_elements(const GeneratorSet &g) {
    auto basis = canonical_form(g);
    std::vector<PauliOp> out;
    for (uint64_t mask = 0; mask < (uint64_t{1} << basis.size()); mask++) {
        PauliOp p(g.width());
        for (size_t k = 0; k < basis.size(); k++) {
            if ((mask >> k) & 1) {
                p *= basis[k];
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

/// Every ordered r-tuple of independent elements of <g>.
inline std::vector<GeneratorSet> all_independent_sequences(const GeneratorSet &g, size_t r) {
    auto elements = group_elements(g);
    std::vector<GeneratorSet> out;
    std::vector<size_t> idx(r, 0);
    while (true) {
        GeneratorSet v(g.width());
        for (size_t k : idx) {
            v.push_back(elements[k]);
        }
        if (rank(v) == r) {
            out.push_back(std::move(v));
        }
        size_t pos = 0;
        while (pos < r && ++idx[pos] == elements.size()) {
            idx[pos++] = 0;
        }
        if (pos == r) {
            return out;
        }
    }
}

struct ForwardOutcome {
    std::vector<uint8_t> record_flips;
    /// Residual logical error after correction (FRAME) or flipped corrected bits as X (Z_READOUT).
    PauliOp residual;
    bool detected = false;
};

/// Forward Pauli-frame run of a program with a list of fault events (all after given ops).
inline ForwardOutcome forward_frame(const ClinrProgram &prog, const std::vector<FaultLocation> &locs,
                                    const std::vector<FaultEvent> &events) {
    const Circuit &c = prog.circuit;
    PauliOp frame(c.width());
    ForwardOutcome out;
    out.record_flips.assign(c.record_count(), 0);
    std::vector<std::vector<const FaultEvent *>> after(c.size());
    for (const auto &ev : events) {
        after[locs[ev.location].after_op].push_back(&ev);
    }
    for (size_t t = 0; t < c.size(); t++) {
        const Op &op = c[t];
        conjugate_frame(op, frame);
        if (op.kind == GateKind::MEAS_Z) {
            out.record_flips[op.record] ^= frame.x(op.q0);
        } else if (op.kind == GateKind::MEAS_X) {
            out.record_flips[op.record] ^= frame.z(op.q0);
        }
        for (const auto *ev : after[t]) {
            if (ev->record_flip) {
                out.record_flips[ev->record] ^= 1;
            } else {
                frame *= ev->error;
            }
        }
    }
    for (uint32_t k : prog.verification_records) {
        out.detected = out.detected || out.record_flips[k];
    }
    PauliOp q = prog.correction(out.record_flips);
    out.residual = PauliOp(prog.n);
    for (size_t i = 0; i < prog.n; i++) {
        if (prog.output_mode == OutputMode::FRAME) {
            out.residual.set_x(i, frame.x(prog.output_qubits[i]) ^ q.x(i));
            out.residual.set_z(i, frame.z(prog.output_qubits[i]) ^ q.z(i));
        } else {
            out.residual.set_x(i, out.record_flips[prog.output_records[i]] ^ q.x(i));
        }
    }
    return out;
}

}  // namespace clinr::testing

#endif
