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

namespace clinr {

// Rows [0, n) are destabilizers, [n, 2n) stabilizers, row 2n is scratch.
TableauSimulator::TableauSimulator(size_t width, uint64_t seed)
    : n_(width), x_((2 * width + 1) * width, 0), z_((2 * width + 1) * width, 0), r_(2 * width + 1, 0), rng_(seed) {
    for (size_t q = 0; q < n_; q++) {
        x_[q * n_ + q] = 1;
        z_[(n_ + q) * n_ + q] = 1;
    }
}

void TableauSimulator::h(size_t a) {
    for (size_t i = 0; i < 2 * n_; i++) {
        auto &xa = x_[i * n_ + a];
        auto &za = z_[i * n_ + a];
        r_[i] ^= xa & za;
        std::swap(xa, za);
    }
}

void TableauSimulator::s(size_t a) {
    for (size_t i = 0; i < 2 * n_; i++) {
        auto xa = x_[i * n_ + a];
        auto &za = z_[i * n_ + a];
        r_[i] ^= xa & za;
        za ^= xa;
    }
}

void TableauSimulator::sdg(size_t a) {
    s(a);
    s(a);
    s(a);
}

void TableauSimulator::x(size_t a) {
    for (size_t i = 0; i < 2 * n_; i++) {
        r_[i] ^= z_[i * n_ + a];
    }
}

void TableauSimulator::z(size_t a) {
    for (size_t i = 0; i < 2 * n_; i++) {
        r_[i] ^= x_[i * n_ + a];
    }
}

void TableauSimulator::cx(size_t a, size_t b) {
    for (size_t i = 0; i < 2 * n_; i++) {
        auto &xa = x_[i * n_ + a];
        auto &xb = x_[i * n_ + b];
        auto &za = z_[i * n_ + a];
        auto &zb = z_[i * n_ + b];
        r_[i] ^= xa & zb & (xb ^ za ^ 1);
        xb ^= xa;
        za ^= zb;
    }
}

void TableauSimulator::cz(size_t a, size_t b) {
    h(b);
    cx(a, b);
    h(b);
}

namespace {

// Exponent of i picked up when multiplying single-qubit Paulis (x1,z1) * (x2,z2).
int g(int x1, int z1, int x2, int z2) {
    if (x1 == 0 && z1 == 0) {
        return 0;
    }
    if (x1 == 1 && z1 == 1) {
        return z2 - x2;
    }
    if (x1 == 1 && z1 == 0) {
        return z2 * (2 * x2 - 1);
    }
    return x2 * (1 - 2 * z2);
}

}  // namespace

void TableauSimulator::rowsum(size_t h, size_t i) {
    int phase = 2 * r_[h] + 2 * r_[i];
    for (size_t q = 0; q < n_; q++) {
        phase += g(xs(i, q), zs(i, q), xs(h, q), zs(h, q));
    }
    phase = ((phase % 4) + 4) % 4;
    r_[h] = phase == 2;
    for (size_t q = 0; q < n_; q++) {
        x_[h * n_ + q] ^= x_[i * n_ + q];
        z_[h * n_ + q] ^= z_[i * n_ + q];
    }
}

void TableauSimulator::rowcopy(size_t dst, size_t src) {
    for (size_t q = 0; q < n_; q++) {
        x_[dst * n_ + q] = x_[src * n_ + q];
        z_[dst * n_ + q] = z_[src * n_ + q];
    }
    r_[dst] = r_[src];
}

void TableauSimulator::rowclear(size_t row) {
    for (size_t q = 0; q < n_; q++) {
        x_[row * n_ + q] = 0;
        z_[row * n_ + q] = 0;
    }
    r_[row] = 0;
}

MeasurementResult TableauSimulator::measure_z(size_t a) {
    size_t p = n_;
    while (p < 2 * n_ && !xs(p, a)) {
        p++;
    }
    if (p < 2 * n_) {
        for (size_t i = 0; i < 2 * n_; i++) {
            if (i != p && xs(i, a)) {
                rowsum(i, p);
            }
        }
        rowcopy(p - n_, p);
        rowclear(p);
        z_[p * n_ + a] = 1;
        r_[p] = static_cast<uint8_t>(rng_() & 1);
        return {r_[p] != 0, false};
    }
    const size_t scratch = 2 * n_;
    rowclear(scratch);
    for (size_t i = 0; i < n_; i++) {
        if (xs(i, a)) {
            rowsum(scratch, i + n_);
        }
    }
    return {r_[scratch] != 0, true};
}

MeasurementResult TableauSimulator::measure_x(size_t a) {
    h(a);
    auto result = measure_z(a);
    h(a);
    return result;
}

void TableauSimulator::reset_z(size_t a) {
    if (measure_z(a).outcome) {
        x(a);
    }
}

void TableauSimulator::apply(const Op &op, std::vector<uint8_t> &records, std::vector<uint8_t> *deterministic) {
    auto store = [&](MeasurementResult m) {
        if (records.size() <= op.record) {
            records.resize(op.record + 1, 0);
        }
        records[op.record] = m.outcome;
        if (deterministic != nullptr) {
            if (deterministic->size() <= op.record) {
                deterministic->resize(op.record + 1, 0);
            }
            (*deterministic)[op.record] = m.deterministic;
        }
    };
    switch (op.kind) {
        case GateKind::PREP_Z:
            reset_z(op.q0);
            break;
        case GateKind::H:
            h(op.q0);
            break;
        case GateKind::S:
            s(op.q0);
            break;
        case GateKind::SDG:
            sdg(op.q0);
            break;
        case GateKind::X:
            x(op.q0);
            break;
        case GateKind::Z:
            z(op.q0);
            break;
        case GateKind::CX:
            cx(op.q0, op.q1);
            break;
        case GateKind::CZ:
            cz(op.q0, op.q1);
            break;
        case GateKind::MEAS_X:
            store(measure_x(op.q0));
            break;
        case GateKind::MEAS_Z:
            store(measure_z(op.q0));
            break;
        case GateKind::BARRIER:
            break;
    }
}

void TableauSimulator::run(const Circuit &c, std::vector<uint8_t> &records, std::vector<uint8_t> *deterministic) {
    if (c.width() > n_) {
        throw std::invalid_argument("TableauSimulator::run: circuit wider than simulator");
    }
    for (const auto &op : c.ops()) {
        apply(op, records, deterministic);
    }
}

}  // namespace clinr
