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

#ifndef CLINR_TABLEAU_H
#define CLINR_TABLEAU_H

#include <cstdint>
#include <random>
#include <vector>

#include "clinr/circuit.h"

namespace clinr {

struct MeasurementResult {
    bool outcome;
    bool deterministic;
};

/// Stabilizer tableau simulator with signs (Aaronson-Gottesman).
///
/// Used as an amplitude-faithful reference for the phase-free Pauli-frame machinery:
/// it tracks signs, so it can tell whether a protocol really implements a circuit.
class TableauSimulator {
   public:
    TableauSimulator(size_t width, uint64_t seed);

    size_t width() const {
        return n_;
    }

    void h(size_t a);
    void s(size_t a);
    void sdg(size_t a);
    void x(size_t a);
    void z(size_t a);
    void cx(size_t a, size_t b);
    void cz(size_t a, size_t b);
    MeasurementResult measure_z(size_t a);
    MeasurementResult measure_x(size_t a);
    void reset_z(size_t a);

    /// Runs a circuit; measurement outcomes are written into `records` at the circuit's
    /// record slots (resized as needed). When `deterministic` is given, it receives one flag
    /// per slot telling whether that outcome was fixed by the state.
    void run(const Circuit &c, std::vector<uint8_t> &records, std::vector<uint8_t> *deterministic = nullptr);
    void apply(const Op &op, std::vector<uint8_t> &records, std::vector<uint8_t> *deterministic = nullptr);

   private:
    bool xs(size_t row, size_t q) const {
        return x_[row * n_ + q];
    }
    bool zs(size_t row, size_t q) const {
        return z_[row * n_ + q];
    }
    void rowsum(size_t h, size_t i);
    void rowcopy(size_t dst, size_t src);
    void rowclear(size_t row);

    size_t n_;
    std::vector<uint8_t> x_;
    std::vector<uint8_t> z_;
    std::vector<uint8_t> r_;
    std::mt19937_64 rng_;
};

}  // namespace clinr

#endif
