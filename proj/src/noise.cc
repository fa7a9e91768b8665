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

#include "clinr/noise.h"

#include <stdexcept>
#include <string>

namespace clinr {

void NoiseParams::validate() const {
    auto check = [](double rate, const char *name) {
        if (!(rate >= 0.0 && rate <= 1.0)) {
            throw std::invalid_argument(std::string("noise rate '") + name + "' = " + std::to_string(rate) +
                                        " is outside [0, 1]");
        }
    };
    if (!(tau_m >= 0.0)) {
        throw std::invalid_argument("tau_m must be non-negative");
    }
    check(p, "p");
    check(single_qubit_rate(), "p/10");
    check(idle_rate(), "p/100");
    check(measurement_idle_rate(), "tau_m*p/100");
}

size_t FaultLocation::num_errors() const {
    if (kind == FaultKind::MEASUREMENT_FLIP) {
        return 1;
    }
    return (size_t{1} << (2 * support.size())) - 1;
}

PauliOp local_error(size_t width, const std::vector<uint32_t> &support, uint32_t e) {
    PauliOp result(width);
    for (size_t k = 0; k < support.size(); k++) {
        uint32_t bits = (e >> (2 * k)) & 3;
        if (bits & 1) {
            result.flip_x(support[k]);
        }
        if (bits & 2) {
            result.flip_z(support[k]);
        }
    }
    return result;
}

std::vector<FaultLocation> schedule_faults(const Circuit &c, const NoiseParams &params) {
    params.validate();
    std::vector<FaultLocation> result;
    const size_t width = c.width();
    const auto &ops = c.ops();

    auto add_idles = [&](size_t after_op, const std::vector<uint8_t> &busy, double rate) {
        for (uint32_t q = 0; q < width; q++) {
            if (!busy[q]) {
                result.push_back({after_op, FaultKind::IDLE, {q}, 0, rate});
            }
        }
    };

    size_t k = 0;
    while (k < ops.size()) {
        const Op &op = ops[k];
        if (op.kind == GateKind::BARRIER) {
            k++;
        } else if (op.kind == GateKind::PREP_Z) {
            result.push_back({k, FaultKind::GATE, {op.q0}, 0, params.single_qubit_rate()});
            k++;
        } else if (is_unitary(op.kind)) {
            std::vector<uint8_t> busy(width, 0);
            busy[op.q0] = 1;
            if (is_two_qubit(op.kind)) {
                busy[op.q1] = 1;
                result.push_back({k, FaultKind::GATE, {op.q0, op.q1}, 0, params.two_qubit_rate()});
            } else {
                result.push_back({k, FaultKind::GATE, {op.q0}, 0, params.single_qubit_rate()});
            }
            add_idles(k, busy, params.idle_rate());
            k++;
        } else {
            // Maximal run of adjacent measurements: one simultaneous layer.
            std::vector<uint8_t> busy(width, 0);
            size_t end = k;
            while (end < ops.size() && is_measurement(ops[end].kind)) {
                busy[ops[end].q0] = 1;
                result.push_back({end, FaultKind::MEASUREMENT_FLIP, {}, ops[end].record,
                                  params.measurement_flip_rate()});
                end++;
            }
            add_idles(end - 1, busy, params.measurement_idle_rate());
            k = end;
        }
    }
    return result;
}

std::vector<FaultEvent> sample_faults(const std::vector<FaultLocation> &locs, size_t width, std::mt19937_64 &rng) {
    std::vector<FaultEvent> events;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (size_t i = 0; i < locs.size(); i++) {
        const auto &loc = locs[i];
        if (!(unit(rng) < loc.rate)) {
            continue;
        }
        if (loc.kind == FaultKind::MEASUREMENT_FLIP) {
            events.push_back({i, PauliOp(width), true, loc.record});
        } else {
            std::uniform_int_distribution<uint32_t> pick(1, static_cast<uint32_t>(loc.num_errors()));
            events.push_back({i, local_error(width, loc.support, pick(rng)), false, 0});
        }
    }
    return events;
}

void for_each_single_fault(const std::vector<FaultLocation> &locs, size_t width,
                           const std::function<void(const FaultEvent &, double)> &visit) {
    for (size_t i = 0; i < locs.size(); i++) {
        const auto &loc = locs[i];
        if (loc.kind == FaultKind::MEASUREMENT_FLIP) {
            visit(FaultEvent{i, PauliOp(width), true, loc.record}, loc.p_tilde());
            continue;
        }
        const auto count = static_cast<uint32_t>(loc.num_errors());
        for (uint32_t e = 1; e <= count; e++) {
            visit(FaultEvent{i, local_error(width, loc.support, e), false, 0}, loc.p_tilde());
        }
    }
}

std::vector<std::pair<FaultEvent, double>> enumerate_single_faults(const std::vector<FaultLocation> &locs,
                                                                   size_t width) {
    std::vector<std::pair<FaultEvent, double>> result;
    for_each_single_fault(locs, width, [&](const FaultEvent &ev, double p) { result.emplace_back(ev, p); });
    return result;
}

}  // namespace clinr
