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

#include "clinr/proxy.h"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "clinr/clifford.h"

namespace clinr {

double pairwise_sum(const double *values, size_t count) {
    if (count <= 8) {
        double s = 0;
        for (size_t k = 0; k < count; k++) {
            s += values[k];
        }
        return s;
    }
    size_t half = count / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

OmegaTable precompute_omega(const Circuit &prep, const NoiseParams &params) {
    OmegaTable t;
    t.s_generators = output_stabilizers(prep);
    const size_t width = prep.width();
    std::vector<double> masses;
    for (const auto &loc : schedule_faults(prep, params)) {
        if (loc.kind == FaultKind::MEASUREMENT_FLIP) {
            continue;
        }
        const auto count = static_cast<uint32_t>(loc.num_errors());
        for (uint32_t e = 1; e <= count; e++) {
            PauliOp out = propagate(prep, local_error(width, loc.support, e), loc.after_op + 1);
            bool perp = commutes_with_all(out, t.s_generators);
            t.entries.push_back({std::move(out), loc.p_tilde(), perp});
            masses.push_back(loc.p_tilde());
        }
    }
    t.total_mass = pairwise_sum(masses.data(), masses.size());
    return t;
}

double proxy(const GeneratorSet &v, const OmegaTable &t) {
    if (v.width() != t.width() && !(v.empty() && v.width() == 0)) {
        throw std::invalid_argument("proxy: verification width " + std::to_string(v.width()) +
                                    " does not match table width " + std::to_string(t.width()));
    }
    std::vector<double> hits;
    for (const auto &entry : t.entries) {
        if (!entry.in_s_perp && (v.empty() || commutes_with_all(entry.output_error, v))) {
            hits.push_back(entry.weight_prob);
        }
    }
    return pairwise_sum(hits.data(), hits.size());
}

std::string OmegaTable::csv() const {
    std::ostringstream out;
    out << "pauli_string,p_tilde,in_S_perp\n";
    char buf[64];
    for (const auto &entry : entries) {
        std::snprintf(buf, sizeof(buf), "%.17g", entry.weight_prob);
        out << entry.output_error.str() << ',' << buf << ',' << (entry.in_s_perp ? 1 : 0) << '\n';
    }
    return out.str();
}

}  // namespace clinr
