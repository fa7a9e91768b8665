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

#include "clinr/circuit.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>

namespace clinr {

namespace {

struct GateInfo {
    GateKind kind;
    std::string_view name;
    size_t arity;
};

constexpr std::array<GateInfo, 11> kGates{{
    {GateKind::PREP_Z, "PREPZ", 1},
    {GateKind::H, "H", 1},
    {GateKind::S, "S", 1},
    {GateKind::SDG, "SDG", 1},
    {GateKind::X, "X", 1},
    {GateKind::Z, "Z", 1},
    {GateKind::CX, "CX", 2},
    {GateKind::CZ, "CZ", 2},
    {GateKind::MEAS_X, "MX", 1},
    {GateKind::MEAS_Z, "MZ", 1},
    {GateKind::BARRIER, "BARRIER", 0},
}};

const GateInfo &info(GateKind kind) {
    return kGates[static_cast<size_t>(kind)];
}

uint32_t parse_index(std::string_view token, size_t line_no) {
    uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || value == 0) {
        throw CircuitError("line " + std::to_string(line_no) + ": bad index '" + std::string(token) + "'");
    }
    return value - 1;
}

}  // namespace

std::string_view gate_name(GateKind kind) {
    return info(kind).name;
}

size_t gate_arity(GateKind kind) {
    return info(kind).arity;
}

bool is_unitary(GateKind kind) {
    switch (kind) {
        case GateKind::H:
        case GateKind::S:
        case GateKind::SDG:
        case GateKind::X:
        case GateKind::Z:
        case GateKind::CX:
        case GateKind::CZ:
            return true;
        default:
            return false;
    }
}

bool is_measurement(GateKind kind) {
    return kind == GateKind::MEAS_X || kind == GateKind::MEAS_Z;
}

bool is_two_qubit(GateKind kind) {
    return kind == GateKind::CX || kind == GateKind::CZ;
}

void Circuit::append(const Op &op) {
    size_t arity = gate_arity(op.kind);
    if (arity >= 1 && op.q0 >= width_) {
        throw CircuitError("qubit " + std::to_string(op.q0 + 1) + " out of range for width " + std::to_string(width_));
    }
    if (arity == 2) {
        if (op.q1 >= width_) {
            throw CircuitError("qubit " + std::to_string(op.q1 + 1) + " out of range for width " +
                               std::to_string(width_));
        }
        if (op.q0 == op.q1) {
            throw CircuitError("two-qubit gate on a repeated qubit");
        }
    }
    Op stored = op;
    if (arity < 2) {
        stored.q1 = 0;
    }
    if (arity == 0) {
        stored.q0 = 0;
    }
    if (is_measurement(op.kind)) {
        if (op.record != record_count_) {
            throw CircuitError("record slot " + std::to_string(op.record + 1) + " is not the next free slot " +
                               std::to_string(record_count_ + 1));
        }
        record_count_++;
    } else {
        stored.record = 0;
    }
    ops_.push_back(stored);
}

void Circuit::append(GateKind kind, uint32_t q0, uint32_t q1) {
    if (is_measurement(kind)) {
        measure(kind, q0);
        return;
    }
    append(Op{kind, q0, q1, 0});
}

uint32_t Circuit::measure(GateKind kind, uint32_t q) {
    auto slot = static_cast<uint32_t>(record_count_);
    append(Op{kind, q, 0, slot});
    return slot;
}

void Circuit::append_mapped(const Circuit &other, const std::vector<uint32_t> &qubit_map) {
    if (qubit_map.size() != other.width()) {
        throw CircuitError("qubit map size does not match circuit width");
    }
    uint32_t shift = static_cast<uint32_t>(record_count_);
    for (const auto &op : other.ops()) {
        Op mapped = op;
        size_t arity = gate_arity(op.kind);
        if (arity >= 1) {
            mapped.q0 = qubit_map[op.q0];
        }
        if (arity == 2) {
            mapped.q1 = qubit_map[op.q1];
        }
        if (is_measurement(op.kind)) {
            mapped.record = op.record + shift;
        }
        append(mapped);
    }
}

void Circuit::append_circuit(const Circuit &other) {
    std::vector<uint32_t> identity(other.width());
    for (uint32_t q = 0; q < identity.size(); q++) {
        identity[q] = q;
    }
    append_mapped(other, identity);
}

bool Circuit::has_measurements() const {
    return std::any_of(ops_.begin(), ops_.end(), [](const Op &op) { return is_measurement(op.kind); });
}

size_t Circuit::count(GateKind kind) const {
    return std::count_if(ops_.begin(), ops_.end(), [kind](const Op &op) { return op.kind == kind; });
}

Circuit Circuit::from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    size_t line_no = 0;
    bool have_width = false;
    Circuit result;
    while (std::getline(in, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream words(line);
        std::vector<std::string> tokens;
        std::string word;
        while (words >> word) {
            tokens.push_back(word);
        }
        if (tokens.empty()) {
            continue;
        }
        if (!have_width) {
            if (tokens.size() != 2 || tokens[0] != "WIDTH") {
                throw CircuitError("line " + std::to_string(line_no) + ": expected 'WIDTH <N>'");
            }
            result = Circuit(parse_index(tokens[1], line_no) + 1);
            have_width = true;
            continue;
        }
        auto it = std::find_if(kGates.begin(), kGates.end(), [&](const GateInfo &g) { return g.name == tokens[0]; });
        if (it == kGates.end()) {
            throw CircuitError("line " + std::to_string(line_no) + ": unknown mnemonic '" + tokens[0] + "'");
        }
        Op op{it->kind};
        size_t expected = it->arity + (is_measurement(it->kind) ? 2 : 0);
        if (tokens.size() - 1 != expected) {
            throw CircuitError("line " + std::to_string(line_no) + ": bad operand count for " + tokens[0]);
        }
        if (it->arity >= 1) {
            op.q0 = parse_index(tokens[1], line_no);
        }
        if (it->arity == 2) {
            op.q1 = parse_index(tokens[2], line_no);
        }
        if (is_measurement(it->kind)) {
            if (tokens[2] != "->") {
                throw CircuitError("line " + std::to_string(line_no) + ": expected '->' in measurement");
            }
            op.record = parse_index(tokens[3], line_no);
            if (op.record < result.record_count_) {
                throw CircuitError("line " + std::to_string(line_no) + ": duplicate record slot " + tokens[3]);
            }
        }
        try {
            result.append(op);
        } catch (const CircuitError &e) {
            throw CircuitError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!have_width) {
        throw CircuitError("missing 'WIDTH <N>' header");
    }
    return result;
}

std::string Circuit::str() const {
    std::ostringstream out;
    out << "WIDTH " << width_ << '\n';
    for (const auto &op : ops_) {
        out << gate_name(op.kind);
        size_t arity = gate_arity(op.kind);
        if (arity >= 1) {
            out << ' ' << op.q0 + 1;
        }
        if (arity == 2) {
            out << ' ' << op.q1 + 1;
        }
        if (is_measurement(op.kind)) {
            out << " -> " << op.record + 1;
        }
        out << '\n';
    }
    return out.str();
}

Circuit parse_circuit(std::string_view text) {
    return Circuit::from_text(text);
}

std::string serialize_circuit(const Circuit &c) {
    return c.str();
}

Circuit truncate(const Circuit &c, size_t s) {
    if (s > c.size()) {
        throw std::out_of_range("truncate: size " + std::to_string(s) + " exceeds circuit size " +
                                std::to_string(c.size()));
    }
    Circuit result(c.width());
    for (size_t k = 0; k < s; k++) {
        result.append(c[k]);
    }
    return result;
}

Circuit inverse(const Circuit &c) {
    Circuit result(c.width());
    for (auto it = c.ops().rbegin(); it != c.ops().rend(); ++it) {
        Op op = *it;
        if (is_measurement(op.kind) || op.kind == GateKind::PREP_Z) {
            throw CircuitError("inverse: circuit contains non-unitary operations");
        }
        if (op.kind == GateKind::S) {
            op.kind = GateKind::SDG;
        } else if (op.kind == GateKind::SDG) {
            op.kind = GateKind::S;
        }
        result.append(op);
    }
    return result;
}

}  // namespace clinr
