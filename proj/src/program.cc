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

#include "clinr/program.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "clinr/clifford.h"
#include "clinr/tableau.h"
#include "json.hpp"

namespace clinr {

std::string_view phase_name(Phase phase) {
    switch (phase) {
        case Phase::PREP:
            return "PREP";
        case Phase::VERIFY:
            return "VERIFY";
        case Phase::INJECT:
            return "INJECT";
        case Phase::FINAL:
            return "FINAL";
    }
    return "?";
}

std::string_view context_name(OpContext context) {
    switch (context) {
        case OpContext::CIRCUIT:
            return "circuit";
        case OpContext::CPREP:
            return "cprep";
        case OpContext::RESOURCE:
            return "resource_prep";
        case OpContext::VERIFY_DATA:
            return "verify_data";
        case OpContext::VERIFY_ANCILLA:
            return "verify_ancilla";
        case OpContext::TELEPORT:
            return "teleport";
        case OpContext::CPREP_INV:
            return "cprep_inv";
        case OpContext::READOUT:
            return "readout";
    }
    return "?";
}

Circuit CPrepLayer::circuit() const {
    Circuit c(gates.size());
    for (uint32_t q = 0; q < gates.size(); q++) {
        switch (gates[q]) {
            case PrepGate::IDENTITY:
                break;
            case PrepGate::G_PI:
                c.append(GateKind::X, q);
                break;
            case PrepGate::G_PI2_X:
                c.append(GateKind::H, q);
                c.append(GateKind::S, q);
                c.append(GateKind::H, q);
                break;
            case PrepGate::G_PI2_Y:
                c.append(GateKind::H, q);
                break;
        }
    }
    return c;
}

PauliOp ClinrProgram::correction(const std::vector<uint8_t> &records) const {
    PauliOp q(n);
    for (const auto &[record, pauli] : correction_rule) {
        if (record < records.size() && records[record]) {
            q *= pauli;
        }
    }
    return q;
}

void ClinrProgram::append(const Op &op, Phase phase, OpContext context) {
    circuit.append(op);
    phases.push_back(phase);
    contexts.push_back(context);
}

void ClinrProgram::append(GateKind kind, Phase phase, OpContext context, uint32_t q0, uint32_t q1) {
    circuit.append(kind, q0, q1);
    phases.push_back(phase);
    contexts.push_back(context);
}

uint32_t ClinrProgram::measure(GateKind kind, uint32_t q, Phase phase, OpContext context) {
    uint32_t slot = circuit.measure(kind, q);
    phases.push_back(phase);
    contexts.push_back(context);
    return slot;
}

void ClinrProgram::append_mapped(const Circuit &c, const std::vector<uint32_t> &qubit_map, Phase phase,
                                 OpContext context) {
    if (c.has_measurements()) {
        throw std::invalid_argument("ClinrProgram::append_mapped: measurements are not supported");
    }
    for (const auto &op : c.ops()) {
        Op mapped = op;
        if (gate_arity(op.kind) >= 1) {
            mapped.q0 = qubit_map.at(op.q0);
        }
        if (gate_arity(op.kind) == 2) {
            mapped.q1 = qubit_map.at(op.q1);
        }
        append(mapped, phase, context);
    }
}

std::string ClinrProgram::str() const {
    std::istringstream lines(circuit.str());
    std::ostringstream out;
    std::string line;
    std::getline(lines, line);
    out << line << '\n';
    for (size_t k = 0; k < circuit.size(); k++) {
        std::getline(lines, line);
        if (k == 0 || phases[k] != phases[k - 1]) {
            out << "# PHASE " << phase_name(phases[k]) << '\n';
        }
        out << line << '\n';
    }
    return out.str();
}

std::string ClinrProgram::descriptor_json() const {
    auto one_based = [](const std::vector<uint32_t> &v) {
        std::vector<uint32_t> out;
        for (auto x : v) {
            out.push_back(x + 1);
        }
        return out;
    };
    nlohmann::json j;
    j["n"] = n;
    j["r"] = r;
    j["width"] = circuit.width();
    j["restart_boundary"] = restart_boundary ? nlohmann::json(*restart_boundary) : nlohmann::json(nullptr);
    j["verification_records"] = one_based(verification_records);
    j["verification_groups"] = verification_groups;
    j["output_mode"] = output_mode == OutputMode::FRAME ? "frame" : "z_readout";
    j["output_qubits"] = one_based(output_qubits);
    j["output_records"] = one_based(output_records);
    j["input_qubits"] = one_based(input_qubits);
    nlohmann::json rules = nlohmann::json::array();
    for (const auto &[record, pauli] : correction_rule) {
        rules.push_back({{"records", {record + 1}}, {"pauli", pauli.str()}});
    }
    j["correction_rule"] = rules;
    return j.dump(2);
}

Circuit resource_unitary(const Circuit &c) {
    const size_t n = c.width();
    Circuit result(2 * n);
    std::vector<uint32_t> map(n);
    std::iota(map.begin(), map.end(), static_cast<uint32_t>(n));
    result.append_mapped(c, map);
    return result;
}

Circuit build_resource_prep(const Circuit &c) {
    const auto n = static_cast<uint32_t>(c.width());
    Circuit result(2 * n);
    for (uint32_t q = 0; q < 2 * n; q++) {
        result.append(GateKind::PREP_Z, q);
    }
    for (uint32_t i = 0; i < n; i++) {
        result.append(GateKind::H, i);
        result.append(GateKind::CX, i, n + i);
    }
    result.append_circuit(resource_unitary(c));
    return result;
}

std::optional<uint32_t> append_stabilizer_measurement(ClinrProgram &prog, const PauliOp &p,
                                                      const std::vector<uint32_t> &data_map, uint32_t ancilla,
                                                      bool reset, bool measure) {
    if (p.is_identity()) {
        throw std::invalid_argument("stabilizer measurement of the identity");
    }
    const Phase phase = Phase::VERIFY;
    if (reset) {
        prog.append(GateKind::PREP_Z, phase, OpContext::VERIFY_ANCILLA, ancilla);
    }
    prog.append(GateKind::H, phase, OpContext::VERIFY_ANCILLA, ancilla);
    for (size_t j : p.support()) {
        uint32_t d = data_map.at(j);
        if (p.x(j) && p.z(j)) {
            prog.append(GateKind::SDG, phase, OpContext::VERIFY_DATA, d);
            prog.append(GateKind::CX, phase, OpContext::VERIFY_DATA, ancilla, d);
            prog.append(GateKind::S, phase, OpContext::VERIFY_DATA, d);
        } else if (p.x(j)) {
            prog.append(GateKind::CX, phase, OpContext::VERIFY_DATA, ancilla, d);
        } else {
            prog.append(GateKind::CZ, phase, OpContext::VERIFY_DATA, ancilla, d);
        }
    }
    if (!measure) {
        return std::nullopt;
    }
    return prog.measure(GateKind::MEAS_X, ancilla, phase, OpContext::VERIFY_ANCILLA);
}

Circuit build_stabilizer_measurement(const PauliOp &p) {
    const auto width = static_cast<uint32_t>(p.width());
    ClinrProgram prog;
    prog.circuit = Circuit(width + 1);
    std::vector<uint32_t> map(width);
    std::iota(map.begin(), map.end(), 0u);
    append_stabilizer_measurement(prog, p, map, width, true, true);
    return prog.circuit;
}

void validate_verification_sequence(const VerificationSequence &v, const GeneratorSet &stabilizers) {
    for (size_t k = 0; k < v.size(); k++) {
        if (v.width() != stabilizers.width()) {
            throw std::invalid_argument("verification sequence width " + std::to_string(v.width()) +
                                        " does not match the resource register width " +
                                        std::to_string(stabilizers.width()));
        }
        if (v[k].is_identity()) {
            throw std::invalid_argument("verification row " + std::to_string(k + 1) + " is the identity");
        }
        if (!in_span(v[k], stabilizers)) {
            throw std::invalid_argument("verification row " + std::to_string(k + 1) + " (" + v[k].str() +
                                        ") is not a stabilizer of the resource state");
        }
    }
    if (rank(v) != v.size()) {
        throw std::invalid_argument("verification rows are not independent");
    }
}

namespace {

std::vector<uint32_t> range(uint32_t begin, uint32_t count) {
    std::vector<uint32_t> v(count);
    std::iota(v.begin(), v.end(), begin);
    return v;
}

void require_unitary(const Circuit &c, const char *who) {
    for (const auto &op : c.ops()) {
        if (!is_unitary(op.kind) && op.kind != GateKind::BARRIER) {
            throw std::invalid_argument(std::string(who) + ": circuit must be measurement-free and unitary, found " +
                                        std::string(gate_name(op.kind)));
        }
    }
}

PauliOp map_through(const SymplecticMap &m, const PauliOp &p) {
    return m.apply(p);
}

}  // namespace

ClinrProgram build_clinr(const Circuit &c, const VerificationSequence &v) {
    require_unitary(c, "build_clinr");
    const auto n = static_cast<uint32_t>(c.width());
    const auto stabilizers = resource_stabilizers(resource_unitary(c), n);
    if (!v.empty() || v.width() != 0) {
        validate_verification_sequence(v, stabilizers);
    }

    ClinrProgram prog;
    prog.n = n;
    prog.r = v.size();
    const uint32_t width = 3 * n + (v.empty() ? 0 : 1);
    const uint32_t ancilla = 3 * n;
    prog.circuit = Circuit(width);
    prog.restart_boundary = 0;
    prog.resource_qubits = range(0, 2 * n);
    prog.input_qubits = range(2 * n, n);
    prog.output_qubits = range(n, n);

    prog.append_mapped(build_resource_prep(c), range(0, 2 * n), Phase::PREP, OpContext::RESOURCE);

    const auto data = range(0, 2 * n);
    for (size_t k = 0; k < v.size(); k++) {
        auto slot = append_stabilizer_measurement(prog, v[k], data, ancilla, true, true);
        prog.verification_records.push_back(*slot);
        prog.verification_groups.push_back(static_cast<uint32_t>(k));
    }

    for (uint32_t i = 0; i < n; i++) {
        prog.append(GateKind::CX, Phase::INJECT, OpContext::TELEPORT, 2 * n + i, i);
        prog.append(GateKind::H, Phase::INJECT, OpContext::TELEPORT, 2 * n + i);
    }
    std::vector<uint32_t> m_in(n), m_res(n);
    for (uint32_t i = 0; i < n; i++) {
        m_in[i] = prog.measure(GateKind::MEAS_Z, 2 * n + i, Phase::INJECT, OpContext::TELEPORT);
        m_res[i] = prog.measure(GateKind::MEAS_Z, i, Phase::INJECT, OpContext::TELEPORT);
    }

    const auto cmap = as_symplectic(c);
    for (uint32_t i = 0; i < n; i++) {
        prog.correction_rule.emplace_back(m_res[i], map_through(cmap, PauliOp::single(n, i, 'X')));
        prog.correction_rule.emplace_back(m_in[i], map_through(cmap, PauliOp::single(n, i, 'Z')));
    }
    return prog;
}

namespace {

void require_cz_only(const Circuit &c) {
    for (const auto &op : c.ops()) {
        if (op.kind != GateKind::CZ) {
            throw std::invalid_argument("build_cznr: circuit must contain only CZ gates, found " +
                                        std::string(gate_name(op.kind)));
        }
    }
}

Circuit graph_state_prep(const Circuit &c) {
    const auto n = static_cast<uint32_t>(c.width());
    Circuit prep(n);
    for (uint32_t q = 0; q < n; q++) {
        prep.append(GateKind::PREP_Z, q);
    }
    for (uint32_t q = 0; q < n; q++) {
        prep.append(GateKind::H, q);
    }
    prep.append_circuit(c);
    return prep;
}

// Resource C|+^n> on `reg`, without the preparations.
void append_graph_state(ClinrProgram &prog, const Circuit &c, const std::vector<uint32_t> &reg) {
    for (uint32_t q : reg) {
        prog.append(GateKind::H, Phase::PREP, OpContext::RESOURCE, q);
    }
    prog.append_mapped(c, reg, Phase::PREP, OpContext::RESOURCE);
}

// Moves the state of `from` onto the resource register `to` via CX(to -> from) written as
// H . CZ . H on `from`. The source must then be read out in Z.
void append_teleport(ClinrProgram &prog, const std::vector<uint32_t> &from, const std::vector<uint32_t> &to) {
    for (size_t i = 0; i < from.size(); i++) {
        prog.append(GateKind::H, Phase::INJECT, OpContext::TELEPORT, from[i]);
        prog.append(GateKind::CZ, Phase::INJECT, OpContext::TELEPORT, from[i], to[i]);
        prog.append(GateKind::H, Phase::INJECT, OpContext::TELEPORT, from[i]);
    }
}

// Pushes every pending byproduct through `m` and adds X_i byproducts (conjugated by `m`) for `records`.
void teleport_byproducts(std::vector<std::pair<uint32_t, PauliOp>> &rule, const SymplecticMap &m,
                         const std::vector<uint32_t> &records) {
    for (auto &entry : rule) {
        entry.second = m.apply(entry.second);
    }
    const size_t n = m.width();
    for (size_t i = 0; i < records.size(); i++) {
        rule.emplace_back(records[i], m.apply(PauliOp::single(n, i, 'X')));
    }
}

}  // namespace

ClinrProgram build_cznr(const Circuit &c, const VerificationSequence &v) {
    require_cz_only(c);
    const auto n = static_cast<uint32_t>(c.width());
    const auto stabilizers = output_stabilizers(graph_state_prep(c));
    if (!v.empty() || v.width() != 0) {
        validate_verification_sequence(v, stabilizers);
    }

    ClinrProgram prog;
    prog.n = n;
    prog.r = v.size();
    prog.circuit = Circuit(2 * n + (v.empty() ? 0 : 1));
    prog.restart_boundary = 0;
    const auto res = range(0, n);
    const auto in = range(n, n);
    const uint32_t ancilla = 2 * n;
    prog.resource_qubits = res;
    prog.input_qubits = in;
    prog.output_qubits = res;

    for (uint32_t q : res) {
        prog.append(GateKind::PREP_Z, Phase::PREP, OpContext::RESOURCE, q);
    }
    append_graph_state(prog, c, res);
    for (size_t k = 0; k < v.size(); k++) {
        auto slot = append_stabilizer_measurement(prog, v[k], res, ancilla, true, true);
        prog.verification_records.push_back(*slot);
        prog.verification_groups.push_back(static_cast<uint32_t>(k));
    }
    append_teleport(prog, in, res);
    std::vector<uint32_t> records;
    for (uint32_t q : in) {
        records.push_back(prog.measure(GateKind::MEAS_Z, q, Phase::INJECT, OpContext::TELEPORT));
    }
    teleport_byproducts(prog.correction_rule, as_symplectic(c), records);
    return prog;
}

ClinrProgram make_direct_program(const Circuit &c) {
    require_unitary(c, "make_direct_program");
    ClinrProgram prog;
    const auto n = static_cast<uint32_t>(c.width());
    prog.n = n;
    prog.circuit = Circuit(n);
    prog.input_qubits = range(0, n);
    prog.output_qubits = range(0, n);
    prog.append_mapped(c, range(0, n), Phase::FINAL, OpContext::CIRCUIT);
    return prog;
}

std::string_view weight_class_name(WeightClass w) {
    return w == WeightClass::LOW ? "low" : "high";
}

WeightClass parse_weight_class(std::string_view text) {
    if (text == "low") {
        return WeightClass::LOW;
    }
    if (text == "high") {
        return WeightClass::HIGH;
    }
    throw std::invalid_argument("weight class must be 'low' or 'high', got '" + std::string(text) + "'");
}

Circuit complete_graph_cz(size_t n) {
    Circuit c(n);
    for (uint32_t i = 0; i < n; i++) {
        for (uint32_t j = i + 1; j < n; j++) {
            c.append(GateKind::CZ, i, j);
        }
    }
    return c;
}

CPrepLayer build_cprep(size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    CPrepLayer layer;
    for (size_t q = 0; q < n; q++) {
        uint64_t bits = rng();
        bool a = bits & 1, b = (bits >> 1) & 1, c = (bits >> 2) & 1;
        if (c && a) {
            layer.gates.push_back(PrepGate::G_PI);
        } else if (c) {
            layer.gates.push_back(b ? PrepGate::G_PI2_Y : PrepGate::G_PI2_X);
        } else {
            layer.gates.push_back(PrepGate::IDENTITY);
        }
    }
    return layer;
}

VerificationSequence cznr_verification_family(size_t n, size_t r, WeightClass weight, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<uint32_t> perm = range(0, static_cast<uint32_t>(n));
    std::shuffle(perm.begin(), perm.end(), rng);
    VerificationSequence v(n);
    if (weight == WeightClass::LOW) {
        if (2 * r > n) {
            throw std::invalid_argument("low-weight family needs 2r <= n disjoint qubit pairs");
        }
        for (size_t k = 0; k < r; k++) {
            PauliOp p(n);
            for (uint32_t q : {perm[2 * k], perm[2 * k + 1]}) {
                p.set_x(q, true);
                p.set_z(q, true);
            }
            v.push_back(p);
        }
    } else {
        if (r > n) {
            throw std::invalid_argument("high-weight family needs r <= n");
        }
        for (size_t k = 0; k < r; k++) {
            PauliOp p(n);
            for (uint32_t q = 0; q < n; q++) {
                p.set_z(q, true);
            }
            p.set_z(perm[k], false);
            p.set_x(perm[k], true);
            v.push_back(p);
        }
    }
    validate_verification_sequence(v, output_stabilizers(graph_state_prep(complete_graph_cz(n))));
    return v;
}

ClinrProgram build_deferred_cznr_experiment(size_t n, size_t r, WeightClass weight, uint64_t seed) {
    if (r < 1 || r > 3) {
        throw std::invalid_argument("deferred CZNR experiment supports r in {1, 2, 3}");
    }
    const auto nn = static_cast<uint32_t>(n);
    const auto rr = static_cast<uint32_t>(r);
    const Circuit c = complete_graph_cz(n);
    // Distinct streams for the input layer and the verification family.
    std::seed_seq seq{seed, uint64_t{0x5eed}};
    std::vector<uint64_t> seeds(2);
    seq.generate(seeds.begin(), seeds.end());
    const CPrepLayer cprep = build_cprep(n, seeds[0]);
    const VerificationSequence v = cznr_verification_family(n, r, weight, seeds[1]);

    ClinrProgram prog;
    prog.n = n;
    prog.r = r;
    prog.cprep = cprep;
    prog.output_mode = OutputMode::Z_READOUT;
    const uint32_t width = 3 * nn + 2 * rr;
    prog.circuit = Circuit(width);
    const auto r_in = range(0, nn);
    const auto r_1 = range(nn, nn);
    const auto r_2 = range(2 * nn, nn);
    const auto anc_1 = range(3 * nn, rr);
    const auto anc_2 = range(3 * nn + rr, rr);
    prog.input_qubits = r_in;
    prog.resource_qubits = r_1;
    prog.resource_qubits.insert(prog.resource_qubits.end(), r_2.begin(), r_2.end());

    for (uint32_t q = 0; q < width; q++) {
        prog.append(GateKind::PREP_Z, Phase::PREP, OpContext::RESOURCE, q);
    }
    const Circuit cprep_circuit = cprep.circuit();
    prog.append_mapped(cprep_circuit, r_in, Phase::PREP, OpContext::CPREP);
    append_graph_state(prog, c, r_1);
    append_graph_state(prog, c, r_2);
    for (size_t k = 0; k < r; k++) {
        append_stabilizer_measurement(prog, v[k], r_1, anc_1[k], false, false);
    }
    for (size_t k = 0; k < r; k++) {
        append_stabilizer_measurement(prog, v[k], r_2, anc_2[k], false, false);
    }
    append_teleport(prog, r_in, r_1);
    append_teleport(prog, r_1, r_2);
    const Circuit cprep_inv = inverse(cprep_circuit);
    prog.append_mapped(cprep_inv, r_2, Phase::FINAL, OpContext::CPREP_INV);
    for (size_t k = 0; k < r; k++) {
        prog.append(GateKind::H, Phase::FINAL, OpContext::VERIFY_ANCILLA, anc_1[k]);
    }
    for (size_t k = 0; k < r; k++) {
        prog.append(GateKind::H, Phase::FINAL, OpContext::VERIFY_ANCILLA, anc_2[k]);
    }

    std::vector<uint32_t> b0, b1;
    for (uint32_t q : r_in) {
        b0.push_back(prog.measure(GateKind::MEAS_Z, q, Phase::FINAL, OpContext::READOUT));
    }
    for (uint32_t q : r_1) {
        b1.push_back(prog.measure(GateKind::MEAS_Z, q, Phase::FINAL, OpContext::READOUT));
    }
    for (uint32_t q : r_2) {
        prog.output_records.push_back(prog.measure(GateKind::MEAS_Z, q, Phase::FINAL, OpContext::READOUT));
    }
    for (size_t k = 0; k < r; k++) {
        prog.verification_records.push_back(prog.measure(GateKind::MEAS_Z, anc_1[k], Phase::FINAL, OpContext::READOUT));
        prog.verification_groups.push_back(static_cast<uint32_t>(k));
    }
    for (size_t k = 0; k < r; k++) {
        prog.verification_records.push_back(prog.measure(GateKind::MEAS_Z, anc_2[k], Phase::FINAL, OpContext::READOUT));
        prog.verification_groups.push_back(static_cast<uint32_t>(k));
    }

    const auto cmap = as_symplectic(c);
    teleport_byproducts(prog.correction_rule, cmap, b0);
    teleport_byproducts(prog.correction_rule, cmap, b1);
    const auto final_map = as_symplectic(cprep_inv);
    for (auto &entry : prog.correction_rule) {
        entry.second = final_map.apply(entry.second);
    }
    return prog;
}

ClinrProgram build_direct_cznr_experiment(size_t n, uint64_t seed) {
    const auto nn = static_cast<uint32_t>(n);
    std::seed_seq seq{seed, uint64_t{0x5eed}};
    std::vector<uint64_t> seeds(2);
    seq.generate(seeds.begin(), seeds.end());
    const CPrepLayer cprep = build_cprep(n, seeds[0]);
    const Circuit c = complete_graph_cz(n);

    ClinrProgram prog;
    prog.n = n;
    prog.cprep = cprep;
    prog.output_mode = OutputMode::Z_READOUT;
    prog.circuit = Circuit(n);
    const auto reg = range(0, nn);
    prog.input_qubits = reg;
    for (uint32_t q : reg) {
        prog.append(GateKind::PREP_Z, Phase::FINAL, OpContext::CIRCUIT, q);
    }
    const Circuit cprep_circuit = cprep.circuit();
    prog.append_mapped(cprep_circuit, reg, Phase::FINAL, OpContext::CPREP);
    prog.append_mapped(c, reg, Phase::FINAL, OpContext::CIRCUIT);
    prog.append_mapped(c, reg, Phase::FINAL, OpContext::CIRCUIT);
    prog.append_mapped(inverse(cprep_circuit), reg, Phase::FINAL, OpContext::CPREP_INV);
    for (uint32_t q : reg) {
        prog.output_records.push_back(prog.measure(GateKind::MEAS_Z, q, Phase::FINAL, OpContext::READOUT));
    }
    return prog;
}

PauliOp closed_form_two_teleport_correction(const CPrepLayer &cprep, const Circuit &c,
                                            const std::vector<uint8_t> &b0, const std::vector<uint8_t> &b1) {
    const size_t n = c.width();
    PauliOp x(n);
    for (size_t i = 0; i < n; i++) {
        x.set_x(i, (b0.at(i) ^ b1.at(i)) & 1);
    }
    // C_prep C X C C_prep^dagger acting on the state: conjugation by C then by C_prep.
    const auto cmap = as_symplectic(c);
    const auto pmap = as_symplectic(cprep.circuit());
    return pmap.apply(cmap.apply(x));
}

size_t count_noiseless_failures(const ClinrProgram &prog, const Circuit &logical, size_t samples, uint64_t seed) {
    size_t failures = 0;
    const size_t width = prog.circuit.width();
    for (size_t s = 0; s < samples; s++) {
        std::seed_seq seq{seed, uint64_t{s}};
        std::vector<uint64_t> seeds(3);
        seq.generate(seeds.begin(), seeds.end());
        TableauSimulator sim(width, seeds[0]);
        std::vector<uint8_t> records, deterministic;

        Circuit cin(prog.n);
        std::vector<uint8_t> flips(prog.n, 0);
        if (prog.output_mode == OutputMode::FRAME) {
            cin = random_clifford_circuit(prog.n, seeds[1]);
            std::mt19937_64 rng(seeds[2]);
            for (auto &f : flips) {
                f = rng() & 1;
            }
            Circuit setup(width);
            setup.append_mapped(cin, prog.input_qubits);
            for (size_t i = 0; i < prog.n; i++) {
                if (flips[i]) {
                    setup.append(GateKind::X, prog.input_qubits[i]);
                }
            }
            sim.run(setup, records);
        }
        sim.run(prog.circuit, records, &deterministic);

        bool ok = true;
        for (uint32_t k : prog.verification_records) {
            ok = ok && deterministic[k];
        }
        const PauliOp q = prog.correction(records);
        if (prog.output_mode == OutputMode::Z_READOUT) {
            for (size_t i = 0; i < prog.n; i++) {
                ok = ok && ((records[prog.output_records[i]] ^ q.x(i)) == 0);
            }
        } else {
            Circuit undo(width);
            for (size_t i = 0; i < prog.n; i++) {
                if (q.x(i)) {
                    undo.append(GateKind::X, prog.output_qubits[i]);
                }
                if (q.z(i)) {
                    undo.append(GateKind::Z, prog.output_qubits[i]);
                }
            }
            undo.append_mapped(inverse(logical), prog.output_qubits);
            for (size_t i = 0; i < prog.n; i++) {
                if (flips[i]) {
                    undo.append(GateKind::X, prog.output_qubits[i]);
                }
            }
            undo.append_mapped(inverse(cin), prog.output_qubits);
            std::vector<uint8_t> scratch;
            sim.run(undo, scratch);
            for (uint32_t q_out : prog.output_qubits) {
                auto m = sim.measure_z(q_out);
                ok = ok && m.deterministic && !m.outcome;
            }
        }
        failures += ok ? 0 : 1;
    }
    return failures;
}

}  // namespace clinr
