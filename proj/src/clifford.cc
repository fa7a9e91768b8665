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

#include "clinr/clifford.h"

#include <utility>

namespace clinr {

void conjugate_frame(const Op &op, PauliOp &f) {
    const size_t a = op.q0;
    const size_t b = op.q1;
    switch (op.kind) {
        case GateKind::H: {
            bool x = f.x(a);
            f.set_x(a, f.z(a));
            f.set_z(a, x);
            break;
        }
        case GateKind::S:
        case GateKind::SDG:
            if (f.x(a)) {
                f.flip_z(a);
            }
            break;
        case GateKind::CX:
            if (f.x(a)) {
                f.flip_x(b);
            }
            if (f.z(b)) {
                f.flip_z(a);
            }
            break;
        case GateKind::CZ:
            if (f.x(a)) {
                f.flip_z(b);
            }
            if (f.x(b)) {
                f.flip_z(a);
            }
            break;
        case GateKind::PREP_Z:
            f.set_x(a, false);
            f.set_z(a, false);
            break;
        case GateKind::X:
        case GateKind::Z:
        case GateKind::MEAS_X:
        case GateKind::MEAS_Z:
        case GateKind::BARRIER:
            break;
    }
}

PauliOp propagate(const Circuit &c, const PauliOp &p, size_t from_index) {
    if (p.width() != c.width()) {
        throw std::invalid_argument("propagate: width mismatch");
    }
    if (from_index > c.size()) {
        throw std::out_of_range("propagate: start index out of range");
    }
    PauliOp frame = p;
    for (size_t k = from_index; k < c.size(); k++) {
        conjugate_frame(c[k], frame);
    }
    return frame;
}

SymplecticMap SymplecticMap::identity(size_t width) {
    std::vector<PauliOp> images;
    images.reserve(2 * width);
    for (size_t q = 0; q < width; q++) {
        images.push_back(PauliOp::single(width, q, 'X'));
    }
    for (size_t q = 0; q < width; q++) {
        images.push_back(PauliOp::single(width, q, 'Z'));
    }
    return SymplecticMap(std::move(images));
}

SymplecticMap::SymplecticMap(std::vector<PauliOp> images) : width_(images.size() / 2), images_(std::move(images)) {
    if (images_.size() != 2 * width_) {
        throw std::invalid_argument("SymplecticMap needs an even number of images");
    }
    for (const auto &img : images_) {
        if (img.width() != width_) {
            throw std::invalid_argument("SymplecticMap image width mismatch");
        }
    }
}

PauliOp SymplecticMap::apply(const PauliOp &p) const {
    if (p.width() != width_) {
        throw std::invalid_argument("SymplecticMap::apply: width mismatch");
    }
    PauliOp result(width_);
    for (size_t q = 0; q < width_; q++) {
        if (p.x(q)) {
            result *= images_[q];
        }
        if (p.z(q)) {
            result *= images_[width_ + q];
        }
    }
    return result;
}

SymplecticMap SymplecticMap::after(const SymplecticMap &first) const {
    std::vector<PauliOp> images;
    images.reserve(first.images_.size());
    for (const auto &img : first.images_) {
        images.push_back(apply(img));
    }
    return SymplecticMap(std::move(images));
}

void SymplecticMap::then(const Op &op) {
    for (auto &img : images_) {
        conjugate_frame(op, img);
    }
}

bool SymplecticMap::is_symplectic() const {
    for (size_t i = 0; i < 2 * width_; i++) {
        for (size_t j = i + 1; j < 2 * width_; j++) {
            bool expected = (j == i + width_) && i < width_;
            if (symplectic_product(images_[i], images_[j]) != expected) {
                return false;
            }
        }
    }
    return true;
}

SymplecticMap as_symplectic(const Circuit &c) {
    auto m = SymplecticMap::identity(c.width());
    for (const auto &op : c.ops()) {
        if (is_measurement(op.kind) || op.kind == GateKind::PREP_Z) {
            throw CircuitError("as_symplectic: circuit contains non-unitary operation " +
                               std::string(gate_name(op.kind)));
        }
        m.then(op);
    }
    return m;
}

GeneratorSet resource_stabilizers(const Circuit &c_r, size_t n) {
    if (c_r.width() != 2 * n) {
        throw std::invalid_argument("resource_stabilizers: circuit width must be 2n");
    }
    auto m = as_symplectic(c_r);
    GeneratorSet result(2 * n);
    for (char kind : {'X', 'Z'}) {
        for (size_t i = 0; i < n; i++) {
            auto bell = PauliOp::single(2 * n, i, kind) * PauliOp::single(2 * n, n + i, kind);
            result.push_back(m.apply(bell));
        }
    }
    return result;
}

GeneratorSet output_stabilizers(const Circuit &prep) {
    const size_t width = prep.width();
    std::vector<PauliOp> gens;
    for (size_t q = 0; q < width; q++) {
        gens.push_back(PauliOp::single(width, q, 'Z'));
    }
    std::vector<bool> touched(width, false);
    for (const auto &op : prep.ops()) {
        if (is_measurement(op.kind)) {
            throw CircuitError("output_stabilizers: measurements are not supported");
        }
        if (op.kind == GateKind::PREP_Z) {
            if (touched[op.q0]) {
                throw CircuitError("output_stabilizers: PREPZ on a qubit after it was acted upon");
            }
            continue;
        }
        if (gate_arity(op.kind) >= 1) {
            touched[op.q0] = true;
        }
        if (gate_arity(op.kind) == 2) {
            touched[op.q1] = true;
        }
        for (auto &g : gens) {
            conjugate_frame(op, g);
        }
    }
    return GeneratorSet(width, std::move(gens));
}

namespace {

PauliOp random_combination(const std::vector<PauliOp> &basis, size_t width, std::mt19937_64 &rng) {
    PauliOp result(width);
    uint64_t bits = 0;
    for (size_t k = 0; k < basis.size(); k++) {
        if ((k & 63) == 0) {
            bits = rng();
        }
        if ((bits >> (k & 63)) & 1) {
            result *= basis[k];
        }
    }
    return result;
}

// Projects u onto the symplectic complement of the hyperbolic pair (e, f), where [e, f] = 1.
void project_out(PauliOp &u, const PauliOp &e, const PauliOp &f) {
    bool ue = symplectic_product(u, e);
    bool uf = symplectic_product(u, f);
    if (uf) {
        u *= e;
    }
    if (ue) {
        u *= f;
    }
}

}  // namespace

SymplecticMap random_symplectic(size_t n, std::mt19937_64 &rng) {
    // Picks a uniformly random hyperbolic pair inside the complement of the pairs chosen so
    // far. Every symplectic basis is equally likely, so the resulting map is uniform.
    std::vector<PauliOp> space = SymplecticMap::identity(n).images();
    std::vector<PauliOp> x_images;
    std::vector<PauliOp> z_images;
    for (size_t i = 0; i < n; i++) {
        PauliOp v(n);
        do {
            v = random_combination(space, n, rng);
        } while (v.is_identity());
        PauliOp w(n);
        do {
            w = random_combination(space, n, rng);
        } while (!symplectic_product(v, w));
        x_images.push_back(v);
        z_images.push_back(w);

        for (auto &u : space) {
            project_out(u, v, w);
        }
        std::vector<PauliOp> next;
        while (next.size() + 2 < space.size()) {
            size_t a = 0;
            while (space[a].is_identity()) {
                a++;
            }
            size_t b = 0;
            while (!symplectic_product(space[a], space[b])) {
                b++;
            }
            PauliOp e = space[a];
            PauliOp f = space[b];
            next.push_back(e);
            next.push_back(f);
            for (auto &u : space) {
                project_out(u, e, f);
            }
        }
        space = std::move(next);
    }
    std::vector<PauliOp> images = std::move(x_images);
    images.insert(images.end(), z_images.begin(), z_images.end());
    return SymplecticMap(std::move(images));
}

Circuit synthesize(const SymplecticMap &target) {
    const size_t n = target.width();
    SymplecticMap m = target;
    std::vector<Op> gates;
    auto apply = [&](GateKind kind, size_t a, size_t b = 0) {
        Op op{kind, static_cast<uint32_t>(a), static_cast<uint32_t>(b), 0};
        m.then(op);
        gates.push_back(op);
    };

    // Reduce the images of (X_i, Z_i) to (X_i, Z_i) one qubit at a time; the gates
    // only touch qubits >= i, so earlier qubits stay fixed.
    for (size_t i = 0; i < n; i++) {
        auto img_x = [&]() -> const PauliOp & { return m.image_x(i); };
        auto img_z = [&]() -> const PauliOp & { return m.image_z(i); };

        for (size_t j = i; j < n; j++) {
            if (img_x().z(j)) {
                apply(img_x().x(j) ? GateKind::S : GateKind::H, j);
            }
        }
        if (!img_x().x(i)) {
            size_t j = i + 1;
            while (!img_x().x(j)) {
                j++;
            }
            apply(GateKind::CX, j, i);
        }
        for (size_t j = i + 1; j < n; j++) {
            if (img_x().x(j)) {
                apply(GateKind::CX, i, j);
            }
        }

        for (size_t j = i + 1; j < n; j++) {
            if (img_z().x(j)) {
                if (img_z().z(j)) {
                    apply(GateKind::S, j);
                }
                apply(GateKind::H, j);
            }
        }
        for (size_t j = i + 1; j < n; j++) {
            if (img_z().z(j)) {
                apply(GateKind::CX, j, i);
            }
        }
        if (img_z().x(i)) {
            apply(GateKind::H, i);
            apply(GateKind::S, i);
            apply(GateKind::H, i);
        }
    }

    Circuit result(n);
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        Op op = *it;
        if (op.kind == GateKind::S) {
            op.kind = GateKind::SDG;
        }
        result.append(op);
    }
    return result;
}

Circuit random_clifford_circuit(size_t n, uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("random_clifford_circuit: n must be positive");
    }
    std::mt19937_64 rng(seed);
    return synthesize(random_symplectic(n, rng));
}

}  // namespace clinr
