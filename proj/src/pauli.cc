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

#include "clinr/pauli.h"

#include <algorithm>
#include <bit>
#include <sstream>

namespace clinr {

namespace {

void require_same_width(size_t a, size_t b, const char *what) {
    if (a != b) {
        throw std::invalid_argument(
            std::string(what) + ": width mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

}  // namespace

PauliOp::PauliOp(size_t width) : width_(width), words_(2 * words_for(width), 0) {
}

PauliOp PauliOp::from_str(std::string_view text) {
    if (text.empty()) {
        throw std::invalid_argument("empty Pauli string");
    }
    PauliOp result(text.size());
    for (size_t q = 0; q < text.size(); q++) {
        switch (text[q]) {
            case 'I':
                break;
            case 'X':
                result.flip_x(q);
                break;
            case 'Y':
                result.flip_x(q);
                result.flip_z(q);
                break;
            case 'Z':
                result.flip_z(q);
                break;
            default:
                throw std::invalid_argument("invalid Pauli character '" + std::string(1, text[q]) + "' in \"" +
                                            std::string(text) + "\"");
        }
    }
    return result;
}

PauliOp PauliOp::single(size_t width, size_t qubit, char pauli) {
    if (qubit >= width) {
        throw std::out_of_range("qubit index out of range");
    }
    PauliOp result(width);
    if (pauli == 'X' || pauli == 'Y') {
        result.flip_x(qubit);
    }
    if (pauli == 'Z' || pauli == 'Y') {
        result.flip_z(qubit);
    }
    return result;
}

void PauliOp::set_x(size_t q, bool v) {
    if (x(q) != v) {
        flip_x(q);
    }
}

void PauliOp::set_z(size_t q, bool v) {
    if (z(q) != v) {
        flip_z(q);
    }
}

bool PauliOp::is_identity() const {
    return std::all_of(words_.begin(), words_.end(), [](uint64_t w) { return w == 0; });
}

size_t PauliOp::weight() const {
    size_t n = 0;
    auto xs = x_words();
    auto zs = z_words();
    for (size_t k = 0; k < xs.size(); k++) {
        n += std::popcount(xs[k] | zs[k]);
    }
    return n;
}

std::vector<size_t> PauliOp::support() const {
    std::vector<size_t> result;
    for (size_t q = 0; q < width_; q++) {
        if (x(q) || z(q)) {
            result.push_back(q);
        }
    }
    return result;
}

PauliOp PauliOp::slice(size_t offset, size_t count) const {
    if (offset + count > width_) {
        throw std::out_of_range("Pauli slice out of range");
    }
    PauliOp result(count);
    for (size_t q = 0; q < count; q++) {
        result.set_x(q, x(offset + q));
        result.set_z(q, z(offset + q));
    }
    return result;
}

void PauliOp::assign_slice(size_t offset, const PauliOp &p) {
    if (offset + p.width() > width_) {
        throw std::out_of_range("Pauli slice out of range");
    }
    for (size_t q = 0; q < p.width(); q++) {
        set_x(offset + q, p.x(q));
        set_z(offset + q, p.z(q));
    }
}

PauliOp &PauliOp::operator*=(const PauliOp &other) {
    require_same_width(width_, other.width_, "multiply");
    for (size_t k = 0; k < words_.size(); k++) {
        words_[k] ^= other.words_[k];
    }
    return *this;
}

bool PauliOp::operator<(const PauliOp &other) const {
    if (width_ != other.width_) {
        return width_ < other.width_;
    }
    return words_ < other.words_;
}

std::string PauliOp::str() const {
    std::string result(width_, 'I');
    for (size_t q = 0; q < width_; q++) {
        result[q] = "IXZY"[x(q) + 2 * z(q)];
    }
    return result;
}

PauliOp operator*(PauliOp a, const PauliOp &b) {
    a *= b;
    return a;
}

bool symplectic_product(const PauliOp &p, const PauliOp &q) {
    require_same_width(p.width(), q.width(), "symplectic_product");
    auto px = p.x_words();
    auto pz = p.z_words();
    auto qx = q.x_words();
    auto qz = q.z_words();
    uint64_t acc = 0;
    for (size_t k = 0; k < px.size(); k++) {
        acc ^= (px[k] & qz[k]) ^ (qx[k] & pz[k]);
    }
    return std::popcount(acc) & 1;
}

PauliOp multiply(const PauliOp &p, const PauliOp &q) {
    return p * q;
}

PauliOp parse_pauli(std::string_view text) {
    return PauliOp::from_str(text);
}

std::string format_pauli(const PauliOp &p) {
    return p.str();
}

GeneratorSet::GeneratorSet(size_t width, std::vector<PauliOp> rows) : width_(width), rows_(std::move(rows)) {
    for (const auto &row : rows_) {
        require_same_width(width_, row.width(), "GeneratorSet");
    }
}

GeneratorSet GeneratorSet::from_text(std::string_view text) {
    std::vector<std::string> tokens;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream words(line);
        std::string word;
        while (words >> word) {
            tokens.push_back(word);
        }
    }
    return from_strings(tokens);
}

GeneratorSet GeneratorSet::from_strings(const std::vector<std::string> &rows) {
    if (rows.empty()) {
        return GeneratorSet();
    }
    GeneratorSet result(rows.front().size());
    for (const auto &row : rows) {
        result.push_back(PauliOp::from_str(row));
    }
    return result;
}

void GeneratorSet::push_back(PauliOp row) {
    if (rows_.empty() && width_ == 0) {
        width_ = row.width();
    }
    require_same_width(width_, row.width(), "GeneratorSet::push_back");
    rows_.push_back(std::move(row));
}

std::string GeneratorSet::str() const {
    std::string result;
    for (const auto &row : rows_) {
        result += row.str();
        result += '\n';
    }
    return result;
}

std::vector<uint64_t> GeneratorSet::fingerprint() const {
    std::vector<uint64_t> result;
    for (const auto &row : rows_) {
        result.insert(result.end(), row.words().begin(), row.words().end());
    }
    return result;
}

namespace {

// In-place Gaussian elimination; returns the rank. With `full`, clears above pivots too.
size_t eliminate(std::vector<PauliOp> &rows, size_t width, bool full) {
    size_t r = 0;
    for (size_t col = 0; col < 2 * width && r < rows.size(); col++) {
        size_t pivot = r;
        while (pivot < rows.size() && !rows[pivot].column(col)) {
            pivot++;
        }
        if (pivot == rows.size()) {
            continue;
        }
        std::swap(rows[r], rows[pivot]);
        for (size_t k = full ? 0 : r + 1; k < rows.size(); k++) {
            if (k != r && rows[k].column(col)) {
                rows[k] *= rows[r];
            }
        }
        r++;
    }
    return r;
}

}  // namespace

size_t rank(const GeneratorSet &g) {
    auto rows = g.rows();
    return eliminate(rows, g.width(), false);
}

bool in_span(const PauliOp &p, const GeneratorSet &g) {
    if (g.empty()) {
        return p.is_identity();
    }
    require_same_width(p.width(), g.width(), "in_span");
    auto basis = canonical_form(g);
    PauliOp rest = p;
    for (const auto &row : basis) {
        size_t col = 0;
        while (!row.column(col)) {
            col++;
        }
        if (rest.column(col)) {
            rest *= row;
        }
    }
    return rest.is_identity();
}

bool commutes_with_all(const PauliOp &p, const GeneratorSet &g) {
    for (const auto &row : g) {
        if (symplectic_product(p, row)) {
            return false;
        }
    }
    return true;
}

GeneratorSet canonical_form(const GeneratorSet &g) {
    auto rows = g.rows();
    size_t r = eliminate(rows, g.width(), true);
    rows.resize(r);
    return GeneratorSet(g.width(), std::move(rows));
}

PauliOp select_rows(const GeneratorSet &g, std::span<const uint64_t> mask) {
    PauliOp result(g.width());
    for (size_t k = 0; k < g.size(); k++) {
        if ((mask[k >> 6] >> (k & 63)) & 1) {
            result *= g[k];
        }
    }
    return result;
}

}  // namespace clinr
