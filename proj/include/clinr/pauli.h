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

#ifndef CLINR_PAULI_H
#define CLINR_PAULI_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace clinr {

/// Number of 64-bit words needed to hold `bits` bits.
constexpr size_t words_for(size_t bits) {
    return (bits + 63) / 64;
}

/// A phase-free n-qubit Pauli operator X^u Z^v.
///
/// The bits are packed as one row of the 2N-column symplectic matrix: the first
/// `words_for(width)` words hold the X part and the next `words_for(width)` words
/// hold the Z part. Qubit indices are 0-based.
class PauliOp {
   public:
    PauliOp() = default;
    explicit PauliOp(size_t width);

    static PauliOp from_str(std::string_view text);
    static PauliOp single(size_t width, size_t qubit, char pauli);

    size_t width() const {
        return width_;
    }
    size_t num_words() const {
        return words_.size() / 2;
    }

    bool x(size_t q) const {
        return (words_[q >> 6] >> (q & 63)) & 1;
    }
    bool z(size_t q) const {
        return (words_[num_words() + (q >> 6)] >> (q & 63)) & 1;
    }
    void set_x(size_t q, bool v);
    void set_z(size_t q, bool v);
    void flip_x(size_t q) {
        words_[q >> 6] ^= uint64_t{1} << (q & 63);
    }
    void flip_z(size_t q) {
        words_[num_words() + (q >> 6)] ^= uint64_t{1} << (q & 63);
    }

    /// Bit `c` of the 2N-column row: columns [0, N) are X bits, [N, 2N) are Z bits.
    bool column(size_t c) const {
        return c < width_ ? x(c) : z(c - width_);
    }

    std::span<const uint64_t> x_words() const {
        return {words_.data(), num_words()};
    }
    std::span<const uint64_t> z_words() const {
        return {words_.data() + num_words(), num_words()};
    }
    std::span<uint64_t> x_words() {
        return {words_.data(), num_words()};
    }
    std::span<uint64_t> z_words() {
        return {words_.data() + num_words(), num_words()};
    }
    const std::vector<uint64_t> &words() const {
        return words_;
    }

    bool is_identity() const;
    size_t weight() const;
    std::vector<size_t> support() const;

    /// Restriction to `count` consecutive qubits starting at `offset`.
    PauliOp slice(size_t offset, size_t count) const;
    /// Writes `p` onto qubits [offset, offset + p.width()).
    void assign_slice(size_t offset, const PauliOp &p);

    PauliOp &operator*=(const PauliOp &other);
    bool operator==(const PauliOp &other) const = default;
    bool operator<(const PauliOp &other) const;

    std::string str() const;

   private:
    size_t width_ = 0;
    std::vector<uint64_t> words_;
};

PauliOp operator*(PauliOp a, const PauliOp &b);

/// [P, Q] = (u|v') + (u'|v) mod 2. Zero iff the operators commute.
bool symplectic_product(const PauliOp &p, const PauliOp &q);

/// Product in the phase-free Pauli group.
PauliOp multiply(const PauliOp &p, const PauliOp &q);

PauliOp parse_pauli(std::string_view text);
std::string format_pauli(const PauliOp &p);

/// An ordered list of equal-width Pauli operators, viewed as an r x 2N binary matrix.
class GeneratorSet {
   public:
    GeneratorSet() = default;
    explicit GeneratorSet(size_t width) : width_(width) {
    }
    GeneratorSet(size_t width, std::vector<PauliOp> rows);

    /// Newline or whitespace separated Pauli strings. Blank lines and `#` comments are skipped.
    static GeneratorSet from_text(std::string_view text);
    static GeneratorSet from_strings(const std::vector<std::string> &rows);

    size_t width() const {
        return width_;
    }
    size_t size() const {
        return rows_.size();
    }
    bool empty() const {
        return rows_.empty();
    }
    const PauliOp &operator[](size_t k) const {
        return rows_[k];
    }
    PauliOp &operator[](size_t k) {
        return rows_[k];
    }
    const std::vector<PauliOp> &rows() const {
        return rows_;
    }
    auto begin() const {
        return rows_.begin();
    }
    auto end() const {
        return rows_.end();
    }

    void push_back(PauliOp row);

    bool operator==(const GeneratorSet &other) const = default;

    /// One Pauli string per line.
    std::string str() const;

    /// Concatenated row words; order-sensitive fingerprint of the sequence.
    std::vector<uint64_t> fingerprint() const;

   private:
    size_t width_ = 0;
    std::vector<PauliOp> rows_;
};

size_t rank(const GeneratorSet &g);
bool in_span(const PauliOp &p, const GeneratorSet &g);
bool commutes_with_all(const PauliOp &p, const GeneratorSet &g);

/// Reduced row-echelon form with zero rows removed.
///
/// Pivots are chosen in column order X_0..X_{N-1}, Z_0..Z_{N-1}. Two sets have identical
/// canonical forms iff they generate the same subgroup.
GeneratorSet canonical_form(const GeneratorSet &g);

/// Product of the rows of `g` selected by the set bits of `mask`.
PauliOp select_rows(const GeneratorSet &g, std::span<const uint64_t> mask);

/// Uniform element of <g> when the rows are independent. Uses raw 64-bit draws from `rng`.
template <typename Rng>
PauliOp sample_uniform_element(const GeneratorSet &g, Rng &rng) {
    std::vector<uint64_t> mask(words_for(g.size()));
    for (auto &w : mask) {
        w = static_cast<uint64_t>(rng());
    }
    return select_rows(g, mask);
}

}  // namespace clinr

#endif
