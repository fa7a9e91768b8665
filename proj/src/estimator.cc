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

#include "clinr/estimator.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <thread>

#include "clinr/clifford.h"
#include "clinr/proxy.h"

namespace clinr {

namespace {

constexpr uint64_t kBlockShots = 1024;

void set_bit(uint64_t *row, size_t bit) {
    row[bit / 64] |= uint64_t{1} << (bit % 64);
}

void xor_into(uint64_t *dst, const uint64_t *src, size_t words) {
    for (size_t w = 0; w < words; w++) {
        dst[w] ^= src[w];
    }
}

bool any_masked(const uint64_t *row, const std::vector<uint64_t> &mask) {
    uint64_t acc = 0;
    for (size_t w = 0; w < mask.size(); w++) {
        acc |= row[w] & mask[w];
    }
    return acc != 0;
}

bool contains_all(const std::vector<uint32_t> &set, const std::vector<uint32_t> &items) {
    return std::all_of(items.begin(), items.end(),
                       [&](uint32_t q) { return std::find(set.begin(), set.end(), q) != set.end(); });
}

}  // namespace

FaultEffectModel::FaultEffectModel(const ClinrProgram &prog, const NoiseParams &params,
                                   bool idle_input_during_prep) {
    const Circuit &c = prog.circuit;
    const size_t width = c.width();
    const size_t n = prog.n;
    num_checks_ = prog.verification_records.size();
    num_outputs_ = prog.output_mode == OutputMode::FRAME ? 2 * n : n;
    words_ = std::max<size_t>(1, words_for(num_checks_ + num_outputs_));
    groups_ = prog.verification_groups;
    output_mask_.assign(words_, 0);
    for (size_t b = 0; b < num_outputs_; b++) {
        set_bit(output_mask_.data(), num_checks_ + b);
    }

    // Coefficient of every record in every functional.
    std::vector<uint64_t> rec_coef(c.record_count() * words_, 0);
    auto coef = [&](uint32_t record) { return &rec_coef[static_cast<size_t>(record) * words_]; };
    for (size_t k = 0; k < num_checks_; k++) {
        set_bit(coef(prog.verification_records[k]), k);
    }
    // Column masks: bit j of xm[q] is the X component of functional j on qubit q.
    std::vector<uint64_t> xm(width * words_, 0), zm(width * words_, 0);
    auto xcol = [&](size_t q) { return &xm[q * words_]; };
    auto zcol = [&](size_t q) { return &zm[q * words_]; };
    if (prog.output_mode == OutputMode::FRAME) {
        for (size_t i = 0; i < n; i++) {
            set_bit(zcol(prog.output_qubits[i]), num_checks_ + 2 * i);
            set_bit(xcol(prog.output_qubits[i]), num_checks_ + 2 * i + 1);
        }
        for (const auto &[record, pauli] : prog.correction_rule) {
            for (size_t i = 0; i < n; i++) {
                if (pauli.x(i)) {
                    coef(record)[(num_checks_ + 2 * i) / 64] ^= uint64_t{1} << ((num_checks_ + 2 * i) % 64);
                }
                if (pauli.z(i)) {
                    coef(record)[(num_checks_ + 2 * i + 1) / 64] ^= uint64_t{1} << ((num_checks_ + 2 * i + 1) % 64);
                }
            }
        }
    } else {
        for (size_t i = 0; i < n; i++) {
            set_bit(coef(prog.output_records[i]), num_checks_ + i);
        }
        for (const auto &[record, pauli] : prog.correction_rule) {
            for (size_t i = 0; i < n; i++) {
                if (pauli.x(i)) {
                    coef(record)[(num_checks_ + i) / 64] ^= uint64_t{1} << ((num_checks_ + i) % 64);
                }
            }
        }
    }

    auto faults = schedule_faults(c, params);
    std::vector<std::vector<size_t>> by_op(c.size());
    for (size_t i = 0; i < faults.size(); i++) {
        by_op[faults[i].after_op].push_back(i);
    }

    auto region_of = [&](const FaultLocation &f) -> std::optional<Region> {
        if (!prog.restart_boundary.has_value()) {
            return Region::FINAL;
        }
        Phase phase = prog.phases[f.after_op];
        if (f.after_op < *prog.restart_boundary || phase == Phase::INJECT || phase == Phase::FINAL) {
            return Region::FINAL;
        }
        if (f.kind == FaultKind::IDLE && contains_all(prog.input_qubits, f.support)) {
            if (!idle_input_during_prep) {
                return std::nullopt;
            }
            return Region::PERSISTENT;
        }
        return Region::RESTARTABLE;
    };

    std::vector<std::vector<uint64_t>> effects(faults.size());
    std::vector<uint64_t> basis(2 * 2 * words_);
    for (size_t t = c.size(); t-- > 0;) {
        for (size_t i : by_op[t]) {
            const auto &f = faults[i];
            auto &out = effects[i];
            if (f.kind == FaultKind::MEASUREMENT_FLIP) {
                out.assign(coef(f.record), coef(f.record) + words_);
                continue;
            }
            const size_t w = f.support.size();
            const uint32_t count = static_cast<uint32_t>(f.num_errors());
            out.assign(static_cast<size_t>(count) * words_, 0);
            for (uint32_t e = 1; e <= count; e++) {
                uint64_t *dst = &out[(e - 1) * words_];
                for (size_t k = 0; k < w; k++) {
                    uint32_t bits = (e >> (2 * k)) & 3;
                    if (bits & 1) {
                        xor_into(dst, zcol(f.support[k]), words_);
                    }
                    if (bits & 2) {
                        xor_into(dst, xcol(f.support[k]), words_);
                    }
                }
            }
        }
        const Op &op = c[t];
        switch (op.kind) {
            case GateKind::PREP_Z:
                std::fill(xcol(op.q0), xcol(op.q0) + words_, 0);
                std::fill(zcol(op.q0), zcol(op.q0) + words_, 0);
                break;
            case GateKind::H:
                std::swap_ranges(xcol(op.q0), xcol(op.q0) + words_, zcol(op.q0));
                break;
            case GateKind::S:
            case GateKind::SDG:
                xor_into(zcol(op.q0), xcol(op.q0), words_);
                break;
            case GateKind::CX:
                xor_into(xcol(op.q1), xcol(op.q0), words_);
                xor_into(zcol(op.q0), zcol(op.q1), words_);
                break;
            case GateKind::CZ:
                xor_into(zcol(op.q0), xcol(op.q1), words_);
                xor_into(zcol(op.q1), xcol(op.q0), words_);
                break;
            case GateKind::MEAS_X:
                xor_into(xcol(op.q0), coef(op.record), words_);
                break;
            case GateKind::MEAS_Z:
                xor_into(zcol(op.q0), coef(op.record), words_);
                break;
            case GateKind::X:
            case GateKind::Z:
            case GateKind::BARRIER:
                break;
        }
    }

    for (size_t i = 0; i < faults.size(); i++) {
        auto region = region_of(faults[i]);
        if (!region) {
            continue;
        }
        Location loc{faults[i], *region, static_cast<uint32_t>(rows_.size() / words_),
                     static_cast<uint32_t>(faults[i].num_errors())};
        rows_.insert(rows_.end(), effects[i].begin(), effects[i].end());
        locations_.push_back(std::move(loc));
    }
}

std::vector<uint64_t> FaultEffectModel::check_mask(size_t keep_groups) const {
    std::vector<uint64_t> mask(words_, 0);
    for (size_t k = 0; k < num_checks_; k++) {
        if (groups_[k] < keep_groups) {
            set_bit(mask.data(), k);
        }
    }
    return mask;
}

namespace {

// Samples independent locations of one region with geometric skips per rate class.
class RegionSampler {
   public:
    RegionSampler(const FaultEffectModel &model, Region region) : model_(model) {
        std::map<double, std::vector<uint32_t>> by_rate;
        const auto &locs = model.locations();
        for (uint32_t i = 0; i < locs.size(); i++) {
            if (locs[i].region == region && locs[i].fault.rate > 0) {
                by_rate[locs[i].fault.rate].push_back(i);
            }
        }
        for (auto &[rate, members] : by_rate) {
            groups_.push_back({rate, rate < 1 ? std::log1p(-rate) : 0.0, std::move(members)});
        }
    }

    bool empty() const {
        return groups_.empty();
    }

    void sample(std::mt19937_64 &rng, uint64_t *acc) const {
        for (const auto &g : groups_) {
            if (g.rate >= 1) {
                for (uint32_t loc : g.members) {
                    fire(loc, rng, acc);
                }
                continue;
            }
            uint64_t i = skip(g, rng);
            while (i < g.members.size()) {
                fire(g.members[i], rng, acc);
                i += 1 + skip(g, rng);
            }
        }
    }

   private:
    struct Group {
        double rate;
        double log_miss;
        std::vector<uint32_t> members;
    };

    static uint64_t skip(const Group &g, std::mt19937_64 &rng) {
        // Number of misses before the next hit: floor(log U / log(1 - p)), U in (0, 1].
        double u = 1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;
        double k = std::floor(std::log(u) / g.log_miss);
        return k >= 1e18 ? UINT64_MAX / 2 : static_cast<uint64_t>(k);
    }

    void fire(uint32_t loc, std::mt19937_64 &rng, uint64_t *acc) const {
        const uint32_t count = model_.locations()[loc].num_errors;
        uint32_t e = count == 1 ? 0 : static_cast<uint32_t>(rng() % count);
        xor_into(acc, model_.effect(loc, e), model_.words());
    }

    const FaultEffectModel &model_;
    std::vector<Group> groups_;
};

size_t resolve_threads(size_t requested, size_t blocks) {
    size_t t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return std::max<size_t>(1, std::min(t, blocks));
}

template <typename Fn>
void for_each_block(size_t blocks, size_t threads, Fn fn) {
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t b = next++; b < blocks; b = next++) {
            fn(b);
        }
    };
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (size_t k = 0; k < threads; k++) {
        pool.emplace_back(worker);
    }
    for (auto &th : pool) {
        th.join();
    }
}

std::mt19937_64 block_rng(uint64_t seed, uint64_t block) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                      static_cast<uint32_t>(block), static_cast<uint32_t>(block >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

EstimateResult estimate_plog(const ClinrProgram &prog, const NoiseParams &params, uint64_t shots, uint64_t seed,
                             const EstimatorOptions &options) {
    if (shots < 1) {
        throw std::invalid_argument("estimate_plog: shots must be at least 1");
    }
    if (options.r_max < 1) {
        throw std::invalid_argument("estimate_plog: r_max must be at least 1");
    }
    const FaultEffectModel model(prog, params, options.idle_input_during_prep);
    const RegionSampler restartable(model, Region::RESTARTABLE);
    const RegionSampler persistent(model, Region::PERSISTENT);
    const RegionSampler final_region(model, Region::FINAL);
    const auto checks = options.ignore_verification ? std::vector<uint64_t>(model.words(), 0)
                                                    : model.check_mask(SIZE_MAX);
    const auto &outputs = model.output_mask();
    const size_t words = model.words();

    const uint64_t blocks = (shots + kBlockShots - 1) / kBlockShots;
    std::vector<EstimateResult> partial(blocks);
    for_each_block(blocks, resolve_threads(options.threads, blocks), [&](size_t b) {
        std::mt19937_64 rng = block_rng(seed, b);
        EstimateResult &res = partial[b];
        const uint64_t begin = b * kBlockShots;
        const uint64_t end = std::min(shots, begin + kBlockShots);
        std::vector<uint64_t> kept(words), attempt(words);
        for (uint64_t s = begin; s < end; s++) {
            std::fill(kept.begin(), kept.end(), 0);
            bool accepted = false;
            for (size_t a = 0; a < options.r_max; a++) {
                std::fill(attempt.begin(), attempt.end(), 0);
                restartable.sample(rng, attempt.data());
                persistent.sample(rng, kept.data());
                if (any_masked(attempt.data(), checks)) {
                    res.restarts++;
                    continue;
                }
                res.accepted_attempts++;
                accepted = true;
                break;
            }
            res.shots++;
            if (!accepted) {
                res.exhausted++;
                res.errors++;
                continue;
            }
            xor_into(attempt.data(), kept.data(), words);
            final_region.sample(rng, attempt.data());
            res.errors += any_masked(attempt.data(), outputs);
        }
    });

    EstimateResult total;
    for (const auto &r : partial) {
        total.shots += r.shots;
        total.errors += r.errors;
        total.restarts += r.restarts;
        total.accepted_attempts += r.accepted_attempts;
        total.exhausted += r.exhausted;
    }
    total.p_log = static_cast<double>(total.errors) / static_cast<double>(total.shots);
    total.std_error = std::sqrt(total.p_log * (1 - total.p_log) / static_cast<double>(total.shots));
    const uint64_t attempts = total.restarts + total.accepted_attempts;
    total.restart_rate = attempts ? static_cast<double>(total.restarts) / static_cast<double>(attempts) : 0.0;
    return total;
}

EstimateResult estimate_plog(const Circuit &c, const NoiseParams &params, uint64_t shots, uint64_t seed,
                             const EstimatorOptions &options) {
    return estimate_plog(make_direct_program(c), params, shots, seed, options);
}

std::vector<PostselectedCounts> estimate_postselected(const ClinrProgram &prog, const NoiseParams &params,
                                                      uint64_t shots, uint64_t seed,
                                                      const std::vector<size_t> &keep_groups, size_t threads) {
    ClinrProgram single_pass = prog;
    single_pass.restart_boundary.reset();
    const FaultEffectModel model(single_pass, params, true);
    const RegionSampler sampler(model, Region::FINAL);
    std::vector<std::vector<uint64_t>> masks;
    for (size_t keep : keep_groups) {
        masks.push_back(model.check_mask(keep));
    }
    const auto &outputs = model.output_mask();
    const uint64_t blocks = (shots + kBlockShots - 1) / kBlockShots;
    std::vector<std::vector<PostselectedCounts>> partial(blocks,
                                                         std::vector<PostselectedCounts>(keep_groups.size()));
    for_each_block(blocks, resolve_threads(threads, blocks), [&](size_t b) {
        std::mt19937_64 rng = block_rng(seed, b);
        const uint64_t begin = b * kBlockShots;
        const uint64_t end = std::min(shots, begin + kBlockShots);
        std::vector<uint64_t> acc(model.words());
        for (uint64_t s = begin; s < end; s++) {
            std::fill(acc.begin(), acc.end(), 0);
            sampler.sample(rng, acc.data());
            const bool wrong = any_masked(acc.data(), outputs);
            for (size_t m = 0; m < masks.size(); m++) {
                auto &counts = partial[b][m];
                counts.shots++;
                if (any_masked(acc.data(), masks[m])) {
                    counts.failed++;
                } else {
                    counts.errors += wrong;
                }
            }
        }
    });
    std::vector<PostselectedCounts> total(keep_groups.size());
    for (const auto &block : partial) {
        for (size_t m = 0; m < total.size(); m++) {
            total[m].shots += block[m].shots;
            total[m].failed += block[m].failed;
            total[m].errors += block[m].errors;
        }
    }
    return total;
}

std::map<PauliOp, double> exact_output_distribution(const Circuit &c, const NoiseParams &params) {
    const size_t n = c.width();
    if (n > 8) {
        throw std::invalid_argument("exact_output_distribution: width " + std::to_string(n) + " exceeds 8");
    }
    if (c.has_measurements()) {
        throw std::invalid_argument("exact_output_distribution: circuit has measurements");
    }
    auto index_of = [n](const PauliOp &p) {
        size_t k = 0;
        for (size_t q = 0; q < n; q++) {
            k |= static_cast<size_t>(p.x(q)) << q;
            k |= static_cast<size_t>(p.z(q)) << (n + q);
        }
        return k;
    };
    const size_t states = size_t{1} << (2 * n);
    std::vector<double> dist(states, 0.0), next(states);
    dist[0] = 1.0;
    for (const auto &loc : schedule_faults(c, params)) {
        const auto count = static_cast<uint32_t>(loc.num_errors());
        std::vector<size_t> shifts;
        for (uint32_t e = 1; e <= count; e++) {
            shifts.push_back(index_of(propagate(c, local_error(n, loc.support, e), loc.after_op + 1)));
        }
        const double stay = 1.0 - loc.rate;
        const double each = loc.p_tilde();
        for (size_t k = 0; k < states; k++) {
            next[k] = stay * dist[k];
        }
        for (size_t k = 0; k < states; k++) {
            if (dist[k] == 0) {
                continue;
            }
            for (size_t s : shifts) {
                next[k ^ s] += each * dist[k];
            }
        }
        dist.swap(next);
    }
    std::map<PauliOp, double> result;
    for (size_t k = 0; k < states; k++) {
        if (dist[k] == 0) {
            continue;
        }
        PauliOp p(n);
        for (size_t q = 0; q < n; q++) {
            p.set_x(q, (k >> q) & 1);
            p.set_z(q, (k >> (n + q)) & 1);
        }
        result[p] = dist[k];
    }
    return result;
}

double exact_plog(const Circuit &c, const NoiseParams &params) {
    auto dist = exact_output_distribution(c, params);
    auto it = dist.find(PauliOp(c.width()));
    return 1.0 - (it == dist.end() ? 0.0 : it->second);
}

SingleFaultReport exhaustive_single_fault_check(const ClinrProgram &prog, const NoiseParams &params) {
    const FaultEffectModel model(prog, params, true);
    const auto checks = model.check_mask(SIZE_MAX);
    const auto &outputs = model.output_mask();
    std::vector<double> detected, harmless, logical;
    SingleFaultReport report;
    for (size_t i = 0; i < model.locations().size(); i++) {
        const auto &loc = model.locations()[i];
        const auto &f = loc.fault;
        if (f.kind == FaultKind::MEASUREMENT_FLIP || prog.phases[f.after_op] != Phase::PREP ||
            !contains_all(prog.resource_qubits, f.support)) {
            continue;
        }
        for (uint32_t e = 0; e < loc.num_errors; e++) {
            const uint64_t *row = model.effect(i, e);
            if (any_masked(row, checks)) {
                detected.push_back(f.p_tilde());
                report.detected++;
            } else if (any_masked(row, outputs)) {
                logical.push_back(f.p_tilde());
                report.logical++;
            } else {
                harmless.push_back(f.p_tilde());
                report.harmless++;
            }
        }
    }
    report.detected_mass = pairwise_sum(detected.data(), detected.size());
    report.harmless_mass = pairwise_sum(harmless.data(), harmless.size());
    report.logical_mass = pairwise_sum(logical.data(), logical.size());
    return report;
}

}  // namespace clinr
