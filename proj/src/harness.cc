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

#include "clinr/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "clinr/clifford.h"
#include "clinr/proxy.h"
#include "json.hpp"

namespace clinr {

namespace {

using nlohmann::json;

constexpr uint64_t kStreamCircuit = 0x101;
constexpr uint64_t kStreamDirect = 0x102;
constexpr uint64_t kStreamRandom = 0x103;
constexpr uint64_t kStreamSearch = 0x104;
constexpr uint64_t kStreamCznrLayer = 0x105;
constexpr uint64_t kStreamCznrShots = 0x106;
constexpr uint64_t kStreamRandomShots = 0x107;

size_t resolve_threads(size_t threads) {
    if (threads != 0) {
        return threads;
    }
    return std::max<size_t>(1, std::thread::hardware_concurrency());
}

/// Runs job(0..count-1) on a small pool; the first exception is rethrown.
template <typename Job>
void parallel_for(size_t count, size_t threads, const Job &job) {
    threads = std::min(resolve_threads(threads), std::max<size_t>(count, 1));
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (true) {
            size_t k = next.fetch_add(1);
            if (k >= count) {
                return;
            }
            try {
                job(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next = count;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (size_t t = 0; t < threads; t++) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

uint64_t as_unsigned(const json &v, std::string_view key) {
    if (v.is_number_unsigned()) {
        return v.get<uint64_t>();
    }
    if (v.is_number_integer() && v.get<int64_t>() >= 0) {
        return static_cast<uint64_t>(v.get<int64_t>());
    }
    if (v.is_number_float()) {
        double d = v.get<double>();
        if (d >= 0 && d == std::floor(d) && d < 1.8e19) {
            return static_cast<uint64_t>(d);
        }
    }
    throw ConfigError("config key '" + std::string(key) + "' expects a non-negative integer, got " + v.dump());
}

double as_double(const json &v, std::string_view key) {
    if (!v.is_number()) {
        throw ConfigError("config key '" + std::string(key) + "' expects a number, got " + v.dump());
    }
    return v.get<double>();
}

bool as_bool(const json &v, std::string_view key) {
    if (v.is_boolean()) {
        return v.get<bool>();
    }
    if (v.is_number_integer() && (v.get<int64_t>() == 0 || v.get<int64_t>() == 1)) {
        return v.get<int64_t>() == 1;
    }
    throw ConfigError("config key '" + std::string(key) + "' expects a boolean, got " + v.dump());
}

std::string as_string(const json &v, std::string_view key) {
    if (!v.is_string()) {
        throw ConfigError("config key '" + std::string(key) + "' expects a string, got " + v.dump());
    }
    return v.get<std::string>();
}

void apply_json(ExperimentConfig &cfg, std::string_view key, const json &v) {
    if (key == "mode") {
        cfg.mode = parse_mode(as_string(v, key));
    } else if (key == "n") {
        cfg.n = as_unsigned(v, key);
    } else if (key == "s") {
        cfg.s = as_unsigned(v, key);
    } else if (key == "r") {
        cfg.r = as_unsigned(v, key);
    } else if (key == "p") {
        cfg.p = as_double(v, key);
    } else if (key == "tau_m") {
        cfg.tau_m = as_double(v, key);
    } else if (key == "shots") {
        cfg.shots = as_unsigned(v, key);
    } else if (key == "seed") {
        cfg.seed = as_unsigned(v, key);
    } else if (key == "r_max") {
        cfg.r_max = as_unsigned(v, key);
    } else if (key == "idle_input_during_prep") {
        cfg.idle_input_during_prep = as_bool(v, key);
    } else if (key == "l") {
        cfg.l = as_unsigned(v, key);
    } else if (key == "m") {
        cfg.m = as_unsigned(v, key);
    } else if (key == "i_max") {
        cfg.i_max = as_unsigned(v, key);
    } else if (key == "max_evaluations") {
        cfg.max_evaluations = as_unsigned(v, key);
    } else if (key == "repetitions") {
        cfg.repetitions = as_unsigned(v, key);
    } else if (key == "weight_class") {
        try {
            cfg.weight_class = parse_weight_class(as_string(v, key));
        } catch (const std::invalid_argument &e) {
            throw ConfigError(e.what());
        }
    } else if (key == "output_path") {
        cfg.output_path = as_string(v, key);
    } else if (key == "threads") {
        cfg.threads = as_unsigned(v, key);
    } else {
        throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
}

/// best_so_far per repetition, carried forward to `length` evaluations.
std::vector<CurvePoint> aggregate(const std::map<size_t, std::vector<std::pair<size_t, double>>> &by_rep) {
    size_t length = 0;
    for (const auto &[rep, points] : by_rep) {
        for (const auto &[idx, v] : points) {
            length = std::max(length, idx);
        }
    }
    std::vector<CurvePoint> out;
    const size_t reps = by_rep.size();
    std::vector<double> current(reps, std::numeric_limits<double>::quiet_NaN());
    std::vector<size_t> cursor(reps, 0);
    std::vector<const std::vector<std::pair<size_t, double>>*> lists;
    for (const auto &[rep, points] : by_rep) {
        lists.push_back(&points);
    }
    for (size_t k = 1; k <= length; k++) {
        std::vector<double> values;
        for (size_t i = 0; i < reps; i++) {
            const auto &points = *lists[i];
            while (cursor[i] < points.size() && points[cursor[i]].first <= k) {
                current[i] = points[cursor[i]].second;
                cursor[i]++;
            }
            if (!std::isnan(current[i])) {
                values.push_back(current[i]);
            }
        }
        if (values.empty()) {
            continue;
        }
        const double count = static_cast<double>(values.size());
        double mean = 0;
        for (double v : values) {
            mean += v;
        }
        mean /= count;
        double ss = 0;
        for (double v : values) {
            ss += (v - mean) * (v - mean);
        }
        double var = values.size() > 1 ? ss / (count - 1) : 0.0;
        out.push_back({k, mean, std::sqrt(var / count), values.size()});
    }
    return out;
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t end = line.find(sep, start);
        out.emplace_back(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (end == std::string_view::npos) {
            return out;
        }
        start = end + 1;
    }
}

double parse_number(const std::string &text, size_t line_no) {
    try {
        size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return v;
    } catch (const std::exception &) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": '" + text + "' is not a number");
    }
}

std::string svg_escape(std::string_view text) {
    std::string out;
    for (char ch : text) {
        switch (ch) {
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '&':
                out += "&amp;";
                break;
            default:
                out += ch;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string_view mode_name(Mode mode) {
    switch (mode) {
        case Mode::DIRECT:
            return "direct";
        case Mode::CLINR_RANDOM:
            return "clinr_random";
        case Mode::CLINR_GLOBAL:
            return "clinr_global";
        case Mode::CLINR_TWO_STEP:
            return "clinr_two_step";
        case Mode::CZNR_EMULATE:
            return "cznr_emulate";
        case Mode::COUNTS:
            return "counts";
    }
    return "?";
}

Mode parse_mode(std::string_view text) {
    for (Mode m : {Mode::DIRECT, Mode::CLINR_RANDOM, Mode::CLINR_GLOBAL, Mode::CLINR_TWO_STEP, Mode::CZNR_EMULATE,
                   Mode::COUNTS}) {
        if (mode_name(m) == text) {
            return m;
        }
    }
    throw ConfigError("unknown mode '" + std::string(text) + "'");
}

uint64_t ExperimentConfig::shots_per_evaluation() const {
    if (shots != 0) {
        return shots;
    }
    return mode == Mode::CZNR_EMULATE ? 2048 : 50000;
}

EstimatorOptions ExperimentConfig::estimator_options() const {
    EstimatorOptions options;
    options.r_max = r_max;
    options.idle_input_during_prep = idle_input_during_prep;
    options.threads = threads;
    return options;
}

SearchParams ExperimentConfig::search_params(uint64_t run_seed) const {
    return SearchParams{r, l, m, i_max, shots_per_evaluation(), run_seed, max_evaluations};
}

void ExperimentConfig::validate() const {
    if (n == 0) {
        throw ConfigError("n must be positive");
    }
    if (repetitions == 0) {
        throw ConfigError("repetitions must be positive");
    }
    if (r_max == 0) {
        throw ConfigError("r_max must be positive");
    }
    try {
        noise().validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    switch (mode) {
        case Mode::CLINR_RANDOM:
        case Mode::CLINR_GLOBAL:
        case Mode::CLINR_TWO_STEP:
            if (r == 0 || r > 2 * n) {
                throw ConfigError("r must lie in [1, 2n]");
            }
            if (l == 0 || m == 0) {
                throw ConfigError("l and m must be positive");
            }
            break;
        case Mode::CZNR_EMULATE:
            if (r < 1 || r > 3) {
                throw ConfigError("cznr_emulate needs r in {1, 2, 3}");
            }
            if (weight_class == WeightClass::LOW ? 2 * r > n : r > n) {
                throw ConfigError("n is too small for r disjoint verification stabilizers");
            }
            break;
        case Mode::COUNTS:
            if (r > 2 * n) {
                throw ConfigError("r must lie in [0, 2n]");
            }
            break;
        case Mode::DIRECT:
            break;
    }
}

const std::vector<std::string> &config_keys() {
    static const std::vector<std::string> keys = {
        "mode", "n", "s", "r", "p", "tau_m", "shots", "seed", "r_max", "idle_input_during_prep", "l", "m", "i_max",
        "max_evaluations", "repetitions", "weight_class", "output_path", "threads",
    };
    return keys;
}

void apply_setting(ExperimentConfig &cfg, std::string_view key, std::string_view value) {
    json v = json::parse(value, nullptr, false);
    if (v.is_discarded()) {
        v = std::string(value);
    }
    apply_json(cfg, key, v);
}

ExperimentConfig parse_config(std::string_view json_text, ExperimentConfig base) {
    json doc = json::parse(json_text, nullptr, false, true);
    if (doc.is_discarded()) {
        throw ConfigError("config is not valid JSON");
    }
    if (!doc.is_object()) {
        throw ConfigError("config must be a flat JSON object");
    }
    for (const auto &[key, value] : doc.items()) {
        apply_json(base, key, value);
    }
    return base;
}

ExperimentConfig load_config(const std::string &path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::stringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), std::move(base));
}

std::string config_json(const ExperimentConfig &cfg) {
    json doc = {
        {"mode", mode_name(cfg.mode)},
        {"n", cfg.n},
        {"s", cfg.circuit_size()},
        {"r", cfg.r},
        {"p", cfg.p},
        {"tau_m", cfg.tau_m},
        {"shots", cfg.shots_per_evaluation()},
        {"seed", cfg.seed},
        {"r_max", cfg.r_max},
        {"idle_input_during_prep", cfg.idle_input_during_prep},
        {"l", cfg.l},
        {"m", cfg.m},
        {"i_max", cfg.i_max},
        {"max_evaluations", cfg.max_evaluations},
        {"repetitions", cfg.repetitions},
        {"weight_class", weight_class_name(cfg.weight_class)},
        {"output_path", cfg.output_path},
        {"threads", cfg.threads},
    };
    return doc.dump(2) + "\n";
}

Circuit comparison_circuit(const ExperimentConfig &cfg) {
    Circuit full = random_clifford_circuit(cfg.n, derive_seed(cfg.seed, kStreamCircuit, 0));
    if (cfg.circuit_size() > full.size()) {
        throw std::runtime_error("requested circuit size " + std::to_string(cfg.circuit_size()) +
                                 " exceeds the sampled circuit (" + std::to_string(full.size()) + " gates)");
    }
    return truncate(full, cfg.circuit_size());
}

std::vector<ComparisonRow> run_comparison(const ExperimentConfig &cfg) {
    cfg.validate();
    if (cfg.mode != Mode::DIRECT && cfg.mode != Mode::CLINR_RANDOM && cfg.mode != Mode::CLINR_GLOBAL &&
        cfg.mode != Mode::CLINR_TWO_STEP) {
        throw ConfigError("run_comparison needs mode direct, clinr_random, clinr_global or clinr_two_step");
    }
    const Circuit c = comparison_circuit(cfg);
    const NoiseParams noise = cfg.noise();
    const uint64_t shots = cfg.shots_per_evaluation();
    const size_t workers = std::min(resolve_threads(cfg.threads), cfg.repetitions);
    EstimatorOptions options = cfg.estimator_options();
    options.threads = workers > 1 ? 1 : cfg.threads;

    GeneratorSet stabilizers;
    OmegaTable omega;
    if (cfg.mode != Mode::DIRECT) {
        stabilizers = resource_stabilizers(resource_unitary(c), cfg.n);
    }
    if (cfg.mode == Mode::CLINR_TWO_STEP) {
        omega = precompute_omega(build_resource_prep(c), noise);
    }
    const CostFunction cost = clinr_plog_cost(c, noise, shots, options);

    std::vector<std::vector<ComparisonRow>> per_rep(cfg.repetitions);
    parallel_for(cfg.repetitions, workers, [&](size_t rep) {
        auto &rows = per_rep[rep];
        auto single = [&](const EstimateResult &e) {
            rows.push_back({cfg.mode, rep, 1, e.p_log, e.std_error, e.p_log});
        };
        auto from_trace = [&](const OptimizationTrace &trace) {
            for (const auto &rec : trace.records) {
                rows.push_back({cfg.mode, rep, rec.eval_index, rec.p_log, rec.std_error, rec.best_so_far});
            }
        };
        switch (cfg.mode) {
            case Mode::DIRECT:
                single(estimate_plog(c, noise, shots, derive_seed(cfg.seed, kStreamDirect, rep), options));
                break;
            case Mode::CLINR_RANDOM: {
                std::mt19937_64 rng(derive_seed(cfg.seed, kStreamRandom, rep));
                auto v = random_verification_sequence(stabilizers, cfg.r, rng);
                single(estimate_plog(build_clinr(c, v), noise, shots, derive_seed(cfg.seed, kStreamRandomShots, rep),
                                     options));
                break;
            }
            case Mode::CLINR_GLOBAL:
                from_trace(
                    global_optimize(stabilizers, cfg.search_params(derive_seed(cfg.seed, kStreamSearch, rep)), cost)
                        .trace);
                break;
            case Mode::CLINR_TWO_STEP:
                from_trace(two_step_optimize(stabilizers, omega,
                                             cfg.search_params(derive_seed(cfg.seed, kStreamSearch, rep)), cost)
                               .stage2.trace);
                break;
            default:
                break;
        }
    });
    std::vector<ComparisonRow> rows;
    for (auto &r : per_rep) {
        rows.insert(rows.end(), r.begin(), r.end());
    }
    return rows;
}

std::string comparison_csv(const std::vector<ComparisonRow> &rows) {
    std::string out = "mode,repetition,eval_index,p_log,stderr,best_so_far\n";
    for (const auto &row : rows) {
        out += std::string(mode_name(row.mode)) + "," + std::to_string(row.repetition) + "," +
               std::to_string(row.eval_index) + "," + fmt(row.p_log) + "," + fmt(row.std_error) + "," +
               fmt(row.best_so_far) + "\n";
    }
    return out;
}

std::vector<CurvePoint> aggregate_curve(const std::vector<ComparisonRow> &rows, Mode mode) {
    std::map<size_t, std::vector<std::pair<size_t, double>>> by_rep;
    for (const auto &row : rows) {
        if (row.mode == mode) {
            by_rep[row.repetition].emplace_back(row.eval_index, row.best_so_far);
        }
    }
    for (auto &[rep, points] : by_rep) {
        std::stable_sort(points.begin(), points.end(),
                         [](const auto &a, const auto &b) { return a.first < b.first; });
    }
    return aggregate(by_rep);
}

double effective_restart_rate(double p_restart) {
    return 1.0 - std::sqrt(1.0 - p_restart);
}

std::vector<CznrRow> run_cznr_emulation(const ExperimentConfig &cfg) {
    cfg.validate();
    if (cfg.mode != Mode::CZNR_EMULATE) {
        throw ConfigError("run_cznr_emulation needs mode cznr_emulate");
    }
    const size_t r = cfg.r;
    std::vector<size_t> keep;
    for (size_t k = 0; k <= r; k++) {
        keep.push_back(r - k);
    }
    const uint64_t shots = cfg.shots_per_evaluation();
    const size_t workers = std::min(resolve_threads(cfg.threads), cfg.repetitions);
    std::vector<std::vector<PostselectedCounts>> per_rep(cfg.repetitions);
    parallel_for(cfg.repetitions, workers, [&](size_t rep) {
        auto prog = build_deferred_cznr_experiment(cfg.n, r, cfg.weight_class,
                                                   derive_seed(cfg.seed, kStreamCznrLayer, rep));
        per_rep[rep] = estimate_postselected(prog, cfg.noise(), shots, derive_seed(cfg.seed, kStreamCznrShots, rep),
                                             keep, workers > 1 ? 1 : cfg.threads);
    });
    std::vector<CznrRow> rows;
    for (size_t k = 0; k <= r; k++) {
        uint64_t total = 0, failed = 0, errors = 0;
        for (const auto &counts : per_rep) {
            total += counts[k].shots;
            failed += counts[k].failed;
            errors += counts[k].errors;
        }
        const uint64_t accepted = total - failed;
        double p_log = accepted == 0 ? std::numeric_limits<double>::quiet_NaN() : double(errors) / double(accepted);
        double p_restart = double(failed) / double(total);
        rows.push_back({r, cfg.weight_class, k, p_log, p_restart, effective_restart_rate(p_restart), total});
    }
    return rows;
}

std::string cznr_csv(const std::vector<CznrRow> &rows) {
    std::string out = "r,weight_class,dropped_checks,p_log,p_restart,effective_restart,shots\n";
    for (const auto &row : rows) {
        out += std::to_string(row.r) + "," + std::string(weight_class_name(row.weight_class)) + "," +
               std::to_string(row.dropped_checks) + "," + fmt(row.p_log) + "," + fmt(row.p_restart) + "," +
               fmt(row.effective_restart) + "," + std::to_string(row.shots) + "\n";
    }
    return out;
}

std::vector<GateCountRow> native_gate_counts(const ClinrProgram &prog) {
    constexpr size_t kContexts = 8;
    std::vector<GateCountRow> by_context(kContexts);
    std::vector<uint8_t> used(kContexts, 0);
    for (size_t t = 0; t < prog.circuit.size(); t++) {
        const Op &op = prog.circuit[t];
        const auto ctx = static_cast<size_t>(prog.contexts[t]);
        used[ctx] = 1;
        auto &row = by_context[ctx];
        if (prog.contexts[t] == OpContext::CPREP || prog.contexts[t] == OpContext::CPREP_INV) {
            continue;
        }
        switch (op.kind) {
            case GateKind::H:
            case GateKind::MEAS_X:
                row.g_pi2++;
                break;
            case GateKind::X:
                row.g_pi++;
                break;
            case GateKind::CZ:
                row.zz++;
                break;
            case GateKind::CX:
                row.zz++;
                row.g_pi2 += 2;
                break;
            default:
                break;
        }
    }
    if (prog.cprep) {
        for (OpContext ctx : {OpContext::CPREP, OpContext::CPREP_INV}) {
            auto &row = by_context[static_cast<size_t>(ctx)];
            used[static_cast<size_t>(ctx)] = 1;
            for (PrepGate g : prog.cprep->gates) {
                if (g == PrepGate::G_PI) {
                    row.g_pi++;
                } else if (g != PrepGate::IDENTITY) {
                    row.g_pi2++;
                }
            }
        }
    }
    std::vector<GateCountRow> out;
    GateCountRow total{"total"};
    for (size_t ctx = 0; ctx < kContexts; ctx++) {
        if (!used[ctx]) {
            continue;
        }
        auto row = by_context[ctx];
        row.context = std::string(context_name(static_cast<OpContext>(ctx)));
        total.zz += row.zz;
        total.g_pi += row.g_pi;
        total.g_pi2 += row.g_pi2;
        out.push_back(std::move(row));
    }
    out.push_back(total);
    return out;
}

std::string gate_counts_csv(const std::vector<GateCountRow> &rows) {
    std::string out = "context,zz,g_pi,g_pi2\n";
    for (const auto &row : rows) {
        out += row.context + "," + std::to_string(row.zz) + "," + std::to_string(row.g_pi) + "," +
               std::to_string(row.g_pi2) + "\n";
    }
    return out;
}

std::vector<PlotSeries> series_from_csv(std::string_view csv_text) {
    std::vector<std::string> lines;
    for (auto &line : split(csv_text, '\n')) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty()) {
            lines.push_back(std::move(line));
        }
    }
    if (lines.size() < 2) {
        throw std::runtime_error("trace has no data rows");
    }
    const std::string &header = lines[0];
    std::vector<PlotSeries> out;
    if (header == "mode,repetition,eval_index,p_log,stderr,best_so_far") {
        std::vector<ComparisonRow> rows;
        std::vector<Mode> order;
        for (size_t i = 1; i < lines.size(); i++) {
            auto cols = split(lines[i], ',');
            if (cols.size() != 6) {
                throw std::runtime_error("line " + std::to_string(i + 1) + ": expected 6 columns");
            }
            Mode mode;
            try {
                mode = parse_mode(cols[0]);
            } catch (const ConfigError &e) {
                throw std::runtime_error("line " + std::to_string(i + 1) + ": " + e.what());
            }
            if (std::find(order.begin(), order.end(), mode) == order.end()) {
                order.push_back(mode);
            }
            rows.push_back({mode, static_cast<size_t>(parse_number(cols[1], i + 1)),
                            static_cast<size_t>(parse_number(cols[2], i + 1)), parse_number(cols[3], i + 1),
                            parse_number(cols[4], i + 1), parse_number(cols[5], i + 1)});
        }
        for (Mode mode : order) {
            PlotSeries series{std::string(mode_name(mode)), {}, {}, {}};
            for (const auto &pt : aggregate_curve(rows, mode)) {
                series.x.push_back(static_cast<double>(pt.eval_index));
                series.mean.push_back(pt.mean);
                series.std_error.push_back(pt.std_error);
            }
            out.push_back(std::move(series));
        }
        return out;
    }
    if (header == "r,weight_class,dropped_checks,p_log,p_restart,effective_restart,shots") {
        std::map<std::string, size_t> index;
        for (size_t i = 1; i < lines.size(); i++) {
            auto cols = split(lines[i], ',');
            if (cols.size() != 7) {
                throw std::runtime_error("line " + std::to_string(i + 1) + ": expected 7 columns");
            }
            const std::string tag = " r=" + cols[0] + " w=" + cols[1];
            const double x = parse_number(cols[2], i + 1);
            const double p_log = parse_number(cols[3], i + 1);
            const double p_restart = parse_number(cols[4], i + 1);
            const double shots = parse_number(cols[6], i + 1);
            const double accepted = shots * (1 - p_restart);
            for (const auto &[name, value, count] :
                 {std::tuple{"p_log" + tag, p_log, accepted}, std::tuple{"p_restart" + tag, p_restart, shots}}) {
                auto [it, fresh] = index.emplace(name, out.size());
                if (fresh) {
                    out.push_back({name, {}, {}, {}});
                }
                auto &series = out[it->second];
                series.x.push_back(x);
                series.mean.push_back(value);
                series.std_error.push_back(count > 0 ? std::sqrt(value * (1 - value) / count) : 0.0);
            }
        }
        return out;
    }
    throw std::runtime_error("unrecognized trace header '" + header + "'");
}

std::string series_csv(const std::vector<PlotSeries> &series) {
    std::string out = "series,x,mean,stderr,lower,upper\n";
    for (const auto &s : series) {
        for (size_t k = 0; k < s.x.size(); k++) {
            out += s.name + "," + fmt(s.x[k]) + "," + fmt(s.mean[k]) + "," + fmt(s.std_error[k]) + "," +
                   fmt(s.mean[k] - s.std_error[k]) + "," + fmt(s.mean[k] + s.std_error[k]) + "\n";
        }
    }
    return out;
}

std::string render_svg(const std::vector<PlotSeries> &series, std::string_view title, std::string_view x_label,
                       std::string_view y_label) {
    constexpr double kWidth = 720, kHeight = 440, kLeft = 80, kRight = 200, kTop = 40, kBottom = 60;
    static const char *kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

    double x_min = INFINITY, x_max = -INFINITY, y_min = INFINITY, y_max = -INFINITY;
    for (const auto &s : series) {
        for (size_t k = 0; k < s.x.size(); k++) {
            if (std::isnan(s.mean[k])) {
                continue;
            }
            x_min = std::min(x_min, s.x[k]);
            x_max = std::max(x_max, s.x[k]);
            y_min = std::min(y_min, s.mean[k] - s.std_error[k]);
            y_max = std::max(y_max, s.mean[k] + s.std_error[k]);
        }
    }
    if (!std::isfinite(x_min)) {
        throw std::runtime_error("nothing to plot");
    }
    if (x_max == x_min) {
        x_max = x_min + 1;
    }
    if (y_max == y_min) {
        y_max = y_min + (y_min == 0 ? 1 : std::abs(y_min) * 0.1);
    }
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;
    const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * plot_h; };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
                      num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + num(kLeft) + "\" y=\"24\" font-size=\"15\">" + svg_escape(title) + "</text>\n";
    out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(plot_w) + "\" height=\"" +
           num(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
    char buf[64];
    for (int t = 0; t <= 4; t++) {
        double xv = x_min + (x_max - x_min) * t / 4.0;
        double yv = y_min + (y_max - y_min) * t / 4.0;
        std::snprintf(buf, sizeof buf, "%.4g", xv);
        out += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(kTop + plot_h + 18) + "\" text-anchor=\"middle\">" +
               buf + "</text>\n";
        std::snprintf(buf, sizeof buf, "%.3g", yv);
        out += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py(yv) + 4) + "\" text-anchor=\"end\">" + buf +
               "</text>\n";
    }
    out += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" + num(kHeight - 16) + "\" text-anchor=\"middle\">" +
           svg_escape(x_label) + "</text>\n";
    out += "<text transform=\"translate(18," + num(kTop + plot_h / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
           svg_escape(y_label) + "</text>\n";

    for (size_t i = 0; i < series.size(); i++) {
        const auto &s = series[i];
        const char *color = kColors[i % std::size(kColors)];
        std::vector<double> xs = s.x, mean = s.mean, se = s.std_error;
        if (xs.size() == 1) {
            xs = {x_min, x_max};
            mean = {s.mean[0], s.mean[0]};
            se = {s.std_error[0], s.std_error[0]};
        }
        std::string upper, lower, line;
        for (size_t k = 0; k < xs.size(); k++) {
            if (std::isnan(mean[k])) {
                continue;
            }
            line += num(px(xs[k])) + "," + num(py(mean[k])) + " ";
            upper += num(px(xs[k])) + "," + num(py(mean[k] + se[k])) + " ";
        }
        for (size_t k = xs.size(); k-- > 0;) {
            if (!std::isnan(mean[k])) {
                lower += num(px(xs[k])) + "," + num(py(mean[k] - se[k])) + " ";
            }
        }
        out += "<polygon points=\"" + upper + lower + "\" fill=\"" + color + "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
        out += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
        const double ly = kTop + 14 + 18 * static_cast<double>(i);
        out += "<line x1=\"" + num(kWidth - kRight + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" +
               num(kWidth - kRight + 36) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + num(kWidth - kRight + 42) + "\" y=\"" + num(ly + 4) + "\">" + svg_escape(s.name) +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace clinr
