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

#ifndef CLINR_HARNESS_H
#define CLINR_HARNESS_H

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "clinr/circuit.h"
#include "clinr/estimator.h"
#include "clinr/noise.h"
#include "clinr/program.h"
#include "clinr/search.h"

namespace clinr {

class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class Mode : uint8_t {
    DIRECT,
    CLINR_RANDOM,
    CLINR_GLOBAL,
    CLINR_TWO_STEP,
    CZNR_EMULATE,
    COUNTS,
};
std::string_view mode_name(Mode mode);
/// Throws ConfigError.
Mode parse_mode(std::string_view text);

struct ExperimentConfig {
    Mode mode = Mode::CLINR_TWO_STEP;
    size_t n = 20;
    /// Circuit size; 0 means n^2.
    size_t s = 0;
    size_t r = 4;
    double p = 1e-4;
    double tau_m = 30;
    /// Shots per evaluation; 0 means 50,000 (2,048 for cznr_emulate).
    uint64_t shots = 0;
    uint64_t seed = 1;
    size_t r_max = 100;
    bool idle_input_during_prep = true;
    size_t l = 10;
    size_t m = 5;
    size_t i_max = 100;
    /// Evaluation budget per optimization run; 0 means unlimited.
    size_t max_evaluations = 500;
    size_t repetitions = 250;
    WeightClass weight_class = WeightClass::LOW;
    std::string output_path = "clinr_out";
    /// Worker threads; 0 picks the hardware concurrency.
    size_t threads = 0;

    size_t circuit_size() const {
        return s == 0 ? n * n : s;
    }
    uint64_t shots_per_evaluation() const;
    NoiseParams noise() const {
        return {p, tau_m};
    }
    EstimatorOptions estimator_options() const;
    SearchParams search_params(uint64_t run_seed) const;

    /// Throws ConfigError.
    void validate() const;
};

/// Every key accepted in a config file or as an override.
const std::vector<std::string> &config_keys();

/// Sets one key. `value` is read as JSON when it parses, otherwise as a bare string.
/// Throws ConfigError on unknown keys or ill-typed values.
void apply_setting(ExperimentConfig &cfg, std::string_view key, std::string_view value);

/// Flat JSON object on top of `base`. Throws ConfigError.
ExperimentConfig parse_config(std::string_view json_text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string &path, ExperimentConfig base = {});
std::string config_json(const ExperimentConfig &cfg);

/// The circuit shared by every mode and repetition of one master seed: a uniformly random
/// n-qubit Clifford circuit truncated to circuit_size() operations.
Circuit comparison_circuit(const ExperimentConfig &cfg);

struct ComparisonRow {
    Mode mode;
    size_t repetition;
    size_t eval_index;
    double p_log;
    double std_error;
    double best_so_far;
};

/// Runs cfg.mode (direct, clinr_random, clinr_global or clinr_two_step) for every repetition.
std::vector<ComparisonRow> run_comparison(const ExperimentConfig &cfg);

/// Columns mode, repetition, eval_index, p_log, stderr, best_so_far.
std::string comparison_csv(const std::vector<ComparisonRow> &rows);

struct CurvePoint {
    size_t eval_index;
    double mean;
    double std_error;
    size_t samples;
};

/// Mean and standard error of best_so_far across repetitions of one mode, per evaluation
/// index 1..max. A repetition that stopped early keeps its last value.
std::vector<CurvePoint> aggregate_curve(const std::vector<ComparisonRow> &rows, Mode mode);

struct CznrRow {
    size_t r;
    WeightClass weight_class;
    size_t dropped_checks;
    double p_log;
    double p_restart;
    double effective_restart;
    uint64_t shots;
};

/// 1 - sqrt(1 - p_restart).
double effective_restart_rate(double p_restart);

/// Deferred CZNR emulation: for k = 0..r, ignores the last k verification stabilizers
/// and reports the post-processed rates summed over `repetitions` random C_prep layers.
std::vector<CznrRow> run_cznr_emulation(const ExperimentConfig &cfg);

/// Columns r, weight_class, dropped_checks, p_log, p_restart, effective_restart, shots.
std::string cznr_csv(const std::vector<CznrRow> &rows);

struct GateCountRow {
    std::string context;
    uint64_t zz = 0;
    uint64_t g_pi = 0;
    uint64_t g_pi2 = 0;
};

/// Native gate classes per op context, in context order, followed by a "total" row.
/// Contexts without ops are omitted.
std::vector<GateCountRow> native_gate_counts(const ClinrProgram &prog);

/// Columns context, zz, g_pi, g_pi2.
std::string gate_counts_csv(const std::vector<GateCountRow> &rows);

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> mean;
    std::vector<double> std_error;
};

/// Reads a comparison CSV (one series per mode, x = eval_index) or a cznr CSV (series
/// "p_log r=.. w=.." and "p_restart r=.. w=..", x = dropped_checks). Throws std::runtime_error
/// on empty or malformed input.
std::vector<PlotSeries> series_from_csv(std::string_view csv_text);

/// Columns series, x, mean, stderr, lower, upper.
std::string series_csv(const std::vector<PlotSeries> &series);

/// Static SVG line chart with mean +- stderr bands. Single-point series are drawn flat.
std::string render_svg(const std::vector<PlotSeries> &series, std::string_view title, std::string_view x_label,
                       std::string_view y_label);

}  // namespace clinr

#endif
