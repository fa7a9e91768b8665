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

// Command line front end: gen-circuit, optimize, simulate, cznr-emulate, counts, report.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clinr/circuit.h"
#include "clinr/estimator.h"
#include "clinr/harness.h"
#include "clinr/program.h"
#include "clinr/search.h"

namespace fs = std::filesystem;
using namespace clinr;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Overrides {
    std::string config_path;
    std::map<std::string, std::string> values;
};

void add_config_options(CLI::App *cmd, Overrides &ov) {
    cmd->add_option("--config", ov.config_path, "Flat JSON config file");
    for (const auto &key : config_keys()) {
        cmd->add_option_function<std::string>(
            "--" + key, [&ov, key](const std::string &v) { ov.values[key] = v; }, "Override config key '" + key + "'");
    }
}

ExperimentConfig resolve(const Overrides &ov, Mode default_mode) {
    ExperimentConfig cfg;
    cfg.mode = default_mode;
    if (!ov.config_path.empty()) {
        cfg = load_config(ov.config_path, cfg);
    }
    for (const auto &[key, value] : ov.values) {
        apply_setting(cfg, key, value);
    }
    return cfg;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read '" + path + "'");
    }
    std::stringstream text;
    text << in.rdbuf();
    return text.str();
}

void write_file(const fs::path &path, const std::string &content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << content;
}

void emit(const std::string &output, const std::string &content) {
    if (output.empty() || output == "-") {
        std::cout << content;
    } else {
        write_file(output, content);
    }
}

int run_optimize(const Overrides &ov, bool all_modes) {
    auto cfg = resolve(ov, Mode::CLINR_TWO_STEP);
    std::vector<Mode> modes = {cfg.mode};
    if (all_modes) {
        modes = {Mode::DIRECT, Mode::CLINR_RANDOM, Mode::CLINR_GLOBAL, Mode::CLINR_TWO_STEP};
    }
    const fs::path dir = cfg.output_path;
    write_file(dir / "config.json", config_json(cfg));
    std::string combined = "mode,repetition,eval_index,p_log,stderr,best_so_far\n";
    for (Mode mode : modes) {
        cfg.mode = mode;
        auto rows = run_comparison(cfg);
        auto csv = comparison_csv(rows);
        write_file(dir / ("comparison_" + std::string(mode_name(mode)) + ".csv"), csv);
        combined += csv.substr(csv.find('\n') + 1);
        auto curve = aggregate_curve(rows, mode);
        const auto &last = curve.back();
        std::printf("%s final_mean=%.6g stderr=%.3g evaluations=%zu repetitions=%zu\n",
                    std::string(mode_name(mode)).c_str(), last.mean, last.std_error, last.eval_index, last.samples);
    }
    if (all_modes) {
        write_file(dir / "comparison_all.csv", combined);
    }
    return 0;
}

int run_simulate(const Overrides &ov, const std::string &circuit_path, const std::string &verification_path,
                 bool cznr, const std::string &emit_dir, const std::string &output) {
    auto cfg = resolve(ov, Mode::DIRECT);
    cfg.validate();
    Circuit c = parse_circuit(read_file(circuit_path));
    ClinrProgram prog;
    if (verification_path.empty()) {
        prog = make_direct_program(c);
    } else {
        auto v = GeneratorSet::from_text(read_file(verification_path));
        prog = cznr ? build_cznr(c, v) : build_clinr(c, v);
    }
    if (!emit_dir.empty()) {
        write_file(fs::path(emit_dir) / "program.txt", prog.str());
        write_file(fs::path(emit_dir) / "program.json", prog.descriptor_json());
    }
    auto result = estimate_plog(prog, cfg.noise(), cfg.shots_per_evaluation(), cfg.seed, cfg.estimator_options());
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%llu,%llu,%llu,%llu\n", result.p_log, result.std_error,
                  result.restart_rate, static_cast<unsigned long long>(result.shots),
                  static_cast<unsigned long long>(result.errors), static_cast<unsigned long long>(result.restarts),
                  static_cast<unsigned long long>(result.exhausted));
    emit(output, std::string("p_log,stderr,restart_rate,shots,errors,restarts,exhausted\n") + buf);
    return 0;
}

int run_cznr(const Overrides &ov) {
    auto cfg = resolve(ov, Mode::CZNR_EMULATE);
    cfg.mode = Mode::CZNR_EMULATE;
    auto csv = cznr_csv(run_cznr_emulation(cfg));
    write_file(fs::path(cfg.output_path) /
                   ("cznr_r" + std::to_string(cfg.r) + "_" + std::string(weight_class_name(cfg.weight_class)) + ".csv"),
               csv);
    std::cout << csv;
    return 0;
}

int run_counts(const Overrides &ov, bool space, bool direct, const std::string &output) {
    auto cfg = resolve(ov, Mode::COUNTS);
    cfg.mode = Mode::COUNTS;
    cfg.validate();
    if (space) {
        std::string csv = "n,r,sequences,subgroups,reduction\n";
        csv += std::to_string(cfg.n) + "," + std::to_string(cfg.r) + "," + count_sequences(cfg.n, cfg.r).str() + "," +
               count_subgroups(cfg.n, cfg.r).str() + "," + gl_order(cfg.r).str() + "\n";
        emit(output, csv);
        return 0;
    }
    ClinrProgram prog = direct ? build_direct_cznr_experiment(cfg.n, cfg.seed)
                               : build_deferred_cznr_experiment(cfg.n, cfg.r, cfg.weight_class, cfg.seed);
    emit(output, gate_counts_csv(native_gate_counts(prog)));
    return 0;
}

int run_report(const Overrides &ov, const std::vector<std::string> &inputs, const std::string &title) {
    auto cfg = resolve(ov, Mode::DIRECT);
    std::string header, body;
    for (const auto &path : inputs) {
        std::string text = read_file(path);
        auto nl = text.find('\n');
        std::string h = text.substr(0, nl);
        if (header.empty()) {
            header = h;
        } else if (h != header) {
            throw std::runtime_error("'" + path + "' does not share the header of the first input");
        }
        if (nl != std::string::npos) {
            body += text.substr(nl + 1);
        }
    }
    auto series = series_from_csv(header + "\n" + body);
    const bool cznr = header.rfind("r,", 0) == 0;
    const fs::path dir = cfg.output_path;
    write_file(dir / "report.csv", series_csv(series));
    write_file(dir / "report.svg", render_svg(series, title, cznr ? "dropped verification checks" : "p_log evaluations",
                                              cznr ? "rate" : "logical error rate"));
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"CliNR verification-sequence optimizer"};
    app.require_subcommand(1);

    Overrides ov;
    bool all_modes = false, space = false, direct = false, cznr = false;
    std::string circuit_path, verification_path, emit_dir, output, title = "CliNR comparison";
    std::vector<std::string> inputs;

    auto *gen = app.add_subcommand("gen-circuit", "Write the random truncated circuit of a config");
    add_config_options(gen, ov);
    gen->add_option("-o,--output", output, "Output file (default stdout)");

    auto *opt = app.add_subcommand("optimize", "Run direct, clinr_random, clinr_global or clinr_two_step");
    add_config_options(opt, ov);
    opt->add_flag("--all-modes", all_modes, "Run all four comparison modes on the same circuit");

    auto *sim = app.add_subcommand("simulate", "Estimate the logical error rate of one program");
    add_config_options(sim, ov);
    sim->add_option("--circuit", circuit_path, "Circuit file")->required();
    sim->add_option("--verification", verification_path, "Verification sequence file (omit for direct)");
    sim->add_flag("--cznr", cznr, "Build the CZNR variant instead of CliNR");
    sim->add_option("--emit-program", emit_dir, "Directory for program.txt and program.json");
    sim->add_option("-o,--output", output, "Output CSV (default stdout)");

    auto *cz = app.add_subcommand("cznr-emulate", "Deferred CZNR emulation with check dropping");
    add_config_options(cz, ov);

    auto *counts = app.add_subcommand("counts", "Native gate counts or search-space sizes");
    add_config_options(counts, ov);
    counts->add_flag("--space", space, "Print search-space sizes for (n, r)");
    counts->add_flag("--direct", direct, "Count the direct CZNR experiment instead of the deferred one");
    counts->add_option("-o,--output", output, "Output CSV (default stdout)");

    auto *report = app.add_subcommand("report", "Aggregate trace CSVs into plot data and an SVG chart");
    add_config_options(report, ov);
    report->add_option("inputs", inputs, "Comparison or cznr CSV files")->required();
    report->add_option("--title", title, "Chart title");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*gen) {
            auto cfg = resolve(ov, Mode::DIRECT);
            cfg.validate();
            emit(output, serialize_circuit(comparison_circuit(cfg)));
            return 0;
        }
        if (*opt) {
            return run_optimize(ov, all_modes);
        }
        if (*sim) {
            return run_simulate(ov, circuit_path, verification_path, cznr, emit_dir, output);
        }
        if (*cz) {
            return run_cznr(ov);
        }
        if (*counts) {
            return run_counts(ov, space, direct, output);
        }
        if (*report) {
            return run_report(ov, inputs, title);
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
