// Copyright 2026 The tfqsim Authors
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

// tfqsim <experiment> --config <path> [--seed N] [--shots N] [--out DIR] [--ideal] [--threads N]
// tfqsim report <dir>
// tfqsim export-circuit <xgate|cinc|sum3|sum16> [--config <path>] [--out FILE]
//
// The default output directory is $TFQSIM_OUTPUT_DIR/<experiment>, or
// tfqsim-out/<experiment> when the variable is unset.

#include "tfqsim/experiment.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

struct RunArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> shots;
    std::string out;
    bool ideal = false;
    int threads = 1;
};

std::filesystem::path default_output_dir(const std::string &experiment) {
    const char *env = std::getenv("TFQSIM_OUTPUT_DIR");
    std::filesystem::path base = env && *env ? env : "tfqsim-out";
    return base / experiment;
}

tfqsim::ExperimentConfig resolve_config(const std::string &experiment, const RunArgs &a) {
    auto cfg = a.config.empty() ? tfqsim::default_config(experiment) : tfqsim::load_config(a.config, experiment);
    if (a.ideal) {
        cfg = tfqsim::make_ideal(std::move(cfg));
    }
    if (a.seed) {
        cfg.seed = *a.seed;
    }
    if (a.shots) {
        if (*a.shots < 0) {
            throw std::invalid_argument("--shots must be >= 0");
        }
        cfg.shots = static_cast<std::uint64_t>(*a.shots);
    }
    if (!a.out.empty()) {
        cfg.output_dir = a.out;
    } else if (cfg.output_dir.empty()) {
        cfg.output_dir = default_output_dir(experiment).string();
    }
    return cfg;
}

int run(const std::string &experiment, const RunArgs &a) {
    auto cfg = resolve_config(experiment, a);
    auto res = tfqsim::simulate_experiment(cfg, a.threads);
    for (const auto &w : res.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    tfqsim::write_artifacts(res, cfg.output_dir);
    std::cout << tfqsim::report_summary(cfg.output_dir);
    std::cout << "artifacts in " << cfg.output_dir << "\n";
    return 0;
}

int export_circuit(const std::string &experiment, const std::string &config, const std::string &out) {
    auto cfg = config.empty() ? tfqsim::default_config(experiment) : tfqsim::load_config(config, experiment);
    if (cfg.kind() == tfqsim::ExperimentKind::kFringe || cfg.kind() == tfqsim::ExperimentKind::kCustom) {
        throw std::invalid_argument("export-circuit supports xgate, cinc, sum3 and sum16");
    }
    cfg.seed = cfg.seed.value_or(0);
    const auto plan = tfqsim::detail::make_plan(cfg);
    const auto text = tfqsim::photonic::serialize_circuit(plan.circuit);
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        tfqsim::detail::write_text(out, text);
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Time-frequency qudit gate simulator"};
    app.require_subcommand(1);

    RunArgs args;
    static const char *experiments[][2] = {{"xgate", "time-bin X gate"},
                                           {"fringe", "X gate phase-coherence fringe"},
                                           {"cinc", "frequency-controlled increment"},
                                           {"sum3", "3x3 SUM gate"},
                                           {"sum16", "16x16 SUM gate"},
                                           {"custom", "circuit loaded from the config's \"circuit\" file"}};
    std::vector<CLI::App *> runs;
    for (const auto &[name, help] : experiments) {
        auto *sub = app.add_subcommand(name, help);
        sub->add_option("--config", args.config, "JSON config (comments allowed)")->check(CLI::ExistingFile);
        sub->add_option("--seed", args.seed, "RNG seed, overrides the config");
        sub->add_option("--shots", args.shots, "shots per input, overrides the config");
        sub->add_option("--out", args.out, "output directory");
        sub->add_flag("--ideal", args.ideal, "zero every noise knob");
        sub->add_option("--threads", args.threads, "worker threads")->check(CLI::PositiveNumber);
        runs.push_back(sub);
    }

    std::string report_dir;
    auto *report = app.add_subcommand("report", "print the summary of an artifact directory");
    report->add_option("dir", report_dir)->required();

    std::string export_experiment, export_config, export_out;
    auto *exp = app.add_subcommand("export-circuit", "write a built-in circuit description");
    exp->add_option("experiment", export_experiment)->required();
    exp->add_option("--config", export_config)->check(CLI::ExistingFile);
    exp->add_option("--out", export_out, "file, or - for stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        for (auto *sub : runs) {
            if (sub->parsed()) {
                return run(sub->get_name(), args);
            }
        }
        if (report->parsed()) {
            std::cout << tfqsim::report_summary(report_dir);
            return 0;
        }
        if (exp->parsed()) {
            return export_circuit(export_experiment, export_config, export_out);
        }
    } catch (const std::exception &e) {
        std::cerr << "tfqsim: error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
