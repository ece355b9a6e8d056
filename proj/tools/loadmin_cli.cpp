/*
Copyright 2026 The loadmin Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "loadmin/experiment.hpp"
#include "loadmin/scenario.hpp"
#include "loadmin/verification.hpp"

namespace {

using namespace loadmin;

std::string Join(const std::vector<std::string> &items) {
    std::string out;
    for (const std::string &s : items) {
        out += (out.empty() ? "" : ",") + s;
    }
    return out;
}

template <typename T>
std::string JoinNumbers(const std::vector<T> &items) {
    std::vector<std::string> text;
    for (T v : items) {
        text.push_back(std::to_string(v));
    }
    return Join(text);
}

struct RunArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> drops;
    std::vector<std::string> algorithms;
    std::vector<std::size_t> users;
    std::optional<std::size_t> maxPrbs;
    std::vector<std::string> powerModes;
    std::vector<std::size_t> ipp;
    std::string out;
    std::size_t threads = 0;
};

struct VerifyArgs {
    std::string config;
    std::size_t instances = 1000;
    std::size_t samples = 10000;
    std::size_t drops = 10;
    std::uint64_t seed = 1;
};

ScenarioConfig BuildConfig(const RunArgs &args) {
    ScenarioConfig config = args.config.empty() ? ScenarioConfig{} : LoadConfig(args.config);
    if (args.seed) {
        config.Set("master_seed", std::to_string(*args.seed));
    }
    if (args.drops) {
        config.Set("num_drops", std::to_string(*args.drops));
    }
    if (!args.algorithms.empty()) {
        config.Set("algorithm", Join(args.algorithms));
    }
    if (!args.users.empty()) {
        config.Set("users_per_cell", JoinNumbers(args.users));
    }
    if (args.maxPrbs) {
        config.Set("max_prbs", std::to_string(*args.maxPrbs));
    }
    if (!args.powerModes.empty()) {
        config.Set("power_mode", Join(args.powerModes));
    }
    if (!args.ipp.empty()) {
        config.Set("ipp_iterations", JoinNumbers(args.ipp));
    }
    config.Validate();
    return config;
}

int Run(const RunArgs &args) {
    const ScenarioConfig config = BuildConfig(args);
    const ScenarioResults results = RunScenario(config, {args.threads});
    if (args.out.empty() || args.out == "-") {
        WriteResultsCsv(std::cout, results.rows);
    } else {
        EmitResults(results.rows, args.out);
        std::cerr << "wrote " << results.rows.size() << " rows to " << args.out << '\n';
    }
    return 0;
}

int Verify(const VerifyArgs &args) {
    VerifyOptions options;
    options.boundInstances = args.instances;
    options.roundTripSamples = args.samples;
    options.feasibilityDrops = args.drops;
    options.seed = args.seed;
    if (!args.config.empty()) {
        options.scenario = LoadConfig(args.config);
    }
    const std::vector<CheckResult> results = RunVerification(options);
    PrintReport(std::cout, results);
    std::size_t failed = 0;
    for (const CheckResult &r : results) {
        failed += r.passed ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << '\n';
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Multi-cell PRB allocation and power reduction simulator"};
    app.require_subcommand(1);

    RunArgs runArgs;
    CLI::App *run = app.add_subcommand("run", "Run a Monte-Carlo scenario and write the summary CSV");
    run->add_option("config", runArgs.config, "Scenario file with key = value lines")->check(CLI::ExistingFile);
    run->add_option("--seed", runArgs.seed, "Master seed");
    run->add_option("--drops", runArgs.drops, "Number of drops");
    run->add_option("--algorithm", runArgs.algorithms, "mwdg, rg or meg (repeatable or comma separated)")
        ->delimiter(',');
    run->add_option("--users", runArgs.users, "Users per cell (repeatable or comma separated)")->delimiter(',');
    run->add_option("--max-prbs", runArgs.maxPrbs, "Per-user PRB cap M");
    run->add_option("--power-mode", runArgs.powerModes, "uniform or dpra (repeatable or comma separated)")
        ->delimiter(',');
    run->add_option("--ipp", runArgs.ipp, "IPP iteration counts J (repeatable or comma separated)")->delimiter(',');
    run->add_option("--out", runArgs.out, "Output CSV path; stdout when omitted");
    run->add_option("--threads", runArgs.threads, "Worker threads; 0 uses all cores");

    VerifyArgs verifyArgs;
    CLI::App *verify = app.add_subcommand("verify", "Run the oracle and property checks");
    verify->add_option("config", verifyArgs.config, "Scenario file for the drop-level checks")
        ->check(CLI::ExistingFile);
    verify->add_option("--instances", verifyArgs.instances, "Random instances for the approximation bound");
    verify->add_option("--samples", verifyArgs.samples, "Samples for the power round trip");
    verify->add_option("--drops", verifyArgs.drops, "Drops for the feasibility check");
    verify->add_option("--seed", verifyArgs.seed, "Seed of the random checks");

    CLI11_PARSE(app, argc, argv);
    try {
        if (run->parsed()) {
            return Run(runArgs);
        }
        return Verify(verifyArgs);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
