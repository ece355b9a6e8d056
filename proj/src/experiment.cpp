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

#include "loadmin/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "loadmin/rng.hpp"

namespace loadmin {

std::uint64_t DropSeed(std::uint64_t masterSeed, std::size_t dropIndex) {
    return DeriveSeed(masterSeed, Stream::kDrop, {dropIndex});
}

DropScenario MakeDrop(const ScenarioConfig &config, std::size_t dropIndex, std::size_t usersPerCell) {
    const std::uint64_t seed = DropSeed(config.masterSeed, dropIndex);
    CellTopology topology = config.Topology();
    UserPopulation population = DropUsers(topology, usersPerCell, seed, config.targetRateBps);
    ChannelTensor channel = DrawChannel(topology, population, seed, config.Channel());
    return {std::move(topology), std::move(population), std::move(channel)};
}

std::vector<AlgorithmRun> RunAlgorithms(const ScenarioConfig &config, const DropScenario &drop, std::size_t dropIndex) {
    const bool wantDpra =
        std::find(config.powerModes.begin(), config.powerModes.end(), PowerMode::kDpra) != config.powerModes.end();
    const std::size_t maxJ = *std::max_element(config.ippIterations.begin(), config.ippIterations.end());
    const std::uint64_t orderingSeed = DeriveSeed(config.masterSeed, Stream::kOrdering, {dropIndex});

    std::vector<AlgorithmRun> runs;
    for (Algorithm algorithm : config.algorithms) {
        AlgorithmRun run;
        run.algorithm = algorithm;
        if (wantDpra) {
            IppOptions options;
            options.algorithm = algorithm;
            options.maxPrbs = config.maxPrbs;
            options.iterations = maxJ;
            options.dpra = config.Dpra();
            options.orderingSeed = orderingSeed;
            run.ipp = RunIpp(drop.topology, drop.population, drop.channel, options);
            run.uniform = run.ipp->uniformAllocations;
        } else {
            const RateTable rates =
                ComputeRates(drop.topology, drop.population, drop.channel, UniformPower(drop.topology));
            const std::vector<double> targets = drop.population.TargetRates();
            for (CellId c = 0; c < drop.topology.NumCells(); ++c) {
                const std::uint64_t seed = DeriveSeed(orderingSeed, Stream::kOrdering, {c, 1});
                run.uniform.push_back(AllocateCell(algorithm, drop.population.UsersOfCell(c), rates, targets,
                                                   config.maxPrbs, seed));
            }
        }
        runs.push_back(std::move(run));
    }
    return runs;
}

namespace {

DropResult Describe(const ScenarioConfig &config, Algorithm algorithm, PowerMode mode, std::size_t usersPerCell,
                    std::size_t j, std::size_t dropIndex, const std::vector<AllocationMatrix> &allocations,
                    double totalPower) {
    DropResult r;
    r.algorithm = ToString(algorithm);
    r.powerMode = ToString(mode);
    r.maxPrbs = config.maxPrbs;
    r.usersPerCell = usersPerCell;
    r.ippIterations = j;
    r.seed = DropSeed(config.masterSeed, dropIndex);
    r.totalPowerW = totalPower;
    for (const AllocationMatrix &a : allocations) {
        r.cells.push_back(SummarizeCell(a));
    }
    return r;
}

}  // namespace

std::vector<DropResult> EvaluateDrop(const ScenarioConfig &config, std::size_t dropIndex, std::size_t usersPerCell) {
    const DropScenario drop = MakeDrop(config, dropIndex, usersPerCell);
    const std::vector<AlgorithmRun> runs = RunAlgorithms(config, drop, dropIndex);
    const double uniformTotal = UniformPower(drop.topology).Total();

    std::vector<DropResult> out;
    for (const AlgorithmRun &run : runs) {
        for (PowerMode mode : config.powerModes) {
            if (mode == PowerMode::kUniform) {
                out.push_back(
                    Describe(config, run.algorithm, mode, usersPerCell, 1, dropIndex, run.uniform, uniformTotal));
                continue;
            }
            for (std::size_t j : config.ippIterations) {
                const IppIteration &it = run.ipp->iterations.at(j - 1);
                out.push_back(Describe(config, run.algorithm, mode, usersPerCell, j, dropIndex, it.allocations,
                                       it.powers.Total()));
            }
        }
    }
    return out;
}

ScenarioResults RunScenario(const ScenarioConfig &config, const RunOptions &options) {
    config.Validate();
    const std::size_t numDrops = config.numDrops;
    std::vector<std::vector<DropResult>> perDrop(numDrops);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failureMutex;
    const auto worker = [&] {
        for (std::size_t d = next++; d < numDrops; d = next++) {
            try {
                for (std::size_t n : config.usersPerCell) {
                    auto rows = EvaluateDrop(config, d, n);
                    perDrop[d].insert(perDrop[d].end(), std::make_move_iterator(rows.begin()),
                                      std::make_move_iterator(rows.end()));
                }
            } catch (...) {
                std::lock_guard lock(failureMutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = numDrops;
            }
        }
    };

    std::size_t threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    threads = std::min(threads, numDrops);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    ScenarioResults results;
    for (auto &rows : perDrop) {
        results.drops.insert(results.drops.end(), std::make_move_iterator(rows.begin()),
                             std::make_move_iterator(rows.end()));
    }
    results.rows = Aggregate(results.drops);
    return results;
}

namespace {

std::string FormatMetric(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

}  // namespace

void WriteResultsCsv(std::ostream &out, const std::vector<SummaryRow> &rows) {
    out << "algorithm,power_mode,M,N,J,drops,mean_dropped,ci_dropped,mean_eta,ci_eta,mean_total_power_w\n";
    for (const SummaryRow &r : rows) {
        out << r.algorithm << ',' << r.powerMode << ',' << r.maxPrbs << ',' << r.usersPerCell << ','
            << r.ippIterations << ',' << r.drops << ',' << FormatMetric(r.dropped.mean) << ','
            << FormatMetric(r.dropped.ciHalfWidth) << ',' << FormatMetric(r.eta.mean) << ','
            << FormatMetric(r.eta.ciHalfWidth) << ',' << FormatMetric(r.totalPower.mean) << '\n';
    }
}

void EmitResults(const std::vector<SummaryRow> &rows, const std::filesystem::path &path) {
    if (rows.empty()) {
        throw std::invalid_argument("no result rows to write");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write results to " + path.string());
    }
    WriteResultsCsv(out, rows);
    out.flush();
    if (!out) {
        throw std::runtime_error("failed while writing results to " + path.string());
    }
}

}  // namespace loadmin
