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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "loadmin/dpra.hpp"
#include "loadmin/metrics.hpp"
#include "loadmin/scenario.hpp"

namespace loadmin {

/// Seed of drop `dropIndex`; placement, shadowing and fading substreams derive from it.
std::uint64_t DropSeed(std::uint64_t masterSeed, std::size_t dropIndex);

/// Network state of one drop for a given users-per-cell count.
struct DropScenario {
    CellTopology topology;
    UserPopulation population;
    ChannelTensor channel;
};

DropScenario MakeDrop(const ScenarioConfig &config, std::size_t dropIndex, std::size_t usersPerCell);

/// Allocations of one algorithm on one drop.
struct AlgorithmRun {
    Algorithm algorithm = Algorithm::kMwdg;
    std::vector<AllocationMatrix> uniform;  // under uniform power
    std::optional<IppResult> ipp;           // present when DPRA was requested
};

/// Runs every configured algorithm on a drop, going up to the largest requested J when DPRA
/// is among the power modes.
std::vector<AlgorithmRun> RunAlgorithms(const ScenarioConfig &config, const DropScenario &drop, std::size_t dropIndex);

/// Per-configuration results of one drop in the canonical row order.
std::vector<DropResult> EvaluateDrop(const ScenarioConfig &config, std::size_t dropIndex, std::size_t usersPerCell);

struct RunOptions {
    std::size_t threads = 0;  // 0 picks the hardware concurrency
};

struct ScenarioResults {
    std::vector<DropResult> drops;  // ordered by drop index, then canonical row order
    std::vector<SummaryRow> rows;
};

/// Validates the configuration and runs every drop on a worker pool. The output does not
/// depend on the thread count.
ScenarioResults RunScenario(const ScenarioConfig &config, const RunOptions &options = {});

void WriteResultsCsv(std::ostream &out, const std::vector<SummaryRow> &rows);

/// Writes the CSV to `path`; throws std::runtime_error naming the path when it cannot be written.
void EmitResults(const std::vector<SummaryRow> &rows, const std::filesystem::path &path);

}  // namespace loadmin
