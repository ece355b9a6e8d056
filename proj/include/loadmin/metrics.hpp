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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loadmin/solvers.hpp"

namespace loadmin {

struct CellOutcome {
    std::size_t served = 0;
    std::size_t dropped = 0;
    std::vector<std::size_t> prbCounts;  // one entry per served user
};

CellOutcome SummarizeCell(const AllocationMatrix &allocation);

/// Outcome of one Monte-Carlo drop for one configuration.
struct DropResult {
    std::string algorithm;
    std::string powerMode;
    std::size_t maxPrbs = 0;
    std::size_t usersPerCell = 0;
    std::size_t ippIterations = 1;
    std::uint64_t seed = 0;
    std::vector<CellOutcome> cells;
    double totalPowerW = 0.0;

    /// Dropped users averaged over cells.
    double MeanDroppedPerCell() const;
};

/// Mean over cells with at least one served user of (PRBs held by served users / served users).
/// Empty when no cell serves anyone.
std::optional<double> Eta(const DropResult &result);

struct MetricSummary {
    std::size_t samples = 0;
    double mean = 0.0;
    double standardError = 0.0;
    /// Half-width of the normal-approximation 95% interval; NaN with fewer than two samples.
    double ciHalfWidth = 0.0;

    double Lower() const { return mean - ciHalfWidth; }
    double Upper() const { return mean + ciHalfWidth; }
};

MetricSummary Summarize(std::span<const double> samples);

struct SummaryRow {
    std::string algorithm;
    std::string powerMode;
    std::size_t maxPrbs = 0;
    std::size_t usersPerCell = 0;
    std::size_t ippIterations = 1;
    std::size_t drops = 0;
    MetricSummary dropped;
    MetricSummary eta;  // over drops where eta is defined
    MetricSummary totalPower;
};

/// Groups drops by (algorithm, power mode, M, N, J) and summarizes each group. Groups keep
/// the order of their first appearance in `results`.
std::vector<SummaryRow> Aggregate(std::span<const DropResult> results);

}  // namespace loadmin
