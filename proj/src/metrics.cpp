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

#include "loadmin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace loadmin {

CellOutcome SummarizeCell(const AllocationMatrix &allocation) {
    CellOutcome out;
    out.served = allocation.satisfied.size();
    out.dropped = allocation.dropped.size();
    for (const auto &[user, prbs] : allocation.assignment) {
        out.prbCounts.push_back(PrbCount(prbs));
    }
    return out;
}

double DropResult::MeanDroppedPerCell() const {
    if (cells.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (const CellOutcome &c : cells) {
        total += static_cast<double>(c.dropped);
    }
    return total / static_cast<double>(cells.size());
}

std::optional<double> Eta(const DropResult &result) {
    double sum = 0.0;
    std::size_t cells = 0;
    for (const CellOutcome &c : result.cells) {
        if (c.served == 0) {
            continue;
        }
        const std::size_t prbs = std::accumulate(c.prbCounts.begin(), c.prbCounts.end(), std::size_t{0});
        sum += static_cast<double>(prbs) / static_cast<double>(c.served);
        ++cells;
    }
    if (cells == 0) {
        return std::nullopt;
    }
    return sum / static_cast<double>(cells);
}

MetricSummary Summarize(std::span<const double> samples) {
    MetricSummary s;
    s.samples = samples.size();
    if (samples.empty()) {
        s.mean = std::numeric_limits<double>::quiet_NaN();
        s.standardError = s.ciHalfWidth = s.mean;
        return s;
    }
    s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    if (samples.size() < 2) {
        s.standardError = s.ciHalfWidth = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    double squares = 0.0;
    for (double x : samples) {
        squares += (x - s.mean) * (x - s.mean);
    }
    const double n = static_cast<double>(samples.size());
    s.standardError = std::sqrt(squares / (n - 1.0)) / std::sqrt(n);
    s.ciHalfWidth = 1.96 * s.standardError;
    return s;
}

std::vector<SummaryRow> Aggregate(std::span<const DropResult> results) {
    using Key = std::tuple<std::string, std::string, std::size_t, std::size_t, std::size_t>;
    std::vector<Key> keys;
    std::vector<std::vector<const DropResult *>> groups;
    for (const DropResult &r : results) {
        const Key key{r.algorithm, r.powerMode, r.maxPrbs, r.usersPerCell, r.ippIterations};
        auto it = std::find(keys.begin(), keys.end(), key);
        if (it == keys.end()) {
            keys.push_back(key);
            groups.emplace_back();
            it = keys.end() - 1;
        }
        groups[static_cast<std::size_t>(it - keys.begin())].push_back(&r);
    }

    std::vector<SummaryRow> rows;
    for (std::size_t g = 0; g < keys.size(); ++g) {
        std::vector<double> dropped;
        std::vector<double> eta;
        std::vector<double> power;
        for (const DropResult *r : groups[g]) {
            dropped.push_back(r->MeanDroppedPerCell());
            power.push_back(r->totalPowerW);
            if (const auto e = Eta(*r)) {
                eta.push_back(*e);
            }
        }
        SummaryRow row;
        std::tie(row.algorithm, row.powerMode, row.maxPrbs, row.usersPerCell, row.ippIterations) = keys[g];
        row.drops = groups[g].size();
        row.dropped = Summarize(dropped);
        row.eta = Summarize(eta);
        row.totalPower = Summarize(power);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace loadmin
