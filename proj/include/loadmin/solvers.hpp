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
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "loadmin/allocation_graph.hpp"
#include "loadmin/geometry.hpp"
#include "loadmin/types.hpp"

namespace loadmin {

/// PRB assignment of one cell: the rows of the binary allocation matrix plus the admission outcome.
struct AllocationMatrix {
    std::map<UserId, PrbMask> assignment;  // served users only
    std::set<UserId> satisfied;
    std::set<UserId> dropped;

    PrbMask UsedPrbs() const;
    std::size_t Load() const;

    /// Empty string when the allocation respects PRB exclusivity, the per-user cap, the target
    /// rate of every served user under `rates`, and the served/dropped partition of `cellUsers`.
    /// Otherwise a description of the first violation.
    std::string Violation(std::span<const UserId> cellUsers, const RateTable &rates, std::span<const double> targets,
                          std::size_t maxPrbs, double relativeTolerance = 0.0) const;
};

struct MwdgStep {
    std::size_t iteration = 0;
    VertexId selected = 0;
    std::vector<VertexId> removed;  // selected vertex and its residual neighbors
    std::size_t remaining = 0;      // vertices left after the removal
};

struct MwdgResult {
    AllocationMatrix allocation;
    std::vector<MwdgStep> trace;
    std::vector<VertexId> selected;
    std::int64_t weight = 0;
};

/**
 * @brief Minimal weighted degree greedy selection.
 *
 * Repeatedly picks the residual vertex with the smallest weighted degree (lowest id on ties),
 * assigns its PRB set to its owner and deletes it together with its residual neighbors.
 * Owners whose clique disappears without a selection are dropped, as are the graph's
 * excluded users.
 */
MwdgResult Mwdg(const AllocGraph &graph);

struct MwisResult {
    std::vector<VertexId> vertices;
    std::int64_t weight = 0;
};

inline constexpr std::size_t kDefaultExactMwisCap = 40;

/// Exact maximum weighted independent set by branch and bound. Refuses (std::length_error)
/// graphs with more than `vertexCap` vertices; `vertexCap` itself may not exceed 64.
MwisResult ExactMwis(const AllocGraph &graph, std::size_t vertexCap = kDefaultExactMwisCap);

/// M * max((P - 2) / (P - M), 1). Requires 1 <= M < P and P >= 2 (std::domain_error otherwise).
double ApproximationRatio(std::size_t maxPrbs, std::size_t numPrbs);

/// Serves users in the given order, each taking its best free PRBs one at a time until its
/// target is met; a user still short after `maxPrbs` PRBs releases them and is dropped.
AllocationMatrix GreedyAllocateInOrder(std::span<const UserId> order, const RateTable &rates,
                                       std::span<const double> targets, std::size_t maxPrbs);

/// Greedy allocation over a seeded random permutation of `users`.
AllocationMatrix RandomGreedyAllocate(std::span<const UserId> users, const RateTable &rates,
                                      std::span<const double> targets, std::size_t maxPrbs, std::uint64_t seed);

/// Greedy allocation with users sorted by ascending mean rate over all PRBs (ties by user id).
AllocationMatrix MeanEnhancedGreedyAllocate(std::span<const UserId> users, const RateTable &rates,
                                            std::span<const double> targets, std::size_t maxPrbs);

}  // namespace loadmin
