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
#include <iosfwd>
#include <span>
#include <vector>

#include "loadmin/types.hpp"

namespace loadmin {

/// Inclusion-minimal PRB subsets (size <= maxPrbs) whose summed rates reach the user's target.
struct AllocationSetFamily {
    UserId user = 0;
    double targetRate = 0.0;
    std::size_t maxPrbs = 0;
    std::vector<PrbMask> sets;  // lexicographic order of the ascending PRB sequences

    bool Empty() const { return sets.empty(); }
};

/**
 * Enumerates every PRB subset of size at most `maxPrbs` whose rates sum to at least
 * `targetRate` and that contains no smaller satisfying subset. Subsets are generated by
 * increasing size; supersets of an already satisfying subset are skipped. PRBs with zero
 * rate never enter the candidate pool. An empty result means the user cannot be served.
 */
std::vector<PrbMask> MinimalAllocationSets(std::span<const double> userRates, double targetRate, std::size_t maxPrbs);

AllocationSetFamily MinimalAllocationFamily(UserId user, std::span<const double> userRates, double targetRate,
                                            std::size_t maxPrbs);

struct GraphVertex {
    VertexId id = 0;
    UserId owner = 0;
    PrbMask prbs = 0;
    std::int64_t weight = 0;  // |PRBs| - |prbs|
};

struct Clique {
    UserId user = 0;
    std::vector<VertexId> vertices;
};

/**
 * @brief Conflict graph over candidate allocation sets.
 *
 * One vertex per candidate set. Two vertices are adjacent when they belong to the same user
 * (per-user clique) or when their PRB sets intersect. Edges are not materialized; adjacency
 * is evaluated from the vertex data, which keeps graphs with tens of thousands of vertices
 * cheap to build.
 */
class AllocGraph {
  public:
    AllocGraph() = default;
    AllocGraph(std::size_t numPrbs, std::vector<GraphVertex> vertices, std::vector<Clique> cliques,
               std::vector<UserId> excludedUsers);

    std::size_t NumPrbs() const { return numPrbs_; }
    std::size_t NumVertices() const { return vertices_.size(); }
    const std::vector<GraphVertex> &Vertices() const { return vertices_; }
    const GraphVertex &Vertex(VertexId v) const { return vertices_.at(v); }
    const std::vector<Clique> &Cliques() const { return cliques_; }

    /// Users whose family was empty; they never enter the graph and count as dropped.
    const std::vector<UserId> &ExcludedUsers() const { return excludedUsers_; }

    bool Adjacent(VertexId a, VertexId b) const;
    std::vector<VertexId> Neighbors(VertexId v) const;
    std::size_t NumEdges() const;
    std::int64_t WeightOf(std::span<const VertexId> vertices) const;
    bool IsIndependent(std::span<const VertexId> vertices) const;

  private:
    std::size_t numPrbs_ = 0;
    std::vector<GraphVertex> vertices_;
    std::vector<Clique> cliques_;
    std::vector<UserId> excludedUsers_;
};

/// Builds the conflict graph. Vertex ids are assigned user-major in family order. Families
/// with no sets are reported through ExcludedUsers().
AllocGraph BuildGraph(std::span<const AllocationSetFamily> families, std::size_t numPrbs);

/// Exact rational value of a weighted degree.
struct WeightedDegreeValue {
    std::int64_t numerator = 0;
    std::int64_t denominator = 1;

    double Value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }

    /// Strict ordering by value, exact for integer weights.
    friend bool operator<(const WeightedDegreeValue &a, const WeightedDegreeValue &b) {
        return a.numerator * b.denominator < b.numerator * a.denominator;
    }
    friend bool operator==(const WeightedDegreeValue &a, const WeightedDegreeValue &b) {
        return a.numerator * b.denominator == b.numerator * a.denominator;
    }
};

/// (sum of weights of v's clique peers + sum of weights of v's other neighbors) / W(v),
/// evaluated on the full graph.
WeightedDegreeValue WeightedDegree(const AllocGraph &graph, VertexId v);

/// Plain-text adjacency dump, one vertex per line:
///   <id> owner=<user> prbs={a,b} weight=<w> neighbors=<id,id,...>
void WriteGraph(std::ostream &out, const AllocGraph &graph);

}  // namespace loadmin
