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

#include "loadmin/allocation_graph.hpp"

#include <algorithm>
#include <ostream>

namespace loadmin {

namespace {

struct SubsetSearch {
    const std::vector<PrbIndex> &pool;
    std::span<const double> rates;
    double target;
    std::vector<PrbMask> &found;
    std::size_t foundBeforeLevel = 0;

    bool ContainsSatisfyingSubset(PrbMask mask) const {
        for (std::size_t i = 0; i < foundBeforeLevel; ++i) {
            if ((mask & found[i]) == found[i]) {
                return true;
            }
        }
        return false;
    }

    // Extends `mask` by PRBs at pool positions >= `start` until it holds `remaining` more.
    void Extend(PrbMask mask, std::size_t start, std::size_t remaining) {
        if (remaining == 0) {
            if (ContainsSatisfyingSubset(mask)) {
                return;
            }
            double sum = 0.0;
            for (PrbIndex n : PrbList(mask)) {
                sum += rates[n];
            }
            if (sum >= target) {
                found.push_back(mask);
            }
            return;
        }
        for (std::size_t i = start; i + remaining <= pool.size(); ++i) {
            const PrbMask next = mask | PrbBit(pool[i]);
            // A partial set that already contains a satisfying set cannot lead to a minimal one.
            if (ContainsSatisfyingSubset(next)) {
                continue;
            }
            Extend(next, i + 1, remaining - 1);
        }
    }
};

}  // namespace

std::vector<PrbMask> MinimalAllocationSets(std::span<const double> userRates, double targetRate, std::size_t maxPrbs) {
    if (userRates.size() > kMaxPrbs) {
        throw std::invalid_argument("more PRBs than a PRB mask can hold");
    }
    std::vector<PrbIndex> pool;
    for (PrbIndex n = 0; n < userRates.size(); ++n) {
        if (userRates[n] > 0.0) {
            pool.push_back(n);
        }
    }
    std::vector<PrbMask> found;
    SubsetSearch search{pool, userRates, targetRate, found};
    for (std::size_t size = 1; size <= std::min(maxPrbs, pool.size()); ++size) {
        search.foundBeforeLevel = found.size();
        search.Extend(0, 0, size);
    }
    std::sort(found.begin(), found.end(), LexicographicLess);
    return found;
}

AllocationSetFamily MinimalAllocationFamily(UserId user, std::span<const double> userRates, double targetRate,
                                            std::size_t maxPrbs) {
    return {user, targetRate, maxPrbs, MinimalAllocationSets(userRates, targetRate, maxPrbs)};
}

AllocGraph::AllocGraph(std::size_t numPrbs, std::vector<GraphVertex> vertices, std::vector<Clique> cliques,
                       std::vector<UserId> excludedUsers)
    : numPrbs_(numPrbs),
      vertices_(std::move(vertices)),
      cliques_(std::move(cliques)),
      excludedUsers_(std::move(excludedUsers)) {}

bool AllocGraph::Adjacent(VertexId a, VertexId b) const {
    if (a == b) {
        return false;
    }
    const GraphVertex &va = vertices_.at(a);
    const GraphVertex &vb = vertices_.at(b);
    return va.owner == vb.owner || Intersects(va.prbs, vb.prbs);
}

std::vector<VertexId> AllocGraph::Neighbors(VertexId v) const {
    std::vector<VertexId> out;
    for (VertexId w = 0; w < vertices_.size(); ++w) {
        if (Adjacent(v, w)) {
            out.push_back(w);
        }
    }
    return out;
}

std::size_t AllocGraph::NumEdges() const {
    std::size_t edges = 0;
    for (VertexId a = 0; a < vertices_.size(); ++a) {
        for (VertexId b = a + 1; b < vertices_.size(); ++b) {
            edges += Adjacent(a, b) ? 1 : 0;
        }
    }
    return edges;
}

std::int64_t AllocGraph::WeightOf(std::span<const VertexId> vertices) const {
    std::int64_t total = 0;
    for (VertexId v : vertices) {
        total += vertices_.at(v).weight;
    }
    return total;
}

bool AllocGraph::IsIndependent(std::span<const VertexId> vertices) const {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (std::size_t j = i + 1; j < vertices.size(); ++j) {
            if (vertices[i] == vertices[j] || Adjacent(vertices[i], vertices[j])) {
                return false;
            }
        }
    }
    return true;
}

AllocGraph BuildGraph(std::span<const AllocationSetFamily> families, std::size_t numPrbs) {
    std::vector<GraphVertex> vertices;
    std::vector<Clique> cliques;
    std::vector<UserId> excluded;
    for (const AllocationSetFamily &family : families) {
        if (family.Empty()) {
            excluded.push_back(family.user);
            continue;
        }
        Clique clique{family.user, {}};
        for (PrbMask set : family.sets) {
            if (set == 0 || PrbCount(set) >= numPrbs || (numPrbs < kMaxPrbs && (set >> numPrbs) != 0)) {
                throw std::invalid_argument("allocation set " + FormatPrbSet(set) + " does not fit the PRB grid");
            }
            const VertexId id = vertices.size();
            vertices.push_back({id, family.user, set,
                                static_cast<std::int64_t>(numPrbs) - static_cast<std::int64_t>(PrbCount(set))});
            clique.vertices.push_back(id);
        }
        cliques.push_back(std::move(clique));
    }
    return AllocGraph(numPrbs, std::move(vertices), std::move(cliques), std::move(excluded));
}

WeightedDegreeValue WeightedDegree(const AllocGraph &graph, VertexId v) {
    const GraphVertex &self = graph.Vertex(v);
    std::int64_t peers = 0;
    std::int64_t rivals = 0;
    for (const GraphVertex &w : graph.Vertices()) {
        if (w.id == v) {
            continue;
        }
        if (w.owner == self.owner) {
            peers += w.weight;
        } else if (Intersects(w.prbs, self.prbs)) {
            rivals += w.weight;
        }
    }
    return {peers + rivals, self.weight};
}

void WriteGraph(std::ostream &out, const AllocGraph &graph) {
    for (const GraphVertex &v : graph.Vertices()) {
        out << v.id << " owner=" << v.owner << " prbs=" << FormatPrbSet(v.prbs) << " weight=" << v.weight
            << " neighbors=";
        bool first = true;
        for (VertexId w : graph.Neighbors(v.id)) {
            out << (first ? "" : ",") << w;
            first = false;
        }
        out << '\n';
    }
}

}  // namespace loadmin
