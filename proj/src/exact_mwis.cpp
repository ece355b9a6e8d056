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

#include <bit>
#include <cmath>

#include "loadmin/solvers.hpp"

namespace loadmin {

namespace {

using Bits = std::uint64_t;

class BranchAndBound {
  public:
    explicit BranchAndBound(const AllocGraph &graph) : n_(graph.NumVertices()) {
        adjacency_.assign(n_, 0);
        weight_.resize(n_);
        cliqueMasks_.reserve(graph.Cliques().size());
        for (VertexId a = 0; a < n_; ++a) {
            weight_[a] = graph.Vertex(a).weight;
            for (VertexId b = 0; b < n_; ++b) {
                if (graph.Adjacent(a, b)) {
                    adjacency_[a] |= Bits{1} << b;
                }
            }
        }
        for (const Clique &clique : graph.Cliques()) {
            Bits mask = 0;
            for (VertexId v : clique.vertices) {
                mask |= Bits{1} << v;
            }
            cliqueMasks_.push_back(mask);
        }
    }

    MwisResult Solve() {
        const Bits all = n_ == 64 ? ~Bits{0} : (Bits{1} << n_) - 1;
        Search(all, 0, 0);
        MwisResult result;
        result.weight = bestWeight_;
        for (Bits b = bestSet_; b != 0; b &= b - 1) {
            result.vertices.push_back(static_cast<VertexId>(std::countr_zero(b)));
        }
        return result;
    }

  private:
    // An independent set holds at most one vertex per owner clique.
    std::int64_t Bound(Bits candidates) const {
        std::int64_t bound = 0;
        for (Bits clique : cliqueMasks_) {
            std::int64_t heaviest = 0;
            for (Bits b = candidates & clique; b != 0; b &= b - 1) {
                heaviest = std::max(heaviest, weight_[std::countr_zero(b)]);
            }
            bound += heaviest;
        }
        return bound;
    }

    void Search(Bits candidates, std::int64_t current, Bits chosen) {
        if (current > bestWeight_) {
            bestWeight_ = current;
            bestSet_ = chosen;
        }
        if (candidates == 0 || current + Bound(candidates) <= bestWeight_) {
            return;
        }
        int pivot = -1;
        int pivotDegree = -1;
        for (Bits b = candidates; b != 0; b &= b - 1) {
            const int v = std::countr_zero(b);
            const int degree = std::popcount(adjacency_[v] & candidates);
            if (degree > pivotDegree) {
                pivot = v;
                pivotDegree = degree;
            }
        }
        const Bits pivotBit = Bits{1} << pivot;
        Search(candidates & ~adjacency_[pivot] & ~pivotBit, current + weight_[pivot], chosen | pivotBit);
        Search(candidates & ~pivotBit, current, chosen);
    }

    std::size_t n_;
    std::vector<Bits> adjacency_;
    std::vector<std::int64_t> weight_;
    std::vector<Bits> cliqueMasks_;
    std::int64_t bestWeight_ = 0;
    Bits bestSet_ = 0;
};

}  // namespace

MwisResult ExactMwis(const AllocGraph &graph, std::size_t vertexCap) {
    if (vertexCap > 64) {
        throw std::invalid_argument("exact MWIS cap cannot exceed 64 vertices");
    }
    if (graph.NumVertices() > vertexCap) {
        throw std::length_error("exact MWIS refused: " + std::to_string(graph.NumVertices()) +
                                " vertices exceed the cap of " + std::to_string(vertexCap));
    }
    if (graph.NumVertices() == 0) {
        return {};
    }
    return BranchAndBound(graph).Solve();
}

double ApproximationRatio(std::size_t maxPrbs, std::size_t numPrbs) {
    if (numPrbs < 2 || maxPrbs < 1 || maxPrbs >= numPrbs) {
        throw std::domain_error("approximation ratio needs 1 <= M < |PRBs| and |PRBs| >= 2");
    }
    const double m = static_cast<double>(maxPrbs);
    const double p = static_cast<double>(numPrbs);
    return m * std::max((p - 2.0) / (p - m), 1.0);
}

}  // namespace loadmin
