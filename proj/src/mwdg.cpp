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

#include <algorithm>
#include <unordered_map>

#include "loadmin/solvers.hpp"

namespace loadmin {

namespace {

// Sums of residual vertex weights indexed by PRB subsets. For a vertex v the weight of its
// residual rivals (other users, intersecting PRB set) follows by inclusion-exclusion over the
// non-empty subsets S of v's PRB set:
//   sum_S (-1)^{|S|+1} * (weight of residual vertices whose set contains S, minus v's own clique)
// so each weighted degree costs O(2^|set|) instead of O(|V|).
class ResidualDegrees {
  public:
    static constexpr std::size_t kMaxSetSize = 8;

    explicit ResidualDegrees(const AllocGraph &graph) : graph_(graph), alive_(graph.NumVertices(), 1) {
        cliqueOf_.resize(graph.NumVertices());
        for (std::size_t c = 0; c < graph.Cliques().size(); ++c) {
            for (VertexId v : graph.Cliques()[c].vertices) {
                cliqueOf_[v] = c;
            }
        }
        std::unordered_map<PrbMask, std::size_t> keyIndex;
        terms_.resize(graph.NumVertices());
        for (const GraphVertex &v : graph.Vertices()) {
            for (PrbMask sub = v.prbs; sub != 0; sub = (sub - 1) & v.prbs) {
                auto [it, inserted] = keyIndex.try_emplace(sub, keyIndex.size());
                const int sign = PrbCount(sub) % 2 == 1 ? 1 : -1;
                terms_[v.id].push_back({it->second, sign});
            }
        }
        numKeys_ = keyIndex.size();
        total_.assign(numKeys_, 0);
        own_.assign(graph.Cliques().size() * numKeys_, 0);
        cliqueWeight_.assign(graph.Cliques().size(), 0);
        for (const GraphVertex &v : graph.Vertices()) {
            Apply(v.id, v.weight);
        }
        residual_ = graph.NumVertices();
    }

    bool Alive(VertexId v) const { return alive_[v] != 0; }
    std::size_t Residual() const { return residual_; }

    WeightedDegreeValue Degree(VertexId v) const {
        const GraphVertex &self = graph_.Vertex(v);
        const std::size_t c = cliqueOf_[v];
        std::int64_t rivals = 0;
        for (const Term &t : terms_[v]) {
            rivals += t.sign * (total_[t.key] - own_[c * numKeys_ + t.key]);
        }
        return {cliqueWeight_[c] - self.weight + rivals, self.weight};
    }

    void Remove(VertexId v) {
        alive_[v] = 0;
        --residual_;
        Apply(v, -graph_.Vertex(v).weight);
    }

  private:
    struct Term {
        std::size_t key;
        int sign;
    };

    void Apply(VertexId v, std::int64_t delta) {
        const std::size_t c = cliqueOf_[v];
        cliqueWeight_[c] += delta;
        for (const Term &t : terms_[v]) {
            total_[t.key] += delta;
            own_[c * numKeys_ + t.key] += delta;
        }
    }

    const AllocGraph &graph_;
    std::vector<char> alive_;
    std::vector<std::size_t> cliqueOf_;
    std::vector<std::vector<Term>> terms_;
    std::size_t numKeys_ = 0;
    std::vector<std::int64_t> total_;
    std::vector<std::int64_t> own_;
    std::vector<std::int64_t> cliqueWeight_;
    std::size_t residual_ = 0;
};

}  // namespace

MwdgResult Mwdg(const AllocGraph &graph) {
    for (const GraphVertex &v : graph.Vertices()) {
        if (PrbCount(v.prbs) > ResidualDegrees::kMaxSetSize) {
            throw std::invalid_argument("MWDG supports allocation sets of at most 8 PRBs");
        }
        if (v.weight < 1) {
            throw std::invalid_argument("vertex weights must be positive");
        }
    }
    MwdgResult result;
    ResidualDegrees residual(graph);
    const std::size_t n = graph.NumVertices();

    for (std::size_t iteration = 1; residual.Residual() > 0; ++iteration) {
        VertexId best = n;
        WeightedDegreeValue bestDegree;
        for (VertexId v = 0; v < n; ++v) {
            if (!residual.Alive(v)) {
                continue;
            }
            const WeightedDegreeValue d = residual.Degree(v);
            if (best == n || d < bestDegree) {
                best = v;
                bestDegree = d;
            }
        }

        const GraphVertex &chosen = graph.Vertex(best);
        MwdgStep step;
        step.iteration = iteration;
        step.selected = best;
        for (VertexId w = 0; w < n; ++w) {
            if (!residual.Alive(w)) {
                continue;
            }
            const GraphVertex &vw = graph.Vertex(w);
            if (w == best || vw.owner == chosen.owner || Intersects(vw.prbs, chosen.prbs)) {
                step.removed.push_back(w);
            }
        }
        for (VertexId w : step.removed) {
            residual.Remove(w);
        }
        step.remaining = residual.Residual();

        result.allocation.assignment[chosen.owner] = chosen.prbs;
        result.allocation.satisfied.insert(chosen.owner);
        result.selected.push_back(best);
        result.weight += chosen.weight;
        result.trace.push_back(std::move(step));
    }

    for (const Clique &clique : graph.Cliques()) {
        if (!result.allocation.satisfied.contains(clique.user)) {
            result.allocation.dropped.insert(clique.user);
        }
    }
    for (UserId u : graph.ExcludedUsers()) {
        result.allocation.dropped.insert(u);
    }
    return result;
}

}  // namespace loadmin
