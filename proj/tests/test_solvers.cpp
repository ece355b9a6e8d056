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

#include <doctest.h>

#include <algorithm>
#include <set>

#include "loadmin/experiment.hpp"
#include "loadmin/solvers.hpp"
#include "loadmin/verification.hpp"
#include "oracles.hpp"

using namespace loadmin;
using loadmin::testing::BruteForceMwis;
using loadmin::testing::DefinitionAdjacent;
using loadmin::testing::NaiveMwdgSelection;

namespace {

RateTable TableOf(const std::vector<std::vector<double>> &rows) {
    RateTable t(rows.size(), rows.front().size());
    for (UserId u = 0; u < rows.size(); ++u) {
        for (PrbIndex n = 0; n < rows[u].size(); ++n) {
            t.Set(u, n, rows[u][n]);
        }
    }
    return t;
}

void CheckIndependent(const AllocGraph &g, const std::vector<VertexId> &set) {
    std::set<UserId> owners;
    for (VertexId a : set) {
        CHECK(owners.insert(g.Vertex(a).owner).second);
        for (VertexId b : set) {
            CHECK_FALSE(g.Adjacent(a, b));
        }
    }
    CHECK(g.IsIndependent(set));
}

}  // namespace

TEST_CASE("mwdg on the toy graph") {
    const AllocGraph g = BuildGraph(ToyFamilies(), 4);
    const MwdgResult r = Mwdg(g);
    CHECK(r.selected == std::vector<VertexId>{3, 1, 8});
    CHECK(r.weight == 9);
    REQUIRE(r.trace.size() == 3);
    CHECK(r.trace[0].selected == 3);
    CHECK(r.trace[0].remaining == 4);
    CHECK(r.trace[0].removed.size() == 5);
    CHECK(r.trace.back().remaining == 0);
    const std::map<UserId, PrbMask> expected{{0, PrbBit(1)}, {1, PrbBit(0)}, {2, PrbBit(3)}};
    CHECK(r.allocation.assignment == expected);
    CHECK(r.allocation.dropped.empty());
    CHECK(r.allocation.satisfied == std::set<UserId>{0, 1, 2});
}

TEST_CASE("mwdg single vertex and empty graph") {
    const std::vector<AllocationSetFamily> one{{4, 1.0, 2, {MaskOf({1, 2})}}};
    const MwdgResult r = Mwdg(BuildGraph(one, 4));
    CHECK(r.selected == std::vector<VertexId>{0});
    CHECK(r.allocation.assignment.at(4) == MaskOf({1, 2}));
    CHECK(r.trace.size() == 1);
    CHECK(r.trace[0].remaining == 0);

    const MwdgResult empty = Mwdg(BuildGraph({}, 4));
    CHECK(empty.selected.empty());
    CHECK(empty.weight == 0);
}

TEST_CASE("mwdg drops users whose clique vanished") {
    // u1's only set collides with the set picked for u0.
    const std::vector<AllocationSetFamily> families{{0, 1.0, 1, {MaskOf({0})}}, {1, 1.0, 1, {MaskOf({0})}},
                                                    {2, 1.0, 1, {}}};
    const MwdgResult r = Mwdg(BuildGraph(families, 3));
    CHECK(r.allocation.assignment.size() == 1);
    CHECK(r.allocation.dropped == std::set<UserId>{1, 2});
}

TEST_CASE("mwdg matches the naive recomputation on random instances") {
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        const RandomInstance inst = MakeRandomInstance(seed * 7919 + 1, 1 + seed % 3);
        const MwdgResult r = Mwdg(inst.graph);
        CHECK(r.selected == NaiveMwdgSelection(inst.graph));
        CheckIndependent(inst.graph, r.selected);
        std::int64_t w = 0;
        for (VertexId v : r.selected) {
            w += inst.graph.Vertex(v).weight;
        }
        CHECK(r.weight == w);
        for (const GraphVertex &v : inst.graph.Vertices()) {
            bool covered = std::find(r.selected.begin(), r.selected.end(), v.id) != r.selected.end();
            for (VertexId s : r.selected) {
                covered = covered || inst.graph.Adjacent(v.id, s);
            }
            CHECK(covered);
        }
    }
}

TEST_CASE("mwdg matches the naive recomputation on reference cells") {
    ScenarioConfig config;
    for (std::size_t m : {1U, 2U, 3U}) {
        config.maxPrbs = m;
        const DropScenario drop = MakeDrop(config, m, 12);
        const RateTable rates = ComputeRates(drop.topology, drop.population, drop.channel, UniformPower(drop.topology));
        const auto targets = drop.population.TargetRates();
        for (CellId c : {0U, 3U}) {
            std::vector<AllocationSetFamily> families;
            for (UserId u : drop.population.UsersOfCell(c)) {
                families.push_back(MinimalAllocationFamily(u, rates.UserRates(u), targets[u], m));
            }
            const AllocGraph g = BuildGraph(families, drop.topology.NumPrbs());
            if (g.NumVertices() > 1500) {
                continue;
            }
            CHECK(Mwdg(g).selected == NaiveMwdgSelection(g));
        }
    }
}

TEST_CASE("fast weighted degree agrees with the reference on the first iteration") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const RandomInstance inst = MakeRandomInstance(seed + 5000, 3);
        if (inst.graph.NumVertices() == 0) {
            continue;
        }
        VertexId best = 0;
        for (VertexId v = 1; v < inst.graph.NumVertices(); ++v) {
            if (WeightedDegree(inst.graph, v) < WeightedDegree(inst.graph, best)) {
                best = v;
            }
        }
        CHECK(Mwdg(inst.graph).selected.front() == best);
    }
}

TEST_CASE("exact mwis matches exhaustive enumeration") {
    const AllocGraph toy = BuildGraph(ToyFamilies(), 4);
    CHECK(ExactMwis(toy).weight == 9);
    CHECK(BruteForceMwis(toy) == 9);
    CheckIndependent(toy, ExactMwis(toy).vertices);

    const MwisResult empty = ExactMwis(BuildGraph({}, 4));
    CHECK(empty.vertices.empty());
    CHECK(empty.weight == 0);

    std::size_t checked = 0;
    for (std::uint64_t seed = 0; checked < 300; ++seed) {
        const RandomInstance inst = MakeRandomInstance(seed * 31 + 3, 1 + seed % 3);
        if (inst.graph.NumVertices() > 18) {
            continue;
        }
        const MwisResult r = ExactMwis(inst.graph);
        CHECK(r.weight == BruteForceMwis(inst.graph));
        CheckIndependent(inst.graph, r.vertices);
        std::int64_t w = 0;
        for (VertexId v : r.vertices) {
            w += inst.graph.Vertex(v).weight;
        }
        CHECK(w == r.weight);
        ++checked;
    }
}

TEST_CASE("exact mwis on a single clique picks the heaviest vertex") {
    const std::vector<AllocationSetFamily> one{{0, 1.0, 3, {MaskOf({0, 1}), MaskOf({2}), MaskOf({3, 4, 5})}}};
    const MwisResult r = ExactMwis(BuildGraph(one, 8));
    CHECK(r.vertices == std::vector<VertexId>{1});
    CHECK(r.weight == 7);
}

TEST_CASE("exact mwis refuses graphs above the cap") {
    std::vector<AllocationSetFamily> families;
    for (UserId u = 0; u < 6; ++u) {
        families.push_back({u, 1.0, 1, {MaskOf({0}), MaskOf({1}), MaskOf({2}), MaskOf({3}), MaskOf({4})}});
    }
    const AllocGraph g = BuildGraph(families, 8);
    REQUIRE(g.NumVertices() == 30);
    CHECK_THROWS_AS(ExactMwis(g, 20), std::length_error);
    CHECK(ExactMwis(g).weight == 5 * 7);
    CHECK_THROWS_AS(ExactMwis(g, 65), std::invalid_argument);
}

TEST_CASE("approximation ratio") {
    CHECK(ApproximationRatio(1, 2) == 1.0);
    CHECK(ApproximationRatio(1, 24) == 1.0);
    CHECK(ApproximationRatio(2, 24) == doctest::Approx(2.0));
    CHECK(ApproximationRatio(3, 24) == doctest::Approx(22.0 / 7.0));
    CHECK(ApproximationRatio(3, 4) == doctest::Approx(6.0));
    CHECK_THROWS_AS(ApproximationRatio(0, 24), std::domain_error);
    CHECK_THROWS_AS(ApproximationRatio(24, 24), std::domain_error);
    CHECK_THROWS_AS(ApproximationRatio(1, 1), std::domain_error);
}

TEST_CASE("greedy baselines on small examples") {
    const RateTable single = TableOf({{5e6, 1e6}});
    const std::vector<UserId> one{0};
    const std::vector<double> target4{4e6};
    CHECK(RandomGreedyAllocate(one, single, target4, 2, 1).assignment.at(0) == PrbBit(0));
    CHECK(MeanEnhancedGreedyAllocate(one, single, target4, 2).assignment.at(0) == PrbBit(0));

    // best prbs are taken one at a time until the target is met
    const std::vector<double> target55{5.5e6};
    CHECK(GreedyAllocateInOrder(one, single, target55, 2).assignment.at(0) == MaskOf({0, 1}));
    const std::vector<double> target7{7e6};
    const AllocationMatrix unmet = GreedyAllocateInOrder(one, single, target7, 2);
    CHECK(unmet.assignment.empty());
    CHECK(unmet.dropped == std::set<UserId>{0});

    const RateTable same = TableOf({{2.0}, {2.0}});
    const std::vector<UserId> both{0, 1};
    const std::vector<double> targets{1.0, 1.0};
    const std::vector<UserId> reversed{1, 0};
    const AllocationMatrix first = GreedyAllocateInOrder(reversed, same, targets, 1);
    CHECK(first.assignment.count(1) == 1);
    CHECK(first.dropped == std::set<UserId>{0});
    CHECK(MeanEnhancedGreedyAllocate(both, same, targets, 1).assignment.count(0) == 1);

    const RateTable means = TableOf({{3.0, 1.0}, {1.0, 1.0}});
    const std::vector<double> megTargets{2.0, 1.0};
    const AllocationMatrix meg = MeanEnhancedGreedyAllocate(both, means, megTargets, 1);
    CHECK(meg.assignment.at(1) == PrbBit(0));
    CHECK(meg.dropped == std::set<UserId>{0});
}

TEST_CASE("random greedy is seeded") {
    ScenarioConfig config;
    const DropScenario drop = MakeDrop(config, 0, 28);
    const RateTable rates = ComputeRates(drop.topology, drop.population, drop.channel, UniformPower(drop.topology));
    const auto users = drop.population.UsersOfCell(0);
    const auto targets = drop.population.TargetRates();
    const AllocationMatrix a = RandomGreedyAllocate(users, rates, targets, 2, 5);
    const AllocationMatrix b = RandomGreedyAllocate(users, rates, targets, 2, 5);
    CHECK(a.assignment == b.assignment);
    bool differs = false;
    for (std::uint64_t s = 6; s < 20 && !differs; ++s) {
        differs = RandomGreedyAllocate(users, rates, targets, 2, s).assignment != a.assignment;
    }
    CHECK(differs);
}

TEST_CASE("every allocator yields a feasible allocation") {
    ScenarioConfig config;
    for (std::size_t m : {1U, 2U, 3U}) {
        for (std::size_t d = 0; d < 3; ++d) {
            const DropScenario drop = MakeDrop(config, d, 16 + 8 * d);
            const RateTable rates =
                ComputeRates(drop.topology, drop.population, drop.channel, UniformPower(drop.topology));
            const auto targets = drop.population.TargetRates();
            for (CellId c = 0; c < drop.topology.NumCells(); ++c) {
                const auto users = drop.population.UsersOfCell(c);
                for (Algorithm alg : {Algorithm::kMwdg, Algorithm::kRandomGreedy, Algorithm::kMeanEnhancedGreedy}) {
                    const AllocationMatrix a = AllocateCell(alg, users, rates, targets, m, d);
                    CHECK_MESSAGE(a.Violation(users, rates, targets, m).empty(), ToString(alg));
                    if (users.size() > drop.topology.NumPrbs()) {
                        CHECK(a.dropped.size() >= users.size() - drop.topology.NumPrbs());
                    }
                }
            }
        }
    }
}

TEST_CASE("violation reports broken allocations") {
    const RateTable rates = TableOf({{2.0, 2.0, 0.5}, {2.0, 2.0, 0.5}});
    const std::vector<UserId> users{0, 1};
    const std::vector<double> targets{1.0, 1.0};
    AllocationMatrix ok;
    ok.assignment = {{0, PrbBit(0)}, {1, PrbBit(1)}};
    ok.satisfied = {0, 1};
    CHECK(ok.Violation(users, rates, targets, 1).empty());

    AllocationMatrix shared = ok;
    shared.assignment[1] = PrbBit(0);
    CHECK_FALSE(shared.Violation(users, rates, targets, 1).empty());

    AllocationMatrix capped = ok;
    capped.assignment[1] = MaskOf({1, 2});
    CHECK_FALSE(capped.Violation(users, rates, targets, 1).empty());

    AllocationMatrix weak = ok;
    weak.assignment[1] = PrbBit(2);
    CHECK_FALSE(weak.Violation(users, rates, targets, 1).empty());

    AllocationMatrix missing;
    missing.assignment = {{0, PrbBit(0)}};
    missing.satisfied = {0};
    CHECK_FALSE(missing.Violation(users, rates, targets, 1).empty());
    missing.dropped = {1};
    CHECK(missing.Violation(users, rates, targets, 1).empty());
}
