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

#include <cmath>
#include <random>
#include <sstream>

#include "loadmin/dpra.hpp"
#include "loadmin/experiment.hpp"
#include "loadmin/rng.hpp"

using namespace loadmin;

namespace {

/// One user alone in one cell with unit bandwidth, gain and noise on every PRB.
struct LoneUser {
    CellTopology topology = CellTopology({{0, {0.0, 0.0}}}, 500.0, {100.0}, 4, 4.0);
    UserPopulation population = UserPopulation({{0, 0, {10.0, 0.0}, 2.0}}, 1, 1);
    ChannelTensor channel = ChannelTensor(1, 4, 1, 1.0);

    LoneUser() {
        for (PrbIndex n = 0; n < 4; ++n) {
            channel.SetGain(0, n, 0, 1.0);
        }
    }
};

}  // namespace

TEST_CASE("delta power closed form") {
    CHECK(DeltaPower(2.0, 1.0, 0.0, 1.0, 1.0, 1.0) == doctest::Approx(2.0));
    CHECK(DeltaPower(2.0, 0.0, 0.0, 1.0, 1.0, 1.0) == 0.0);
    // 2^(r/B) (1 - 2^(-dr/B)) (I + noise) / h
    const double expected = std::exp2(3.0 / 2.0) * (1.0 - std::exp2(-1.0 / 2.0)) * (0.25 + 0.5) / 0.1;
    CHECK(DeltaPower(3.0, 1.0, 0.25, 0.5, 0.1, 2.0) == doctest::Approx(expected).epsilon(1e-14));
    CHECK_THROWS_AS(DeltaPower(2.0, 2.0, 0.0, 1.0, 1.0, 1.0), std::logic_error);
    CHECK_THROWS_AS(DeltaPower(2.0, 3.0, 0.0, 1.0, 1.0, 1.0), std::logic_error);
    CHECK_THROWS_AS(DeltaPower(2.0, -0.1, 0.0, 1.0, 1.0, 1.0), std::logic_error);
}

TEST_CASE("shaved power equals current power minus delta power") {
    auto engine = MakeEngine(7, Stream::kFading);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double b = 1e3 + 1e6 * unit(engine);
        const double h = std::pow(10.0, -13.0 + 3.0 * unit(engine));
        const double interference = std::pow(10.0, -14.0 + 3.0 * unit(engine));
        const double noise = 1e-14;
        const double p = 0.01 + unit(engine);
        const double r = ShannonRate(b, p, h, interference, noise);
        const double dr = r * (0.05 + 0.9 * unit(engine));
        const double shaved = ShavedPower(p, r, dr, interference, noise, h, b);
        CHECK(shaved == doctest::Approx(p - DeltaPower(r, dr, interference, noise, h, b)).epsilon(1e-9));
        CHECK(ShannonRate(b, shaved, h, interference, noise) == doctest::Approx(r - dr).epsilon(1e-12));
        CHECK(shaved <= p);
    }
}

TEST_CASE("cell step frees the weak prb and shaves the other") {
    LoneUser s;
    // rates 3 and 4 bit/s on prbs 0 and 1 need powers 2^3 - 1 and 2^4 - 1
    PowerMap powers(1, 4);
    powers.Set(0, 0, 7.0);
    powers.Set(0, 1, 15.0);
    powers.Set(0, 3, 5.0);
    const RateTable rates = ComputeRates(s.topology, s.population, s.channel, powers);
    REQUIRE(rates.Rate(0, 0) == doctest::Approx(3.0));
    REQUIRE(rates.Rate(0, 1) == doctest::Approx(4.0));

    AllocationMatrix alloc;
    alloc.assignment[0] = MaskOf({0, 1});
    alloc.satisfied = {0};
    const std::vector<double> targets{2.0};
    const DpraCellOutcome out = DpraCell(0, alloc, rates, powers, s.channel, targets, 1.0);
    CHECK(out.step.freedPrbs == PrbBit(0));
    CHECK(out.step.idlePrbs == PrbBit(3));
    CHECK(out.step.excessRate.at(0) == doctest::Approx(2.0));
    REQUIRE(out.step.shaved.count(0) == 1);
    CHECK(out.step.shaved.at(0).prb == 1);
    CHECK(out.step.shaved.at(0).deltaPower == doctest::Approx(12.0));
    CHECK(out.allocation.assignment.at(0) == PrbBit(1));
    CHECK(out.powers == std::vector<double>{0.0, 3.0, 0.0, 0.0});
    CHECK(ShannonRate(1.0, out.powers[1], 1.0, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("cell step keeps a user exactly at target") {
    LoneUser s;
    PowerMap powers(1, 4);
    powers.Set(0, 2, 3.0);
    const RateTable rates = ComputeRates(s.topology, s.population, s.channel, powers);
    AllocationMatrix alloc;
    alloc.assignment[0] = PrbBit(2);
    alloc.satisfied = {0};
    const std::vector<double> targets{rates.Rate(0, 2)};
    const DpraCellOutcome out = DpraCell(0, alloc, rates, powers, s.channel, targets, 1.0);
    CHECK(out.step.shaved.empty());
    CHECK(out.powers[2] == 3.0);
    CHECK(out.step.freedPrbs == 0);
}

TEST_CASE("cell step shaves the prb with the largest saving") {
    LoneUser s;
    s.channel.SetGain(0, 0, 0, 0.5);
    PowerMap powers(1, 4);
    powers.Set(0, 0, 14.0);  // 3 bit/s at half gain
    powers.Set(0, 1, 7.0);   // 3 bit/s
    const RateTable rates = ComputeRates(s.topology, s.population, s.channel, powers);
    AllocationMatrix alloc;
    alloc.assignment[0] = MaskOf({0, 1});
    alloc.satisfied = {0};
    const std::vector<double> targets{5.0};
    const DpraCellOutcome out = DpraCell(0, alloc, rates, powers, s.channel, targets, 1.0);
    CHECK(out.step.freedPrbs == 0);
    CHECK(out.step.shaved.at(0).prb == 0);
    CHECK(out.powers[1] == 7.0);
    CHECK(ShannonRate(1.0, out.powers[0], 0.5, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("single cell converges after one effective round") {
    LoneUser s;
    const PowerMap start(1, 4, 25.0);
    AllocationMatrix alloc;
    alloc.assignment[0] = MaskOf({1, 2});
    alloc.satisfied = {0};
    const RateTable rates = ComputeRates(s.topology, s.population, s.channel, start);
    REQUIRE(rates.Rate(0, 1) > 2.0);
    // the rate of one prb covers the excess, so the weaker one is released
    const DpraNetworkResult r = DpraNetwork(s.topology, s.population, s.channel, {alloc}, start);
    CHECK(r.converged);
    CHECK(r.rounds == 2);
    REQUIRE(r.trace.size() == 2);
    CHECK(r.trace[1].maxChange == 0.0);
    CHECK(r.trace[0].cellLoad == std::vector<std::size_t>{1});
    CHECK(PrbCount(r.allocations[0].assignment.at(0)) == 1);
    CHECK(r.powers.Total() == doctest::Approx(3.0));
}

TEST_CASE("network rounds honour max rounds and report non-convergence") {
    ScenarioConfig config;
    const DropScenario drop = MakeDrop(config, 0, 20);
    const RateTable rates = ComputeRates(drop.topology, drop.population, drop.channel, UniformPower(drop.topology));
    std::vector<AllocationMatrix> allocs;
    for (CellId c = 0; c < 7; ++c) {
        allocs.push_back(AllocateCell(Algorithm::kMwdg, drop.population.UsersOfCell(c), rates,
                                      drop.population.TargetRates(), 2, 0));
    }
    DpraOptions options;
    options.maxRounds = 2;
    const DpraNetworkResult r =
        DpraNetwork(drop.topology, drop.population, drop.channel, allocs, UniformPower(drop.topology), options);
    CHECK(r.rounds == 2);
    CHECK_FALSE(r.converged);
    CHECK(r.trace.size() == 2);
}

TEST_CASE("dpra invariants on reference drops") {
    ScenarioConfig config;
    for (std::size_t m : {1U, 2U, 3U}) {
        for (std::size_t d = 0; d < 3; ++d) {
            const std::size_t n = 12 + 8 * d;
            const DropScenario drop = MakeDrop(config, d + 10 * m, n);
            const PowerMap uniform = UniformPower(drop.topology);
            const RateTable rates = ComputeRates(drop.topology, drop.population, drop.channel, uniform);
            const auto targets = drop.population.TargetRates();
            std::vector<AllocationMatrix> allocs;
            for (CellId c = 0; c < 7; ++c) {
                allocs.push_back(AllocateCell(Algorithm::kMwdg, drop.population.UsersOfCell(c), rates, targets, m, 0));
            }
            PowerMap previous = uniform;
            std::vector<AllocationMatrix> previousAllocs = allocs;
            std::size_t rounds = 0;
            DpraOptions options;
            options.observer = [&](const DpraRoundTrace &t, const PowerMap &p,
                                   const std::vector<AllocationMatrix> &current) {
                ++rounds;
                CHECK(t.round == rounds);
                CHECK(t.totalPower == doctest::Approx(p.Total()));
                CHECK(p.IsValidFor(drop.topology));
                const RateTable now = ComputeRates(drop.topology, drop.population, drop.channel, p);
                for (CellId c = 0; c < 7; ++c) {
                    for (PrbIndex k = 0; k < drop.topology.NumPrbs(); ++k) {
                        CHECK(p.At(c, k) <= previous.At(c, k));
                        if (!Intersects(current[c].UsedPrbs(), PrbBit(k))) {
                            CHECK(p.At(c, k) == 0.0);
                        }
                    }
                    const auto users = drop.population.UsersOfCell(c);
                    CHECK(current[c].Violation(users, now, targets, m, 1e-9) == "");
                    CHECK(current[c].satisfied == previousAllocs[c].satisfied);
                    for (const auto &[u, prbs] : current[c].assignment) {
                        CHECK((prbs & ~previousAllocs[c].assignment.at(u)) == 0);
                    }
                }
                previous = p;
                previousAllocs = current;
            };
            const DpraNetworkResult r =
                DpraNetwork(drop.topology, drop.population, drop.channel, allocs, uniform, options);
            CHECK(rounds == r.rounds);
            CHECK(r.powers.Total() < uniform.Total());
        }
    }
}

TEST_CASE("shaved users hit their target under the observed interference") {
    ScenarioConfig config;
    const DropScenario drop = MakeDrop(config, 3, 20);
    const PowerMap uniform = UniformPower(drop.topology);
    const RateTable rates = ComputeRates(drop.topology, drop.population, drop.channel, uniform);
    const auto targets = drop.population.TargetRates();
    std::size_t shaved = 0;
    for (CellId c = 0; c < 7; ++c) {
        const AllocationMatrix alloc =
            AllocateCell(Algorithm::kMwdg, drop.population.UsersOfCell(c), rates, targets, 2, 0);
        const DpraCellOutcome out = DpraCell(c, alloc, rates, uniform, drop.channel, targets,
                                             drop.topology.PrbBandwidth());
        for (const auto &[u, prbs] : out.allocation.assignment) {
            double rate = 0.0;
            for (PrbIndex n : PrbList(prbs)) {
                rate += ShannonRate(drop.topology.PrbBandwidth(), out.powers[n], drop.channel.Gain(u, n, c),
                                    rates.Interference(u, n), drop.channel.NoisePower());
            }
            if (out.step.shaved.count(u) != 0) {
                ++shaved;
                CHECK(rate == doctest::Approx(targets[u]).epsilon(1e-12));
            } else {
                CHECK(rate >= targets[u]);
            }
        }
    }
    CHECK(shaved > 0);
}

TEST_CASE("dpra trace format") {
    const std::vector<DpraRoundTrace> trace{{1, 2.5, 0.125, {3, 4}}, {2, 2.0, 0.0, {3, 3}}};
    std::ostringstream out;
    WriteDpraTrace(out, trace);
    CHECK(out.str() ==
          "round=1 total_power_w=2.500000000e+00 max_change_w=1.250000000e-01 load=3,4\n"
          "round=2 total_power_w=2.000000000e+00 max_change_w=0.000000000e+00 load=3,3\n");
}

TEST_CASE("algorithm names") {
    for (Algorithm a : {Algorithm::kMwdg, Algorithm::kRandomGreedy, Algorithm::kMeanEnhancedGreedy}) {
        CHECK(ParseAlgorithm(ToString(a)) == a);
    }
    CHECK(ToString(Algorithm::kMwdg) == "mwdg");
    CHECK(ToString(Algorithm::kRandomGreedy) == "rg");
    CHECK(ToString(Algorithm::kMeanEnhancedGreedy) == "meg");
    CHECK_THROWS(ParseAlgorithm("best"));
}

TEST_CASE("one ipp iteration is mwdg followed by dpra") {
    ScenarioConfig config;
    const DropScenario drop = MakeDrop(config, 4, 20);
    IppOptions options;
    options.iterations = 1;
    options.dpra = config.Dpra();
    const IppResult ipp = RunIpp(drop.topology, drop.population, drop.channel, options);
    REQUIRE(ipp.iterations.size() == 1);

    const PowerMap uniform = UniformPower(drop.topology);
    const RateTable rates = ComputeRates(drop.topology, drop.population, drop.channel, uniform);
    std::vector<AllocationMatrix> allocs;
    for (CellId c = 0; c < 7; ++c) {
        allocs.push_back(AllocateCell(Algorithm::kMwdg, drop.population.UsersOfCell(c), rates,
                                      drop.population.TargetRates(), 2, 0));
    }
    const DpraNetworkResult plain = DpraNetwork(drop.topology, drop.population, drop.channel, allocs, uniform,
                                                config.Dpra());
    CHECK(ipp.iterations[0].allocationPowers == uniform);
    CHECK(ipp.iterations[0].powers == plain.powers);
    CHECK(ipp.iterations[0].dpraRounds == plain.rounds);
    for (CellId c = 0; c < 7; ++c) {
        CHECK(ipp.uniformAllocations[c].assignment == allocs[c].assignment);
        CHECK(ipp.iterations[0].allocations[c].assignment == plain.allocations[c].assignment);
    }
}

TEST_CASE("later ipp iterations allocate under the previous dpra powers") {
    ScenarioConfig config;
    const DropScenario drop = MakeDrop(config, 6, 16);
    IppOptions options;
    options.iterations = 3;
    options.dpra = config.Dpra();
    const IppResult ipp = RunIpp(drop.topology, drop.population, drop.channel, options);
    REQUIRE(ipp.iterations.size() == 3);
    const auto targets = drop.population.TargetRates();
    for (std::size_t j = 1; j < 3; ++j) {
        const IppIteration &it = ipp.iterations[j];
        CHECK(it.allocationPowers == ipp.iterations[j - 1].powers);
        const RateTable rates = ComputeRates(drop.topology, drop.population, drop.channel, it.allocationPowers);
        for (CellId c = 0; c < 7; ++c) {
            const auto users = drop.population.UsersOfCell(c);
            CHECK(it.beforeDpra[c].Violation(users, rates, targets, 2) == "");
            for (const auto &[u, prbs] : it.beforeDpra[c].assignment) {
                for (PrbIndex n : PrbList(prbs)) {
                    CHECK(it.allocationPowers.At(c, n) > 0.0);
                }
            }
        }
        for (CellId c = 0; c < 7; ++c) {
            for (PrbIndex n = 0; n < drop.topology.NumPrbs(); ++n) {
                CHECK(it.powers.At(c, n) <= it.allocationPowers.At(c, n));
            }
        }
    }
    options.iterations = 0;
    CHECK_THROWS_AS(RunIpp(drop.topology, drop.population, drop.channel, options), ConfigError);
}
