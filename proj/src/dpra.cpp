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

#include "loadmin/dpra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <utility>

#include "loadmin/rng.hpp"

namespace loadmin {

double DeltaPower(double rateOnPrb, double excessRate, double interference, double noise, double gain,
                  double bandwidth) {
    if (!(excessRate >= 0.0) || !(excessRate < rateOnPrb)) {
        throw std::logic_error("power shave needs 0 <= excess rate < PRB rate");
    }
    // 1 - 2^(-dr/B) == -expm1(-dr ln2 / B), accurate for small excess.
    return std::exp2(rateOnPrb / bandwidth) * -std::expm1(-excessRate / bandwidth * std::numbers::ln2) *
           (interference + noise) / gain;
}

double ShavedPower(double currentPower, double rateOnPrb, double excessRate, double interference, double noise,
                   double gain, double bandwidth) {
    if (!(excessRate >= 0.0) || !(excessRate < rateOnPrb)) {
        throw std::logic_error("power shave needs 0 <= excess rate < PRB rate");
    }
    if (excessRate == 0.0) {
        return currentPower;
    }
    const double target = PowerForRate(bandwidth, rateOnPrb - excessRate, gain, interference, noise);
    return std::clamp(target, 0.0, currentPower);
}

DpraCellOutcome DpraCell(CellId cell, const AllocationMatrix &allocation, const RateTable &rates,
                         const PowerMap &powers, const ChannelTensor &channel, std::span<const double> targets,
                         double prbBandwidth) {
    DpraCellOutcome out;
    out.allocation = allocation;
    const auto cellPowers = powers.CellPowers(cell);
    out.powers.assign(cellPowers.begin(), cellPowers.end());

    const PrbMask used = allocation.UsedPrbs();
    for (PrbIndex n = 0; n < out.powers.size(); ++n) {
        if (!Intersects(used, PrbBit(n)) && out.powers[n] != 0.0) {
            out.step.idlePrbs |= PrbBit(n);
            out.powers[n] = 0.0;
        }
    }

    for (auto &[user, prbs] : out.allocation.assignment) {
        double excess = -targets[user];
        for (PrbIndex n : PrbList(prbs)) {
            excess += rates.Rate(user, n);
        }
        excess = std::max(excess, 0.0);

        while (PrbCount(prbs) > 1) {
            PrbIndex weakest = kMaxPrbs;
            for (PrbIndex n : PrbList(prbs)) {
                if (weakest == kMaxPrbs || rates.Rate(user, n) < rates.Rate(user, weakest)) {
                    weakest = n;
                }
            }
            if (rates.Rate(user, weakest) > excess) {
                break;
            }
            prbs &= ~PrbBit(weakest);
            out.powers[weakest] = 0.0;
            out.step.freedPrbs |= PrbBit(weakest);
            excess -= rates.Rate(user, weakest);
        }
        excess = std::max(excess, 0.0);
        out.step.excessRate[user] = excess;
        if (excess == 0.0) {
            continue;
        }

        PrbIndex best = kMaxPrbs;
        double bestDelta = -1.0;
        for (PrbIndex n : PrbList(prbs)) {
            const double delta = DeltaPower(rates.Rate(user, n), excess, rates.Interference(user, n),
                                            channel.NoisePower(), channel.Gain(user, n, cell), prbBandwidth);
            if (delta > bestDelta) {
                best = n;
                bestDelta = delta;
            }
        }
        const double before = out.powers[best];
        out.powers[best] = ShavedPower(before, rates.Rate(user, best), excess, rates.Interference(user, best),
                                       channel.NoisePower(), channel.Gain(user, best, cell), prbBandwidth);
        out.step.shaved[user] = {best, before - out.powers[best]};
    }
    return out;
}

DpraNetworkResult DpraNetwork(const CellTopology &topology, const UserPopulation &population,
                              const ChannelTensor &channel, std::vector<AllocationMatrix> allocations,
                              const PowerMap &powers, const DpraOptions &options) {
    if (allocations.size() != topology.NumCells()) {
        throw std::invalid_argument("one allocation per cell is required");
    }
    double largestInitial = 0.0;
    for (CellId c = 0; c < topology.NumCells(); ++c) {
        for (double p : powers.CellPowers(c)) {
            largestInitial = std::max(largestInitial, p);
        }
    }
    const double epsilon = options.epsilon.value_or(1e-6 * largestInitial);
    const std::vector<double> targets = population.TargetRates();

    DpraNetworkResult result{std::move(allocations), powers, 0, false, {}};
    for (std::size_t round = 1; round <= options.maxRounds; ++round) {
        const RateTable rates = ComputeRates(topology, population, channel, result.powers);
        PowerMap next = result.powers;
        for (CellId c = 0; c < topology.NumCells(); ++c) {
            DpraCellOutcome outcome =
                DpraCell(c, result.allocations[c], rates, result.powers, channel, targets, topology.PrbBandwidth());
            for (PrbIndex n = 0; n < topology.NumPrbs(); ++n) {
                next.Set(c, n, outcome.powers[n]);
            }
            result.allocations[c] = std::move(outcome.allocation);
        }
        const double change = next.MaxAbsDifference(result.powers);
        result.powers = std::move(next);
        result.rounds = round;

        DpraRoundTrace trace{round, result.powers.Total(), change, {}};
        for (const AllocationMatrix &a : result.allocations) {
            trace.cellLoad.push_back(a.Load());
        }
        if (options.observer) {
            options.observer(trace, result.powers, result.allocations);
        }
        result.trace.push_back(std::move(trace));
        if (change < epsilon) {
            result.converged = true;
            break;
        }
    }
    return result;
}

void WriteDpraTrace(std::ostream &out, std::span<const DpraRoundTrace> trace) {
    const auto flags = out.flags();
    const auto precision = out.precision();
    out.setf(std::ios::scientific, std::ios::floatfield);
    out.precision(9);
    for (const DpraRoundTrace &t : trace) {
        out << "round=" << t.round << " total_power_w=" << t.totalPower << " max_change_w=" << t.maxChange
            << " load=";
        for (std::size_t c = 0; c < t.cellLoad.size(); ++c) {
            out << (c == 0 ? "" : ",") << t.cellLoad[c];
        }
        out << '\n';
    }
    out.flags(flags);
    out.precision(precision);
}

std::string ToString(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::kMwdg:
            return "mwdg";
        case Algorithm::kRandomGreedy:
            return "rg";
        case Algorithm::kMeanEnhancedGreedy:
            return "meg";
    }
    return "unknown";
}

Algorithm ParseAlgorithm(const std::string &name) {
    if (name == "mwdg") {
        return Algorithm::kMwdg;
    }
    if (name == "rg") {
        return Algorithm::kRandomGreedy;
    }
    if (name == "meg") {
        return Algorithm::kMeanEnhancedGreedy;
    }
    throw ConfigError("unknown algorithm '" + name + "' (expected mwdg, rg or meg)");
}

AllocationMatrix AllocateCell(Algorithm algorithm, std::span<const UserId> cellUsers, const RateTable &rates,
                              std::span<const double> targets, std::size_t maxPrbs, std::uint64_t orderingSeed) {
    switch (algorithm) {
        case Algorithm::kMwdg: {
            std::vector<AllocationSetFamily> families;
            families.reserve(cellUsers.size());
            for (UserId u : cellUsers) {
                families.push_back(MinimalAllocationFamily(u, rates.UserRates(u), targets[u], maxPrbs));
            }
            return Mwdg(BuildGraph(families, rates.NumPrbs())).allocation;
        }
        case Algorithm::kRandomGreedy:
            return RandomGreedyAllocate(cellUsers, rates, targets, maxPrbs, orderingSeed);
        case Algorithm::kMeanEnhancedGreedy:
            return MeanEnhancedGreedyAllocate(cellUsers, rates, targets, maxPrbs);
    }
    throw std::logic_error("unhandled algorithm");
}

IppResult RunIpp(const CellTopology &topology, const UserPopulation &population, const ChannelTensor &channel,
                 const IppOptions &options) {
    if (options.iterations < 1) {
        throw ConfigError("IPP needs at least one iteration");
    }
    const std::vector<double> targets = population.TargetRates();
    IppResult result;
    PowerMap powers = UniformPower(topology);
    for (std::size_t j = 1; j <= options.iterations; ++j) {
        const RateTable rates = ComputeRates(topology, population, channel, powers);
        std::vector<AllocationMatrix> allocations;
        for (CellId c = 0; c < topology.NumCells(); ++c) {
            const std::uint64_t seed = DeriveSeed(options.orderingSeed, Stream::kOrdering, {c, j});
            allocations.push_back(
                AllocateCell(options.algorithm, population.UsersOfCell(c), rates, targets, options.maxPrbs, seed));
        }
        if (j == 1) {
            result.uniformAllocations = allocations;
        }
        DpraNetworkResult dpra = DpraNetwork(topology, population, channel, allocations, powers, options.dpra);
        PowerMap before = std::exchange(powers, dpra.powers);
        result.iterations.push_back({std::move(before), std::move(allocations), std::move(dpra.allocations),
                                     std::move(dpra.powers), dpra.rounds, dpra.converged});
    }
    return result;
}

}  // namespace loadmin
