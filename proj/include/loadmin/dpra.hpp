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
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loadmin/geometry.hpp"
#include "loadmin/solvers.hpp"

namespace loadmin {

/**
 * Power reduction on one PRB that lowers its rate by exactly `excessRate` under the present
 * interference:  2^(r/B) * (1 - 2^(-dr/B)) * (I + noise) / h.
 * Requires 0 <= excessRate < rateOnPrb; anything else is a std::logic_error.
 */
double DeltaPower(double rateOnPrb, double excessRate, double interference, double noise, double gain,
                  double bandwidth);

/// Power left on a PRB after shaving `excessRate` off its rate. Evaluated as the inverse rate
/// of (r - dr) so that the rate round trip is exact to rounding; never exceeds `currentPower`.
double ShavedPower(double currentPower, double rateOnPrb, double excessRate, double interference, double noise,
                   double gain, double bandwidth);

struct ShavedPrb {
    PrbIndex prb = 0;
    double deltaPower = 0.0;
};

/// What one DPRA pass changed in a cell.
struct DpraCellStep {
    PrbMask freedPrbs = 0;                    // allocated PRBs released by the while-loop
    PrbMask idlePrbs = 0;                     // unallocated PRBs whose power was zeroed
    std::map<UserId, ShavedPrb> shaved;       // at most one PRB per user
    std::map<UserId, double> excessRate;      // excess after releases, before the shave
};

struct DpraCellOutcome {
    AllocationMatrix allocation;  // assignment with released PRBs removed
    std::vector<double> powers;   // new per-PRB powers of the cell
    DpraCellStep step;
};

/**
 * One DPRA pass for a single cell against a snapshot of the network.
 *
 * Zeroes idle PRBs, then per served user releases its weakest PRBs while their rate does not
 * exceed the user's excess, and finally shaves the PRB with the largest power saving so that
 * the user's rate equals its target under the snapshot's interference.
 */
DpraCellOutcome DpraCell(CellId cell, const AllocationMatrix &allocation, const RateTable &rates,
                         const PowerMap &powers, const ChannelTensor &channel, std::span<const double> targets,
                         double prbBandwidth);

struct DpraRoundTrace {
    std::size_t round = 0;
    double totalPower = 0.0;
    double maxChange = 0.0;
    std::vector<std::size_t> cellLoad;
};

/// Called after every round with the round summary, the new powers and the new allocations.
using DpraObserver =
    std::function<void(const DpraRoundTrace &, const PowerMap &, const std::vector<AllocationMatrix> &)>;

struct DpraOptions {
    std::size_t maxRounds = 50;
    /// Absolute stop threshold in watts; unset means 1e-6 of the largest initial per-PRB power.
    std::optional<double> epsilon;
    DpraObserver observer;
};

struct DpraNetworkResult {
    std::vector<AllocationMatrix> allocations;
    PowerMap powers;
    std::size_t rounds = 0;
    bool converged = false;
    std::vector<DpraRoundTrace> trace;
};

/// Synchronous DPRA rounds: every cell steps against the previous round's powers, then all
/// updates apply together. Stops once the largest per-PRB power change drops below epsilon.
DpraNetworkResult DpraNetwork(const CellTopology &topology, const UserPopulation &population,
                              const ChannelTensor &channel, std::vector<AllocationMatrix> allocations,
                              const PowerMap &powers, const DpraOptions &options = {});

/// Line format: `round=<k> total_power_w=<p> max_change_w=<d> load=<l0>,<l1>,...`
void WriteDpraTrace(std::ostream &out, std::span<const DpraRoundTrace> trace);

enum class Algorithm { kMwdg, kRandomGreedy, kMeanEnhancedGreedy };

std::string ToString(Algorithm algorithm);
Algorithm ParseAlgorithm(const std::string &name);

/// Runs the chosen allocator in one cell from the given rates.
AllocationMatrix AllocateCell(Algorithm algorithm, std::span<const UserId> cellUsers, const RateTable &rates,
                              std::span<const double> targets, std::size_t maxPrbs, std::uint64_t orderingSeed);

struct IppIteration {
    PowerMap allocationPowers;                       // powers the allocator saw
    std::vector<AllocationMatrix> beforeDpra;        // allocator output
    std::vector<AllocationMatrix> allocations;       // after DPRA
    PowerMap powers;                                 // after DPRA
    std::size_t dpraRounds = 0;
    bool dpraConverged = false;
};

struct IppOptions {
    Algorithm algorithm = Algorithm::kMwdg;
    std::size_t maxPrbs = 2;
    std::size_t iterations = 1;
    DpraOptions dpra;
    std::uint64_t orderingSeed = 0;
};

struct IppResult {
    std::vector<AllocationMatrix> uniformAllocations;  // first allocation, under uniform power
    std::vector<IppIteration> iterations;              // one entry per J
};

/// Iterative PRB and power allocation. Iteration 1 allocates under uniform power and runs DPRA;
/// later iterations reallocate from the rates under the previous DPRA power map.
IppResult RunIpp(const CellTopology &topology, const UserPopulation &population, const ChannelTensor &channel,
                 const IppOptions &options);

}  // namespace loadmin
