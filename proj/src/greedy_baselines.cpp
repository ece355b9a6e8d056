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
#include <numeric>
#include <sstream>

#include "loadmin/rng.hpp"
#include "loadmin/solvers.hpp"

namespace loadmin {

PrbMask AllocationMatrix::UsedPrbs() const {
    PrbMask used = 0;
    for (const auto &[user, prbs] : assignment) {
        used |= prbs;
    }
    return used;
}

std::size_t AllocationMatrix::Load() const {
    std::size_t load = 0;
    for (const auto &[user, prbs] : assignment) {
        load += PrbCount(prbs);
    }
    return load;
}

std::string AllocationMatrix::Violation(std::span<const UserId> cellUsers, const RateTable &rates,
                                        std::span<const double> targets, std::size_t maxPrbs,
                                        double relativeTolerance) const {
    std::ostringstream why;
    PrbMask used = 0;
    for (const auto &[user, prbs] : assignment) {
        if (Intersects(used, prbs)) {
            why << "PRB shared by several users (user " << user << ")";
            return why.str();
        }
        used |= prbs;
        if (prbs == 0 || PrbCount(prbs) > maxPrbs) {
            why << "user " << user << " holds " << PrbCount(prbs) << " PRBs (cap " << maxPrbs << ")";
            return why.str();
        }
        if (!satisfied.contains(user)) {
            why << "user " << user << " has PRBs but is not marked satisfied";
            return why.str();
        }
        double rate = 0.0;
        for (PrbIndex n : PrbList(prbs)) {
            rate += rates.Rate(user, n);
        }
        if (rate < targets[user] * (1.0 - relativeTolerance)) {
            why << "user " << user << " gets " << rate << " b/s below target " << targets[user];
            return why.str();
        }
    }
    if (satisfied.size() != assignment.size()) {
        return "satisfied users without an assignment";
    }
    for (UserId u : dropped) {
        if (satisfied.contains(u)) {
            why << "user " << u << " is both served and dropped";
            return why.str();
        }
    }
    std::set<UserId> all(cellUsers.begin(), cellUsers.end());
    std::set<UserId> covered = satisfied;
    covered.insert(dropped.begin(), dropped.end());
    if (covered != all) {
        return "served and dropped users do not partition the cell";
    }
    return {};
}

AllocationMatrix GreedyAllocateInOrder(std::span<const UserId> order, const RateTable &rates,
                                       std::span<const double> targets, std::size_t maxPrbs) {
    AllocationMatrix result;
    PrbMask taken = 0;
    const std::size_t numPrbs = rates.NumPrbs();
    for (UserId user : order) {
        const auto userRates = rates.UserRates(user);
        std::vector<PrbIndex> free;
        for (PrbIndex n = 0; n < numPrbs; ++n) {
            if (!Intersects(taken, PrbBit(n)) && userRates[n] > 0.0) {
                free.push_back(n);
            }
        }
        std::stable_sort(free.begin(), free.end(), [&](PrbIndex a, PrbIndex b) { return userRates[a] > userRates[b]; });
        PrbMask mine = 0;
        double rate = 0.0;
        for (std::size_t k = 0; k < free.size() && k < maxPrbs && rate < targets[user]; ++k) {
            mine |= PrbBit(free[k]);
            rate += userRates[free[k]];
        }
        if (mine != 0 && rate >= targets[user]) {
            taken |= mine;
            result.assignment[user] = mine;
            result.satisfied.insert(user);
        } else {
            result.dropped.insert(user);
        }
    }
    return result;
}

AllocationMatrix RandomGreedyAllocate(std::span<const UserId> users, const RateTable &rates,
                                      std::span<const double> targets, std::size_t maxPrbs, std::uint64_t seed) {
    std::vector<UserId> order(users.begin(), users.end());
    auto engine = MakeEngine(seed, Stream::kOrdering);
    // Fisher-Yates by hand: std::shuffle's draw sequence is not pinned by the standard.
    for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(engine() % i);
        std::swap(order[i - 1], order[j]);
    }
    return GreedyAllocateInOrder(order, rates, targets, maxPrbs);
}

AllocationMatrix MeanEnhancedGreedyAllocate(std::span<const UserId> users, const RateTable &rates,
                                            std::span<const double> targets, std::size_t maxPrbs) {
    std::vector<std::pair<double, UserId>> keyed;
    keyed.reserve(users.size());
    for (UserId u : users) {
        const auto r = rates.UserRates(u);
        keyed.emplace_back(std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size()), u);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<UserId> order;
    order.reserve(keyed.size());
    for (const auto &[mean, u] : keyed) {
        order.push_back(u);
    }
    return GreedyAllocateInOrder(order, rates, targets, maxPrbs);
}

}  // namespace loadmin
