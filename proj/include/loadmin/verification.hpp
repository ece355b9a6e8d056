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
#include <string>
#include <vector>

#include "loadmin/allocation_graph.hpp"
#include "loadmin/scenario.hpp"

namespace loadmin {

/// The three-user, four-PRB example graph (PRBs m1..m4 map to indices 0..3, M = 2).
std::vector<AllocationSetFamily> ToyFamilies();

/// A small random allocation instance: rates drawn per (user, PRB), families from real
/// minimal-set enumeration.
struct RandomInstance {
    std::size_t numPrbs = 0;
    std::size_t maxPrbs = 0;
    std::vector<AllocationSetFamily> families;
    AllocGraph graph;
};

RandomInstance MakeRandomInstance(std::uint64_t seed, std::size_t maxPrbs);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    std::size_t boundInstances = 1000;
    std::size_t roundTripSamples = 10000;
    std::size_t feasibilityDrops = 10;
    std::uint64_t seed = 1;
    ScenarioConfig scenario;  // base scenario for the drop-level checks
};

/// Runs the oracle and property checks. The approximation bound is enforced for M > 1; for
/// M = 1 the worst MWDG/exact weight ratio is reported without failing.
std::vector<CheckResult> RunVerification(const VerifyOptions &options);

void PrintReport(std::ostream &out, const std::vector<CheckResult> &results);

}  // namespace loadmin
