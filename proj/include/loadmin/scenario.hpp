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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "loadmin/dpra.hpp"
#include "loadmin/geometry.hpp"
#include "loadmin/metrics.hpp"

namespace loadmin {

enum class PowerMode { kUniform, kDpra };

std::string ToString(PowerMode mode);
PowerMode ParsePowerMode(const std::string &name);

/**
 * @brief Everything needed to reproduce one experiment.
 *
 * Defaults are the reference macro-cell setup: 7 cells 500 m apart, 5 MHz split into 24 PRBs,
 * 43 dBm per cell, 128.1 + 37.6 log10(d[km]) pathloss, 8 dB shadowing and 768 kb/s per user.
 * List-valued fields are swept; every (N, algorithm, power mode, J) combination becomes one
 * summary row.
 */
struct ScenarioConfig {
    std::size_t numCells = 7;
    double interSiteDistanceM = 500.0;
    double systemBandwidthHz = 5e6;
    std::size_t numPrbs = 24;
    double totalPowerDbm = 43.0;
    double pathlossInterceptDb = 128.1;
    double pathlossSlopeDb = 37.6;
    double shadowStdDb = 8.0;
    double noiseDensityDbmPerHz = -174.0;
    double noiseFigureDb = 9.0;
    double targetRateBps = 768e3;
    std::size_t maxPrbs = 2;
    std::vector<std::size_t> usersPerCell{8, 12, 16, 20, 24, 28, 32};
    std::vector<Algorithm> algorithms{Algorithm::kMwdg};
    std::vector<PowerMode> powerModes{PowerMode::kUniform};
    std::vector<std::size_t> ippIterations{1};
    std::size_t numDrops = 200;
    std::uint64_t masterSeed = 1;
    std::size_t dpraMaxRounds = 50;
    double dpraEpsilonRel = 1e-6;  // relative to the uniform per-PRB power

    /// Throws ConfigError describing the first invalid field.
    void Validate() const;

    /// Sets one field from its textual form; unknown keys and malformed values throw ConfigError.
    void Set(const std::string &key, const std::string &value);

    CellTopology Topology() const;
    ChannelModel Channel() const;
    DpraOptions Dpra() const;

    bool operator==(const ScenarioConfig &) const = default;
};

/// Reads `key = value` lines; blank lines and `#` comments are ignored. Missing keys keep
/// their defaults.
ScenarioConfig ParseConfig(std::istream &in);
ScenarioConfig LoadConfig(const std::filesystem::path &path);

/// Writes every field in `key = value` form, readable by ParseConfig.
void WriteConfig(std::ostream &out, const ScenarioConfig &config);

}  // namespace loadmin
