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

#include "loadmin/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace loadmin {

namespace {

std::string Trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> SplitList(const std::string &value) {
    std::vector<std::string> items;
    std::stringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = Trim(item);
        if (!item.empty()) {
            items.push_back(item);
        }
    }
    return items;
}

double ParseDouble(const std::string &key, const std::string &text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw ConfigError("'" + key + "': expected a number, got '" + text + "'");
    }
    return value;
}

std::uint64_t ParseUnsigned(const std::string &key, const std::string &text) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("'" + key + "': expected a non-negative integer, got '" + text + "'");
    }
    return value;
}

std::vector<std::size_t> ParseCounts(const std::string &key, const std::string &text) {
    std::vector<std::size_t> out;
    for (const std::string &item : SplitList(text)) {
        out.push_back(static_cast<std::size_t>(ParseUnsigned(key, item)));
    }
    if (out.empty()) {
        throw ConfigError("'" + key + "': empty list");
    }
    return out;
}

std::string FormatDouble(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

template <typename T, typename F>
std::string JoinList(const std::vector<T> &items, F format) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i == 0 ? "" : ",") + format(items[i]);
    }
    return out;
}

template <typename T>
bool HasDuplicates(std::vector<T> items) {
    std::sort(items.begin(), items.end());
    return std::adjacent_find(items.begin(), items.end()) != items.end();
}

}  // namespace

std::string ToString(PowerMode mode) { return mode == PowerMode::kUniform ? "uniform" : "dpra"; }

PowerMode ParsePowerMode(const std::string &name) {
    if (name == "uniform") {
        return PowerMode::kUniform;
    }
    if (name == "dpra") {
        return PowerMode::kDpra;
    }
    throw ConfigError("unknown power mode '" + name + "' (expected uniform or dpra)");
}

void ScenarioConfig::Validate() const {
    if (numCells != 1 && numCells != 7) {
        throw ConfigError("num_cells must be 1 or 7");
    }
    if (numPrbs < 2 || numPrbs > kMaxPrbs) {
        throw ConfigError("num_prbs must lie in [2, " + std::to_string(kMaxPrbs) + "]");
    }
    if (maxPrbs < 1 || maxPrbs >= numPrbs) {
        throw ConfigError("max_prbs must satisfy 1 <= M < num_prbs");
    }
    if (maxPrbs > 8) {
        throw ConfigError("max_prbs above 8 is not supported");
    }
    if (!(interSiteDistanceM > 0.0) || !(systemBandwidthHz > 0.0) || !(targetRateBps > 0.0)) {
        throw ConfigError("distances, bandwidth and target rate must be positive");
    }
    if (shadowStdDb < 0.0) {
        throw ConfigError("shadow_std_db must be non-negative");
    }
    if (numDrops < 1) {
        throw ConfigError("num_drops must be at least 1");
    }
    if (usersPerCell.empty() || std::find(usersPerCell.begin(), usersPerCell.end(), 0u) != usersPerCell.end()) {
        throw ConfigError("users_per_cell must list positive counts");
    }
    if (algorithms.empty() || powerModes.empty() || ippIterations.empty()) {
        throw ConfigError("algorithm, power_mode and ipp_iterations need at least one value");
    }
    if (HasDuplicates(usersPerCell) || HasDuplicates(algorithms) || HasDuplicates(powerModes) ||
        HasDuplicates(ippIterations)) {
        throw ConfigError("sweep lists must not repeat values");
    }
    if (std::find(ippIterations.begin(), ippIterations.end(), 0u) != ippIterations.end()) {
        throw ConfigError("ipp_iterations must be at least 1");
    }
    const bool dpra = std::find(powerModes.begin(), powerModes.end(), PowerMode::kDpra) != powerModes.end();
    const bool iterated = std::any_of(ippIterations.begin(), ippIterations.end(), [](std::size_t j) { return j > 1; });
    if (iterated && !dpra) {
        throw ConfigError("ipp_iterations > 1 requires power_mode dpra");
    }
    if (dpraMaxRounds < 1 || !(dpraEpsilonRel >= 0.0)) {
        throw ConfigError("dpra_max_rounds must be >= 1 and dpra_epsilon_rel >= 0");
    }
}

void ScenarioConfig::Set(const std::string &key, const std::string &value) {
    if (key == "num_cells") {
        numCells = ParseUnsigned(key, value);
    } else if (key == "inter_site_distance_m") {
        interSiteDistanceM = ParseDouble(key, value);
    } else if (key == "system_bandwidth_hz") {
        systemBandwidthHz = ParseDouble(key, value);
    } else if (key == "num_prbs") {
        numPrbs = ParseUnsigned(key, value);
    } else if (key == "total_power_dbm") {
        totalPowerDbm = ParseDouble(key, value);
    } else if (key == "pathloss_intercept_db") {
        pathlossInterceptDb = ParseDouble(key, value);
    } else if (key == "pathloss_slope_db") {
        pathlossSlopeDb = ParseDouble(key, value);
    } else if (key == "shadow_std_db") {
        shadowStdDb = ParseDouble(key, value);
    } else if (key == "noise_density_dbm_hz") {
        noiseDensityDbmPerHz = ParseDouble(key, value);
    } else if (key == "noise_figure_db") {
        noiseFigureDb = ParseDouble(key, value);
    } else if (key == "target_rate_bps") {
        targetRateBps = ParseDouble(key, value);
    } else if (key == "max_prbs") {
        maxPrbs = ParseUnsigned(key, value);
    } else if (key == "users_per_cell") {
        usersPerCell = ParseCounts(key, value);
    } else if (key == "algorithm") {
        algorithms.clear();
        for (const std::string &item : SplitList(value)) {
            algorithms.push_back(ParseAlgorithm(item));
        }
    } else if (key == "power_mode") {
        powerModes.clear();
        for (const std::string &item : SplitList(value)) {
            powerModes.push_back(ParsePowerMode(item));
        }
    } else if (key == "ipp_iterations") {
        ippIterations = ParseCounts(key, value);
    } else if (key == "num_drops") {
        numDrops = ParseUnsigned(key, value);
    } else if (key == "master_seed") {
        masterSeed = ParseUnsigned(key, value);
    } else if (key == "dpra_max_rounds") {
        dpraMaxRounds = ParseUnsigned(key, value);
    } else if (key == "dpra_epsilon_rel") {
        dpraEpsilonRel = ParseDouble(key, value);
    } else {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
}

CellTopology ScenarioConfig::Topology() const {
    return BuildHexGrid(interSiteDistanceM, numCells, DbmToWatts(totalPowerDbm), numPrbs, systemBandwidthHz);
}

ChannelModel ScenarioConfig::Channel() const {
    ChannelModel model;
    model.pathloss = {pathlossInterceptDb, pathlossSlopeDb};
    model.shadowStdDb = shadowStdDb;
    model.noiseDensityDbmPerHz = noiseDensityDbmPerHz;
    model.noiseFigureDb = noiseFigureDb;
    return model;
}

DpraOptions ScenarioConfig::Dpra() const {
    DpraOptions options;
    options.maxRounds = dpraMaxRounds;
    options.epsilon = dpraEpsilonRel * DbmToWatts(totalPowerDbm) / static_cast<double>(numPrbs);
    return options;
}

ScenarioConfig ParseConfig(std::istream &in) {
    ScenarioConfig config;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = Trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineNo) + ": expected 'key = value'");
        }
        try {
            config.Set(Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
        } catch (const ConfigError &e) {
            throw ConfigError("line " + std::to_string(lineNo) + ": " + e.what());
        }
    }
    return config;
}

ScenarioConfig LoadConfig(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open configuration file " + path.string());
    }
    return ParseConfig(in);
}

void WriteConfig(std::ostream &out, const ScenarioConfig &c) {
    const auto count = [](std::size_t n) { return std::to_string(n); };
    out << "num_cells = " << c.numCells << '\n'
        << "inter_site_distance_m = " << FormatDouble(c.interSiteDistanceM) << '\n'
        << "system_bandwidth_hz = " << FormatDouble(c.systemBandwidthHz) << '\n'
        << "num_prbs = " << c.numPrbs << '\n'
        << "total_power_dbm = " << FormatDouble(c.totalPowerDbm) << '\n'
        << "pathloss_intercept_db = " << FormatDouble(c.pathlossInterceptDb) << '\n'
        << "pathloss_slope_db = " << FormatDouble(c.pathlossSlopeDb) << '\n'
        << "shadow_std_db = " << FormatDouble(c.shadowStdDb) << '\n'
        << "noise_density_dbm_hz = " << FormatDouble(c.noiseDensityDbmPerHz) << '\n'
        << "noise_figure_db = " << FormatDouble(c.noiseFigureDb) << '\n'
        << "target_rate_bps = " << FormatDouble(c.targetRateBps) << '\n'
        << "max_prbs = " << c.maxPrbs << '\n'
        << "users_per_cell = " << JoinList(c.usersPerCell, count) << '\n'
        << "algorithm = " << JoinList(c.algorithms, [](Algorithm a) { return ToString(a); }) << '\n'
        << "power_mode = " << JoinList(c.powerModes, [](PowerMode m) { return ToString(m); }) << '\n'
        << "ipp_iterations = " << JoinList(c.ippIterations, count) << '\n'
        << "num_drops = " << c.numDrops << '\n'
        << "master_seed = " << c.masterSeed << '\n'
        << "dpra_max_rounds = " << c.dpraMaxRounds << '\n'
        << "dpra_epsilon_rel = " << FormatDouble(c.dpraEpsilonRel) << '\n';
}

}  // namespace loadmin
