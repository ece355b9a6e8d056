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

#include "loadmin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "loadmin/rng.hpp"

namespace loadmin {

std::string FormatPrbSet(PrbMask mask) {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (PrbIndex n : PrbList(mask)) {
        if (!first) {
            out << ',';
        }
        out << n;
        first = false;
    }
    out << '}';
    return out.str();
}

double Distance(const Point &a, const Point &b) { return std::hypot(a.x - b.x, a.y - b.y); }

CellTopology::CellTopology(std::vector<Cell> cells, double interSiteDistance, std::vector<double> totalPowerW,
                           std::size_t numPrbs, double systemBandwidthHz)
    : cells_(std::move(cells)),
      interSiteDistance_(interSiteDistance),
      totalPowerW_(std::move(totalPowerW)),
      numPrbs_(numPrbs),
      prbBandwidth_(systemBandwidthHz / static_cast<double>(numPrbs)) {
    if (cells_.empty()) {
        throw ConfigError("topology needs at least one cell");
    }
    if (totalPowerW_.size() != cells_.size()) {
        throw ConfigError("one power budget per cell is required");
    }
    if (numPrbs_ < 1 || numPrbs_ > kMaxPrbs) {
        throw ConfigError("number of PRBs must lie in [1, " + std::to_string(kMaxPrbs) + "]");
    }
    if (!(systemBandwidthHz > 0.0)) {
        throw ConfigError("system bandwidth must be positive");
    }
    if (!(interSiteDistance_ > 0.0)) {
        throw ConfigError("inter-site distance must be positive");
    }
    for (double p : totalPowerW_) {
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw ConfigError("cell power budgets must be positive and finite");
        }
    }
}

bool CellTopology::Contains(CellId cell, const Point &p) const {
    const Point &c = cells_.at(cell).position;
    const double dx = p.x - c.x;
    const double dy = p.y - c.y;
    const double limit = Apothem() * (1.0 + 1e-12);
    for (int k = 0; k < 6; ++k) {
        const double angle = k * std::numbers::pi / 3.0;
        if (dx * std::cos(angle) + dy * std::sin(angle) > limit) {
            return false;
        }
    }
    return true;
}

CellTopology CellTopology::WithUniformPower(double watts) const {
    return CellTopology(cells_, interSiteDistance_, std::vector<double>(cells_.size(), watts), numPrbs_,
                        SystemBandwidth());
}

CellTopology BuildHexGrid(double interSiteDistance, std::size_t numCells, double totalPowerPerCellW,
                          std::size_t numPrbs, double systemBandwidthHz) {
    if (numCells != 1 && numCells != 7) {
        throw ConfigError("hexagonal grid supports 1 or 7 cells, got " + std::to_string(numCells));
    }
    std::vector<Cell> cells;
    cells.push_back({0, {0.0, 0.0}});
    if (numCells == 7) {
        for (int k = 0; k < 6; ++k) {
            const double angle = k * std::numbers::pi / 3.0;
            cells.push_back({static_cast<CellId>(k + 1),
                             {interSiteDistance * std::cos(angle), interSiteDistance * std::sin(angle)}});
        }
    }
    return CellTopology(std::move(cells), interSiteDistance, std::vector<double>(numCells, totalPowerPerCellW), numPrbs,
                        systemBandwidthHz);
}

UserPopulation::UserPopulation(std::vector<User> users, std::size_t numCells, std::size_t usersPerCell)
    : users_(std::move(users)), numCells_(numCells), usersPerCell_(usersPerCell) {
    if (users_.size() != numCells_ * usersPerCell_) {
        throw ConfigError("population size does not match cells x users per cell");
    }
    for (std::size_t i = 0; i < users_.size(); ++i) {
        if (users_[i].id != i || users_[i].servingCell != i / usersPerCell_) {
            throw ConfigError("users must be stored cell-major with dense ids");
        }
        if (!(users_[i].targetRate > 0.0)) {
            throw ConfigError("target rates must be positive");
        }
    }
}

std::vector<UserId> UserPopulation::UsersOfCell(CellId cell) const {
    std::vector<UserId> ids(usersPerCell_);
    std::iota(ids.begin(), ids.end(), cell * usersPerCell_);
    return ids;
}

std::vector<double> UserPopulation::TargetRates() const {
    std::vector<double> out;
    out.reserve(users_.size());
    for (const User &u : users_) {
        out.push_back(u.targetRate);
    }
    return out;
}

UserPopulation DropUsers(const CellTopology &topology, std::size_t usersPerCell, std::uint64_t seed,
                         double targetRate) {
    if (usersPerCell < 1) {
        throw ConfigError("at least one user per cell is required");
    }
    const double halfWidth = topology.Apothem();
    const double halfHeight = topology.Apothem() * 2.0 / std::sqrt(3.0);
    std::vector<User> users;
    users.reserve(topology.NumCells() * usersPerCell);
    for (const Cell &cell : topology.Cells()) {
        for (std::size_t k = 0; k < usersPerCell; ++k) {
            auto engine = MakeEngine(seed, Stream::kPlacement, {cell.id, k});
            std::uniform_real_distribution<double> ux(-halfWidth, halfWidth);
            std::uniform_real_distribution<double> uy(-halfHeight, halfHeight);
            Point p;
            do {
                p = {cell.position.x + ux(engine), cell.position.y + uy(engine)};
            } while (!topology.Contains(cell.id, p));
            users.push_back({users.size(), cell.id, p, targetRate});
        }
    }
    return UserPopulation(std::move(users), topology.NumCells(), usersPerCell);
}

double PathlossModel::LossDb(double distanceKm) const { return interceptDb + slopeDbPerDecade * std::log10(distanceKm); }

double ChannelModel::NoisePower(double prbBandwidthHz) const {
    return DbmToWatts(noiseDensityDbmPerHz + noiseFigureDb + 10.0 * std::log10(prbBandwidthHz));
}

ChannelTensor::ChannelTensor(std::size_t numUsers, std::size_t numPrbs, std::size_t numCells, double noisePower)
    : numUsers_(numUsers),
      numPrbs_(numPrbs),
      numCells_(numCells),
      noisePower_(noisePower),
      gain_(numUsers * numPrbs * numCells, 0.0) {
    if (!(noisePower > 0.0)) {
        throw ConfigError("noise power must be positive");
    }
}

double LinkGain(const PathlossModel &pathloss, double distanceM, double shadowDb, double fading) {
    return std::pow(10.0, (shadowDb - pathloss.LossDb(distanceM / 1000.0)) / 10.0) * fading;
}

ChannelTensor DrawChannel(const CellTopology &topology, const UserPopulation &population, std::uint64_t seed,
                          const ChannelModel &model) {
    ChannelTensor channel(population.Size(), topology.NumPrbs(), topology.NumCells(),
                          model.NoisePower(topology.PrbBandwidth()));
    std::normal_distribution<double> shadow(0.0, model.shadowStdDb > 0.0 ? model.shadowStdDb : 1.0);
    std::exponential_distribution<double> fading(1.0);
    for (const User &user : population.Users()) {
        const std::uint64_t cell = user.servingCell;
        const std::uint64_t slot = user.id - user.servingCell * population.UsersPerCell();
        for (const Cell &bs : topology.Cells()) {
            auto shadowEngine = MakeEngine(seed, Stream::kShadowing, {cell, slot, bs.id});
            auto fadingEngine = MakeEngine(seed, Stream::kFading, {cell, slot, bs.id});
            const double distance = std::max(Distance(user.position, bs.position), model.minDistanceM);
            shadow.reset();
            const double shadowDb = model.shadowStdDb > 0.0 ? shadow(shadowEngine) : 0.0;
            const double meanGain = LinkGain(model.pathloss, distance, shadowDb, 1.0);
            for (PrbIndex n = 0; n < topology.NumPrbs(); ++n) {
                channel.SetGain(user.id, n, bs.id, meanGain * fading(fadingEngine));
            }
        }
    }
    return channel;
}

PowerMap::PowerMap(std::size_t numCells, std::size_t numPrbs, double value)
    : numCells_(numCells), numPrbs_(numPrbs), power_(numCells * numPrbs, value) {}

double PowerMap::CellTotal(CellId cell) const {
    const auto powers = CellPowers(cell);
    return std::accumulate(powers.begin(), powers.end(), 0.0);
}

double PowerMap::Total() const { return std::accumulate(power_.begin(), power_.end(), 0.0); }

double PowerMap::MaxAbsDifference(const PowerMap &other) const {
    if (other.numCells_ != numCells_ || other.numPrbs_ != numPrbs_) {
        throw std::invalid_argument("power maps differ in shape");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < power_.size(); ++i) {
        worst = std::max(worst, std::abs(power_[i] - other.power_[i]));
    }
    return worst;
}

bool PowerMap::IsValidFor(const CellTopology &topology) const {
    if (numCells_ != topology.NumCells() || numPrbs_ != topology.NumPrbs()) {
        return false;
    }
    if (std::any_of(power_.begin(), power_.end(), [](double p) { return !(p >= 0.0) || !std::isfinite(p); })) {
        return false;
    }
    for (CellId c = 0; c < numCells_; ++c) {
        if (CellTotal(c) > topology.TotalPower(c) * (1.0 + 1e-9)) {
            return false;
        }
    }
    return true;
}

PowerMap UniformPower(const CellTopology &topology) {
    PowerMap powers(topology.NumCells(), topology.NumPrbs());
    for (CellId c = 0; c < topology.NumCells(); ++c) {
        const double perPrb = topology.TotalPower(c) / static_cast<double>(topology.NumPrbs());
        for (PrbIndex n = 0; n < topology.NumPrbs(); ++n) {
            powers.Set(c, n, perPrb);
        }
    }
    return powers;
}

RateTable::RateTable(std::size_t numUsers, std::size_t numPrbs)
    : numUsers_(numUsers), numPrbs_(numPrbs), rate_(numUsers * numPrbs, 0.0), interference_(numUsers * numPrbs, 0.0) {}

double ShannonRate(double bandwidth, double power, double gain, double interference, double noise) {
    if (power <= 0.0) {
        return 0.0;
    }
    return bandwidth * std::log1p(power * gain / (interference + noise)) / std::numbers::ln2;
}

double PowerForRate(double bandwidth, double rate, double gain, double interference, double noise) {
    return std::expm1(rate / bandwidth * std::numbers::ln2) * (interference + noise) / gain;
}

RateTable ComputeRates(const CellTopology &topology, const UserPopulation &population, const ChannelTensor &channel,
                       const PowerMap &powers) {
    const std::size_t numPrbs = topology.NumPrbs();
    const double bandwidth = topology.PrbBandwidth();
    const double noise = channel.NoisePower();
    RateTable table(population.Size(), numPrbs);
    for (const User &user : population.Users()) {
        for (PrbIndex n = 0; n < numPrbs; ++n) {
            double interference = 0.0;
            for (CellId j = 0; j < topology.NumCells(); ++j) {
                if (j != user.servingCell) {
                    interference += powers.At(j, n) * channel.Gain(user.id, n, j);
                }
            }
            const double rate = ShannonRate(bandwidth, powers.At(user.servingCell, n),
                                            channel.Gain(user.id, n, user.servingCell), interference, noise);
            table.Set(user.id, n, rate, interference);
        }
    }
    return table;
}

double DbmToWatts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace loadmin
