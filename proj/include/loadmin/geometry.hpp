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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "loadmin/types.hpp"

namespace loadmin {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double Distance(const Point &a, const Point &b);

struct Cell {
    CellId id = 0;
    Point position;
};

/**
 * @brief Cell sites of a full-reuse OFDMA network together with the shared PRB grid.
 *
 * Cells are hexagons whose apothem is half the inter-site distance. The PRB bandwidth is
 * stored and the system bandwidth derived from it, so PrbBandwidth() * NumPrbs() equals
 * SystemBandwidth() exactly.
 */
class CellTopology {
  public:
    CellTopology(std::vector<Cell> cells, double interSiteDistance, std::vector<double> totalPowerW, std::size_t numPrbs,
                 double systemBandwidthHz);

    const std::vector<Cell> &Cells() const { return cells_; }
    std::size_t NumCells() const { return cells_.size(); }
    double InterSiteDistance() const { return interSiteDistance_; }
    double TotalPower(CellId cell) const { return totalPowerW_.at(cell); }
    std::size_t NumPrbs() const { return numPrbs_; }
    double PrbBandwidth() const { return prbBandwidth_; }
    double SystemBandwidth() const { return prbBandwidth_ * static_cast<double>(numPrbs_); }

    /// Apothem of every cell hexagon (half the inter-site distance).
    double Apothem() const { return 0.5 * interSiteDistance_; }

    /// True when `p` lies inside (or on the boundary of) the hexagon of `cell`.
    bool Contains(CellId cell, const Point &p) const;

    /// Returns a copy with every cell budget replaced by `watts`.
    CellTopology WithUniformPower(double watts) const;

  private:
    std::vector<Cell> cells_;
    double interSiteDistance_;
    std::vector<double> totalPowerW_;
    std::size_t numPrbs_;
    double prbBandwidth_;
};

/// Center cell at the origin plus, for 7 cells, six neighbors at angles k*60 degrees.
/// Only 1 and 7 cells are supported; anything else is a ConfigError.
CellTopology BuildHexGrid(double interSiteDistance, std::size_t numCells, double totalPowerPerCellW = 20.0,
                          std::size_t numPrbs = 24, double systemBandwidthHz = 5e6);

struct User {
    UserId id = 0;
    CellId servingCell = 0;
    Point position;
    double targetRate = 0.0;  // bits/s
};

/// Users are stored cell-major: ids [c*N, (c+1)*N) belong to cell c.
class UserPopulation {
  public:
    UserPopulation(std::vector<User> users, std::size_t numCells, std::size_t usersPerCell);

    const std::vector<User> &Users() const { return users_; }
    const User &At(UserId id) const { return users_.at(id); }
    std::size_t Size() const { return users_.size(); }
    std::size_t NumCells() const { return numCells_; }
    std::size_t UsersPerCell() const { return usersPerCell_; }
    std::vector<UserId> UsersOfCell(CellId cell) const;
    std::vector<double> TargetRates() const;

  private:
    std::vector<User> users_;
    std::size_t numCells_;
    std::size_t usersPerCell_;
};

/// Uniform rejection-sampled placement inside each hexagon. User k of cell c draws from its
/// own substream, so growing N keeps the first N users fixed.
UserPopulation DropUsers(const CellTopology &topology, std::size_t usersPerCell, std::uint64_t seed,
                         double targetRate = 768e3);

struct PathlossModel {
    double interceptDb = 128.1;
    double slopeDbPerDecade = 37.6;

    /// Pathloss in dB at `distanceKm`.
    double LossDb(double distanceKm) const;
};

struct ChannelModel {
    PathlossModel pathloss;
    double shadowStdDb = 8.0;
    double noiseDensityDbmPerHz = -174.0;
    double noiseFigureDb = 9.0;
    double minDistanceM = 1.0;

    /// Thermal noise integrated over one PRB, in watts.
    double NoisePower(double prbBandwidthHz) const;
};

/// Linear power gains h(u, n, j) from every BS j to every user u on every PRB n.
class ChannelTensor {
  public:
    ChannelTensor(std::size_t numUsers, std::size_t numPrbs, std::size_t numCells, double noisePower);

    double Gain(UserId user, PrbIndex prb, CellId bs) const { return gain_[Index(user, prb, bs)]; }
    void SetGain(UserId user, PrbIndex prb, CellId bs, double value) { gain_[Index(user, prb, bs)] = value; }
    double NoisePower() const { return noisePower_; }
    std::size_t NumUsers() const { return numUsers_; }
    std::size_t NumPrbs() const { return numPrbs_; }
    std::size_t NumCells() const { return numCells_; }
    const std::vector<double> &Raw() const { return gain_; }

  private:
    std::size_t Index(UserId user, PrbIndex prb, CellId bs) const { return (user * numCells_ + bs) * numPrbs_ + prb; }

    std::size_t numUsers_;
    std::size_t numPrbs_;
    std::size_t numCells_;
    double noisePower_;
    std::vector<double> gain_;
};

/// Pathloss x log-normal shadowing (one draw per user/BS link) x unit-mean exponential fading
/// (one draw per user/PRB/BS). Distances below `model.minDistanceM` are clamped.
ChannelTensor DrawChannel(const CellTopology &topology, const UserPopulation &population, std::uint64_t seed,
                          const ChannelModel &model = {});

/// Deterministic link gain with explicit shadowing (dB) and fading (linear) factors.
double LinkGain(const PathlossModel &pathloss, double distanceM, double shadowDb, double fading);

/// Transmit power per (cell, PRB) in watts.
class PowerMap {
  public:
    PowerMap(std::size_t numCells, std::size_t numPrbs, double value = 0.0);

    double At(CellId cell, PrbIndex prb) const { return power_[cell * numPrbs_ + prb]; }
    void Set(CellId cell, PrbIndex prb, double watts) { power_[cell * numPrbs_ + prb] = watts; }
    std::span<const double> CellPowers(CellId cell) const {
        return std::span<const double>(power_).subspan(cell * numPrbs_, numPrbs_);
    }
    double CellTotal(CellId cell) const;
    double Total() const;
    std::size_t NumCells() const { return numCells_; }
    std::size_t NumPrbs() const { return numPrbs_; }

    /// Largest absolute per-entry difference; the maps must have equal shape.
    double MaxAbsDifference(const PowerMap &other) const;

    /// True when all powers are >= 0 and each cell total is within P * (1 + 1e-9).
    bool IsValidFor(const CellTopology &topology) const;

    bool operator==(const PowerMap &) const = default;

  private:
    std::size_t numCells_;
    std::size_t numPrbs_;
    std::vector<double> power_;
};

/// p(i, n) = P(i) / |PRBs| everywhere.
PowerMap UniformPower(const CellTopology &topology);

/// Achievable Shannon rate and interference seen by each user on each PRB.
class RateTable {
  public:
    RateTable(std::size_t numUsers, std::size_t numPrbs);

    double Rate(UserId user, PrbIndex prb) const { return rate_[user * numPrbs_ + prb]; }
    double Interference(UserId user, PrbIndex prb) const { return interference_[user * numPrbs_ + prb]; }
    void Set(UserId user, PrbIndex prb, double rate, double interference = 0.0) {
        rate_[user * numPrbs_ + prb] = rate;
        interference_[user * numPrbs_ + prb] = interference;
    }
    std::span<const double> UserRates(UserId user) const {
        return std::span<const double>(rate_).subspan(user * numPrbs_, numPrbs_);
    }
    std::size_t NumUsers() const { return numUsers_; }
    std::size_t NumPrbs() const { return numPrbs_; }

  private:
    std::size_t numUsers_;
    std::size_t numPrbs_;
    std::vector<double> rate_;
    std::vector<double> interference_;
};

/// B * log2(1 + p * h / (I + noise)).
double ShannonRate(double bandwidth, double power, double gain, double interference, double noise);

/// Inverse of ShannonRate: the power that yields `rate` under the given interference.
double PowerForRate(double bandwidth, double rate, double gain, double interference, double noise);

RateTable ComputeRates(const CellTopology &topology, const UserPopulation &population, const ChannelTensor &channel,
                       const PowerMap &powers);

double DbmToWatts(double dbm);

}  // namespace loadmin
