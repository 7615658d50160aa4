// SPDX-License-Identifier: Apache-2.0
//
// fblris: finite-blocklength rate optimization for (STAR-)RIS-assisted MISO networks
// Copyright (C) 2026 The fblris Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef FBLRIS_TOPOLOGY_HPP
#define FBLRIS_TOPOLOGY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fblris/common.hpp"

namespace fblris
{

using Point3 = Eigen::Vector3d;

// Counts and geometry of a multi-cell broadcast network. Users are indexed
// flat as u = l * K + k (cell l, user k).
struct NetworkTopology
{
    int cells = 0;
    int ris_count = 0;
    int users_per_cell = 0;
    int bs_antennas = 0;
    int ris_elements = 0;

    std::vector<Point3> bs_positions;
    std::vector<Point3> ris_positions;
    // Unit vector pointing into each RIS's reflection half-space.
    std::vector<Point3> ris_normals;
    std::vector<Point3> user_positions;

    std::vector<double> power_budgets; // watts per BS
    double noise_power = 1.0;

    int users() const { return cells * users_per_cell; }
    int user_index(int cell, int user) const { return cell * users_per_cell + user; }
    int serving_cell(int u) const { return u / users_per_cell; }

    // Throws on hard violations; returns soft warnings (e.g. fewer RISs than cells).
    std::vector<std::string> validate() const;
};

// Large-scale and small-scale fading configuration. Gains are expressed in dB
// relative to the (unit) noise floor at the reference distance.
struct PropagationParams
{
    double direct_exponent = 3.75;
    double direct_ref_gain_db = 72.0;
    double los_exponent = 2.2;
    double los_ref_gain_db = 27.0;
    double reference_distance = 1.0;
    // Linear Rician factor; +infinity selects the deterministic LoS component only.
    double rician_k_factor = 1.9952623149688795; // 3 dB
    double element_spacing = 0.5;                // in wavelengths

    void validate() const;
};

// d[u, i]: BS i -> user u, G[m, i]: BS i -> RIS m, f[u, m]: RIS m -> user u.
struct ChannelSet
{
    int users = 0;
    int cells = 0;
    int ris_count = 0;
    int bs_antennas = 0;
    int ris_elements = 0;

    std::vector<RowVectorXcd> direct;
    std::vector<MatrixXcd> bs_ris;
    std::vector<RowVectorXcd> ris_user;

    const RowVectorXcd &d(int u, int bs) const { return direct[static_cast<std::size_t>(u * cells + bs)]; }
    RowVectorXcd &d(int u, int bs) { return direct[static_cast<std::size_t>(u * cells + bs)]; }
    const MatrixXcd &G(int m, int bs) const { return bs_ris[static_cast<std::size_t>(m * cells + bs)]; }
    MatrixXcd &G(int m, int bs) { return bs_ris[static_cast<std::size_t>(m * cells + bs)]; }
    const RowVectorXcd &f(int u, int m) const { return ris_user[static_cast<std::size_t>(u * ris_count + m)]; }
    RowVectorXcd &f(int u, int m) { return ris_user[static_cast<std::size_t>(u * ris_count + m)]; }

    bool operator==(const ChannelSet &other) const;
};

// Path gain (linear power) at a distance for a given exponent and reference gain.
double path_gain(double distance, double exponent, double ref_gain_db, double reference_distance = 1.0);

ChannelSet generate_channels(const NetworkTopology &topology, const PropagationParams &params,
                             std::uint64_t seed);

struct LayoutOptions
{
    int users_per_cell = 4;
    int bs_antennas = 4;
    int ris_elements = 20;
    double power_db = 10.0;
    double noise_power = 1.0;
    // Place the second half of each cell's users behind the RIS (transmission space).
    bool star_split = false;
    std::uint64_t user_seed = 0;
};

double db_to_linear(double db);

// Two cells: BSs at (0,0,25) and (400,0,25), RISs at (140,0,15) and (260,0,15),
// users dropped uniformly in a 20 m square in front of each RIS at 1.5 m height.
NetworkTopology default_topology(const LayoutOptions &options = {});

// One BS, one RIS; half the users in front of the surface and half behind it.
NetworkTopology half_coverage_topology(const LayoutOptions &options = {});

} // namespace fblris

#endif
