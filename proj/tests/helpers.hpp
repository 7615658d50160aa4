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


#ifndef FBLRIS_TESTS_HELPERS_HPP
#define FBLRIS_TESTS_HELPERS_HPP

#include <random>

#include "fblris/framework.hpp"
#include "fblris/topology.hpp"

namespace testing
{

using namespace fblris;

// Two cells, two users each, small arrays: fast enough for AO loops in unit tests.
inline NetworkTopology small_topology(std::uint64_t seed, bool star_split = false, int ris_elements = 8)
{
    LayoutOptions o;
    o.users_per_cell = 2;
    o.bs_antennas = 4;
    o.ris_elements = ris_elements;
    o.user_seed = seed;
    o.star_split = star_split;
    return default_topology(o);
}

// One BS at the origin, one RIS, users at the given points.
inline NetworkTopology single_cell(const std::vector<Point3> &users, int bs_antennas, int ris_elements,
                                   double power = 10.0)
{
    NetworkTopology t;
    t.cells = 1;
    t.ris_count = 1;
    t.users_per_cell = static_cast<int>(users.size());
    t.bs_antennas = bs_antennas;
    t.ris_elements = ris_elements;
    t.bs_positions = {Point3(0.0, 0.0, 25.0)};
    t.ris_positions = {Point3(140.0, 0.0, 15.0)};
    t.ris_normals = {Point3(0.0, 1.0, 0.0)};
    t.user_positions = users;
    t.power_budgets = {power};
    t.noise_power = 1.0;
    return t;
}

inline VectorXcd random_complex(Index n, std::mt19937_64 &rng, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, scale);
    VectorXcd z(n);
    for (Index i = 0; i < n; ++i)
        z[i] = cd(g(rng), g(rng));
    return z;
}

inline BeamformingSet random_beams(const NetworkTopology &topology, std::mt19937_64 &rng)
{
    BeamformingSet b;
    const double per_user = topology.power_budgets[0] / topology.users_per_cell;
    for (int u = 0; u < topology.users(); ++u)
    {
        VectorXcd x = random_complex(topology.bs_antennas, rng);
        b.x.push_back(x * std::sqrt(per_user) / x.norm());
    }
    return b;
}

} // namespace testing

#endif
