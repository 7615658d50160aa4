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

#ifndef FBLRIS_RIS_HPP
#define FBLRIS_RIS_HPP

#include <cstdint>
#include <vector>

#include "fblris/topology.hpp"

namespace fblris
{

enum class RisMode
{
    Regular,
    StarES,
    StarMS,
    StarTS
};

enum class FeasibilitySet
{
    TU,
    TI,
    TC,
    TSU,
    TSI,
    TSN
};

enum class UserSide
{
    Reflection,
    Transmission,
    Uncovered
};

// Which coefficient vector of a RIS a given user sees.
enum class CoefficientPart
{
    None,
    Reflect,
    Transmit
};

const char *to_string(RisMode mode);
const char *to_string(FeasibilitySet set);

// Amplitude as a deterministic function of phase:
// |theta| = theta_min + (1 - theta_min) * ((sin(phase - phi) + 1) / 2)^alpha.
struct PhaseAmplitudeModel
{
    double theta_min = 0.2;
    double alpha = 1.6;
    double phi = 0.43 * 3.14159265358979323846;

    double amplitude(double phase) const;
    void validate() const;
};

struct RisOptions
{
    double ts_fraction = 0.5; // share of the frame given to the reflection sub-slot
    PhaseAmplitudeModel amplitude_model;
};

struct RisState
{
    RisMode mode = RisMode::Regular;
    FeasibilitySet set = FeasibilitySet::TI;

    // theta_r carries the regular-RIS coefficients; theta_t is all-zero in Regular mode.
    std::vector<VectorXcd> theta_r;
    std::vector<VectorXcd> theta_t;

    // Mode switching: true when element n of RIS m reflects, false when it transmits.
    std::vector<std::vector<bool>> ms_reflect;

    // Indexed u * M + m.
    std::vector<UserSide> user_side;
    // Time switching sub-slot per user (0 = reflection, 1 = transmission); all 0 otherwise.
    std::vector<int> user_slot;
    double ts_fraction = 0.5;
    PhaseAmplitudeModel amplitude_model;

    int ris_count() const { return static_cast<int>(theta_r.size()); }
    int elements() const { return theta_r.empty() ? 0 : static_cast<int>(theta_r.front().size()); }
    int users() const { return static_cast<int>(user_slot.size()); }

    CoefficientPart part(int u, int m) const;
    int slot(int u) const { return user_slot[static_cast<std::size_t>(u)]; }
    int slot_count() const { return mode == RisMode::StarTS ? 2 : 1; }
    // Fraction of the frame during which user u is served.
    double slot_share(int u) const;

    const VectorXcd &coefficients(CoefficientPart part, int m) const;
    VectorXcd &coefficients(CoefficientPart part, int m);

    bool operator==(const RisState &other) const;
};

bool is_valid_combination(RisMode mode, FeasibilitySet set);

UserSide geometric_side(const NetworkTopology &topology, int u, int m);

// Builds a feasible starting state for a mode/set pair. The seed drives the
// random element partition of mode switching.
RisState make_ris_state(const NetworkTopology &topology, RisMode mode, FeasibilitySet set,
                        const RisOptions &options = {}, std::uint64_t seed = 0);

// All coefficients zero: the RIS paths vanish (no-RIS reference).
RisState ris_off(const NetworkTopology &topology);

// Unit-modulus coefficients with uniformly random phases.
RisState random_ris(const NetworkTopology &topology, std::uint64_t seed);

// h_{u,i} = d_{u,i} + sum_m f_{u,m} diag(theta_m^{side}) G_{m,i}.
RowVectorXcd effective_channel(const ChannelSet &channels, const RisState &ris, int u, int bs);

// Largest violation of the equalities/inequalities defining the state's set.
double feasibility_residual(const RisState &ris);

// Maps an arbitrary candidate onto the state's feasibility set.
RisState project(const RisState &candidate);

} // namespace fblris

#endif
