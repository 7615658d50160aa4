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

#ifndef FBLRIS_BEAM_OPT_HPP
#define FBLRIS_BEAM_OPT_HPP

#include "fblris/convex.hpp"
#include "fblris/surrogates.hpp"

namespace fblris
{

struct BeamOptions
{
    DinkelbachOptions dinkelbach;
    // Start the convex subproblem slightly inside the power ball.
    double start_shrink = 1e-3;
};

struct BeamUpdate
{
    BeamformingSet beams;
    double utility = 0.0;
    double kkt_residual = 0.0;
    SolveStatus status = SolveStatus::Optimal;
    bool accepted = false;
};

// Matched filter towards each user's effective channel, equal power per (BS, slot).
BeamformingSet mrt_beams(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris);

// One minorize-maximize step in the beams for fixed RIS coefficients.
// Never returns a point with lower utility than beams_prev.
BeamUpdate update_beams(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris,
                        const BeamformingSet &beams_prev, const UtilitySpec &utility, const FblParams &fbl,
                        const EnergyParams &energy, const BeamOptions &options = {});

// Per-(BS, slot) power constraints over the stacked beam variables.
std::vector<QuadraticForm> power_constraints(const NetworkTopology &topology, const RisState &ris, Index dim);

} // namespace fblris

#endif
