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

#ifndef FBLRIS_RIS_OPT_HPP
#define FBLRIS_RIS_OPT_HPP

#include "fblris/convex.hpp"
#include "fblris/surrogates.hpp"

namespace fblris
{

struct CcpOptions
{
    double epsilon_relax = 0.05;
    // Candidates must beat the previous utility by at least this much.
    double acceptance_tol = 0.0;

    void validate() const;
};

struct RisUpdateOptions
{
    CcpOptions ccp;
    SolveOptions solve;
    // Step doublings tried along the minorize-maximize direction; 0 disables.
    int extrapolation_steps = 6;
};

struct RisUpdate
{
    RisState ris;
    double utility = 0.0;
    double kkt_residual = 0.0;
    SolveStatus status = SolveStatus::Optimal;
    bool accepted = false;
};

// Convex inner approximation of the state's feasibility set around z_bar,
// over the free coefficients of `layout` embedded at real offset 0.
// Returns an empty list and sets `singleton` when the set collapses to z_bar.
std::vector<QuadraticForm> coefficient_constraints(const RisState &ris, const ThetaLayout &layout,
                                                   const VectorXcd &z_bar, const CcpOptions &ccp, Index dim,
                                                   bool &singleton);

// Interior starting point for the constraints above.
VectorXcd coefficient_start(const RisState &ris, const VectorXcd &z_bar, const CcpOptions &ccp);

// One minorize-maximize step in the RIS coefficients for fixed beams,
// followed by projection and the monotone acceptance rule.
RisUpdate update_ris(const NetworkTopology &topology, const ChannelSet &channels, const BeamformingSet &beams,
                     const RisState &ris_prev, const UtilitySpec &utility, const FblParams &fbl,
                     const EnergyParams &energy, const RisUpdateOptions &options = {});

} // namespace fblris

#endif
