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

#ifndef FBLRIS_FRAMEWORK_HPP
#define FBLRIS_FRAMEWORK_HPP

#include <ostream>
#include <vector>

#include "fblris/beam_opt.hpp"
#include "fblris/ris_opt.hpp"

namespace fblris
{

struct InitOptions
{
    int max_iterations = 10;
    double tolerance = 1e-3;
    bool update_ris = true;
    DinkelbachOptions dinkelbach;
    CcpOptions ccp;
};

struct InitResult
{
    BeamformingSet beams;
    RisState ris;
    double min_sinr = 0.0;
    std::vector<std::vector<double>> mu_runs; // ratio sequence of each generalized-Dinkelbach run
    int iterations = 0;
};

// Alternating max-min SINR from matched-filter beams and the given RIS state.
InitResult init_maxmin_sinr(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris_start,
                            const InitOptions &options = {});

struct AoOptions
{
    int max_iterations = 50;
    double tolerance = 1e-4;
    bool update_ris = true;
    /// Maximum RIS surrogate steps per AO iteration.
    int ris_steps = 4;
    /// Doubling steps of the joint extrapolation after each AO iteration (0 disables).
    int extrapolation_steps = 6;
    BeamOptions beams;
    RisUpdateOptions ris;
    InitOptions init;
};

struct AoState
{
    int iterations = 0;
    BeamformingSet beams;
    RisState ris;
    double initial_utility = 0.0;
    std::vector<double> trace;              // utility after each iteration
    std::vector<std::vector<double>> rates; // per-iteration FBL rates
    bool converged = false;
    double beam_kkt = 0.0;
    double ris_kkt = 0.0;
    double init_min_sinr = 0.0;

    double utility() const { return trace.empty() ? initial_utility : trace.back(); }
};

// Alternating beam / RIS optimization for one channel realization.
AoState optimize(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris_start,
                 const UtilitySpec &utility, const FblParams &fbl, const EnergyParams &energy,
                 const AoOptions &options = {});

// Continues the alternation from a given feasible point, skipping the initializer.
AoState refine(const NetworkTopology &topology, const ChannelSet &channels, const BeamformingSet &beams,
               const RisState &ris, const UtilitySpec &utility, const FblParams &fbl, const EnergyParams &energy,
               const AoOptions &options = {});

// One row per iteration: iteration, utility, then one column per user rate.
void write_trace_csv(const AoState &state, std::ostream &out);

} // namespace fblris

#endif
