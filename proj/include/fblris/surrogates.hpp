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

#ifndef FBLRIS_SURROGATES_HPP
#define FBLRIS_SURROGATES_HPP

#include <vector>

#include "fblris/metrics.hpp"
#include "fblris/quadratic_form.hpp"

namespace fblris
{

// The received signal of one user as affine functions of a complex
// variable vector z: forms[0] is the desired term, the rest interfere.
struct RateModel
{
    std::vector<ComplexAffine> forms;
    double noise = 1.0;
    double penalty = 0.0; // Q^-1(eps) / sqrt(n_t), nats
    double share = 1.0;   // fraction of the frame the user is served in
};

double model_sinr(const RateModel &model, const VectorXcd &z);
// FBL rate in bits, scaled by the slot share.
double model_rate(const RateModel &model, const VectorXcd &z);

struct SurrogateCoefficients
{
    double gamma = 0.0;
    double V = 0.0;
    double interference = 0.0; // noise + interference power
    double total = 0.0;        // noise + total received power
    double zeta = 0.0;
    double a = 0.0;
    double b = 0.0;
    std::vector<cd> values; // forms evaluated at the expansion point
};

SurrogateCoefficients surrogate_coefficients(const RateModel &model, const VectorXcd &z_bar);

// Concave minorant of model_rate touching at z_bar, over a real vector of
// dimension `dim` with z embedded at `offset`.
QuadraticForm rate_surrogate(const RateModel &model, const VectorXcd &z_bar, Index dim, Index offset = 0);

// The two halves of the surrogate (nats, unscaled by the slot share):
// a lower bound of ln(1 + gamma) and the negated upper bound of the penalty.
QuadraticForm shannon_lower_bound(const RateModel &model, const VectorXcd &z_bar, Index dim, Index offset = 0);
QuadraticForm negated_penalty_bound(const RateModel &model, const VectorXcd &z_bar, Index dim, Index offset = 0);

// Affine minorant of |forms[0]|^2 and the concave form -(noise + interference).
QuadraticForm linearized_signal(const RateModel &model, const VectorXcd &z_bar, Index dim, Index offset = 0);
QuadraticForm negated_interference(const RateModel &model, Index dim, Index offset = 0);

// Right-hand sides of the elementary bounds.
double ineq_sqrt_upper(double x, double x_bar);
double ineq_ratio_lower(cd x, double y, cd x_bar, double y_bar);
double ineq_log_lower(cd x, double y, cd x_bar, double y_bar);

// Beam variables: z = [x_0; x_1; ...], user u at complex offset u * n_bs.
VectorXcd pack_beams(const BeamformingSet &beams);
BeamformingSet unpack_beams(const VectorXcd &z, int users, int n_bs);

RateModel beam_rate_model(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris,
                          int u, const FblParams &fbl);

// Free RIS coefficients, in order. Inactive mode-switching entries are excluded.
struct ThetaEntry
{
    CoefficientPart part;
    int ris;
    int element;
};

struct ThetaLayout
{
    std::vector<ThetaEntry> entries;
    // index[(part - 1) * M * N + m * N + n], -1 when fixed at zero
    std::vector<Index> index;
    int ris_count = 0;
    int elements = 0;

    Index size() const { return static_cast<Index>(entries.size()); }
    Index find(CoefficientPart part, int m, int n) const;
};

ThetaLayout theta_layout(const RisState &ris);
VectorXcd pack_theta(const ThetaLayout &layout, const RisState &ris);
RisState unpack_theta(const ThetaLayout &layout, const RisState &ris, const VectorXcd &z);

RateModel theta_rate_model(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris,
                           const BeamformingSet &beams, const ThetaLayout &layout, int u, const FblParams &fbl);

} // namespace fblris

#endif
