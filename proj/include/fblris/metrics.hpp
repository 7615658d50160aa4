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

#ifndef FBLRIS_METRICS_HPP
#define FBLRIS_METRICS_HPP

#include <vector>

#include "fblris/ris.hpp"

namespace fblris
{

// Packet length and target decoding error. q_inv = 0 selects Shannon rates.
struct FblParams
{
    double n_t = 200.0;
    double eps_c = 1e-3;
    double q_inv = 0.0;

    static FblParams make(double n_t, double eps_c);
    static FblParams shannon(double n_t = 200.0);

    // Penalty coefficient in nats: Q^-1(eps) / sqrt(n_t).
    double penalty() const;
    void validate() const;
};

struct EnergyParams
{
    double p_c = 1.0;
    double eta = 1.0;
    void validate() const;
};

struct BeamformingSet
{
    std::vector<VectorXcd> x; // one vector per user, flat index u = l * K + k

    int users() const { return static_cast<int>(x.size()); }
    double power(int u) const { return x[static_cast<std::size_t>(u)].squaredNorm(); }
    double total_power() const;
    bool operator==(const BeamformingSet &other) const { return x == other.x; }
};

// Largest per-(BS, slot) power overshoot relative to the budgets.
double power_violation(const NetworkTopology &topology, const RisState &ris, const BeamformingSet &beams);

struct RateReport
{
    std::vector<double> gamma;
    std::vector<double> V;
    std::vector<double> delta; // C - r
    std::vector<double> r;
    std::vector<double> C;
    std::vector<double> e;
    double gee = 0.0;
};

struct FblCurveAnalysis
{
    double a = 0.0;
    double gamma_star = 0.0;
    double gamma_zero = 0.0;
    double f_min = 0.0;
};

// Q^-1(eps), the inverse of the Gaussian tail function.
double q_inverse(double eps);

double sinr(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris,
            const BeamformingSet &beams, int u);

// Achievable dispersion under treating interference as noise.
double dispersion(double gamma);
// Dispersion-optimal value 1 - (1 + gamma)^-2.
double dispersion_opt(double gamma);

double shannon_rate(double gamma);
double fbl_rate(double gamma, const FblParams &fbl);

// f(gamma) = ln(1 + gamma) - a sqrt(gamma / (1 + gamma)).
double lemma2_curve(double a, double gamma);
FblCurveAnalysis lemma2_analysis(double a);
// Curve coefficient matching the rate of a given packet length and error target.
double lemma2_coefficient(const FblParams &fbl);

double per_user_ee(double r, const VectorXcd &x, const EnergyParams &energy);
double gee(const std::vector<double> &rates, const BeamformingSet &beams, const EnergyParams &energy);

double latency_threshold(double n_t, double t_c, double w);

RateReport evaluate(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris,
                    const BeamformingSet &beams, const FblParams &fbl, const EnergyParams &energy);

enum class UtilityKind
{
    MinWeightedRate,
    WeightedSumRate,
    GEE,
    MinWeightedEE
};

const char *to_string(UtilityKind kind);

struct UtilitySpec
{
    UtilityKind kind = UtilityKind::MinWeightedRate;
    std::vector<double> weights;    // empty means all ones
    std::vector<double> thresholds; // empty means all zero

    double weight(int u) const;
    double threshold(int u) const;
    bool has_thresholds() const;
    void validate(int users) const;
};

double utility(const RateReport &report, const UtilitySpec &spec);

} // namespace fblris

#endif
