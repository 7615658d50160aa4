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

#include "fblris/ris_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fblris
{

void CcpOptions::validate() const
{
    require(epsilon_relax >= 0.0 && epsilon_relax <= 0.5, "epsilon_relax must lie in [0, 0.5]");
    require(acceptance_tol >= 0.0, "acceptance_tol must be non-negative");
}

namespace
{

enum class ElementRule
{
    Ball,        // |z|^2 <= 1
    UnitRelaxed, // ball and linearized |z|^2 >= 1 - eps
    Coupled      // ball and linearized |z|^2 >= theta_min^2
};

ElementRule rule_for(const RisState &ris)
{
    switch (ris.set)
    {
    case FeasibilitySet::TU:
    case FeasibilitySet::TSU:
        return ElementRule::Ball;
    case FeasibilitySet::TC:
        return ElementRule::Coupled;
    default:
        return ElementRule::UnitRelaxed;
    }
}

double lower_bound(const RisState &ris, const CcpOptions &ccp)
{
    return rule_for(ris) == ElementRule::Coupled ? ris.amplitude_model.theta_min * ris.amplitude_model.theta_min
                                                 : 1.0 - ccp.epsilon_relax;
}

// Groups of free coefficients sharing one power budget: pairs for energy
// splitting, singletons otherwise.
std::vector<std::vector<Index>> coefficient_groups(const RisState &ris, const ThetaLayout &layout)
{
    std::vector<std::vector<Index>> groups;
    if (ris.mode == RisMode::StarES)
    {
        for (int m = 0; m < layout.ris_count; ++m)
            for (int n = 0; n < layout.elements; ++n)
                groups.push_back({layout.find(CoefficientPart::Reflect, m, n),
                                  layout.find(CoefficientPart::Transmit, m, n)});
    }
    else
    {
        for (Index k = 0; k < layout.size(); ++k)
            groups.push_back({k});
    }
    return groups;
}

} // namespace

std::vector<QuadraticForm> coefficient_constraints(const RisState &ris, const ThetaLayout &layout,
                                                   const VectorXcd &z_bar, const CcpOptions &ccp, Index dim,
                                                   bool &singleton)
{
    ccp.validate();
    const ElementRule rule = rule_for(ris);
    const double lb = lower_bound(ris, ccp);
    singleton = rule != ElementRule::Ball && lb >= 1.0;
    std::vector<QuadraticForm> out;
    if (singleton)
        return out;

    for (const auto &group : coefficient_groups(ris, layout))
    {
        QuadraticForm ball(dim);
        ball.add_constant(1.0);
        for (Index k : group)
            ball.subtract_modulus_squared({cd(0.0), {{k, cd(1.0)}}}, 1.0);
        out.push_back(std::move(ball));

        if (rule != ElementRule::Ball)
        {
            QuadraticForm lin(dim);
            lin.add_constant(-lb);
            for (Index k : group)
            {
                lin.add_real({cd(0.0), {{k, cd(1.0)}}}, 2.0 * std::conj(z_bar[k]));
                lin.add_constant(-std::norm(z_bar[k]));
            }
            out.push_back(std::move(lin));
        }

        if (ris.set == FeasibilitySet::TSN && group.size() == 2)
            for (double sign : {1.0, -1.0})
            {
                QuadraticForm c(dim);
                c.add_constant(1.0);
                c.subtract_modulus_squared({cd(0.0), {{group[0], cd(1.0)}, {group[1], cd(sign)}}}, 1.0);
                out.push_back(std::move(c));
            }
    }
    return out;
}

VectorXcd coefficient_start(const RisState &ris, const VectorXcd &z_bar, const CcpOptions &ccp)
{
    const ThetaLayout layout = theta_layout(ris);
    const ElementRule rule = rule_for(ris);
    const double lb = lower_bound(ris, ccp);
    VectorXcd z = z_bar;
    for (const auto &group : coefficient_groups(ris, layout))
    {
        double power = 0.0;
        for (Index k : group)
            power += std::norm(z_bar[k]);
        if (power <= 0.0)
            continue;
        const double a = std::sqrt(power);
        double s;
        if (rule == ElementRule::Ball)
            s = std::min(1.0, 0.999 / a);
        else
            s = 0.5 * (0.5 * (1.0 + lb / power) + 1.0 / a);
        for (Index k : group)
            z[k] = s * z_bar[k];
    }
    return z;
}

RisUpdate update_ris(const NetworkTopology &topology, const ChannelSet &channels, const BeamformingSet &beams,
                     const RisState &ris_prev, const UtilitySpec &utility, const FblParams &fbl,
                     const EnergyParams &energy, const RisUpdateOptions &options)
{
    const int U = topology.users();
    utility.validate(U);
    const RateReport before = evaluate(topology, channels, ris_prev, beams, fbl, energy);

    RisUpdate out;
    out.ris = ris_prev;
    out.utility = fblris::utility(before, utility);

    const ThetaLayout layout = theta_layout(ris_prev);
    if (layout.size() == 0)
        return out;
    const Index nz = layout.size();
    const Index nx = 2 * nz;
    const bool aux =
        utility.kind == UtilityKind::MinWeightedRate || utility.kind == UtilityKind::MinWeightedEE;
    const Index dim = aux ? nx + 1 : nx;
    const VectorXcd z_bar = pack_theta(layout, ris_prev);

    bool singleton = false;
    std::vector<QuadraticForm> constraints =
        coefficient_constraints(ris_prev, layout, z_bar, options.ccp, dim, singleton);
    if (singleton)
        return out;

    std::vector<QuadraticForm> surrogate;
    surrogate.reserve(static_cast<std::size_t>(U));
    try
    {
        for (int u = 0; u < U; ++u)
            surrogate.push_back(
                rate_surrogate(theta_rate_model(topology, channels, ris_prev, beams, layout, u, fbl), z_bar, dim));
    }
    catch (const Error &)
    {
        out.status = SolveStatus::Infeasible;
        return out;
    }
    for (int u = 0; u < U; ++u)
        if (utility.threshold(u) > 0.0)
        {
            QuadraticForm c = surrogate[static_cast<std::size_t>(u)];
            c.add_constant(-utility.threshold(u));
            constraints.push_back(std::move(c));
        }

    VectorXd start = VectorXd::Zero(dim);
    start.head(nx) = embed(coefficient_start(ris_prev, z_bar, options.ccp));

    ConvexSubproblem sp;
    sp.objective = QuadraticForm(dim);
    if (aux)
    {
        sp.objective.add_linear(nx, 1.0);
        double r0 = std::numeric_limits<double>::infinity();
        for (int u = 0; u < U; ++u)
        {
            double w = utility.weight(u);
            if (utility.kind == UtilityKind::MinWeightedEE)
                w *= energy.p_c + energy.eta * beams.power(u);
            QuadraticForm c = surrogate[static_cast<std::size_t>(u)];
            r0 = std::min(r0, c.value(start) / w);
            c.add_linear(nx, -w);
            constraints.push_back(std::move(c));
        }
        start[nx] = r0 - std::max(1e-3, 1e-2 * std::abs(r0));
    }
    else
    {
        for (int u = 0; u < U; ++u)
            sp.objective.add_scaled(surrogate[static_cast<std::size_t>(u)],
                                    utility.kind == UtilityKind::WeightedSumRate ? utility.weight(u) : 1.0);
    }
    sp.constraints = std::move(constraints);
    sp.start = start;

    const SolveResult res = solve(sp, options.solve);
    out.status = res.status;
    out.kkt_residual = res.kkt_residual;
    if (res.status == SolveStatus::Infeasible)
        return out;

    const VectorXcd z_star = extract(res.v, 0, nz);
    auto score = [&](const RisState &cand, double &value) {
        const RateReport after = evaluate(topology, channels, cand, beams, fbl, energy);
        value = fblris::utility(after, utility);
        for (int u = 0; u < U; ++u)
            if (after.r[static_cast<std::size_t>(u)] < utility.threshold(u))
                return false;
        return std::isfinite(value);
    };

    RisState best = project(unpack_theta(layout, ris_prev, z_star));
    double best_value = 0.0;
    if (!score(best, best_value) || !(best_value >= out.utility + options.ccp.acceptance_tol))
        return out;
    double alpha = 1.0;
    for (int step = 0; step < options.extrapolation_steps; ++step)
    {
        alpha *= 2.0;
        RisState trial = project(unpack_theta(layout, ris_prev, z_bar + alpha * (z_star - z_bar)));
        double value = 0.0;
        if (!score(trial, value) || !(value > best_value))
            break;
        best = std::move(trial);
        best_value = value;
    }
    out.ris = std::move(best);
    out.utility = best_value;
    out.accepted = true;
    return out;
}

} // namespace fblris
