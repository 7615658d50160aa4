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

#include "fblris/beam_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fblris
{

BeamformingSet mrt_beams(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris)
{
    const int U = topology.users();
    const int slots = ris.slot_count();
    std::vector<int> load(static_cast<std::size_t>(topology.cells * slots), 0);
    for (int u = 0; u < U; ++u)
        ++load[static_cast<std::size_t>(topology.serving_cell(u) * slots + ris.slot(u))];

    BeamformingSet beams;
    beams.x.resize(static_cast<std::size_t>(U));
    for (int u = 0; u < U; ++u)
    {
        const int l = topology.serving_cell(u);
        const double p = topology.power_budgets[static_cast<std::size_t>(l)] /
                         load[static_cast<std::size_t>(l * slots + ris.slot(u))];
        const RowVectorXcd h = effective_channel(channels, ris, u, l);
        VectorXcd x(topology.bs_antennas);
        if (h.norm() > 0.0)
            x = h.adjoint() / h.norm();
        else
            x = VectorXcd::Unit(topology.bs_antennas, 0);
        beams.x[static_cast<std::size_t>(u)] = std::sqrt(p) * x;
    }
    return beams;
}

std::vector<QuadraticForm> power_constraints(const NetworkTopology &topology, const RisState &ris, Index dim)
{
    const int N = topology.bs_antennas;
    std::vector<QuadraticForm> out;
    for (int l = 0; l < topology.cells; ++l)
        for (int s = 0; s < ris.slot_count(); ++s)
        {
            QuadraticForm q(dim);
            bool any = false;
            q.add_constant(topology.power_budgets[static_cast<std::size_t>(l)]);
            for (int k = 0; k < topology.users_per_cell; ++k)
            {
                const int u = topology.user_index(l, k);
                if (ris.slot(u) != s)
                    continue;
                any = true;
                for (int n = 0; n < N; ++n)
                    q.subtract_modulus_squared({cd(0.0), {{static_cast<Index>(u) * N + n, cd(1.0)}}}, 1.0);
            }
            if (any)
                out.push_back(std::move(q));
        }
    return out;
}

namespace
{

bool meets_thresholds(const RateReport &report, const UtilitySpec &utility)
{
    for (int u = 0; u < static_cast<int>(report.r.size()); ++u)
        if (report.r[static_cast<std::size_t>(u)] < utility.threshold(u))
            return false;
    return true;
}

} // namespace

BeamUpdate update_beams(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris,
                        const BeamformingSet &beams_prev, const UtilitySpec &utility, const FblParams &fbl,
                        const EnergyParams &energy, const BeamOptions &options)
{
    const int U = topology.users();
    const int N = topology.bs_antennas;
    utility.validate(U);
    const Index nz = static_cast<Index>(U) * N;
    const Index nx = 2 * nz;
    const VectorXcd z_bar = pack_beams(beams_prev);
    const RateReport before = evaluate(topology, channels, ris, beams_prev, fbl, energy);

    BeamUpdate out;
    out.beams = beams_prev;
    out.utility = fblris::utility(before, utility);

    const bool aux = utility.kind == UtilityKind::MinWeightedRate;
    const Index dim = aux ? nx + 1 : nx;
    std::vector<QuadraticForm> surrogate;
    surrogate.reserve(static_cast<std::size_t>(U));
    for (int u = 0; u < U; ++u)
        surrogate.push_back(rate_surrogate(beam_rate_model(topology, channels, ris, u, fbl), z_bar, dim));

    std::vector<QuadraticForm> constraints = power_constraints(topology, ris, dim);
    for (int u = 0; u < U; ++u)
        if (utility.threshold(u) > 0.0)
        {
            QuadraticForm c = surrogate[static_cast<std::size_t>(u)];
            c.add_constant(-utility.threshold(u));
            constraints.push_back(std::move(c));
        }

    VectorXd start = VectorXd::Zero(dim);
    start.head(nx) = embed(z_bar) * (1.0 - options.start_shrink);

    VectorXd v;
    switch (utility.kind)
    {
    case UtilityKind::MinWeightedRate: {
        ConvexSubproblem sp;
        sp.objective = QuadraticForm(dim);
        sp.objective.add_linear(nx, 1.0);
        double r0 = std::numeric_limits<double>::infinity();
        for (int u = 0; u < U; ++u)
        {
            QuadraticForm c = surrogate[static_cast<std::size_t>(u)];
            r0 = std::min(r0, c.value(start) / utility.weight(u));
            c.add_linear(nx, -utility.weight(u));
            constraints.push_back(std::move(c));
        }
        start[nx] = r0 - std::max(1e-3, 1e-2 * std::abs(r0));
        sp.constraints = std::move(constraints);
        sp.start = start;
        const SolveResult res = solve(sp, options.dinkelbach.solve);
        if (res.status == SolveStatus::Infeasible)
            fail(ErrorCode::InfeasibleThresholds, "update_beams: rate thresholds cannot be met");
        out.status = res.status;
        out.kkt_residual = res.kkt_residual;
        v = res.v;
        break;
    }
    case UtilityKind::WeightedSumRate: {
        ConvexSubproblem sp;
        sp.objective = QuadraticForm(dim);
        for (int u = 0; u < U; ++u)
            sp.objective.add_scaled(surrogate[static_cast<std::size_t>(u)], utility.weight(u));
        sp.constraints = std::move(constraints);
        sp.start = start;
        const SolveResult res = solve(sp, options.dinkelbach.solve);
        if (res.status == SolveStatus::Infeasible)
            fail(ErrorCode::InfeasibleThresholds, "update_beams: rate thresholds cannot be met");
        out.status = res.status;
        out.kkt_residual = res.kkt_residual;
        v = res.v;
        break;
    }
    case UtilityKind::GEE: {
        FractionalProgram fp;
        fp.numerator = QuadraticForm(dim);
        for (const auto &s : surrogate)
            fp.numerator.add_scaled(s, 1.0);
        fp.negated_denominator = QuadraticForm(dim);
        fp.negated_denominator.add_constant(-static_cast<double>(U) * energy.p_c);
        for (Index k = 0; k < nz; ++k)
            fp.negated_denominator.subtract_modulus_squared({cd(0.0), {{k, cd(1.0)}}}, energy.eta);
        fp.constraints = std::move(constraints);
        fp.start = start;
        try
        {
            const DinkelbachResult res = dinkelbach(fp, options.dinkelbach);
            out.status = res.result.status;
            out.kkt_residual = res.result.kkt_residual;
            v = res.result.v;
        }
        catch (const Error &e)
        {
            if (e.code() == ErrorCode::Infeasible)
                fail(ErrorCode::InfeasibleThresholds, "update_beams: rate thresholds cannot be met");
            throw;
        }
        break;
    }
    case UtilityKind::MinWeightedEE: {
        MinRatioProgram mp;
        for (int u = 0; u < U; ++u)
        {
            mp.numerators.push_back(surrogate[static_cast<std::size_t>(u)]);
            QuadraticForm d(dim);
            d.add_constant(-energy.p_c);
            for (int n = 0; n < N; ++n)
                d.subtract_modulus_squared({cd(0.0), {{static_cast<Index>(u) * N + n, cd(1.0)}}}, energy.eta);
            mp.negated_denominators.push_back(std::move(d));
            mp.weights.push_back(utility.weight(u));
        }
        mp.constraints = std::move(constraints);
        mp.start = start;
        try
        {
            const DinkelbachResult res = generalized_dinkelbach(mp, options.dinkelbach);
            out.status = res.result.status;
            out.kkt_residual = res.result.kkt_residual;
            v = res.result.v;
        }
        catch (const Error &e)
        {
            if (e.code() == ErrorCode::Infeasible)
                fail(ErrorCode::InfeasibleThresholds, "update_beams: rate thresholds cannot be met");
            throw;
        }
        break;
    }
    }

    const BeamformingSet candidate = unpack_beams(extract(v, 0, nz), U, N);
    if (power_violation(topology, ris, candidate) > 1e-9)
        return out;
    const RateReport after = evaluate(topology, channels, ris, candidate, fbl, energy);
    const double value = fblris::utility(after, utility);
    if (std::isfinite(value) && value >= out.utility && meets_thresholds(after, utility))
    {
        out.beams = candidate;
        out.utility = value;
        out.accepted = true;
    }
    return out;
}

} // namespace fblris
