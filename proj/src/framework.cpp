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

#include "fblris/framework.hpp"
#include "fblris/surrogates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>

namespace fblris
{

namespace
{

double min_sinr(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris,
                const BeamformingSet &beams)
{
    double worst = std::numeric_limits<double>::infinity();
    for (int u = 0; u < topology.users(); ++u)
        worst = std::min(worst, sinr(topology, channels, ris, beams, u));
    return worst;
}

double relative_gain(double now, double before)
{
    return (now - before) / std::max(std::abs(before), 1e-12);
}

} // namespace

InitResult init_maxmin_sinr(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris_start,
                            const InitOptions &options)
{
    const int U = topology.users();
    const int N = topology.bs_antennas;
    InitResult out;
    out.ris = ris_start;
    out.beams = mrt_beams(topology, channels, ris_start);
    out.min_sinr = min_sinr(topology, channels, out.ris, out.beams);
    const FblParams shannon = FblParams::shannon();

    for (int it = 0; it < options.max_iterations; ++it)
    {
        const double before = out.min_sinr;
        out.iterations = it + 1;

        // Beam block.
        {
            const Index nz = static_cast<Index>(U) * N;
            const VectorXcd z_bar = pack_beams(out.beams);
            MinRatioProgram mp;
            for (int u = 0; u < U; ++u)
            {
                const RateModel model = beam_rate_model(topology, channels, out.ris, u, shannon);
                mp.numerators.push_back(linearized_signal(model, z_bar, 2 * nz));
                mp.negated_denominators.push_back(negated_interference(model, 2 * nz));
            }
            mp.constraints = power_constraints(topology, out.ris, 2 * nz);
            mp.start = embed(z_bar) * (1.0 - 1e-3);
            try
            {
                const DinkelbachResult res = generalized_dinkelbach(mp, options.dinkelbach);
                out.mu_runs.push_back(res.mu_history);
                const BeamformingSet cand = unpack_beams(extract(res.result.v, 0, nz), U, N);
                const double value = min_sinr(topology, channels, out.ris, cand);
                if (value > out.min_sinr && power_violation(topology, out.ris, cand) <= 1e-9)
                {
                    out.beams = cand;
                    out.min_sinr = value;
                }
            }
            catch (const Error &)
            {
            }
        }

        // RIS block.
        const ThetaLayout layout = theta_layout(out.ris);
        if (options.update_ris && layout.size() > 0)
        {
            const Index nx = 2 * layout.size();
            const VectorXcd z_bar = pack_theta(layout, out.ris);
            bool singleton = false;
            std::vector<QuadraticForm> cons =
                coefficient_constraints(out.ris, layout, z_bar, options.ccp, nx, singleton);
            if (!singleton)
            {
                MinRatioProgram mp;
                for (int u = 0; u < U; ++u)
                {
                    const RateModel model =
                        theta_rate_model(topology, channels, out.ris, out.beams, layout, u, shannon);
                    mp.numerators.push_back(linearized_signal(model, z_bar, nx));
                    mp.negated_denominators.push_back(negated_interference(model, nx));
                }
                mp.constraints = std::move(cons);
                mp.start = embed(coefficient_start(out.ris, z_bar, options.ccp));
                try
                {
                    const DinkelbachResult res = generalized_dinkelbach(mp, options.dinkelbach);
                    out.mu_runs.push_back(res.mu_history);
                    const RisState cand =
                        project(unpack_theta(layout, out.ris, extract(res.result.v, 0, layout.size())));
                    const double value = min_sinr(topology, channels, cand, out.beams);
                    if (value > out.min_sinr)
                    {
                        out.ris = cand;
                        out.min_sinr = value;
                    }
                }
                catch (const Error &)
                {
                }
            }
        }

        if (relative_gain(out.min_sinr, before) < options.tolerance)
            break;
    }
    return out;
}

namespace
{

BeamformingSet scale_to_budget(const NetworkTopology &topology, const RisState &ris, BeamformingSet beams)
{
    const int slots = ris.slot_count();
    std::vector<double> used(static_cast<std::size_t>(topology.cells * slots), 0.0);
    for (int u = 0; u < beams.users(); ++u)
        used[static_cast<std::size_t>(topology.serving_cell(u) * slots + ris.slot(u))] += beams.power(u);
    for (int u = 0; u < beams.users(); ++u)
    {
        const int l = topology.serving_cell(u);
        const double total = used[static_cast<std::size_t>(l * slots + ris.slot(u))];
        const double budget = topology.power_budgets[static_cast<std::size_t>(l)];
        if (total > budget)
            beams.x[static_cast<std::size_t>(u)] *= std::sqrt(budget / total);
    }
    return beams;
}

// Joint momentum step along an earlier AO displacement, followed by a beam refit.
// The result replaces the state only if the utility rises.
bool extrapolate(const NetworkTopology &topology, const ChannelSet &channels, AoState &st,
                 const BeamformingSet &beams_prev, const RisState &ris_prev, double &value,
                 const UtilitySpec &utility, const FblParams &fbl, const EnergyParams &energy, int steps,
                 const BeamOptions &beam_options)
{
    const ThetaLayout layout = theta_layout(st.ris);
    const VectorXcd z_now = pack_theta(layout, st.ris);
    const VectorXcd z_old = pack_theta(layout, ris_prev);
    bool moved = false;
    double alpha = 0.5;
    BeamformingSet base_beams = st.beams;
    for (int step = 0; step < steps; ++step)
    {
        alpha *= 2.0;
        BeamformingSet trial_beams = base_beams;
        for (std::size_t u = 0; u < trial_beams.x.size(); ++u)
            trial_beams.x[u] += alpha * (base_beams.x[u] - beams_prev.x[u]);
        trial_beams = scale_to_budget(topology, st.ris, std::move(trial_beams));
        RisState trial_ris = st.ris;
        if (layout.entries.size() > 0)
            trial_ris = project(unpack_theta(layout, st.ris, z_now + alpha * (z_now - z_old)));
        trial_beams = update_beams(topology, channels, trial_ris, trial_beams, utility, fbl, energy, beam_options).beams;
        if (power_violation(topology, trial_ris, trial_beams) > 1e-9)
            break;
        const double trial = fblris::utility(evaluate(topology, channels, trial_ris, trial_beams, fbl, energy), utility);
        if (!(trial > value) || !std::isfinite(trial))
            break;
        if (utility.has_thresholds())
        {
            bool met = true;
            const RateReport report = evaluate(topology, channels, trial_ris, trial_beams, fbl, energy);
            for (int u = 0; u < topology.users(); ++u)
                met = met && report.r[static_cast<std::size_t>(u)] >= utility.threshold(u);
            if (!met)
                break;
        }
        st.beams = std::move(trial_beams);
        st.ris = std::move(trial_ris);
        value = trial;
        moved = true;
    }
    return moved;
}

AoState alternate(const NetworkTopology &topology, const ChannelSet &channels, AoState st,
                  const UtilitySpec &utility, const FblParams &fbl, const EnergyParams &energy,
                  const AoOptions &options)
{
    st.trace.clear();
    st.rates.clear();
    st.converged = false;
    st.initial_utility = fblris::utility(evaluate(topology, channels, st.ris, st.beams, fbl, energy), utility);
    double previous = st.initial_utility;
    std::deque<std::pair<BeamformingSet, RisState>> history;
    for (int t = 1; t <= options.max_iterations; ++t)
    {
        history.emplace_back(st.beams, st.ris);
        if (history.size() > 4)
            history.pop_front();
        const BeamUpdate bu =
            update_beams(topology, channels, st.ris, st.beams, utility, fbl, energy, options.beams);
        st.beams = bu.beams;
        st.beam_kkt = bu.kkt_residual;
        if (options.update_ris)
        {
            double block = fblris::utility(evaluate(topology, channels, st.ris, st.beams, fbl, energy), utility);
            for (int step = 0; step < options.ris_steps; ++step)
            {
                const RisUpdate ru =
                    update_ris(topology, channels, st.beams, st.ris, utility, fbl, energy, options.ris);
                st.ris = ru.ris;
                st.ris_kkt = ru.kkt_residual;
                if (!ru.accepted)
                    break;
                const double gain = relative_gain(ru.utility, block);
                block = ru.utility;
                if (gain < 0.1 * options.tolerance)
                    break;
            }
        }
        double value = fblris::utility(evaluate(topology, channels, st.ris, st.beams, fbl, energy), utility);
        if (options.extrapolation_steps > 0 && t > 1)
            for (std::size_t lag : {std::size_t{1}, std::size_t{4}})
                if (history.size() >= lag)
                {
                    const auto &anchor = history[history.size() - lag];
                    extrapolate(topology, channels, st, anchor.first, anchor.second, value, utility, fbl, energy,
                                options.extrapolation_steps, options.beams);
                }
        const RateReport report = evaluate(topology, channels, st.ris, st.beams, fbl, energy);
        st.trace.push_back(value);
        st.rates.push_back(report.r);
        st.iterations = t;
        if (relative_gain(value, previous) < options.tolerance)
        {
            st.converged = true;
            break;
        }
        previous = value;
    }
    return st;
}

} // namespace

AoState optimize(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris_start,
                 const UtilitySpec &utility, const FblParams &fbl, const EnergyParams &energy,
                 const AoOptions &options)
{
    topology.validate();
    utility.validate(topology.users());
    energy.validate();
    require(options.max_iterations >= 1, "max_iterations must be positive");
    require(options.ris_steps >= 1, "ris_steps must be positive");

    AoState st;
    InitOptions init_options = options.init;
    init_options.update_ris = options.update_ris && options.init.update_ris;
    init_options.ccp = options.ris.ccp;
    const InitResult init = init_maxmin_sinr(topology, channels, ris_start, init_options);
    st.beams = init.beams;
    st.ris = init.ris;
    st.init_min_sinr = init.min_sinr;

    if (utility.kind == UtilityKind::GEE || utility.kind == UtilityKind::MinWeightedEE)
    {
        UtilitySpec rate = utility;
        rate.kind = UtilityKind::MinWeightedRate;
        rate.weights.clear();
        st = alternate(topology, channels, st, rate, fbl, energy, options);
    }

    if (utility.has_thresholds() && fbl.q_inv > 0.0)
    {
        const double gamma_zero = lemma2_analysis(lemma2_coefficient(fbl)).gamma_zero;
        for (int u = 0; u < topology.users(); ++u)
            if (sinr(topology, channels, st.ris, st.beams, u) <= gamma_zero)
                fail(ErrorCode::InitializationInfeasible,
                     "initial point leaves a user below the zero-rate SINR while thresholds are active");
    }

    return alternate(topology, channels, st, utility, fbl, energy, options);
}

AoState refine(const NetworkTopology &topology, const ChannelSet &channels, const BeamformingSet &beams,
               const RisState &ris, const UtilitySpec &utility, const FblParams &fbl, const EnergyParams &energy,
               const AoOptions &options)
{
    topology.validate();
    utility.validate(topology.users());
    energy.validate();
    require(options.max_iterations >= 1, "max_iterations must be positive");
    require(options.ris_steps >= 1, "ris_steps must be positive");
    require(beams.users() == topology.users(), "refine: beam count does not match the topology");
    require(power_violation(topology, ris, beams) <= 1e-9, "refine: starting beams violate the power budget");
    AoState st;
    st.beams = beams;
    st.ris = ris;
    return alternate(topology, channels, std::move(st), utility, fbl, energy, options);
}

void write_trace_csv(const AoState &state, std::ostream &out)
{
    const std::size_t users = state.rates.empty() ? 0 : state.rates.front().size();
    out << "iteration,utility";
    for (std::size_t u = 0; u < users; ++u)
        out << ",rate_" << u;
    out << '\n';
    char buf[64];
    for (std::size_t t = 0; t < state.trace.size(); ++t)
    {
        std::snprintf(buf, sizeof buf, "%.17g", state.trace[t]);
        out << t + 1 << ',' << buf;
        for (double r : state.rates[t])
        {
            std::snprintf(buf, sizeof buf, "%.17g", r);
            out << ',' << buf;
        }
        out << '\n';
    }
}

} // namespace fblris
