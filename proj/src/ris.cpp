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

#include "fblris/ris.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace fblris
{

const char *to_string(RisMode mode)
{
    switch (mode)
    {
    case RisMode::Regular: return "Regular";
    case RisMode::StarES: return "StarES";
    case RisMode::StarMS: return "StarMS";
    case RisMode::StarTS: return "StarTS";
    }
    return "?";
}

const char *to_string(FeasibilitySet set)
{
    switch (set)
    {
    case FeasibilitySet::TU: return "TU";
    case FeasibilitySet::TI: return "TI";
    case FeasibilitySet::TC: return "TC";
    case FeasibilitySet::TSU: return "TSU";
    case FeasibilitySet::TSI: return "TSI";
    case FeasibilitySet::TSN: return "TSN";
    }
    return "?";
}

double PhaseAmplitudeModel::amplitude(double phase) const
{
    const double s = (std::sin(phase - phi) + 1.0) / 2.0;
    return theta_min + (1.0 - theta_min) * std::pow(std::max(s, 0.0), alpha);
}

void PhaseAmplitudeModel::validate() const
{
    require(theta_min >= 0.0 && theta_min <= 1.0, "theta_min must lie in [0, 1]");
    require(alpha >= 0.0, "alpha must be non-negative");
}

CoefficientPart RisState::part(int u, int m) const
{
    const UserSide side = user_side[static_cast<std::size_t>(u * ris_count() + m)];
    switch (mode)
    {
    case RisMode::Regular:
        return side == UserSide::Reflection ? CoefficientPart::Reflect : CoefficientPart::None;
    case RisMode::StarES:
    case RisMode::StarMS:
        if (side == UserSide::Reflection)
            return CoefficientPart::Reflect;
        return side == UserSide::Transmission ? CoefficientPart::Transmit : CoefficientPart::None;
    case RisMode::StarTS:
        if (slot(u) == 0)
            return side == UserSide::Reflection ? CoefficientPart::Reflect : CoefficientPart::None;
        return side == UserSide::Transmission ? CoefficientPart::Transmit : CoefficientPart::None;
    }
    return CoefficientPart::None;
}

double RisState::slot_share(int u) const
{
    if (mode != RisMode::StarTS)
        return 1.0;
    return slot(u) == 0 ? ts_fraction : 1.0 - ts_fraction;
}

const VectorXcd &RisState::coefficients(CoefficientPart p, int m) const
{
    return p == CoefficientPart::Transmit ? theta_t[static_cast<std::size_t>(m)]
                                          : theta_r[static_cast<std::size_t>(m)];
}

VectorXcd &RisState::coefficients(CoefficientPart p, int m)
{
    return p == CoefficientPart::Transmit ? theta_t[static_cast<std::size_t>(m)]
                                          : theta_r[static_cast<std::size_t>(m)];
}

bool RisState::operator==(const RisState &other) const
{
    if (mode != other.mode || set != other.set || theta_r.size() != other.theta_r.size() ||
        theta_t.size() != other.theta_t.size())
        return false;
    for (std::size_t m = 0; m < theta_r.size(); ++m)
        if (theta_r[m] != other.theta_r[m] || theta_t[m] != other.theta_t[m])
            return false;
    return ms_reflect == other.ms_reflect && user_side == other.user_side && user_slot == other.user_slot &&
           ts_fraction == other.ts_fraction;
}

bool is_valid_combination(RisMode mode, FeasibilitySet set)
{
    switch (mode)
    {
    case RisMode::Regular:
        return set == FeasibilitySet::TU || set == FeasibilitySet::TI || set == FeasibilitySet::TC;
    case RisMode::StarES:
        return set == FeasibilitySet::TSU || set == FeasibilitySet::TSI || set == FeasibilitySet::TSN;
    case RisMode::StarMS:
    case RisMode::StarTS:
        return set == FeasibilitySet::TSI || set == FeasibilitySet::TSN;
    }
    return false;
}

UserSide geometric_side(const NetworkTopology &topology, int u, int m)
{
    const Point3 offset = topology.user_positions[static_cast<std::size_t>(u)] -
                          topology.ris_positions[static_cast<std::size_t>(m)];
    return offset.dot(topology.ris_normals[static_cast<std::size_t>(m)]) >= 0.0 ? UserSide::Reflection
                                                                                : UserSide::Transmission;
}

namespace
{

RisState skeleton(const NetworkTopology &topology, RisMode mode, FeasibilitySet set, const RisOptions &options)
{
    topology.validate();
    options.amplitude_model.validate();
    require(options.ts_fraction >= 0.0 && options.ts_fraction <= 1.0, "ts_fraction must lie in [0, 1]");
    require(is_valid_combination(mode, set), std::string("feasibility set ") + to_string(set) +
                                                 " is not available in mode " + to_string(mode));
    const int M = topology.ris_count;
    const int N = topology.ris_elements;
    const int U = topology.users();

    RisState s;
    s.mode = mode;
    s.set = set;
    s.ts_fraction = options.ts_fraction;
    s.amplitude_model = options.amplitude_model;
    s.theta_r.assign(static_cast<std::size_t>(M), VectorXcd::Zero(N));
    s.theta_t.assign(static_cast<std::size_t>(M), VectorXcd::Zero(N));
    s.user_side.resize(static_cast<std::size_t>(U * M));
    s.user_slot.assign(static_cast<std::size_t>(U), 0);
    for (int u = 0; u < U; ++u)
    {
        int nearest = 0;
        double best = std::numeric_limits<double>::infinity();
        for (int m = 0; m < M; ++m)
        {
            UserSide side = geometric_side(topology, u, m);
            if (mode == RisMode::Regular && side == UserSide::Transmission)
                side = UserSide::Uncovered;
            s.user_side[static_cast<std::size_t>(u * M + m)] = side;
            const double dist = (topology.user_positions[static_cast<std::size_t>(u)] -
                                 topology.ris_positions[static_cast<std::size_t>(m)])
                                    .norm();
            if (dist < best)
            {
                best = dist;
                nearest = m;
            }
        }
        if (mode == RisMode::StarTS && geometric_side(topology, u, nearest) == UserSide::Transmission)
            s.user_slot[static_cast<std::size_t>(u)] = 1;
    }
    return s;
}

} // namespace

RisState make_ris_state(const NetworkTopology &topology, RisMode mode, FeasibilitySet set,
                        const RisOptions &options, std::uint64_t seed)
{
    RisState s = skeleton(topology, mode, set, options);
    const int N = topology.ris_elements;
    const double half = std::numbers::sqrt2 / 2.0;
    for (int m = 0; m < topology.ris_count; ++m)
    {
        auto &r = s.theta_r[static_cast<std::size_t>(m)];
        auto &t = s.theta_t[static_cast<std::size_t>(m)];
        switch (mode)
        {
        case RisMode::Regular:
            r.setConstant(set == FeasibilitySet::TC ? cd(s.amplitude_model.amplitude(0.0), 0.0) : cd(1.0, 0.0));
            break;
        case RisMode::StarES:
            // Equal split with quadrature phases also satisfies the orthogonality of TSN.
            r.setConstant(cd(half, 0.0));
            t.setConstant(cd(0.0, half));
            break;
        case RisMode::StarTS:
            r.setConstant(1.0);
            t.setConstant(1.0);
            break;
        case RisMode::StarMS:
            break;
        }
    }
    if (mode == RisMode::StarMS)
    {
        std::mt19937_64 engine(seed);
        s.ms_reflect.resize(static_cast<std::size_t>(topology.ris_count));
        for (int m = 0; m < topology.ris_count; ++m)
        {
            std::vector<int> order(static_cast<std::size_t>(N));
            for (int n = 0; n < N; ++n)
                order[static_cast<std::size_t>(n)] = n;
            std::shuffle(order.begin(), order.end(), engine);
            auto &flags = s.ms_reflect[static_cast<std::size_t>(m)];
            flags.assign(static_cast<std::size_t>(N), false);
            for (int n = 0; n < (N + 1) / 2; ++n)
                flags[static_cast<std::size_t>(order[static_cast<std::size_t>(n)])] = true;
            for (int n = 0; n < N; ++n)
            {
                if (flags[static_cast<std::size_t>(n)])
                    s.theta_r[static_cast<std::size_t>(m)][n] = 1.0;
                else
                    s.theta_t[static_cast<std::size_t>(m)][n] = 1.0;
            }
        }
    }
    return s;
}

RisState ris_off(const NetworkTopology &topology)
{
    return skeleton(topology, RisMode::Regular, FeasibilitySet::TU, {});
}

RisState random_ris(const NetworkTopology &topology, std::uint64_t seed)
{
    RisState s = skeleton(topology, RisMode::Regular, FeasibilitySet::TI, {});
    std::mt19937_64 engine(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    for (auto &r : s.theta_r)
        for (Index n = 0; n < r.size(); ++n)
            r[n] = std::polar(1.0, phase(engine));
    return s;
}

RowVectorXcd effective_channel(const ChannelSet &channels, const RisState &ris, int u, int bs)
{
    if (u < 0 || u >= channels.users || bs < 0 || bs >= channels.cells)
        fail(ErrorCode::IndexOutOfRange, "effective_channel: user or BS index out of range");
    RowVectorXcd h = channels.d(u, bs);
    for (int m = 0; m < channels.ris_count; ++m)
    {
        const CoefficientPart p = ris.part(u, m);
        if (p == CoefficientPart::None)
            continue;
        const VectorXcd &theta = ris.coefficients(p, m);
        h.noalias() += channels.f(u, m).cwiseProduct(theta.transpose()) * channels.G(m, bs);
    }
    return h;
}

double feasibility_residual(const RisState &ris)
{
    double worst = 0.0;
    auto track = [&worst](double v) { worst = std::max(worst, v); };
    for (int m = 0; m < ris.ris_count(); ++m)
    {
        const auto &r = ris.theta_r[static_cast<std::size_t>(m)];
        const auto &t = ris.theta_t[static_cast<std::size_t>(m)];
        for (Index n = 0; n < r.size(); ++n)
        {
            const double pr = std::norm(r[n]);
            const double pt = std::norm(t[n]);
            switch (ris.mode)
            {
            case RisMode::Regular:
                track(std::abs(t[n]));
                if (ris.set == FeasibilitySet::TU)
                    track(pr - 1.0);
                else if (ris.set == FeasibilitySet::TI)
                    track(std::abs(std::abs(r[n]) - 1.0));
                else
                    track(std::abs(std::abs(r[n]) - ris.amplitude_model.amplitude(std::arg(r[n]))));
                break;
            case RisMode::StarES:
                if (ris.set == FeasibilitySet::TSU)
                    track(pr + pt - 1.0);
                else
                    track(std::abs(pr + pt - 1.0));
                if (ris.set == FeasibilitySet::TSN)
                    track(std::abs((std::conj(r[n]) * t[n]).real()));
                break;
            case RisMode::StarMS:
                if (ris.ms_reflect[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)])
                {
                    track(std::abs(std::abs(r[n]) - 1.0));
                    track(std::abs(t[n]));
                }
                else
                {
                    track(std::abs(std::abs(t[n]) - 1.0));
                    track(std::abs(r[n]));
                }
                break;
            case RisMode::StarTS:
                track(std::abs(std::abs(r[n]) - 1.0));
                track(std::abs(std::abs(t[n]) - 1.0));
                break;
            }
        }
    }
    return worst;
}

namespace
{

cd unit_phase(cd z) { return std::abs(z) > 0.0 ? z / std::abs(z) : cd(1.0, 0.0); }

} // namespace

RisState project(const RisState &candidate)
{
    RisState s = candidate;
    for (int m = 0; m < s.ris_count(); ++m)
    {
        auto &r = s.theta_r[static_cast<std::size_t>(m)];
        auto &t = s.theta_t[static_cast<std::size_t>(m)];
        for (Index n = 0; n < r.size(); ++n)
        {
            switch (s.mode)
            {
            case RisMode::Regular:
                t[n] = 0.0;
                if (s.set == FeasibilitySet::TU)
                {
                    if (std::abs(r[n]) > 1.0)
                        r[n] /= std::abs(r[n]);
                }
                else if (s.set == FeasibilitySet::TI)
                    r[n] = unit_phase(r[n]);
                else
                {
                    const double phase = std::abs(r[n]) > 0.0 ? std::arg(r[n]) : 0.0;
                    r[n] = std::polar(s.amplitude_model.amplitude(phase), phase);
                }
                break;
            case RisMode::StarES: {
                const double power = std::norm(r[n]) + std::norm(t[n]);
                if (s.set == FeasibilitySet::TSU)
                {
                    if (power > 1.0)
                    {
                        r[n] /= std::sqrt(power);
                        t[n] /= std::sqrt(power);
                    }
                    break;
                }
                if (power == 0.0)
                {
                    r[n] = 1.0;
                    t[n] = 0.0;
                    break;
                }
                r[n] /= std::sqrt(power);
                t[n] /= std::sqrt(power);
                if (s.set == FeasibilitySet::TSN && std::norm(r[n]) > 0.0)
                {
                    // Remove the in-phase component of theta_t along theta_r, then restore unit power.
                    t[n] -= (std::conj(r[n]) * t[n]).real() * r[n] / std::norm(r[n]);
                    const double repaired = std::sqrt(std::norm(r[n]) + std::norm(t[n]));
                    r[n] /= repaired;
                    t[n] /= repaired;
                }
                break;
            }
            case RisMode::StarMS:
                if (s.ms_reflect[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)])
                {
                    r[n] = unit_phase(r[n]);
                    t[n] = 0.0;
                }
                else
                {
                    t[n] = unit_phase(t[n]);
                    r[n] = 0.0;
                }
                break;
            case RisMode::StarTS:
                r[n] = unit_phase(r[n]);
                t[n] = unit_phase(t[n]);
                break;
            }
        }
    }
    return s;
}

} // namespace fblris
