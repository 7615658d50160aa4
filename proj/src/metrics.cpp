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

#include "fblris/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fblris
{

FblParams FblParams::make(double n_t, double eps_c)
{
    FblParams p;
    p.n_t = n_t;
    p.eps_c = eps_c;
    p.validate();
    p.q_inv = q_inverse(eps_c);
    return p;
}

FblParams FblParams::shannon(double n_t)
{
    FblParams p;
    p.n_t = n_t;
    p.eps_c = 0.5;
    p.q_inv = 0.0;
    return p;
}

double FblParams::penalty() const { return q_inv / std::sqrt(n_t); }

void FblParams::validate() const
{
    require(n_t > 0.0, "n_t must be positive");
    require(eps_c > 0.0 && eps_c <= 0.5, "eps_c must lie in (0, 0.5]");
    require(q_inv >= 0.0, "q_inv must be non-negative");
}

void EnergyParams::validate() const
{
    require(p_c > 0.0, "p_c must be positive");
    require(eta > 0.0, "eta must be positive");
}

double BeamformingSet::total_power() const
{
    double total = 0.0;
    for (const auto &v : x)
        total += v.squaredNorm();
    return total;
}

double power_violation(const NetworkTopology &topology, const RisState &ris, const BeamformingSet &beams)
{
    const int slots = ris.slot_count();
    std::vector<double> used(static_cast<std::size_t>(topology.cells * slots), 0.0);
    for (int u = 0; u < beams.users(); ++u)
        used[static_cast<std::size_t>(topology.serving_cell(u) * slots + ris.slot(u))] += beams.power(u);
    double worst = 0.0;
    for (int l = 0; l < topology.cells; ++l)
        for (int s = 0; s < slots; ++s)
            worst = std::max(worst, used[static_cast<std::size_t>(l * slots + s)] -
                                        topology.power_budgets[static_cast<std::size_t>(l)]);
    return worst;
}

double q_inverse(double eps)
{
    require(eps > 0.0 && eps < 1.0, "q_inverse: argument must lie in (0, 1)");
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01, -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    // Lower-tail quantile x = Phi^-1(eps); Q^-1(eps) = -x.
    const double p = eps;
    double x;
    if (p < p_low)
    {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    else if (p <= 1.0 - p_low)
    {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    else
    {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    for (int step = 0; step < 2; ++step)
    {
        const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
        const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return -x;
}

double sinr(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris,
            const BeamformingSet &beams, int u)
{
    if (u < 0 || u >= beams.users())
        fail(ErrorCode::IndexOutOfRange, "sinr: user index out of range");
    std::vector<RowVectorXcd> h(static_cast<std::size_t>(topology.cells));
    for (int i = 0; i < topology.cells; ++i)
        h[static_cast<std::size_t>(i)] = effective_channel(channels, ris, u, i);

    double signal = 0.0;
    double interference = topology.noise_power;
    for (int v = 0; v < beams.users(); ++v)
    {
        if (ris.slot(v) != ris.slot(u))
            continue;
        const auto &hv = h[static_cast<std::size_t>(topology.serving_cell(v))];
        const double power = std::norm((hv * beams.x[static_cast<std::size_t>(v)]).value());
        if (v == u)
            signal = power;
        else
            interference += power;
    }
    return signal / interference;
}

double dispersion(double gamma)
{
    require(gamma >= 0.0, "dispersion: gamma must be non-negative");
    return 2.0 * gamma / (1.0 + gamma);
}

double dispersion_opt(double gamma)
{
    require(gamma >= 0.0, "dispersion_opt: gamma must be non-negative");
    return 1.0 - 1.0 / ((1.0 + gamma) * (1.0 + gamma));
}

double shannon_rate(double gamma) { return std::log1p(gamma) / std::numbers::ln2; }

double fbl_rate(double gamma, const FblParams &fbl)
{
    return (std::log1p(gamma) - fbl.penalty() * std::sqrt(dispersion(gamma))) / std::numbers::ln2;
}

double lemma2_curve(double a, double gamma) { return std::log1p(gamma) - a * std::sqrt(gamma / (1.0 + gamma)); }

FblCurveAnalysis lemma2_analysis(double a)
{
    require(a > 0.0 && std::isfinite(a), "lemma2_analysis: a must be positive");
    FblCurveAnalysis out;
    out.a = a;
    // gamma (1 + gamma) = a^2 / 4, written to avoid cancellation for small a.
    out.gamma_star = (a * a / 4.0) / (0.5 + std::sqrt(0.25 + a * a / 4.0));
    out.f_min = lemma2_curve(a, out.gamma_star);
    if (!(out.f_min < 0.0))
        fail(ErrorCode::BracketFailure, "lemma2_analysis: curve minimum is not negative");

    double lo = out.gamma_star;
    double hi = std::max(2.0 * out.gamma_star, 1e-300);
    while (lemma2_curve(a, hi) <= 0.0)
    {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi) || hi > 1e300)
            fail(ErrorCode::BracketFailure, "lemma2_analysis: no sign change above the minimizer");
    }
    for (int it = 0; it < 2000 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (lemma2_curve(a, mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    out.gamma_zero = 0.5 * (lo + hi);
    return out;
}

double lemma2_coefficient(const FblParams &fbl) { return fbl.penalty() * std::numbers::sqrt2; }

double per_user_ee(double r, const VectorXcd &x, const EnergyParams &energy)
{
    return r / (energy.p_c + energy.eta * x.squaredNorm());
}

double gee(const std::vector<double> &rates, const BeamformingSet &beams, const EnergyParams &energy)
{
    double sum = 0.0;
    for (double r : rates)
        sum += r;
    return sum / (static_cast<double>(beams.users()) * energy.p_c + energy.eta * beams.total_power());
}

double latency_threshold(double n_t, double t_c, double w)
{
    require(n_t > 0.0 && t_c > 0.0 && w > 0.0, "latency_threshold: arguments must be positive");
    return n_t / (t_c * w);
}

RateReport evaluate(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris,
                    const BeamformingSet &beams, const FblParams &fbl, const EnergyParams &energy)
{
    const int U = beams.users();
    require(U == topology.users() && U == ris.users(), "evaluate: user count mismatch");
    RateReport rep;
    rep.gamma.resize(static_cast<std::size_t>(U));
    rep.V.resize(static_cast<std::size_t>(U));
    rep.delta.resize(static_cast<std::size_t>(U));
    rep.r.resize(static_cast<std::size_t>(U));
    rep.C.resize(static_cast<std::size_t>(U));
    rep.e.resize(static_cast<std::size_t>(U));
    for (int u = 0; u < U; ++u)
    {
        const auto i = static_cast<std::size_t>(u);
        const double share = ris.slot_share(u);
        rep.gamma[i] = sinr(topology, channels, ris, beams, u);
        rep.V[i] = dispersion(rep.gamma[i]);
        rep.C[i] = share * shannon_rate(rep.gamma[i]);
        rep.r[i] = share * fbl_rate(rep.gamma[i], fbl);
        rep.delta[i] = rep.C[i] - rep.r[i];
        rep.e[i] = per_user_ee(rep.r[i], beams.x[i], energy);
    }
    rep.gee = gee(rep.r, beams, energy);
    return rep;
}

const char *to_string(UtilityKind kind)
{
    switch (kind)
    {
    case UtilityKind::MinWeightedRate: return "MWRM";
    case UtilityKind::WeightedSumRate: return "WSR";
    case UtilityKind::GEE: return "GEE";
    case UtilityKind::MinWeightedEE: return "MinEE";
    }
    return "?";
}

double UtilitySpec::weight(int u) const
{
    return weights.empty() ? 1.0 : weights[static_cast<std::size_t>(u)];
}

double UtilitySpec::threshold(int u) const
{
    return thresholds.empty() ? 0.0 : thresholds[static_cast<std::size_t>(u)];
}

bool UtilitySpec::has_thresholds() const
{
    return std::any_of(thresholds.begin(), thresholds.end(), [](double t) { return t > 0.0; });
}

void UtilitySpec::validate(int users) const
{
    require(weights.empty() || static_cast<int>(weights.size()) == users, "utility weights: wrong length");
    require(thresholds.empty() || static_cast<int>(thresholds.size()) == users,
            "utility thresholds: wrong length");
    for (double w : weights)
        require(w > 0.0 && std::isfinite(w), "utility weights must be positive");
    for (double t : thresholds)
        require(t >= 0.0 && std::isfinite(t), "rate thresholds must be finite and non-negative");
}

double utility(const RateReport &report, const UtilitySpec &spec)
{
    const int U = static_cast<int>(report.r.size());
    double value = spec.kind == UtilityKind::WeightedSumRate ? 0.0 : std::numeric_limits<double>::infinity();
    switch (spec.kind)
    {
    case UtilityKind::MinWeightedRate:
        for (int u = 0; u < U; ++u)
            value = std::min(value, report.r[static_cast<std::size_t>(u)] / spec.weight(u));
        break;
    case UtilityKind::WeightedSumRate:
        for (int u = 0; u < U; ++u)
            value += spec.weight(u) * report.r[static_cast<std::size_t>(u)];
        break;
    case UtilityKind::GEE:
        value = report.gee;
        break;
    case UtilityKind::MinWeightedEE:
        for (int u = 0; u < U; ++u)
            value = std::min(value, report.e[static_cast<std::size_t>(u)] / spec.weight(u));
        break;
    }
    return value;
}

} // namespace fblris
