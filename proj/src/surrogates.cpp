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

#include "fblris/surrogates.hpp"

#include <cmath>
#include <numbers>

namespace fblris
{

double model_sinr(const RateModel &model, const VectorXcd &z)
{
    double interference = model.noise;
    for (std::size_t v = 1; v < model.forms.size(); ++v)
        interference += std::norm(model.forms[v].evaluate(z));
    return std::norm(model.forms.front().evaluate(z)) / interference;
}

double model_rate(const RateModel &model, const VectorXcd &z)
{
    const double gamma = model_sinr(model, z);
    return model.share * (std::log1p(gamma) - model.penalty * std::sqrt(dispersion(gamma))) / std::numbers::ln2;
}

SurrogateCoefficients surrogate_coefficients(const RateModel &model, const VectorXcd &z_bar)
{
    require(!model.forms.empty(), "rate model has no desired-signal term");
    SurrogateCoefficients s;
    s.values.reserve(model.forms.size());
    for (const auto &w : model.forms)
        s.values.push_back(w.evaluate(z_bar));
    const double signal = std::norm(s.values.front());
    s.interference = model.noise;
    for (std::size_t v = 1; v < s.values.size(); ++v)
        s.interference += std::norm(s.values[v]);
    s.total = s.interference + signal;
    s.gamma = signal / s.interference;
    if (!(s.gamma > 0.0))
        fail(ErrorCode::ZeroSinrExpansion,
             "rate surrogate expanded at zero SINR; start from a max-min SINR initial point");
    s.V = dispersion(s.gamma);
    s.zeta = s.interference / s.total;
    const double c = model.penalty;
    const double root = std::sqrt(s.V);
    s.a = std::log1p(s.gamma) - s.gamma - c * (root / 2.0 + 1.0 / root);
    s.b = s.gamma + s.zeta * c / root;
    return s;
}

QuadraticForm rate_surrogate(const RateModel &model, const VectorXcd &z_bar, Index dim, Index offset)
{
    const SurrogateCoefficients s = surrogate_coefficients(model, z_bar);
    const double c = model.penalty;
    const double root = std::sqrt(s.V);
    const double sigma2 = model.noise;

    QuadraticForm q(dim);
    q.add_constant(s.a);
    q.add_real(model.forms.front(), 2.0 * std::conj(s.values.front()) / s.interference, offset);
    const double kappa = 2.0 * c / root / s.total;
    q.add_constant(kappa * sigma2);
    for (std::size_t v = 1; v < model.forms.size(); ++v)
        q.add_real(model.forms[v], kappa * std::conj(s.values[v]), offset);
    q.add_constant(-s.b * sigma2 / s.total);
    for (const auto &w : model.forms)
        q.subtract_modulus_squared(w, s.b / s.total, offset);

    QuadraticForm bits(dim);
    bits.add_scaled(q, model.share / std::numbers::ln2);
    return bits;
}

QuadraticForm shannon_lower_bound(const RateModel &model, const VectorXcd &z_bar, Index dim, Index offset)
{
    const SurrogateCoefficients s = surrogate_coefficients(model, z_bar);
    QuadraticForm q(dim);
    q.add_constant(std::log1p(s.gamma) - s.gamma);
    q.add_real(model.forms.front(), 2.0 * std::conj(s.values.front()) / s.interference, offset);
    q.add_constant(-s.gamma * model.noise / s.total);
    for (const auto &w : model.forms)
        q.subtract_modulus_squared(w, s.gamma / s.total, offset);
    return q;
}

QuadraticForm negated_penalty_bound(const RateModel &model, const VectorXcd &z_bar, Index dim, Index offset)
{
    const SurrogateCoefficients s = surrogate_coefficients(model, z_bar);
    const double c = model.penalty;
    const double root = std::sqrt(s.V);
    QuadraticForm q(dim);
    q.add_constant(-c * (root / 2.0 + 1.0 / root));
    const double kappa = 2.0 * c / root / s.total;
    q.add_constant(kappa * model.noise);
    for (std::size_t v = 1; v < model.forms.size(); ++v)
        q.add_real(model.forms[v], kappa * std::conj(s.values[v]), offset);
    const double weight = c * s.zeta / root / s.total;
    q.add_constant(-weight * model.noise);
    for (const auto &w : model.forms)
        q.subtract_modulus_squared(w, weight, offset);
    return q;
}

QuadraticForm linearized_signal(const RateModel &model, const VectorXcd &z_bar, Index dim, Index offset)
{
    const cd u_bar = model.forms.front().evaluate(z_bar);
    QuadraticForm q(dim);
    q.add_real(model.forms.front(), 2.0 * std::conj(u_bar), offset);
    q.add_constant(-std::norm(u_bar));
    return q;
}

QuadraticForm negated_interference(const RateModel &model, Index dim, Index offset)
{
    QuadraticForm q(dim);
    q.add_constant(-model.noise);
    for (std::size_t v = 1; v < model.forms.size(); ++v)
        q.subtract_modulus_squared(model.forms[v], 1.0, offset);
    return q;
}

double ineq_sqrt_upper(double x, double x_bar)
{
    require(x_bar > 0.0, "ineq_sqrt_upper: expansion point must be positive");
    const double r = std::sqrt(x_bar);
    return r / 2.0 + x / (2.0 * r);
}

double ineq_ratio_lower(cd x, double y, cd x_bar, double y_bar)
{
    require(y_bar > 0.0, "ineq_ratio_lower: expansion denominator must be positive");
    return 2.0 * (std::conj(x_bar) * x).real() / y_bar - std::norm(x_bar) * y / (y_bar * y_bar);
}

double ineq_log_lower(cd x, double y, cd x_bar, double y_bar)
{
    require(y_bar > 0.0, "ineq_log_lower: expansion denominator must be positive");
    const double g = std::norm(x_bar) / y_bar;
    return std::log1p(g) - g + 2.0 * (std::conj(x_bar) * x).real() / y_bar -
           g * (std::norm(x) + y) / (std::norm(x_bar) + y_bar);
}

VectorXcd pack_beams(const BeamformingSet &beams)
{
    const Index n = beams.x.empty() ? 0 : beams.x.front().size();
    VectorXcd z(n * beams.users());
    for (int u = 0; u < beams.users(); ++u)
        z.segment(u * n, n) = beams.x[static_cast<std::size_t>(u)];
    return z;
}

BeamformingSet unpack_beams(const VectorXcd &z, int users, int n_bs)
{
    require(z.size() == static_cast<Index>(users) * n_bs, "unpack_beams: size mismatch");
    BeamformingSet b;
    b.x.resize(static_cast<std::size_t>(users));
    for (int u = 0; u < users; ++u)
        b.x[static_cast<std::size_t>(u)] = z.segment(static_cast<Index>(u) * n_bs, n_bs);
    return b;
}

RateModel beam_rate_model(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris,
                          int u, const FblParams &fbl)
{
    const int N = topology.bs_antennas;
    std::vector<RowVectorXcd> h(static_cast<std::size_t>(topology.cells));
    for (int i = 0; i < topology.cells; ++i)
        h[static_cast<std::size_t>(i)] = effective_channel(channels, ris, u, i);

    RateModel model;
    model.noise = topology.noise_power;
    model.penalty = fbl.penalty();
    model.share = ris.slot_share(u);
    auto form_for = [&](int v) {
        ComplexAffine w;
        const auto &hv = h[static_cast<std::size_t>(topology.serving_cell(v))];
        for (int n = 0; n < N; ++n)
            w.terms.emplace_back(static_cast<Index>(v) * N + n, hv[n]);
        return w;
    };
    model.forms.push_back(form_for(u));
    for (int v = 0; v < topology.users(); ++v)
        if (v != u && ris.slot(v) == ris.slot(u))
            model.forms.push_back(form_for(v));
    return model;
}

Index ThetaLayout::find(CoefficientPart part, int m, int n) const
{
    if (part == CoefficientPart::None)
        return -1;
    const int p = part == CoefficientPart::Reflect ? 0 : 1;
    return index[static_cast<std::size_t>((p * ris_count + m) * elements + n)];
}

ThetaLayout theta_layout(const RisState &ris)
{
    ThetaLayout layout;
    layout.ris_count = ris.ris_count();
    layout.elements = ris.elements();
    layout.index.assign(static_cast<std::size_t>(2 * layout.ris_count * layout.elements), -1);
    const bool star = ris.mode != RisMode::Regular;
    for (int p = 0; p < (star ? 2 : 1); ++p)
    {
        const CoefficientPart part = p == 0 ? CoefficientPart::Reflect : CoefficientPart::Transmit;
        for (int m = 0; m < layout.ris_count; ++m)
            for (int n = 0; n < layout.elements; ++n)
            {
                if (ris.mode == RisMode::StarMS &&
                    ris.ms_reflect[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)] != (p == 0))
                    continue;
                layout.index[static_cast<std::size_t>((p * layout.ris_count + m) * layout.elements + n)] =
                    layout.size();
                layout.entries.push_back({part, m, n});
            }
    }
    return layout;
}

VectorXcd pack_theta(const ThetaLayout &layout, const RisState &ris)
{
    VectorXcd z(layout.size());
    for (Index k = 0; k < layout.size(); ++k)
    {
        const auto &e = layout.entries[static_cast<std::size_t>(k)];
        z[k] = ris.coefficients(e.part, e.ris)[e.element];
    }
    return z;
}

RisState unpack_theta(const ThetaLayout &layout, const RisState &ris, const VectorXcd &z)
{
    require(z.size() == layout.size(), "unpack_theta: size mismatch");
    RisState out = ris;
    for (Index k = 0; k < layout.size(); ++k)
    {
        const auto &e = layout.entries[static_cast<std::size_t>(k)];
        out.coefficients(e.part, e.ris)[e.element] = z[k];
    }
    return out;
}

RateModel theta_rate_model(const NetworkTopology &topology, const ChannelSet &channels, const RisState &ris,
                           const BeamformingSet &beams, const ThetaLayout &layout, int u, const FblParams &fbl)
{
    RateModel model;
    model.noise = topology.noise_power;
    model.penalty = fbl.penalty();
    model.share = ris.slot_share(u);
    auto form_for = [&](int v) {
        const int bs = topology.serving_cell(v);
        const VectorXcd &x = beams.x[static_cast<std::size_t>(v)];
        ComplexAffine w;
        w.constant = (channels.d(u, bs) * x).value();
        for (int m = 0; m < topology.ris_count; ++m)
        {
            const CoefficientPart p = ris.part(u, m);
            if (p == CoefficientPart::None)
                continue;
            const VectorXcd g = channels.G(m, bs) * x;
            const RowVectorXcd &f = channels.f(u, m);
            const VectorXcd &theta = ris.coefficients(p, m);
            for (int n = 0; n < topology.ris_elements; ++n)
            {
                const cd coef = f[n] * g[n];
                const Index k = layout.find(p, m, n);
                if (k >= 0)
                    w.terms.emplace_back(k, coef);
                else
                    w.constant += coef * theta[n];
            }
        }
        return w;
    };
    model.forms.push_back(form_for(u));
    for (int v = 0; v < topology.users(); ++v)
        if (v != u && ris.slot(v) == ris.slot(u))
            model.forms.push_back(form_for(v));
    return model;
}

} // namespace fblris
