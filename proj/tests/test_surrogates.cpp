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


#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fblris/ris.hpp"
#include "fblris/surrogates.hpp"
#include "helpers.hpp"

using namespace fblris;

namespace
{

struct Case
{
    RateModel model;
    VectorXcd z_bar;
};

// Beam and RIS rate models for every user of a few random networks.
std::vector<Case> collect_cases()
{
    std::vector<Case> out;
    const FblParams fbl = FblParams::make(200.0, 1e-3);
    for (std::uint64_t seed = 0; seed < 3; ++seed)
    {
        const bool star = seed == 2;
        const NetworkTopology t = testing::small_topology(seed, star);
        const ChannelSet ch = generate_channels(t, PropagationParams{}, seed);
        std::mt19937_64 rng(seed);
        const BeamformingSet beams = testing::random_beams(t, rng);
        const RisState ris = star ? make_ris_state(t, RisMode::StarTS, FeasibilitySet::TSI, {}, seed)
                                  : random_ris(t, seed);
        const ThetaLayout layout = theta_layout(ris);
        for (int u = 0; u < t.users(); ++u)
        {
            out.push_back({beam_rate_model(t, ch, ris, u, fbl), pack_beams(beams)});
            out.push_back({theta_rate_model(t, ch, ris, beams, layout, u, fbl), pack_theta(layout, ris)});
        }
    }
    return out;
}

double surrogate_at(const QuadraticForm &q, const VectorXcd &z)
{
    return q.value(embed(z));
}

} // namespace

TEST_CASE("rate surrogate touches the rate at the expansion point")
{
    for (const Case &c : collect_cases())
    {
        const Index dim = 2 * c.z_bar.size();
        const QuadraticForm q = rate_surrogate(c.model, c.z_bar, dim);
        CHECK(std::abs(surrogate_at(q, c.z_bar) - model_rate(c.model, c.z_bar)) <= 1e-9);
    }
}

TEST_CASE("rate surrogate is a global lower bound")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> scale(-3.0, 1.0);
    int violations = 0;
    for (const Case &c : collect_cases())
    {
        const Index dim = 2 * c.z_bar.size();
        const QuadraticForm q = rate_surrogate(c.model, c.z_bar, dim);
        const double norm = std::max(c.z_bar.norm(), 1e-3);
        for (int i = 0; i < 1000; ++i)
        {
            const VectorXcd z =
                c.z_bar + testing::random_complex(c.z_bar.size(), rng, norm * std::pow(10.0, scale(rng)));
            if (surrogate_at(q, z) > model_rate(c.model, z) + 1e-9)
                ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("rate surrogate is tangent at the expansion point")
{
    for (const Case &c : collect_cases())
    {
        const Index dim = 2 * c.z_bar.size();
        const QuadraticForm q = rate_surrogate(c.model, c.z_bar, dim);
        const VectorXd v = embed(c.z_bar);
        const VectorXd g = q.gradient(v);
        VectorXd fd(dim);
        const double h = 1e-6 * std::max(1.0, v.norm());
        for (Index i = 0; i < dim; ++i)
        {
            VectorXd p = v, m = v;
            p[i] += h;
            m[i] -= h;
            fd[i] = (model_rate(c.model, extract(p, 0, dim / 2)) - model_rate(c.model, extract(m, 0, dim / 2))) /
                    (2.0 * h);
        }
        CHECK((g - fd).norm() <= 1e-4 * std::max(fd.norm(), 1e-8));
    }
}

TEST_CASE("rate surrogate is concave")
{
    for (const Case &c : collect_cases())
    {
        const QuadraticForm q = rate_surrogate(c.model, c.z_bar, 2 * c.z_bar.size());
        const Eigen::MatrixXd P(q.curvature());
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(P);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * std::max(1.0, eig.eigenvalues().maxCoeff()));
    }
}

TEST_CASE("surrogate halves assemble into the rate surrogate")
{
    std::mt19937_64 rng(7);
    for (const Case &c : collect_cases())
    {
        const Index dim = 2 * c.z_bar.size();
        const QuadraticForm q = rate_surrogate(c.model, c.z_bar, dim);
        const QuadraticForm s = shannon_lower_bound(c.model, c.z_bar, dim);
        const QuadraticForm p = negated_penalty_bound(c.model, c.z_bar, dim);
        for (int i = 0; i < 20; ++i)
        {
            const VectorXd v = embed(c.z_bar + testing::random_complex(c.z_bar.size(), rng, 0.1));
            const double assembled = (s.value(v) + p.value(v)) * c.model.share / std::numbers::ln2;
            CHECK(std::abs(q.value(v) - assembled) <= 1e-10 * std::max(1.0, std::abs(assembled)));
        }
    }
}

TEST_CASE("surrogate halves bound their own terms")
{
    std::mt19937_64 rng(9);
    for (const Case &c : collect_cases())
    {
        const Index dim = 2 * c.z_bar.size();
        const QuadraticForm s = shannon_lower_bound(c.model, c.z_bar, dim);
        const QuadraticForm p = negated_penalty_bound(c.model, c.z_bar, dim);
        for (int i = 0; i < 200; ++i)
        {
            const VectorXcd z = c.z_bar + testing::random_complex(c.z_bar.size(), rng, 0.5 * c.z_bar.norm());
            const double g = model_sinr(c.model, z);
            CHECK(s.value(embed(z)) <= std::log1p(g) + 1e-10);
            CHECK(p.value(embed(z)) <= -c.model.penalty * std::sqrt(dispersion(g)) + 1e-10);
        }
    }
}

TEST_CASE("linearized signal and interference forms")
{
    for (const Case &c : collect_cases())
    {
        const Index dim = 2 * c.z_bar.size();
        const QuadraticForm l = linearized_signal(c.model, c.z_bar, dim);
        const QuadraticForm n = negated_interference(c.model, dim);
        const double signal = std::norm(c.model.forms.front().evaluate(c.z_bar));
        CHECK(l.value(embed(c.z_bar)) == doctest::Approx(signal).epsilon(1e-12));
        const double g = model_sinr(c.model, c.z_bar);
        CHECK(signal / -n.value(embed(c.z_bar)) == doctest::Approx(g).epsilon(1e-12));
        CHECK(l.is_affine());
    }
}

TEST_CASE("elementary bounds on worked examples")
{
    CHECK(ineq_sqrt_upper(4.0, 1.0) == doctest::Approx(2.5));
    CHECK(ineq_sqrt_upper(9.0, 9.0) == doctest::Approx(3.0));
    CHECK(ineq_ratio_lower(cd(2.0, 0.0), 1.0, cd(2.0, 0.0), 1.0) == doctest::Approx(4.0));
    CHECK(ineq_ratio_lower(cd(0.0, 0.0), 1.0, cd(1.0, 0.0), 1.0) == doctest::Approx(-1.0));
    CHECK(ineq_log_lower(cd(1.0, 1.0), 2.0, cd(1.0, 1.0), 2.0) == doctest::Approx(std::log(2.0)));
    CHECK_THROWS_AS(ineq_sqrt_upper(1.0, 0.0), Error);
    CHECK_THROWS_AS(ineq_ratio_lower(cd(1.0), 1.0, cd(1.0), -1.0), Error);
}

TEST_CASE("elementary bounds hold on random samples")
{
    std::mt19937_64 rng(2026);
    std::normal_distribution<double> n(0.0, 1.0);
    int violations = 0;
    for (int i = 0; i < 10000; ++i)
    {
        const double x = std::exp(2.0 * n(rng)), xb = std::exp(2.0 * n(rng));
        const cd u(n(rng), n(rng)), ub(n(rng), n(rng));
        const double y = std::exp(n(rng)), yb = std::exp(n(rng));
        auto tol = [](double a, double b) { return 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); };

        const double s = std::sqrt(x), su = ineq_sqrt_upper(x, xb);
        violations += s > su + tol(s, su);
        const double r = std::norm(u) / y, rl = ineq_ratio_lower(u, y, ub, yb);
        violations += r < rl - tol(r, rl);
        const double l = std::log1p(std::norm(u) / y), ll = ineq_log_lower(u, y, ub, yb);
        violations += l < ll - tol(l, ll);
    }
    CHECK(violations == 0);
}

TEST_CASE("beam and coefficient packing round-trips")
{
    const NetworkTopology t = testing::small_topology(3, true);
    std::mt19937_64 rng(3);
    const BeamformingSet b = testing::random_beams(t, rng);
    CHECK(unpack_beams(pack_beams(b), t.users(), t.bs_antennas) == b);

    const RisState ris = make_ris_state(t, RisMode::StarMS, FeasibilitySet::TSI, {}, 5);
    const ThetaLayout layout = theta_layout(ris);
    // Mode switching keeps exactly one active part per element.
    CHECK(layout.size() == ris.ris_count() * ris.elements());
    const VectorXcd z = pack_theta(layout, ris);
    CHECK(unpack_theta(layout, ris, z) == ris);
    const VectorXcd w = testing::random_complex(layout.size(), rng);
    CHECK(pack_theta(layout, unpack_theta(layout, ris, w)) == w);
}
