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
#include <random>
#include <sstream>

#include "fblris/convex.hpp"

using namespace fblris;

namespace
{

// 1 - |v|^2 >= 0 over the first `count` coordinates.
QuadraticForm unit_ball(Index dim, Index count)
{
    QuadraticForm q(dim);
    q.add_constant(1.0);
    for (Index i = 0; i < count; ++i)
        q.subtract_square({{i, 1.0}}, 0.0, 1.0);
    return q;
}

// scale * v_i + offset >= 0
QuadraticForm halfspace(Index dim, Index i, double scale, double offset)
{
    QuadraticForm q(dim);
    q.add_linear(i, scale);
    q.add_constant(offset);
    return q;
}

} // namespace

TEST_CASE("negated squared distance projects onto the ball")
{
    ConvexSubproblem p;
    p.objective = QuadraticForm(3);
    const VectorXd c = (VectorXd(3) << 2.0, -1.0, 0.5).finished();
    for (Index i = 0; i < 3; ++i)
        p.objective.subtract_square({{i, 1.0}}, -c[i], 1.0);
    p.constraints = {unit_ball(3, 3)};
    p.start = VectorXd::Zero(3);
    const SolveResult r = solve(p);
    CHECK(r.status == SolveStatus::Optimal);
    CHECK((r.v - c / c.norm()).norm() <= 1e-5);
    CHECK(r.objective == doctest::Approx(-(c.norm() - 1.0) * (c.norm() - 1.0)).epsilon(1e-6));
    CHECK(r.kkt_residual <= 1e-6);
}

TEST_CASE("interior optimum of the negated squared norm")
{
    ConvexSubproblem p;
    p.objective = QuadraticForm(2);
    p.objective.subtract_square({{0, 1.0}}, 0.0, 1.0);
    p.objective.subtract_square({{1, 1.0}}, 0.0, 1.0);
    p.constraints = {unit_ball(2, 2)};
    p.start = (VectorXd(2) << 0.5, -0.3).finished();
    const SolveResult r = solve(p);
    CHECK(r.status == SolveStatus::Optimal);
    CHECK(r.v.norm() <= 1e-4);
    CHECK(r.objective >= -1e-7);
}

TEST_CASE("linear objective over the ball attains the Cauchy-Schwarz bound")
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial)
    {
        const Index dim = 2 + trial % 5;
        VectorXd a(dim);
        for (Index i = 0; i < dim; ++i)
            a[i] = n(rng);
        ConvexSubproblem p;
        p.objective = QuadraticForm(dim);
        for (Index i = 0; i < dim; ++i)
            p.objective.add_linear(i, a[i]);
        p.constraints = {unit_ball(dim, dim)};
        p.start = VectorXd::Zero(dim);
        const SolveResult r = solve(p);
        CHECK(r.status == SolveStatus::Optimal);
        CHECK(r.objective == doctest::Approx(a.norm()).epsilon(1e-6));
        CHECK((r.v - a / a.norm()).norm() <= 1e-4);
    }
}

TEST_CASE("two-variable problems agree with a dense grid search")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 4; ++trial)
    {
        const double cx = 1.5 * u(rng), cy = 1.5 * u(rng), g0 = u(rng), g1 = u(rng), cut = 0.4 * u(rng);
        ConvexSubproblem p;
        p.objective = QuadraticForm(2);
        p.objective.subtract_square({{0, 1.0}, {1, 0.5}}, -cx, 1.0);
        p.objective.subtract_square({{1, 1.0}}, -cy, 0.5);
        p.objective.add_linear(0, g0);
        p.objective.add_linear(1, g1);
        p.constraints = {unit_ball(2, 2), halfspace(2, 0, -1.0, 0.5 + cut)};
        p.start = (VectorXd(2) << std::min(0.0, cut), 0.0).finished();
        const SolveResult r = solve(p);
        REQUIRE(r.status == SolveStatus::Optimal);

        const int steps = 400;
        const double h = 2.0 / steps;
        double best = -1e300;
        for (int i = 0; i <= steps; ++i)
            for (int j = 0; j <= steps; ++j)
            {
                const VectorXd v = (VectorXd(2) << -1.0 + i * h, -1.0 + j * h).finished();
                if (p.constraints[0].value(v) >= 0.0 && p.constraints[1].value(v) >= 0.0)
                    best = std::max(best, p.objective.value(v));
            }
        // The grid is a feasible inner sample: the solver may beat it by at most the grid slack.
        CHECK(r.objective >= best - 1e-7);
        CHECK(r.objective <= best + 20.0 * h);
    }
}

TEST_CASE("infeasible constraint sets are reported")
{
    ConvexSubproblem p;
    p.objective = QuadraticForm(2);
    p.objective.add_linear(0, 1.0);
    p.constraints = {unit_ball(2, 2), halfspace(2, 0, 1.0, -2.0)};
    p.start = VectorXd::Zero(2);
    const SolveResult r = solve(p);
    CHECK(r.status == SolveStatus::Infeasible);
    CHECK(r.infeasibility > 0.0);
}

TEST_CASE("dimension mismatches are rejected")
{
    ConvexSubproblem p;
    p.objective = QuadraticForm(2);
    p.constraints = {unit_ball(3, 3)};
    p.start = VectorXd::Zero(2);
    CHECK_THROWS_AS(solve(p), Error);
    p.constraints.clear();
    p.start = VectorXd::Zero(4);
    CHECK_THROWS_AS(solve(p), Error);
}

TEST_CASE("Dinkelbach on x / (1 + x) over [0, 1]")
{
    FractionalProgram f;
    f.numerator = QuadraticForm(1);
    f.numerator.add_linear(0, 1.0);
    f.negated_denominator = QuadraticForm(1);
    f.negated_denominator.add_linear(0, -1.0);
    f.negated_denominator.add_constant(-1.0);
    f.constraints = {halfspace(1, 0, 1.0, 0.0), halfspace(1, 0, -1.0, 1.0)};
    f.start = VectorXd::Constant(1, 0.5);
    const DinkelbachResult r = dinkelbach(f);
    CHECK(r.converged);
    CHECK(r.mu == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.result.v[0] == doctest::Approx(1.0).epsilon(1e-5));
    for (std::size_t i = 1; i < r.mu_history.size(); ++i)
        CHECK(r.mu_history[i] >= r.mu_history[i - 1] - 1e-12);
}

TEST_CASE("Dinkelbach with a constant denominator solves the scaled problem")
{
    FractionalProgram f;
    f.numerator = QuadraticForm(1);
    f.numerator.add_constant(3.0);
    f.numerator.subtract_square({{0, 1.0}}, -1.0, 1.0);
    f.negated_denominator = QuadraticForm(1);
    f.negated_denominator.add_constant(-2.0);
    f.constraints = {halfspace(1, 0, -1.0, 5.0)};
    f.start = VectorXd::Zero(1);
    const DinkelbachResult r = dinkelbach(f);
    CHECK(r.converged);
    CHECK(r.mu == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(r.result.v[0] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("Dinkelbach rejects non-positive denominators")
{
    FractionalProgram f;
    f.numerator = QuadraticForm(1);
    f.negated_denominator = QuadraticForm(1);
    f.negated_denominator.add_constant(1.0);
    f.start = VectorXd::Zero(1);
    CHECK_THROWS_AS(dinkelbach(f), Error);
}

TEST_CASE("generalized Dinkelbach with one ratio matches Dinkelbach")
{
    MinRatioProgram g;
    g.numerators = {QuadraticForm(1)};
    g.numerators[0].add_linear(0, 1.0);
    g.negated_denominators = {QuadraticForm(1)};
    g.negated_denominators[0].add_linear(0, -1.0);
    g.negated_denominators[0].add_constant(-1.0);
    g.constraints = {halfspace(1, 0, 1.0, 0.0), halfspace(1, 0, -1.0, 1.0)};
    g.start = VectorXd::Constant(1, 0.5);
    const DinkelbachResult r = generalized_dinkelbach(g);
    CHECK(r.converged);
    CHECK(r.mu == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.result.v.size() == 1);
}

namespace
{

// min(v0 / (1 + v1), v1 / (1 + v0)) over v >= 0, v0 + v1 <= 2.
MinRatioProgram symmetric_program()
{
    MinRatioProgram g;
    for (Index i = 0; i < 2; ++i)
    {
        QuadraticForm num(2), den(2);
        num.add_linear(i, 1.0);
        den.add_linear(1 - i, -1.0);
        den.add_constant(-1.0);
        g.numerators.push_back(num);
        g.negated_denominators.push_back(den);
    }
    QuadraticForm sum(2);
    sum.add_constant(2.0);
    sum.add_linear(0, -1.0);
    sum.add_linear(1, -1.0);
    g.constraints = {halfspace(2, 0, 1.0, 0.0), halfspace(2, 1, 1.0, 0.0), sum};
    g.start = (VectorXd(2) << 0.2, 0.6).finished();
    return g;
}

} // namespace

TEST_CASE("generalized Dinkelbach balances symmetric ratios")
{
    const DinkelbachResult r = generalized_dinkelbach(symmetric_program());
    CHECK(r.converged);
    CHECK(r.mu == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(r.result.v[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.result.v[1] == doctest::Approx(1.0).epsilon(1e-3));
    for (std::size_t i = 1; i < r.mu_history.size(); ++i)
        CHECK(r.mu_history[i] >= r.mu_history[i - 1] - 1e-12);
}

TEST_CASE("generalized Dinkelbach is invariant to common ratio scaling")
{
    MinRatioProgram g = symmetric_program();
    const DinkelbachResult base = generalized_dinkelbach(g);
    for (std::size_t k = 0; k < 2; ++k)
    {
        QuadraticForm num(2), den(2);
        num.add_scaled(g.numerators[k], 3.0);
        den.add_scaled(g.negated_denominators[k], 3.0);
        g.numerators[k] = num;
        g.negated_denominators[k] = den;
    }
    const DinkelbachResult scaled = generalized_dinkelbach(g);
    CHECK(scaled.mu == doctest::Approx(base.mu).epsilon(1e-6));

    // Weights divide the ratios: doubling both halves the optimum.
    g.weights = {2.0, 2.0};
    CHECK(generalized_dinkelbach(g).mu == doctest::Approx(base.mu / 2.0).epsilon(1e-6));
}

TEST_CASE("problem dumps are deterministic and complete")
{
    ConvexSubproblem p;
    p.objective = QuadraticForm(2);
    p.objective.add_linear(0, 1.0);
    p.objective.subtract_square({{1, 1.0}}, 0.25, 2.0);
    p.constraints = {unit_ball(2, 2)};
    p.start = VectorXd::Zero(2);
    std::ostringstream a, b;
    write_problem(a, p);
    write_problem(b, p);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("fblris-qcqp 1\ndim 2\nconstraints 1\n", 0) == 0);
    CHECK(a.str().find("\nend\n") != std::string::npos);
}
