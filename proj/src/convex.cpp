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

#include "fblris/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <functional>

namespace fblris
{

const char *to_string(SolveStatus status)
{
    switch (status)
    {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::Infeasible: return "Infeasible";
    }
    return "?";
}

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

void add_sparse(MatrixXd &H, const SparseMatrix &P, double scale)
{
    for (int k = 0; k < P.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(P, k); it; ++it)
            H(it.row(), it.col()) += scale * it.value();
}

// Largest alpha keeping a concave quadratic constraint non-negative along d.
double primal_step(const QuadraticForm &q, double f, const VectorXd &grad, const VectorXd &d)
{
    const double c1 = grad.dot(d);
    const double c2 = -d.dot(q.curvature() * d);
    if (c2 > -1e-300)
        return c1 >= 0.0 ? kInf : -f / c1;
    return 2.0 * f / (-c1 + std::sqrt(c1 * c1 - 4.0 * c2 * f));
}

double dual_step(const VectorXd &lambda, const VectorXd &dlambda)
{
    double alpha = kInf;
    for (Index i = 0; i < lambda.size(); ++i)
        if (dlambda[i] < 0.0)
            alpha = std::min(alpha, -lambda[i] / dlambda[i]);
    return alpha;
}

// Primal-dual interior point from a strictly feasible start.
SolveResult interior_point(const QuadraticForm &objective, const std::vector<QuadraticForm> &constraints,
                           const VectorXd &start, const SolveOptions &options,
                           const std::function<bool(const VectorXd &, double)> &good_enough = {})
{
    const Index n = objective.dim();
    const Index m = static_cast<Index>(constraints.size());
    VectorXd v = start;
    VectorXd f(m);
    MatrixXd G(n, m);
    for (Index i = 0; i < m; ++i)
        f[i] = constraints[static_cast<std::size_t>(i)].value(v);
    VectorXd lambda = f.cwiseInverse();

    SolveResult res;
    res.status = SolveStatus::MaxIter;
    for (int iter = 0;; ++iter)
    {
        for (Index i = 0; i < m; ++i)
            G.col(i) = constraints[static_cast<std::size_t>(i)].gradient(v);
        const VectorXd r_dual = -objective.gradient(v) - G * lambda;
        const VectorXd comp = lambda.cwiseProduct(f);

        res.iterations = iter;
        res.stationarity = r_dual.lpNorm<Eigen::Infinity>();
        res.complementarity = m > 0 ? comp.maxCoeff() : 0.0;
        res.infeasibility = m > 0 ? std::max(0.0, -f.minCoeff()) : 0.0;
        res.kkt_residual = std::max({res.stationarity, res.complementarity, res.infeasibility});
        if (res.kkt_residual <= options.tol)
        {
            res.status = SolveStatus::Optimal;
            break;
        }
        if (iter >= options.max_iter || !std::isfinite(res.kkt_residual))
            break;
        if (good_enough && good_enough(v, res.kkt_residual))
            break;

        MatrixXd H = MatrixXd::Zero(n, n);
        add_sparse(H, objective.curvature(), 2.0);
        for (Index i = 0; i < m; ++i)
            if (!constraints[static_cast<std::size_t>(i)].is_affine())
                add_sparse(H, constraints[static_cast<std::size_t>(i)].curvature(), 2.0 * lambda[i]);
        H.noalias() += G * (lambda.cwiseQuotient(f)).asDiagonal() * G.transpose();

        Eigen::LDLT<MatrixXd> ldlt(H);
        double reg = 0.0;
        const double scale = std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
        while (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
               (ldlt.vectorD().array() <= 1e-14 * scale).any())
        {
            reg = reg == 0.0 ? 1e-12 * scale : reg * 10.0;
            if (reg > 1e-2 * scale)
                break;
            ldlt.compute(H + reg * MatrixXd::Identity(n, n));
        }

        auto direction = [&](const VectorXd &rc, VectorXd &dv, VectorXd &dl) {
            const VectorXd rhs = -r_dual - G * rc.cwiseQuotient(f);
            dv = ldlt.solve(rhs);
            dl = (-rc - lambda.cwiseProduct(G.transpose() * dv)).cwiseQuotient(f);
        };
        auto max_primal = [&](const VectorXd &dv) {
            double alpha = kInf;
            for (Index i = 0; i < m; ++i)
                alpha = std::min(alpha, primal_step(constraints[static_cast<std::size_t>(i)], f[i], G.col(i), dv));
            return alpha;
        };

        VectorXd dv, dl;
        if (m == 0)
        {
            direction(VectorXd::Zero(0), dv, dl);
            v += dv;
            continue;
        }
        direction(comp, dv, dl);
        const double alpha_aff = std::min({1.0, max_primal(dv), dual_step(lambda, dl)});
        double eta_aff = 0.0;
        const VectorXd v_aff = v + alpha_aff * dv;
        for (Index i = 0; i < m; ++i)
            eta_aff += (lambda[i] + alpha_aff * dl[i]) *
                       std::max(0.0, constraints[static_cast<std::size_t>(i)].value(v_aff));
        const double eta = comp.sum();
        const double sigma = std::max(options.min_centering, std::pow(std::clamp(eta_aff / eta, 0.0, 1.0), 3));
        // Keep the barrier parameter from outrunning dual feasibility.
        const double mean = eta / static_cast<double>(m);
        const double target = std::max(sigma * mean, std::min(mean, 0.1 * res.stationarity));

        const VectorXd rc = comp + dl.cwiseProduct(G.transpose() * dv) - VectorXd::Constant(m, target);
        direction(rc, dv, dl);
        double alpha = std::min({1.0, options.step_fraction * max_primal(dv),
                                 options.step_fraction * dual_step(lambda, dl)});

        auto residual_norm = [&](const VectorXd &vv, const VectorXd &ff, const VectorXd &ll) {
            VectorXd grad = -objective.gradient(vv);
            for (Index i = 0; i < m; ++i)
                grad -= ll[i] * constraints[static_cast<std::size_t>(i)].gradient(vv);
            return std::sqrt(grad.squaredNorm() +
                             (ll.cwiseProduct(ff) - VectorXd::Constant(m, target)).squaredNorm());
        };
        const double r0 = std::sqrt(r_dual.squaredNorm() + (comp - VectorXd::Constant(m, target)).squaredNorm());

        VectorXd v_next, f_next(m), l_next;
        for (int shrink = 0;; ++shrink)
        {
            v_next = v + alpha * dv;
            l_next = lambda + alpha * dl;
            bool ok = true;
            for (Index i = 0; i < m && ok; ++i)
            {
                f_next[i] = constraints[static_cast<std::size_t>(i)].value(v_next);
                ok = f_next[i] > 0.0;
            }
            if (ok && (l_next.cwiseProduct(f_next) - 0.1 * comp.cwiseMin(target)).minCoeff() >= 0.0 &&
                residual_norm(v_next, f_next, l_next) <= (1.0 - 0.01 * alpha) * r0)
                break;
            alpha *= 0.5;
            if (shrink > 60)
            {
                alpha = 0.0;
                break;
            }
        }
        if (alpha == 0.0)
            break;
        v = v_next;
        f = f_next;
        lambda = l_next.cwiseMax(1e-300);
    }
    res.v = v;
    res.multipliers = lambda;
    res.objective = objective.value(v);
    return res;
}

// Runs the interior point on the objective divided by its gradient max-norm at
// the start, so that positive rescaling of the objective leaves the iterates unchanged.
// The stopping tolerance is tightened so that it holds in the original units.
SolveResult normalized_interior_point(const QuadraticForm &objective, const std::vector<QuadraticForm> &constraints,
                                      const VectorXd &start, const SolveOptions &options)
{
    const double g = objective.gradient(start).lpNorm<Eigen::Infinity>();
    if (!(g > 0.0) || !std::isfinite(g))
        return interior_point(objective, constraints, start, options);
    QuadraticForm scaled(objective.dim());
    scaled.add_scaled(objective, 1.0 / g);
    SolveOptions tightened = options;
    tightened.tol = options.tol / std::max(1.0, g);
    SolveResult res = interior_point(scaled, constraints, start, tightened);
    res.objective = objective.value(res.v);
    res.multipliers *= g;
    res.stationarity *= g;
    res.complementarity *= g;
    res.kkt_residual = std::max({res.stationarity, res.complementarity, res.infeasibility});
    return res;
}

} // namespace

SolveResult solve(const ConvexSubproblem &problem, const SolveOptions &options)
{
    const Index n = problem.dim();
    require(problem.start.size() == n, "solve: start vector has the wrong dimension");
    for (const auto &c : problem.constraints)
        require(c.dim() == n, "solve: constraint dimension mismatch");

    double worst = kInf;
    for (const auto &c : problem.constraints)
        worst = std::min(worst, c.value(problem.start));
    if (worst > 0.0)
        return normalized_interior_point(problem.objective, problem.constraints, problem.start, options);

    // Phase 1: minimize a common slack s, with s >= -1 and a wide ball around the start.
    std::vector<QuadraticForm> shifted;
    shifted.reserve(problem.constraints.size() + 2);
    for (const auto &c : problem.constraints)
    {
        shifted.push_back(c.resized(n + 1));
        shifted.back().add_linear(n, 1.0);
    }
    QuadraticForm floor(n + 1);
    floor.add_constant(1.0);
    floor.add_linear(n, 1.0);
    shifted.push_back(floor);
    const double radius = 1e3 * (1.0 + problem.start.norm());
    QuadraticForm ball(n + 1);
    ball.add_constant(radius * radius);
    for (Index j = 0; j < n; ++j)
        ball.subtract_square({{j, 1.0}}, -problem.start[j], 1.0);
    shifted.push_back(ball);

    QuadraticForm slack(n + 1);
    slack.add_linear(n, -1.0);
    VectorXd start(n + 1);
    start << problem.start, std::max(0.0, -worst) + 1.0;
    SolveOptions phase1 = options;
    phase1.max_iter = 2 * options.max_iter;
    const SolveResult first = interior_point(slack, shifted, start, phase1, [n](const VectorXd &v, double kkt) {
        return v[n] < -1e-10 && kkt <= 1e-4;
    });
    const double s = first.v[n];
    if (!(s < -1e-10))
    {
        SolveResult res = first;
        res.v = problem.start;
        res.status = SolveStatus::Infeasible;
        res.objective = problem.objective.value(problem.start);
        res.infeasibility = std::max(0.0, s);
        res.kkt_residual = kInf;
        return res;
    }
    SolveResult res = normalized_interior_point(problem.objective, problem.constraints, first.v.head(n), options);
    res.iterations += first.iterations;
    return res;
}

namespace
{

void write_form(std::ostream &out, const char *label, const QuadraticForm &q)
{
    out << label << "\n";
    out << "constant " << q.constant() << "\n";
    out << "linear";
    for (Index i = 0; i < q.dim(); ++i)
        out << ' ' << q.linear()[i];
    out << "\n";
    const SparseMatrix &P = q.curvature();
    out << "curvature " << P.nonZeros() << "\n";
    for (int k = 0; k < P.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(P, k); it; ++it)
            out << it.row() << ' ' << it.col() << ' ' << it.value() << "\n";
}

} // namespace

void write_problem(std::ostream &out, const ConvexSubproblem &problem)
{
    const auto precision = out.precision(17);
    out << "fblris-qcqp 1\n";
    out << "dim " << problem.dim() << "\n";
    out << "constraints " << problem.constraints.size() << "\n";
    write_form(out, "objective", problem.objective);
    for (const auto &c : problem.constraints)
        write_form(out, "constraint", c);
    out << "start";
    for (Index i = 0; i < problem.start.size(); ++i)
        out << ' ' << problem.start[i];
    out << "\nend\n";
    out.precision(precision);
}

DinkelbachResult dinkelbach(const FractionalProgram &program, const DinkelbachOptions &options)
{
    const auto ratio_at = [&](const VectorXd &v, double &num, double &den) {
        num = program.numerator.value(v);
        den = -program.negated_denominator.value(v);
        if (!(den > 0.0))
            fail(ErrorCode::InvalidArgument, "dinkelbach: denominator must be positive");
        return num / den;
    };

    double num, den;
    DinkelbachResult out;
    out.mu = std::max(0.0, ratio_at(program.start, num, den));
    double best_ratio = -kInf;
    VectorXd v = program.start;
    for (int q = 0; q < options.max_iter; ++q)
    {
        ConvexSubproblem sp;
        sp.objective = program.numerator;
        sp.objective.add_scaled(program.negated_denominator, out.mu);
        sp.constraints = program.constraints;
        sp.start = v;
        SolveResult res = solve(sp, options.solve);
        if (res.status == SolveStatus::Infeasible)
            fail(ErrorCode::Infeasible, "dinkelbach: subproblem infeasible");
        v = res.v;
        out.mu_history.push_back(out.mu);
        out.iterations = q + 1;
        const double ratio = ratio_at(v, num, den);
        if (ratio > best_ratio)
        {
            best_ratio = ratio;
            out.result = res;
        }
        if (num - out.mu * den <= options.tol)
        {
            out.converged = true;
            break;
        }
        if (!(ratio > out.mu))
            break;
        out.mu = ratio;
    }
    out.mu = std::max(out.mu, best_ratio);
    out.result.objective = best_ratio;
    return out;
}

DinkelbachResult generalized_dinkelbach(const MinRatioProgram &program, const DinkelbachOptions &options)
{
    const std::size_t K = program.numerators.size();
    require(K > 0 && program.negated_denominators.size() == K, "generalized_dinkelbach: ratio count mismatch");
    require(program.weights.empty() || program.weights.size() == K, "generalized_dinkelbach: weight count");
    const Index n = program.start.size();
    auto weight = [&](std::size_t k) { return program.weights.empty() ? 1.0 : program.weights[k]; };
    auto min_ratio = [&](const VectorXd &v) {
        double r = kInf;
        for (std::size_t k = 0; k < K; ++k)
        {
            const double den = -program.negated_denominators[k].value(v);
            if (!(den > 0.0))
                fail(ErrorCode::InvalidArgument, "generalized_dinkelbach: denominator must be positive");
            r = std::min(r, program.numerators[k].value(v) / (weight(k) * den));
        }
        return r;
    };

    std::vector<QuadraticForm> base;
    base.reserve(program.constraints.size() + K);
    for (const auto &c : program.constraints)
        base.push_back(c.resized(n + 1));
    std::vector<QuadraticForm> num_ext, den_ext;
    for (std::size_t k = 0; k < K; ++k)
    {
        num_ext.push_back(program.numerators[k].resized(n + 1));
        den_ext.push_back(program.negated_denominators[k].resized(n + 1));
    }

    DinkelbachResult out;
    out.mu = std::max(0.0, min_ratio(program.start));
    double best_ratio = -kInf;
    VectorXd v = program.start;
    for (int q = 0; q < options.max_iter; ++q)
    {
        ConvexSubproblem sp;
        sp.objective = QuadraticForm(n + 1);
        sp.objective.add_linear(n, 1.0);
        sp.constraints = base;
        double e0 = kInf;
        for (std::size_t k = 0; k < K; ++k)
        {
            QuadraticForm c = num_ext[k];
            c.add_scaled(den_ext[k], out.mu * weight(k));
            c.add_linear(n, -weight(k));
            VectorXd probe(n + 1);
            probe << v, 0.0;
            e0 = std::min(e0, c.value(probe) / weight(k));
            sp.constraints.push_back(std::move(c));
        }
        sp.start.resize(n + 1);
        sp.start << v, e0 - std::max(1e-3, 1e-2 * std::abs(e0));
        SolveResult res = solve(sp, options.solve);
        if (res.status == SolveStatus::Infeasible)
            fail(ErrorCode::Infeasible, "generalized_dinkelbach: subproblem infeasible");
        const double e = res.v[n];
        v = res.v.head(n);
        out.mu_history.push_back(out.mu);
        out.iterations = q + 1;
        const double ratio = min_ratio(v);
        if (ratio > best_ratio)
        {
            best_ratio = ratio;
            out.result = res;
            out.result.v = v;
        }
        if (e <= options.tol)
        {
            out.converged = true;
            break;
        }
        if (!(ratio > out.mu))
            break;
        out.mu = ratio;
    }
    out.mu = std::max(out.mu, best_ratio);
    out.result.objective = best_ratio;
    return out;
}

} // namespace fblris
