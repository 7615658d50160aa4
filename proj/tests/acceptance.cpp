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


// Acceptance suite: one PASS/FAIL verdict line per criterion, detail lines indented.
// Usage: fblris_acceptance [criterion ...]   (default: all of 1-9)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fblris/harness.hpp"
#include "fblris/surrogates.hpp"

using namespace fblris;

namespace
{

namespace tol
{
constexpr double surrogate_bound = 1e-9;
constexpr double surrogate_touch = 1e-9;
constexpr double surrogate_tangent = 1e-4; // relative
constexpr double inequality = 1e-12;       // relative to max(1, |lhs|, |rhs|)
constexpr double curve_root = 1e-10;
constexpr double qcqp_objective = 1e-3;
constexpr double kkt = 1e-7;
constexpr double mu_monotone = 1e-9;
constexpr double gee_toy = 1e-4;
constexpr double ao_monotone = 1e-9;
constexpr double ao_stop = 1e-4;
constexpr int ao_max_iterations = 50;
constexpr double feasibility = 1e-10;
} // namespace tol

constexpr int kSurrogateScenarios = 50;
constexpr int kPerturbations = 1000;
constexpr int kFuzzTuples = 100000;
constexpr int kCurveGrid = 1000;
constexpr int kQcqpProblems = 20;
constexpr int kQcqpGrid = 1000;
constexpr int kQcqpZoomLevels = 3;
constexpr int kSeeds = 10;

std::vector<std::string> g_detail;

void detail(const char *fmt, ...) __attribute__((format(printf, 1, 2)));
void detail(const char *fmt, ...)
{
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    g_detail.emplace_back(buf);
}

double rel_tol(double a, double b)
{
    return std::max({1.0, std::abs(a), std::abs(b)});
}

// ---------------------------------------------------------------- criterion 1

struct SurrogateStats
{
    int violations = 0;
    long long samples = 0;
    double worst_touch = 0.0;
    double worst_tangent = 0.0;
};

void check_model(const RateModel &model, const VectorXcd &z_bar, std::mt19937_64 &rng, SurrogateStats &stats)
{
    const Index dim = 2 * z_bar.size();
    const QuadraticForm q = rate_surrogate(model, z_bar, dim);
    const VectorXd v = embed(z_bar);
    const double rate = model_rate(model, z_bar);
    stats.worst_touch = std::max(stats.worst_touch, std::abs(q.value(v) - rate));

    const VectorXd g = q.gradient(v);
    VectorXd fd(dim);
    const double h = 1e-6 * std::max(1.0, v.lpNorm<Eigen::Infinity>());
    for (Index i = 0; i < dim; ++i)
    {
        VectorXd p = v, m = v;
        p[i] += h;
        m[i] -= h;
        fd[i] = (model_rate(model, extract(p, 0, dim / 2)) - model_rate(model, extract(m, 0, dim / 2))) / (2.0 * h);
    }
    stats.worst_tangent = std::max(stats.worst_tangent, (g - fd).norm() / fd.norm());

    std::uniform_real_distribution<double> exponent(-3.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = std::max(z_bar.norm() / std::sqrt(static_cast<double>(z_bar.size())), 1e-3);
    for (int k = 0; k < kPerturbations; ++k)
    {
        const double s = scale * std::pow(10.0, exponent(rng));
        VectorXcd z = z_bar;
        for (Index i = 0; i < z.size(); ++i)
            z[i] += s * cd(normal(rng), normal(rng));
        if (q.value(embed(z)) > model_rate(model, z) + tol::surrogate_bound)
            ++stats.violations;
        ++stats.samples;
    }
}

RisState randomized_state(const NetworkTopology &t, RisMode mode, FeasibilitySet set, std::uint64_t seed,
                          std::mt19937_64 &rng)
{
    RisState ris = make_ris_state(t, mode, set, {}, seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int m = 0; m < ris.ris_count(); ++m)
        for (int n = 0; n < ris.elements(); ++n)
        {
            ris.theta_r[m][n] = cd(normal(rng), normal(rng));
            if (mode != RisMode::Regular)
                ris.theta_t[m][n] = cd(normal(rng), normal(rng));
        }
    return project(ris);
}

bool criterion_surrogates()
{
    struct Kind
    {
        RisMode mode;
        FeasibilitySet set;
    };
    const Kind kinds[] = {{RisMode::Regular, FeasibilitySet::TI},
                          {RisMode::Regular, FeasibilitySet::TU},
                          {RisMode::StarES, FeasibilitySet::TSI},
                          {RisMode::StarES, FeasibilitySet::TSN},
                          {RisMode::StarTS, FeasibilitySet::TSI}};
    SurrogateStats beam, theta;
    std::mt19937_64 rng(20260101);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int s = 0; s < kSurrogateScenarios; ++s)
    {
        const Kind kind = kinds[s % std::size(kinds)];
        LayoutOptions lo;
        lo.users_per_cell = 2;
        lo.bs_antennas = 4;
        lo.ris_elements = 8;
        lo.power_db = 30.0 * unit(rng);
        lo.user_seed = static_cast<std::uint64_t>(s);
        lo.star_split = kind.mode != RisMode::Regular;
        const NetworkTopology t = default_topology(lo);
        const ChannelSet ch = generate_channels(t, PropagationParams{}, static_cast<std::uint64_t>(s));
        const FblParams fbl = FblParams::make(100.0 * std::pow(8.0, unit(rng)), std::pow(10.0, -7.0 + 5.0 * unit(rng)));
        const RisState ris = randomized_state(t, kind.mode, kind.set, static_cast<std::uint64_t>(s), rng);

        BeamformingSet beams;
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int u = 0; u < t.users(); ++u)
        {
            VectorXcd x(t.bs_antennas);
            for (Index i = 0; i < x.size(); ++i)
                x[i] = cd(normal(rng), normal(rng));
            beams.x.push_back(x * std::sqrt(t.power_budgets[0] * unit(rng) / t.users_per_cell) / x.norm());
        }
        const ThetaLayout layout = theta_layout(ris);
        for (int u = 0; u < t.users(); ++u)
        {
            check_model(beam_rate_model(t, ch, ris, u, fbl), pack_beams(beams), rng, beam);
            const RateModel tm = theta_rate_model(t, ch, ris, beams, layout, u, fbl);
            if (tm.forms.front().terms.empty())
                continue; // user sees no RIS path: the rate does not depend on the coefficients
            check_model(tm, pack_theta(layout, ris), rng, theta);
        }
    }
    for (const auto &[name, st] : {std::pair<const char *, SurrogateStats &>{"beam", beam}, {"coefficient", theta}})
        detail("%s surrogate: %d/%lld lower-bound violations, touch %.2e, tangency %.2e", name, st.violations,
               st.samples, st.worst_touch, st.worst_tangent);
    bool ok = true;
    for (const SurrogateStats *st : {&beam, &theta})
        ok = ok && st->violations == 0 && st->worst_touch <= tol::surrogate_touch &&
             st->worst_tangent <= tol::surrogate_tangent;
    return ok;
}

// ---------------------------------------------------------------- criterion 2

bool criterion_inequalities()
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n(0.0, 1.0);
    int v_sqrt = 0, v_ratio = 0, v_log = 0, v_equal = 0;
    for (int i = 0; i < kFuzzTuples; ++i)
    {
        const double x = std::exp(3.0 * n(rng)), xb = std::exp(3.0 * n(rng));
        const cd u(n(rng), n(rng)), ub(n(rng), n(rng));
        const double y = std::exp(2.0 * n(rng)), yb = std::exp(2.0 * n(rng));

        const double s = std::sqrt(x), su = ineq_sqrt_upper(x, xb);
        v_sqrt += s > su + tol::inequality * rel_tol(s, su);
        const double r = std::norm(u) / y, rl = ineq_ratio_lower(u, y, ub, yb);
        v_ratio += r < rl - tol::inequality * rel_tol(r, rl);
        const double l = std::log1p(std::norm(u) / y), ll = ineq_log_lower(u, y, ub, yb);
        v_log += l < ll - tol::inequality * rel_tol(l, ll);

        const double se = ineq_sqrt_upper(xb, xb), re = ineq_ratio_lower(ub, yb, ub, yb),
                     le = ineq_log_lower(ub, yb, ub, yb);
        const double sx = std::sqrt(xb), rx = std::norm(ub) / yb, lx = std::log1p(std::norm(ub) / yb);
        v_equal += std::abs(se - sx) > tol::inequality * rel_tol(se, sx);
        v_equal += std::abs(re - rx) > tol::inequality * rel_tol(re, rx);
        v_equal += std::abs(le - lx) > tol::inequality * rel_tol(le, lx);
    }
    detail("%d tuples per bound: violations sqrt %d, ratio %d, log %d; expansion-point mismatches %d", kFuzzTuples,
           v_sqrt, v_ratio, v_log, v_equal);
    return v_sqrt == 0 && v_ratio == 0 && v_log == 0 && v_equal == 0;
}

// ---------------------------------------------------------------- criterion 3

bool criterion_curve()
{
    const double a = 0.2185;
    const FblCurveAnalysis an = lemma2_analysis(a);
    const double f0 = lemma2_curve(a, 0.0);
    const double fz = lemma2_curve(a, an.gamma_zero);
    int anomalies = 0;
    const double top = 2.0 * an.gamma_zero;
    double prev = lemma2_curve(a, 0.0);
    for (int i = 1; i <= kCurveGrid; ++i)
    {
        const double lo = top * (i - 1) / kCurveGrid, g = top * i / kCurveGrid;
        const double f = lemma2_curve(a, g);
        if (g <= an.gamma_star && !(f < prev))
            ++anomalies;
        if (lo >= an.gamma_star && !(f > prev))
            ++anomalies;
        prev = f;
    }
    detail("a = %.4f: gamma* = %.10g, gamma0 = %.10g, f(gamma*) = %.6g", a, an.gamma_star, an.gamma_zero, an.f_min);
    detail("|f(0)| = %.2e, |f(gamma0)| = %.2e, sign anomalies on %d-point grid: %d", std::abs(f0), std::abs(fz),
           kCurveGrid, anomalies);
    return std::abs(f0) <= tol::curve_root && std::abs(fz) <= tol::curve_root && anomalies == 0 &&
           0.0 < an.gamma_star && an.gamma_star < an.gamma_zero && an.f_min < 0.0;
}

// ---------------------------------------------------------------- criterion 4

bool criterion_dispersion()
{
    int violations = 0;
    for (int i = 0; i < kCurveGrid; ++i)
    {
        const double g = std::pow(10.0, -4.0 + 8.0 * i / (kCurveGrid - 1));
        violations += dispersion(g) < dispersion_opt(g);
    }
    detail("achievable >= optimal dispersion on %d log-spaced SINRs in [1e-4, 1e4]: %d violations", kCurveGrid,
           violations);
    return violations == 0;
}

// ---------------------------------------------------------------- criterion 5

// KKT residual from central differences, independent of the solver's own bookkeeping.
double independent_kkt(const ConvexSubproblem &p, const SolveResult &r)
{
    const Index n = p.dim();
    auto grad = [&](const QuadraticForm &q) {
        VectorXd g(n);
        for (Index i = 0; i < n; ++i)
        {
            VectorXd a = r.v, b = r.v;
            a[i] += 1e-4;
            b[i] -= 1e-4;
            g[i] = (q.value(a) - q.value(b)) / 2e-4;
        }
        return g;
    };
    VectorXd station = grad(p.objective);
    double comp = 0.0, infeas = 0.0;
    for (std::size_t i = 0; i < p.constraints.size(); ++i)
    {
        const double c = p.constraints[i].value(r.v);
        station += r.multipliers[static_cast<Index>(i)] * grad(p.constraints[i]);
        comp = std::max(comp, std::abs(r.multipliers[static_cast<Index>(i)] * c));
        infeas = std::max(infeas, -c);
    }
    return std::max({station.lpNorm<Eigen::Infinity>(), comp, infeas});
}

double grid_max(const ConvexSubproblem &p, double x0, double x1, double y0, double y1, double &bx, double &by)
{
    double best = -INFINITY;
    VectorXd v(2);
    for (int i = 0; i < kQcqpGrid; ++i)
        for (int j = 0; j < kQcqpGrid; ++j)
        {
            v << x0 + (x1 - x0) * i / (kQcqpGrid - 1), y0 + (y1 - y0) * j / (kQcqpGrid - 1);
            bool feasible = true;
            for (const auto &c : p.constraints)
                if (c.value(v) < 0.0)
                {
                    feasible = false;
                    break;
                }
            if (!feasible)
                continue;
            const double f = p.objective.value(v);
            if (f > best)
            {
                best = f;
                bx = v[0];
                by = v[1];
            }
        }
    return best;
}

bool criterion_qcqp()
{
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int mismatches = 0, optimal = 0, kkt_fail = 0;
    double worst_gap = 0.0, worst_kkt = 0.0;
    for (int k = 0; k < kQcqpProblems; ++k)
    {
        // One complex variable, embedded as two reals.
        ConvexSubproblem p;
        p.objective = QuadraticForm(2);
        p.objective.subtract_square({{0, u(rng)}, {1, u(rng)}}, u(rng), 1.0 + u(rng));
        p.objective.subtract_square({{0, u(rng)}, {1, u(rng)}}, u(rng), 1.0 + u(rng));
        p.objective.add_linear(0, 2.0 * u(rng));
        p.objective.add_linear(1, 2.0 * u(rng));
        const double cx = u(rng), cy = u(rng), radius = 1.25 + 0.75 * u(rng);
        QuadraticForm ball(2);
        ball.add_constant(radius * radius);
        ball.subtract_square({{0, 1.0}}, -cx, 1.0);
        ball.subtract_square({{1, 1.0}}, -cy, 1.0);
        // A second concave constraint that keeps an interior point of the ball feasible.
        const double px = cx + 0.5 * radius * u(rng), py = cy + 0.5 * radius * u(rng);
        const double a0 = u(rng), a1 = u(rng), d = u(rng);
        QuadraticForm second(2);
        second.add_constant(std::pow(a0 * px + a1 * py - d, 2) + 0.2 + 0.5 * (1.0 + u(rng)));
        second.subtract_square({{0, a0}, {1, a1}}, -d, 1.0);
        second.add_linear(0, 0.3 * u(rng));
        p.constraints = {ball, second};
        p.start = VectorXd::Zero(2);

        const SolveResult r = solve(p);
        double bx = 0.0, by = 0.0;
        double best = grid_max(p, cx - radius, cx + radius, cy - radius, cy + radius, bx, by);
        double half = 2.0 * radius;
        for (int level = 0; level < kQcqpZoomLevels; ++level)
        {
            half *= 20.0 / (kQcqpGrid - 1);
            double zx = bx, zy = by;
            const double zoomed = grid_max(p, bx - half, bx + half, by - half, by + half, zx, zy);
            if (zoomed > best)
            {
                best = zoomed;
                bx = zx;
                by = zy;
            }
        }
        const double gap = std::abs(r.objective - best);
        worst_gap = std::max(worst_gap, gap);
        if (r.status == SolveStatus::Infeasible || gap > tol::qcqp_objective)
            ++mismatches;
        if (r.status == SolveStatus::Optimal)
        {
            ++optimal;
            const double kkt = std::max(r.kkt_residual, independent_kkt(p, r));
            worst_kkt = std::max(worst_kkt, kkt);
            kkt_fail += kkt > tol::kkt;
        }
    }
    detail("%d two-variable QCQPs vs zoomed %dx%d grid: %d mismatches, worst gap %.2e", kQcqpProblems, kQcqpGrid,
           kQcqpGrid, mismatches, worst_gap);
    detail("%d Optimal returns, worst KKT residual %.2e (%d above %.0e)", optimal, worst_kkt, kkt_fail, tol::kkt);
    return mismatches == 0 && kkt_fail == 0;
}

// ---------------------------------------------------------------- criterion 6

bool monotone(const std::vector<double> &mu)
{
    for (std::size_t i = 1; i < mu.size(); ++i)
        if (mu[i] < mu[i - 1] - tol::mu_monotone * std::max(1.0, std::abs(mu[i - 1])))
            return false;
    return true;
}

bool criterion_dinkelbach()
{
    std::mt19937_64 rng(66);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int runs = 0, non_monotone = 0, toy_fail = 0;
    double worst_toy = 0.0;

    // Scalar GEE toy: (a x - b x^2) / (p_c + eta x^2) over 0 <= x <= sqrt(P).
    for (int k = 0; k < 10; ++k)
    {
        const double a = 0.5 + 1.5 * unit(rng), b = 0.01 + 0.2 * unit(rng), pc = 0.2 + 2.0 * unit(rng),
                     eta = 0.5 + unit(rng), xmax = std::sqrt(1.0 + 99.0 * unit(rng));
        FractionalProgram f;
        f.numerator = QuadraticForm(1);
        f.numerator.add_linear(0, a);
        f.numerator.subtract_square({{0, 1.0}}, 0.0, b);
        f.negated_denominator = QuadraticForm(1);
        f.negated_denominator.add_constant(-pc);
        f.negated_denominator.subtract_square({{0, 1.0}}, 0.0, eta);
        QuadraticForm lo(1), hi(1);
        lo.add_linear(0, 1.0);
        hi.add_linear(0, -1.0);
        hi.add_constant(xmax);
        f.constraints = {lo, hi};
        f.start = VectorXd::Constant(1, 0.5 * xmax);
        const DinkelbachResult r = dinkelbach(f);
        ++runs;
        non_monotone += !monotone(r.mu_history);
        double best = -INFINITY;
        for (int i = 0; i <= 1000000; ++i)
        {
            const double x = xmax * i / 1000000.0;
            best = std::max(best, (a * x - b * x * x) / (pc + eta * x * x));
        }
        worst_toy = std::max(worst_toy, std::abs(r.mu - best));
        toy_fail += std::abs(r.mu - best) > tol::gee_toy;
    }

    // Min-ratio toys: three coupled ratios.
    for (int k = 0; k < 10; ++k)
    {
        MinRatioProgram g;
        QuadraticForm budget(3);
        budget.add_constant(3.0 + 3.0 * unit(rng));
        for (Index i = 0; i < 3; ++i)
        {
            QuadraticForm num(3), den(3);
            num.add_linear(i, 0.5 + unit(rng));
            num.subtract_square({{i, 1.0}}, 0.0, 0.05 * unit(rng));
            den.add_constant(-(0.5 + unit(rng)));
            for (Index j = 0; j < 3; ++j)
                if (j != i)
                    den.subtract_square({{j, 1.0}}, 0.0, 0.2 * unit(rng));
            g.numerators.push_back(num);
            g.negated_denominators.push_back(den);
            QuadraticForm pos(3);
            pos.add_linear(i, 1.0);
            g.constraints.push_back(pos);
            budget.subtract_square({{i, 1.0}}, 0.0, 1.0);
        }
        g.constraints.push_back(budget);
        g.start = VectorXd::Constant(3, 0.1);
        const DinkelbachResult r = generalized_dinkelbach(g);
        ++runs;
        non_monotone += !monotone(r.mu_history);
    }

    // Max-min SINR initializations on network draws.
    for (int seed = 0; seed < kSeeds; ++seed)
    {
        LayoutOptions lo;
        lo.users_per_cell = 2;
        lo.bs_antennas = 4;
        lo.ris_elements = 8;
        lo.user_seed = static_cast<std::uint64_t>(seed);
        const NetworkTopology t = default_topology(lo);
        const ChannelSet ch = generate_channels(t, PropagationParams{}, static_cast<std::uint64_t>(seed));
        const InitResult init = init_maxmin_sinr(t, ch, random_ris(t, static_cast<std::uint64_t>(seed)));
        for (const auto &mu : init.mu_runs)
        {
            ++runs;
            non_monotone += !monotone(mu);
        }
    }
    detail("%d Dinkelbach / generalized Dinkelbach runs, %d with a decreasing ratio sequence", runs, non_monotone);
    detail("scalar GEE toys vs 1e6-point grid: worst gap %.2e (%d above %.0e)", worst_toy, toy_fail, tol::gee_toy);
    return non_monotone == 0 && toy_fail == 0;
}

// ---------------------------------------------------------------- criteria 7 and 9

struct AoSummary
{
    int runs = 0;
    int non_monotone = 0;
    int not_converged = 0;
    int errors = 0;
    int max_iterations = 0;
    double worst_feasibility = 0.0;
    int infeasible = 0;
    bool done = false;
};

AoSummary g_ao;

void run_ao_matrix()
{
    if (g_ao.done)
        return;
    g_ao.done = true;
    struct Config
    {
        RisMode mode;
        FeasibilitySet set;
        const char *name;
    };
    const Config configs[] = {{RisMode::Regular, FeasibilitySet::TU, "TU"},
                              {RisMode::Regular, FeasibilitySet::TI, "TI"},
                              {RisMode::Regular, FeasibilitySet::TC, "TC"},
                              {RisMode::StarES, FeasibilitySet::TSU, "TSU-ES"},
                              {RisMode::StarES, FeasibilitySet::TSI, "TSI-ES"},
                              {RisMode::StarES, FeasibilitySet::TSN, "TSN-ES"},
                              {RisMode::StarMS, FeasibilitySet::TSI, "MS"},
                              {RisMode::StarTS, FeasibilitySet::TSI, "TS"}};
    const FblParams fbl = FblParams::make(200.0, 1e-3);
    const EnergyParams energy;
    for (UtilityKind kind : {UtilityKind::MinWeightedRate, UtilityKind::WeightedSumRate, UtilityKind::GEE,
                             UtilityKind::MinWeightedEE})
        for (const Config &c : configs)
        {
            int conv = 0, mono = 0, worst_it = 0;
            double worst_feas = 0.0;
            for (int seed = 0; seed < kSeeds; ++seed)
            {
                LayoutOptions lo;
                lo.users_per_cell = 2;
                lo.bs_antennas = 4;
                lo.ris_elements = 8;
                lo.user_seed = static_cast<std::uint64_t>(seed);
                lo.star_split = c.mode != RisMode::Regular;
                const NetworkTopology t = default_topology(lo);
                const ChannelSet ch = generate_channels(t, PropagationParams{}, static_cast<std::uint64_t>(seed));
                UtilitySpec spec;
                spec.kind = kind;
                AoOptions options;
                options.max_iterations = tol::ao_max_iterations;
                options.tolerance = tol::ao_stop;
                ++g_ao.runs;
                try
                {
                    const AoState st = optimize(t, ch, make_ris_state(t, c.mode, c.set, {}, seed), spec, fbl,
                                                energy, options);
                    bool ok = true;
                    double prev = st.initial_utility;
                    for (double v : st.trace)
                    {
                        ok = ok && v >= prev - tol::ao_monotone;
                        prev = v;
                    }
                    bool stopped = st.converged && st.iterations <= tol::ao_max_iterations;
                    if (st.trace.size() >= 2)
                    {
                        const double a = st.trace[st.trace.size() - 2], b = st.trace.back();
                        stopped = stopped && std::abs(b - a) < tol::ao_stop * std::abs(a);
                    }
                    mono += ok;
                    conv += stopped;
                    g_ao.non_monotone += !ok;
                    g_ao.not_converged += !stopped;
                    worst_it = std::max(worst_it, st.iterations);
                    const double feas = feasibility_residual(st.ris);
                    worst_feas = std::max(worst_feas, feas);
                    g_ao.infeasible += feas > tol::feasibility;
                }
                catch (const std::exception &e)
                {
                    ++g_ao.errors;
                    detail("%s %s seed %d: %s", to_string(kind), c.name, seed, e.what());
                }
            }
            g_ao.max_iterations = std::max(g_ao.max_iterations, worst_it);
            g_ao.worst_feasibility = std::max(g_ao.worst_feasibility, worst_feas);
            detail("%-5s %-7s monotone %2d/%d, converged %2d/%d, max iterations %2d, feasibility %.1e",
                   to_string(kind), c.name, mono, kSeeds, conv, kSeeds, worst_it, worst_feas);
        }
}

bool criterion_ao()
{
    run_ao_matrix();
    detail("%d runs: %d non-monotone, %d not converged within %d, %d errors", g_ao.runs, g_ao.non_monotone,
           g_ao.not_converged, tol::ao_max_iterations, g_ao.errors);
    return g_ao.non_monotone == 0 && g_ao.not_converged == 0 && g_ao.errors == 0;
}

bool criterion_feasibility()
{
    const bool cached = g_ao.done;
    run_ao_matrix();
    if (!cached)
        g_detail.clear();
    detail("%d AO runs: worst set residual %.2e, %d above %.0e", g_ao.runs, g_ao.worst_feasibility, g_ao.infeasible,
           tol::feasibility);
    return g_ao.infeasible == 0 && g_ao.errors == 0;
}

// ---------------------------------------------------------------- criterion 8

SweepSpec trend_sweep(SweepParam param, std::vector<double> values, std::vector<Baseline> baselines)
{
    SweepSpec s;
    s.param = param;
    s.values = std::move(values);
    s.baselines = std::move(baselines);
    s.draws = kSeeds;
    s.scenario.options.users_per_cell = 2;
    s.scenario.options.bs_antennas = 4;
    s.scenario.options.ris_elements = 8;
    return s;
}

double mean_of(const ResultTable &t, double value, Baseline b)
{
    const ResultRow *r = t.find(value, b);
    return r ? r->utility_mean : NAN;
}

bool criterion_trends()
{
    bool all = true;
    auto verdict = [&all](bool ok) {
        all = all && ok;
        return ok ? "holds" : "FAILS";
    };

    // (a) and (b): power sweep.
    {
        const ResultTable t = run_sweep(trend_sweep(SweepParam::PowerDb, {0, 5, 10, 15, 20},
                                                    {Baseline::NoRIS, Baseline::TI, Baseline::TU}));
        bool a = t.failed_runs == 0, b = t.failed_runs == 0;
        for (double p : {0.0, 5.0, 10.0, 15.0, 20.0})
        {
            const double off = mean_of(t, p, Baseline::NoRIS), ti = mean_of(t, p, Baseline::TI),
                         tu = mean_of(t, p, Baseline::TU);
            a = a && ti >= off;
            b = b && tu >= ti;
            detail("  P = %4.1f dB: NoRIS %.4f  TI %.4f  TU %.4f", p, off, ti, tu);
        }
        detail("(a) TI >= NoRIS at every power: %s", verdict(a));
        detail("(b) TU >= TI at every power: %s", verdict(b));
    }
    // (c): half-coverage STAR scenario.
    {
        SweepSpec s = trend_sweep(SweepParam::PowerDb, {0, 10, 20},
                                  {Baseline::StarES_TSI, Baseline::StarMS, Baseline::StarTS});
        s.scenario.layout = LayoutKind::HalfCoverage;
        s.scenario.options.users_per_cell = 4;
        s.scenario.options.ris_elements = 16;
        const ResultTable t = run_sweep(s);
        bool ms = t.failed_runs == 0, ts = t.failed_runs == 0;
        for (double p : {0.0, 10.0, 20.0})
        {
            const double es = mean_of(t, p, Baseline::StarES_TSI), m = mean_of(t, p, Baseline::StarMS),
                         x = mean_of(t, p, Baseline::StarTS);
            ms = ms && es >= m;
            ts = ts && es >= x;
            detail("  P = %4.1f dB: ES %.4f  MS %.4f  TS %.4f", p, es, m, x);
        }
        detail("(c) ES >= MS at every power: %s", verdict(ms));
        detail("(c) ES >= TS at every power: %s", verdict(ts));
    }
    // (d): blocklength.
    {
        const std::vector<double> nts = {100, 200, 400, 800};
        const ResultTable t =
            run_sweep(trend_sweep(SweepParam::Blocklength, nts, {Baseline::TI, Baseline::ShannonTI}));
        bool ok = t.failed_runs == 0;
        double prev_rate = -INFINITY, prev_gap = INFINITY;
        for (double nt : nts)
        {
            const double r = mean_of(t, nt, Baseline::TI), c = mean_of(t, nt, Baseline::ShannonTI);
            const double gap = c - r;
            ok = ok && r > prev_rate && gap >= 0.0 && gap < prev_gap;
            prev_rate = r;
            prev_gap = gap;
            detail("  n_t = %3.0f: FBL %.4f  Shannon %.4f  gap %.4f", nt, r, c, gap);
        }
        detail("(d) FBL rate rises toward Shannon with a shrinking gap: %s", verdict(ok));
    }
    // (e): error probability.
    {
        const std::vector<double> eps = {1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
        const ResultTable t = run_sweep(trend_sweep(SweepParam::ErrorProbability, eps, {Baseline::TI}));
        bool ok = t.failed_runs == 0;
        double prev = -INFINITY;
        for (double e : eps)
        {
            const double r = mean_of(t, e, Baseline::TI);
            ok = ok && r >= prev;
            prev = r;
            detail("  eps_c = %.0e: fairness rate %.4f", e, r);
        }
        detail("(e) fairness rate non-decreasing in eps_c: %s", verdict(ok));
    }
    return all;
}

} // namespace

int main(int argc, char **argv)
{
    struct Criterion
    {
        int id;
        const char *name;
        std::function<bool()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "surrogate validity", criterion_surrogates},
        {2, "elementary inequality fuzz", criterion_inequalities},
        {3, "normalized FBL curve", criterion_curve},
        {4, "dispersion dominance", criterion_dispersion},
        {5, "convex core vs grid search", criterion_qcqp},
        {6, "Dinkelbach drivers", criterion_dinkelbach},
        {7, "AO monotonicity and convergence", criterion_ao},
        {8, "trend reproduction", criterion_trends},
        {9, "feasibility exactness", criterion_feasibility},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const Criterion &c : criteria)
    {
        if (!selected.empty() && !selected.count(c.id))
            continue;
        g_detail.clear();
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try
        {
            ok = c.run();
        }
        catch (const std::exception &e)
        {
            detail("unexpected exception: %s", e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d (%s): %s [%.1fs]\n", c.id, c.name, ok ? "PASS" : "FAIL", secs);
        for (const std::string &line : g_detail)
            std::printf("    %s\n", line.c_str());
        std::fflush(stdout);
        failed += !ok;
    }
    std::printf("%d criterion(s) failed\n", failed);
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
