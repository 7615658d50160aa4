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

#ifndef FBLRIS_CONVEX_HPP
#define FBLRIS_CONVEX_HPP

#include <iosfwd>
#include <vector>

#include "fblris/quadratic_form.hpp"

namespace fblris
{

// maximize objective(v) subject to constraints[i](v) >= 0, all forms concave.
struct ConvexSubproblem
{
    QuadraticForm objective;
    std::vector<QuadraticForm> constraints;
    VectorXd start; // phase-1 is run when not strictly feasible

    Index dim() const { return objective.dim(); }
};

struct SolveOptions
{
    double tol = 1e-7;
    int max_iter = 50;
    double step_fraction = 0.99;
    double min_centering = 0.1;
};

enum class SolveStatus
{
    Optimal,
    MaxIter,
    Infeasible
};

const char *to_string(SolveStatus status);

struct SolveResult
{
    VectorXd v;
    VectorXd multipliers;
    double objective = 0.0;
    double stationarity = 0.0;
    double complementarity = 0.0;
    double infeasibility = 0.0;
    double kkt_residual = 0.0;
    int iterations = 0;
    SolveStatus status = SolveStatus::Infeasible;
};

SolveResult solve(const ConvexSubproblem &problem, const SolveOptions &options = {});

// Canonical text dump: header, dimension, then each form as constant,
// dense linear part and the sparse factor F (row col value triplets).
void write_problem(std::ostream &out, const ConvexSubproblem &problem);

struct DinkelbachOptions
{
    double tol = 1e-6;
    int max_iter = 30;
    SolveOptions solve;
};

struct DinkelbachResult
{
    SolveResult result; // best iterate (largest ratio)
    double mu = 0.0;
    std::vector<double> mu_history;
    int iterations = 0;
    bool converged = false;
};

// max N(v) / D(v) with N concave and D convex positive; the denominator is
// passed negated so that it is a concave QuadraticForm.
struct FractionalProgram
{
    QuadraticForm numerator;
    QuadraticForm negated_denominator;
    std::vector<QuadraticForm> constraints;
    VectorXd start;
};

DinkelbachResult dinkelbach(const FractionalProgram &program, const DinkelbachOptions &options = {});

// max min_k N_k(v) / (w_k D_k(v)). The returned SolveResult has the
// auxiliary variable stripped.
struct MinRatioProgram
{
    std::vector<QuadraticForm> numerators;
    std::vector<QuadraticForm> negated_denominators;
    std::vector<double> weights; // empty means all ones
    std::vector<QuadraticForm> constraints;
    VectorXd start;
};

DinkelbachResult generalized_dinkelbach(const MinRatioProgram &program, const DinkelbachOptions &options = {});

} // namespace fblris

#endif
