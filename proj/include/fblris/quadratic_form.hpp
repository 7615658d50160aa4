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

#ifndef FBLRIS_QUADRATIC_FORM_HPP
#define FBLRIS_QUADRATIC_FORM_HPP

#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "fblris/common.hpp"

namespace fblris
{

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// c + sum_k t_k z_k over complex variables z.
struct ComplexAffine
{
    cd constant{0.0, 0.0};
    std::vector<std::pair<Index, cd>> terms;

    cd evaluate(const VectorXcd &z) const;
};

// Real-embedded vector: complex z_k occupies entries 2k (real) and 2k + 1 (imaginary).
VectorXd embed(const VectorXcd &z);
VectorXcd extract(const VectorXd &v, Index offset, Index count);

// q(v) = constant + linear' v - ||F v||^2, concave in v by construction.
class QuadraticForm
{
  public:
    QuadraticForm() = default;
    explicit QuadraticForm(Index dim);

    Index dim() const { return static_cast<Index>(linear_.size()); }
    double constant() const { return constant_; }
    const VectorXd &linear() const { return linear_; }

    void add_constant(double c) { constant_ += c; }
    void add_linear(Index i, double g);
    // Adds Re{alpha * w(z)} where z starts at real offset `offset`.
    void add_real(const ComplexAffine &w, cd alpha, Index offset = 0);
    // Adds -weight * |w(z)|^2, weight >= 0.
    void subtract_modulus_squared(const ComplexAffine &w, double weight, Index offset = 0);
    // Adds -weight * (a'v + b)^2 for a sparse real row a.
    void subtract_square(const std::vector<std::pair<Index, double>> &row, double b, double weight);
    // Adds scale * other, scale >= 0. Dimensions must agree.
    void add_scaled(const QuadraticForm &other, double scale);
    // Same form over a larger variable vector (new entries appended, unused).
    QuadraticForm resized(Index dim) const;

    double value(const VectorXd &v) const;
    VectorXd gradient(const VectorXd &v) const;
    // P = F'F, so the Hessian is -2P.
    const SparseMatrix &curvature() const;
    bool is_affine() const { return rows_ == 0; }
    Index factor_rows() const { return rows_; }

  private:
    void add_row(const std::vector<std::pair<Index, double>> &entries, double offset);
    void build() const;

    double constant_ = 0.0;
    VectorXd linear_;
    std::vector<Eigen::Triplet<double>> triplets_;
    Index rows_ = 0;

    mutable bool dirty_ = true;
    mutable SparseMatrix F_;
    mutable SparseMatrix P_;
};

} // namespace fblris

#endif
