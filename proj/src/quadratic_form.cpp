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

#include "fblris/quadratic_form.hpp"

#include <cmath>

namespace fblris
{

cd ComplexAffine::evaluate(const VectorXcd &z) const
{
    cd out = constant;
    for (const auto &[k, t] : terms)
        out += t * z[k];
    return out;
}

VectorXd embed(const VectorXcd &z)
{
    VectorXd v(2 * z.size());
    for (Index k = 0; k < z.size(); ++k)
    {
        v[2 * k] = z[k].real();
        v[2 * k + 1] = z[k].imag();
    }
    return v;
}

VectorXcd extract(const VectorXd &v, Index offset, Index count)
{
    VectorXcd z(count);
    for (Index k = 0; k < count; ++k)
        z[k] = cd(v[offset + 2 * k], v[offset + 2 * k + 1]);
    return z;
}

QuadraticForm::QuadraticForm(Index dim) : linear_(VectorXd::Zero(dim)) {}

void QuadraticForm::add_linear(Index i, double g)
{
    if (i < 0 || i >= dim())
        fail(ErrorCode::IndexOutOfRange, "QuadraticForm: variable index out of range");
    linear_[i] += g;
}

void QuadraticForm::add_real(const ComplexAffine &w, cd alpha, Index offset)
{
    constant_ += (alpha * w.constant).real();
    for (const auto &[k, t] : w.terms)
    {
        const cd beta = alpha * t;
        add_linear(offset + 2 * k, beta.real());
        add_linear(offset + 2 * k + 1, -beta.imag());
    }
}

void QuadraticForm::add_row(const std::vector<std::pair<Index, double>> &entries, double offset)
{
    // (a'v + b)^2 = (a'v)^2 + 2 b a'v + b^2
    constant_ -= offset * offset;
    for (const auto &[i, a] : entries)
    {
        linear_[i] -= 2.0 * offset * a;
        triplets_.emplace_back(static_cast<int>(rows_), static_cast<int>(i), a);
    }
    ++rows_;
    dirty_ = true;
}

void QuadraticForm::subtract_modulus_squared(const ComplexAffine &w, double weight, Index offset)
{
    require(weight >= 0.0, "QuadraticForm: negative curvature weight");
    if (weight == 0.0)
        return;
    const double s = std::sqrt(weight);
    std::vector<std::pair<Index, double>> re, im;
    re.reserve(2 * w.terms.size());
    im.reserve(2 * w.terms.size());
    for (const auto &[k, t] : w.terms)
    {
        const Index i = offset + 2 * k;
        if (i < 0 || i + 1 >= dim())
            fail(ErrorCode::IndexOutOfRange, "QuadraticForm: variable index out of range");
        re.emplace_back(i, s * t.real());
        re.emplace_back(i + 1, -s * t.imag());
        im.emplace_back(i, s * t.imag());
        im.emplace_back(i + 1, s * t.real());
    }
    if (w.terms.empty())
    {
        constant_ -= weight * std::norm(w.constant);
        return;
    }
    add_row(re, s * w.constant.real());
    add_row(im, s * w.constant.imag());
}

void QuadraticForm::subtract_square(const std::vector<std::pair<Index, double>> &row, double b, double weight)
{
    require(weight >= 0.0, "QuadraticForm: negative curvature weight");
    if (weight == 0.0)
        return;
    const double s = std::sqrt(weight);
    std::vector<std::pair<Index, double>> scaled;
    scaled.reserve(row.size());
    for (const auto &[i, a] : row)
    {
        if (i < 0 || i >= dim())
            fail(ErrorCode::IndexOutOfRange, "QuadraticForm: variable index out of range");
        scaled.emplace_back(i, s * a);
    }
    if (scaled.empty())
        constant_ -= weight * b * b;
    else
        add_row(scaled, s * b);
}

void QuadraticForm::add_scaled(const QuadraticForm &other, double scale)
{
    require(scale >= 0.0, "QuadraticForm: negative scale would break concavity");
    require(other.dim() == dim(), "QuadraticForm: dimension mismatch");
    if (scale == 0.0)
        return;
    constant_ += scale * other.constant_;
    linear_ += scale * other.linear_;
    const double s = std::sqrt(scale);
    for (const auto &t : other.triplets_)
        triplets_.emplace_back(static_cast<int>(rows_ + t.row()), t.col(), s * t.value());
    rows_ += other.rows_;
    dirty_ = true;
}

QuadraticForm QuadraticForm::resized(Index dim) const
{
    require(dim >= this->dim(), "QuadraticForm: cannot shrink");
    QuadraticForm out(dim);
    out.constant_ = constant_;
    out.linear_.head(this->dim()) = linear_;
    out.triplets_ = triplets_;
    out.rows_ = rows_;
    return out;
}

void QuadraticForm::build() const
{
    if (!dirty_)
        return;
    F_.resize(rows_, dim());
    F_.setFromTriplets(triplets_.begin(), triplets_.end());
    P_ = (SparseMatrix(F_.transpose()) * F_).pruned();
    dirty_ = false;
}

double QuadraticForm::value(const VectorXd &v) const
{
    build();
    return constant_ + linear_.dot(v) - (F_ * v).squaredNorm();
}

VectorXd QuadraticForm::gradient(const VectorXd &v) const
{
    build();
    return linear_ - 2.0 * (P_ * v);
}

const SparseMatrix &QuadraticForm::curvature() const
{
    build();
    return P_;
}

} // namespace fblris
