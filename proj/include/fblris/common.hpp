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

#ifndef FBLRIS_COMMON_HPP
#define FBLRIS_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fblris
{

using cd = std::complex<double>;
using Index = Eigen::Index;
using VectorXd = Eigen::VectorXd;
using VectorXcd = Eigen::VectorXcd;
using RowVectorXcd = Eigen::RowVectorXcd;
using MatrixXd = Eigen::MatrixXd;
using MatrixXcd = Eigen::MatrixXcd;

enum class ErrorCode
{
    InvalidArgument,
    IndexOutOfRange,
    ZeroSinrExpansion,
    BracketFailure,
    Infeasible,
    InfeasibleThresholds,
    InitializationInfeasible,
    MaxIterations,
    Io,
    Parse
};

const char *to_string(ErrorCode code);

// All library failures are reported through this exception type; the code
// lets the C layer translate them into status values.
class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(message), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &message)
{
    throw Error(code, message);
}

inline void require(bool condition, const std::string &message)
{
    if (!condition)
        fail(ErrorCode::InvalidArgument, message);
}

} // namespace fblris

#endif
