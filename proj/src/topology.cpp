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

#include "fblris/topology.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace fblris
{

const char *to_string(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::IndexOutOfRange: return "index out of range";
    case ErrorCode::ZeroSinrExpansion: return "zero-SINR expansion point";
    case ErrorCode::BracketFailure: return "bracket failure";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::InfeasibleThresholds: return "infeasible rate thresholds";
    case ErrorCode::InitializationInfeasible: return "initialization infeasible";
    case ErrorCode::MaxIterations: return "maximum iterations reached";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::Parse: return "parse error";
    }
    return "unknown error";
}

std::vector<std::string> NetworkTopology::validate() const
{
    require(cells >= 1, "topology needs at least one cell");
    require(ris_count >= 1, "topology needs at least one RIS");
    require(users_per_cell >= 1 && bs_antennas >= 1 && ris_elements >= 1,
            "topology counts must be positive");
    require(static_cast<int>(bs_positions.size()) == cells, "bs_positions size must equal cell count");
    require(static_cast<int>(ris_positions.size()) == ris_count, "ris_positions size must equal RIS count");
    require(static_cast<int>(ris_normals.size()) == ris_count, "ris_normals size must equal RIS count");
    require(static_cast<int>(user_positions.size()) == users(), "user_positions size must equal L*K");
    require(static_cast<int>(power_budgets.size()) == cells, "power_budgets size must equal cell count");
    for (double p : power_budgets)
        require(p > 0.0 && std::isfinite(p), "power budgets must be positive");
    require(noise_power > 0.0 && std::isfinite(noise_power), "noise power must be positive");
    for (const auto &n : ris_normals)
        require(n.norm() > 0.0, "RIS normals must be nonzero");

    std::vector<std::string> warnings;
    if (ris_count < cells)
        warnings.push_back("fewer RISs than cells (M < L)");
    return warnings;
}

void PropagationParams::validate() const
{
    require(direct_exponent > 0.0 && los_exponent > 0.0, "pathloss exponents must be positive");
    require(reference_distance > 0.0, "reference distance must be positive");
    require(rician_k_factor >= 0.0, "Rician K-factor must be non-negative");
    require(element_spacing > 0.0, "element spacing must be positive");
}

bool ChannelSet::operator==(const ChannelSet &other) const
{
    auto same = [](const auto &a, const auto &b) {
        if (a.size() != b.size())
            return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols() || a[i] != b[i])
                return false;
        return true;
    };
    return users == other.users && cells == other.cells && ris_count == other.ris_count &&
           bs_antennas == other.bs_antennas && ris_elements == other.ris_elements &&
           same(direct, other.direct) && same(bs_ris, other.bs_ris) && same(ris_user, other.ris_user);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double path_gain(double distance, double exponent, double ref_gain_db, double reference_distance)
{
    const double ratio = std::max(distance, 1e-3) / reference_distance;
    return db_to_linear(ref_gain_db) * std::pow(ratio, -exponent);
}

namespace
{

// Uniform linear array along the x axis; direction is a unit vector.
VectorXcd steering(int size, const Point3 &direction, double spacing)
{
    VectorXcd a(size);
    const double phase = 2.0 * std::numbers::pi * spacing * direction.x();
    for (int n = 0; n < size; ++n)
        a[n] = std::polar(1.0, phase * n);
    return a;
}

class Gaussian
{
  public:
    explicit Gaussian(std::uint64_t seed) : engine_(seed) {}

    // Circularly-symmetric complex Gaussian with unit variance.
    cd complex_normal()
    {
        constexpr double scale = 0.70710678118654752440;
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {scale * re, scale * im};
    }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace

ChannelSet generate_channels(const NetworkTopology &topology, const PropagationParams &params,
                             std::uint64_t seed)
{
    topology.validate();
    params.validate();

    const int L = topology.cells;
    const int M = topology.ris_count;
    const int U = topology.users();
    const int Nb = topology.bs_antennas;
    const int Nr = topology.ris_elements;

    ChannelSet ch;
    ch.users = U;
    ch.cells = L;
    ch.ris_count = M;
    ch.bs_antennas = Nb;
    ch.ris_elements = Nr;
    ch.direct.resize(static_cast<std::size_t>(U * L));
    ch.bs_ris.resize(static_cast<std::size_t>(M * L));
    ch.ris_user.resize(static_cast<std::size_t>(U * M));

    Gaussian rng(seed);

    const bool pure_los = std::isinf(params.rician_k_factor);
    const double los_weight = pure_los ? 1.0 : std::sqrt(params.rician_k_factor / (params.rician_k_factor + 1.0));
    const double nlos_weight = pure_los ? 0.0 : std::sqrt(1.0 / (params.rician_k_factor + 1.0));

    for (int u = 0; u < U; ++u)
        for (int i = 0; i < L; ++i)
        {
            const double dist = (topology.user_positions[u] - topology.bs_positions[i]).norm();
            const double amp = std::sqrt(path_gain(dist, params.direct_exponent, params.direct_ref_gain_db,
                                                   params.reference_distance));
            RowVectorXcd row(Nb);
            for (int n = 0; n < Nb; ++n)
                row[n] = amp * rng.complex_normal();
            ch.d(u, i) = std::move(row);
        }

    for (int m = 0; m < M; ++m)
        for (int i = 0; i < L; ++i)
        {
            const Point3 delta = topology.ris_positions[m] - topology.bs_positions[i];
            const double dist = delta.norm();
            const double amp =
                std::sqrt(path_gain(dist, params.los_exponent, params.los_ref_gain_db, params.reference_distance));
            const Point3 dir = delta / dist;
            const MatrixXcd los = steering(Nr, -dir, params.element_spacing) *
                                  steering(Nb, dir, params.element_spacing).adjoint();
            MatrixXcd g(Nr, Nb);
            for (int c = 0; c < Nb; ++c)
                for (int r = 0; r < Nr; ++r)
                {
                    const cd scatter = pure_los ? cd{} : rng.complex_normal();
                    g(r, c) = amp * (los_weight * los(r, c) + nlos_weight * scatter);
                }
            ch.G(m, i) = std::move(g);
        }

    for (int u = 0; u < U; ++u)
        for (int m = 0; m < M; ++m)
        {
            const Point3 delta = topology.user_positions[u] - topology.ris_positions[m];
            const double dist = delta.norm();
            const double amp =
                std::sqrt(path_gain(dist, params.los_exponent, params.los_ref_gain_db, params.reference_distance));
            const VectorXcd los = steering(Nr, delta / dist, params.element_spacing);
            RowVectorXcd row(Nr);
            for (int n = 0; n < Nr; ++n)
            {
                const cd scatter = pure_los ? cd{} : rng.complex_normal();
                row[n] = amp * (los_weight * std::conj(los[n]) + nlos_weight * scatter);
            }
            ch.f(u, m) = std::move(row);
        }
    return ch;
}

namespace
{

NetworkTopology make_layout(const std::vector<Point3> &bs, const std::vector<Point3> &ris,
                            const LayoutOptions &options, bool split_users)
{
    require(options.users_per_cell >= 1, "users_per_cell must be positive");
    NetworkTopology t;
    t.cells = static_cast<int>(bs.size());
    t.ris_count = static_cast<int>(ris.size());
    t.users_per_cell = options.users_per_cell;
    t.bs_antennas = options.bs_antennas;
    t.ris_elements = options.ris_elements;
    t.bs_positions = bs;
    t.ris_positions = ris;
    t.ris_normals.assign(ris.size(), Point3(0.0, 1.0, 0.0));
    t.power_budgets.assign(bs.size(), db_to_linear(options.power_db) * options.noise_power);
    t.noise_power = options.noise_power;

    std::mt19937_64 engine(options.user_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int K = options.users_per_cell;
    for (int l = 0; l < t.cells; ++l)
    {
        // Cell l is assisted by the RIS with the same index when it exists.
        const Point3 &anchor = ris[static_cast<std::size_t>(std::min(l, t.ris_count - 1))];
        for (int k = 0; k < K; ++k)
        {
            const bool behind = split_users && k >= (K + 1) / 2;
            const double x = anchor.x() - 10.0 + 20.0 * unit(engine);
            const double depth = 1.0 + 20.0 * unit(engine);
            const double y = anchor.y() + (behind ? -depth : depth);
            t.user_positions.emplace_back(x, y, 1.5);
        }
    }
    t.validate();
    return t;
}

} // namespace

NetworkTopology default_topology(const LayoutOptions &options)
{
    return make_layout({Point3(0.0, 0.0, 25.0), Point3(400.0, 0.0, 25.0)},
                       {Point3(140.0, 0.0, 15.0), Point3(260.0, 0.0, 15.0)}, options, options.star_split);
}

NetworkTopology half_coverage_topology(const LayoutOptions &options)
{
    return make_layout({Point3(0.0, 0.0, 25.0)}, {Point3(140.0, 0.0, 15.0)}, options, true);
}

} // namespace fblris
