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


#ifndef FBLRIS_HARNESS_HPP
#define FBLRIS_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fblris/framework.hpp"
#include "fblris/topology.hpp"

namespace fblris
{

enum class Baseline
{
    NoRIS,
    RandomRIS,
    TI,
    TU,
    TC,
    ShannonTI,
    StarES_TSU,
    StarES_TSI,
    StarES_TSN,
    StarMS,
    StarTS
};

const char *to_string(Baseline baseline);
Baseline baseline_from_string(const std::string &name);

enum class SweepParam
{
    PowerDb,
    BsAntennas,
    UsersPerCell,
    Blocklength,
    ErrorProbability,
    CircuitPower,
    Iterations
};

// Names used in configs and outputs: P_dB, N_BS, K, n_t, eps_c, p_c, iterations.
const char *to_string(SweepParam param);
SweepParam sweep_param_from_string(const std::string &name);

enum class LayoutKind
{
    Default,
    HalfCoverage
};

struct Scenario
{
    LayoutKind layout = LayoutKind::Default;
    LayoutOptions options;
    PropagationParams propagation;
    RisOptions ris;
    double n_t = 200.0;
    double eps_c = 1e-3;
    EnergyParams energy;
    UtilitySpec utility;
    AoOptions ao;
    // The TU baseline continues from the converged TI point of the same draw.
    bool tu_from_ti = true;

    NetworkTopology topology(std::uint64_t seed) const;
    FblParams fbl() const;
    void validate() const;
};

Scenario apply(const Scenario &scenario, SweepParam param, double value);

struct BaselineRun
{
    double utility = 0.0;
    AoState state;
    double seconds = 0.0;
};

// One paired draw: the topology, channels and random coefficients all derive from `seed`.
BaselineRun run_baseline(const Scenario &scenario, Baseline baseline, std::uint64_t seed);

struct SweepSpec
{
    SweepParam param = SweepParam::PowerDb;
    std::vector<double> values;
    Scenario scenario;
    std::vector<Baseline> baselines;
    int draws = 1;
    std::uint64_t base_seed = 0;
    int threads = 0; // 0 picks the hardware concurrency
    bool timing = false;

    void validate() const;
};

struct ResultRow
{
    double value = 0.0;
    Baseline baseline = Baseline::TI;
    double utility_mean = 0.0;
    double utility_stderr = 0.0;
    int draws = 0; // successful draws
    double seconds = 0.0;

    bool operator==(const ResultRow &other) const;
};

struct ResultTable
{
    SweepParam param = SweepParam::PowerDb;
    std::vector<ResultRow> rows;
    int failed_runs = 0;

    const ResultRow *find(double value, Baseline baseline) const;
    bool operator==(const ResultTable &other) const;
};

// Rows follow the order of values x baselines regardless of scheduling.
ResultTable run_sweep(const SweepSpec &spec);

enum class OutputFormat
{
    Csv,
    Json
};

OutputFormat output_format_from_string(const std::string &name);

void emit(const ResultTable &table, std::ostream &out, OutputFormat format);
void emit(const ResultTable &table, const std::string &path, OutputFormat format);
ResultTable table_from_json(const std::string &text);

Scenario scenario_from_json(const std::string &text);
SweepSpec sweep_from_json(const std::string &text);
std::string read_text_file(const std::string &path);

} // namespace fblris

#endif
