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


#include "fblris/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace fblris
{

using nlohmann::json;

namespace
{

constexpr const char *kBaselineNames[] = {"NoRIS",         "RandomRIS",     "TI",           "TU",
                                          "TC",            "Shannon-TI",    "StarES-TSU",   "StarES-TSI",
                                          "StarES-TSN",    "StarMS",        "StarTS"};
constexpr const char *kParamNames[] = {"P_dB", "N_BS", "K", "n_t", "eps_c", "p_c", "iterations"};

int as_count(double value, const char *what)
{
    require(std::isfinite(value) && value >= 1.0 && value == std::floor(value) && value <= 1e6,
            std::string(what) + " must be a positive integer");
    return static_cast<int>(value);
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool same_double(double a, double b)
{
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

json parse_json(const std::string &text)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::exception &e)
    {
        fail(ErrorCode::Parse, std::string("invalid JSON: ") + e.what());
    }
}

void check_keys(const json &j, std::initializer_list<const char *> allowed, const char *where)
{
    if (!j.is_object())
        fail(ErrorCode::Parse, std::string(where) + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char *k) { return it.key() == k; }) ==
            allowed.end())
            fail(ErrorCode::Parse, std::string(where) + ": unknown key '" + it.key() + "'");
}

template <class T> void read(const json &j, const char *key, T &out)
{
    if (!j.contains(key))
        return;
    try
    {
        out = j.at(key).get<T>();
    }
    catch (const json::exception &e)
    {
        fail(ErrorCode::Parse, std::string("key '") + key + "': " + e.what());
    }
}

UtilityKind utility_from_string(const std::string &name)
{
    for (UtilityKind k : {UtilityKind::MinWeightedRate, UtilityKind::WeightedSumRate, UtilityKind::GEE,
                          UtilityKind::MinWeightedEE})
        if (name == to_string(k))
            return k;
    fail(ErrorCode::Parse, "unknown utility '" + name + "'");
}

Scenario scenario_from(const json &j)
{
    check_keys(j,
               {"layout", "users_per_cell", "bs_antennas", "ris_elements", "power_db", "noise_power", "star_split",
                "propagation", "ris", "n_t", "eps_c", "p_c", "eta", "utility", "weights", "thresholds",
                "max_iterations", "tolerance", "epsilon_relax", "tu_from_ti"},
               "scenario");
    Scenario s;
    std::string layout = "default";
    read(j, "layout", layout);
    if (layout == "default")
        s.layout = LayoutKind::Default;
    else if (layout == "half_coverage")
        s.layout = LayoutKind::HalfCoverage;
    else
        fail(ErrorCode::Parse, "unknown layout '" + layout + "'");
    read(j, "users_per_cell", s.options.users_per_cell);
    read(j, "bs_antennas", s.options.bs_antennas);
    read(j, "ris_elements", s.options.ris_elements);
    read(j, "power_db", s.options.power_db);
    read(j, "noise_power", s.options.noise_power);
    read(j, "star_split", s.options.star_split);
    if (j.contains("propagation"))
    {
        const json &p = j.at("propagation");
        check_keys(p,
                   {"direct_exponent", "direct_ref_gain_db", "los_exponent", "los_ref_gain_db", "reference_distance",
                    "rician_k_factor", "element_spacing"},
                   "propagation");
        read(p, "direct_exponent", s.propagation.direct_exponent);
        read(p, "direct_ref_gain_db", s.propagation.direct_ref_gain_db);
        read(p, "los_exponent", s.propagation.los_exponent);
        read(p, "los_ref_gain_db", s.propagation.los_ref_gain_db);
        read(p, "reference_distance", s.propagation.reference_distance);
        read(p, "rician_k_factor", s.propagation.rician_k_factor);
        read(p, "element_spacing", s.propagation.element_spacing);
    }
    if (j.contains("ris"))
    {
        const json &r = j.at("ris");
        check_keys(r, {"ts_fraction", "theta_min", "alpha", "phi"}, "ris");
        read(r, "ts_fraction", s.ris.ts_fraction);
        read(r, "theta_min", s.ris.amplitude_model.theta_min);
        read(r, "alpha", s.ris.amplitude_model.alpha);
        read(r, "phi", s.ris.amplitude_model.phi);
    }
    read(j, "n_t", s.n_t);
    read(j, "eps_c", s.eps_c);
    read(j, "p_c", s.energy.p_c);
    read(j, "eta", s.energy.eta);
    std::string kind = to_string(s.utility.kind);
    read(j, "utility", kind);
    s.utility.kind = utility_from_string(kind);
    read(j, "weights", s.utility.weights);
    read(j, "thresholds", s.utility.thresholds);
    read(j, "max_iterations", s.ao.max_iterations);
    read(j, "tolerance", s.ao.tolerance);
    read(j, "epsilon_relax", s.ao.ris.ccp.epsilon_relax);
    read(j, "tu_from_ti", s.tu_from_ti);
    s.ao.init.ccp = s.ao.ris.ccp;
    s.validate();
    return s;
}

RisState start_state(const Scenario &scenario, const NetworkTopology &topology, Baseline baseline,
                     std::uint64_t seed)
{
    switch (baseline)
    {
    case Baseline::NoRIS:
        return ris_off(topology);
    case Baseline::RandomRIS:
        return random_ris(topology, seed);
    case Baseline::TI:
    case Baseline::ShannonTI:
        return make_ris_state(topology, RisMode::Regular, FeasibilitySet::TI, scenario.ris, seed);
    case Baseline::TU:
        return make_ris_state(topology, RisMode::Regular, FeasibilitySet::TU, scenario.ris, seed);
    case Baseline::TC:
        return make_ris_state(topology, RisMode::Regular, FeasibilitySet::TC, scenario.ris, seed);
    case Baseline::StarES_TSU:
        return make_ris_state(topology, RisMode::StarES, FeasibilitySet::TSU, scenario.ris, seed);
    case Baseline::StarES_TSI:
        return make_ris_state(topology, RisMode::StarES, FeasibilitySet::TSI, scenario.ris, seed);
    case Baseline::StarES_TSN:
        return make_ris_state(topology, RisMode::StarES, FeasibilitySet::TSN, scenario.ris, seed);
    case Baseline::StarMS:
        return make_ris_state(topology, RisMode::StarMS, FeasibilitySet::TSI, scenario.ris, seed);
    case Baseline::StarTS:
        return make_ris_state(topology, RisMode::StarTS, FeasibilitySet::TSI, scenario.ris, seed);
    }
    fail(ErrorCode::InvalidArgument, "unknown baseline");
}

} // namespace

const char *to_string(Baseline baseline)
{
    const auto i = static_cast<std::size_t>(baseline);
    require(i < std::size(kBaselineNames), "unknown baseline");
    return kBaselineNames[i];
}

Baseline baseline_from_string(const std::string &name)
{
    for (std::size_t i = 0; i < std::size(kBaselineNames); ++i)
        if (name == kBaselineNames[i])
            return static_cast<Baseline>(i);
    fail(ErrorCode::Parse, "unknown baseline '" + name + "'");
}

const char *to_string(SweepParam param)
{
    const auto i = static_cast<std::size_t>(param);
    require(i < std::size(kParamNames), "unknown sweep parameter");
    return kParamNames[i];
}

SweepParam sweep_param_from_string(const std::string &name)
{
    for (std::size_t i = 0; i < std::size(kParamNames); ++i)
        if (name == kParamNames[i])
            return static_cast<SweepParam>(i);
    fail(ErrorCode::Parse, "unknown sweep parameter '" + name + "'");
}

NetworkTopology Scenario::topology(std::uint64_t seed) const
{
    LayoutOptions o = options;
    o.user_seed = seed;
    return layout == LayoutKind::HalfCoverage ? half_coverage_topology(o) : default_topology(o);
}

FblParams Scenario::fbl() const
{
    return FblParams::make(n_t, eps_c);
}

void Scenario::validate() const
{
    require(options.users_per_cell >= 1 && options.bs_antennas >= 1 && options.ris_elements >= 1,
            "scenario: users_per_cell, bs_antennas and ris_elements must be positive");
    require(std::isfinite(options.power_db), "scenario: power_db must be finite");
    require(options.noise_power > 0.0, "scenario: noise_power must be positive");
    propagation.validate();
    ris.amplitude_model.validate();
    require(ris.ts_fraction > 0.0 && ris.ts_fraction < 1.0, "scenario: ts_fraction must lie in (0, 1)");
    fbl().validate();
    energy.validate();
    require(ao.max_iterations >= 1, "scenario: max_iterations must be positive");
    require(ao.tolerance > 0.0, "scenario: tolerance must be positive");
    ao.ris.ccp.validate();
}

Scenario apply(const Scenario &scenario, SweepParam param, double value)
{
    Scenario s = scenario;
    switch (param)
    {
    case SweepParam::PowerDb:
        require(std::isfinite(value), "P_dB must be finite");
        s.options.power_db = value;
        break;
    case SweepParam::BsAntennas:
        s.options.bs_antennas = as_count(value, "N_BS");
        break;
    case SweepParam::UsersPerCell:
        s.options.users_per_cell = as_count(value, "K");
        break;
    case SweepParam::Blocklength:
        s.n_t = value;
        break;
    case SweepParam::ErrorProbability:
        s.eps_c = value;
        break;
    case SweepParam::CircuitPower:
        s.energy.p_c = value;
        break;
    case SweepParam::Iterations:
        s.ao.max_iterations = as_count(value, "iterations");
        break;
    }
    s.validate();
    return s;
}

BaselineRun run_baseline(const Scenario &scenario, Baseline baseline, std::uint64_t seed)
{
    scenario.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const NetworkTopology topology = scenario.topology(seed);
    const ChannelSet channels = generate_channels(topology, scenario.propagation, seed);
    const FblParams fbl = baseline == Baseline::ShannonTI ? FblParams::shannon(scenario.n_t) : scenario.fbl();

    AoOptions options = scenario.ao;
    if (baseline == Baseline::NoRIS || baseline == Baseline::RandomRIS)
        options.update_ris = false;

    BaselineRun run;
    if (baseline == Baseline::TU && scenario.tu_from_ti)
    {
        const AoState ti = optimize(topology, channels, start_state(scenario, topology, Baseline::TI, seed),
                                    scenario.utility, fbl, scenario.energy, options);
        RisState ris = ti.ris;
        ris.set = FeasibilitySet::TU;
        run.state = refine(topology, channels, ti.beams, ris, scenario.utility, fbl, scenario.energy, options);
    }
    else
    {
        run.state = optimize(topology, channels, start_state(scenario, topology, baseline, seed), scenario.utility,
                             fbl, scenario.energy, options);
    }
    run.utility = run.state.utility();
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

void SweepSpec::validate() const
{
    require(!values.empty(), "sweep: value grid must be non-empty");
    require(draws >= 1, "sweep: draws must be at least 1");
    require(!baselines.empty(), "sweep: baseline list must be non-empty");
    require(threads >= 0, "sweep: threads must be non-negative");
    std::set<Baseline> seen(baselines.begin(), baselines.end());
    require(seen.size() == baselines.size(), "sweep: duplicate baseline");
    for (double v : values)
        apply(scenario, param, v);
}

bool ResultRow::operator==(const ResultRow &o) const
{
    return same_double(value, o.value) && baseline == o.baseline && same_double(utility_mean, o.utility_mean) &&
           same_double(utility_stderr, o.utility_stderr) && draws == o.draws && same_double(seconds, o.seconds);
}

const ResultRow *ResultTable::find(double value, Baseline baseline) const
{
    for (const ResultRow &r : rows)
        if (r.value == value && r.baseline == baseline)
            return &r;
    return nullptr;
}

bool ResultTable::operator==(const ResultTable &o) const
{
    return param == o.param && rows == o.rows && failed_runs == o.failed_runs;
}

ResultTable run_sweep(const SweepSpec &spec)
{
    spec.validate();
    const std::size_t nv = spec.values.size();
    const std::size_t nb = spec.baselines.size();
    const std::size_t nd = static_cast<std::size_t>(spec.draws);

    struct Cell
    {
        bool ok = false;
        double utility = 0.0;
        double seconds = 0.0;
    };
    std::vector<Cell> cells(nv * nb * nd);
    std::vector<Scenario> scenarios;
    for (double v : spec.values)
        scenarios.push_back(apply(spec.scenario, spec.param, v));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t task = next++; task < nv * nd; task = next++)
        {
            const std::size_t vi = task / nd;
            const std::size_t di = task % nd;
            const std::uint64_t seed = spec.base_seed + di;
            for (std::size_t bi = 0; bi < nb; ++bi)
            {
                Cell &cell = cells[(vi * nb + bi) * nd + di];
                try
                {
                    const BaselineRun run = run_baseline(scenarios[vi], spec.baselines[bi], seed);
                    cell.ok = std::isfinite(run.utility);
                    cell.utility = run.utility;
                    cell.seconds = run.seconds;
                }
                catch (const std::exception &)
                {
                    cell.ok = false;
                }
            }
        }
    };
    unsigned threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(nv * nd)));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i)
        pool.emplace_back(worker);
    worker();
    for (std::thread &t : pool)
        t.join();

    ResultTable table;
    table.param = spec.param;
    for (std::size_t vi = 0; vi < nv; ++vi)
        for (std::size_t bi = 0; bi < nb; ++bi)
        {
            ResultRow row;
            row.value = spec.values[vi];
            row.baseline = spec.baselines[bi];
            double sum = 0.0;
            double seconds = 0.0;
            std::vector<double> ok;
            for (std::size_t di = 0; di < nd; ++di)
            {
                const Cell &cell = cells[(vi * nb + bi) * nd + di];
                if (!cell.ok)
                {
                    ++table.failed_runs;
                    continue;
                }
                ok.push_back(cell.utility);
                sum += cell.utility;
                seconds += cell.seconds;
            }
            row.draws = static_cast<int>(ok.size());
            if (ok.empty())
            {
                row.utility_mean = std::numeric_limits<double>::quiet_NaN();
                row.utility_stderr = std::numeric_limits<double>::quiet_NaN();
            }
            else
            {
                row.utility_mean = sum / static_cast<double>(ok.size());
                double ss = 0.0;
                for (double u : ok)
                    ss += (u - row.utility_mean) * (u - row.utility_mean);
                row.utility_stderr =
                    ok.size() > 1 ? std::sqrt(ss / static_cast<double>(ok.size() - 1) / static_cast<double>(ok.size()))
                                  : 0.0;
            }
            row.seconds = spec.timing ? seconds : 0.0;
            table.rows.push_back(row);
        }
    return table;
}

OutputFormat output_format_from_string(const std::string &name)
{
    if (name == "csv")
        return OutputFormat::Csv;
    if (name == "json")
        return OutputFormat::Json;
    fail(ErrorCode::InvalidArgument, "unknown output format '" + name + "'");
}

void emit(const ResultTable &table, std::ostream &out, OutputFormat format)
{
    if (format == OutputFormat::Csv)
    {
        out << "sweep_param,value,baseline,utility_mean,utility_stderr,draws,seconds\n";
        for (const ResultRow &r : table.rows)
            out << to_string(table.param) << ',' << format_double(r.value) << ',' << to_string(r.baseline) << ','
                << format_double(r.utility_mean) << ',' << format_double(r.utility_stderr) << ',' << r.draws << ','
                << format_double(r.seconds) << '\n';
    }
    else
    {
        json rows = json::array();
        auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
        for (const ResultRow &r : table.rows)
            rows.push_back({{"value", num(r.value)},
                            {"baseline", to_string(r.baseline)},
                            {"utility_mean", num(r.utility_mean)},
                            {"utility_stderr", num(r.utility_stderr)},
                            {"draws", r.draws},
                            {"seconds", num(r.seconds)}});
        const json doc = {{"sweep_param", to_string(table.param)}, {"failed_runs", table.failed_runs}, {"rows", rows}};
        out << doc.dump(2) << '\n';
    }
    if (!out)
        fail(ErrorCode::Io, "failed to write result table");
}

void emit(const ResultTable &table, const std::string &path, OutputFormat format)
{
    std::ofstream file(path, std::ios::binary);
    if (!file)
        fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
    emit(table, file, format);
    file.close();
    if (!file)
        fail(ErrorCode::Io, "failed to write '" + path + "'");
}

ResultTable table_from_json(const std::string &text)
{
    const json doc = parse_json(text);
    check_keys(doc, {"sweep_param", "failed_runs", "rows"}, "table");
    ResultTable table;
    try
    {
        table.param = sweep_param_from_string(doc.at("sweep_param").get<std::string>());
        table.failed_runs = doc.value("failed_runs", 0);
        auto num = [](const json &v) {
            return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
        };
        for (const json &r : doc.at("rows"))
        {
            check_keys(r, {"value", "baseline", "utility_mean", "utility_stderr", "draws", "seconds"}, "row");
            ResultRow row;
            row.value = num(r.at("value"));
            row.baseline = baseline_from_string(r.at("baseline").get<std::string>());
            row.utility_mean = num(r.at("utility_mean"));
            row.utility_stderr = num(r.at("utility_stderr"));
            row.draws = r.at("draws").get<int>();
            row.seconds = num(r.at("seconds"));
            table.rows.push_back(row);
        }
    }
    catch (const json::exception &e)
    {
        fail(ErrorCode::Parse, std::string("malformed result table: ") + e.what());
    }
    return table;
}

Scenario scenario_from_json(const std::string &text)
{
    return scenario_from(parse_json(text));
}

SweepSpec sweep_from_json(const std::string &text)
{
    const json doc = parse_json(text);
    check_keys(doc, {"param", "values", "baselines", "draws", "base_seed", "threads", "timing", "scenario"}, "sweep");
    SweepSpec spec;
    std::string param = to_string(spec.param);
    read(doc, "param", param);
    spec.param = sweep_param_from_string(param);
    read(doc, "values", spec.values);
    std::vector<std::string> names;
    read(doc, "baselines", names);
    for (const std::string &n : names)
        spec.baselines.push_back(baseline_from_string(n));
    read(doc, "draws", spec.draws);
    read(doc, "base_seed", spec.base_seed);
    read(doc, "threads", spec.threads);
    read(doc, "timing", spec.timing);
    if (doc.contains("scenario"))
        spec.scenario = scenario_from(doc.at("scenario"));
    spec.validate();
    return spec;
}

std::string read_text_file(const std::string &path)
{
    std::ifstream file(path, std::ios::binary);
    if (!file)
        fail(ErrorCode::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << file.rdbuf();
    return ss.str();
}

} // namespace fblris
