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


#include "fblris/fblris.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fblris/harness.hpp"
#include "fblris/metrics.hpp"

struct fblris_scenario
{
    fblris::Scenario value;
};

struct fblris_sweep
{
    fblris::SweepSpec value;
};

struct fblris_table
{
    fblris::ResultTable value;
};

struct fblris_run
{
    fblris::BaselineRun value;
};

namespace
{

thread_local std::string last_error;

fblris_status code_of(fblris::ErrorCode code)
{
    using fblris::ErrorCode;
    switch (code)
    {
    case ErrorCode::InvalidArgument:
        return FBLRIS_ERR_INVALID_ARGUMENT;
    case ErrorCode::IndexOutOfRange:
        return FBLRIS_ERR_INDEX_OUT_OF_RANGE;
    case ErrorCode::ZeroSinrExpansion:
        return FBLRIS_ERR_ZERO_SINR_EXPANSION;
    case ErrorCode::BracketFailure:
        return FBLRIS_ERR_BRACKET_FAILURE;
    case ErrorCode::Infeasible:
        return FBLRIS_ERR_INFEASIBLE;
    case ErrorCode::InfeasibleThresholds:
        return FBLRIS_ERR_INFEASIBLE_THRESHOLDS;
    case ErrorCode::InitializationInfeasible:
        return FBLRIS_ERR_INITIALIZATION_INFEASIBLE;
    case ErrorCode::MaxIterations:
        return FBLRIS_ERR_MAX_ITERATIONS;
    case ErrorCode::Io:
        return FBLRIS_ERR_IO;
    case ErrorCode::Parse:
        return FBLRIS_ERR_PARSE;
    }
    return FBLRIS_ERR_INTERNAL;
}

template <class F> fblris_status guarded(F &&body)
{
    try
    {
        body();
        last_error.clear();
        return FBLRIS_OK;
    }
    catch (const fblris::Error &e)
    {
        last_error = e.what();
        return code_of(e.code());
    }
    catch (const std::bad_alloc &)
    {
        last_error = "out of memory";
        return FBLRIS_ERR_INTERNAL;
    }
    catch (const std::exception &e)
    {
        last_error = e.what();
        return FBLRIS_ERR_INTERNAL;
    }
    catch (...)
    {
        last_error = "unknown failure";
        return FBLRIS_ERR_INTERNAL;
    }
}

template <class T> void need(const T *p, const char *what)
{
    if (p == nullptr)
        fblris::fail(fblris::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

fblris::OutputFormat format_of(const char *format)
{
    need(format, "format");
    return fblris::output_format_from_string(format);
}

void write_file(const char *path, const std::string &text)
{
    need(path, "path");
    std::ofstream file(path, std::ios::binary);
    if (!file)
        fblris::fail(fblris::ErrorCode::Io, std::string("cannot open '") + path + "' for writing");
    file << text;
    file.close();
    if (!file)
        fblris::fail(fblris::ErrorCode::Io, std::string("failed to write '") + path + "'");
}

std::string g17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

extern "C" {

const char *fblris_version(void)
{
    return "1.0.0";
}

const char *fblris_status_string(fblris_status status)
{
    switch (status)
    {
    case FBLRIS_OK:
        return "ok";
    case FBLRIS_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case FBLRIS_ERR_INDEX_OUT_OF_RANGE:
        return "index out of range";
    case FBLRIS_ERR_ZERO_SINR_EXPANSION:
        return "zero SINR at expansion point";
    case FBLRIS_ERR_BRACKET_FAILURE:
        return "root bracketing failed";
    case FBLRIS_ERR_INFEASIBLE:
        return "infeasible";
    case FBLRIS_ERR_INFEASIBLE_THRESHOLDS:
        return "rate thresholds infeasible";
    case FBLRIS_ERR_INITIALIZATION_INFEASIBLE:
        return "initial point infeasible";
    case FBLRIS_ERR_MAX_ITERATIONS:
        return "iteration limit reached";
    case FBLRIS_ERR_IO:
        return "i/o error";
    case FBLRIS_ERR_PARSE:
        return "parse error";
    case FBLRIS_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

const char *fblris_last_error(void)
{
    return last_error.c_str();
}

fblris_status fblris_q_inverse(double eps, double *out)
{
    return guarded([&] {
        need(out, "out");
        *out = fblris::q_inverse(eps);
    });
}

fblris_status fblris_shannon_rate(double gamma, double *out)
{
    return guarded([&] {
        need(out, "out");
        fblris::require(gamma >= 0.0, "gamma must be non-negative");
        *out = fblris::shannon_rate(gamma);
    });
}

fblris_status fblris_fbl_rate(double gamma, double n_t, double eps_c, double *out)
{
    return guarded([&] {
        need(out, "out");
        fblris::require(gamma >= 0.0, "gamma must be non-negative");
        *out = fblris::fbl_rate(gamma, fblris::FblParams::make(n_t, eps_c));
    });
}

fblris_status fblris_fbl_coefficient(double n_t, double eps_c, double *out)
{
    return guarded([&] {
        need(out, "out");
        *out = fblris::lemma2_coefficient(fblris::FblParams::make(n_t, eps_c));
    });
}

fblris_status fblris_fbl_analysis(double a, double *gamma_star, double *gamma_zero, double *f_min)
{
    return guarded([&] {
        const fblris::FblCurveAnalysis r = fblris::lemma2_analysis(a);
        if (gamma_star)
            *gamma_star = r.gamma_star;
        if (gamma_zero)
            *gamma_zero = r.gamma_zero;
        if (f_min)
            *f_min = r.f_min;
    });
}

fblris_status fblris_fbl_curve_write(double a, double gamma_max, int points, const char *path, const char *format)
{
    return guarded([&] {
        fblris::require(std::isfinite(gamma_max) && gamma_max > 0.0, "gamma_max must be positive");
        fblris::require(points >= 2, "points must be at least 2");
        const fblris::OutputFormat fmt = format_of(format);
        const fblris::FblCurveAnalysis r = fblris::lemma2_analysis(a);
        std::ostringstream out;
        if (fmt == fblris::OutputFormat::Csv)
        {
            out << "gamma,f\n";
            for (int i = 0; i < points; ++i)
            {
                const double g = gamma_max * i / (points - 1);
                out << g17(g) << ',' << g17(fblris::lemma2_curve(a, g)) << '\n';
            }
        }
        else
        {
            nlohmann::json curve = nlohmann::json::array();
            for (int i = 0; i < points; ++i)
            {
                const double g = gamma_max * i / (points - 1);
                curve.push_back({g, fblris::lemma2_curve(a, g)});
            }
            const nlohmann::json doc = {{"a", a},
                                        {"gamma_star", r.gamma_star},
                                        {"gamma_zero", r.gamma_zero},
                                        {"f_min", r.f_min},
                                        {"curve", curve}};
            out << doc.dump(2) << '\n';
        }
        write_file(path, out.str());
    });
}

fblris_status fblris_scenario_from_json(const char *json, fblris_scenario **out)
{
    return guarded([&] {
        need(json, "json");
        need(out, "out");
        *out = new fblris_scenario{fblris::scenario_from_json(json)};
    });
}

fblris_status fblris_scenario_from_file(const char *path, fblris_scenario **out)
{
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new fblris_scenario{fblris::scenario_from_json(fblris::read_text_file(path))};
    });
}

fblris_status fblris_scenario_fbl_coefficient(const fblris_scenario *scenario, double *out)
{
    return guarded([&] {
        need(scenario, "scenario");
        need(out, "out");
        *out = fblris::lemma2_coefficient(scenario->value.fbl());
    });
}

void fblris_scenario_free(fblris_scenario *scenario)
{
    delete scenario;
}

fblris_status fblris_run_single(const fblris_scenario *scenario, const char *baseline, uint64_t seed,
                                fblris_run **out)
{
    return guarded([&] {
        need(scenario, "scenario");
        need(baseline, "baseline");
        need(out, "out");
        *out = new fblris_run{
            fblris::run_baseline(scenario->value, fblris::baseline_from_string(baseline), seed)};
    });
}

fblris_status fblris_run_utility(const fblris_run *run, double *out)
{
    return guarded([&] {
        need(run, "run");
        need(out, "out");
        *out = run->value.utility;
    });
}

fblris_status fblris_run_iterations(const fblris_run *run, int *out)
{
    return guarded([&] {
        need(run, "run");
        need(out, "out");
        *out = run->value.state.iterations;
    });
}

fblris_status fblris_run_converged(const fblris_run *run, int *out)
{
    return guarded([&] {
        need(run, "run");
        need(out, "out");
        *out = run->value.state.converged ? 1 : 0;
    });
}

fblris_status fblris_run_write(const fblris_run *run, const char *path, const char *format)
{
    return guarded([&] {
        need(run, "run");
        const fblris::AoState &st = run->value.state;
        std::ostringstream out;
        if (format_of(format) == fblris::OutputFormat::Csv)
        {
            fblris::write_trace_csv(st, out);
        }
        else
        {
            const nlohmann::json doc = {{"utility", run->value.utility},
                                        {"initial_utility", st.initial_utility},
                                        {"iterations", st.iterations},
                                        {"converged", st.converged},
                                        {"trace", st.trace},
                                        {"rates", st.rates}};
            out << doc.dump(2) << '\n';
        }
        write_file(path, out.str());
    });
}

void fblris_run_free(fblris_run *run)
{
    delete run;
}

fblris_status fblris_sweep_from_json(const char *json, fblris_sweep **out)
{
    return guarded([&] {
        need(json, "json");
        need(out, "out");
        *out = new fblris_sweep{fblris::sweep_from_json(json)};
    });
}

fblris_status fblris_sweep_from_file(const char *path, fblris_sweep **out)
{
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new fblris_sweep{fblris::sweep_from_json(fblris::read_text_file(path))};
    });
}

fblris_status fblris_sweep_set_seed(fblris_sweep *sweep, uint64_t base_seed)
{
    return guarded([&] {
        need(sweep, "sweep");
        sweep->value.base_seed = base_seed;
    });
}

fblris_status fblris_sweep_set_draws(fblris_sweep *sweep, int draws)
{
    return guarded([&] {
        need(sweep, "sweep");
        fblris::require(draws >= 1, "draws must be at least 1");
        sweep->value.draws = draws;
    });
}

void fblris_sweep_free(fblris_sweep *sweep)
{
    delete sweep;
}

fblris_status fblris_run_sweep(const fblris_sweep *sweep, fblris_table **out)
{
    return guarded([&] {
        need(sweep, "sweep");
        need(out, "out");
        *out = new fblris_table{fblris::run_sweep(sweep->value)};
    });
}

fblris_status fblris_table_from_json(const char *json, fblris_table **out)
{
    return guarded([&] {
        need(json, "json");
        need(out, "out");
        *out = new fblris_table{fblris::table_from_json(json)};
    });
}

fblris_status fblris_table_row_count(const fblris_table *table, size_t *out)
{
    return guarded([&] {
        need(table, "table");
        need(out, "out");
        *out = table->value.rows.size();
    });
}

fblris_status fblris_table_failed_runs(const fblris_table *table, int *out)
{
    return guarded([&] {
        need(table, "table");
        need(out, "out");
        *out = table->value.failed_runs;
    });
}

fblris_status fblris_table_row(const fblris_table *table, size_t index, double *value, const char **baseline,
                               double *mean, double *stderr_, int *draws, double *seconds)
{
    return guarded([&] {
        need(table, "table");
        if (index >= table->value.rows.size())
            fblris::fail(fblris::ErrorCode::IndexOutOfRange, "row index out of range");
        const fblris::ResultRow &r = table->value.rows[index];
        if (value)
            *value = r.value;
        if (baseline)
            *baseline = fblris::to_string(r.baseline);
        if (mean)
            *mean = r.utility_mean;
        if (stderr_)
            *stderr_ = r.utility_stderr;
        if (draws)
            *draws = r.draws;
        if (seconds)
            *seconds = r.seconds;
    });
}

fblris_status fblris_table_write(const fblris_table *table, const char *path, const char *format)
{
    return guarded([&] {
        need(table, "table");
        need(path, "path");
        fblris::emit(table->value, std::string(path), format_of(format));
    });
}

fblris_status fblris_table_to_string(const fblris_table *table, const char *format, char **out)
{
    return guarded([&] {
        need(table, "table");
        need(out, "out");
        std::ostringstream ss;
        fblris::emit(table->value, ss, format_of(format));
        const std::string text = ss.str();
        char *buf = new char[text.size() + 1];
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *out = buf;
    });
}

void fblris_table_free(fblris_table *table)
{
    delete table;
}

void fblris_string_free(char *text)
{
    delete[] text;
}

} // extern "C"
