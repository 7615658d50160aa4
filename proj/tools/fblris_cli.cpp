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


#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "fblris/fblris.h"

namespace
{

int report(fblris_status status)
{
    std::fprintf(stderr, "fblris: %s: %s\n", fblris_status_string(status), fblris_last_error());
    return 1;
}

struct Common
{
    std::string config;
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 0;
    int draws = 0;
};

void add_common(CLI::App *cmd, Common &c, const char *config_help, bool config_required)
{
    auto *opt = cmd->add_option("--config", c.config, config_help)->check(CLI::ExistingFile);
    if (config_required)
        opt->required();
    cmd->add_option("--out", c.out, "output path")->required();
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

int run_sweep(const Common &c, bool seed_given)
{
    fblris_sweep *sweep = nullptr;
    fblris_status st = fblris_sweep_from_file(c.config.c_str(), &sweep);
    if (st != FBLRIS_OK)
        return report(st);
    if (seed_given)
        fblris_sweep_set_seed(sweep, c.seed);
    if (c.draws > 0)
        fblris_sweep_set_draws(sweep, c.draws);
    fblris_table *table = nullptr;
    st = fblris_run_sweep(sweep, &table);
    fblris_sweep_free(sweep);
    if (st != FBLRIS_OK)
        return report(st);
    st = fblris_table_write(table, c.out.c_str(), c.format.c_str());
    int failed = 0;
    fblris_table_failed_runs(table, &failed);
    fblris_table_free(table);
    if (st != FBLRIS_OK)
        return report(st);
    if (failed > 0)
    {
        std::fprintf(stderr, "fblris: %d run(s) failed and were left out of the averages\n", failed);
        return 2;
    }
    return 0;
}

int run_single(const Common &c, const std::string &baseline)
{
    fblris_scenario *scenario = nullptr;
    fblris_status st = fblris_scenario_from_file(c.config.c_str(), &scenario);
    if (st != FBLRIS_OK)
        return report(st);
    fblris_run *run = nullptr;
    st = fblris_run_single(scenario, baseline.c_str(), c.seed, &run);
    fblris_scenario_free(scenario);
    if (st != FBLRIS_OK)
        return report(st);
    double utility = 0.0;
    int iterations = 0;
    int converged = 0;
    fblris_run_utility(run, &utility);
    fblris_run_iterations(run, &iterations);
    fblris_run_converged(run, &converged);
    st = fblris_run_write(run, c.out.c_str(), c.format.c_str());
    fblris_run_free(run);
    if (st != FBLRIS_OK)
        return report(st);
    std::printf("%s seed %llu: utility %.10g after %d iterations (%s)\n", baseline.c_str(),
                static_cast<unsigned long long>(c.seed), utility, iterations,
                converged ? "converged" : "iteration limit");
    return 0;
}

int run_analyze(const Common &c, double a, bool a_given, int points, double gamma_max)
{
    if (!a_given)
    {
        fblris_scenario *scenario = nullptr;
        fblris_status st = c.config.empty() ? fblris_scenario_from_json("{}", &scenario)
                                            : fblris_scenario_from_file(c.config.c_str(), &scenario);
        if (st != FBLRIS_OK)
            return report(st);
        st = fblris_scenario_fbl_coefficient(scenario, &a);
        fblris_scenario_free(scenario);
        if (st != FBLRIS_OK)
            return report(st);
    }
    double gamma_star = 0.0;
    double gamma_zero = 0.0;
    double f_min = 0.0;
    fblris_status st = fblris_fbl_analysis(a, &gamma_star, &gamma_zero, &f_min);
    if (st != FBLRIS_OK)
        return report(st);
    if (gamma_max <= 0.0)
        gamma_max = 2.0 * gamma_zero;
    st = fblris_fbl_curve_write(a, gamma_max, points, c.out.c_str(), c.format.c_str());
    if (st != FBLRIS_OK)
        return report(st);
    std::printf("a = %.10g: gamma* = %.10g, gamma0 = %.10g, f(gamma*) = %.10g\n", a, gamma_star, gamma_zero, f_min);
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Finite-blocklength (STAR-)RIS optimization experiments"};
    app.set_version_flag("--version", std::string(fblris_version()));
    app.require_subcommand(1);

    Common sweep_opts;
    CLI::App *sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over one parameter");
    add_common(sweep, sweep_opts, "sweep JSON file", true);
    sweep->add_option("--seed", sweep_opts.seed, "base seed, overriding the config");
    sweep->add_option("--draws", sweep_opts.draws, "draws per grid value, overriding the config")
        ->check(CLI::PositiveNumber);

    Common single_opts;
    std::string baseline = "TI";
    CLI::App *single = app.add_subcommand("single", "One baseline on one channel draw, with its AO trace");
    add_common(single, single_opts, "scenario JSON file", true);
    single->add_option("--seed", single_opts.seed, "draw seed");
    single->add_option("--baseline", baseline, "baseline name")->capture_default_str();

    Common fbl_opts;
    double a = 0.0;
    int points = 1001;
    double gamma_max = 0.0;
    CLI::App *analyze = app.add_subcommand("analyze-fbl", "Normalized FBL rate curve and its turning points");
    add_common(analyze, fbl_opts, "scenario JSON file supplying n_t and eps_c", false);
    auto *a_opt = analyze->add_option("--a", a, "penalty coefficient (default: from the config's n_t and eps_c)");
    analyze->add_option("--points", points, "number of samples")
        ->check(CLI::Range(2, 10000000))
        ->capture_default_str();
    analyze->add_option("--gamma-max", gamma_max, "upper end of the SINR axis (default: 2 gamma0)");

    CLI11_PARSE(app, argc, argv);

    if (*sweep)
        return run_sweep(sweep_opts, sweep->count("--seed") > 0);
    if (*single)
        return run_single(single_opts, baseline);
    return run_analyze(fbl_opts, a, a_opt->count() > 0, points, gamma_max);
}
