// SPDX-License-Identifier: Apache-2.0
//
// racovert: covert transmission with rotatable directional antenna arrays
// Copyright (C) 2026 The racovert authors
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

// racovert solve | sweep | verify-dep

#include "racovert/covertness.hpp"
#include "racovert/experiment.hpp"
#include "racovert/random.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>

using namespace racovert;

namespace
{
    struct Options
    {
        std::string config_path;
        std::string scheme;
        std::optional<std::uint64_t> seed;
        std::string out;
        std::string sweep;
        int draws = 100;
    };

    ExperimentConfig resolve(const Options &opt)
    {
        ExperimentConfig cfg = opt.config_path.empty() ? ExperimentConfig{} : load_config(opt.config_path);
        try
        {
            if (!opt.scheme.empty())
                cfg.schemes = {parse_scheme(opt.scheme)};
            if (!opt.sweep.empty())
                cfg.sweep = parse_sweep(opt.sweep);
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigDomainError(e.what());
        }
        if (opt.seed)
            cfg.seed = *opt.seed;
        cfg.validate();
        return cfg;
    }

    int cmd_solve(const Options &opt)
    {
        const ExperimentConfig cfg = resolve(opt);
        const Scheme scheme = opt.scheme.empty() ? Scheme::ra : cfg.schemes.front();
        AOConfig ao;
        ao.max_iters = cfg.max_iters;
        ao.rel_tol = cfg.rel_tol;
        ao.solver_tol = cfg.solver_tol;
        ao.scheme = scheme;
        ao.seed = job_seed(cfg.seed, 0.0, scheme, 0);

        const ArrayScene scene = cfg.scene();
        const auto t0 = std::chrono::steady_clock::now();
        const AOResult res = run_scheme(scene, cfg.params, ao);
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

        std::printf("scheme        %s\n", to_string(scheme).c_str());
        std::printf("antennas      %d (%dx%d)\n", scene.num_antennas(), cfg.nx, cfg.ny);
        std::printf("wardens       %d\n", scene.num_wardens());
        std::printf("eta           %.6e W\n", covert_budget(cfg.params).eta);
        std::printf("status        %s\n", to_string(res.status).c_str());
        std::printf("iterations    %d (%s)\n", res.iterations, res.converged ? "converged" : "iteration cap");
        std::printf("rate trace   ");
        for (double r : res.rate_trace)
            std::printf(" %.6f", r);
        std::printf("\nfinal rate    %.9f bps/Hz\n", res.final_rate());
        std::printf("upper bound   %.9f bps/Hz\n", rate_upper_bound(scene, cfg.params));
        std::printf("warden ratio ");
        const double eta = covert_budget(cfg.params).eta;
        for (double p : res.willie_powers)
            std::printf(" %.9f", p / eta);
        std::printf("\nruntime       %.1f ms\n", ms);
        std::printf("angles (deg)  zenith / azimuth per element\n");
        for (int n = 0; n < res.theta_opt.size(); ++n)
            std::printf("  %3d  %9.4f  %9.4f\n", n, res.theta_opt.zenith(n) * 180.0 / std::numbers::pi,
                        res.theta_opt.azimuth(n) * 180.0 / std::numbers::pi);
        return 0;
    }

    int cmd_sweep(const Options &opt)
    {
        const ExperimentConfig cfg = resolve(opt);
        const std::vector<ResultRow> rows = run_sweep(cfg);
        if (opt.out.empty())
            write_csv(rows, std::cout);
        else
            emit_csv(rows, opt.out);

        int failed = 0;
        for (const auto &r : rows)
            failed += std::isnan(r.rate_bps_hz) ? 1 : 0;
        std::fprintf(stderr, "%zu rows (%s sweep), %d failed runs\n", rows.size(), to_string(cfg.sweep).c_str(),
                     failed);
        return 0;
    }

    // Closed-form minimum detection error against the noise-distribution grid oracle, at the
    // configured parameters and at seeded random (rho, v) draws.
    int cmd_verify_dep(const Options &opt)
    {
        const ExperimentConfig cfg = resolve(opt);
        Rng rng(derive_seed(cfg.seed, 0x646570ULL));
        double worst = 0.0;
        const auto t0 = std::chrono::steady_clock::now();

        SystemParams p = cfg.params;
        const double sw = p.noise_willie_nominal;
        const double eta = covert_budget(p).eta;
        for (double v : {0.0, 0.5 * eta, eta})
        {
            const double closed = min_dep(v, p);
            const double oracle = dep_oracle(v, p, 10000).dep_min;
            worst = std::max(worst, std::abs(closed - oracle));
            std::printf("config  rho=%.4f v/eta=%.2f  closed=%.9f  oracle=%.9f\n", p.noise_uncertainty,
                        eta > 0.0 ? v / eta : 0.0, closed, oracle);
        }
        for (int i = 0; i < opt.draws; ++i)
        {
            p.noise_uncertainty = rng.uniform(1.1, 4.0);
            const double rho = p.noise_uncertainty;
            const double v = rng.uniform(0.0, 2.0 * sw * (rho - 1.0 / rho));
            worst = std::max(worst, std::abs(min_dep(v, p) - dep_oracle(v, p, 10000).dep_min));
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = worst <= 1e-3;
        std::printf("%d random draws, max |closed - oracle| = %.3e (%s), %.1f ms\n", opt.draws, worst,
                    ok ? "ok" : "MISMATCH", ms);
        return ok ? 0 : 1;
    }

    template <typename Fn>
    int guarded(Fn fn, const Options &opt)
    {
        try
        {
            return fn(opt);
        }
        catch (const ConfigParseError &e)
        {
            std::fprintf(stderr, "racovert: config parse error: %s\n", e.what());
            return ConfigParseError::exit_code;
        }
        catch (const ConfigDomainError &e)
        {
            std::fprintf(stderr, "racovert: invalid configuration: %s\n", e.what());
            return ConfigDomainError::exit_code;
        }
        catch (const IoError &e)
        {
            std::fprintf(stderr, "racovert: I/O error: %s\n", e.what());
            return IoError::exit_code;
        }
        catch (const std::exception &e)
        {
            std::fprintf(stderr, "racovert: %s\n", e.what());
            return 1;
        }
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Covert beamforming and antenna rotation for rotatable directional arrays"};
    app.require_subcommand(1);

    Options opt;
    std::uint64_t seed_value = 0;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", opt.config_path, "key = value configuration file");
        sub->add_option("--seed", seed_value, "base seed (overrides the config)");
        sub->add_option("--scheme", opt.scheme, "ra, fixed, random or isotropic");
    };

    CLI::App *solve = app.add_subcommand("solve", "run one scheme at the configured point and print a summary");
    add_common(solve);

    CLI::App *sweep = app.add_subcommand("sweep", "run a sweep and write result rows as CSV");
    add_common(sweep);
    sweep->add_option("--sweep", opt.sweep, "none, convergence, vs_n or vs_distance");
    sweep->add_option("--out", opt.out, "CSV output path (stdout when omitted)");

    CLI::App *dep = app.add_subcommand("verify-dep", "compare the closed-form detection error with the grid oracle");
    add_common(dep);
    dep->add_option("--draws", opt.draws, "random (rho, v) draws")->check(CLI::NonNegativeNumber);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }
    for (CLI::App *sub : {solve, sweep, dep})
        if (sub->count("--seed") > 0)
            opt.seed = seed_value;

    if (solve->parsed())
        return guarded(cmd_solve, opt);
    if (sweep->parsed())
        return guarded(cmd_sweep, opt);
    return guarded(cmd_verify_dep, opt);
}
