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

#ifndef RACOVERT_EXPERIMENT_HPP
#define RACOVERT_EXPERIMENT_HPP

#include "racovert/ao.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace racovert
{
    // Error classes carry the process exit code the CLI reports for them.
    struct ConfigParseError : std::runtime_error
    {
        ConfigParseError(int line, const std::string &what)
            : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line)
        {
        }
        int line;
        static constexpr int exit_code = 2;
    };

    struct ConfigDomainError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
        static constexpr int exit_code = 3;
    };

    struct IoError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
        static constexpr int exit_code = 4;
    };

    enum class SweepKind
    {
        none,
        convergence,
        vs_n,
        vs_distance
    };

    std::string to_string(SweepKind kind);
    // Throws std::invalid_argument for unknown names.
    SweepKind parse_sweep(const std::string &name);

    struct NodePlacement
    {
        double range_m = 0.0;
        double phi_rad = 0.0;
    };

    struct ExperimentConfig
    {
        SystemParams params;
        double pmax_dbm = 30.0; // kept alongside params.pmax for the CSV column
        int nx = 4;
        int ny = 4;
        double spacing_m = 0.0625;
        NodePlacement bob{20.0, std::numbers::pi / 3.0};
        std::vector<NodePlacement> wardens{{30.0, std::numbers::pi / 4.0}, {30.0, 3.0 * std::numbers::pi / 4.0}};

        std::vector<Scheme> schemes{Scheme::ra, Scheme::fixed, Scheme::random, Scheme::isotropic};
        int realizations = 100;
        std::uint64_t seed = 1;
        SweepKind sweep = SweepKind::none;
        std::vector<double> grid_directivity{1.0, 2.0, 4.0};
        std::vector<int> grid_n{4, 9, 16, 25, 36};
        std::vector<double> grid_distance_m{20.0, 30.0, 40.0, 50.0, 60.0};

        int max_iters = 30;
        double rel_tol = 1e-3;
        double solver_tol = 1e-8;
        double init_jitter_rad = 1e-3; // applied to ra runs only
        int threads = 0;               // 0: hardware concurrency
        bool record_runtime = false;   // runtime_ms stays 0 otherwise, keeping files reproducible

        // Throws ConfigDomainError.
        void validate() const;
        ArrayScene scene() const;
    };

    double dbm_to_watts(double dbm);
    double watts_to_dbm(double watts);
    double db_to_linear(double db);

    // Flat "key = value" text, '#' starts a comment. Absent keys keep the defaults above.
    // Throws ConfigParseError (unknown key, malformed value), ConfigDomainError.
    ExperimentConfig parse_config(std::istream &in);
    // As parse_config; throws IoError when the file cannot be read.
    ExperimentConfig load_config(const std::string &path);

    struct ResultRow
    {
        std::string scheme;
        int n_antennas = 0;
        double r_b_m = 0.0;
        double pmax_dbm = 0.0;
        double p_directivity = 0.0;
        int realization = 0;
        int iteration = 0;
        double rate_bps_hz = 0.0;               // nan for a run that failed outright
        double max_willie_power_over_eta = 0.0; // nan for a run that failed outright
        double runtime_ms = 0.0;
        std::uint64_t seed = 0;
    };

    // Seed of one job; the sweep key enters through its IEEE-754 bit pattern.
    std::uint64_t job_seed(std::uint64_t base, double sweep_key, Scheme scheme, int realization);

    // One job per (sweep point, scheme, realization), run on a worker pool. The result is
    // sorted by (scheme, sweep key, realization, iteration) whatever the completion order.
    // The convergence sweep emits every trace entry; the others emit the final iterate.
    std::vector<ResultRow> run_sweep(const ExperimentConfig &config);

    // Same order as run_sweep.
    void sort_rows(std::vector<ResultRow> &rows, SweepKind sweep);

    extern const char *const kCsvHeader;

    void write_csv(const std::vector<ResultRow> &rows, std::ostream &out);
    // Throws IoError.
    void emit_csv(const std::vector<ResultRow> &rows, const std::string &path);
    // Throws ConfigParseError on a malformed line (line numbers count the header).
    std::vector<ResultRow> parse_csv(std::istream &in);

} // namespace racovert

#endif
