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

#include "racovert/experiment.hpp"

#include "racovert/random.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

namespace racovert
{
    namespace
    {
        constexpr double kDeg = std::numbers::pi / 180.0;

        std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        std::vector<std::string> split(const std::string &s, char sep)
        {
            std::vector<std::string> out;
            std::string field;
            std::istringstream is(s);
            while (std::getline(is, field, sep))
                out.push_back(trim(field));
            if (!s.empty() && s.back() == sep)
                out.emplace_back();
            return out;
        }

        template <typename T>
        bool parse_number(const std::string &text, T &value)
        {
            const char *first = text.data();
            const char *last = first + text.size();
            if (first != last && *first == '+')
                ++first;
            const auto [ptr, ec] = std::from_chars(first, last, value);
            return ec == std::errc() && ptr == last && first != last;
        }

        // Typed setters keyed by config name. Each one throws std::invalid_argument on a
        // malformed value; the caller attaches the line number.
        using Setter = std::function<void(ExperimentConfig &, const std::string &)>;

        double to_double(const std::string &v)
        {
            double x = 0.0;
            if (!parse_number(v, x))
                throw std::invalid_argument("expected a number, got '" + v + "'");
            return x;
        }

        long long to_integer(const std::string &v)
        {
            long long x = 0;
            if (!parse_number(v, x))
                throw std::invalid_argument("expected an integer, got '" + v + "'");
            return x;
        }

        int to_int(const std::string &v)
        {
            const long long x = to_integer(v);
            if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
                throw std::invalid_argument("integer out of range: '" + v + "'");
            return static_cast<int>(x);
        }

        std::vector<double> to_doubles(const std::string &v)
        {
            std::vector<double> out;
            if (v.empty())
                return out;
            for (const auto &item : split(v, ','))
                out.push_back(to_double(item));
            return out;
        }

        const std::map<std::string, Setter> &setters()
        {
            static const std::map<std::string, Setter> table = {
                {"wavelength_m", [](ExperimentConfig &c, const std::string &v) { c.params.wavelength_m = to_double(v); }},
                {"element_area_m2",
                 [](ExperimentConfig &c, const std::string &v) { c.params.element_area_m2 = to_double(v); }},
                {"directivity", [](ExperimentConfig &c, const std::string &v) { c.params.directivity = to_double(v); }},
                {"noise_bob_dbm",
                 [](ExperimentConfig &c, const std::string &v) { c.params.noise_bob = dbm_to_watts(to_double(v)); }},
                {"noise_willie_dbm",
                 [](ExperimentConfig &c, const std::string &v) {
                     c.params.noise_willie_nominal = dbm_to_watts(to_double(v));
                 }},
                {"rho_db",
                 [](ExperimentConfig &c, const std::string &v) { c.params.noise_uncertainty = db_to_linear(to_double(v)); }},
                {"covert_tolerance",
                 [](ExperimentConfig &c, const std::string &v) { c.params.covert_tolerance = to_double(v); }},
                {"pmax_dbm",
                 [](ExperimentConfig &c, const std::string &v) {
                     c.pmax_dbm = to_double(v);
                     c.params.pmax = dbm_to_watts(c.pmax_dbm);
                 }},
                {"theta_max_deg",
                 [](ExperimentConfig &c, const std::string &v) { c.params.theta_max = to_double(v) * kDeg; }},
                {"nx", [](ExperimentConfig &c, const std::string &v) { c.nx = to_int(v); }},
                {"ny", [](ExperimentConfig &c, const std::string &v) { c.ny = to_int(v); }},
                {"spacing_m", [](ExperimentConfig &c, const std::string &v) { c.spacing_m = to_double(v); }},
                {"r_b_m", [](ExperimentConfig &c, const std::string &v) { c.bob.range_m = to_double(v); }},
                {"phi_b_deg", [](ExperimentConfig &c, const std::string &v) { c.bob.phi_rad = to_double(v) * kDeg; }},
                {"schemes",
                 [](ExperimentConfig &c, const std::string &v) {
                     c.schemes.clear();
                     for (const auto &name : split(v, ','))
                         c.schemes.push_back(parse_scheme(name));
                 }},
                {"realizations", [](ExperimentConfig &c, const std::string &v) { c.realizations = to_int(v); }},
                {"seed",
                 [](ExperimentConfig &c, const std::string &v) {
                     std::uint64_t s = 0;
                     if (!parse_number(v, s))
                         throw std::invalid_argument("expected an unsigned integer seed, got '" + v + "'");
                     c.seed = s;
                 }},
                {"sweep", [](ExperimentConfig &c, const std::string &v) { c.sweep = parse_sweep(v); }},
                {"grid_directivity",
                 [](ExperimentConfig &c, const std::string &v) { c.grid_directivity = to_doubles(v); }},
                {"grid_n",
                 [](ExperimentConfig &c, const std::string &v) {
                     c.grid_n.clear();
                     for (double x : to_doubles(v))
                     {
                         if (x != std::floor(x))
                             throw std::invalid_argument("grid_n entries must be integers");
                         c.grid_n.push_back(static_cast<int>(x));
                     }
                 }},
                {"grid_distance_m", [](ExperimentConfig &c, const std::string &v) { c.grid_distance_m = to_doubles(v); }},
                {"max_iters", [](ExperimentConfig &c, const std::string &v) { c.max_iters = to_int(v); }},
                {"rel_tol", [](ExperimentConfig &c, const std::string &v) { c.rel_tol = to_double(v); }},
                {"solver_tol", [](ExperimentConfig &c, const std::string &v) { c.solver_tol = to_double(v); }},
                {"init_jitter_rad", [](ExperimentConfig &c, const std::string &v) { c.init_jitter_rad = to_double(v); }},
                {"threads", [](ExperimentConfig &c, const std::string &v) { c.threads = to_int(v); }},
                {"record_runtime",
                 [](ExperimentConfig &c, const std::string &v) {
                     if (v == "true" || v == "1")
                         c.record_runtime = true;
                     else if (v == "false" || v == "0")
                         c.record_runtime = false;
                     else
                         throw std::invalid_argument("expected true or false, got '" + v + "'");
                 }},
            };
            return table;
        }

        template <typename T>
        void require_sorted(const std::vector<T> &grid, const char *name)
        {
            if (grid.empty())
                throw ConfigDomainError(std::string(name) + " must not be empty");
            if (!std::is_sorted(grid.begin(), grid.end()) ||
                std::adjacent_find(grid.begin(), grid.end()) != grid.end())
                throw ConfigDomainError(std::string(name) + " must be strictly increasing");
        }

        int square_side(int n)
        {
            int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
            return side * side == n ? side : 0;
        }

        struct SweepPoint
        {
            double key = 0.0;
            ExperimentConfig config;
        };

        std::vector<SweepPoint> sweep_points(const ExperimentConfig &config)
        {
            std::vector<SweepPoint> points;
            switch (config.sweep)
            {
            case SweepKind::none:
                points.push_back({0.0, config});
                break;
            case SweepKind::convergence:
                for (double p : config.grid_directivity)
                {
                    SweepPoint pt{p, config};
                    pt.config.params.directivity = p;
                    points.push_back(std::move(pt));
                }
                break;
            case SweepKind::vs_n:
                for (int n : config.grid_n)
                {
                    SweepPoint pt{static_cast<double>(n), config};
                    pt.config.nx = pt.config.ny = square_side(n);
                    points.push_back(std::move(pt));
                }
                break;
            case SweepKind::vs_distance:
                for (double r : config.grid_distance_m)
                {
                    SweepPoint pt{r, config};
                    pt.config.bob.range_m = r;
                    points.push_back(std::move(pt));
                }
                break;
            }
            return points;
        }

        struct Job
        {
            size_t point = 0;
            Scheme scheme = Scheme::ra;
            int realization = 0;
        };

        std::vector<ResultRow> run_job(const SweepPoint &pt, const Job &job, const ExperimentConfig &base)
        {
            const ExperimentConfig &cfg = pt.config;
            ResultRow proto;
            proto.scheme = to_string(job.scheme);
            proto.n_antennas = cfg.nx * cfg.ny;
            proto.r_b_m = cfg.bob.range_m;
            proto.pmax_dbm = cfg.pmax_dbm;
            proto.p_directivity = cfg.params.directivity;
            proto.realization = job.realization;
            proto.seed = job_seed(base.seed, pt.key, job.scheme, job.realization);

            AOConfig ao;
            ao.max_iters = cfg.max_iters;
            ao.rel_tol = cfg.rel_tol;
            ao.scheme = job.scheme;
            ao.seed = proto.seed;
            ao.solver_tol = cfg.solver_tol;
            ao.init_jitter = job.scheme == Scheme::ra ? cfg.init_jitter_rad : 0.0;

            std::vector<ResultRow> rows;
            const auto t0 = std::chrono::steady_clock::now();
            try
            {
                const AOResult res = run_scheme(cfg.scene(), cfg.params, ao);
                const double ms =
                    base.record_runtime
                        ? std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count()
                        : 0.0;
                const int last = static_cast<int>(res.rate_trace.size()) - 1;
                const int first = base.sweep == SweepKind::convergence ? 0 : last;
                for (int i = first; i <= last; ++i)
                {
                    ResultRow row = proto;
                    row.iteration = i;
                    row.rate_bps_hz = res.rate_trace[static_cast<size_t>(i)];
                    row.max_willie_power_over_eta = res.power_ratio_trace[static_cast<size_t>(i)];
                    row.runtime_ms = ms;
                    rows.push_back(std::move(row));
                }
            }
            catch (const std::exception &)
            {
                // A failed run leaves a marker row rather than aborting the sweep.
                ResultRow row = proto;
                row.rate_bps_hz = std::numeric_limits<double>::quiet_NaN();
                row.max_willie_power_over_eta = std::numeric_limits<double>::quiet_NaN();
                rows.push_back(std::move(row));
            }
            return rows;
        }

        double sweep_key(const ResultRow &row, SweepKind sweep)
        {
            switch (sweep)
            {
            case SweepKind::convergence:
                return row.p_directivity;
            case SweepKind::vs_n:
                return row.n_antennas;
            case SweepKind::vs_distance:
                return row.r_b_m;
            case SweepKind::none:
                break;
            }
            return 0.0;
        }
    } // namespace

    std::string to_string(SweepKind kind)
    {
        switch (kind)
        {
        case SweepKind::none:
            return "none";
        case SweepKind::convergence:
            return "convergence";
        case SweepKind::vs_n:
            return "vs_n";
        case SweepKind::vs_distance:
            return "vs_distance";
        }
        return "unknown";
    }

    SweepKind parse_sweep(const std::string &name)
    {
        for (SweepKind k : {SweepKind::none, SweepKind::convergence, SweepKind::vs_n, SweepKind::vs_distance})
            if (to_string(k) == name)
                return k;
        throw std::invalid_argument("unknown sweep '" + name + "' (expected none, convergence, vs_n or vs_distance)");
    }

    double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
    double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

    void ExperimentConfig::validate() const
    {
        try
        {
            params.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigDomainError(e.what());
        }
        if (!(params.noise_uncertainty > 1.0))
            throw ConfigDomainError("rho_db must be positive (noise uncertainty rho > 1)");
        if (nx < 1 || ny < 1)
            throw ConfigDomainError("nx and ny must be at least 1");
        if (!(spacing_m > 0.0))
            throw ConfigDomainError("spacing_m must be positive");
        if (!(bob.range_m > 0.0))
            throw ConfigDomainError("r_b_m must be positive");
        for (const auto &wd : wardens)
            if (!(wd.range_m > 0.0))
                throw ConfigDomainError("warden ranges must be positive");
        if (schemes.empty())
            throw ConfigDomainError("schemes must not be empty");
        if (realizations < 1)
            throw ConfigDomainError("realizations must be at least 1");
        if (max_iters < 1)
            throw ConfigDomainError("max_iters must be at least 1");
        if (!(rel_tol > 0.0) || !(solver_tol > 0.0))
            throw ConfigDomainError("rel_tol and solver_tol must be positive");
        if (init_jitter_rad < 0.0)
            throw ConfigDomainError("init_jitter_rad must be non-negative");
        if (threads < 0)
            throw ConfigDomainError("threads must be non-negative");
        require_sorted(grid_directivity, "grid_directivity");
        require_sorted(grid_n, "grid_n");
        require_sorted(grid_distance_m, "grid_distance_m");
        for (double p : grid_directivity)
            if (p < 0.0)
                throw ConfigDomainError("grid_directivity entries must be non-negative");
        for (int n : grid_n)
            if (n < 1 || square_side(n) == 0)
                throw ConfigDomainError("grid_n entries must be positive perfect squares");
        for (double r : grid_distance_m)
            if (!(r > 0.0))
                throw ConfigDomainError("grid_distance_m entries must be positive");
    }

    ArrayScene ExperimentConfig::scene() const
    {
        std::vector<Vec3> nodes{polar_node(bob.range_m, bob.phi_rad)};
        for (const auto &wd : wardens)
            nodes.push_back(polar_node(wd.range_m, wd.phi_rad));
        return ArrayScene(build_upa(nx, ny, spacing_m), std::move(nodes));
    }

    ExperimentConfig parse_config(std::istream &in)
    {
        ExperimentConfig config;
        std::set<std::string> seen;
        std::optional<std::vector<double>> warden_r;
        std::optional<std::vector<double>> warden_phi;
        std::string line;
        int line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigParseError(line_no, "expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            const auto it = setters().find(key);
            const bool warden_key = key == "warden_r_m" || key == "warden_phi_deg";
            if (it == setters().end() && !warden_key)
                throw ConfigParseError(line_no, "unknown key '" + key + "'");
            if (!seen.insert(key).second)
                throw ConfigParseError(line_no, "duplicate key '" + key + "'");
            try
            {
                if (key == "warden_r_m")
                    warden_r = to_doubles(value);
                else if (key == "warden_phi_deg")
                    warden_phi = to_doubles(value);
                else
                    it->second(config, value);
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigParseError(line_no, key + ": " + e.what());
            }
        }
        if (in.bad())
            throw IoError("read error while parsing config");
        // Warden lists override the defaults together or one at a time at the default count.
        if (warden_r || warden_phi)
        {
            const size_t count = warden_r ? warden_r->size() : warden_phi->size();
            if ((warden_r && warden_r->size() != count) || (warden_phi && warden_phi->size() != count) ||
                (!(warden_r && warden_phi) && count != config.wardens.size()))
                throw ConfigDomainError("warden_r_m and warden_phi_deg must list the same number of wardens");
            config.wardens.resize(count);
            for (size_t i = 0; i < count; ++i)
            {
                if (warden_r)
                    config.wardens[i].range_m = (*warden_r)[i];
                if (warden_phi)
                    config.wardens[i].phi_rad = (*warden_phi)[i] * kDeg;
            }
        }
        config.validate();
        return config;
    }

    ExperimentConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open config file '" + path + "'");
        return parse_config(in);
    }

    std::uint64_t job_seed(std::uint64_t base, double sweep_key, Scheme scheme, int realization)
    {
        return derive_seed(base, std::bit_cast<std::uint64_t>(sweep_key), static_cast<std::uint64_t>(scheme),
                           static_cast<std::uint64_t>(realization));
    }

    std::vector<ResultRow> run_sweep(const ExperimentConfig &config)
    {
        config.validate();
        const std::vector<SweepPoint> points = sweep_points(config);
        std::vector<Job> jobs;
        for (size_t p = 0; p < points.size(); ++p)
            for (Scheme s : config.schemes)
                for (int r = 0; r < config.realizations; ++r)
                    jobs.push_back({p, s, r});

        std::vector<std::vector<ResultRow>> results(jobs.size());
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t j = next++; j < jobs.size(); j = next++)
                results[j] = run_job(points[jobs[j].point], jobs[j], config);
        };

        unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                                : std::max(1u, std::thread::hardware_concurrency());
        n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(std::max<size_t>(jobs.size(), 1)));
        if (n_threads <= 1)
        {
            worker();
        }
        else
        {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < n_threads; ++t)
                pool.emplace_back(worker);
            for (auto &th : pool)
                th.join();
        }

        std::vector<ResultRow> rows;
        for (auto &chunk : results)
            for (auto &row : chunk)
                rows.push_back(std::move(row));
        sort_rows(rows, config.sweep);
        return rows;
    }

    void sort_rows(std::vector<ResultRow> &rows, SweepKind sweep)
    {
        std::stable_sort(rows.begin(), rows.end(), [sweep](const ResultRow &a, const ResultRow &b) {
            if (a.scheme != b.scheme)
                return a.scheme < b.scheme;
            const double ka = sweep_key(a, sweep);
            const double kb = sweep_key(b, sweep);
            if (ka != kb)
                return ka < kb;
            if (a.realization != b.realization)
                return a.realization < b.realization;
            return a.iteration < b.iteration;
        });
    }

    const char *const kCsvHeader = "scheme,n_antennas,r_b_m,pmax_dbm,p_directivity,realization,iteration,"
                                   "rate_bps_hz,max_willie_power_over_eta,runtime_ms,seed";

    void write_csv(const std::vector<ResultRow> &rows, std::ostream &out)
    {
        out << kCsvHeader << '\n';
        char buf[512];
        for (const auto &r : rows)
        {
            std::snprintf(buf, sizeof(buf), "%s,%d,%.12g,%.12g,%.12g,%d,%d,%.12g,%.12g,%.12g,%" PRIu64 "\n",
                          r.scheme.c_str(), r.n_antennas, r.r_b_m, r.pmax_dbm, r.p_directivity, r.realization,
                          r.iteration, r.rate_bps_hz, r.max_willie_power_over_eta, r.runtime_ms, r.seed);
            out << buf;
        }
    }

    void emit_csv(const std::vector<ResultRow> &rows, const std::string &path)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open '" + path + "' for writing");
        write_csv(rows, out);
        out.flush();
        if (!out)
            throw IoError("write to '" + path + "' failed");
    }

    std::vector<ResultRow> parse_csv(std::istream &in)
    {
        std::string line;
        if (!std::getline(in, line) || line != kCsvHeader)
            throw ConfigParseError(1, "missing or unexpected CSV header");
        std::vector<ResultRow> rows;
        int line_no = 1;
        while (std::getline(in, line))
        {
            ++line_no;
            if (line.empty())
                continue;
            const auto f = split(line, ',');
            if (f.size() != 11)
                throw ConfigParseError(line_no, "expected 11 fields");
            ResultRow r;
            r.scheme = f[0];
            const bool ok = parse_number(f[1], r.n_antennas) && parse_number(f[2], r.r_b_m) &&
                            parse_number(f[3], r.pmax_dbm) && parse_number(f[4], r.p_directivity) &&
                            parse_number(f[5], r.realization) && parse_number(f[6], r.iteration) &&
                            parse_number(f[7], r.rate_bps_hz) && parse_number(f[8], r.max_willie_power_over_eta) &&
                            parse_number(f[9], r.runtime_ms) && parse_number(f[10], r.seed);
            if (!ok)
                throw ConfigParseError(line_no, "malformed field");
            rows.push_back(std::move(r));
        }
        return rows;
    }

} // namespace racovert
