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

#include "racovert/ao.hpp"

#include "racovert/covertness.hpp"
#include "racovert/random.hpp"

#include <algorithm>

namespace racovert
{
    namespace
    {
        constexpr double kRateFloor = 1e-12;
        constexpr int kMaxHalvings = 10;
        constexpr int kMaxDoublings = 20;

        struct Channels
        {
            ChannelVector h0;
            std::vector<ChannelVector> wardens;
        };

        Channels channels_at(const ArrayScene &scene, const RotationState &rotation, const SystemParams &params)
        {
            Channels ch;
            ch.h0 = channel_vector(scene, 0, rotation, params);
            for (int k = 1; k <= scene.num_wardens(); ++k)
                ch.wardens.push_back(channel_vector(scene, k, rotation, params));
            return ch;
        }

        std::vector<double> warden_powers(const Beamformer &w, const Channels &ch)
        {
            std::vector<double> out;
            for (const auto &hk : ch.wardens)
                out.push_back(willie_power(w, hk));
            return out;
        }

        double max_ratio(const std::vector<double> &powers, double eta)
        {
            double r = 0.0;
            for (double p : powers)
                r = std::max(r, p / eta);
            return r;
        }

        void record(AOResult &res, const Beamformer &w, const Channels &ch, const SystemParams &params, double eta)
        {
            res.rate_trace.push_back(covert_rate(w, ch.h0, params));
            res.willie_powers = warden_powers(w, ch);
            res.power_ratio_trace.push_back(max_ratio(res.willie_powers, eta));
        }
    } // namespace

    std::string to_string(Scheme scheme)
    {
        switch (scheme)
        {
        case Scheme::ra:
            return "ra";
        case Scheme::fixed:
            return "fixed";
        case Scheme::random:
            return "random";
        case Scheme::isotropic:
            return "isotropic";
        }
        return "unknown";
    }

    Scheme parse_scheme(const std::string &name)
    {
        for (Scheme s : {Scheme::ra, Scheme::fixed, Scheme::random, Scheme::isotropic})
            if (to_string(s) == name)
                return s;
        throw std::invalid_argument("unknown scheme '" + name + "' (expected ra, fixed, random or isotropic)");
    }

    void AOConfig::validate() const
    {
        if (max_iters < 1)
            throw std::invalid_argument("AOConfig: max_iters must be at least 1");
        if (!(rel_tol > 0.0))
            throw std::invalid_argument("AOConfig: rel_tol must be positive");
        if (!(solver_tol > 0.0))
            throw std::invalid_argument("AOConfig: solver_tol must be positive");
        if (init_jitter < 0.0)
            throw std::invalid_argument("AOConfig: init_jitter must be non-negative");
    }

    RotationState random_rotation(int n_antennas, double theta_max, std::uint64_t seed)
    {
        Rng rng(seed);
        Eigen::Matrix2Xd angles(2, n_antennas);
        for (int n = 0; n < n_antennas; ++n)
        {
            angles(0, n) = rng.uniform(0.0, theta_max);
            angles(1, n) = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }
        return RotationState(angles);
    }

    AOResult evaluate_fixed_angles(const ArrayScene &scene, const SystemParams &params, const RotationState &rotation,
                                   double solver_tol)
    {
        params.validate();
        const double eta = covert_budget(params).eta;
        const Channels ch = channels_at(scene, rotation, params);
        const BeamformingSolution bf = solve_beamforming(ch.h0, ch.wardens, eta, params.pmax, solver_tol);

        AOResult res;
        res.w_opt = bf.w;
        res.theta_opt = rotation;
        res.status = bf.status;
        res.converged = true;
        record(res, bf.w, ch, params, eta);
        return res;
    }

    ReoptimizedOutcome reoptimized_update(const ArrayScene &scene, const RotationState &rotation,
                                          const AngleStep &step, const SystemParams &params, double incumbent_rate,
                                          double solver_tol)
    {
        ReoptimizedOutcome out;
        out.rotation = rotation;
        if (!step.accepted || step.delta.isZero(0.0))
            return out;

        const double eta = covert_budget(params).eta;
        auto attempt = [&](double scale, ReoptimizedOutcome &trial_out) {
            const RotationState trial =
                apply_step(rotation, scale * step.delta, params.theta_max, AngleBounds::through_zenith);
            const Channels ch = channels_at(scene, trial, params);
            BeamformingSolution bf = solve_beamforming(ch.h0, ch.wardens, eta, params.pmax, solver_tol);
            if (bf.status != SolveStatus::optimal)
                return false;
            trial_out.rotation = trial;
            trial_out.rate = covert_rate(bf.w, ch.h0, params);
            trial_out.beamforming = std::move(bf);
            return true;
        };

        double scale = 1.0;
        for (int halving = 0; halving <= kMaxHalvings; ++halving, scale *= 0.5)
        {
            ReoptimizedOutcome trial;
            if (!attempt(scale, trial) || trial.rate < incumbent_rate)
                continue;
            out = std::move(trial);
            out.accepted = true;
            out.backtracks = halving;
            break;
        }
        if (!out.accepted)
        {
            out.backtracks = kMaxHalvings;
            return out;
        }

        // The surrogate curvature bounds the fixed-beamformer Lagrangian, which is far more
        // conservative than the re-optimized rate; keep doubling while the rate improves.
        if (out.backtracks == 0)
        {
            for (int doubling = 1; doubling <= kMaxDoublings; ++doubling)
            {
                scale *= 2.0;
                ReoptimizedOutcome trial;
                if (!attempt(scale, trial) || !(trial.rate > out.rate))
                    break;
                trial.accepted = true;
                out = std::move(trial);
            }
        }
        return out;
    }

    AOResult run_ao(const ArrayScene &scene, const SystemParams &params, const AOConfig &config)
    {
        params.validate();
        config.validate();
        const double eta = covert_budget(params).eta;
        const int n_ant = scene.num_antennas();
        const double two_pi = 2.0 * std::numbers::pi;

        RotationState rotation = RotationState::zeros(n_ant);
        if (config.init_jitter > 0.0)
        {
            Rng rng(derive_seed(config.seed, 0x6a6974746572ULL));
            Eigen::Matrix2Xd angles(2, n_ant);
            for (int n = 0; n < n_ant; ++n)
            {
                angles(0, n) = std::clamp(rng.uniform(-config.init_jitter, config.init_jitter), 0.0, params.theta_max);
                angles(1, n) = std::clamp(rng.uniform(-config.init_jitter, config.init_jitter), 0.0, two_pi);
            }
            rotation = RotationState(angles);
        }

        AOResult res;
        Channels ch = channels_at(scene, rotation, params);
        BeamformingSolution bf = solve_beamforming(ch.h0, ch.wardens, eta, params.pmax, config.solver_tol);
        Beamformer w = bf.w;
        if (bf.status != SolveStatus::optimal)
            res.status = SolveStatus::numeric_failure;
        record(res, w, ch, params, eta);

        for (int it = 1; it <= config.max_iters; ++it)
        {
            SurrogateQuadratic obj;
            try
            {
                obj = objective_surrogate(scene, rotation, w, params);
            }
            catch (const std::domain_error &)
            {
                res.status = SolveStatus::numeric_failure;
                break;
            }

            if (config.acceptance == RotationAcceptance::reoptimized_beamformer)
            {
                // Penalizing warden power by the beamforming multipliers makes the model's
                // gradient the gradient of the re-optimized objective.
                const BeamformingMultipliers mult = kkt_multipliers(w, ch.h0, ch.wardens, eta, params.pmax);
                const double amplitude = std::abs(w.dot(ch.h0));
                for (int k = 1; k <= scene.num_wardens(); ++k)
                {
                    const double weight = 2.0 * amplitude * mult.wardens[static_cast<size_t>(k - 1)];
                    if (weight <= 0.0)
                        continue;
                    const SurrogateQuadratic ck = constraint_surrogate(scene, rotation, w, params, k);
                    obj.c -= weight * ck.c;
                    obj.b -= weight * ck.b;
                    obj.block_scalars -= weight * ck.block_scalars;
                }
                const AngleStep step = solve_rotation_step(obj, {}, rotation, eta, params.theta_max,
                                                           config.solver_tol, AngleBounds::through_zenith);
                const ReoptimizedOutcome upd =
                    reoptimized_update(scene, rotation, step, params, res.rate_trace.back(), config.solver_tol);
                if (upd.accepted)
                {
                    rotation = upd.rotation;
                    w = upd.beamforming.w;
                    ch = channels_at(scene, rotation, params);
                }
            }
            else
            {
                std::vector<SurrogateQuadratic> cons;
                for (int k = 1; k <= scene.num_wardens(); ++k)
                    cons.push_back(constraint_surrogate(scene, rotation, w, params, k));
                const AngleStep step =
                    solve_rotation_step(obj, cons, rotation, eta, params.theta_max, config.solver_tol);
                rotation = safeguarded_update(scene, rotation, w, step, eta, params).rotation;

                ch = channels_at(scene, rotation, params);
                bf = solve_beamforming(ch.h0, ch.wardens, eta, params.pmax, config.solver_tol);
                if (bf.status == SolveStatus::optimal)
                {
                    if (covert_rate(bf.w, ch.h0, params) >= covert_rate(w, ch.h0, params))
                        w = bf.w;
                }
                else
                {
                    res.status = SolveStatus::numeric_failure;
                }
            }

            const double prev = res.rate_trace.back();
            record(res, w, ch, params, eta);
            res.iterations = it;
            if ((res.rate_trace.back() - prev) / std::max(prev, kRateFloor) < config.rel_tol)
            {
                res.converged = true;
                break;
            }
        }

        res.w_opt = w;
        res.theta_opt = rotation;
        return res;
    }

    AOResult run_baseline(const ArrayScene &scene, const SystemParams &params, const AOConfig &config)
    {
        const int n_ant = scene.num_antennas();
        switch (config.scheme)
        {
        case Scheme::fixed:
            return evaluate_fixed_angles(scene, params, RotationState::zeros(n_ant), config.solver_tol);
        case Scheme::random:
            return evaluate_fixed_angles(scene, params, random_rotation(n_ant, params.theta_max, config.seed),
                                         config.solver_tol);
        case Scheme::isotropic:
        {
            SystemParams iso = params;
            iso.directivity = 0.0;
            return evaluate_fixed_angles(scene, iso, RotationState::zeros(n_ant), config.solver_tol);
        }
        case Scheme::ra:
            break;
        }
        throw std::invalid_argument("run_baseline: scheme must be fixed, random or isotropic");
    }

    AOResult run_scheme(const ArrayScene &scene, const SystemParams &params, const AOConfig &config)
    {
        return config.scheme == Scheme::ra ? run_ao(scene, params, config) : run_baseline(scene, params, config);
    }

    double rate_upper_bound(const ArrayScene &scene, const SystemParams &params)
    {
        double amp = 0.0;
        for (int n = 0; n < scene.num_antennas(); ++n)
            amp += std::sqrt(channel_power_gain(1.0, scene.distance(0, n), params));
        return std::log2(1.0 + params.pmax * amp * amp / params.noise_bob);
    }

} // namespace racovert
