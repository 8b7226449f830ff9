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

#ifndef RACOVERT_AO_HPP
#define RACOVERT_AO_HPP

#include "racovert/beamforming.hpp"
#include "racovert/rotation.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace racovert
{
    enum class Scheme
    {
        ra,        // alternating beamforming / rotation optimization
        fixed,     // all boresights at +z
        random,    // seeded uniform orientations inside the rotation range
        isotropic  // p = 0, boresights at +z
    };

    std::string to_string(Scheme scheme);
    // Throws std::invalid_argument for unknown names.
    Scheme parse_scheme(const std::string &name);

    // How a rotation step is built and accepted.
    enum class RotationAcceptance
    {
        // Step on the receiver surrogate minus the warden surrogates weighted by the
        // beamformer's KKT multipliers, whose gradient is that of the re-optimized objective.
        // Zenith may pass through zero. Theta + d is accepted (halving d up to 10 times) when
        // the beamformer re-solved there does not lower the rate; a full step that succeeds
        // is doubled while the rate keeps rising. Covertness is carried by the re-solve.
        reoptimized_beamformer,
        // Step on the receiver surrogate under the warden surrogates with w held fixed, then
        // safeguarded_update against the true powers for that w. The SOCP beamformer nulls
        // the wardens almost exactly, which confines these steps to roughly sqrt(eta / a_n).
        fixed_beamformer
    };

    struct AOConfig
    {
        int max_iters = 30;
        double rel_tol = 1e-3;
        Scheme scheme = Scheme::ra;
        std::uint64_t seed = 0;
        double solver_tol = 1e-8;
        // Half-width of a seeded uniform perturbation of the all-zero starting angles
        // (clamped into the rotation box). Zero keeps the exact all-zero start.
        double init_jitter = 0.0;
        RotationAcceptance acceptance = RotationAcceptance::reoptimized_beamformer;

        void validate() const;
    };

    struct AOResult
    {
        Beamformer w_opt;
        RotationState theta_opt;
        std::vector<double> rate_trace;        // entry 0: beamforming at the initial angles
        std::vector<double> power_ratio_trace; // max_k |w^H h_k|^2 / eta per trace entry
        std::vector<double> willie_powers;     // final iterate
        int iterations = 0;                    // rotation steps taken
        bool converged = false;
        SolveStatus status = SolveStatus::optimal;

        double final_rate() const { return rate_trace.empty() ? 0.0 : rate_trace.back(); }
    };

    struct ReoptimizedOutcome
    {
        RotationState rotation;
        BeamformingSolution beamforming;
        double rate = 0.0;
        bool accepted = false;
        int backtracks = 0;
    };

    // Tries Theta + d, Theta + d/2, ... (up to 10 halvings) and keeps the first whose
    // re-solved beamformer reaches at least incumbent_rate. When the full step succeeds,
    // 2d, 4d, ... are tried while the rate strictly improves. Angles pass through zenith zero.
    ReoptimizedOutcome reoptimized_update(const ArrayScene &scene, const RotationState &rotation,
                                          const AngleStep &step, const SystemParams &params, double incumbent_rate,
                                          double solver_tol = 1e-8);

    // Alternates beamforming (exact SOCP) and one accepted-or-rejected rotation step per iteration,
    // starting from all-zero angles, until the fractional rate increase drops below rel_tol
    // or max_iters rotation steps have been taken. A beamformer that does not beat the
    // incumbent at the new angles is discarded, so rate_trace never decreases.
    AOResult run_ao(const ArrayScene &scene, const SystemParams &params, const AOConfig &config);

    // Single beamforming solve for the fixed, random and isotropic schemes.
    AOResult run_baseline(const ArrayScene &scene, const SystemParams &params, const AOConfig &config);

    // Dispatches on config.scheme.
    AOResult run_scheme(const ArrayScene &scene, const SystemParams &params, const AOConfig &config);

    // Beamforming-only evaluation at fixed angles.
    AOResult evaluate_fixed_angles(const ArrayScene &scene, const SystemParams &params, const RotationState &rotation,
                                   double solver_tol = 1e-8);

    // log2(1 + pmax (sum_n sqrt(g0max_n))^2 / sigma_b^2) with every element at boresight toward
    // the receiver.
    double rate_upper_bound(const ArrayScene &scene, const SystemParams &params);

    // Seeded uniform orientations: zenith in [0, theta_max], azimuth in [0, 2 pi).
    RotationState random_rotation(int n_antennas, double theta_max, std::uint64_t seed);

} // namespace racovert

#endif
