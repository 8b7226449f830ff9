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

#ifndef RACOVERT_COVERTNESS_HPP
#define RACOVERT_COVERTNESS_HPP

#include "racovert/channel.hpp"

namespace racovert
{
    // Warden detection model.
    //
    // Each warden averages L samples of its received power and compares the average T_w
    // against a threshold Gamma. For large L the statistic concentrates at the true noise
    // power sigma_w^2 (no transmission) or sigma_w^2 + v (transmission present), where
    // v = |w^H h_k|^2. The noise power itself is unknown within a factor rho of its nominal
    // value and follows the log-uniform law with density 1 / (2 x ln rho) on
    // [sigma~^2 / rho, rho sigma~^2]. With equal priors the detection error probability is
    //
    //     xi(Gamma) = 1 - Pr(Gamma - v < sigma_w^2 < Gamma),
    //
    // minimized at Gamma* = sigma~^2 / rho + v.

    struct DetectionOutcome
    {
        double dep_min = 1.0;
        double optimal_threshold = 0.0;
        double received_power = 0.0;
    };

    struct CovertBudget
    {
        double eta = 0.0; // largest warden power keeping the minimum DEP >= 1 - delta
    };

    inline double willie_power(const Beamformer &w, const ChannelVector &hk) { return received_power(w, hk); }

    // 1 - ln(1 + rho v / sigma~^2) / (2 ln rho), clamped to [0, 1].
    // Throws std::domain_error when rho == 1.
    double min_dep(double v, const SystemParams &params);

    // Threshold sigma~^2 / rho + v attaining min_dep.
    double optimal_threshold(double v, const SystemParams &params);

    DetectionOutcome detection_outcome(double v, const SystemParams &params);

    CovertBudget covert_budget(const SystemParams &params);

    // Log-uniform CDF of the warden noise power.
    double noise_power_cdf(double x, const SystemParams &params);

    // Brute-force grid minimization of xi(Gamma) over [sigma~^2 / rho, rho sigma~^2 + v].
    struct DepOracleResult
    {
        double dep_min = 1.0;
        double gamma_star = 0.0;
    };
    DepOracleResult dep_oracle(double v, const SystemParams &params, int grid_size);

} // namespace racovert

#endif
