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

#ifndef RACOVERT_BEAMFORMING_HPP
#define RACOVERT_BEAMFORMING_HPP

#include "racovert/channel.hpp"
#include "racovert/conic.hpp"

namespace racovert
{
    struct BeamformingSolution
    {
        Beamformer w;
        double t = 0.0; // achieved Re(w^H h0); w^H h0 is real after phase alignment
        SolveStatus status = SolveStatus::numeric_failure;
        int iterations = 0;
    };

    // Non-negative multipliers of the active constraints at a beamforming optimum, fitted to
    // the stationarity condition h0 / 2 = power w + sum_k warden_k h_k (h_k^H w).
    struct BeamformingMultipliers
    {
        double power = 0.0;
        std::vector<double> wardens;
    };

    // Constraints count as active when within active_rel of their bound.
    BeamformingMultipliers kkt_multipliers(const Beamformer &w, const ChannelVector &h0,
                                           const std::vector<ChannelVector> &hks, double eta, double pmax,
                                           double active_rel = 1e-4);

    // Realified beamforming problem in scaled units: variables (Re x, Im x, t) with
    // w = sqrt(pmax) x and t measured in units of sqrt(pmax) ||h0||. Cone order:
    // power ball, then one cone per warden, then the linear cut Re(x^H h0) >= t.
    ConicProblem beamforming_problem(const ChannelVector &h0, const std::vector<ChannelVector> &hks, double eta,
                                     double pmax);

    // maximize Re(w^H h0) s.t. Im(w^H h0) = 0, |w^H h_k|^2 <= eta, ||w||^2 <= pmax.
    // The returned w satisfies every constraint without tolerance slack; on solver failure
    // it is the zero vector and status is numeric_failure.
    BeamformingSolution solve_beamforming(const ChannelVector &h0, const std::vector<ChannelVector> &hks, double eta,
                                          double pmax, double tol = 1e-8);

    // sqrt(pmax) h0 / ||h0||. Throws std::invalid_argument for a zero channel.
    Beamformer mrt_closed_form(const ChannelVector &h0, double pmax);

} // namespace racovert

#endif
