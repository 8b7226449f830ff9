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

#include "racovert/covertness.hpp"

#include <algorithm>

namespace racovert
{
    double min_dep(double v, const SystemParams &params)
    {
        const double rho = params.noise_uncertainty;
        if (!(rho > 1.0))
            throw std::domain_error("min_dep: degenerate noise-uncertainty model (rho must exceed 1)");
        if (v < 0.0)
            throw std::invalid_argument("min_dep: received power must be non-negative");
        const double xi = 1.0 - std::log1p(rho * v / params.noise_willie_nominal) / (2.0 * std::log(rho));
        return std::clamp(xi, 0.0, 1.0);
    }

    double optimal_threshold(double v, const SystemParams &params)
    {
        return params.noise_willie_nominal / params.noise_uncertainty + v;
    }

    DetectionOutcome detection_outcome(double v, const SystemParams &params)
    {
        return {min_dep(v, params), optimal_threshold(v, params), v};
    }

    CovertBudget covert_budget(const SystemParams &params)
    {
        const double rho = params.noise_uncertainty;
        const double s2 = params.noise_willie_nominal;
        const double full_range = s2 * (rho - 1.0 / rho);
        const double tolerance_limited = std::expm1(2.0 * params.covert_tolerance * std::log(rho)) * s2 / rho;
        return {std::min(full_range, tolerance_limited)};
    }

    double noise_power_cdf(double x, const SystemParams &params)
    {
        const double rho = params.noise_uncertainty;
        if (!(x > 0.0))
            return 0.0;
        const double f = std::log(x * rho / params.noise_willie_nominal) / (2.0 * std::log(rho));
        return std::clamp(f, 0.0, 1.0);
    }

    DepOracleResult dep_oracle(double v, const SystemParams &params, int grid_size)
    {
        if (grid_size < 1000)
            throw std::invalid_argument("dep_oracle: grid_size must be at least 1000");
        const double rho = params.noise_uncertainty;
        const double s2 = params.noise_willie_nominal;
        const double lo = s2 / rho;
        const double hi = rho * s2 + v;

        DepOracleResult best{2.0, lo};
        for (int i = 0; i < grid_size; ++i)
        {
            const double gamma = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_size - 1);
            const double xi = 1.0 - (noise_power_cdf(gamma, params) - noise_power_cdf(gamma - v, params));
            if (xi < best.dep_min)
                best = {xi, gamma};
        }
        best.dep_min = std::clamp(best.dep_min, 0.0, 1.0);
        return best;
    }

} // namespace racovert
