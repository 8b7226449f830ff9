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

#include "racovert/geometry.hpp"

#include <string>

namespace racovert
{
    void SystemParams::validate() const
    {
        auto require = [](bool ok, const char *what)
        {
            if (!ok)
                throw std::invalid_argument(std::string("SystemParams: ") + what);
        };
        require(wavelength_m > 0.0, "wavelength must be positive");
        require(element_area_m2 > 0.0, "element area must be positive");
        require(directivity >= 0.0, "directivity exponent must be non-negative");
        require(noise_bob > 0.0, "receiver noise power must be positive");
        require(noise_willie_nominal > 0.0, "nominal warden noise power must be positive");
        require(noise_uncertainty >= 1.0, "noise uncertainty must be >= 1");
        require(covert_tolerance > 0.0 && covert_tolerance < 1.0, "covertness tolerance must lie in (0, 1)");
        require(pmax > 0.0, "power budget must be positive");
        require(theta_max >= 0.0 && theta_max <= std::numbers::pi / 2.0, "theta_max must lie in [0, pi/2]");
    }

    std::vector<Vec3> build_upa(int nx, int ny, double spacing_m)
    {
        if (nx < 1 || ny < 1)
            throw std::invalid_argument("build_upa: grid dimensions must be positive");
        if (!(spacing_m > 0.0))
            throw std::invalid_argument("build_upa: spacing must be positive");

        std::vector<Vec3> pos;
        pos.reserve(static_cast<size_t>(nx) * static_cast<size_t>(ny));
        const double x0 = 0.5 * (nx - 1) * spacing_m;
        const double y0 = 0.5 * (ny - 1) * spacing_m;
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix)
                pos.emplace_back(ix * spacing_m - x0, iy * spacing_m - y0, 0.0);
        return pos;
    }

    ArrayScene::ArrayScene(std::vector<Vec3> ra_positions, std::vector<Vec3> node_positions)
        : ra_positions_(std::move(ra_positions)), node_positions_(std::move(node_positions))
    {
        if (ra_positions_.empty())
            throw std::invalid_argument("ArrayScene: at least one antenna is required");
        if (node_positions_.empty())
            throw std::invalid_argument("ArrayScene: the receiver position is required");

        const int n_ant = num_antennas();
        const int n_nodes = num_nodes();
        distances_.resize(n_nodes, n_ant);
        unit_dirs_.resize(static_cast<size_t>(n_nodes * n_ant));
        for (int k = 0; k < n_nodes; ++k)
            for (int n = 0; n < n_ant; ++n)
            {
                const Vec3 diff = node_positions_[static_cast<size_t>(k)] - ra_positions_[static_cast<size_t>(n)];
                const double r = diff.norm();
                if (!(r > 0.0))
                    throw std::invalid_argument("ArrayScene: node coincides with an antenna position");
                distances_(k, n) = r;
                unit_dirs_[static_cast<size_t>(k * n_ant + n)] = diff / r;
            }
    }

    bool RotationState::within_bounds(double theta_max) const
    {
        const double two_pi = 2.0 * std::numbers::pi;
        for (int n = 0; n < size(); ++n)
        {
            if (zenith(n) < 0.0 || zenith(n) > theta_max)
                return false;
            if (azimuth(n) < 0.0 || azimuth(n) > two_pi)
                return false;
        }
        return true;
    }

} // namespace racovert
