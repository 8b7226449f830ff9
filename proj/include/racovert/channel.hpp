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

#ifndef RACOVERT_CHANNEL_HPP
#define RACOVERT_CHANNEL_HPP

#include "racovert/geometry.hpp"

#include <complex>

namespace racovert
{
    template <typename Scalar>
    using ChannelVectorT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
    using ChannelVector = ChannelVectorT<double>;

    // Transmit weights; the radiated power is squaredNorm().
    using Beamformer = Eigen::VectorXcd;

    // G0 cos^{2p}(eps) inside the open front hemisphere, zero elsewhere (cos_eps <= 0 included).
    template <typename Scalar>
    Scalar directional_gain(Scalar cos_eps, double directivity)
    {
        using std::pow;
        if (!(cos_eps > Scalar(0)))
            return Scalar(0);
        const Scalar g0 = Scalar(2.0 * (2.0 * directivity + 1.0));
        return g0 * pow(cos_eps, Scalar(2.0 * directivity));
    }

    // Channel power gain S G(eps) / (4 pi r^2).
    template <typename Scalar>
    Scalar channel_power_gain(Scalar cos_eps, Scalar distance_m, const SystemParams &params)
    {
        const Scalar pi = Scalar(std::numbers::pi);
        return Scalar(params.element_area_m2) * directional_gain(cos_eps, params.directivity) /
               (Scalar(4) * pi * distance_m * distance_m);
    }

    // LoS coefficient from element n to node k with the element rotated to theta = (theta_z, theta_a).
    // The phase uses the exact element-to-node distance.
    inline std::complex<double> channel_coeff(const ArrayScene &scene, int k, int n, const Eigen::Vector2d &theta,
                                              const SystemParams &params)
    {
        const double r = scene.distance(k, n);
        const double cos_eps = incidence_cosine(pointing_vector(theta(0), theta(1)), scene.unit_dir(k, n));
        const double gain = channel_power_gain(cos_eps, r, params);
        if (gain == 0.0)
            return {0.0, 0.0};
        const double phase = -2.0 * std::numbers::pi * r / params.wavelength_m;
        return std::polar(std::sqrt(gain), phase);
    }

    inline ChannelVector channel_vector(const ArrayScene &scene, int k, const RotationState &rotation,
                                       const SystemParams &params)
    {
        const int n_ant = scene.num_antennas();
        if (rotation.size() != n_ant)
            throw std::invalid_argument("channel_vector: rotation state size does not match the array");
        ChannelVector h(n_ant);
        for (int n = 0; n < n_ant; ++n)
            h(n) = channel_coeff(scene, k, n, rotation.angles().col(n), params);
        return h;
    }

    // Received signal power |w^H h|^2.
    inline double received_power(const Beamformer &w, const ChannelVector &h)
    {
        if (w.size() != h.size())
            throw std::invalid_argument("received_power: length mismatch");
        return std::norm(w.dot(h)); // Eigen's dot conjugates the left operand
    }

    // log2(1 + |w^H h0|^2 / sigma_b^2) in bits/s/Hz.
    inline double covert_rate(const Beamformer &w, const ChannelVector &h0, const SystemParams &params)
    {
        return std::log2(1.0 + received_power(w, h0) / params.noise_bob);
    }

} // namespace racovert

#endif
