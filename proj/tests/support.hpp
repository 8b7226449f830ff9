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

// Shared fixtures and independent reference computations for the test binaries.

#ifndef RACOVERT_TESTS_SUPPORT_HPP
#define RACOVERT_TESTS_SUPPORT_HPP

#include "racovert/channel.hpp"
#include "racovert/random.hpp"

#include <complex>
#include <numbers>
#include <vector>

namespace racovert::testing
{
    constexpr double kPi = std::numbers::pi;

    // The default experiment layout: Bob at (20 m, pi/3), wardens at (30 m, pi/4) and (30 m, 3 pi/4).
    inline ArrayScene default_scene(int nx = 4, int ny = 4, double r_b = 20.0)
    {
        return ArrayScene(build_upa(nx, ny, 0.0625),
                          {polar_node(r_b, kPi / 3.0), polar_node(30.0, kPi / 4.0), polar_node(30.0, 3.0 * kPi / 4.0)});
    }

    // Node at range r along the direction with zenith z and azimuth a.
    inline Vec3 spherical_node(double r, double zenith, double azimuth)
    {
        return r * Vec3(std::sin(zenith) * std::cos(azimuth), std::sin(zenith) * std::sin(azimuth), std::cos(zenith));
    }

    // Random scene with nodes in the upper half-space, zenith at most max_zenith.
    inline ArrayScene random_scene(Rng &rng, int nx, int ny, int n_wardens, double max_zenith = 1.0)
    {
        std::vector<Vec3> nodes;
        for (int k = 0; k <= n_wardens; ++k)
            nodes.push_back(spherical_node(rng.uniform(10.0, 60.0), rng.uniform(0.0, max_zenith),
                                           rng.uniform(0.0, 2.0 * kPi)));
        return ArrayScene(build_upa(nx, ny, 0.0625), nodes);
    }

    inline RotationState random_angles(Rng &rng, int n, double theta_max)
    {
        Eigen::Matrix2Xd a(2, n);
        for (int i = 0; i < n; ++i)
        {
            a(0, i) = rng.uniform(0.0, theta_max);
            a(1, i) = rng.uniform(0.0, 2.0 * kPi);
        }
        return RotationState(a);
    }

    inline Beamformer random_beamformer(Rng &rng, int n, double norm = 1.0)
    {
        Beamformer w(n);
        for (int i = 0; i < n; ++i)
            w(i) = std::polar(rng.uniform(0.1, 1.0), rng.uniform(0.0, 2.0 * kPi));
        return w * (norm / w.norm());
    }

    inline ChannelVector random_channel(Rng &rng, int n, double scale = 1.0)
    {
        ChannelVector h(n);
        for (int i = 0; i < n; ++i)
            h(i) = scale * std::complex<double>(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        return h;
    }

    // Element-by-element channel coefficient written from scratch, without the library's
    // gain helpers: sqrt(S G0 cos^{2p} / (4 pi r^2)) exp(-j 2 pi r / lambda).
    inline std::complex<double> reference_coeff(const Vec3 &element, const Vec3 &node, double zenith, double azimuth,
                                                const SystemParams &p)
    {
        const Vec3 d = node - element;
        const double r = std::sqrt(d.x() * d.x() + d.y() * d.y() + d.z() * d.z());
        const double c = (std::sin(zenith) * std::cos(azimuth) * d.x() + std::sin(zenith) * std::sin(azimuth) * d.y() +
                          std::cos(zenith) * d.z()) /
                         r;
        if (c <= 0.0)
            return {0.0, 0.0};
        const double g = p.element_area_m2 * 2.0 * (2.0 * p.directivity + 1.0) * std::pow(c, 2.0 * p.directivity) /
                         (4.0 * kPi * r * r);
        return std::polar(std::sqrt(g), -2.0 * kPi * r / p.wavelength_m);
    }

    // |w^H h_k|^2 through the reference coefficients.
    inline double reference_power(const ArrayScene &scene, int k, const Eigen::Matrix2Xd &angles, const Beamformer &w,
                                  const SystemParams &p)
    {
        std::complex<double> acc = 0.0;
        for (int n = 0; n < scene.num_antennas(); ++n)
            acc += std::conj(w(n)) * reference_coeff(scene.ra_positions()[static_cast<size_t>(n)],
                                                     scene.node_positions()[static_cast<size_t>(k)], angles(0, n),
                                                     angles(1, n), p);
        return std::norm(acc);
    }

    // Central differences of f over the stacked angles (dz_1, da_1, dz_2, ...).
    template <typename F>
    Eigen::VectorXd angle_gradient_fd(F f, const Eigen::Matrix2Xd &angles, double step = 1e-6)
    {
        Eigen::VectorXd g(2 * angles.cols());
        for (Eigen::Index i = 0; i < g.size(); ++i)
        {
            Eigen::Matrix2Xd up = angles;
            Eigen::Matrix2Xd dn = angles;
            up(i % 2, i / 2) += step;
            dn(i % 2, i / 2) -= step;
            g(i) = (f(up) - f(dn)) / (2.0 * step);
        }
        return g;
    }

    inline double rel_err(const Eigen::VectorXd &a, const Eigen::VectorXd &b)
    {
        const double scale = std::max(b.norm(), 1e-300);
        return (a - b).norm() / scale;
    }

    // Best Re(w^H h0) over ||w||^2 <= pmax, |w^H h1|^2 <= eta for N = 2 by a polar grid over
    // the unit direction (cos a, sin a e^{j phi}) with the common phase removed, then a local
    // grid refinement around the best cell.
    inline double polar_grid_oracle(const ChannelVector &h0, const ChannelVector &h1, double eta, double pmax,
                                    double step = 1e-3)
    {
        auto value = [&](double a, double phi) {
            const Eigen::Vector2cd u(std::cos(a), std::polar(std::sin(a), phi));
            const double g0 = std::abs(u.dot(h0));
            const double g1 = std::abs(u.dot(h1));
            double s = std::sqrt(pmax);
            if (g1 * g1 * pmax > eta)
                s = std::sqrt(eta) / g1;
            return s * g0;
        };
        double best = -1.0, best_a = 0.0, best_phi = 0.0;
        for (double a = 0.0; a <= kPi / 2.0 + 1e-12; a += step)
            for (double phi = 0.0; phi < 2.0 * kPi; phi += step)
            {
                const double v = value(a, phi);
                if (v > best)
                {
                    best = v;
                    best_a = a;
                    best_phi = phi;
                }
            }
        double h = step;
        for (int round = 0; round < 30; ++round)
        {
            for (int i = -10; i <= 10; ++i)
                for (int j = -10; j <= 10; ++j)
                {
                    const double a = std::clamp(best_a + 0.1 * h * i, 0.0, kPi / 2.0);
                    const double phi = best_phi + 0.1 * h * j;
                    const double v = value(a, phi);
                    if (v > best)
                    {
                        best = v;
                        best_a = a;
                        best_phi = phi;
                    }
                }
            h *= 0.5;
        }
        return best;
    }

} // namespace racovert::testing

#endif
