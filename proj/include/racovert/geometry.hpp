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

#ifndef RACOVERT_GEOMETRY_HPP
#define RACOVERT_GEOMETRY_HPP

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace racovert
{
    template <typename Scalar>
    using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
    using Vec3 = Vec3T<double>;

    // Physical constants and budgets. All powers in linear watts.
    struct SystemParams
    {
        double wavelength_m = 0.125;
        double element_area_m2 = 0.00390625; // (lambda/2)^2
        double directivity = 1.0;            // p
        double noise_bob = 1e-12;            // sigma_b^2
        double noise_willie_nominal = 1e-12; // nominal warden noise power
        double noise_uncertainty = std::pow(10.0, 0.3); // rho, linear
        double covert_tolerance = 0.01;                 // delta
        double pmax = 1.0;
        double theta_max = std::numbers::pi / 6.0;

        // Maximum boresight gain, fixed by power conservation over the hemisphere.
        double boresight_gain() const { return 2.0 * (2.0 * directivity + 1.0); }

        // Throws std::invalid_argument naming the first violated bound.
        void validate() const;
    };

    // Element grid on the z = 0 plane, centered at the origin, x index running fastest.
    std::vector<Vec3> build_upa(int nx, int ny, double spacing_m);

    // Array positions plus the Bob (index 0) and warden (1..K) positions with cached
    // distances r_{k,n} and unit directions from element n toward node k.
    class ArrayScene
    {
    public:
        ArrayScene(std::vector<Vec3> ra_positions, std::vector<Vec3> node_positions);

        int num_antennas() const { return static_cast<int>(ra_positions_.size()); }
        int num_nodes() const { return static_cast<int>(node_positions_.size()); }
        int num_wardens() const { return num_nodes() - 1; }

        const std::vector<Vec3> &ra_positions() const { return ra_positions_; }
        const std::vector<Vec3> &node_positions() const { return node_positions_; }

        double distance(int k, int n) const { return distances_(k, n); }
        const Vec3 &unit_dir(int k, int n) const { return unit_dirs_[static_cast<size_t>(k * num_antennas() + n)]; }
        const Eigen::MatrixXd &distances() const { return distances_; }

    private:
        std::vector<Vec3> ra_positions_;
        std::vector<Vec3> node_positions_;
        Eigen::MatrixXd distances_;  // (K+1) x N
        std::vector<Vec3> unit_dirs_; // row-major (k, n)
    };

    // Node on the x-z plane at range r and elevation phi: (r cos phi, 0, r sin phi).
    inline Vec3 polar_node(double range_m, double phi_rad)
    {
        return {range_m * std::cos(phi_rad), 0.0, range_m * std::sin(phi_rad)};
    }

    template <typename Scalar>
    Vec3T<Scalar> pointing_vector(Scalar theta_z, Scalar theta_a)
    {
        using std::cos;
        using std::sin;
        return {sin(theta_z) * cos(theta_a), sin(theta_z) * sin(theta_a), cos(theta_z)};
    }

    template <typename Scalar>
    Scalar incidence_cosine(const Vec3T<Scalar> &f, const Vec3T<Scalar> &qhat)
    {
        return f.dot(qhat);
    }

    // Boresight angles of every element: column n holds (theta_z, theta_a).
    class RotationState
    {
    public:
        RotationState() = default;
        explicit RotationState(Eigen::Matrix2Xd angles) : angles_(std::move(angles)) {}

        static RotationState zeros(int n) { return RotationState(Eigen::Matrix2Xd::Zero(2, n)); }

        int size() const { return static_cast<int>(angles_.cols()); }
        const Eigen::Matrix2Xd &angles() const { return angles_; }
        double zenith(int n) const { return angles_(0, n); }
        double azimuth(int n) const { return angles_(1, n); }
        Vec3 pointing(int n) const { return pointing_vector(zenith(n), azimuth(n)); }

        // True when every zenith lies in [0, theta_max] and every azimuth in [0, 2 pi].
        bool within_bounds(double theta_max) const;

    private:
        Eigen::Matrix2Xd angles_;
    };

} // namespace racovert

#endif
