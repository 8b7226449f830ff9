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

#ifndef RACOVERT_ROTATION_HPP
#define RACOVERT_ROTATION_HPP

#include "racovert/channel.hpp"
#include "racovert/conic.hpp"

namespace racovert
{
    // Rotation subproblem with w held fixed.
    //
    // For node k the received power expands over antenna pairs as
    //
    //     |w^H h_k(Theta)|^2 = sum_n sum_m W_nm P_n P_m,
    //     W_nm = |w_n||w_m| c_nm cos(psi_eff_nm),   P_n = cos^p(eps_{k,n}(theta_n)),
    //
    // with c_nm = S G0 / (4 pi r_n r_m), psi_nm = 2 pi (r_m - r_n) / lambda and
    // psi_eff_nm = psi_nm + (arg w_m - arg w_n). Each cos^p factor is replaced by its
    // second-order expansion with the Hessian of cos(eps) swapped for -I or +I, picked per
    // pair so the aggregated per-antenna curvature has the sign the surrogate needs.
    // Cross-antenna curvature is dropped, so the model is local rather than a certified
    // bound; safeguarded_update restores monotonicity against the true functions.

    struct PairGeometry
    {
        double c_nm = 0.0;
        double psi_nm = 0.0;
        double psi_eff = 0.0;
    };

    PairGeometry pair_geometry(const ArrayScene &scene, int k, int n, int m, const Beamformer &w,
                               const SystemParams &params);

    // Quadratic model c + b^T d + 1/2 sum_n a_n ||d_n||^2 in the stacked deviation
    // d = (dz_1, da_1, dz_2, da_2, ...).
    struct SurrogateQuadratic
    {
        double c = 0.0;
        Eigen::VectorXd b;
        Eigen::VectorXd block_scalars; // a_n, one per antenna

        int num_antennas() const { return static_cast<int>(block_scalars.size()); }
        double value(const Eigen::VectorXd &delta) const;
        QuadraticForm as_quadratic_form() const;
    };

    struct AngleStep
    {
        Eigen::Matrix2Xd delta;
        bool accepted = false;
        int backtracks = 0;
    };

    // d cos(eps) / d(theta_z, theta_a) for cos(eps) = f(theta)^T qhat.
    Eigen::Vector2d cos_eps_gradient(const Eigen::Vector2d &theta, const Vec3 &qhat);

    // |w^H h_k(Theta)|^2 by direct channel evaluation.
    double node_power(const ArrayScene &scene, int k, const RotationState &rotation, const Beamformer &w,
                      const SystemParams &params);

    // Concave model of |w^H h_0(Theta)|^2 at the expansion point (all a_n <= 0).
    // Throws std::domain_error when any element faces away from the receiver.
    SurrogateQuadratic objective_surrogate(const ArrayScene &scene, const RotationState &rotation,
                                           const Beamformer &w, const SystemParams &params);

    // Convex model of the power at warden k, 1 <= k <= K (all a_n >= 0).
    SurrogateQuadratic constraint_surrogate(const ArrayScene &scene, const RotationState &rotation,
                                            const Beamformer &w, const SystemParams &params, int k);

    // Step bounds. box keeps 0 <= zenith <= theta_max and 0 <= azimuth <= 2 pi literally.
    // through_zenith lets the zenith pass through zero (|zenith + d| <= theta_max) and limits
    // azimuth moves to [-pi, pi]; apply_step then folds the result back into the box without
    // changing any pointing vector.
    enum class AngleBounds
    {
        box,
        through_zenith
    };

    // maximize obj(d) s.t. cons_k(d) <= eta and the angle bounds around the expansion point.
    // An infeasible or failed solve yields a zero step with accepted = false.
    AngleStep solve_rotation_step(const SurrogateQuadratic &obj, const std::vector<SurrogateQuadratic> &cons,
                                  const RotationState &rotation, double eta, double theta_max, double tol = 1e-8,
                                  AngleBounds bounds = AngleBounds::box);

    // rotation + delta, mapped to 0 <= zenith <= theta_max, 0 <= azimuth < 2 pi. Under
    // through_zenith a negative zenith z becomes (-z, azimuth + pi); under box angles are clamped.
    RotationState apply_step(const RotationState &rotation, const Eigen::Matrix2Xd &delta, double theta_max,
                             AngleBounds bounds = AngleBounds::box);

    struct SafeguardOutcome
    {
        RotationState rotation;
        bool accepted = false;
        int backtracks = 0;
    };

    // Accepts Theta + d (halving d up to 10 times) only if the true received power at the
    // receiver does not drop and every true warden power stays at or below eta.
    SafeguardOutcome safeguarded_update(const ArrayScene &scene, const RotationState &rotation, const Beamformer &w,
                                        const AngleStep &step, double eta, const SystemParams &params);

} // namespace racovert

#endif
