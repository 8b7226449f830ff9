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

#include "racovert/rotation.hpp"

#include <algorithm>

namespace racovert
{
    namespace
    {
        constexpr double kCosFloor = 1e-9;
        constexpr int kMaxHalvings = 10;

        double wavenumber(const SystemParams &params) { return 2.0 * std::numbers::pi / params.wavelength_m; }

        // Amplitude-phase phasor z_n with |w^H h_k|^2 = |sum_n z_n P_n|^2.
        Eigen::VectorXcd pair_phasors(const ArrayScene &scene, int k, const Beamformer &w, const SystemParams &params)
        {
            const int n_ant = scene.num_antennas();
            const double base = std::sqrt(params.element_area_m2 * params.boresight_gain() / (4.0 * std::numbers::pi));
            const double kw = wavenumber(params);
            Eigen::VectorXcd z(n_ant);
            for (int n = 0; n < n_ant; ++n)
            {
                const double r = scene.distance(k, n);
                z(n) = w(n) * std::polar(base / r, kw * r);
            }
            return z;
        }

        SurrogateQuadratic build_surrogate(const ArrayScene &scene, const RotationState &rotation, const Beamformer &w,
                                           const SystemParams &params, int k, bool concave)
        {
            const int n_ant = scene.num_antennas();
            if (rotation.size() != n_ant || w.size() != n_ant)
                throw std::invalid_argument("surrogate: rotation, beamformer and array sizes differ");
            const double p = params.directivity;

            Eigen::VectorXd cos_eps(n_ant), pw(n_ant), slope(n_ant);
            Eigen::Matrix2Xd grads(2, n_ant);
            for (int n = 0; n < n_ant; ++n)
            {
                const Vec3 &qhat = scene.unit_dir(k, n);
                cos_eps(n) = incidence_cosine(rotation.pointing(n), qhat);
                if (concave && cos_eps(n) < 0.0)
                    throw std::domain_error("objective_surrogate: expansion point outside pattern support");
                grads.col(n) = cos_eps_gradient(rotation.angles().col(n), qhat);
                if (cos_eps(n) > 0.0)
                {
                    pw(n) = std::pow(cos_eps(n), p);
                    slope(n) = p == 0.0 ? 0.0 : p * std::pow(std::max(cos_eps(n), kCosFloor), p - 1.0);
                }
                else
                {
                    pw(n) = 0.0;
                    slope(n) = 0.0;
                }
            }

            const Eigen::VectorXcd z = pair_phasors(scene, k, w, params);
            const std::complex<double> field = z.cwiseProduct(pw.cast<std::complex<double>>()).sum();

            SurrogateQuadratic sq;
            sq.c = std::norm(field);
            sq.b = Eigen::VectorXd::Zero(2 * n_ant);
            sq.block_scalars = Eigen::VectorXd::Zero(n_ant);
            for (int n = 0; n < n_ant; ++n)
            {
                if (slope(n) == 0.0)
                    continue;
                // sum_m W_nm P_m, appearing once per factor position of the symmetric pair sum.
                const double coupling = (std::conj(z(n)) * field).real();
                sq.b.segment<2>(2 * n) = 2.0 * slope(n) * coupling * grads.col(n);

                double magnitude = 0.0;
                for (int m = 0; m < n_ant; ++m)
                    magnitude += std::abs((std::conj(z(n)) * z(m)).real()) * pw(m);
                const double a = 2.0 * slope(n) * magnitude;
                sq.block_scalars(n) = concave ? std::min(-a, 0.0) : std::max(a, 0.0);
            }
            return sq;
        }
    } // namespace

    PairGeometry pair_geometry(const ArrayScene &scene, int k, int n, int m, const Beamformer &w,
                               const SystemParams &params)
    {
        const double rn = scene.distance(k, n);
        const double rm = scene.distance(k, m);
        PairGeometry g;
        g.c_nm = params.element_area_m2 * params.boresight_gain() / (4.0 * std::numbers::pi * rn * rm);
        g.psi_nm = wavenumber(params) * (rm - rn);
        g.psi_eff = g.psi_nm + (std::arg(w(m)) - std::arg(w(n)));
        return g;
    }

    double SurrogateQuadratic::value(const Eigen::VectorXd &delta) const
    {
        return as_quadratic_form().value(delta);
    }

    QuadraticForm SurrogateQuadratic::as_quadratic_form() const
    {
        QuadraticForm q;
        q.constant = c;
        q.linear = b;
        q.curvature = block_scalars.replicate(1, 2).transpose().reshaped();
        return q;
    }

    Eigen::Vector2d cos_eps_gradient(const Eigen::Vector2d &theta, const Vec3 &qhat)
    {
        const double sz = std::sin(theta(0)), cz = std::cos(theta(0));
        const double sa = std::sin(theta(1)), ca = std::cos(theta(1));
        return {cz * ca * qhat.x() + cz * sa * qhat.y() - sz * qhat.z(), -sz * sa * qhat.x() + sz * ca * qhat.y()};
    }

    double node_power(const ArrayScene &scene, int k, const RotationState &rotation, const Beamformer &w,
                      const SystemParams &params)
    {
        return received_power(w, channel_vector(scene, k, rotation, params));
    }

    SurrogateQuadratic objective_surrogate(const ArrayScene &scene, const RotationState &rotation,
                                           const Beamformer &w, const SystemParams &params)
    {
        return build_surrogate(scene, rotation, w, params, 0, true);
    }

    SurrogateQuadratic constraint_surrogate(const ArrayScene &scene, const RotationState &rotation,
                                            const Beamformer &w, const SystemParams &params, int k)
    {
        if (k < 1 || k > scene.num_wardens())
            throw std::out_of_range("constraint_surrogate: warden index out of range");
        return build_surrogate(scene, rotation, w, params, k, false);
    }

    AngleStep solve_rotation_step(const SurrogateQuadratic &obj, const std::vector<SurrogateQuadratic> &cons,
                                  const RotationState &rotation, double eta, double theta_max, double tol,
                                  AngleBounds bounds)
    {
        const int n_ant = rotation.size();
        const int nd = 2 * n_ant;
        if (obj.num_antennas() != n_ant || obj.b.size() != nd)
            throw std::invalid_argument("solve_rotation_step: objective surrogate size mismatch");
        if ((obj.block_scalars.array() > 0.0).any())
            throw std::invalid_argument("solve_rotation_step: objective surrogate is not concave");
        for (const auto &q : cons)
        {
            if (q.num_antennas() != n_ant || q.b.size() != nd)
                throw std::invalid_argument("solve_rotation_step: constraint surrogate size mismatch");
            if ((q.block_scalars.array() < 0.0).any())
                throw std::invalid_argument("solve_rotation_step: constraint surrogate is not convex");
        }

        AngleStep step;
        step.delta = Eigen::Matrix2Xd::Zero(2, n_ant);
        if (obj.b.isZero(0.0) && obj.block_scalars.isZero(0.0))
        {
            step.accepted = true;
            return step;
        }

        const int nv = nd + 1;
        const int epi = nd;
        ConicProblem prob(nv);

        // Objective in units of its value at the expansion point.
        const double obj_scale = obj.c > 0.0 ? obj.c : std::max(obj.b.cwiseAbs().maxCoeff(), 1e-300);
        QuadraticForm fq = obj.as_quadratic_form();
        fq.constant /= obj_scale;
        fq.linear /= obj_scale;
        fq.curvature /= obj_scale;
        const QuadraticFragment of = quadratic_to_socp(fq, QuadraticSense::concave_max, 0.0, nv, epi);
        prob.objective = of.objective;
        prob.cones.push_back(of.cone);

        for (const auto &q : cons)
        {
            QuadraticForm cq = q.as_quadratic_form();
            cq.constant /= eta;
            cq.linear /= eta;
            cq.curvature /= eta;
            prob.cones.push_back(quadratic_to_socp(cq, QuadraticSense::convex_leq, 1.0, nv).cone);
        }

        const double two_pi = 2.0 * std::numbers::pi;
        const double pi = std::numbers::pi;
        for (int n = 0; n < n_ant; ++n)
        {
            if (bounds == AngleBounds::box)
            {
                prob.lower(2 * n) = -rotation.zenith(n);
                prob.lower(2 * n + 1) = -rotation.azimuth(n);
                prob.upper(2 * n + 1) = two_pi - rotation.azimuth(n);
            }
            else
            {
                prob.lower(2 * n) = -theta_max - rotation.zenith(n);
                prob.lower(2 * n + 1) = -pi;
                prob.upper(2 * n + 1) = pi;
            }
            prob.upper(2 * n) = theta_max - rotation.zenith(n);
        }

        SolverSettings settings;
        settings.tol = tol;
        Eigen::VectorXd start = Eigen::VectorXd::Zero(nv);
        start(epi) = 1.0;
        settings.start = start;

        const ConicSolution sol = solve(prob, settings);
        if (sol.status != SolveStatus::optimal)
            return step;

        for (int n = 0; n < n_ant; ++n)
        {
            step.delta(0, n) = std::clamp(sol.x(2 * n), prob.lower(2 * n), prob.upper(2 * n));
            step.delta(1, n) = std::clamp(sol.x(2 * n + 1), prob.lower(2 * n + 1), prob.upper(2 * n + 1));
        }
        step.accepted = true;
        return step;
    }

    RotationState apply_step(const RotationState &rotation, const Eigen::Matrix2Xd &delta, double theta_max,
                             AngleBounds bounds)
    {
        if (delta.cols() != rotation.size())
            throw std::invalid_argument("apply_step: step size mismatch");
        const double two_pi = 2.0 * std::numbers::pi;
        Eigen::Matrix2Xd angles = rotation.angles() + delta;
        for (Eigen::Index n = 0; n < angles.cols(); ++n)
        {
            double z = angles(0, n);
            double a = angles(1, n);
            if (bounds == AngleBounds::box)
            {
                angles(0, n) = std::clamp(z, 0.0, theta_max);
                angles(1, n) = std::clamp(a, 0.0, two_pi);
                continue;
            }
            if (z < 0.0)
            {
                z = -z;
                a += std::numbers::pi;
            }
            a = std::fmod(a, two_pi);
            if (a < 0.0)
                a += two_pi;
            angles(0, n) = std::min(z, theta_max);
            angles(1, n) = a;
        }
        return RotationState(angles);
    }

    SafeguardOutcome safeguarded_update(const ArrayScene &scene, const RotationState &rotation, const Beamformer &w,
                                        const AngleStep &step, double eta, const SystemParams &params)
    {
        SafeguardOutcome out{rotation, false, 0};
        if (!step.accepted)
            return out;

        const double base = node_power(scene, 0, rotation, w, params);
        const double two_pi = 2.0 * std::numbers::pi;
        Eigen::Matrix2Xd delta = step.delta;
        for (int attempt = 0; attempt <= kMaxHalvings; ++attempt)
        {
            Eigen::Matrix2Xd angles = rotation.angles() + delta;
            angles.row(0) = angles.row(0).cwiseMax(0.0).cwiseMin(params.theta_max);
            angles.row(1) = angles.row(1).cwiseMax(0.0).cwiseMin(two_pi);
            const RotationState trial(angles);

            bool ok = node_power(scene, 0, trial, w, params) >= base;
            for (int k = 1; ok && k <= scene.num_wardens(); ++k)
                ok = node_power(scene, k, trial, w, params) <= eta;
            if (ok)
            {
                out.rotation = trial;
                out.accepted = true;
                out.backtracks = attempt;
                return out;
            }
            delta *= 0.5;
        }
        out.backtracks = kMaxHalvings;
        return out;
    }

} // namespace racovert
