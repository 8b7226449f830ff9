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

#include "racovert/beamforming.hpp"

#include <algorithm>
#include <iostream>

namespace racovert
{
    namespace
    {
        // Row vectors (a, b) with Re(x^H h) = a^T [Re x; Im x] and Im(x^H h) = b^T [Re x; Im x].
        using RowRef = Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;

        void realify(const ChannelVector &h, RowRef re_row, RowRef im_row)
        {
            const Eigen::Index n = h.size();
            re_row.head(n) = h.real().transpose();
            re_row.segment(n, n) = h.imag().transpose();
            im_row.head(n) = h.imag().transpose();
            im_row.segment(n, n) = -h.real().transpose();
        }
    } // namespace

    ConicProblem beamforming_problem(const ChannelVector &h0, const std::vector<ChannelVector> &hks, double eta,
                                     double pmax)
    {
        const int n = static_cast<int>(h0.size());
        const int nv = 2 * n + 1;
        const int t_idx = 2 * n;
        const double h0_norm = h0.norm();

        ConicProblem prob(nv);
        prob.objective(t_idx) = -1.0;

        Eigen::RowVectorXd re_row = Eigen::RowVectorXd::Zero(nv);
        Eigen::RowVectorXd im_row = Eigen::RowVectorXd::Zero(nv);
        realify(h0 / h0_norm, re_row, im_row);
        prob.equalities.push_back({im_row.transpose(), 0.0});

        SecondOrderCone ball;
        ball.lhs = Eigen::MatrixXd::Zero(2 * n, nv);
        ball.lhs.leftCols(2 * n).setIdentity();
        ball.lhs_offset = Eigen::VectorXd::Zero(2 * n);
        ball.rhs = Eigen::VectorXd::Zero(nv);
        ball.rhs_offset = 1.0;
        prob.cones.push_back(std::move(ball));

        const double warden_scale = std::sqrt(pmax / eta);
        for (const auto &hk : hks)
        {
            if (hk.size() != n)
                throw std::invalid_argument("beamforming_problem: warden channel length mismatch");
            SecondOrderCone cone;
            cone.lhs = Eigen::MatrixXd::Zero(2, nv);
            realify(hk * warden_scale, cone.lhs.row(0), cone.lhs.row(1));
            cone.lhs_offset = Eigen::VectorXd::Zero(2);
            cone.rhs = Eigen::VectorXd::Zero(nv);
            cone.rhs_offset = 1.0;
            prob.cones.push_back(std::move(cone));
        }

        SecondOrderCone cut;
        cut.lhs.resize(0, nv);
        cut.lhs_offset.resize(0);
        cut.rhs = re_row.transpose();
        cut.rhs(t_idx) = -1.0;
        prob.cones.push_back(std::move(cut));
        return prob;
    }

    BeamformingSolution solve_beamforming(const ChannelVector &h0, const std::vector<ChannelVector> &hks, double eta,
                                          double pmax, double tol)
    {
        if (!(eta > 0.0) || !(pmax > 0.0))
            throw std::invalid_argument("solve_beamforming: eta and pmax must be positive");
        const int n = static_cast<int>(h0.size());
        for (const auto &hk : hks)
            if (hk.size() != n)
                throw std::invalid_argument("solve_beamforming: channel length mismatch");

        BeamformingSolution out;
        out.w = Beamformer::Zero(n);
        const double h0_norm = h0.norm();
        if (h0_norm == 0.0)
        {
            out.status = SolveStatus::optimal;
            return out;
        }

        SolverSettings settings;
        settings.tol = tol;
        Eigen::VectorXd start = Eigen::VectorXd::Zero(2 * n + 1);
        start(2 * n) = -0.5;
        settings.start = start;

        const ConicSolution sol = solve(beamforming_problem(h0, hks, eta, pmax), settings);
        out.iterations = sol.iterations;
        if (sol.status != SolveStatus::optimal)
        {
            std::cerr << "[racovert] warning: beamforming solve ended with status " << to_string(sol.status)
                      << "; falling back to w = 0\n";
            out.status = SolveStatus::numeric_failure;
            return out;
        }

        const double scale = std::sqrt(pmax);
        Beamformer w(n);
        for (int i = 0; i < n; ++i)
            w(i) = scale * std::complex<double>(sol.x(i), sol.x(n + i));

        // Rotate the common phase so w^H h0 is real and non-negative.
        const std::complex<double> g = w.dot(h0);
        if (std::abs(g) > 0.0)
            w *= g / std::abs(g);

        // Pull the iterate strictly inside every constraint.
        double shrink = 1.0;
        const double power = w.squaredNorm();
        if (power > pmax)
            shrink = std::min(shrink, std::sqrt(pmax / power));
        for (const auto &hk : hks)
        {
            const double pk = received_power(w, hk);
            if (pk > eta)
                shrink = std::min(shrink, std::sqrt(eta / pk));
        }
        if (shrink < 1.0)
            w *= shrink * (1.0 - 1e-12);

        out.w = w;
        out.t = w.dot(h0).real();
        out.status = SolveStatus::optimal;
        return out;
    }

    BeamformingMultipliers kkt_multipliers(const Beamformer &w, const ChannelVector &h0,
                                           const std::vector<ChannelVector> &hks, double eta, double pmax,
                                           double active_rel)
    {
        const int n = static_cast<int>(w.size());
        const int k_count = static_cast<int>(hks.size());
        BeamformingMultipliers out;
        out.wardens.assign(static_cast<size_t>(k_count), 0.0);

        // Columns: power constraint, then wardens. Rows: real and imaginary parts.
        std::vector<int> active;
        std::vector<Eigen::VectorXcd> columns;
        if (w.squaredNorm() >= (1.0 - active_rel) * pmax)
        {
            active.push_back(-1);
            columns.push_back(w);
        }
        for (int k = 0; k < k_count; ++k)
            if (received_power(w, hks[static_cast<size_t>(k)]) >= (1.0 - active_rel) * eta)
            {
                active.push_back(k);
                const auto &hk = hks[static_cast<size_t>(k)];
                columns.push_back(hk * hk.dot(w));
            }
        if (active.empty())
            return out;

        Eigen::VectorXd rhs(2 * n);
        rhs << 0.5 * h0.real(), 0.5 * h0.imag();

        // Small active-set NNLS: drop the most negative multiplier until all are non-negative.
        std::vector<bool> keep(active.size(), true);
        Eigen::VectorXd coef;
        for (;;)
        {
            std::vector<int> idx;
            for (size_t i = 0; i < active.size(); ++i)
                if (keep[i])
                    idx.push_back(static_cast<int>(i));
            if (idx.empty())
                return out;
            Eigen::MatrixXd A(2 * n, static_cast<int>(idx.size()));
            for (size_t j = 0; j < idx.size(); ++j)
            {
                const auto &col = columns[static_cast<size_t>(idx[j])];
                A.col(static_cast<int>(j)) << col.real(), col.imag();
            }
            // Column scaling keeps the normal equations well conditioned.
            const Eigen::VectorXd scale = A.colwise().norm().transpose().cwiseMax(1e-300);
            const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
            coef = As.colPivHouseholderQr().solve(rhs).cwiseQuotient(scale);

            Eigen::Index worst;
            if (coef.minCoeff(&worst) >= 0.0)
            {
                for (size_t j = 0; j < idx.size(); ++j)
                {
                    const int which = active[static_cast<size_t>(idx[j])];
                    if (which < 0)
                        out.power = coef(static_cast<int>(j));
                    else
                        out.wardens[static_cast<size_t>(which)] = coef(static_cast<int>(j));
                }
                return out;
            }
            keep[static_cast<size_t>(idx[static_cast<size_t>(worst)])] = false;
        }
    }

    Beamformer mrt_closed_form(const ChannelVector &h0, double pmax)
    {
        const double nrm = h0.norm();
        if (!(nrm > 0.0))
            throw std::invalid_argument("mrt_closed_form: zero channel");
        return std::sqrt(pmax) * h0 / nrm;
    }

} // namespace racovert
