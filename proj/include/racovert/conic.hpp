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

#ifndef RACOVERT_CONIC_HPP
#define RACOVERT_CONIC_HPP

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace racovert
{
    // Second-order cone constraint || lhs x + lhs_offset || <= rhs^T x + rhs_offset.
    // A cone with zero lhs rows is the linear inequality rhs^T x + rhs_offset >= 0.
    struct SecondOrderCone
    {
        Eigen::MatrixXd lhs;
        Eigen::VectorXd lhs_offset;
        Eigen::VectorXd rhs;
        double rhs_offset = 0.0;

        int dim() const { return static_cast<int>(lhs.rows()); }
        // rhs - ||lhs||, negative when violated.
        double slack(const Eigen::VectorXd &x) const;
    };

    struct LinearEquality
    {
        Eigen::VectorXd row;
        double rhs = 0.0;
    };

    // minimize objective^T x  s.t. equalities, cones, lower <= x <= upper.
    // Infinite bounds are allowed; lower == upper fixes a variable.
    struct ConicProblem
    {
        int num_vars = 0;
        Eigen::VectorXd objective;
        std::vector<LinearEquality> equalities;
        std::vector<SecondOrderCone> cones;
        Eigen::VectorXd lower;
        Eigen::VectorXd upper;

        explicit ConicProblem(int n = 0);

        // Throws std::invalid_argument on inconsistent dimensions, non-finite data or lower > upper.
        void validate() const;
    };

    enum class SolveStatus
    {
        optimal,
        infeasible,
        numeric_failure
    };

    std::string to_string(SolveStatus status);

    struct ConicSolution
    {
        Eigen::VectorXd x;
        double objective_value = 0.0;
        SolveStatus status = SolveStatus::numeric_failure;
        int iterations = 0;        // Newton steps, both phases
        double duality_gap = 0.0;  // barrier-parameter bound on the suboptimality
        double primal_residual = 0.0;
    };

    struct SolverSettings
    {
        double tol = 1e-9;      // relative duality gap target
        double barrier_growth = 20.0;
        int max_newton_steps = 3000;
        std::optional<Eigen::VectorXd> start; // hint; used when strictly feasible
    };

    // Log-barrier interior-point method with a phase-I feasibility stage. Equalities are
    // eliminated through an orthonormal null-space basis, so Newton systems are dense SPD
    // solves of size num_vars minus the equality rank. Deterministic for identical inputs.
    ConicSolution solve(const ConicProblem &problem, const SolverSettings &settings);
    ConicSolution solve(const ConicProblem &problem, double tol);

    // Quadratic model c + b^T d + 1/2 d^T diag(curvature) d over the first b.size() variables.
    struct QuadraticForm
    {
        double constant = 0.0;
        Eigen::VectorXd linear;
        Eigen::VectorXd curvature;

        double value(const Eigen::VectorXd &d) const;
    };

    enum class QuadraticSense
    {
        concave_max, // objective term, needs curvature <= 0
        convex_leq   // constraint q(d) <= rhs, needs curvature >= 0
    };

    struct QuadraticFragment
    {
        SecondOrderCone cone;
        // concave_max only: minimize objective^T x, and max q = objective_constant - min.
        Eigen::VectorXd objective;
        double objective_constant = 0.0;
    };

    // Rotated-cone embedding using the diagonal square root of |curvature|. For concave_max
    // the variable at epigraph_index bounds 1/2 d^T |A| d from above; it is ignored for
    // convex_leq. Throws std::invalid_argument when curvature signs contradict the sense.
    QuadraticFragment quadratic_to_socp(const QuadraticForm &q, QuadraticSense sense, double rhs, int num_vars,
                                        int epigraph_index = -1);

} // namespace racovert

#endif
