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

#include "racovert/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace racovert
{
    double SecondOrderCone::slack(const Eigen::VectorXd &x) const
    {
        const double tau = rhs.dot(x) + rhs_offset;
        if (lhs.rows() == 0)
            return tau;
        return tau - (lhs * x + lhs_offset).norm();
    }

    ConicProblem::ConicProblem(int n)
        : num_vars(n),
          objective(Eigen::VectorXd::Zero(n)),
          lower(Eigen::VectorXd::Constant(n, -std::numeric_limits<double>::infinity())),
          upper(Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity()))
    {
    }

    void ConicProblem::validate() const
    {
        auto fail = [](const std::string &what)
        { throw std::invalid_argument("ConicProblem: " + what); };

        if (num_vars < 0)
            fail("negative variable count");
        if (objective.size() != num_vars)
            fail("objective length differs from num_vars");
        if (!objective.allFinite())
            fail("objective is not finite");
        if (lower.size() != num_vars || upper.size() != num_vars)
            fail("bound vectors differ from num_vars");
        for (int j = 0; j < num_vars; ++j)
        {
            if (std::isnan(lower(j)) || std::isnan(upper(j)))
                fail("NaN bound on variable " + std::to_string(j));
            if (lower(j) > upper(j))
                fail("lower bound exceeds upper bound on variable " + std::to_string(j));
        }
        for (size_t i = 0; i < equalities.size(); ++i)
        {
            const auto &eq = equalities[i];
            if (eq.row.size() != num_vars)
                fail("equality " + std::to_string(i) + " has wrong length");
            if (!eq.row.allFinite() || !std::isfinite(eq.rhs))
                fail("equality " + std::to_string(i) + " is not finite");
        }
        for (size_t i = 0; i < cones.size(); ++i)
        {
            const auto &c = cones[i];
            const std::string tag = "cone " + std::to_string(i);
            if (c.rhs.size() != num_vars)
                fail(tag + " rhs has wrong length");
            if (c.lhs.rows() > 0 && c.lhs.cols() != num_vars)
                fail(tag + " lhs has wrong column count");
            if (c.lhs_offset.size() != c.lhs.rows())
                fail(tag + " offset length differs from lhs rows");
            if (!c.lhs.allFinite() || !c.lhs_offset.allFinite() || !c.rhs.allFinite() || !std::isfinite(c.rhs_offset))
                fail(tag + " is not finite");
        }
    }

    std::string to_string(SolveStatus status)
    {
        switch (status)
        {
        case SolveStatus::optimal:
            return "optimal";
        case SolveStatus::infeasible:
            return "infeasible";
        case SolveStatus::numeric_failure:
            return "numeric-failure";
        }
        return "unknown";
    }

    namespace
    {
        // Cone in the reduced coordinates y: ||M y + u|| <= m^T y + v.
        struct ReducedCone
        {
            Eigen::MatrixXd M;
            Eigen::VectorXd u;
            Eigen::VectorXd m;
            double v = 0.0;

            double degree() const { return M.rows() == 0 ? 1.0 : 2.0; }

            bool strictly_inside(const Eigen::VectorXd &y) const
            {
                const double tau = m.dot(y) + v;
                if (!(tau > 0.0))
                    return false;
                if (M.rows() == 0)
                    return true;
                return tau - (M * y + u).norm() > 0.0;
            }

            // Adds the gradient and Hessian of -log(tau^2 - ||r||^2) (or -log tau).
            void accumulate(const Eigen::VectorXd &y, Eigen::VectorXd &grad, Eigen::MatrixXd &hess) const
            {
                const double tau = m.dot(y) + v;
                if (M.rows() == 0)
                {
                    grad.noalias() -= m / tau;
                    hess.noalias() += m * m.transpose() / (tau * tau);
                    return;
                }
                const Eigen::VectorXd r = M * y + u;
                const double rn = r.norm();
                const double g = (tau - rn) * (tau + rn);
                const Eigen::VectorXd dg = 2.0 * tau * m - 2.0 * M.transpose() * r;
                grad.noalias() -= dg / g;
                hess.noalias() -= (2.0 / g) * (m * m.transpose());
                hess.noalias() += (2.0 / g) * (M.transpose() * M);
                hess.noalias() += dg * dg.transpose() / (g * g);
            }
        };

        struct BarrierProblem
        {
            Eigen::VectorXd c;
            std::vector<ReducedCone> cones;

            double degree() const
            {
                double theta = 0.0;
                for (const auto &k : cones)
                    theta += k.degree();
                return theta;
            }

            bool strictly_feasible(const Eigen::VectorXd &y) const
            {
                return std::all_of(cones.begin(), cones.end(), [&](const ReducedCone &k) { return k.strictly_inside(y); });
            }
        };

        enum class PathOutcome
        {
            converged,
            stopped_early,
            failed
        };

        struct PathResult
        {
            PathOutcome outcome = PathOutcome::failed;
            double gap = 0.0;
        };

        Eigen::VectorXd newton_direction(const Eigen::MatrixXd &hess, const Eigen::VectorXd &grad)
        {
            Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
            if (ldlt.info() == Eigen::Success && ldlt.isPositive() && ldlt.vectorD().minCoeff() > 0.0)
                return ldlt.solve(-grad);
            const double scale = 1.0 + hess.diagonal().cwiseAbs().maxCoeff();
            Eigen::MatrixXd reg = hess;
            reg.diagonal().array() += 1e-12 * scale;
            Eigen::LDLT<Eigen::MatrixXd> ldlt_reg(reg);
            return ldlt_reg.solve(-grad);
        }

        // Follows the central path from a strictly feasible y. stop_early is polled after
        // every Newton step.
        template <typename StopFn>
        PathResult follow_path(const BarrierProblem &bp, Eigen::VectorXd &y, double tol, double growth,
                               int &newton_budget, int &iterations, StopFn stop_early)
        {
            const int dim = static_cast<int>(y.size());
            const double theta = bp.degree();
            PathResult res;
            if (theta == 0.0)
            {
                res.outcome = bp.c.norm() <= 1e-14 ? PathOutcome::converged : PathOutcome::failed;
                return res;
            }

            double t = 1.0;
            Eigen::VectorXd grad(dim);
            Eigen::MatrixXd hess(dim, dim);
            for (;;)
            {
                for (int inner = 0; inner < 200; ++inner)
                {
                    if (newton_budget-- <= 0)
                        return res;
                    grad = t * bp.c;
                    hess.setZero();
                    for (const auto &k : bp.cones)
                        k.accumulate(y, grad, hess);

                    const Eigen::VectorXd dy = newton_direction(hess, grad);
                    const double lambda2 = -grad.dot(dy);
                    if (!std::isfinite(lambda2))
                        return res;
                    const double lambda = std::sqrt(std::max(lambda2, 0.0));
                    if (lambda < 1e-7)
                        break;

                    double step = lambda > 0.25 ? 1.0 / (1.0 + lambda) : 1.0;
                    int halvings = 0;
                    while (!bp.strictly_feasible(y + step * dy))
                    {
                        step *= 0.5;
                        if (++halvings > 60)
                            return res;
                    }
                    y += step * dy;
                    ++iterations;
                    if (!y.allFinite() || y.cwiseAbs().maxCoeff() > 1e15)
                        return res;
                    if (stop_early(y))
                    {
                        res.outcome = PathOutcome::stopped_early;
                        res.gap = theta / t;
                        return res;
                    }
                }
                res.gap = theta / t;
                if (res.gap <= tol * std::max(1.0, std::abs(bp.c.dot(y))))
                {
                    res.outcome = PathOutcome::converged;
                    return res;
                }
                t *= growth;
            }
        }

        ReducedCone reduce(const SecondOrderCone &cone, const Eigen::MatrixXd &Z, const Eigen::VectorXd &xp)
        {
            ReducedCone rc;
            if (cone.lhs.rows() > 0)
            {
                rc.M = cone.lhs * Z;
                rc.u = cone.lhs * xp + cone.lhs_offset;
            }
            else
            {
                rc.M.resize(0, Z.cols());
                rc.u.resize(0);
            }
            rc.m = Z.transpose() * cone.rhs;
            rc.v = cone.rhs.dot(xp) + cone.rhs_offset;
            return rc;
        }

        SecondOrderCone bound_cone(int n, int j, double sign, double offset)
        {
            SecondOrderCone c;
            c.lhs.resize(0, n);
            c.lhs_offset.resize(0);
            c.rhs = Eigen::VectorXd::Zero(n);
            c.rhs(j) = sign;
            c.rhs_offset = offset;
            return c;
        }
    } // namespace

    ConicSolution solve(const ConicProblem &problem, const SolverSettings &settings)
    {
        problem.validate();
        if (!(settings.tol > 0.0) || !(settings.barrier_growth > 1.0))
            throw std::invalid_argument("solve: tolerance must be positive and barrier growth above 1");

        const int n = problem.num_vars;
        ConicSolution sol;
        sol.x = Eigen::VectorXd::Zero(n);

        // Equalities, including variables fixed by coincident bounds.
        std::vector<std::pair<Eigen::VectorXd, double>> eq_rows;
        for (const auto &eq : problem.equalities)
            eq_rows.emplace_back(eq.row, eq.rhs);
        std::vector<SecondOrderCone> ineqs = problem.cones;
        for (int j = 0; j < n; ++j)
        {
            const double lo = problem.lower(j), hi = problem.upper(j);
            if (lo == hi)
            {
                eq_rows.emplace_back(Eigen::VectorXd::Unit(n, j), lo);
                continue;
            }
            if (std::isfinite(lo))
                ineqs.push_back(bound_cone(n, j, 1.0, -lo));
            if (std::isfinite(hi))
                ineqs.push_back(bound_cone(n, j, -1.0, hi));
        }

        Eigen::VectorXd xp = Eigen::VectorXd::Zero(n);
        Eigen::MatrixXd Z = Eigen::MatrixXd::Identity(n, n);
        double eq_residual = 0.0;
        if (!eq_rows.empty())
        {
            const int m = static_cast<int>(eq_rows.size());
            Eigen::MatrixXd E(m, n);
            Eigen::VectorXd f(m);
            for (int i = 0; i < m; ++i)
            {
                E.row(i) = eq_rows[static_cast<size_t>(i)].first.transpose();
                f(i) = eq_rows[static_cast<size_t>(i)].second;
            }
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(E, Eigen::ComputeThinU | Eigen::ComputeFullV);
            const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
            svd.setThreshold(1e-12);
            const int rank = static_cast<int>(smax > 0.0 ? svd.rank() : 0);
            xp = svd.solve(f);
            eq_residual = (E * xp - f).cwiseAbs().maxCoeff();
            if (eq_residual > 1e-9 * (1.0 + f.cwiseAbs().maxCoeff()))
            {
                sol.status = SolveStatus::infeasible;
                sol.x = xp;
                sol.primal_residual = eq_residual;
                return sol;
            }
            Z = svd.matrixV().rightCols(n - rank);
        }
        const int nz = static_cast<int>(Z.cols());

        BarrierProblem phase2;
        phase2.c = Z.transpose() * problem.objective;
        for (const auto &c : ineqs)
            phase2.cones.push_back(reduce(c, Z, xp));

        auto finish = [&](const Eigen::VectorXd &z, SolveStatus status, double gap)
        {
            sol.x = xp + Z * z;
            sol.objective_value = problem.objective.dot(sol.x);
            sol.status = status;
            sol.duality_gap = gap;
            double viol = eq_residual;
            for (const auto &c : problem.cones)
                viol = std::max(viol, -c.slack(sol.x));
            for (int j = 0; j < n; ++j)
            {
                if (std::isfinite(problem.lower(j)))
                    viol = std::max(viol, problem.lower(j) - sol.x(j));
                if (std::isfinite(problem.upper(j)))
                    viol = std::max(viol, sol.x(j) - problem.upper(j));
            }
            sol.primal_residual = viol;
            return sol;
        };

        Eigen::VectorXd z = Eigen::VectorXd::Zero(nz);
        if (settings.start && settings.start->size() == n)
        {
            const Eigen::VectorXd hint = Z.transpose() * (*settings.start - xp);
            if (phase2.strictly_feasible(hint))
                z = hint;
        }

        if (nz == 0)
        {
            const bool ok = std::all_of(phase2.cones.begin(), phase2.cones.end(),
                                        [&](const ReducedCone &k) { return k.m.dot(z) + k.v >= -1e-12; });
            return finish(z, ok ? SolveStatus::optimal : SolveStatus::infeasible, 0.0);
        }

        int budget = settings.max_newton_steps;
        if (!phase2.strictly_feasible(z))
        {
            // Phase I over (z, s): every cone relaxed by s, with s >= -1 keeping it bounded.
            BarrierProblem phase1;
            phase1.c = Eigen::VectorXd::Unit(nz + 1, nz);
            double worst = 0.0;
            for (const auto &k : phase2.cones)
            {
                ReducedCone r;
                r.M.resize(k.M.rows(), nz + 1);
                r.M << k.M, Eigen::VectorXd::Zero(k.M.rows());
                r.u = k.u;
                r.m.resize(nz + 1);
                r.m << k.m, 1.0;
                r.v = k.v;
                phase1.cones.push_back(r);
                const double tau = k.m.dot(z) + k.v;
                const double rn = k.M.rows() ? (k.M * z + k.u).norm() : 0.0;
                worst = std::max(worst, rn - tau);
            }
            ReducedCone floor;
            floor.M.resize(0, nz + 1);
            floor.u.resize(0);
            floor.m = Eigen::VectorXd::Unit(nz + 1, nz);
            floor.v = 1.0;
            phase1.cones.push_back(floor);

            // ||z - z0|| <= R keeps the relaxed problem bounded along free directions.
            ReducedCone ball;
            ball.M = Eigen::MatrixXd::Zero(nz, nz + 1);
            ball.M.leftCols(nz).setIdentity();
            ball.u = -z;
            ball.m = Eigen::VectorXd::Zero(nz + 1);
            ball.v = 1e6 * (1.0 + z.norm());
            phase1.cones.push_back(ball);

            Eigen::VectorXd ys(nz + 1);
            ys << z, worst + 1.0;
            auto found = [&](const Eigen::VectorXd &y)
            { return y(nz) < -1e-4 && phase2.strictly_feasible(y.head(nz)); };
            const PathResult p1 = follow_path(phase1, ys, 1e-10, settings.barrier_growth, budget,
                                              sol.iterations, found);
            if (p1.outcome == PathOutcome::failed)
                return finish(ys.head(nz), SolveStatus::numeric_failure, p1.gap);
            if (!phase2.strictly_feasible(ys.head(nz)))
                return finish(ys.head(nz), SolveStatus::infeasible, p1.gap);
            z = ys.head(nz);
        }

        const PathResult p2 = follow_path(phase2, z, settings.tol, settings.barrier_growth, budget, sol.iterations,
                                          [](const Eigen::VectorXd &) { return false; });
        return finish(z, p2.outcome == PathOutcome::converged ? SolveStatus::optimal : SolveStatus::numeric_failure,
                      p2.gap);
    }

    ConicSolution solve(const ConicProblem &problem, double tol)
    {
        SolverSettings s;
        s.tol = tol;
        return solve(problem, s);
    }

    double QuadraticForm::value(const Eigen::VectorXd &d) const
    {
        return constant + linear.dot(d) + 0.5 * d.dot(curvature.cwiseProduct(d));
    }

    QuadraticFragment quadratic_to_socp(const QuadraticForm &q, QuadraticSense sense, double rhs, int num_vars,
                                        int epigraph_index)
    {
        const int nd = static_cast<int>(q.linear.size());
        if (q.curvature.size() != nd)
            throw std::invalid_argument("quadratic_to_socp: curvature and linear terms differ in length");
        if (nd > num_vars)
            throw std::invalid_argument("quadratic_to_socp: quadratic spans more variables than the problem has");
        for (int j = 0; j < nd; ++j)
        {
            const double a = q.curvature(j);
            if (sense == QuadraticSense::concave_max && a > 0.0)
                throw std::invalid_argument("quadratic_to_socp: concave objective has positive curvature");
            if (sense == QuadraticSense::convex_leq && a < 0.0)
                throw std::invalid_argument("quadratic_to_socp: convex constraint has negative curvature");
        }

        std::vector<int> curved;
        for (int j = 0; j < nd; ++j)
            if (q.curvature(j) != 0.0)
                curved.push_back(j);

        QuadraticFragment frag;
        SecondOrderCone &cone = frag.cone;
        cone.rhs = Eigen::VectorXd::Zero(num_vars);

        if (sense == QuadraticSense::convex_leq)
        {
            // 1/2 sum a_j d_j^2 <= s with s = rhs - c - b^T d, as ||(sqrt(2a) d, s - 1)|| <= s + 1.
            cone.rhs.head(nd) = -q.linear;
            cone.rhs_offset = rhs - q.constant + 1.0;
            if (curved.empty())
            {
                cone.rhs_offset -= 1.0;
                cone.lhs.resize(0, num_vars);
                cone.lhs_offset.resize(0);
                return frag;
            }
            const int rows = static_cast<int>(curved.size()) + 1;
            cone.lhs = Eigen::MatrixXd::Zero(rows, num_vars);
            cone.lhs_offset = Eigen::VectorXd::Zero(rows);
            for (size_t i = 0; i < curved.size(); ++i)
                cone.lhs(static_cast<int>(i), curved[i]) = std::sqrt(2.0 * q.curvature(curved[i]));
            cone.lhs.row(rows - 1).head(nd) = -q.linear.transpose();
            cone.lhs_offset(rows - 1) = rhs - q.constant - 1.0;
            return frag;
        }

        if (epigraph_index < nd || epigraph_index >= num_vars)
            throw std::invalid_argument("quadratic_to_socp: epigraph variable index out of range");
        // 1/2 sum |a_j| d_j^2 <= e, as ||(sqrt(2|a|) d, e - 1)|| <= e + 1.
        const int rows = static_cast<int>(curved.size()) + 1;
        cone.lhs = Eigen::MatrixXd::Zero(rows, num_vars);
        cone.lhs_offset = Eigen::VectorXd::Zero(rows);
        for (size_t i = 0; i < curved.size(); ++i)
            cone.lhs(static_cast<int>(i), curved[i]) = std::sqrt(-2.0 * q.curvature(curved[i]));
        cone.lhs(rows - 1, epigraph_index) = 1.0;
        cone.lhs_offset(rows - 1) = -1.0;
        cone.rhs(epigraph_index) = 1.0;
        cone.rhs_offset = 1.0;

        frag.objective = Eigen::VectorXd::Zero(num_vars);
        frag.objective.head(nd) = -q.linear;
        frag.objective(epigraph_index) = 1.0;
        frag.objective_constant = q.constant;
        return frag;
    }

} // namespace racovert
