// SPDX-License-Identifier: Apache-2.0
//
// lcxpin: simulation and optimization toolkit for leaky-coaxial-cable
// pinching-antenna downlinks
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

#ifndef LCX_DETAIL_INTERIOR_POINT_HPP
#define LCX_DETAIL_INTERIOR_POINT_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>

/*
 * Primal-dual interior-point method for small dense problems
 *
 *     minimize F(x)   subject to   A x <= b
 *
 * with F convex and twice differentiable. Each iteration takes a Newton step on
 * the modified KKT system
 *
 *     grad F(x) + A^T lambda     = 0
 *     -lambda_j (A x - b)_j      = 1/t
 *
 * reduced to the x block, followed by a backtracking line search that keeps x
 * strictly feasible and lambda strictly positive. The start point must satisfy
 * A x < b; `phase_one` finds one.
 */

namespace lcx::detail
{
    template <typename F>
    concept SmoothObjective = requires(const F &f, const Eigen::VectorXd &x) {
        { f.value(x) } -> std::convertible_to<double>;
        { f.gradient(x) } -> std::convertible_to<Eigen::VectorXd>;
        { f.hessian(x) } -> std::convertible_to<Eigen::MatrixXd>;
        { f.in_domain(x) } -> std::convertible_to<bool>;
    };

    struct IpmOptions
    {
        double tol = 1e-8;       // bound on dual residual and surrogate duality gap
        int max_iter = 200;
        double barrier_growth = 10.0;
        double armijo = 0.01;
        double backtrack = 0.5;
    };

    struct IpmResult
    {
        Eigen::VectorXd x;
        Eigen::VectorXd lambda;
        bool converged = false;
        int iterations = 0;
        double dual_residual = 0.0; // ||grad F + A^T lambda||_inf
        double gap = 0.0;           // -lambda^T (A x - b)
    };

    template <SmoothObjective F>
    IpmResult primal_dual_minimize(const F &obj, const Eigen::MatrixXd &A, const Eigen::VectorXd &b,
                                   Eigen::VectorXd x, const IpmOptions &opt = {})
    {
        const auto m = static_cast<double>(A.rows());
        Eigen::VectorXd f = A * x - b;
        if ((f.array() >= 0.0).any() || !obj.in_domain(x))
            throw std::invalid_argument("interior-point start is not strictly feasible");

        Eigen::VectorXd lambda = (-f).cwiseInverse();
        IpmResult res;

        auto residual = [&](const Eigen::VectorXd &xx, const Eigen::VectorXd &ll, const Eigen::VectorXd &ff,
                            double t) {
            Eigen::VectorXd r(xx.size() + ll.size());
            r.head(xx.size()) = obj.gradient(xx) + A.transpose() * ll;
            r.tail(ll.size()) = (-ll.cwiseProduct(ff)).array() - 1.0 / t;
            return r;
        };

        for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations)
        {
            const double gap = -f.dot(lambda);
            const Eigen::VectorXd r_dual = obj.gradient(x) + A.transpose() * lambda;
            res.dual_residual = r_dual.lpNorm<Eigen::Infinity>();
            res.gap = gap;
            if (res.dual_residual <= opt.tol && gap <= opt.tol)
            {
                res.converged = true;
                break;
            }

            const double t = opt.barrier_growth * m / gap;
            const Eigen::VectorXd r_cent = (-lambda.cwiseProduct(f)).array() - 1.0 / t;
            const Eigen::VectorXd w = lambda.cwiseQuotient(-f);
            Eigen::MatrixXd H = obj.hessian(x) + A.transpose() * w.asDiagonal() * A;
            const Eigen::VectorXd rhs = -r_dual - A.transpose() * r_cent.cwiseQuotient(f);
            const Eigen::VectorXd dx = H.ldlt().solve(rhs);
            const Eigen::VectorXd Adx = A * dx;
            const Eigen::VectorXd dl = (r_cent - lambda.cwiseProduct(Adx)).cwiseQuotient(f);

            double s_max = 1.0;
            for (Eigen::Index j = 0; j < dl.size(); ++j)
                if (dl[j] < 0.0)
                    s_max = std::min(s_max, -lambda[j] / dl[j]);
            double s = 0.99 * s_max;

            while (s > 1e-16)
            {
                const Eigen::VectorXd xn = x + s * dx;
                if (((A * xn - b).array() < 0.0).all() && obj.in_domain(xn))
                    break;
                s *= opt.backtrack;
            }

            const double r_norm = residual(x, lambda, f, t).norm();
            while (s > 1e-16)
            {
                const Eigen::VectorXd xn = x + s * dx;
                const Eigen::VectorXd ln = lambda + s * dl;
                if (residual(xn, ln, A * xn - b, t).norm() <= (1.0 - opt.armijo * s) * r_norm)
                    break;
                s *= opt.backtrack;
            }
            if (s <= 1e-16)
                break;

            x += s * dx;
            lambda += s * dl;
            f = A * x - b;
        }

        res.x = std::move(x);
        res.lambda = std::move(lambda);
        return res;
    }

    /// Linear objective c^T x.
    struct LinearObjective
    {
        Eigen::VectorXd c;
        bool in_domain(const Eigen::VectorXd &) const { return true; }
        double value(const Eigen::VectorXd &x) const { return c.dot(x); }
        Eigen::VectorXd gradient(const Eigen::VectorXd &) const { return c; }
        Eigen::MatrixXd hessian(const Eigen::VectorXd &) const { return Eigen::MatrixXd::Zero(c.size(), c.size()); }
    };

    struct PhaseOneResult
    {
        Eigen::VectorXd x;
        double margin = 0.0; // max_j (A x - b)_j at the returned point
        bool strictly_feasible = false;
    };

    /// Minimizes the largest constraint violation s over (x, s) with A x - s <= b,
    /// starting from any x0. The problem must be bounded below in s.
    inline PhaseOneResult phase_one(const Eigen::MatrixXd &A, const Eigen::VectorXd &b, const Eigen::VectorXd &x0,
                                    const IpmOptions &opt = {})
    {
        const Eigen::Index n = A.cols();
        Eigen::MatrixXd Ap(A.rows(), n + 1);
        Ap << A, -Eigen::VectorXd::Ones(A.rows());
        Eigen::VectorXd z(n + 1);
        z << x0, (A * x0 - b).maxCoeff() + 1.0;
        LinearObjective obj{Eigen::VectorXd::Unit(n + 1, n)};
        const IpmResult r = primal_dual_minimize(obj, Ap, b, z, opt);

        PhaseOneResult out;
        out.x = r.x.head(n);
        out.margin = (A * out.x - b).maxCoeff();
        out.strictly_feasible = out.margin < 0.0;
        return out;
    }
}

#endif
