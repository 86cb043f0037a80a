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

#ifndef LCX_POWER_HPP
#define LCX_POWER_HPP

#include "detail/interior_point.hpp"
#include "rate.hpp"

#include <ostream>

/*
 * Power allocation by successive convex approximation.
 *
 * With g_{k,n} = P_t / (N_c N_k) |h_{k,n}|^2 the rate of user n is a difference of
 * concave functions,
 *
 *     R_n = log2(T_n(p)) - log2(I_n(p)),
 *     T_n = sum_k g_{k,n} sum_i alpha_{k,i} p_{k,i} + sigma^2,
 *     I_n = T_n - g_{c(n),n} p_{c(n),n}.
 *
 * Slacks mu_n <= T_n and nu_n >= I_n turn the sum rate into sum log2(mu/nu). Each
 * SCA round replaces -log2(nu_n) by its tangent at nu_n^(t) and maximizes the
 * concave surrogate sum [ln mu_n - nu_n / nu_n^(t)] subject to the power budget
 * and the QoS cut mu_n >= 2^Rmin nu_n. The surrogate minorizes the true objective
 * and touches it at the expansion point, so the outer objective never decreases.
 */

namespace lcx::power
{
    class InfeasibleQos : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class SolverStall : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct DcModel
    {
        Array2<double> g;     // K x N, mW
        Array2<std::uint8_t> alpha;
        double sigma2_mw = 0.0;
        double r_min = 0.0;

        std::size_t cables() const { return g.rows(); }
        std::size_t users() const { return g.cols(); }

        std::size_t cable_of(std::size_t n) const
        {
            for (std::size_t k = 0; k < cables(); ++k)
                if (alpha(k, n))
                    return k;
            throw std::logic_error("user without cable in DC model");
        }

        /// Total received power plus noise, T_n(p).
        double total_power(const PowerAllocation &pa, std::size_t n) const
        {
            double t = sigma2_mw;
            for (std::size_t k = 0; k < cables(); ++k)
                for (std::size_t i = 0; i < users(); ++i)
                    t += g(k, n) * alpha(k, i) * pa.p(k, i);
            return t;
        }

        /// Interference plus noise, I_n(p).
        double interference_power(const PowerAllocation &pa, std::size_t n) const
        {
            double t = sigma2_mw;
            for (std::size_t k = 0; k < cables(); ++k)
                for (std::size_t i = 0; i < users(); ++i)
                    if (i != n)
                        t += g(k, n) * alpha(k, i) * pa.p(k, i);
            return t;
        }

        std::vector<double> rates(const PowerAllocation &pa) const
        {
            std::vector<double> r(users());
            for (std::size_t n = 0; n < users(); ++n)
                r[n] = std::log2(total_power(pa, n) / interference_power(pa, n));
            return r;
        }

        double sum_rate(const PowerAllocation &pa) const
        {
            double s = 0.0;
            for (double r : rates(pa))
                s += r;
            return s;
        }
    };

    inline DcModel build_dc_model(const ChannelSet &cs, const AssignmentState &st, const PhysConstants &ph,
                                  double r_min)
    {
        if (!st.valid())
            throw std::invalid_argument("assignment violates the single-cable or active-slot constraint");
        const ActiveCounts ac = active_counts(st);
        const Array2<double> h2 = effective_gains(cs, st);
        DcModel model{Array2<double>(st.cables(), st.users()), st.alpha, ph.sigma2_mw, r_min};
        for (std::size_t k = 0; k < st.cables(); ++k)
            for (std::size_t n = 0; n < st.users(); ++n)
                model.g(k, n) = ph.pt_mw /
                                (static_cast<double>(ac.serving_cables) * static_cast<double>(ac.slots_per_cable[k])) *
                                h2(k, n);
        return model;
    }

    /// Tangent of log2(nu) at nu_t, giving the surrogate objective
    /// sum_n [ln mu_n - nu_n / nu_t_n] once constants are dropped.
    struct Linearization
    {
        std::vector<double> nu_t;

        /// Surrogate in the constant-free natural-log form.
        double surrogate(const std::vector<double> &mu, const std::vector<double> &nu) const
        {
            double s = 0.0;
            for (std::size_t n = 0; n < nu_t.size(); ++n)
                s += std::log(mu[n]) - nu[n] / nu_t[n];
            return s;
        }

        /// Lower bound on sum log2(mu/nu), exact at nu = nu_t.
        double rate_lower_bound(const std::vector<double> &mu, const std::vector<double> &nu) const
        {
            double s = 0.0;
            for (std::size_t n = 0; n < nu_t.size(); ++n)
                s += std::log2(mu[n]) - std::log2(nu_t[n]) - (nu[n] - nu_t[n]) / (std::numbers::ln2 * nu_t[n]);
            return s;
        }

        /// d(rate_lower_bound)/d(nu_n).
        double nu_slope(std::size_t n) const { return -1.0 / (std::numbers::ln2 * nu_t[n]); }
    };

    inline Linearization linearize(std::vector<double> nu_t)
    {
        for (double v : nu_t)
            if (!(v > 0.0))
                throw std::invalid_argument("expansion point must be positive");
        return Linearization{std::move(nu_t)};
    }

    /// Multipliers of the subproblem constraints, in the units of the rows
    /// -p <= 0, sum p <= 1, mu - T <= 0, I - nu <= 0, 2^Rmin nu - mu <= 0.
    struct SubproblemDuals
    {
        std::vector<double> nonneg;       // per user
        std::vector<double> budget;       // per cable; zero for cables without users
        std::vector<double> signal;       // per user, 1/mW
        std::vector<double> interference; // per user, 1/mW
        std::vector<double> qos;          // per user, 1/mW
    };

    struct ScaIterate
    {
        PowerAllocation p;
        std::vector<double> mu; // mW
        std::vector<double> nu; // mW
        double objective = 0.0; // sum log2(mu/nu), bits/s/Hz
        double kkt_residual = 0.0;
        SubproblemDuals duals;
        int newton_iterations = 0;
    };

    namespace detail
    {
        // Variables x = [p_0..p_{N-1}, mu_0.., nu_0..] with p_i the power of user i on its
        // own cable. Powers are normalised by sigma^2.
        struct SurrogateObjective
        {
            std::size_t N;
            Eigen::VectorXd inv_nu_t;

            bool in_domain(const Eigen::VectorXd &x) const { return (x.segment(N, N).array() > 0.0).all(); }
            double value(const Eigen::VectorXd &x) const
            {
                return -x.segment(N, N).array().log().sum() + x.segment(2 * N, N).dot(inv_nu_t);
            }
            Eigen::VectorXd gradient(const Eigen::VectorXd &x) const
            {
                Eigen::VectorXd gr = Eigen::VectorXd::Zero(3 * N);
                gr.segment(N, N) = -x.segment(N, N).cwiseInverse();
                gr.segment(2 * N, N) = inv_nu_t;
                return gr;
            }
            Eigen::MatrixXd hessian(const Eigen::VectorXd &x) const
            {
                Eigen::MatrixXd H = Eigen::MatrixXd::Zero(3 * N, 3 * N);
                for (std::size_t n = 0; n < N; ++n)
                    H(N + n, N + n) = 1.0 / (x[N + n] * x[N + n]);
                return H;
            }
        };

        struct ConstraintRows
        {
            Eigen::MatrixXd A;
            Eigen::VectorXd b;
            std::vector<std::size_t> cable_of;
            std::vector<std::ptrdiff_t> budget_row; // per cable, -1 when unused
            Eigen::Index signal0 = 0, interf0 = 0, qos0 = 0;
        };

        inline ConstraintRows build_rows(const DcModel &m)
        {
            const std::size_t N = m.users(), K = m.cables();
            ConstraintRows c;
            c.cable_of.resize(N);
            for (std::size_t n = 0; n < N; ++n)
                c.cable_of[n] = m.cable_of(n);
            c.budget_row.assign(K, -1);
            std::size_t serving = 0;
            for (std::size_t k = 0; k < K; ++k)
                if (std::find(c.cable_of.begin(), c.cable_of.end(), k) != c.cable_of.end())
                    c.budget_row[k] = static_cast<std::ptrdiff_t>(N + serving++);

            const auto n_rows = static_cast<Eigen::Index>(N + serving + 3 * N);
            const auto n_cols = static_cast<Eigen::Index>(3 * N);
            c.A = Eigen::MatrixXd::Zero(n_rows, n_cols);
            c.b = Eigen::VectorXd::Zero(n_rows);
            c.signal0 = static_cast<Eigen::Index>(N + serving);
            c.interf0 = c.signal0 + static_cast<Eigen::Index>(N);
            c.qos0 = c.interf0 + static_cast<Eigen::Index>(N);
            const double two_r = std::exp2(m.r_min);
            const auto iN = static_cast<Eigen::Index>(N);

            for (std::size_t i = 0; i < N; ++i)
            {
                const auto ii = static_cast<Eigen::Index>(i);
                c.A(ii, ii) = -1.0;
                c.A(c.budget_row[c.cable_of[i]], ii) = 1.0;
            }
            for (std::size_t k = 0; k < K; ++k)
                if (c.budget_row[k] >= 0)
                    c.b[c.budget_row[k]] = 1.0;
            for (std::size_t n = 0; n < N; ++n)
            {
                const auto nn = static_cast<Eigen::Index>(n);
                for (std::size_t i = 0; i < N; ++i)
                {
                    const double gi = m.g(c.cable_of[i], n) / m.sigma2_mw;
                    c.A(c.signal0 + nn, static_cast<Eigen::Index>(i)) = -gi;
                    if (i != n)
                        c.A(c.interf0 + nn, static_cast<Eigen::Index>(i)) = gi;
                }
                c.A(c.signal0 + nn, iN + nn) = 1.0;
                c.b[c.signal0 + nn] = 1.0;
                c.A(c.interf0 + nn, 2 * iN + nn) = -1.0;
                c.b[c.interf0 + nn] = -1.0;
                c.A(c.qos0 + nn, 2 * iN + nn) = two_r;
                c.A(c.qos0 + nn, iN + nn) = -1.0;
            }
            return c;
        }

        /// Equal split scaled into the interior with slacks placed strictly between
        /// their bounds; strictly feasible whenever the QoS cut allows it.
        inline Eigen::VectorXd interior_guess(const DcModel &m, const ConstraintRows &c)
        {
            const std::size_t N = m.users();
            std::vector<std::size_t> count(m.cables(), 0);
            for (auto k : c.cable_of)
                ++count[k];
            Eigen::VectorXd x(3 * N);
            for (std::size_t i = 0; i < N; ++i)
                x[static_cast<Eigen::Index>(i)] = 0.9 / static_cast<double>(count[c.cable_of[i]]);
            for (std::size_t n = 0; n < N; ++n)
            {
                double T = 1.0, I = 1.0;
                for (std::size_t i = 0; i < N; ++i)
                {
                    const double v = m.g(c.cable_of[i], n) / m.sigma2_mw * x[static_cast<Eigen::Index>(i)];
                    T += v;
                    if (i != n)
                        I += v;
                }
                const double spread = std::max(T - I, 1e-300);
                x[static_cast<Eigen::Index>(N + n)] = T - 0.25 * spread;
                x[static_cast<Eigen::Index>(2 * N + n)] = I + 0.25 * spread;
            }
            return x;
        }
    }

    /// Solves one convex surrogate at expansion point nu_t (mW). Throws InfeasibleQos
    /// when no power split meets every QoS cut, SolverStall when the KKT target
    /// is not reached.
    inline ScaIterate solve_subproblem(const DcModel &model, const std::vector<double> &nu_t, double tol = 1e-8)
    {
        const Linearization lin = linearize(nu_t);
        const std::size_t N = model.users();
        const detail::ConstraintRows rows = detail::build_rows(model);

        Eigen::VectorXd x0 = detail::interior_guess(model, rows);
        if (!((rows.A * x0 - rows.b).array() < 0.0).all())
        {
            lcx::detail::IpmOptions p1;
            p1.tol = 1e-10;
            const auto ph1 = lcx::detail::phase_one(rows.A, rows.b, x0, p1);
            if (!ph1.strictly_feasible)
                throw InfeasibleQos("no power allocation satisfies the minimum-rate constraints");
            x0 = ph1.x;
        }

        detail::SurrogateObjective obj{N, Eigen::VectorXd(N)};
        for (std::size_t n = 0; n < N; ++n)
            obj.inv_nu_t[static_cast<Eigen::Index>(n)] = model.sigma2_mw / lin.nu_t[n];

        lcx::detail::IpmOptions opt;
        opt.tol = tol;
        const auto res = lcx::detail::primal_dual_minimize(obj, rows.A, rows.b, x0, opt);
        if (!res.converged)
            throw SolverStall("interior-point solver did not reach the KKT tolerance");

        ScaIterate it;
        it.p.p = Array2<double>(model.cables(), N, 0.0);
        it.mu.resize(N);
        it.nu.resize(N);
        const double s2 = model.sigma2_mw;
        for (std::size_t n = 0; n < N; ++n)
        {
            const auto nn = static_cast<Eigen::Index>(n);
            it.p.p(rows.cable_of[n], n) = res.x[nn];
            it.mu[n] = res.x[static_cast<Eigen::Index>(N) + nn] * s2;
            it.nu[n] = res.x[2 * static_cast<Eigen::Index>(N) + nn] * s2;
            it.objective += std::log2(it.mu[n] / it.nu[n]);
        }
        it.kkt_residual = std::max(res.dual_residual, res.gap);
        it.newton_iterations = res.iterations;

        auto &d = it.duals;
        d.nonneg.resize(N);
        d.budget.assign(model.cables(), 0.0);
        d.signal.resize(N);
        d.interference.resize(N);
        d.qos.resize(N);
        for (std::size_t n = 0; n < N; ++n)
        {
            const auto nn = static_cast<Eigen::Index>(n);
            d.nonneg[n] = res.lambda[nn];
            d.signal[n] = res.lambda[rows.signal0 + nn] / s2;
            d.interference[n] = res.lambda[rows.interf0 + nn] / s2;
            d.qos[n] = res.lambda[rows.qos0 + nn] / s2;
        }
        for (std::size_t k = 0; k < model.cables(); ++k)
            if (rows.budget_row[k] >= 0)
                d.budget[k] = res.lambda[rows.budget_row[k]];
        return it;
    }

    struct ScaStep
    {
        std::size_t t;
        double objective;
        double kkt_residual; // NaN for the initial point
    };

    struct ScaOptions
    {
        double eps = 1e-4;        // outer stopping tolerance on the objective change
        std::size_t t_max = 50;
        double kkt_tol = 1e-8;
    };

    struct ScaResult
    {
        ScaIterate final;
        std::vector<ScaStep> trace;
        bool converged = false;
        std::size_t iterations = 0;
    };

    /// Successive convex approximation from a feasible power split. The initial
    /// expansion point is nu = I(init_p).
    inline ScaResult run_sca(const DcModel &model, const PowerAllocation &init_p, const ScaOptions &opt = {})
    {
        const std::size_t N = model.users();
        std::vector<double> nu(N);
        double prev = 0.0;
        for (std::size_t n = 0; n < N; ++n)
        {
            nu[n] = model.interference_power(init_p, n);
            prev += std::log2(model.total_power(init_p, n) / nu[n]);
        }

        ScaResult out;
        out.trace.push_back({0, prev, std::numeric_limits<double>::quiet_NaN()});
        double delta = std::numeric_limits<double>::infinity();
        while (delta > opt.eps && out.iterations < opt.t_max)
        {
            ScaIterate it = solve_subproblem(model, nu, opt.kkt_tol);
            ++out.iterations;
            delta = std::abs(it.objective - prev);
            prev = it.objective;
            nu = it.nu;
            out.trace.push_back({out.iterations, it.objective, it.kkt_residual});
            out.final = std::move(it);
        }
        out.converged = delta <= opt.eps;
        return out;
    }

    inline void write_sca_trace_csv(std::ostream &os, const ScaResult &r)
    {
        const auto prec = os.precision(17);
        os << "t,objective,max_kkt_residual\n";
        for (const auto &s : r.trace)
            os << s.t << ',' << s.objective << ',' << s.kkt_residual << '\n';
        os.precision(prec);
    }
}

#endif
