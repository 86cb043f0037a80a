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

#ifndef LCX_TESTS_ORACLES_HPP
#define LCX_TESTS_ORACLES_HPP

// Reference evaluations written directly from the model formulas, without
// going through the library's helpers. Slow, scalar and obvious on purpose.

#include <lcx/lcx.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle
{
    using lcx::cplx;

    inline constexpr double c0 = 299792458.0;

    struct Point
    {
        double x, y, z;
    };

    inline double dist(Point a, Point b)
    {
        return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
    }

    inline Point slot_position(const lcx::ScenarioConfig &c, std::size_t k, std::size_t m)
    {
        const double spacing = c.dx / static_cast<double>(c.slots - 1);
        const double y = -c.dy / 2.0 + (static_cast<double>(k) + 0.5) * c.dy / static_cast<double>(c.cables);
        return {-c.dx / 2.0 + static_cast<double>(m) * spacing, y, c.height};
    }

    /// Composite gain from the feed of cable k through slot m to user n.
    inline cplx channel(const lcx::Scenario &sc, std::size_t k, std::size_t m, std::size_t n, bool nlos,
                        bool attenuation)
    {
        const auto &c = sc.config();
        const auto &ph = c.phys;
        const double lambda = c0 / ph.fc_hz;
        const double kw = 2.0 * std::numbers::pi / lambda;
        const double eta = lambda / (4.0 * std::numbers::pi);
        const Point s = slot_position(c, k, m);
        const double along = s.x + c.dx / 2.0;
        const double amp = attenuation ? std::pow(10.0, -ph.kappa_db_per_m * along / 20.0) : 1.0;
        const cplx guided = amp * std::exp(cplx(0.0, -kw * std::sqrt(ph.eps_r) * along));

        const auto &uv = sc.user(n);
        const Point u{uv.x(), uv.y(), uv.z()};
        const double r = dist(s, u);
        cplx h = eta * (c.height / r) / r * std::exp(cplx(0.0, -kw * r));
        if (nlos)
            for (const auto &sct : sc.scatterers())
            {
                const Point q{sct.position.x(), sct.position.y(), sct.position.z()};
                const double r1 = dist(s, q), r2 = dist(q, u);
                h += eta * sct.gain * ((c.height - q.z) / r1) / (r1 * r2) * std::exp(cplx(0.0, -kw * (r1 + r2)));
            }
        return guided * h;
    }

    /// Rate of user n written out from the SINR definition: power P_t / N_c per
    /// serving cable, split over N_k = max(1, active) slots, every other user's
    /// signal counted as interference.
    inline double rate(const lcx::ChannelSet &cs, const lcx::AssignmentState &st, const lcx::PowerAllocation &pa,
                       std::size_t n, const lcx::PhysConstants &ph)
    {
        const std::size_t K = st.alpha.rows(), N = st.alpha.cols(), M = st.beta.cols();
        double serving = 0.0;
        for (std::size_t k = 0; k < K; ++k)
        {
            bool any = false;
            for (std::size_t i = 0; i < N; ++i)
                any = any || st.alpha(k, i);
            serving += any ? 1.0 : 0.0;
        }
        double S = 0.0, I = 0.0;
        for (std::size_t k = 0; k < K; ++k)
        {
            double nk = 0.0;
            cplx h = 0.0;
            for (std::size_t m = 0; m < M; ++m)
                if (st.beta(k, m))
                {
                    nk += 1.0;
                    h += cs.total(k, m, n);
                }
            nk = std::max(nk, 1.0);
            const double w = ph.pt_mw / serving / nk * std::norm(h);
            for (std::size_t i = 0; i < N; ++i)
                (i == n ? S : I) += w * pa.p(k, i) * st.alpha(k, i);
        }
        return std::log2(1.0 + S / (I + ph.sigma2_mw));
    }

    inline double sum_rate(const lcx::ChannelSet &cs, const lcx::AssignmentState &st, const lcx::PowerAllocation &pa,
                           const lcx::PhysConstants &ph)
    {
        double s = 0.0;
        for (std::size_t n = 0; n < st.alpha.cols(); ++n)
            s += rate(cs, st, pa, n, ph);
        return s;
    }

    /// Visits every assignment with each serving cable owning a nonempty slot set
    /// (unused cables keep no slots; they do not affect any rate).
    inline void for_each_structure(std::size_t K, std::size_t M, std::size_t N,
                                   const std::function<void(const lcx::AssignmentState &)> &fn)
    {
        std::size_t n_alpha = 1;
        for (std::size_t i = 0; i < N; ++i)
            n_alpha *= K;
        const std::size_t subsets = std::size_t{1} << M;
        for (std::size_t a = 0; a < n_alpha; ++a)
        {
            lcx::AssignmentState st(K, M, N);
            std::size_t code = a;
            for (std::size_t n = 0; n < N; ++n, code /= K)
                st.alpha(code % K, n) = 1;
            std::vector<std::size_t> used;
            for (std::size_t k = 0; k < K; ++k)
                if (st.users_on(k) > 0)
                    used.push_back(k);
            std::size_t combos = 1;
            for (std::size_t i = 0; i < used.size(); ++i)
                combos *= subsets - 1;
            for (std::size_t b = 0; b < combos; ++b)
            {
                std::size_t bc = b;
                st.beta.fill(0);
                for (auto k : used)
                {
                    const std::size_t mask = bc % (subsets - 1) + 1;
                    bc /= subsets - 1;
                    for (std::size_t m = 0; m < M; ++m)
                        st.beta(k, m) = (mask >> m) & 1u;
                }
                fn(st);
            }
        }
    }

    /// Best equal-split sum rate over all assignments.
    inline double exhaustive_best(const lcx::ChannelSet &cs, const lcx::PhysConstants &ph)
    {
        double best = -1.0;
        for_each_structure(cs.cables(), cs.slots(), cs.users(), [&](const lcx::AssignmentState &st) {
            best = std::max(best, oracle::sum_rate(cs, st, lcx::equal_split(st), ph));
        });
        return best;
    }

    /// Two users sharing one cable with received gains g0, g1 (mW, power split
    /// already applied): best sum rate over a uniform grid on the power simplex.
    inline double simplex_grid_best(double g0, double g1, double sigma2, double step = 1e-3)
    {
        const auto steps = static_cast<long>(std::llround(1.0 / step));
        double best = 0.0;
        for (long i = 0; i <= steps; ++i)
            for (long j = 0; i + j <= steps; ++j)
            {
                const double p0 = static_cast<double>(i) * step, p1 = static_cast<double>(j) * step;
                const double r = std::log2(1.0 + g0 * p0 / (g0 * p1 + sigma2)) +
                                 std::log2(1.0 + g1 * p1 / (g1 * p0 + sigma2));
                best = std::max(best, r);
            }
        return best;
    }

    /// Worst-cell dominance test evaluated with 50 significant digits.
    inline bool dominance_high_precision(double D, double d, double delta_x, double delta_y)
    {
        using big = boost::multiprecision::cpp_bin_float_50;
        const big a2 = big(D) * big(D) / (big(4) * big(d) * big(d));
        const big b2 = (big(delta_x) * big(delta_x) + big(delta_y) * big(delta_y)) / (big(4) * big(d) * big(d));
        const big lhs = pow(big(1) + a2, big(1) + big(1) / a2);
        const big rhs = exp(big(1)) * (big(1) + b2) * (big(1) + b2);
        return lhs >= rhs;
    }

    /// Single-slot rates of the sin-weighted and the conventional pinching links
    /// at per-user power P, serving amplitude A/r and interfering amplitude A'/r'.
    struct LinkPair
    {
        double lcx;
        double pin;
    };

    inline LinkPair two_link_rates(double P, double eta, double sigma2, double A, double r, double s, double Ap,
                                   double rp, double sp)
    {
        const double lcx_sig = P * std::pow(eta * A * s / r, 2), lcx_int = P * std::pow(eta * Ap * sp / rp, 2);
        const double pin_sig = P * std::pow(eta * A / r, 2), pin_int = P * std::pow(eta * Ap / rp, 2);
        return {std::log2(1.0 + lcx_sig / (lcx_int + sigma2)), std::log2(1.0 + pin_sig / (pin_int + sigma2))};
    }
}

#endif
