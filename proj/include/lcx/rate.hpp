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

#ifndef LCX_RATE_HPP
#define LCX_RATE_HPP

#include "channel.hpp"

#include <numeric>
#include <ostream>
#include <string_view>

namespace lcx
{
    inline constexpr double qos_tolerance = 1e-9;

    /// User-to-cable assignment (alpha, K x N) and slot activation (beta, K x M).
    struct AssignmentState
    {
        Array2<std::uint8_t> alpha;
        Array2<std::uint8_t> beta;

        AssignmentState() = default;
        AssignmentState(std::size_t K, std::size_t M, std::size_t N) : alpha(K, N, 0), beta(K, M, 0) {}

        std::size_t cables() const { return alpha.rows(); }
        std::size_t users() const { return alpha.cols(); }
        std::size_t slots() const { return beta.cols(); }

        /// Serving cable of user n; throws when the user is unassigned.
        std::size_t cable_of(std::size_t n) const
        {
            for (std::size_t k = 0; k < cables(); ++k)
                if (alpha(k, n))
                    return k;
            throw std::logic_error("user " + std::to_string(n) + " is not assigned");
        }

        std::size_t users_on(std::size_t k) const
        {
            std::size_t c = 0;
            for (std::size_t n = 0; n < users(); ++n)
                c += alpha(k, n);
            return c;
        }

        std::size_t active_on(std::size_t k) const
        {
            std::size_t c = 0;
            for (std::size_t m = 0; m < slots(); ++m)
                c += beta(k, m);
            return c;
        }

        /// Every user on exactly one cable; every serving cable has an active slot.
        bool valid() const
        {
            for (std::size_t n = 0; n < users(); ++n)
            {
                std::size_t c = 0;
                for (std::size_t k = 0; k < cables(); ++k)
                    c += alpha(k, n);
                if (c != 1)
                    return false;
            }
            for (std::size_t k = 0; k < cables(); ++k)
                if (users_on(k) > 0 && active_on(k) == 0)
                    return false;
            return true;
        }
    };

    /// Power coefficients p[k][n]; feasible when 0 <= p <= alpha and each cable sums to <= 1.
    struct PowerAllocation
    {
        Array2<double> p;

        bool feasible(const AssignmentState &st, double tol = 1e-12) const
        {
            for (std::size_t k = 0; k < p.rows(); ++k)
            {
                double s = 0.0;
                for (std::size_t n = 0; n < p.cols(); ++n)
                {
                    if (p(k, n) < -tol || p(k, n) > st.alpha(k, n) + tol)
                        return false;
                    s += p(k, n);
                }
                if (s > 1.0 + tol)
                    return false;
            }
            return true;
        }
    };

    /// Equal split of each cable's power among its assigned users.
    inline PowerAllocation equal_split(const AssignmentState &st)
    {
        PowerAllocation pa{Array2<double>(st.cables(), st.users(), 0.0)};
        for (std::size_t k = 0; k < st.cables(); ++k)
        {
            const std::size_t c = st.users_on(k);
            for (std::size_t n = 0; n < st.users(); ++n)
                if (st.alpha(k, n))
                    pa.p(k, n) = 1.0 / static_cast<double>(c);
        }
        return pa;
    }

    struct ActiveCounts
    {
        std::size_t serving_cables = 0;          // N_c
        std::vector<std::size_t> slots_per_cable; // N_k = max{1, active slots}
    };

    inline ActiveCounts active_counts(const AssignmentState &st)
    {
        ActiveCounts ac;
        ac.slots_per_cable.resize(st.cables());
        for (std::size_t k = 0; k < st.cables(); ++k)
        {
            if (st.users_on(k) > 0)
                ++ac.serving_cables;
            ac.slots_per_cable[k] = std::max<std::size_t>(1, st.active_on(k));
        }
        return ac;
    }

    struct RateReport
    {
        std::vector<double> rate; // bits/s/Hz per user
        double sum_rate = 0.0;
        std::vector<bool> qos_ok;
        std::size_t serving_cables = 0;
        std::vector<std::size_t> slots_per_cable;
        bool qos_infeasible = false; // power allocation reported no QoS-feasible point

        std::size_t outages() const
        {
            return static_cast<std::size_t>(std::count(qos_ok.begin(), qos_ok.end(), false));
        }
    };

    /// |h_{k,n}|^2 of the activation-weighted channels, K x N.
    inline Array2<double> effective_gains(const ChannelSet &cs, const AssignmentState &st)
    {
        Array2<double> g(cs.cables(), cs.users());
        for (std::size_t k = 0; k < cs.cables(); ++k)
            for (std::size_t n = 0; n < cs.users(); ++n)
                g(k, n) = std::norm(effective_channel(cs, st.beta, k, n));
        return g;
    }

    namespace detail
    {
        /// Signal and interference-plus-noise of user n with link power gains |h_{k,n}|^2.
        inline std::pair<double, double> sinr_terms(const Array2<double> &h2, const AssignmentState &st,
                                                    const PowerAllocation &pa, const ActiveCounts &ac,
                                                    const PhysConstants &ph, std::size_t n)
        {
            const double scale = ph.pt_mw / static_cast<double>(std::max<std::size_t>(1, ac.serving_cables));
            double signal = 0.0, interf = 0.0;
            for (std::size_t k = 0; k < st.cables(); ++k)
            {
                const double w = scale * h2(k, n) / static_cast<double>(ac.slots_per_cable[k]);
                signal += w * pa.p(k, n) * st.alpha(k, n);
                for (std::size_t i = 0; i < st.users(); ++i)
                    if (i != n)
                        interf += w * pa.p(k, i) * st.alpha(k, i);
            }
            return {signal, interf + ph.sigma2_mw};
        }
    }

    inline double user_rate(const ChannelSet &cs, const AssignmentState &st, const PowerAllocation &pa,
                            std::size_t n, const PhysConstants &ph)
    {
        const auto [s, in] = detail::sinr_terms(effective_gains(cs, st), st, pa, active_counts(st), ph, n);
        return std::log2(1.0 + s / in);
    }

    inline RateReport evaluate_rates(const ChannelSet &cs, const AssignmentState &st, const PowerAllocation &pa,
                                     const PhysConstants &ph, double r_min = 0.0)
    {
        const Array2<double> h2 = effective_gains(cs, st);
        const ActiveCounts ac = active_counts(st);
        RateReport rep;
        rep.serving_cables = ac.serving_cables;
        rep.slots_per_cable = ac.slots_per_cable;
        for (std::size_t n = 0; n < st.users(); ++n)
        {
            const auto [s, in] = detail::sinr_terms(h2, st, pa, ac, ph, n);
            const double r = std::log2(1.0 + s / in);
            rep.rate.push_back(r);
            rep.qos_ok.push_back(r >= r_min - qos_tolerance);
        }
        rep.sum_rate = std::accumulate(rep.rate.begin(), rep.rate.end(), 0.0);
        return rep;
    }

    inline double sum_rate(const ChannelSet &cs, const AssignmentState &st, const PowerAllocation &pa,
                           const PhysConstants &ph)
    {
        return evaluate_rates(cs, st, pa, ph).sum_rate;
    }

    inline void write_rate_csv_header(std::ostream &os) { os << "trial,benchmark,n,rate,qos_ok\n"; }

    inline void write_rate_csv_rows(std::ostream &os, std::size_t trial, std::string_view benchmark,
                                    const RateReport &rep)
    {
        const auto prec = os.precision(17);
        for (std::size_t n = 0; n < rep.rate.size(); ++n)
            os << trial << ',' << benchmark << ',' << n << ',' << rep.rate[n] << ',' << (rep.qos_ok[n] ? 1 : 0)
               << '\n';
        os.precision(prec);
    }
}

#endif
