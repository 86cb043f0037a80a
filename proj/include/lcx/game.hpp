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

#ifndef LCX_GAME_HPP
#define LCX_GAME_HPP

#include "rate.hpp"

#include <optional>
#include <ostream>

/*
 * Coalition formation for user assignment and slot activation.
 *
 * Each cable k holds two coalitions: the users it serves (A_k) and its active
 * slots (B_k). A user may switch cable and a slot may join or leave B_k; a move
 * is accepted only when the total utility (sum rate under an equal power split
 * among each cable's users) grows by more than `tau`. The sum rate therefore
 * increases strictly with every move, the configuration space is finite, and
 * the loop ends in a Nash-stable structure.
 */

namespace lcx::game
{
    struct CoalitionStructure
    {
        std::vector<std::size_t> cable_of; // user -> cable; A_k = {n : cable_of[n] == k}
        Array2<std::uint8_t> active;       // B as a K x M indicator

        CoalitionStructure() = default;
        CoalitionStructure(std::size_t K, std::size_t M, std::size_t N) : cable_of(N, 0), active(K, M, 0) {}

        std::size_t cables() const { return active.rows(); }
        std::size_t slots() const { return active.cols(); }
        std::size_t users() const { return cable_of.size(); }

        std::vector<std::size_t> members(std::size_t k) const
        {
            std::vector<std::size_t> out;
            for (std::size_t n = 0; n < users(); ++n)
                if (cable_of[n] == k)
                    out.push_back(n);
            return out;
        }
        std::vector<std::size_t> active_slots(std::size_t k) const
        {
            std::vector<std::size_t> out;
            for (std::size_t m = 0; m < slots(); ++m)
                if (active(k, m))
                    out.push_back(m);
            return out;
        }

        /// Partition of the users and at least one active slot on every serving cable.
        bool valid() const
        {
            for (auto k : cable_of)
                if (k >= cables())
                    return false;
            for (std::size_t k = 0; k < cables(); ++k)
                if (!members(k).empty() && active_slots(k).empty())
                    return false;
            return true;
        }

        AssignmentState to_state() const
        {
            AssignmentState st(cables(), slots(), users());
            for (std::size_t n = 0; n < users(); ++n)
                st.alpha(cable_of[n], n) = 1;
            st.beta = active;
            return st;
        }

        static CoalitionStructure from_state(const AssignmentState &st)
        {
            CoalitionStructure s(st.cables(), st.slots(), st.users());
            for (std::size_t n = 0; n < st.users(); ++n)
                s.cable_of[n] = st.cable_of(n);
            s.active = st.beta;
            return s;
        }

        bool operator==(const CoalitionStructure &) const = default;
    };

    enum class MoveKind
    {
        user_switch,
        slot_on,
        slot_off
    };

    struct Move
    {
        MoveKind kind;
        std::size_t actor; // user for switches, slot for toggles
        std::size_t from;  // cable the user leaves / cable of the slot
        std::size_t to;    // cable the user joins / cable of the slot
        double utility_after = 0.0;
    };

    struct GameTrace
    {
        std::vector<double> iteration_utilities; // entry 0: initial structure, then one per pass
        std::vector<Move> moves;
        bool converged = false;
        std::size_t iterations = 0;
    };

    struct GameLimits
    {
        std::size_t max_passes = 100;
        double tau = 1e-9; // strict-improvement threshold, bits/s/Hz
    };

    struct Utilities
    {
        std::vector<double> per_user;
        double total = 0.0;
    };

    inline std::size_t nearest_cable(const Scenario &sc, std::size_t n)
    {
        std::size_t best = 0;
        double best_d = std::abs(sc.user(n).y() - sc.feed(0).y());
        for (std::size_t k = 1; k < sc.cables(); ++k)
        {
            const double dk = std::abs(sc.user(n).y() - sc.feed(k).y());
            if (dk < best_d)
                best = k, best_d = dk;
        }
        return best;
    }

    inline std::size_t nearest_slot(const Scenario &sc, std::size_t k, std::size_t n)
    {
        std::size_t best = 0;
        double best_d = (sc.user(n) - sc.slot(k, 0)).norm();
        for (std::size_t m = 1; m < sc.slots(); ++m)
        {
            const double dm = (sc.user(n) - sc.slot(k, m)).norm();
            if (dm < best_d)
                best = m, best_d = dm;
        }
        return best;
    }

    /// Nearest cable for every user, then the nearest slot of each user on its cable.
    /// Ties go to the lowest index.
    inline CoalitionStructure init_structure(const Scenario &sc)
    {
        CoalitionStructure s(sc.cables(), sc.slots(), sc.users());
        for (std::size_t n = 0; n < sc.users(); ++n)
        {
            s.cable_of[n] = nearest_cable(sc, n);
            s.active(s.cable_of[n], nearest_slot(sc, s.cable_of[n], n)) = 1;
        }
        return s;
    }

    /// Game state with cached effective channels. Hypothetical moves are evaluated
    /// in place and rolled back; committed moves rebuild the touched cable's row
    /// from scratch so the cache never drifts from a full evaluation.
    class CoalitionGame
    {
    public:
        CoalitionGame(const Scenario &sc, const ChannelSet &cs, CoalitionStructure s, double tau = 1e-9)
            : sc_(sc), cs_(cs), ph_(sc.phys()), s_(std::move(s)), tau_(tau),
              heff_(s_.cables(), s_.users()), size_(s_.cables(), 0), nactive_(s_.cables(), 0)
        {
            if (cs.cables() != s_.cables() || cs.slots() != s_.slots() || cs.users() != s_.users())
                throw std::invalid_argument("structure does not match channel dimensions");
            for (auto k : s_.cable_of)
                ++size_.at(k);
            for (std::size_t k = 0; k < s_.cables(); ++k)
                rebuild_row(k);
            total_ = compute_total();
        }

        const CoalitionStructure &structure() const { return s_; }
        double total() const { return total_; }
        double tau() const { return tau_; }

        Utilities utilities() const
        {
            Utilities u;
            u.per_user.resize(s_.users());
            for (std::size_t n = 0; n < s_.users(); ++n)
                u.total += u.per_user[n] = user_utility(n);
            return u;
        }

        /// Change of total utility if slot m of cable k were toggled; nullopt when the
        /// toggle would leave a serving cable without active slots.
        std::optional<double> toggle_gain(std::size_t k, std::size_t m)
        {
            const bool on = s_.active(k, m);
            if (on && size_[k] > 0 && nactive_[k] == 1)
                return std::nullopt;
            const auto saved = save_row(k);
            apply_toggle(k, m);
            const double gain = compute_total() - total_;
            apply_toggle(k, m);
            restore_row(k, saved);
            return gain;
        }

        bool try_slot_toggle(std::size_t k, std::size_t m)
        {
            const auto gain = toggle_gain(k, m);
            if (!gain || !(*gain > tau_))
                return false;
            const bool was_on = s_.active(k, m);
            s_.active(k, m) = was_on ? 0 : 1;
            rebuild_row(k);
            total_ = compute_total();
            last_ = Move{was_on ? MoveKind::slot_off : MoveKind::slot_on, m, k, k, total_};
            return true;
        }

        /// Change of total utility if user n moved to cable `to` under the current
        /// activation; a cable with no active slot gets the user's nearest slot.
        double switch_gain(std::size_t n, std::size_t to)
        {
            const std::size_t from = s_.cable_of.at(n);
            if (to == from || to >= s_.cables())
                throw std::invalid_argument("switch target must be a different, existing cable");
            const bool fill = nactive_[to] == 0;
            const auto saved = save_row(to);
            const std::size_t m = fill ? nearest_slot(sc_, to, n) : 0;
            if (fill)
                apply_toggle(to, m);
            move_user(n, from, to);
            const double gain = compute_total() - total_;
            move_user(n, to, from);
            if (fill)
                apply_toggle(to, m);
            restore_row(to, saved);
            return gain;
        }

        bool try_user_switch(std::size_t n, std::size_t to)
        {
            const std::size_t from = s_.cable_of.at(n);
            if (!(switch_gain(n, to) > tau_))
                return false;
            if (nactive_[to] == 0)
            {
                s_.active(to, nearest_slot(sc_, to, n)) = 1;
                nactive_[to] = 1;
                rebuild_row(to);
            }
            move_user(n, from, to);
            total_ = compute_total();
            last_ = Move{MoveKind::user_switch, n, from, to, total_};
            return true;
        }

        const Move &last_move() const { return last_; }

    private:
        double user_utility(std::size_t n) const
        {
            const std::size_t c = s_.cable_of[n];
            double serving = 0;
            for (auto sz : size_)
                serving += sz > 0;
            const double scale = ph_.pt_mw / serving;
            double signal = 0.0, interf = 0.0;
            for (std::size_t k = 0; k < s_.cables(); ++k)
            {
                if (size_[k] == 0)
                    continue;
                const double w = scale * std::norm(heff_(k, n)) /
                                 (static_cast<double>(std::max<std::size_t>(1, nactive_[k])) *
                                  static_cast<double>(size_[k]));
                const double others = static_cast<double>(size_[k] - (k == c ? 1 : 0));
                if (k == c)
                    signal = w;
                interf += w * others;
            }
            return std::log2(1.0 + signal / (interf + ph_.sigma2_mw));
        }

        double compute_total() const
        {
            double t = 0.0;
            for (std::size_t n = 0; n < s_.users(); ++n)
                t += user_utility(n);
            return t;
        }

        void rebuild_row(std::size_t k)
        {
            nactive_[k] = 0;
            for (std::size_t m = 0; m < s_.slots(); ++m)
                nactive_[k] += s_.active(k, m);
            for (std::size_t n = 0; n < s_.users(); ++n)
                heff_(k, n) = effective_channel(cs_, s_.active, k, n);
        }

        // Flips the indicator and adjusts the cached row incrementally.
        void apply_toggle(std::size_t k, std::size_t m)
        {
            const bool on = s_.active(k, m);
            s_.active(k, m) = on ? 0 : 1;
            if (on)
                --nactive_[k];
            else
                ++nactive_[k];
            const double sign = on ? -1.0 : 1.0;
            for (std::size_t n = 0; n < s_.users(); ++n)
                heff_(k, n) += sign * cs_(k, m, n);
        }

        void move_user(std::size_t n, std::size_t from, std::size_t to)
        {
            s_.cable_of[n] = to;
            --size_[from];
            ++size_[to];
        }

        std::vector<cplx> save_row(std::size_t k) const
        {
            std::vector<cplx> row(s_.users());
            for (std::size_t n = 0; n < s_.users(); ++n)
                row[n] = heff_(k, n);
            return row;
        }
        void restore_row(std::size_t k, const std::vector<cplx> &row)
        {
            for (std::size_t n = 0; n < s_.users(); ++n)
                heff_(k, n) = row[n];
        }

        const Scenario &sc_;
        const ChannelSet &cs_;
        const PhysConstants &ph_;
        CoalitionStructure s_;
        double tau_;
        Array2<cplx> heff_;
        std::vector<std::size_t> size_;
        std::vector<std::size_t> nactive_;
        double total_ = 0.0;
        Move last_{};
    };

    /// Per-user utilities under the equal power split p_{k,n} = 1/|A_k|.
    inline Utilities utility(const Scenario &sc, const ChannelSet &cs, const CoalitionStructure &s)
    {
        return CoalitionGame(sc, cs, s).utilities();
    }

    inline bool try_slot_toggle(CoalitionStructure &s, std::size_t k, std::size_t m, const Scenario &sc,
                                const ChannelSet &cs, double tau = 1e-9)
    {
        CoalitionGame g(sc, cs, s, tau);
        if (!g.try_slot_toggle(k, m))
            return false;
        s = g.structure();
        return true;
    }

    inline bool try_user_switch(CoalitionStructure &s, std::size_t n, std::size_t to, const Scenario &sc,
                                const ChannelSet &cs, double tau = 1e-9)
    {
        CoalitionGame g(sc, cs, s, tau);
        if (!g.try_user_switch(n, to))
            return false;
        s = g.structure();
        return true;
    }

    struct GameResult
    {
        CoalitionStructure structure;
        GameTrace trace;
    };

    namespace detail
    {
        inline void slot_sweep(CoalitionGame &g, GameTrace &tr, bool &moved)
        {
            const auto &s = g.structure();
            for (std::size_t i = 0; i < s.cables(); ++i)
            {
                if (s.members(i).empty())
                    continue;
                for (std::size_t m = 0; m < s.slots(); ++m)
                    if (g.try_slot_toggle(i, m))
                    {
                        tr.moves.push_back(g.last_move());
                        moved = true;
                    }
            }
        }
    }

    /// Alternates slot sweeps over all serving cables with single-user switch
    /// tests, users n = 0..N-1 and targets k' = 0..K-1 in order, first improvement
    /// accepted. With one cable there is no switch target and each user visit runs
    /// a single sweep. Stops after a pass without moves or after `max_passes`.
    inline GameResult run_coalition_game(const Scenario &sc, const ChannelSet &cs, CoalitionStructure start,
                                         const GameLimits &limits = {})
    {
        CoalitionGame g(sc, cs, std::move(start), limits.tau);
        GameTrace tr;
        tr.iteration_utilities.push_back(g.total());
        const std::size_t K = sc.cables();
        for (std::size_t pass = 0; pass < limits.max_passes; ++pass)
        {
            bool moved = false;
            for (std::size_t n = 0; n < sc.users(); ++n)
            {
                if (K == 1)
                {
                    detail::slot_sweep(g, tr, moved);
                    continue;
                }
                for (std::size_t to = 0; to < K; ++to)
                {
                    if (to == g.structure().cable_of[n])
                        continue;
                    detail::slot_sweep(g, tr, moved);
                    if (g.try_user_switch(n, to))
                    {
                        tr.moves.push_back(g.last_move());
                        moved = true;
                    }
                }
            }
            ++tr.iterations;
            tr.iteration_utilities.push_back(g.total());
            if (!moved)
            {
                tr.converged = true;
                break;
            }
        }
        return {g.structure(), std::move(tr)};
    }

    inline GameResult run_coalition_game(const Scenario &sc, const ChannelSet &cs, const GameLimits &limits = {})
    {
        return run_coalition_game(sc, cs, init_structure(sc), limits);
    }

    /// Every unilateral deviation (user switch, or toggle on a serving cable) that
    /// would raise the total utility by more than tau.
    inline std::vector<Move> improving_deviations(const Scenario &sc, const ChannelSet &cs,
                                                  const CoalitionStructure &s, double tau = 1e-9)
    {
        CoalitionGame g(sc, cs, s, tau);
        std::vector<Move> out;
        for (std::size_t n = 0; n < s.users(); ++n)
            for (std::size_t to = 0; to < s.cables(); ++to)
            {
                if (to == s.cable_of[n])
                    continue;
                const double gain = g.switch_gain(n, to);
                if (gain > tau)
                    out.push_back({MoveKind::user_switch, n, s.cable_of[n], to, g.total() + gain});
            }
        for (std::size_t k = 0; k < s.cables(); ++k)
        {
            if (s.members(k).empty())
                continue;
            for (std::size_t m = 0; m < s.slots(); ++m)
            {
                const auto gain = g.toggle_gain(k, m);
                if (gain && *gain > tau)
                    out.push_back({s.active(k, m) ? MoveKind::slot_off : MoveKind::slot_on, m, k, k,
                                   g.total() + *gain});
            }
        }
        return out;
    }

    inline bool verify_nash_stable(const Scenario &sc, const ChannelSet &cs, const CoalitionStructure &s,
                                   double tau = 1e-9)
    {
        return improving_deviations(sc, cs, s, tau).empty();
    }

    inline void write_game_trace_csv(std::ostream &os, const GameTrace &tr)
    {
        const auto prec = os.precision(17);
        os << "iteration,sum_rate\n";
        for (std::size_t i = 0; i < tr.iteration_utilities.size(); ++i)
            os << i << ',' << tr.iteration_utilities[i] << '\n';
        os.precision(prec);
    }
}

#endif
