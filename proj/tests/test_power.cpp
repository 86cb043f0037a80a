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

#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace lcx;
using namespace lcx::power;

namespace
{
    struct Instance
    {
        Scenario sc;
        ChannelSet cs;
        AssignmentState st;
    };

    Instance make(const ScenarioConfig &c, std::uint64_t seed)
    {
        Scenario sc = build_scenario(c, seed);
        ChannelSet cs = compose_channels(sc);
        AssignmentState st = game::init_structure(sc).to_state();
        return {std::move(sc), std::move(cs), std::move(st)};
    }

    // Received power per unit allocation of user n's link on cable k, by hand.
    double gain_by_hand(const Instance &in, std::size_t k, std::size_t n)
    {
        double serving = 0.0, nk = 0.0;
        for (std::size_t j = 0; j < in.st.cables(); ++j)
            serving += in.st.users_on(j) > 0;
        cplx h = 0.0;
        for (std::size_t m = 0; m < in.st.slots(); ++m)
            if (in.st.beta(k, m))
                h += in.cs(k, m, n), nk += 1.0;
        return in.sc.phys().pt_mw / serving / std::max(nk, 1.0) * std::norm(h);
    }

    ScenarioConfig two_on_one()
    {
        ScenarioConfig c;
        c.cables = 1;
        c.users = 2;
        return c;
    }
}

TEST(DcModel, SingleLinkGain)
{
    ScenarioConfig c;
    c.cables = 1;
    c.users = 1;
    const Instance in = make(c, 3);
    const DcModel m = build_dc_model(in.cs, in.st, c.phys, 0.0);
    const std::size_t slot = game::nearest_slot(in.sc, 0, 0);
    ASSERT_TRUE(in.st.beta(0, slot));
    EXPECT_NEAR(m.g(0, 0), c.phys.pt_mw * std::norm(in.cs(0, slot, 0)), 1e-15 * m.g(0, 0) + 1e-300);
}

TEST(DcModel, LinearInTransmitPower)
{
    const Instance in = make(ScenarioConfig{}, 4);
    PhysConstants hi = in.sc.phys();
    hi.pt_mw *= 7.0;
    const DcModel a = build_dc_model(in.cs, in.st, in.sc.phys(), 0.0);
    const DcModel b = build_dc_model(in.cs, in.st, hi, 0.0);
    for (std::size_t k = 0; k < a.cables(); ++k)
        for (std::size_t n = 0; n < a.users(); ++n)
            EXPECT_NEAR(b.g(k, n), 7.0 * a.g(k, n), 1e-12 * b.g(k, n) + 1e-300);
}

TEST(DcModel, RejectsCableWithoutSlots)
{
    const Instance in = make(ScenarioConfig{}, 5);
    AssignmentState bad = in.st;
    bad.beta.fill(0);
    EXPECT_THROW(build_dc_model(in.cs, bad, in.sc.phys(), 0.0), std::invalid_argument);
}

TEST(DcModelProperty, ReproducesRateModule)
{
    gen::Source src(701);
    for (int trial = 0; trial < 200; ++trial)
    {
        SCOPED_TRACE(trial);
        const ScenarioConfig c = src.config(3, 12, 5);
        const Scenario sc = src.scenario(c);
        const ChannelSet cs = compose_channels(sc);
        const AssignmentState st = src.assignment(c.cables, c.slots, c.users);
        const PowerAllocation pa = src.power(st);
        const DcModel m = build_dc_model(cs, st, c.phys, 0.0);
        const auto r = m.rates(pa);
        const Instance in{sc, cs, st};
        for (std::size_t n = 0; n < c.users; ++n)
        {
            EXPECT_NEAR(r[n], user_rate(cs, st, pa, n, c.phys), 1e-12 * std::max(1.0, r[n]));
            for (std::size_t k = 0; k < c.cables; ++k)
                EXPECT_NEAR(m.g(k, n), gain_by_hand(in, k, n), 1e-12 * m.g(k, n) + 1e-300);
        }
    }
}

TEST(Linearization, TangentBoundAndSlope)
{
    const Linearization lin = linearize({2.0, 0.5, 3.0});
    const std::vector<double> mu{5.0, 4.0, 9.0};
    auto exact = [&](const std::vector<double> &nu) {
        double s = 0.0;
        for (std::size_t n = 0; n < 3; ++n)
            s += std::log2(mu[n] / nu[n]);
        return s;
    };
    EXPECT_NEAR(lin.rate_lower_bound(mu, lin.nu_t), exact(lin.nu_t), 1e-14);
    gen::Source src(702);
    for (int i = 0; i < 500; ++i)
    {
        const std::vector<double> nu{src.uniform(0.01, 10.0), src.uniform(0.01, 10.0), src.uniform(0.01, 10.0)};
        EXPECT_LE(lin.rate_lower_bound(mu, nu), exact(nu) + 1e-12);
    }
    for (std::size_t n = 0; n < 3; ++n)
    {
        std::vector<double> up = lin.nu_t, dn = lin.nu_t;
        const double h = 1e-6;
        up[n] += h;
        dn[n] -= h;
        const double fd = (lin.rate_lower_bound(mu, up) - lin.rate_lower_bound(mu, dn)) / (2.0 * h);
        EXPECT_NEAR(fd, lin.nu_slope(n), 1e-7);
        EXPECT_NEAR(lin.nu_slope(n), -1.0 / (std::numbers::ln2 * lin.nu_t[n]), 1e-15);
    }
    EXPECT_THROW(linearize({1.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(linearize({-2.0}), std::invalid_argument);
}

TEST(Subproblem, LoneUserTakesFullPower)
{
    ScenarioConfig c;
    c.cables = 1;
    c.users = 1;
    const Instance in = make(c, 6);
    const DcModel m = build_dc_model(in.cs, in.st, c.phys, 0.0);
    const ScaIterate it = solve_subproblem(m, {m.sigma2_mw});
    EXPECT_NEAR(it.p.p(0, 0), 1.0, 1e-7);
    const ScaResult r = run_sca(m, equal_split(in.st));
    EXPECT_EQ(r.iterations, 1u);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.final.p.p(0, 0), 1.0, 1e-7);
}

TEST(Subproblem, KktHoldsOnIndependentCheck)
{
    gen::Source src(703);
    for (int trial = 0; trial < 60; ++trial)
    {
        SCOPED_TRACE(trial);
        ScenarioConfig c = src.config(3, 20, 4);
        const Scenario sc = src.scenario(c);
        const ChannelSet cs = compose_channels(sc);
        const AssignmentState st = game::init_structure(sc).to_state();
        const double r_min = src.coin() ? 0.0 : 0.05;
        const DcModel m = build_dc_model(cs, st, c.phys, r_min);
        std::vector<double> nu_t(c.users);
        for (std::size_t n = 0; n < c.users; ++n)
            nu_t[n] = m.interference_power(equal_split(st), n) * src.uniform(0.5, 2.0);
        ScaIterate it;
        try
        {
            it = solve_subproblem(m, nu_t);
        }
        catch (const InfeasibleQos &)
        {
            continue;
        }
        const double s2 = m.sigma2_mw;
        const auto &d = it.duals;
        const double two_r = std::exp2(r_min);
        for (std::size_t i = 0; i < c.users; ++i)
        {
            const std::size_t ci = st.cable_of(i);
            double stat = -d.nonneg[i] + d.budget[ci];
            double scale = std::abs(d.nonneg[i]) + std::abs(d.budget[ci]);
            for (std::size_t n = 0; n < c.users; ++n)
            {
                stat -= d.signal[n] * m.g(ci, n);
                scale += std::abs(d.signal[n] * m.g(ci, n));
                if (n != i)
                {
                    stat += d.interference[n] * m.g(ci, n);
                    scale += std::abs(d.interference[n] * m.g(ci, n));
                }
            }
            EXPECT_LE(std::abs(stat), 1e-6 * std::max(1.0, scale)) << "p" << i;
        }
        for (std::size_t n = 0; n < c.users; ++n)
        {
            EXPECT_NEAR(s2 * (-1.0 / it.mu[n] + d.signal[n] - d.qos[n]), 0.0, 1e-6) << "mu" << n;
            EXPECT_NEAR(s2 * (1.0 / nu_t[n] - d.interference[n] + two_r * d.qos[n]), 0.0, 1e-6) << "nu" << n;
            const double T = m.total_power(it.p, n), I = m.interference_power(it.p, n);
            // Primal feasibility and complementary slackness.
            EXPECT_LE(it.mu[n], T * (1.0 + 1e-12));
            EXPECT_GE(it.nu[n], I * (1.0 - 1e-12));
            EXPECT_GE(it.mu[n], two_r * it.nu[n] * (1.0 - 1e-9));
            EXPECT_LE(d.signal[n] * (T - it.mu[n]), 1e-7);
            EXPECT_LE(d.interference[n] * (it.nu[n] - I), 1e-7);
            // Slacks are tight at the returned point.
            EXPECT_LE((T - it.mu[n]) / T, 1e-6);
            EXPECT_LE((it.nu[n] - I) / I, 1e-6);
            EXPECT_GE(d.signal[n], 0.0);
            EXPECT_GE(d.interference[n], 0.0);
            EXPECT_GE(d.qos[n], 0.0);
        }
        EXPECT_TRUE(it.p.feasible(st, 1e-9));
        EXPECT_LE(it.kkt_residual, 1e-8);
    }
}

TEST(Subproblem, TargetAboveCapacityIsInfeasible)
{
    ScenarioConfig c;
    c.cables = 1;
    c.users = 1;
    const Instance in = make(c, 7);
    const DcModel probe = build_dc_model(in.cs, in.st, c.phys, 0.0);
    PowerAllocation full = equal_split(in.st);
    const double capacity = probe.sum_rate(full);
    const DcModel m = build_dc_model(in.cs, in.st, c.phys, capacity + 0.01);
    EXPECT_THROW(solve_subproblem(m, {m.sigma2_mw}), InfeasibleQos);
    EXPECT_THROW(run_sca(m, full), InfeasibleQos);
    const DcModel ok = build_dc_model(in.cs, in.st, c.phys, capacity - 0.01);
    EXPECT_NO_THROW(run_sca(ok, full));
}

TEST(Sca, MatchesSimplexGridOnSharedCable)
{
    for (std::uint64_t seed = 0; seed < 8; ++seed)
    {
        SCOPED_TRACE(seed);
        const Instance in = make(two_on_one(), seed);
        const DcModel m = build_dc_model(in.cs, in.st, in.sc.phys(), 0.0);
        const ScaResult r = run_sca(m, equal_split(in.st));
        const double grid = oracle::simplex_grid_best(gain_by_hand(in, 0, 0), gain_by_hand(in, 0, 1), m.sigma2_mw);
        const double got = m.sum_rate(r.final.p);
        EXPECT_NEAR(got, grid, 1e-2);
        EXPECT_GE(got, grid - 1e-2);
        EXPECT_LE(r.iterations, 50u);
    }
}

TEST(ScaProperty, MonotoneFeasibleAndNoWorseThanEqualSplit)
{
    gen::Source src(704);
    int strict = 0;
    for (int trial = 0; trial < 100; ++trial)
    {
        SCOPED_TRACE(trial);
        ScenarioConfig c;
        c.users = 2;
        const Instance in = make(c, src.seed());
        const DcModel m = build_dc_model(in.cs, in.st, c.phys, 0.0);
        const PowerAllocation p0 = equal_split(in.st);
        const ScaResult r = run_sca(m, p0);
        for (std::size_t t = 1; t < r.trace.size(); ++t)
            EXPECT_GE(r.trace[t].objective, r.trace[t - 1].objective - 1e-8);
        EXPECT_TRUE(r.final.p.feasible(in.st, 1e-9));
        EXPECT_LE(r.iterations, 50u);
        const double base = m.sum_rate(p0), fin = m.sum_rate(r.final.p);
        EXPECT_GE(fin, base - 1e-8);
        EXPECT_GE(fin, r.trace.back().objective - 1e-9); // slacks never overstate the rate
        strict += fin > base + 1e-6;
    }
    EXPECT_GT(strict, 0);
}

TEST(ScaProperty, AsymmetricSharedCableBeatsEqualSplit)
{
    ScenarioConfig c = two_on_one();
    const Scenario sc(c, {Vec3(-20.0, 0.5, 0.0), Vec3(18.0, 12.0, 0.0)}, {});
    const ChannelSet cs = compose_channels(sc);
    const AssignmentState st = game::init_structure(sc).to_state();
    const DcModel m = build_dc_model(cs, st, c.phys, 0.0);
    const ScaResult r = run_sca(m, equal_split(st));
    EXPECT_GT(m.sum_rate(r.final.p), m.sum_rate(equal_split(st)) + 1e-3);
}

TEST(ScaProperty, QosHeldWhenFeasible)
{
    gen::Source src(705);
    int feasible = 0;
    for (int trial = 0; trial < 100; ++trial)
    {
        SCOPED_TRACE(trial);
        ScenarioConfig c = src.config(3, 20, 5);
        const Scenario sc = src.scenario(c);
        const ChannelSet cs = compose_channels(sc);
        const AssignmentState st = game::run_coalition_game(sc, cs).structure.to_state();
        const double r_min = src.uniform(0.05, 1.0);
        const DcModel m = build_dc_model(cs, st, c.phys, r_min);
        try
        {
            const ScaResult r = run_sca(m, equal_split(st));
            for (double v : m.rates(r.final.p))
                EXPECT_GE(v, r_min - 1e-6);
            ++feasible;
        }
        catch (const InfeasibleQos &)
        {
        }
    }
    EXPECT_GT(feasible, 30);
}

TEST(ScaCsv, HeaderAndRows)
{
    ScaResult r;
    r.trace = {{0, 1.0, std::numeric_limits<double>::quiet_NaN()}, {1, 1.5, 1e-9}};
    std::ostringstream os;
    write_sca_trace_csv(os, r);
    EXPECT_EQ(os.str().substr(0, 29), "t,objective,max_kkt_residual\n");
    EXPECT_NE(os.str().find("1,1.5,1.0000000000000001e-09"), std::string::npos);
}
