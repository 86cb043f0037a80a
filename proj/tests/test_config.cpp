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

#include <lcx/config.hpp>

#include <gtest/gtest.h>

using namespace lcx;
using namespace lcx::experiments;

namespace
{
    SystemConfig parse(const std::string &text)
    {
        std::istringstream is(text);
        return parse_config(is);
    }
}

TEST(Config, EmptyFileKeepsDefaults)
{
    const SystemConfig cfg = parse("");
    const SystemConfig def;
    EXPECT_EQ(cfg.scenario.cables, def.scenario.cables);
    EXPECT_EQ(cfg.scenario.slots, def.scenario.slots);
    EXPECT_EQ(cfg.scenario.users, def.scenario.users);
    EXPECT_DOUBLE_EQ(cfg.scenario.dx, 50.0);
    EXPECT_DOUBLE_EQ(cfg.scenario.dy, 30.0);
    EXPECT_DOUBLE_EQ(cfg.scenario.height, 3.0);
    EXPECT_NEAR(cfg.scenario.phys.pt_mw, 100.0, 1e-12);
    EXPECT_NEAR(cfg.scenario.phys.sigma2_mw, std::pow(10.0, -6.4), 1e-20);
    EXPECT_DOUBLE_EQ(cfg.r_min, 0.1);
    EXPECT_TRUE(cfg.channel.include_nlos);
}

TEST(Config, ReadsEverySection)
{
    const SystemConfig cfg = parse(R"(
; comment line
[region]
dx = 40
dy = 12.5
height = 4
[cables]
count = 3
slots = 20
[users]
count = 5
[scatterers]
count = 0
[phys]
kappa_db_per_m = 0.05
eps_r = 1.5
fc_hz = 28e9
noise_dbm = -80
pt_dbm = 30
[qos]
r_min = 0.25
[rng]
seed = 77
[channel]
nlos = false
attenuation = 0
)");
    const auto &s = cfg.scenario;
    EXPECT_DOUBLE_EQ(s.dx, 40.0);
    EXPECT_DOUBLE_EQ(s.dy, 12.5);
    EXPECT_DOUBLE_EQ(s.height, 4.0);
    EXPECT_EQ(s.cables, 3u);
    EXPECT_EQ(s.slots, 20u);
    EXPECT_EQ(s.users, 5u);
    EXPECT_EQ(s.scatterers, 0u);
    EXPECT_DOUBLE_EQ(s.phys.kappa_db_per_m, 0.05);
    EXPECT_DOUBLE_EQ(s.phys.eps_r, 1.5);
    EXPECT_DOUBLE_EQ(s.phys.fc_hz, 28e9);
    EXPECT_NEAR(s.phys.sigma2_mw, 1e-8, 1e-22);
    EXPECT_NEAR(s.phys.pt_mw, 1000.0, 1e-9);
    EXPECT_DOUBLE_EQ(cfg.r_min, 0.25);
    EXPECT_EQ(cfg.seed, 77u);
    EXPECT_FALSE(cfg.channel.include_nlos);
    EXPECT_FALSE(cfg.channel.include_cable_attenuation);
}

TEST(Config, ShippedDefaultFileLoads)
{
    const SystemConfig cfg = load_config(LCX_CONFIG_DIR "/default.ini");
    EXPECT_EQ(cfg.scenario.cables, 2u);
    EXPECT_EQ(cfg.scenario.slots, 50u);
    EXPECT_EQ(cfg.seed, 1u);
}

TEST(Config, UnknownNamesRejected)
{
    EXPECT_THROW(parse("[region]\nwidth = 3\n"), ConfigError);
    EXPECT_THROW(parse("[antenna]\ncount = 3\n"), ConfigError);
    EXPECT_THROW(parse("dx = 3\n"), ConfigError); // key outside any section
}

TEST(Config, BadValuesRejected)
{
    EXPECT_THROW(parse("[cables]\ncount = two\n"), ConfigError);
    EXPECT_THROW(parse("[cables]\ncount = -1\n"), ConfigError);
    EXPECT_THROW(parse("[cables]\ncount = 0\n"), ConfigError);
    EXPECT_THROW(parse("[cables]\nslots = 1\n"), ConfigError);
    EXPECT_THROW(parse("[region]\nheight = -3\n"), ConfigError);
    EXPECT_THROW(parse("[qos]\nr_min = -0.5\n"), ConfigError);
    EXPECT_THROW(parse("[channel]\nnlos = maybe\n"), ConfigError);
    EXPECT_THROW(parse("[phys]\nkappa_db_per_m = -0.1\n"), ConfigError);
    EXPECT_THROW(parse("[region\ndx = 3\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/lcx.ini"), ConfigError);
}
