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

#ifndef LCX_SCENARIO_HPP
#define LCX_SCENARIO_HPP

#include "common.hpp"

#include <cstdint>
#include <random>

namespace lcx
{
    /// Physical constants of the link. Power quantities are linear mW.
    /// Wavelength and aperture constant are derived from the carrier on demand.
    struct PhysConstants
    {
        double kappa_db_per_m = 0.1; // longitudinal cable attenuation
        double eps_r = 1.26;         // relative permittivity of the cable dielectric
        double fc_hz = 3.5e9;
        double sigma2_mw = dbm_to_mw(-64.0);
        double pt_mw = dbm_to_mw(20.0);

        double lambda() const { return speed_of_light / fc_hz; }
        double eta() const { return speed_of_light / (4.0 * std::numbers::pi * fc_hz); }
        double wavenumber() const { return 2.0 * std::numbers::pi / lambda(); }

        void validate() const
        {
            if (!(kappa_db_per_m >= 0.0))
                throw ConfigError("kappa must be >= 0");
            if (!(eps_r >= 1.0))
                throw ConfigError("eps_r must be >= 1");
            if (!(fc_hz > 0.0))
                throw ConfigError("carrier frequency must be positive");
            if (!(sigma2_mw > 0.0))
                throw ConfigError("noise power must be positive");
            if (!(pt_mw > 0.0))
                throw ConfigError("transmit power must be positive");
        }
    };

    struct ScenarioConfig
    {
        double dx = 50.0;     // region length along the cables, m
        double dy = 30.0;     // region width, m
        double height = 3.0;  // cable height d, m
        std::size_t cables = 2;
        std::size_t slots = 50;
        std::size_t users = 2;
        std::size_t scatterers = 10;
        PhysConstants phys;

        double slot_spacing() const { return dx / static_cast<double>(slots - 1); }

        void validate() const
        {
            if (!(dx > 0.0) || !(dy > 0.0) || !(height > 0.0))
                throw ConfigError("region dimensions and cable height must be positive");
            if (cables < 1)
                throw ConfigError("at least one cable is required");
            if (slots < 2)
                throw ConfigError("at least two slots per cable are required");
            if (users < 1)
                throw ConfigError("at least one user is required");
            phys.validate();
            if (slot_spacing() < phys.lambda() / 2.0)
                throw ConfigError("slot spacing " + std::to_string(slot_spacing()) +
                                  " m is below half a wavelength");
        }
    };

    struct Scatterer
    {
        Vec3 position;
        cplx gain; // complex path gain, CN(0,1) when drawn
    };

    /// Immutable deployment: cables along x at height d, users on the ground plane,
    /// scatterers on the four walls. Indices are zero-based throughout.
    class Scenario
    {
    public:
        Scenario(const ScenarioConfig &config, std::vector<Vec3> users,
                 std::vector<Scatterer> scatterers)
            : config_(config), users_(std::move(users)), scatterers_(std::move(scatterers))
        {
            config_.users = users_.size();
            config_.scatterers = scatterers_.size();
            config_.validate();

            const double hx = config_.dx / 2.0, hy = config_.dy / 2.0;
            for (const auto &u : users_)
                if (u.z() != 0.0 || std::abs(u.x()) > hx || std::abs(u.y()) > hy)
                    throw ConfigError("user outside the ground-plane region");

            const double K = static_cast<double>(config_.cables);
            feeds_.reserve(config_.cables);
            for (std::size_t k = 0; k < config_.cables; ++k)
                feeds_.emplace_back(-hx, -hy + (static_cast<double>(k) + 0.5) * config_.dy / K,
                                    config_.height);
        }

        const ScenarioConfig &config() const { return config_; }
        const PhysConstants &phys() const { return config_.phys; }
        std::size_t cables() const { return config_.cables; }
        std::size_t slots() const { return config_.slots; }
        std::size_t users() const { return users_.size(); }
        std::size_t scatterer_count() const { return scatterers_.size(); }
        double height() const { return config_.height; }
        double slot_spacing() const { return config_.slot_spacing(); }

        const Vec3 &feed(std::size_t k) const { return feeds_[k]; }
        Vec3 slot(std::size_t k, std::size_t m) const
        {
            return {-config_.dx / 2.0 + static_cast<double>(m) * slot_spacing(), feeds_[k].y(),
                    config_.height};
        }
        const Vec3 &user(std::size_t n) const { return users_[n]; }
        const std::vector<Vec3> &user_positions() const { return users_; }
        const Scatterer &scatterer(std::size_t l) const { return scatterers_[l]; }
        const std::vector<Scatterer> &scatterers() const { return scatterers_; }

        /// Distance along cable k from the feed point to slot m.
        double cable_distance(std::size_t k, std::size_t m) const { return (slot(k, m) - feed(k)).norm(); }

        bool operator==(const Scenario &o) const
        {
            if (users_ != o.users_ || scatterers_.size() != o.scatterers_.size())
                return false;
            for (std::size_t l = 0; l < scatterers_.size(); ++l)
                if (scatterers_[l].position != o.scatterers_[l].position ||
                    scatterers_[l].gain != o.scatterers_[l].gain)
                    return false;
            return true;
        }

    private:
        ScenarioConfig config_;
        std::vector<Vec3> users_;
        std::vector<Scatterer> scatterers_;
        std::vector<Vec3> feeds_;
    };

    /// Sine of the elevation angle between an elevated point (a slot) and a lower
    /// point: height difference over Euclidean distance.
    inline double elevation_sine(const Vec3 &upper, const Vec3 &lower)
    {
        return (upper.z() - lower.z()) / (upper - lower).norm();
    }

    /// Elevation angle in (0, pi/2] of the slot-to-user line against the ground plane.
    inline double elevation_angle(const Vec3 &upper, const Vec3 &lower)
    {
        const double rho = std::hypot(upper.x() - lower.x(), upper.y() - lower.y());
        return std::atan2(upper.z() - lower.z(), rho);
    }

    namespace detail
    {
        inline double uniform(std::mt19937_64 &rng, double lo, double hi)
        {
            return std::uniform_real_distribution<double>(lo, hi)(rng);
        }

        /// A point drawn uniformly over the four wall planes, height in [0, d].
        inline Vec3 wall_point(std::mt19937_64 &rng, double dx, double dy, double d)
        {
            const double t = uniform(rng, 0.0, 2.0 * (dx + dy));
            const double z = uniform(rng, 0.0, d);
            const double hx = dx / 2.0, hy = dy / 2.0;
            if (t < dx)
                return {-hx + t, -hy, z};
            if (t < dx + dy)
                return {hx, -hy + (t - dx), z};
            if (t < 2.0 * dx + dy)
                return {hx - (t - dx - dy), hy, z};
            return {-hx, hy - (t - 2.0 * dx - dy), z};
        }
    }

    /// Draws users uniformly over the region and scatterers uniformly over the walls
    /// with CN(0,1) gains. Deterministic for a given seed.
    inline Scenario build_scenario(const ScenarioConfig &config, std::uint64_t seed)
    {
        config.validate();
        std::mt19937_64 rng(seed);
        std::vector<Vec3> users;
        users.reserve(config.users);
        for (std::size_t n = 0; n < config.users; ++n)
        {
            const double x = detail::uniform(rng, -config.dx / 2.0, config.dx / 2.0);
            const double y = detail::uniform(rng, -config.dy / 2.0, config.dy / 2.0);
            users.emplace_back(x, y, 0.0);
        }
        std::normal_distribution<double> half_var(0.0, std::sqrt(0.5));
        std::vector<Scatterer> scat;
        scat.reserve(config.scatterers);
        for (std::size_t l = 0; l < config.scatterers; ++l)
        {
            Vec3 pos = detail::wall_point(rng, config.dx, config.dy, config.height);
            const double re = half_var(rng);
            const double im = half_var(rng);
            scat.push_back({pos, {re, im}});
        }
        return Scenario(config, std::move(users), std::move(scat));
    }

    /// Seed of trial `index` derived from a base seed by counter.
    inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
        std::uint32_t words[2];
        seq.generate(words, words + 2);
        return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
    }
}

#endif
