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

#ifndef LCX_CONFIG_HPP
#define LCX_CONFIG_HPP

#include "experiments.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <map>
#include <set>

// INI layout, all keys optional:
//
//   [region]     dx, dy, height
//   [cables]     count, slots
//   [users]      count
//   [scatterers] count
//   [phys]       kappa_db_per_m, eps_r, fc_hz, noise_dbm, pt_dbm
//   [qos]        r_min
//   [rng]        seed
//   [channel]    nlos, attenuation
//
// Unknown sections or keys are rejected so a typo cannot silently fall back
// to a default.

namespace lcx::experiments
{
    namespace detail
    {
        inline const std::map<std::string, std::set<std::string>> &known_keys()
        {
            static const std::map<std::string, std::set<std::string>> keys{
                {"region", {"dx", "dy", "height"}},
                {"cables", {"count", "slots"}},
                {"users", {"count"}},
                {"scatterers", {"count"}},
                {"phys", {"kappa_db_per_m", "eps_r", "fc_hz", "noise_dbm", "pt_dbm"}},
                {"qos", {"r_min"}},
                {"rng", {"seed"}},
                {"channel", {"nlos", "attenuation"}},
            };
            return keys;
        }

        template <typename T>
        void read_key(const boost::property_tree::ptree &pt, const std::string &path, T &dst)
        {
            const auto node = pt.get_optional<std::string>(path);
            if (!node)
                return;
            if constexpr (std::is_same_v<T, bool>)
            {
                if (*node == "true" || *node == "1")
                    dst = true;
                else if (*node == "false" || *node == "0")
                    dst = false;
                else
                    throw ConfigError(path + ": expected true or false, got '" + *node + "'");
            }
            else
            {
                const auto v = pt.get_optional<T>(path);
                if (!v)
                    throw ConfigError(path + ": cannot parse '" + *node + "'");
                if constexpr (std::is_unsigned_v<T>)
                    if (node->find('-') != std::string::npos)
                        throw ConfigError(path + ": must be non-negative");
                dst = *v;
            }
        }
    }

    inline SystemConfig parse_config(std::istream &is)
    {
        namespace bpt = boost::property_tree;
        bpt::ptree pt;
        try
        {
            bpt::read_ini(is, pt);
        }
        catch (const bpt::ini_parser_error &e)
        {
            throw ConfigError(std::string("config parse error: ") + e.what());
        }

        const auto &known = detail::known_keys();
        for (const auto &[section, body] : pt)
        {
            const auto it = known.find(section);
            if (it == known.end())
                throw ConfigError("unknown config section [" + section + "]");
            for (const auto &[key, value] : body)
                if (!it->second.contains(key))
                    throw ConfigError("unknown key '" + key + "' in [" + section + "]");
        }

        SystemConfig cfg;
        auto &s = cfg.scenario;
        detail::read_key(pt, "region.dx", s.dx);
        detail::read_key(pt, "region.dy", s.dy);
        detail::read_key(pt, "region.height", s.height);
        detail::read_key(pt, "cables.count", s.cables);
        detail::read_key(pt, "cables.slots", s.slots);
        detail::read_key(pt, "users.count", s.users);
        detail::read_key(pt, "scatterers.count", s.scatterers);
        detail::read_key(pt, "phys.kappa_db_per_m", s.phys.kappa_db_per_m);
        detail::read_key(pt, "phys.eps_r", s.phys.eps_r);
        detail::read_key(pt, "phys.fc_hz", s.phys.fc_hz);
        double noise_dbm = mw_to_dbm(s.phys.sigma2_mw), pt_dbm = mw_to_dbm(s.phys.pt_mw);
        detail::read_key(pt, "phys.noise_dbm", noise_dbm);
        detail::read_key(pt, "phys.pt_dbm", pt_dbm);
        s.phys.sigma2_mw = dbm_to_mw(noise_dbm);
        s.phys.pt_mw = dbm_to_mw(pt_dbm);
        detail::read_key(pt, "qos.r_min", cfg.r_min);
        detail::read_key(pt, "rng.seed", cfg.seed);
        detail::read_key(pt, "channel.nlos", cfg.channel.include_nlos);
        detail::read_key(pt, "channel.attenuation", cfg.channel.include_cable_attenuation);

        if (!(cfg.r_min >= 0.0))
            throw ConfigError("qos.r_min must be >= 0");
        s.validate();
        return cfg;
    }

    inline SystemConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        return parse_config(in);
    }
}

#endif
