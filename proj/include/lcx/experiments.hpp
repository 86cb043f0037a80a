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

#ifndef LCX_EXPERIMENTS_HPP
#define LCX_EXPERIMENTS_HPP

#include "analysis.hpp"
#include "game.hpp"
#include "power.hpp"

#include <array>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <istream>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <thread>

namespace lcx::experiments
{
    struct SystemConfig
    {
        ScenarioConfig scenario;
        double r_min = 0.1; // bits/s/Hz
        std::uint64_t seed = 1;
        ChannelFlags channel;
        game::GameLimits game;
        power::ScaOptions sca;
    };

    enum class Benchmark
    {
        lcx_optimized,
        lcx_initial,
        fixed_antenna
    };

    inline constexpr std::array all_benchmarks{Benchmark::lcx_optimized, Benchmark::lcx_initial,
                                               Benchmark::fixed_antenna};

    inline std::string_view to_string(Benchmark b)
    {
        switch (b)
        {
        case Benchmark::lcx_optimized:
            return "lcx_optimized";
        case Benchmark::lcx_initial:
            return "lcx_initial";
        case Benchmark::fixed_antenna:
            return "fixed_antenna";
        }
        return "?";
    }

    inline Benchmark parse_benchmark(std::string_view s)
    {
        for (auto b : all_benchmarks)
            if (to_string(b) == s)
                return b;
        throw ConfigError("unknown benchmark '" + std::string(s) + "'");
    }

    /// Every user served from a single antenna at (0, 0, d) with the free-space
    /// law |h|^2 = eta^2 / dist^2. Power is split equally and the other users'
    /// signals act as interference, as on an LCX cable.
    inline RateReport fixed_antenna_benchmark(const Scenario &sc, double r_min = 0.0)
    {
        const auto &ph = sc.phys();
        const Vec3 bs(0.0, 0.0, sc.height());
        const std::size_t N = sc.users();
        const double pn = ph.pt_mw / static_cast<double>(N);
        const double eta2 = ph.eta() * ph.eta();
        RateReport rep;
        rep.serving_cables = 1;
        for (std::size_t n = 0; n < N; ++n)
        {
            const double h2 = eta2 / (sc.user(n) - bs).squaredNorm();
            const double signal = pn * h2;
            const double interf = pn * h2 * static_cast<double>(N - 1);
            const double r = std::log2(1.0 + signal / (interf + ph.sigma2_mw));
            rep.rate.push_back(r);
            rep.qos_ok.push_back(r >= r_min - qos_tolerance);
            rep.sum_rate += r;
        }
        return rep;
    }

    struct TrialOutcome
    {
        std::array<std::optional<RateReport>, 3> reports; // indexed by Benchmark
        std::optional<game::GameResult> game;
        std::optional<power::ScaResult> sca;

        const RateReport &report(Benchmark b) const { return reports[static_cast<std::size_t>(b)].value(); }
        bool has(Benchmark b) const { return reports[static_cast<std::size_t>(b)].has_value(); }
    };

    /// One scenario draw evaluated under every requested benchmark; all benchmarks
    /// share the same user and scatterer realization.
    inline TrialOutcome run_trial(const SystemConfig &cfg, std::uint64_t seed,
                                  std::span<const Benchmark> benchmarks = all_benchmarks)
    {
        const Scenario sc = build_scenario(cfg.scenario, seed);
        const auto &ph = sc.phys();
        auto wanted = [&](Benchmark b) { return std::find(benchmarks.begin(), benchmarks.end(), b) != benchmarks.end(); };

        TrialOutcome out;
        std::optional<ChannelSet> cs;
        if (wanted(Benchmark::lcx_initial) || wanted(Benchmark::lcx_optimized))
            cs = compose_channels(sc, cfg.channel);

        if (wanted(Benchmark::lcx_initial))
        {
            const AssignmentState st = game::init_structure(sc).to_state();
            out.reports[static_cast<std::size_t>(Benchmark::lcx_initial)] =
                evaluate_rates(*cs, st, equal_split(st), ph, cfg.r_min);
        }
        if (wanted(Benchmark::lcx_optimized))
        {
            out.game = game::run_coalition_game(sc, *cs, cfg.game);
            const AssignmentState st = out.game->structure.to_state();
            const PowerAllocation p0 = equal_split(st);
            const power::DcModel model = power::build_dc_model(*cs, st, ph, cfg.r_min);
            RateReport rep;
            try
            {
                out.sca = power::run_sca(model, p0, cfg.sca);
                rep = evaluate_rates(*cs, st, out.sca->final.p, ph, cfg.r_min);
            }
            catch (const power::InfeasibleQos &)
            {
                rep = evaluate_rates(*cs, st, p0, ph, cfg.r_min);
                rep.qos_infeasible = true;
            }
            out.reports[static_cast<std::size_t>(Benchmark::lcx_optimized)] = std::move(rep);
        }
        if (wanted(Benchmark::fixed_antenna))
            out.reports[static_cast<std::size_t>(Benchmark::fixed_antenna)] = fixed_antenna_benchmark(sc, cfg.r_min);
        return out;
    }

    /// Worker count from LCX_THREADS, else the hardware concurrency.
    inline std::size_t thread_count()
    {
        if (const char *env = std::getenv("LCX_THREADS"))
        {
            std::size_t v = 0;
            const std::string_view s(env);
            if (std::from_chars(s.data(), s.data() + s.size(), v).ec == std::errc{} && v > 0)
                return v;
        }
        return std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }

    /// Runs body(i) for i in [0, count) on a pool of threads. Results must be written
    /// to per-index slots; the first exception is rethrown after the join.
    inline void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body,
                             std::size_t threads = thread_count())
    {
        threads = std::min(threads, count);
        if (threads <= 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                body(i);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < threads; ++w)
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < count; i = next++)
                    {
                        try
                        {
                            body(i);
                        }
                        catch (...)
                        {
                            std::lock_guard lock(error_mutex);
                            if (!error)
                                error = std::current_exception();
                        }
                    }
                });
        }
        if (error)
            std::rethrow_exception(error);
    }

    enum class SweepVariable
    {
        pt_dbm,
        r_min,
        n_users,
        height,
        cables,
        slots
    };

    inline std::string_view to_string(SweepVariable v)
    {
        switch (v)
        {
        case SweepVariable::pt_dbm:
            return "pt_dbm";
        case SweepVariable::r_min:
            return "r_min";
        case SweepVariable::n_users:
            return "n_users";
        case SweepVariable::height:
            return "height";
        case SweepVariable::cables:
            return "cables";
        case SweepVariable::slots:
            return "slots";
        }
        return "?";
    }

    inline SweepVariable parse_variable(std::string_view s)
    {
        for (auto v : {SweepVariable::pt_dbm, SweepVariable::r_min, SweepVariable::n_users, SweepVariable::height,
                       SweepVariable::cables, SweepVariable::slots})
            if (to_string(v) == s)
                return v;
        throw ConfigError("unknown sweep variable '" + std::string(s) + "'");
    }

    struct SweepSpec
    {
        SweepVariable variable = SweepVariable::pt_dbm;
        std::vector<double> values;
        std::size_t trials = 500;
        std::uint64_t seed = 1;
        std::vector<Benchmark> benchmarks{all_benchmarks.begin(), all_benchmarks.end()};

        void validate() const
        {
            if (trials < 1)
                throw ConfigError("trials must be >= 1");
            if (values.empty())
                throw ConfigError("sweep needs at least one value");
            for (std::size_t i = 1; i < values.size(); ++i)
                if (!(values[i] > values[i - 1]))
                    throw ConfigError("sweep values must be strictly increasing");
            if (benchmarks.empty())
                throw ConfigError("sweep needs at least one benchmark");
        }
    };

    inline SystemConfig apply_sweep_value(SystemConfig cfg, SweepVariable var, double v)
    {
        auto as_count = [](double x) {
            if (!(x >= 0.0) || x != std::floor(x))
                throw ConfigError("count-valued sweep variable needs whole numbers");
            return static_cast<std::size_t>(x);
        };
        switch (var)
        {
        case SweepVariable::pt_dbm:
            cfg.scenario.phys.pt_mw = dbm_to_mw(v);
            break;
        case SweepVariable::r_min:
            cfg.r_min = v;
            break;
        case SweepVariable::n_users:
            cfg.scenario.users = as_count(v);
            break;
        case SweepVariable::height:
            cfg.scenario.height = v;
            break;
        case SweepVariable::cables:
            cfg.scenario.cables = as_count(v);
            break;
        case SweepVariable::slots:
            cfg.scenario.slots = as_count(v);
            break;
        }
        cfg.scenario.validate();
        return cfg;
    }

    struct SweepPoint
    {
        Benchmark benchmark = Benchmark::lcx_optimized;
        double value = 0.0;
        std::size_t trials = 0;
        double mean_sum_rate = 0.0;
        double ci_half_width = std::numeric_limits<double>::quiet_NaN(); // NaN when trials < 2
        std::size_t outage_count = 0;
        std::size_t user_trials = 0;
        std::size_t infeasible_trials = 0;
        std::vector<double> sum_rates; // per trial, in trial order

        double outage_probability() const
        {
            return static_cast<double>(outage_count) / static_cast<double>(user_trials);
        }
    };

    struct SweepResult
    {
        SweepVariable variable;
        std::vector<SweepPoint> points; // value-major, benchmarks in spec order

        const SweepPoint &at(Benchmark b, double value) const
        {
            for (const auto &p : points)
                if (p.benchmark == b && p.value == value)
                    return p;
            throw std::out_of_range("no sweep point for that benchmark/value");
        }
    };

    /// Trial t of every sweep value uses the scenario seed derive_seed(spec.seed, t),
    /// so the values are compared on common random draws where the geometry allows.
    inline SweepResult run_sweep(const SweepSpec &spec, const SystemConfig &base)
    {
        spec.validate();
        SweepResult res{spec.variable, {}};
        for (double v : spec.values)
        {
            const SystemConfig cfg = apply_sweep_value(base, spec.variable, v);
            std::vector<TrialOutcome> outcomes(spec.trials);
            parallel_for(spec.trials, [&](std::size_t t) {
                outcomes[t] = run_trial(cfg, derive_seed(spec.seed, t), spec.benchmarks);
            });
            for (auto b : spec.benchmarks)
            {
                SweepPoint pt;
                pt.benchmark = b;
                pt.value = v;
                pt.trials = spec.trials;
                double sum = 0.0, sumsq = 0.0;
                for (const auto &o : outcomes)
                {
                    const RateReport &r = o.report(b);
                    pt.sum_rates.push_back(r.sum_rate);
                    sum += r.sum_rate;
                    sumsq += r.sum_rate * r.sum_rate;
                    pt.outage_count += r.outages();
                    pt.user_trials += r.rate.size();
                    pt.infeasible_trials += r.qos_infeasible;
                }
                const double n = static_cast<double>(spec.trials);
                pt.mean_sum_rate = sum / n;
                if (spec.trials > 1)
                {
                    const double var = std::max(0.0, (sumsq - n * pt.mean_sum_rate * pt.mean_sum_rate) / (n - 1.0));
                    pt.ci_half_width = 1.959963984540054 * std::sqrt(var / n);
                }
                res.points.push_back(std::move(pt));
            }
        }
        return res;
    }

    // Tidy CSV: one row per (benchmark, value, metric). Numbers use the shortest
    // representation that parses back to the same double.

    inline std::string format_double(double v)
    {
        if (std::isnan(v))
            return "nan";
        char buf[64];
        const auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr);
    }

    inline double parse_double(std::string_view s)
    {
        if (s == "nan")
            return std::numeric_limits<double>::quiet_NaN();
        double v = 0.0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
            throw std::invalid_argument("bad number '" + std::string(s) + "'");
        return v;
    }

    struct SweepCsvRow
    {
        std::string benchmark;
        std::string variable;
        double value;
        std::string metric;
        double estimate;
        bool operator==(const SweepCsvRow &o) const
        {
            auto same = [](double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; };
            return benchmark == o.benchmark && variable == o.variable && same(value, o.value) && metric == o.metric &&
                   same(estimate, o.estimate);
        }
    };

    inline std::vector<SweepCsvRow> sweep_rows(const SweepResult &r)
    {
        std::vector<SweepCsvRow> rows;
        const std::string var(to_string(r.variable));
        for (const auto &p : r.points)
        {
            const std::string b(to_string(p.benchmark));
            rows.push_back({b, var, p.value, "mean_sum_rate", p.mean_sum_rate});
            rows.push_back({b, var, p.value, "ci_half_width", p.ci_half_width});
            rows.push_back({b, var, p.value, "outage_probability", p.outage_probability()});
            rows.push_back({b, var, p.value, "outage_count", static_cast<double>(p.outage_count)});
            rows.push_back({b, var, p.value, "user_trials", static_cast<double>(p.user_trials)});
            rows.push_back({b, var, p.value, "infeasible_trials", static_cast<double>(p.infeasible_trials)});
            rows.push_back({b, var, p.value, "trials", static_cast<double>(p.trials)});
        }
        return rows;
    }

    inline void write_sweep_csv(std::ostream &os, const SweepResult &r)
    {
        os << "benchmark,variable,value,metric,estimate\n";
        for (const auto &row : sweep_rows(r))
            os << row.benchmark << ',' << row.variable << ',' << format_double(row.value) << ',' << row.metric << ','
               << format_double(row.estimate) << '\n';
    }

    inline std::vector<SweepCsvRow> read_sweep_csv(std::istream &is)
    {
        std::string line;
        if (!std::getline(is, line) || line != "benchmark,variable,value,metric,estimate")
            throw std::invalid_argument("missing sweep CSV header");
        std::vector<SweepCsvRow> rows;
        while (std::getline(is, line))
        {
            if (line.empty())
                continue;
            std::vector<std::string> f;
            std::stringstream ss(line);
            for (std::string cell; std::getline(ss, cell, ',');)
                f.push_back(cell);
            if (f.size() != 5)
                throw std::invalid_argument("sweep CSV row needs 5 fields: " + line);
            rows.push_back({f[0], f[1], parse_double(f[2]), f[3], parse_double(f[4])});
        }
        return rows;
    }

    /// gnuplot script plotting mean sum rate and outage against the swept variable.
    inline void write_gnuplot_script(std::ostream &os, const std::string &csv_path, const SweepResult &r)
    {
        const std::string var(to_string(r.variable));
        os << "set datafile separator ','\n"
           << "set key left top\n"
           << "set xlabel '" << var << "'\n"
           << "set multiplot layout 1,2\n";
        std::vector<Benchmark> seen;
        for (const auto &p : r.points)
            if (std::find(seen.begin(), seen.end(), p.benchmark) == seen.end())
                seen.push_back(p.benchmark);
        for (const std::string metric : {"mean_sum_rate", "outage_probability"})
        {
            os << "set ylabel '" << metric << "'\nplot ";
            for (std::size_t i = 0; i < seen.size(); ++i)
            {
                const std::string b(to_string(seen[i]));
                os << (i ? ", " : "") << "'< grep \"^" << b << ",.*," << metric << ",\" " << csv_path
                   << "' using 3:5 with linespoints title '" << b << "'";
            }
            os << '\n';
        }
        os << "unset multiplot\n";
    }

    struct Fig3Row
    {
        double x = 0.0, y = 0.0;
        double distance = 0.0;    // user to activated slot, m
        double full = 0.0;        // LoS + NLoS with cable attenuation
        double los_only = 0.0;    // NLoS removed, attenuation kept
        double no_atten = 0.0;    // LoS + NLoS, attenuation removed
    };

    /// Default evaluation grid: x every metre along the region, y every 5 m.
    inline std::vector<Vec3> fig3_positions(const ScenarioConfig &c)
    {
        std::vector<Vec3> pos;
        const int nx = static_cast<int>(std::floor(c.dx)), ny = static_cast<int>(std::floor(c.dy / 5.0));
        for (int iy = 0; iy <= ny; ++iy)
            for (int ix = 0; ix <= nx; ++ix)
                pos.emplace_back(-c.dx / 2.0 + c.dx * ix / nx, -c.dy / 2.0 + c.dy * iy / ny, 0.0);
        return pos;
    }

    /// Single-user rate with the closest slot active under three channel models,
    /// averaged over `draws` scatterer realizations. The configuration is forced to
    /// one cable and one user.
    inline std::vector<Fig3Row> fig3_experiment(const SystemConfig &cfg, const std::vector<Vec3> &positions,
                                                std::size_t draws, std::uint64_t seed)
    {
        ScenarioConfig sc_cfg = cfg.scenario;
        sc_cfg.cables = 1;
        sc_cfg.users = 1;
        sc_cfg.validate();
        std::vector<Fig3Row> rows(positions.size());
        for (std::size_t i = 0; i < positions.size(); ++i)
            rows[i].x = positions[i].x(), rows[i].y = positions[i].y();

        for (std::size_t dr = 0; dr < draws; ++dr)
        {
            const Scenario drawn = build_scenario(sc_cfg, derive_seed(seed, dr));
            for (std::size_t i = 0; i < positions.size(); ++i)
            {
                const Scenario sc(sc_cfg, {positions[i]}, drawn.scatterers());
                const std::size_t m = game::nearest_slot(sc, 0, 0);
                AssignmentState st(1, sc.slots(), 1);
                st.alpha(0, 0) = 1;
                st.beta(0, m) = 1;
                const PowerAllocation p = equal_split(st);
                auto rate_with = [&](ChannelFlags f) { return user_rate(compose_channels(sc, f), st, p, 0, sc.phys()); };
                rows[i].distance = (sc.user(0) - sc.slot(0, m)).norm();
                rows[i].full += rate_with({true, true});
                rows[i].los_only += rate_with({false, true});
                rows[i].no_atten += rate_with({true, false});
            }
        }
        for (auto &r : rows)
        {
            r.full /= static_cast<double>(draws);
            r.los_only /= static_cast<double>(draws);
            r.no_atten /= static_cast<double>(draws);
        }
        return rows;
    }

    inline void write_fig3_csv(std::ostream &os, const std::vector<Fig3Row> &rows)
    {
        os << "x,y,distance,full,los_only,no_attenuation\n";
        for (const auto &r : rows)
            os << format_double(r.x) << ',' << format_double(r.y) << ',' << format_double(r.distance) << ','
               << format_double(r.full) << ',' << format_double(r.los_only) << ',' << format_double(r.no_atten)
               << '\n';
    }
}

#endif
