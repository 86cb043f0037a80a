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

// lcxsim: command-line driver. Exit codes: 0 success, 1 runtime failure,
// 2 bad configuration or arguments, 3 every optimized run hit an infeasible QoS target.

#include <lcx/lcx.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace
{
    using namespace lcx;
    using namespace lcx::experiments;

    constexpr int exit_config = 2;
    constexpr int exit_infeasible = 3;

    struct CommonArgs
    {
        std::string config;
        std::optional<std::uint64_t> seed;
        std::string out;
    };

    SystemConfig resolve(const CommonArgs &a)
    {
        SystemConfig cfg = a.config.empty() ? SystemConfig{} : load_config(a.config);
        if (a.seed)
            cfg.seed = *a.seed;
        return cfg;
    }

    /// Opens --out, or falls back to stdout.
    class Sink
    {
    public:
        explicit Sink(const std::string &path)
        {
            if (!path.empty())
            {
                file_ = std::make_unique<std::ofstream>(path);
                if (!*file_)
                    throw ConfigError("cannot write '" + path + "'");
            }
        }
        std::ostream &os() { return file_ ? *file_ : std::cout; }

    private:
        std::unique_ptr<std::ofstream> file_;
    };

    std::vector<Benchmark> parse_benchmarks(const std::vector<std::string> &names)
    {
        if (names.empty())
            return {all_benchmarks.begin(), all_benchmarks.end()};
        std::vector<Benchmark> out;
        for (const auto &n : names)
            out.push_back(parse_benchmark(n));
        return out;
    }

    void add_common(CLI::App *cmd, CommonArgs &a)
    {
        cmd->add_option("--config", a.config, "INI configuration file");
        cmd->add_option("--seed", a.seed, "base RNG seed (overrides [rng] seed)");
        cmd->add_option("--out", a.out, "CSV output path (default stdout)");
    }

    void write_to(const std::string &path, const std::function<void(std::ostream &)> &fn)
    {
        if (path.empty())
            return;
        std::ofstream f(path);
        if (!f)
            throw ConfigError("cannot write '" + path + "'");
        fn(f);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"LCX pinching-antenna downlink simulator"};
    app.require_subcommand(1);

    CommonArgs trial_args;
    std::vector<std::string> trial_bench;
    std::string game_trace, sca_trace, channel_dump;
    auto *trial = app.add_subcommand("trial", "one scenario draw, per-user rates");
    add_common(trial, trial_args);
    trial->add_option("--benchmarks", trial_bench, "benchmarks to run")->delimiter(',');
    trial->add_option("--game-trace", game_trace, "CSV of the per-pass sum rate of the coalition game");
    trial->add_option("--sca-trace", sca_trace, "CSV of the power-allocation iterations");
    trial->add_option("--channels", channel_dump, "CSV of the composite channel coefficients");

    CommonArgs sweep_args;
    std::vector<std::string> sweep_bench;
    std::string sweep_var = "pt_dbm", gnuplot;
    std::vector<double> sweep_values;
    std::size_t sweep_trials = 500;
    auto *sweep = app.add_subcommand("sweep", "Monte-Carlo sweep of one parameter");
    add_common(sweep, sweep_args);
    sweep->add_option("--benchmarks", sweep_bench, "benchmarks to run")->delimiter(',');
    sweep->add_option("--var", sweep_var, "pt_dbm, r_min, n_users, height, cables or slots");
    sweep->add_option("--values", sweep_values, "comma-separated increasing values")->delimiter(',')->required();
    sweep->add_option("--trials", sweep_trials, "trials per value");
    sweep->add_option("--gnuplot", gnuplot, "also write a gnuplot script here");

    CommonArgs fig_args;
    std::size_t fig_draws = 100;
    auto *fig3 = app.add_subcommand("fig3", "single-user rate against position for three channel models");
    add_common(fig3, fig_args);
    fig3->add_option("--trials", fig_draws, "scatterer draws averaged per position");

    CommonArgs prop_args;
    std::size_t prop_trials = 100;
    auto *prop = app.add_subcommand("prop-check", "analytic LCX-versus-fixed and sin-model conditions");
    add_common(prop, prop_args);
    prop->add_option("--trials", prop_trials, "random user drops for the sin-model check");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_config;
    }

    try
    {
        if (*trial)
        {
            const SystemConfig cfg = resolve(trial_args);
            const auto benches = parse_benchmarks(trial_bench);
            const TrialOutcome o = run_trial(cfg, cfg.seed, benches);
            Sink sink(trial_args.out);
            write_rate_csv_header(sink.os());
            for (auto b : benches)
                write_rate_csv_rows(sink.os(), 0, to_string(b), o.report(b));
            if (o.game)
                write_to(game_trace, [&](std::ostream &os) { game::write_game_trace_csv(os, o.game->trace); });
            if (o.sca)
                write_to(sca_trace, [&](std::ostream &os) { power::write_sca_trace_csv(os, *o.sca); });
            write_to(channel_dump, [&](std::ostream &os) {
                const Scenario sc = build_scenario(cfg.scenario, cfg.seed);
                write_channel_csv(os, compose_channels(sc, cfg.channel));
            });
            if (o.has(Benchmark::lcx_optimized) && o.report(Benchmark::lcx_optimized).qos_infeasible)
            {
                std::cerr << "QoS target infeasible; optimized rates use the equal split\n";
                return exit_infeasible;
            }
        }
        else if (*sweep)
        {
            const SystemConfig cfg = resolve(sweep_args);
            SweepSpec spec;
            spec.variable = parse_variable(sweep_var);
            spec.values = sweep_values;
            spec.trials = sweep_trials;
            spec.seed = cfg.seed;
            spec.benchmarks = parse_benchmarks(sweep_bench);
            const SweepResult r = run_sweep(spec, cfg);
            Sink sink(sweep_args.out);
            write_sweep_csv(sink.os(), r);
            write_to(gnuplot, [&](std::ostream &os) {
                write_gnuplot_script(os, sweep_args.out.empty() ? "sweep.csv" : sweep_args.out, r);
            });
            bool any_opt = false, all_infeasible = true;
            for (const auto &p : r.points)
                if (p.benchmark == Benchmark::lcx_optimized)
                {
                    any_opt = true;
                    all_infeasible = all_infeasible && p.infeasible_trials == p.trials;
                }
            if (any_opt && all_infeasible)
            {
                std::cerr << "QoS target infeasible in every optimized trial\n";
                return exit_infeasible;
            }
        }
        else if (*fig3)
        {
            const SystemConfig cfg = resolve(fig_args);
            if (fig_draws < 1)
                throw ConfigError("--trials must be >= 1");
            const auto rows = fig3_experiment(cfg, fig3_positions(cfg.scenario), fig_draws, cfg.seed);
            Sink sink(fig_args.out);
            write_fig3_csv(sink.os(), rows);
        }
        else if (*prop)
        {
            const SystemConfig cfg = resolve(prop_args);
            const auto &sc_cfg = cfg.scenario;
            const auto &ph = sc_cfg.phys;
            const auto g = analysis::summarize(sc_cfg);
            const auto dom = analysis::dominance_condition(g);
            const auto gap = analysis::gap_lower_bound(g, ph, ph.pt_mw);
            Sink sink(prop_args.out);
            auto &os = sink.os();
            os << "check,trial,holds,lhs,rhs,extra\n";
            os << "dominance,0," << dom.holds << ',' << format_double(dom.log_lhs) << ','
               << format_double(dom.log_rhs) << ',' << format_double(gap.bits) << '\n';
            os << "worst_cell_vs_mean_fixed,0,"
               << (analysis::worst_cell_lcx_rate(g, ph.pt_mw, ph) >=
                   analysis::fixed_rate_rect_mean(sc_cfg.dx, sc_cfg.dy, sc_cfg.height, ph.pt_mw, ph))
               << ',' << format_double(analysis::worst_cell_lcx_rate(g, ph.pt_mw, ph)) << ','
               << format_double(analysis::fixed_rate_rect_mean(sc_cfg.dx, sc_cfg.dy, sc_cfg.height, ph.pt_mw, ph))
               << ',' << gap.high_snr << '\n';
            if (sc_cfg.cables >= 2)
                for (std::size_t t = 0; t < prop_trials; ++t)
                {
                    const Scenario sc = build_scenario(sc_cfg, derive_seed(cfg.seed, t));
                    const std::size_t k = game::nearest_cable(sc, 0);
                    const std::size_t kp = (k + 1) % sc.cables();
                    const auto c = analysis::sin_model_condition(sc, k, game::nearest_slot(sc, k, 0), kp,
                                                                 game::nearest_slot(sc, kp, 0), 0, ph.pt_mw);
                    os << "sin_model," << t << ',' << c.holds << ',' << format_double(c.lhs_sin2) << ','
                       << format_double(c.rhs) << ',' << format_double(c.gamma) << '\n';
                }
        }
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
