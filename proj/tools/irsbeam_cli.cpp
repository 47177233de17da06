// SPDX-License-Identifier: Apache-2.0
//
// irsbeam - joint active/passive beamforming for distributed-IRS mmWave downlink
// Copyright (C) 2026 irsbeam contributors
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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irsbeam/errors.hpp"
#include "irsbeam/harness.hpp"

namespace {

using namespace irsbeam;

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> trials;
    std::string out_path;
};

void add_common(CLI::App *cmd, CommonArgs &args) {
    cmd->add_option("--config", args.config_path, "JSON scenario config (defaults when absent)");
    cmd->add_option("--seed", args.seed, "override the config seed");
    cmd->add_option("--trials", args.trials, "override the trial count");
    cmd->add_option("--out", args.out_path, "output CSV path");
}

SystemConfig resolve_config(const CommonArgs &args) {
    SystemConfig cfg =
        args.config_path.empty() ? SystemConfig{} : harness::load_config(args.config_path);
    if (args.seed)
        cfg.seed = *args.seed;
    if (args.trials)
        cfg.trials = *args.trials;
    cfg.validate();
    return cfg;
}

int cmd_run(const CommonArgs &args) {
    const SystemConfig cfg = resolve_config(args);
    engine::SolveOptions opts;
    const auto outcomes = harness::run_trials(cfg, opts, cfg.trials, cfg.seed);

    std::vector<double> cont, quant, base;
    unsigned p_failed = 0, b_failed = 0;
    for (const auto &o : outcomes) {
        if (o.proposed_failed) {
            ++p_failed;
        } else {
            cont.push_back(o.rate_continuous);
            if (o.rate_quantized)
                quant.push_back(*o.rate_quantized);
        }
        if (o.baseline_failed)
            ++b_failed;
        else
            base.push_back(o.rate_baseline);
    }
    if (cont.empty())
        throw numeric_failure("run: all proposed trials failed");

    const auto mean = [](const std::vector<double> &v) {
        double s = 0.0;
        for (double x : v)
            s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    std::cout << "trials: " << cfg.trials << " (proposed failed " << p_failed
              << ", baseline failed " << b_failed << ")\n";
    std::cout << "mean rate proposed (continuous): " << mean(cont) << " bits/s/Hz\n";
    if (!quant.empty())
        std::cout << "mean rate proposed (quantized):  " << mean(quant) << " bits/s/Hz\n";
    std::cout << "mean rate baseline (ZF+random):  " << mean(base) << " bits/s/Hz\n";

    if (!args.out_path.empty()) {
        // single-point CSV in the sweep schema
        harness::SweepSpec spec{"k_users", {static_cast<double>(cfg.k_users)}};
        harness::emit_csv(harness::run_sweep(cfg, spec), args.out_path);
        std::cout << "wrote " << args.out_path << "\n";
    }
    return 0;
}

int cmd_sweep(const CommonArgs &args, const std::string &param,
              const std::vector<double> &values) {
    const SystemConfig cfg = resolve_config(args);
    const harness::SweepResult result = harness::run_sweep(cfg, {param, values});
    if (args.out_path.empty()) {
        std::cout << harness::format_csv(result);
    } else {
        harness::emit_csv(result, args.out_path);
        std::cout << "wrote " << args.out_path << "\n";
    }
    return 0;
}

std::vector<harness::ConvergenceCase> parse_cases(const std::vector<std::string> &specs) {
    std::vector<harness::ConvergenceCase> cases;
    for (const std::string &s : specs) {
        const auto colon = s.find(':');
        if (colon == std::string::npos)
            throw config_error("convergence case must be k_users:m_el, got '" + s + "'");
        try {
            cases.push_back({static_cast<arma::uword>(std::stoul(s.substr(0, colon))),
                             static_cast<arma::uword>(std::stoul(s.substr(colon + 1)))});
        } catch (const std::exception &) {
            throw config_error("convergence case must be k_users:m_el, got '" + s + "'");
        }
    }
    return cases;
}

int cmd_convergence(const CommonArgs &args, const std::vector<std::string> &case_specs) {
    const SystemConfig cfg = resolve_config(args);
    const auto cases = parse_cases(case_specs);
    const harness::ConvergenceResult result = harness::run_convergence(cfg, cases);
    if (args.out_path.empty()) {
        std::cout << harness::format_convergence_csv(result);
    } else {
        harness::emit_convergence_csv(result, args.out_path);
        std::cout << "wrote " << args.out_path << "\n";
    }
    return 0;
}

bool report(const char *name, bool ok) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
    return ok;
}

arma::cx_mat random_precoder(arma::uword n, arma::uword k, double total_power, Rng &rng) {
    arma::cx_mat p(n, k);
    for (arma::uword i = 0; i < p.n_elem; ++i)
        p[i] = rng.cgauss(1.0);
    return p * std::sqrt(total_power / arma::accu(arma::square(arma::abs(p))));
}

// Quick invariant battery over small random instances.
int cmd_selftest() {
    bool all_ok = true;
    SystemConfig cfg;
    cfg.n_bs = 8;
    cfg.m_az = 4;
    cfg.m_el = 1;
    cfg.trials = 3;
    const double noise_w = cfg.noise_watts();
    const objective::Weights w{cfg.weight_vector()};

    {
        bool ok = true;
        for (unsigned s = 0; s < 20; ++s) {
            Rng rng(1000 + s);
            const auto ch = channel::synth_scenario(cfg, rng);
            objective::BeamformerState st;
            st.theta = arma::reshape(
                pbf::random_phases(cfg.array_geometry().m_tot(), cfg.codebook, rng),
                cfg.array_geometry().m(), cfg.g_irs);
            st.p = random_precoder(cfg.n_bs, cfg.k_users, cfg.p_max_watts(), rng);
            st.alpha = objective::update_alpha(ch, st, noise_w);
            const double f1 = objective::weighted_sum_rate(ch, st, w, noise_w);
            const double f2 = objective::surrogate_f2(ch, st, w, noise_w);
            ok = ok && std::abs(f1 - f2) <= 1e-10 * std::abs(f1);
        }
        all_ok = report("rate surrogate tight at alpha = sinr", ok) && all_ok;
    }
    {
        bool ok = true;
        for (unsigned s = 0; s < 10; ++s) {
            Rng rng(2000 + s);
            const auto ch = channel::synth_scenario(cfg, rng);
            Rng rng2(3000 + s);
            const auto res = engine::run_wsm(cfg, ch, {}, rng2);
            const auto &f1 = res.trace.f1_per_iter;
            for (std::size_t i = 1; i < f1.size(); ++i)
                ok = ok && f1[i] >= f1[i - 1] - 1e-8;
        }
        all_ok = report("sum rate non-decreasing across iterations", ok) && all_ok;
    }
    {
        Rng rng(42);
        const auto ch = channel::synth_scenario(cfg, rng);
        Rng a(7), b(7);
        const auto ra = engine::run_wsm(cfg, ch, {}, a);
        const auto rb = engine::run_wsm(cfg, ch, {}, b);
        all_ok = report("solver deterministic for a fixed seed",
                        ra.trace.final_rate_continuous == rb.trace.final_rate_continuous) &&
                 all_ok;
    }
    {
        Rng rng(9);
        const auto ch = channel::synth_scenario(cfg, rng);
        Rng s1(11);
        const auto res = engine::run_wsm(cfg, ch, {}, s1);
        const arma::cx_vec tv = arma::vectorise(res.state.theta);
        bool ok = true;
        for (arma::uword i = 0; i < tv.n_elem; ++i)
            ok = ok && std::abs(std::abs(tv[i]) - 1.0) <= 1e-8;
        all_ok = report("converged phases unit modulus", ok) && all_ok;
    }
    {
        harness::SweepSpec spec{"p_max_dbm", {20.0, 30.0}};
        const auto r1 = harness::format_csv(harness::run_sweep(cfg, spec));
        const auto r2 = harness::format_csv(harness::run_sweep(cfg, spec));
        all_ok = report("sweep output reproducible", r1 == r2) && all_ok;
    }
    std::cout << (all_ok ? "selftest OK\n" : "selftest FAILED\n");
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"distributed-IRS mmWave downlink beamforming simulator"};
    app.require_subcommand(1);

    CommonArgs run_args, sweep_args, conv_args;
    std::string sweep_param;
    std::vector<double> sweep_values;
    std::vector<std::string> conv_cases{"2:1", "2:2", "4:2"};

    CLI::App *run_cmd = app.add_subcommand("run", "solve one scenario over Monte-Carlo trials");
    add_common(run_cmd, run_args);

    CLI::App *sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo sweep over one parameter");
    add_common(sweep_cmd, sweep_args);
    sweep_cmd->add_option("--param", sweep_param,
                          "parameter: m_el, m_az, bits, p_max_dbm, k_users, trials")
        ->required();
    sweep_cmd->add_option("--values", sweep_values, "swept values")->required()->delimiter(',');

    CLI::App *conv_cmd =
        app.add_subcommand("convergence", "per-iteration mean rate for (K, M_el) cases");
    add_common(conv_cmd, conv_args);
    conv_cmd->add_option("--cases", conv_cases, "cases as k_users:m_el")->delimiter(',');

    app.add_subcommand("selftest", "run the quick invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed())
            return cmd_run(run_args);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_args, sweep_param, sweep_values);
        if (conv_cmd->parsed())
            return cmd_convergence(conv_args, conv_cases);
        return cmd_selftest();
    } catch (const config_error &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const io_error &e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const numeric_failure &e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
